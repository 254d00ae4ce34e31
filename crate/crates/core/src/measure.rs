//! Observables of ψ and of its Majorana pair, and their CSV output.

use std::path::Path;

use serde::Serialize;

use crate::dynamics::{Backend, EquationKind};
use crate::error::{Error, Result};
use crate::fields::{
    decompose_majorana, inner, norm, to_momentum, Grid, MajoranaPair, Space, SpinorField,
};

/// Relative density at the domain edge above which `x_mean` is flagged.
pub const BOUNDARY_DENSITY_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub norm: f64,
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub x_mean: Vec<f64>,
    pub p_mean: Vec<f64>,
    /// Probability fraction in the first spinor component.
    pub pop_up: f64,
    /// `‖ψ − ψ_c‖ / ‖ψ‖`.
    pub majorana_defect: f64,
    /// `|Im ⟨ψ+, ψ−⟩|`.
    pub cross_inner_im: f64,
    /// Density at the periodic boundary is large enough to make `x_mean`
    /// ambiguous.
    pub boundary_warning: bool,
    /// ψ vanished; every normalised quantity is NaN.
    pub zero_norm: bool,
}

/// `|ψ1|² + |ψ2|²` per point.
pub fn density(field: &SpinorField) -> Result<Vec<f64>> {
    if field.space() != Space::Position {
        return Err(Error::Contract(
            "density requires a position-space field".into(),
        ));
    }
    Ok(field.values().iter().map(|s| s.norm_squared()).collect())
}

fn edge_points(grid: &Grid) -> Vec<usize> {
    (0..grid.total_points())
        .filter(|&p| {
            grid.unravel(p)
                .iter()
                .zip(grid.shape())
                .any(|(&j, &n)| j == 0 || j == n - 1)
        })
        .collect()
}

/// Evaluates every observable at time `t`. Without a pair, ψ is decomposed
/// on the spot.
pub fn observe(
    t: f64,
    field: &SpinorField,
    pair: Option<&MajoranaPair>,
) -> Result<ObservableRecord> {
    let rho = density(field)?;
    let grid = field.grid();
    let owned;
    let pair = match pair {
        Some(p) => p,
        None => {
            owned = decompose_majorana(field)?;
            &owned
        }
    };
    let total = norm(field);
    let norm_plus = norm(&pair.plus);
    let norm_minus = norm(&pair.minus);
    let cross_inner_im = inner(&pair.plus, &pair.minus)?.im.abs();
    let rho_max = rho.iter().copied().fold(0.0, f64::max);
    let boundary_warning = edge_points(grid)
        .iter()
        .any(|&p| rho[p] > BOUNDARY_DENSITY_FRACTION * rho_max);

    let sum: f64 = rho.iter().sum();
    if sum == 0.0 {
        return Ok(ObservableRecord {
            t,
            norm: total,
            norm_plus,
            norm_minus,
            x_mean: vec![f64::NAN; grid.dim()],
            p_mean: vec![f64::NAN; grid.dim()],
            pop_up: f64::NAN,
            majorana_defect: f64::NAN,
            cross_inner_im,
            boundary_warning: false,
            zero_norm: true,
        });
    }

    let coords = grid.point_coordinates();
    let x_mean = (0..grid.dim())
        .map(|a| coords.iter().zip(&rho).map(|(x, r)| x[a] * r).sum::<f64>() / sum)
        .collect();

    let rho_k: Vec<f64> = to_momentum(field)?
        .values()
        .iter()
        .map(|s| s.norm_squared())
        .collect();
    let sum_k: f64 = rho_k.iter().sum();
    let momenta = grid.mode_momenta();
    let p_mean = (0..grid.dim())
        .map(|a| {
            momenta
                .iter()
                .zip(&rho_k)
                .map(|(k, r)| k[a] * r)
                .sum::<f64>()
                / sum_k
        })
        .collect();

    let pop_up = field.values().iter().map(|s| s[0].norm_sqr()).sum::<f64>() / sum;
    let conj = field.charge_conjugate()?;
    let defect_sq: f64 = field
        .values()
        .iter()
        .zip(conj.values())
        .map(|(a, b)| (a - b).norm_squared())
        .sum();
    let defect = (defect_sq / sum).sqrt();

    Ok(ObservableRecord {
        t,
        norm: total,
        norm_plus,
        norm_minus,
        x_mean,
        p_mean,
        pop_up,
        majorana_defect: defect,
        cross_inner_im,
        boundary_warning,
        zero_norm: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesMetadata {
    pub equation: String,
    pub backend: String,
    pub grid: Grid,
    pub mass_plus: Option<f64>,
    pub mass_minus: Option<f64>,
}

impl SeriesMetadata {
    pub fn new(kind: &EquationKind, backend: Backend, grid: &Grid) -> Self {
        let masses = kind.split_masses();
        SeriesMetadata {
            equation: kind.label().to_string(),
            backend: backend.as_str().to_string(),
            grid: grid.clone(),
            mass_plus: masses.map(|m| m.1),
            mass_minus: masses.map(|m| m.2),
        }
    }
}

/// Time-ordered observable records of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    metadata: SeriesMetadata,
    records: Vec<ObservableRecord>,
}

impl ObservableSeries {
    pub fn new(metadata: SeriesMetadata) -> Self {
        ObservableSeries {
            metadata,
            records: Vec::new(),
        }
    }

    pub fn metadata(&self) -> &SeriesMetadata {
        &self.metadata
    }

    pub fn records(&self) -> &[ObservableRecord] {
        &self.records
    }

    pub fn push(&mut self, record: ObservableRecord) -> Result<()> {
        if record.x_mean.len() != self.metadata.grid.dim() {
            return Err(Error::Contract(
                "record dimension does not match the series grid".into(),
            ));
        }
        if let Some(last) = self.records.last() {
            if record.t <= last.t {
                return Err(Error::Contract(format!(
                    "record times must increase: {} after {}",
                    record.t, last.t
                )));
            }
        }
        self.records.push(record);
        Ok(())
    }

    /// One column, by series CSV header name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = series_header(self.metadata.grid.dim())
            .iter()
            .position(|h| h == name)?;
        Some(self.records.iter().map(|r| record_row(r)[idx]).collect())
    }
}

pub fn series_header(dim: usize) -> Vec<String> {
    let mut h = vec!["t", "norm", "norm_plus", "norm_minus", "x_mean"];
    if dim == 2 {
        h.push("y_mean");
    }
    h.push("p_mean");
    if dim == 2 {
        h.push("py_mean");
    }
    h.extend([
        "pop_up",
        "majorana_defect",
        "cross_inner_im",
        "boundary_warning",
    ]);
    h.into_iter().map(String::from).collect()
}

fn record_row(r: &ObservableRecord) -> Vec<f64> {
    let mut row = vec![r.t, r.norm, r.norm_plus, r.norm_minus];
    row.extend(&r.x_mean);
    row.extend(&r.p_mean);
    row.extend([
        r.pop_up,
        r.majorana_defect,
        r.cross_inner_im,
        if r.boundary_warning { 1.0 } else { 0.0 },
    ]);
    row
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

/// Shortest decimal that parses back to the same `f64`.
fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn series_to_csv(series: &ObservableSeries, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(series_header(series.metadata.grid.dim()))
        .map_err(|e| csv_io(path, e))?;
    for r in &series.records {
        let mut row: Vec<String> = record_row(r).into_iter().map(fmt_f64).collect();
        let last = row.len() - 1;
        row[last] = if r.boundary_warning { "1" } else { "0" }.to_string();
        w.write_record(&row).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes a position-space field as `x[,y],re1,im1,re2,im2`, row-major.
pub fn snapshot_to_csv(field: &SpinorField, path: &Path) -> Result<()> {
    if field.space() != Space::Position {
        return Err(Error::Contract(
            "snapshots are written in position space".into(),
        ));
    }
    let grid = field.grid();
    let mut w = csv_writer(path)?;
    let mut header: Vec<&str> = ["x", "y"][..grid.dim()].to_vec();
    header.extend(["re1", "im1", "re2", "im2"]);
    w.write_record(&header).map_err(|e| csv_io(path, e))?;
    for (x, s) in grid.point_coordinates().iter().zip(field.values()) {
        let mut row: Vec<String> = x.iter().map(|v| fmt_f64(*v)).collect();
        row.extend([s[0].re, s[0].im, s[1].re, s[1].im].map(fmt_f64));
        w.write_record(&row).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
