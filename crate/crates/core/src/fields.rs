//! Periodic grids, spinor fields, and the Majorana decomposition of states.
//!
//! Grid points are `x_j = −L/2 + j·L/n`, stored row-major (first axis
//! slowest). Momentum-space values are stored in FFT order, and the discrete
//! transform is unitary (`1/√n` per axis).

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::algebra::{c, conj2, Spinor2};
use crate::error::{Error, Result};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Periodic sampling lattice in one or two dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: Vec<usize>,
    length: Vec<f64>,
}

impl Grid {
    pub fn new(n: &[usize], length: &[f64]) -> Result<Grid> {
        make_grid(n.len(), n, length)
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.n
    }

    pub fn lengths(&self) -> &[f64] {
        &self.length
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.length[axis] / self.n[axis] as f64
    }

    pub fn total_points(&self) -> usize {
        self.n.iter().product()
    }

    /// Quadrature weight of one grid point, `Π dx`.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn coordinates(&self, axis: usize) -> Vec<f64> {
        let dx = self.spacing(axis);
        let half = 0.5 * self.length[axis];
        (0..self.n[axis]).map(|j| -half + j as f64 * dx).collect()
    }

    /// Signed lattice index of FFT bin `j`; the Nyquist bin maps to `−n/2`.
    fn signed_index(n: usize, j: usize) -> i64 {
        if j < n / 2 {
            j as i64
        } else {
            j as i64 - n as i64
        }
    }

    /// Momentum values `2πq/L` in FFT order, `q ∈ {−n/2, …, n/2−1}`.
    pub fn momenta(&self, axis: usize) -> Vec<f64> {
        let n = self.n[axis];
        let dk = 2.0 * std::f64::consts::PI / self.length[axis];
        (0..n)
            .map(|j| dk * Self::signed_index(n, j) as f64)
            .collect()
    }

    /// Symbol of `−i∂` in FFT order: the momenta with the Nyquist bin set to
    /// zero, so the discrete derivative stays real and odd.
    pub fn kinetic_momenta(&self, axis: usize) -> Vec<f64> {
        let mut k = self.momenta(axis);
        k[self.n[axis] / 2] = 0.0;
        k
    }

    /// Per-axis indices of a flat row-major point index.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for axis in (0..self.dim()).rev() {
            idx[axis] = flat % self.n[axis];
            flat /= self.n[axis];
        }
        idx
    }

    /// Kinetic momentum vector of each mode, row-major FFT order.
    pub fn mode_momenta(&self) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = (0..self.dim()).map(|a| self.kinetic_momenta(a)).collect();
        (0..self.total_points())
            .map(|flat| {
                self.unravel(flat)
                    .iter()
                    .enumerate()
                    .map(|(a, &j)| axes[a][j])
                    .collect()
            })
            .collect()
    }

    /// Coordinates of each point, row-major.
    pub fn point_coordinates(&self) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = (0..self.dim()).map(|a| self.coordinates(a)).collect();
        (0..self.total_points())
            .map(|flat| {
                self.unravel(flat)
                    .iter()
                    .enumerate()
                    .map(|(a, &j)| axes[a][j])
                    .collect()
            })
            .collect()
    }
}

/// Builds a grid, checking `dim ∈ {1, 2}`, even `n ≥ 4` and `L > 0`.
pub fn make_grid(dim: usize, n: &[usize], length: &[f64]) -> Result<Grid> {
    if dim == 3 {
        return Err(Error::Config(
            "dimension 3 is not supported: the two-component Majorana decomposition has no 3+1D counterpart".into(),
        ));
    }
    if !(1..=2).contains(&dim) {
        return Err(Error::Config(format!(
            "dimension must be 1 or 2, got {dim}"
        )));
    }
    if n.len() != dim || length.len() != dim {
        return Err(Error::Config(format!(
            "expected {dim} point counts and lengths, got {} and {}",
            n.len(),
            length.len()
        )));
    }
    for (axis, (&na, &la)) in n.iter().zip(length).enumerate() {
        if na < 4 || na % 2 != 0 {
            return Err(Error::Config(format!(
                "n[{axis}] must be even and at least 4, got {na}"
            )));
        }
        if !(la.is_finite() && la > 0.0) {
            return Err(Error::Config(format!(
                "length[{axis}] must be positive, got {la}"
            )));
        }
    }
    Ok(Grid {
        n: n.to_vec(),
        length: length.to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Momentum,
}

/// Two-component complex field on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    grid: Arc<Grid>,
    values: Vec<Spinor2>,
    space: Space,
}

fn finite(z: &Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl SpinorField {
    pub fn new(grid: Arc<Grid>, values: Vec<Spinor2>, space: Space) -> Result<Self> {
        if values.len() != grid.total_points() {
            return Err(Error::Contract(format!(
                "field has {} points, grid has {}",
                values.len(),
                grid.total_points()
            )));
        }
        if !values.iter().all(|s| s.iter().all(finite)) {
            return Err(Error::NumericDomain("field has non-finite entries".into()));
        }
        Ok(SpinorField {
            grid,
            values,
            space,
        })
    }

    pub(crate) fn from_parts(grid: Arc<Grid>, values: Vec<Spinor2>, space: Space) -> Self {
        debug_assert_eq!(values.len(), grid.total_points());
        SpinorField {
            grid,
            values,
            space,
        }
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.total_points();
        SpinorField::from_parts(grid, vec![Spinor2::zeros(); n], Space::Position)
    }

    /// The same spinor at every point.
    pub fn uniform(grid: Arc<Grid>, spinor: Spinor2) -> Result<Self> {
        let n = grid.total_points();
        SpinorField::new(grid, vec![spinor; n], Space::Position)
    }

    /// Position-space field sampled from `f(coordinates)`.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&[f64]) -> Spinor2) -> Result<Self> {
        let values = grid.point_coordinates().iter().map(|x| f(x)).collect();
        SpinorField::new(grid, values, Space::Position)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Spinor2] {
        &self.values
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|s| s.iter().all(finite))
    }

    pub(crate) fn into_values(self) -> Vec<Spinor2> {
        self.values
    }

    pub fn scaled(&self, factor: f64) -> SpinorField {
        let values = self.values.iter().map(|s| s * c(factor, 0.0)).collect();
        SpinorField::from_parts(self.grid.clone(), values, self.space)
    }

    /// Largest pointwise component difference.
    pub fn max_abs_diff(&self, other: &SpinorField) -> Result<f64> {
        same_layout(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| (a - b).iter().map(|z| z.norm()).collect::<Vec<_>>())
            .fold(0.0, f64::max))
    }

    /// Pointwise `ψ_c = −iσzσyψ*`.
    pub fn charge_conjugate(&self) -> Result<SpinorField> {
        require_position(self, "charge conjugation")?;
        let b = conj2();
        let values = self.values.iter().map(|s| b * s.conjugate()).collect();
        Ok(SpinorField::from_parts(
            self.grid.clone(),
            values,
            Space::Position,
        ))
    }

    fn with_component(&self, comp: usize) -> Vec<Complex64> {
        self.values.iter().map(|s| s[comp]).collect()
    }
}

fn same_layout(a: &SpinorField, b: &SpinorField) -> Result<()> {
    if a.grid != b.grid && *a.grid != *b.grid {
        return Err(Error::Contract("fields live on different grids".into()));
    }
    if a.space != b.space {
        return Err(Error::Contract("fields live in different spaces".into()));
    }
    Ok(())
}

fn require_position(f: &SpinorField, what: &str) -> Result<()> {
    if f.space != Space::Position {
        return Err(Error::Contract(format!(
            "{what} requires a position-space field"
        )));
    }
    Ok(())
}

/// Real four-component field `Ψ = (Re ψ1, Re ψ2, Im ψ1, Im ψ2)` per point.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField4 {
    grid: Arc<Grid>,
    values: Vec<[f64; 4]>,
}

impl RealField4 {
    pub fn new(grid: Arc<Grid>, values: Vec<[f64; 4]>) -> Result<Self> {
        if values.len() != grid.total_points() {
            return Err(Error::Contract(format!(
                "field has {} points, grid has {}",
                values.len(),
                grid.total_points()
            )));
        }
        if !values.iter().flatten().all(|v| v.is_finite()) {
            return Err(Error::NumericDomain("field has non-finite entries".into()));
        }
        Ok(RealField4 { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[[f64; 4]] {
        &self.values
    }

    /// Euclidean norm weighted by the cell volume.
    pub fn norm(&self) -> f64 {
        let sum: f64 = self.values.iter().flatten().map(|v| v * v).sum();
        (sum * self.grid.cell_volume()).sqrt()
    }
}

pub fn real_expand(field: &SpinorField) -> Result<RealField4> {
    require_position(field, "real expansion")?;
    let values = field
        .values
        .iter()
        .map(|s| [s[0].re, s[1].re, s[0].im, s[1].im])
        .collect();
    Ok(RealField4 {
        grid: field.grid.clone(),
        values,
    })
}

pub fn real_contract(field: &RealField4) -> SpinorField {
    let values = field
        .values
        .iter()
        .map(|v| Spinor2::new(c(v[0], v[2]), c(v[1], v[3])))
        .collect();
    SpinorField::from_parts(field.grid.clone(), values, Space::Position)
}

/// The two Majorana-condition components of a state and their masses.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaPair {
    pub plus: SpinorField,
    pub minus: SpinorField,
    pub mass_plus: Option<f64>,
    pub mass_minus: Option<f64>,
}

impl MajoranaPair {
    /// Largest pointwise violation of `φ = φ_c` over both components.
    pub fn majorana_residual(&self) -> Result<f64> {
        let a = self.plus.max_abs_diff(&self.plus.charge_conjugate()?)?;
        let b = self.minus.max_abs_diff(&self.minus.charge_conjugate()?)?;
        Ok(a.max(b))
    }
}

/// `ψ+ = (ψ + ψ_c)/√2`, `ψ− = −i(ψ − ψ_c)/√2`, pointwise.
pub fn decompose_majorana(field: &SpinorField) -> Result<MajoranaPair> {
    require_position(field, "Majorana decomposition")?;
    let b = conj2();
    let (plus, minus): (Vec<Spinor2>, Vec<Spinor2>) = field
        .values
        .iter()
        .map(|s| {
            let sc = b * s.conjugate();
            ((s + sc) * c(SQRT_HALF, 0.0), (s - sc) * c(0.0, -SQRT_HALF))
        })
        .unzip();
    Ok(MajoranaPair {
        plus: SpinorField::from_parts(field.grid.clone(), plus, Space::Position),
        minus: SpinorField::from_parts(field.grid.clone(), minus, Space::Position),
        mass_plus: None,
        mass_minus: None,
    })
}

/// `ψ = (ψ+ + iψ−)/√2`, pointwise.
pub fn reconstruct(pair: &MajoranaPair) -> Result<SpinorField> {
    same_layout(&pair.plus, &pair.minus)?;
    let values = pair
        .plus
        .values
        .iter()
        .zip(&pair.minus.values)
        .map(|(p, m)| (p + m * c(0.0, 1.0)) * c(SQRT_HALF, 0.0))
        .collect();
    Ok(SpinorField::from_parts(
        pair.plus.grid.clone(),
        values,
        pair.plus.space,
    ))
}

/// `Σ conj(a)·b · Π dx`.
pub fn inner(a: &SpinorField, b: &SpinorField) -> Result<Complex64> {
    same_layout(a, b)?;
    let sum: Complex64 = a.values.iter().zip(&b.values).map(|(x, y)| x.dotc(y)).sum();
    Ok(sum * weight(a))
}

fn weight(f: &SpinorField) -> f64 {
    match f.space {
        Space::Position => f.grid.cell_volume(),
        // unitary DFT: Σ|ψ̂|² = Σ|ψ|², so momentum sums carry the same weight
        Space::Momentum => f.grid.cell_volume(),
    }
}

pub fn norm(field: &SpinorField) -> f64 {
    let sum: f64 = field.values.iter().map(|s| s.norm_squared()).sum();
    (sum * weight(field)).sqrt()
}

/// Unitary multi-dimensional DFT of one scalar component, in place.
pub(crate) fn transform_scalar(grid: &Grid, data: &mut [Complex64], direction: FftDirection) {
    let mut planner = FftPlanner::<f64>::new();
    let shape = grid.shape();
    let total = grid.total_points();
    let mut stride = 1;
    for axis in (0..grid.dim()).rev() {
        let n = shape[axis];
        let fft = planner.plan_fft(n, direction);
        let scale = 1.0 / (n as f64).sqrt();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let block = n * stride;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = data[base + j * stride];
                }
                fft.process(&mut buf);
                for (j, b) in buf.iter().enumerate() {
                    data[base + j * stride] = b * scale;
                }
            }
        }
        stride *= n;
    }
}

fn transform(field: &SpinorField, direction: FftDirection, target: Space) -> SpinorField {
    let mut comps = [field.with_component(0), field.with_component(1)];
    for comp in comps.iter_mut() {
        transform_scalar(&field.grid, comp, direction);
    }
    let values = comps[0]
        .iter()
        .zip(&comps[1])
        .map(|(&a, &b)| Spinor2::new(a, b))
        .collect();
    SpinorField::from_parts(field.grid.clone(), values, target)
}

pub fn to_momentum(field: &SpinorField) -> Result<SpinorField> {
    require_position(field, "forward transform")?;
    Ok(transform(field, FftDirection::Forward, Space::Momentum))
}

pub fn to_position(field: &SpinorField) -> Result<SpinorField> {
    if field.space != Space::Momentum {
        return Err(Error::Contract(
            "inverse transform requires a momentum-space field".into(),
        ));
    }
    Ok(transform(field, FftDirection::Inverse, Space::Position))
}

/// How an initial state is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// `e^{ip0·x} e^{−|x|²/4Δ²} s`.
    Gaussian {
        p0: Vec<f64>,
        delta: f64,
        spinor: Spinor2,
        normalize: bool,
    },
    Uniform {
        spinor: Spinor2,
        normalize: bool,
    },
    /// CSV with header `x[,y],re1,im1,re2,im2`, row-major.
    Table {
        path: std::path::PathBuf,
    },
}

pub fn sample_initial(grid: &Arc<Grid>, spec: &InitialState) -> Result<SpinorField> {
    let check_spinor = |s: &Spinor2| {
        if s.iter().all(finite) {
            Ok(())
        } else {
            Err(Error::Config("initial spinor is not finite".into()))
        }
    };
    let (field, normalize) = match spec {
        InitialState::Gaussian {
            p0,
            delta,
            spinor,
            normalize,
        } => {
            check_spinor(spinor)?;
            if !(delta.is_finite() && *delta > 0.0) {
                return Err(Error::Config(format!(
                    "gaussian width must be positive, got {delta}"
                )));
            }
            if p0.len() != grid.dim() {
                return Err(Error::Config(format!(
                    "p0 has {} components, grid is {}-dimensional",
                    p0.len(),
                    grid.dim()
                )));
            }
            if p0.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config("p0 is not finite".into()));
            }
            let inv = 1.0 / (4.0 * delta * delta);
            let f = SpinorField::from_fn(grid.clone(), |x| {
                let phase: f64 = x.iter().zip(p0).map(|(xi, pi)| xi * pi).sum();
                let r2: f64 = x.iter().map(|xi| xi * xi).sum();
                spinor * Complex64::from_polar((-r2 * inv).exp(), phase)
            })?;
            (f, *normalize)
        }
        InitialState::Uniform { spinor, normalize } => {
            check_spinor(spinor)?;
            (SpinorField::uniform(grid.clone(), *spinor)?, *normalize)
        }
        InitialState::Table { path } => (read_table(grid, path)?, false),
    };
    if !normalize {
        return Ok(field);
    }
    let n = norm(&field);
    if n == 0.0 {
        return Err(Error::Config(
            "cannot normalize a zero initial state".into(),
        ));
    }
    Ok(field.scaled(1.0 / n))
}

/// Reads a position-space field from a snapshot-format CSV.
pub fn read_table(grid: &Arc<Grid>, path: &Path) -> Result<SpinorField> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| table_error(path, e))?;
    let axes = ["x", "y"];
    let mut expected: Vec<&str> = axes[..grid.dim()].to_vec();
    expected.extend(["re1", "im1", "re2", "im2"]);
    let header = reader.headers().map_err(|e| table_error(path, e))?.clone();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Config(format!(
            "{}: header must be `{}`",
            path.display(),
            expected.join(",")
        )));
    }
    let coords = grid.point_coordinates();
    let tol: f64 = 1e-9
        * (0..grid.dim())
            .map(|a| grid.spacing(a))
            .fold(f64::INFINITY, f64::min);
    let mut values = Vec::with_capacity(grid.total_points());
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| table_error(path, e))?;
        let nums = record
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Config(format!("{}: row {}: {e}", path.display(), row + 2)))?;
        let Some(x) = coords.get(row) else {
            return Err(Error::Config(format!(
                "{}: more rows than the {} grid points",
                path.display(),
                grid.total_points()
            )));
        };
        if x.iter().zip(&nums).any(|(a, b)| (a - b).abs() > tol) {
            return Err(Error::Config(format!(
                "{}: row {} coordinates do not match the grid",
                path.display(),
                row + 2
            )));
        }
        let d = grid.dim();
        values.push(Spinor2::new(
            c(nums[d], nums[d + 1]),
            c(nums[d + 2], nums[d + 3]),
        ));
    }
    if values.len() != grid.total_points() {
        return Err(Error::Config(format!(
            "{}: {} rows for {} grid points",
            path.display(),
            values.len(),
            grid.total_points()
        )));
    }
    SpinorField::new(grid.clone(), values, Space::Position)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn table_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        Error::Config(format!("{}: {e}", path.display()))
    }
}
