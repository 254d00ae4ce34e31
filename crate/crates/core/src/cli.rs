//! Config-driven command-line front end.
//!
//! `simulate` runs the prepare / decompose / evolve / measure workflow,
//! `decompose` writes the Majorana components of the initial state, `check`
//! cross-validates the three backends, and `spectrum` compares the per-mode
//! spectra of the equivalent Hamiltonians.
//!
//! Exit codes: 0 success, 2 config, 3 numeric, 4 I/O, 5 validation mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{
    c, decoupling_unitary, dirac_mode_hamiltonian, hermitian_eigenvalues2, hermitian_eigenvalues4,
    majorana_mode_hamiltonian, majorana_rep_mode_hamiltonian, LinearSymbol, Matrix2, Matrix4, Sign,
    Spinor2,
};
use crate::dynamics::{
    evolve, evolve_recorded, Backend, EquationKind, EvolveOptions, Observer, Schedule,
};
use crate::error::{Error, Result};
use crate::fields::{
    decompose_majorana, make_grid, norm, sample_initial, Grid, InitialState, MajoranaPair,
    SpinorField,
};
use crate::measure::{observe, series_to_csv, snapshot_to_csv};
use crate::reference::DEFAULT_ORACLE_CAP;

/// Deviation allowed between backends by `check`.
pub const CHECK_TOLERANCE: f64 = 1e-10;
/// Deviation allowed between equivalent spectra by `spectrum`.
pub const SPECTRUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "majoranon",
    version,
    about = "Majorana-equation spinor field simulator"
)]
pub struct Cli {
    /// Suppress the summary printed to stdout.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the configured initial state and record observables.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured backend.
        #[arg(long, value_parser = parse_backend)]
        backend: Option<Backend>,
    },
    /// Split the configured initial state into its two Majorana components.
    Decompose {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run every backend on the configured problem and compare.
    Check {
        #[arg(long)]
        config: PathBuf,
        /// Evolve the decomposed components with the opposite kinetic sign.
        #[arg(long)]
        debug_flip_kinetic_sign: bool,
    },
    /// Compare per-mode spectra of the equivalent Majorana Hamiltonians.
    Spectrum {
        /// Comma-separated momenta.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            allow_negative_numbers = true,
            required = true
        )]
        k: Vec<f64>,
        #[arg(long)]
        mass: f64,
    },
}

fn parse_backend(s: &str) -> std::result::Result<Backend, String> {
    Backend::ALL
        .into_iter()
        .find(|b| b.as_str() == s)
        .ok_or_else(|| format!("unknown backend `{s}` (expected decomposed, expanded or oracle)"))
}

/// `[re, im]`.
pub type ComplexConfig = [f64; 2];
/// Row-major 2×2 complex matrix.
pub type MatrixConfig = [[ComplexConfig; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EquationConfig {
    Weyl,
    Dirac {
        mass: f64,
        #[serde(default = "plus")]
        mass_sign: Sign,
        #[serde(default = "plus")]
        kinetic_sign: Sign,
    },
    Majorana {
        mass: f64,
    },
    DiracMajorana {
        dirac_mass: f64,
        majorana_mass: f64,
    },
    /// `i∂tψ = (Σ Aₐpₐ + M)ψ + Kψ*`.
    Custom {
        kinetic: Vec<MatrixConfig>,
        mass_matrix: MatrixConfig,
        conjugate: MatrixConfig,
    },
}

fn plus() -> Sign {
    Sign::Plus
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: Vec<usize>,
    pub length: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    Gaussian {
        p0: Vec<f64>,
        delta: f64,
        spinor: [ComplexConfig; 2],
        #[serde(default)]
        normalize: bool,
    },
    Uniform {
        spinor: [ComplexConfig; 2],
        #[serde(default)]
        normalize: bool,
    },
    Table {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "one")]
    pub record_every: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_series")]
    pub series: PathBuf,
    /// Snapshot path pattern; `{label}` is replaced by the zero-padded step
    /// (or by `psi`, `psi_plus`, `psi_minus` for `decompose`).
    #[serde(default)]
    pub snapshots: Option<String>,
    #[serde(default = "default_metadata")]
    pub metadata: PathBuf,
}

fn default_series() -> PathBuf {
    PathBuf::from("series.csv")
}

fn default_metadata() -> PathBuf {
    PathBuf::from("metadata.json")
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            series: default_series(),
            snapshots: None,
            metadata: default_metadata(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub dimension: usize,
    pub equation: EquationConfig,
    pub grid: GridConfig,
    pub initial: InitialConfig,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    pub time: TimeConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default = "default_cap")]
    pub oracle_cap: usize,
}

fn default_backend() -> Backend {
    Backend::Decomposed
}

fn default_cap() -> usize {
    DEFAULT_ORACLE_CAP
}

fn complex(z: &ComplexConfig) -> num_complex::Complex64 {
    c(z[0], z[1])
}

fn matrix(m: &MatrixConfig) -> Matrix2 {
    Matrix2::new(
        complex(&m[0][0]),
        complex(&m[0][1]),
        complex(&m[1][0]),
        complex(&m[1][1]),
    )
}

fn spinor(s: &[ComplexConfig; 2]) -> Spinor2 {
    Spinor2::new(complex(&s[0]), complex(&s[1]))
}

fn config_err(key: &str, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key}: {e}"))
}

impl EquationConfig {
    pub fn to_kind(&self, dimension: usize) -> Result<EquationKind> {
        let kind = match self {
            EquationConfig::Weyl => EquationKind::Weyl,
            EquationConfig::Dirac {
                mass,
                mass_sign,
                kinetic_sign,
            } => EquationKind::Dirac {
                mass: *mass,
                mass_sign: *mass_sign,
                kinetic_sign: *kinetic_sign,
            },
            EquationConfig::Majorana { mass } => EquationKind::Majorana { mass: *mass },
            EquationConfig::DiracMajorana {
                dirac_mass,
                majorana_mass,
            } => EquationKind::DiracMajorana {
                dirac_mass: *dirac_mass,
                majorana_mass: *majorana_mass,
            },
            EquationConfig::Custom {
                kinetic,
                mass_matrix,
                conjugate,
            } => {
                if kinetic.len() != dimension {
                    return Err(config_err(
                        "equation.kinetic",
                        format!("expected {dimension} matrices, got {}", kinetic.len()),
                    ));
                }
                let mut k = [Matrix2::zeros(), Matrix2::zeros()];
                for (slot, m) in k.iter_mut().zip(kinetic) {
                    *slot = matrix(m);
                }
                EquationKind::Custom {
                    symbol: LinearSymbol {
                        kinetic: k,
                        mass: matrix(mass_matrix),
                    },
                    conjugate: matrix(conjugate),
                }
            }
        };
        kind.validate().map_err(|e| config_err("equation", e))?;
        Ok(kind)
    }
}

/// A validated configuration with paths resolved against the config
/// directory.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: SimulationConfig,
    pub grid: Arc<Grid>,
    pub kind: EquationKind,
    pub initial: InitialState,
    pub schedule: Schedule,
    pub series_path: PathBuf,
    pub metadata_path: PathBuf,
    pub snapshot_pattern: Option<String>,
}

impl Resolved {
    pub fn options(&self, flip_kinetic_sign: bool) -> EvolveOptions {
        EvolveOptions {
            flip_kinetic_sign,
            oracle_cap: self.config.oracle_cap,
        }
    }

    pub fn snapshot_path(&self, label: &str) -> Option<PathBuf> {
        self.snapshot_pattern
            .as_ref()
            .map(|p| PathBuf::from(p.replace("{label}", label)))
    }
}

fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl SimulationConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks every precondition and resolves relative paths against `base`.
    pub fn resolve(&self, base: &Path) -> Result<Resolved> {
        let dim = self.dimension;
        if dim == 3 {
            return Err(config_err(
                "dimension",
                "3+1D is not supported: two-component spinors admit no charge conjugation there, so the Majorana decomposition does not exist",
            ));
        }
        if !(1..=2).contains(&dim) {
            return Err(config_err(
                "dimension",
                format!("must be 1 or 2, got {dim}"),
            ));
        }
        let grid = Arc::new(
            make_grid(dim, &self.grid.n, &self.grid.length).map_err(|e| config_err("grid", e))?,
        );
        let kind = self.equation.to_kind(dim)?;
        let initial = match &self.initial {
            InitialConfig::Gaussian {
                p0,
                delta,
                spinor: s,
                normalize,
            } => InitialState::Gaussian {
                p0: p0.clone(),
                delta: *delta,
                spinor: spinor(s),
                normalize: *normalize,
            },
            InitialConfig::Uniform {
                spinor: s,
                normalize,
            } => InitialState::Uniform {
                spinor: spinor(s),
                normalize: *normalize,
            },
            InitialConfig::Table { path } => InitialState::Table {
                path: resolve_path(base, path),
            },
        };
        if let InitialState::Gaussian { p0, delta, .. } = &initial {
            if p0.len() != dim {
                return Err(config_err(
                    "initial.p0",
                    format!("expected {dim} components, got {}", p0.len()),
                ));
            }
            if !(delta.is_finite() && *delta > 0.0) {
                return Err(config_err(
                    "initial.delta",
                    format!("must be positive, got {delta}"),
                ));
            }
        }
        let schedule = Schedule {
            dt: self.time.dt,
            steps: self.time.steps,
            record_every: self.time.record_every,
        };
        schedule.validate().map_err(|e| config_err("time", e))?;
        if self.oracle_cap == 0 {
            return Err(config_err("oracle_cap", "must be positive"));
        }
        let snapshot_pattern = self.output.snapshots.as_ref().map(|p| {
            resolve_path(base, Path::new(p))
                .to_string_lossy()
                .into_owned()
        });
        Ok(Resolved {
            config: self.clone(),
            grid,
            kind,
            initial,
            schedule,
            series_path: resolve_path(base, &self.output.series),
            metadata_path: resolve_path(base, &self.output.metadata),
            snapshot_pattern,
        })
    }
}

/// Reads and validates a JSON config; relative paths resolve against the
/// config's directory.
pub fn parse_config(path: &Path) -> Result<Resolved> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let config = SimulationConfig::from_json(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    config.resolve(base)
}

/// Conventions recorded alongside every output.
pub fn conventions() -> serde_json::Value {
    json!({
        "decomposition": "psi_plus = (psi + psi_c)/sqrt(2), psi_minus = -i(psi - psi_c)/sqrt(2), psi = (psi_plus + i psi_minus)/sqrt(2), psi_c = -i sigma_z sigma_y conj(psi)",
        "decomposed_kinetic_sign": "+1: both components evolve with +sigma.p and masses (m_D + m_M, m_D - m_M)",
        "dirac_mass_term": "m_D sigma_z",
        "majorana_mass_term": "-i m_M sigma_y conj(psi)",
        "fourier": "unitary DFT, 1/sqrt(n) per axis; grid x in [-L/2, L/2)",
        "nyquist": "momentum label -pi n/L; derivative symbol zero at the Nyquist bin",
        "units": "hbar = c = 1",
    })
}

fn metadata(config: &SimulationConfig, wall_seconds: Option<f64>) -> serde_json::Value {
    json!({
        "config": config,
        "conventions": conventions(),
        "versions": { "majoranon": env!("CARGO_PKG_VERSION") },
        "wall_seconds": wall_seconds,
    })
}

fn write_metadata(path: &Path, config: &SimulationConfig, wall_seconds: Option<f64>) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut text =
        serde_json::to_string_pretty(&metadata(config, wall_seconds)).expect("metadata serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn emit(out: &mut dyn Write, quiet: bool, line: impl AsRef<str>) {
    if !quiet {
        let _ = writeln!(out, "{}", line.as_ref());
    }
}

struct SnapshotWriter<'a> {
    resolved: &'a Resolved,
}

impl Observer for SnapshotWriter<'_> {
    fn observe(
        &mut self,
        step: usize,
        _t: f64,
        psi: &SpinorField,
        _pair: Option<&MajoranaPair>,
    ) -> Result<()> {
        match self.resolved.snapshot_path(&format!("{step:06}")) {
            Some(path) => snapshot_to_csv(psi, &path),
            None => Ok(()),
        }
    }
}

pub fn cmd_simulate(
    resolved: &Resolved,
    backend: Option<Backend>,
    quiet: bool,
    out: &mut dyn Write,
) -> Result<()> {
    let started = Instant::now();
    let mut config = resolved.config.clone();
    if let Some(b) = backend {
        config.backend = b;
    }
    write_metadata(&resolved.metadata_path, &config, None)?;
    let psi0 = sample_initial(&resolved.grid, &resolved.initial)?;
    let mut snapshots = SnapshotWriter { resolved };
    let run = evolve_recorded(
        &psi0,
        &resolved.kind,
        config.backend,
        &resolved.options(false),
        &resolved.schedule,
        &mut [&mut snapshots],
    );
    let run = match run {
        Ok(run) => run,
        Err(failure) => {
            series_to_csv(&failure.series, &resolved.series_path)?;
            return Err(failure.error);
        }
    };
    series_to_csv(&run.series, &resolved.series_path)?;
    write_metadata(
        &resolved.metadata_path,
        &config,
        Some(started.elapsed().as_secs_f64()),
    )?;
    if let Some(last) = run.series.records().last() {
        emit(
            out,
            quiet,
            format!(
                "{} {} backend: {} records, t = {}, norm = {:.15}, pop_up = {:.15}, majorana_defect = {:.3e}",
                resolved.kind.label(),
                config.backend,
                run.series.records().len(),
                last.t,
                last.norm,
                last.pop_up,
                last.majorana_defect
            ),
        );
    }
    emit(
        out,
        quiet,
        format!("series: {}", resolved.series_path.display()),
    );
    Ok(())
}

fn fmt_spinor(s: &Spinor2) -> String {
    format!(
        "({:+.15}{:+.15}i, {:+.15}{:+.15}i)",
        s[0].re, s[0].im, s[1].re, s[1].im
    )
}

pub fn cmd_decompose(resolved: &Resolved, quiet: bool, out: &mut dyn Write) -> Result<()> {
    write_metadata(&resolved.metadata_path, &resolved.config, None)?;
    let psi = sample_initial(&resolved.grid, &resolved.initial)?;
    let pair = decompose_majorana(&psi)?;
    // point nearest the origin
    let center = (0..resolved.grid.total_points())
        .find(|&p| {
            resolved
                .grid
                .unravel(p)
                .iter()
                .zip(resolved.grid.shape())
                .all(|(&j, &n)| j == n / 2)
        })
        .expect("grid has a center point");
    for (label, field) in [
        ("psi", &psi),
        ("psi_plus", &pair.plus),
        ("psi_minus", &pair.minus),
    ] {
        if let Some(path) = resolved.snapshot_path(label) {
            snapshot_to_csv(field, &path)?;
        }
        let defect = observe(0.0, field, None)?.majorana_defect;
        emit(
            out,
            quiet,
            format!(
                "{label:<9} norm = {:.15}  majorana_defect = {:.3e}  at origin = {}",
                norm(field),
                defect,
                fmt_spinor(&field.values()[center])
            ),
        );
    }
    Ok(())
}

/// Largest deviation of `U†H_M(k)U` from `diag(H+(k), H−(k))` over
/// `samples` momenta in `[−10, 10]`.
pub fn decoupling_residual(m: f64, samples: usize) -> Result<f64> {
    let u = decoupling_unitary();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let k = -10.0 + 20.0 * i as f64 / (samples - 1).max(1) as f64;
        let rotated = u.adjoint() * majorana_mode_hamiltonian(k, m) * u;
        let mut target = Matrix4::zeros();
        target
            .fixed_view_mut::<2, 2>(0, 0)
            .copy_from(&dirac_mode_hamiltonian(&[k], m, Sign::Plus, Sign::Plus)?);
        target
            .fixed_view_mut::<2, 2>(2, 2)
            .copy_from(&dirac_mode_hamiltonian(&[k], m, Sign::Minus, Sign::Plus)?);
        worst = worst.max(
            (rotated - target)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
        );
    }
    Ok(worst)
}

/// Result of running every applicable backend on one problem.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub deviations: Vec<(Backend, Backend, f64)>,
    pub norm_drift: Vec<(Backend, f64)>,
    pub decoupling_residual: f64,
}

impl CheckReport {
    pub fn worst(&self) -> Option<&(Backend, Backend, f64)> {
        self.deviations.iter().max_by(|a, b| a.2.total_cmp(&b.2))
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.deviations.iter().all(|d| d.2 <= tol) && self.decoupling_residual <= tol
    }
}

pub fn run_check(resolved: &Resolved, flip_kinetic_sign: bool) -> Result<CheckReport> {
    if resolved.grid.total_points() > resolved.config.oracle_cap {
        return Err(Error::Resource(format!(
            "check needs the dense oracle; grid has {} points, oracle_cap is {}",
            resolved.grid.total_points(),
            resolved.config.oracle_cap
        )));
    }
    let psi0 = sample_initial(&resolved.grid, &resolved.initial)?;
    let t = resolved.schedule.dt * resolved.schedule.steps as f64;
    let opts = resolved.options(flip_kinetic_sign);
    let n0 = norm(&psi0);
    let mut results = Vec::new();
    for backend in Backend::ALL {
        if backend == Backend::Decomposed && resolved.kind.split_masses().is_none() {
            continue;
        }
        results.push((
            backend,
            evolve(&psi0, &resolved.kind, backend, t, &opts)?.psi,
        ));
    }
    let mut deviations = Vec::new();
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            deviations.push((
                results[i].0,
                results[j].0,
                results[i].1.max_abs_diff(&results[j].1)?,
            ));
        }
    }
    let norm_drift = results
        .iter()
        .map(|(b, f)| (*b, (norm(f) - n0).abs()))
        .collect();
    let m = match resolved.kind {
        EquationKind::Majorana { mass } => mass,
        EquationKind::DiracMajorana { majorana_mass, .. } => majorana_mass,
        EquationKind::Dirac { mass, .. } => mass,
        _ => 1.0,
    };
    Ok(CheckReport {
        deviations,
        norm_drift,
        decoupling_residual: decoupling_residual(m, 64)?,
    })
}

pub fn cmd_check(
    resolved: &Resolved,
    flip_kinetic_sign: bool,
    quiet: bool,
    out: &mut dyn Write,
) -> Result<()> {
    let report = run_check(resolved, flip_kinetic_sign)?;
    for (a, b, d) in &report.deviations {
        emit(out, quiet, format!("max |{a} - {b}| = {d:.3e}"));
    }
    for (b, d) in &report.norm_drift {
        emit(out, quiet, format!("norm drift {b} = {d:.3e}"));
    }
    emit(
        out,
        quiet,
        format!("decoupling residual = {:.3e}", report.decoupling_residual),
    );
    if report.decoupling_residual > CHECK_TOLERANCE {
        return Err(Error::Validation(format!(
            "decoupling residual {:.3e} exceeds {CHECK_TOLERANCE:e}",
            report.decoupling_residual
        )));
    }
    if let Some((a, b, d)) = report.worst().filter(|w| w.2 > CHECK_TOLERANCE) {
        return Err(Error::Validation(format!(
            "{a} vs {b} deviate by {d:.3e} (tolerance {CHECK_TOLERANCE:e})"
        )));
    }
    emit(out, quiet, "all backends agree");
    Ok(())
}

/// Sorted spectra of `H_M(k)`, the Majorana-representation Hamiltonian, and
/// `diag(H+(k), H−(k))`.
pub fn spectra(k: f64, m: f64) -> Result<[[f64; 4]; 3]> {
    let hm = hermitian_eigenvalues4(&majorana_mode_hamiltonian(k, m))?;
    let hr = hermitian_eigenvalues4(&majorana_rep_mode_hamiltonian(k, m))?;
    let p = hermitian_eigenvalues2(&dirac_mode_hamiltonian(&[k], m, Sign::Plus, Sign::Plus)?);
    let q = hermitian_eigenvalues2(&dirac_mode_hamiltonian(&[k], m, Sign::Minus, Sign::Plus)?);
    let mut pm = [p[0], p[1], q[0], q[1]];
    pm.sort_by(f64::total_cmp);
    Ok([hm, hr, pm])
}

pub fn cmd_spectrum(ks: &[f64], m: f64, quiet: bool, out: &mut dyn Write) -> Result<()> {
    if !m.is_finite() || ks.iter().any(|k| !k.is_finite()) {
        return Err(Error::InvalidArgument(
            "momenta and mass must be finite".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for &k in ks {
        let [hm, hr, pm] = spectra(k, m)?;
        let fmt = |e: &[f64; 4]| e.map(|v| format!("{v:+.15}")).join(" ");
        emit(out, quiet, format!("k = {k}"));
        emit(out, quiet, format!("  H_M        {}", fmt(&hm)));
        emit(out, quiet, format!("  H_majrep   {}", fmt(&hr)));
        emit(out, quiet, format!("  H+ (+) H-  {}", fmt(&pm)));
        for i in 0..4 {
            worst = worst.max((hm[i] - hr[i]).abs()).max((hm[i] - pm[i]).abs());
        }
    }
    emit(out, quiet, format!("max spectral deviation = {worst:.3e}"));
    if worst > SPECTRUM_TOLERANCE {
        return Err(Error::Validation(format!(
            "spectra differ by {worst:.3e} (tolerance {SPECTRUM_TOLERANCE:e})"
        )));
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Simulate { config, backend } => {
            cmd_simulate(&parse_config(config)?, *backend, cli.quiet, out)
        }
        Command::Decompose { config } => cmd_decompose(&parse_config(config)?, cli.quiet, out),
        Command::Check {
            config,
            debug_flip_kinetic_sign,
        } => cmd_check(
            &parse_config(config)?,
            *debug_flip_kinetic_sign,
            cli.quiet,
            out,
        ),
        Command::Spectrum { k, mass } => cmd_spectrum(k, *mass, cli.quiet, out),
    }
}

/// Parses arguments, runs one command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "dimension": 1,
        "equation": {"kind": "majorana", "mass": 1.0},
        "grid": {"n": [16], "length": [8.0]},
        "initial": {"type": "uniform", "spinor": [[1, 0], [0, 0]]},
        "time": {"dt": 0.1, "steps": 5}
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = SimulationConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.time.record_every, 1);
        assert_eq!(cfg.oracle_cap, 4096);
        assert_eq!(cfg.backend, Backend::Decomposed);
        assert_eq!(cfg.output, OutputConfig::default());
        let r = cfg.resolve(Path::new("/tmp/x")).unwrap();
        assert_eq!(r.series_path, PathBuf::from("/tmp/x/series.csv"));
        assert!(matches!(
            r.initial,
            InitialState::Uniform {
                normalize: false,
                ..
            }
        ));
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let text = MINIMAL.replace("\"dimension\": 1,", "\"dimension\": 1, \"colour\": 2,");
        let err = SimulationConfig::from_json(&text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("line 2"), "{err}");
        let text = MINIMAL.replace("\"mass\": 1.0}", "\"mass\": 1.0, \"spin\": 3}");
        assert!(SimulationConfig::from_json(&text).is_err());
        assert!(SimulationConfig::from_json("{ not json").is_err());
    }

    #[test]
    fn semantic_errors_name_the_key() {
        let cfg =
            SimulationConfig::from_json(&MINIMAL.replace("\"dimension\": 1", "\"dimension\": 3"))
                .unwrap();
        let err = cfg.resolve(Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("3+1D"));
        let cfg = SimulationConfig::from_json(&MINIMAL.replace("[16]", "[15]")).unwrap();
        assert!(cfg
            .resolve(Path::new("."))
            .unwrap_err()
            .to_string()
            .contains("grid"));
        let cfg = SimulationConfig::from_json(&MINIMAL.replace("0.1", "-0.1")).unwrap();
        assert!(cfg
            .resolve(Path::new("."))
            .unwrap_err()
            .to_string()
            .contains("dt"));
    }

    #[test]
    fn signs_must_be_unit() {
        let text = MINIMAL.replace(
            r#"{"kind": "majorana", "mass": 1.0}"#,
            r#"{"kind": "dirac", "mass": 1.0, "mass_sign": 2}"#,
        );
        assert!(SimulationConfig::from_json(&text).is_err());
        let text = MINIMAL.replace(
            r#"{"kind": "majorana", "mass": 1.0}"#,
            r#"{"kind": "dirac", "mass": 1.0, "mass_sign": -1}"#,
        );
        let cfg = SimulationConfig::from_json(&text).unwrap();
        assert!(matches!(
            cfg.equation.to_kind(1).unwrap(),
            EquationKind::Dirac {
                mass_sign: Sign::Minus,
                kinetic_sign: Sign::Plus,
                ..
            }
        ));
    }

    #[test]
    fn decoupling_residual_is_tiny() {
        for m in [0.0, 0.5, 2.0] {
            assert!(decoupling_residual(m, 64).unwrap() <= 1e-13);
        }
    }

    #[test]
    fn spectrum_command() {
        let mut out = Vec::new();
        cmd_spectrum(&[0.0, 2.0, 0.3], 0.9, false, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("k = 0.3"));
        let [a, _, _] = spectra(0.0, 1.0).unwrap();
        for (x, y) in a.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((x - y).abs() <= 1e-14);
        }
    }
}
