//! Time evolution.
//!
//! Every equation evolved here has constant coefficients on a periodic grid,
//! so each backend propagates Fourier modes exactly:
//!
//! * `decomposed` splits ψ into two Majorana-condition fields and evolves each
//!   with a 2×2 Dirac propagator of its own mass;
//! * `expanded` evolves the real four-component field `(Re ψ, Im ψ)` with a
//!   4×4 generator per mode;
//! * `oracle` exponentiates the whole discretised generator as one dense
//!   matrix (see [`crate::reference`]).
//!
//! `dt` only sets the recording resolution; a step is exact for any length.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    c, conj2, dirac_mode_hamiltonian, hermitian_propagator2, hermitian_propagator4, identity2,
    is_hermitian4, sigma_x, sigma_y, sigma_z, LinearSymbol, Matrix2, Matrix4, Sign, Spinor2,
};
use crate::error::{Error, Result};
use crate::fields::{
    decompose_majorana, real_contract, real_expand, reconstruct, to_momentum, to_position,
    transform_scalar, Grid, MajoranaPair, RealField4, Space, SpinorField,
};
use crate::linalg::expm;
use crate::measure::{observe, ObservableSeries, SeriesMetadata};
use crate::reference::{DensePropagator, DEFAULT_ORACLE_CAP};

/// The two-component equation `i∂tψ = Dψ + Kψ*` being evolved.
///
/// `D` carries the kinetic term `σ·p` (or `−σ·p`) plus a Dirac mass `m σz`;
/// the Majorana mass enters as `K = −i m σy`.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum EquationKind {
    Weyl,
    Dirac {
        mass: f64,
        mass_sign: Sign,
        kinetic_sign: Sign,
    },
    Majorana {
        mass: f64,
    },
    DiracMajorana {
        dirac_mass: f64,
        majorana_mass: f64,
    },
    Custom {
        symbol: LinearSymbol,
        conjugate: Matrix2,
    },
}

impl EquationKind {
    pub fn label(&self) -> &'static str {
        match self {
            EquationKind::Weyl => "weyl",
            EquationKind::Dirac { .. } => "dirac",
            EquationKind::Majorana { .. } => "majorana",
            EquationKind::DiracMajorana { .. } => "dirac_majorana",
            EquationKind::Custom { .. } => "custom",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let masses: Vec<f64> = match self {
            EquationKind::Weyl | EquationKind::Custom { .. } => vec![],
            EquationKind::Dirac { mass, .. } | EquationKind::Majorana { mass } => vec![*mass],
            EquationKind::DiracMajorana {
                dirac_mass,
                majorana_mass,
            } => vec![*dirac_mass, *majorana_mass],
        };
        if masses.iter().any(|m| !m.is_finite()) {
            return Err(Error::NumericDomain("mass is not finite".into()));
        }
        if let EquationKind::Custom { symbol, conjugate } = self {
            if symbol
                .kinetic
                .iter()
                .chain([&symbol.mass, conjugate])
                .flat_map(|m| m.iter())
                .any(|z| !(z.re.is_finite() && z.im.is_finite()))
            {
                return Err(Error::NumericDomain(
                    "custom equation has non-finite entries".into(),
                ));
            }
            if !symbol.is_hermitian() {
                return Err(Error::InvalidArgument(
                    "custom linear symbol is not Hermitian".into(),
                ));
            }
        }
        Ok(())
    }

    /// Linear symbol `D(k)` and conjugate coefficient `K`.
    pub fn symbol(&self) -> (LinearSymbol, Matrix2) {
        let chiral = |sign: Sign| LinearSymbol {
            kinetic: [
                sigma_x() * c(sign.value(), 0.0),
                sigma_y() * c(sign.value(), 0.0),
            ],
            mass: Matrix2::zeros(),
        };
        match self {
            EquationKind::Weyl => (chiral(Sign::Plus), Matrix2::zeros()),
            EquationKind::Dirac {
                mass,
                mass_sign,
                kinetic_sign,
            } => {
                let mut s = chiral(*kinetic_sign);
                s.mass = sigma_z() * c(mass_sign.value() * mass, 0.0);
                (s, Matrix2::zeros())
            }
            EquationKind::Majorana { mass } => (chiral(Sign::Plus), sigma_y() * c(0.0, -mass)),
            EquationKind::DiracMajorana {
                dirac_mass,
                majorana_mass,
            } => {
                let mut s = chiral(Sign::Plus);
                s.mass = sigma_z() * c(*dirac_mass, 0.0);
                (s, sigma_y() * c(0.0, -majorana_mass))
            }
            EquationKind::Custom { symbol, conjugate } => (symbol.clone(), *conjugate),
        }
    }

    /// Kinetic sign and signed masses `(μ+, μ−)` of the two Majorana
    /// components, when the equation splits that way.
    pub fn split_masses(&self) -> Option<(Sign, f64, f64)> {
        match self {
            EquationKind::Weyl => Some((Sign::Plus, 0.0, 0.0)),
            EquationKind::Dirac {
                mass,
                mass_sign,
                kinetic_sign,
            } => {
                let m = mass_sign.value() * mass;
                Some((*kinetic_sign, m, m))
            }
            EquationKind::Majorana { mass } => Some((Sign::Plus, *mass, -mass)),
            EquationKind::DiracMajorana {
                dirac_mass,
                majorana_mass,
            } => Some((
                Sign::Plus,
                dirac_mass + majorana_mass,
                dirac_mass - majorana_mass,
            )),
            EquationKind::Custom { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Decomposed,
    Expanded,
    Oracle,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Decomposed, Backend::Expanded, Backend::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Decomposed => "decomposed",
            Backend::Expanded => "expanded",
            Backend::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Reverses the kinetic term of both decomposed components. Only useful
    /// to show that the equivalence check is sensitive to it.
    pub flip_kinetic_sign: bool,
    /// Largest grid, in points, the dense oracle accepts.
    pub oracle_cap: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            flip_kinetic_sign: false,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

/// State after an evolution: ψ and, for the decomposed backend, the evolved
/// Majorana pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolved {
    pub psi: SpinorField,
    pub pair: Option<MajoranaPair>,
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::NumericDomain(format!("time {t} is not finite")))
    }
}

fn check_grid(grid: &Grid) -> Result<()> {
    if grid.dim() > 2 {
        return Err(Error::Unsupported(format!(
            "{}-dimensional evolution",
            grid.dim()
        )));
    }
    Ok(())
}

/// Exact per-mode propagator `exp(−iH(k)t)` of a two-component Dirac
/// equation.
#[derive(Debug, Clone)]
pub struct DiracPropagator {
    grid: Arc<Grid>,
    modes: Vec<Matrix2>,
}

impl DiracPropagator {
    pub fn new(
        grid: &Arc<Grid>,
        mass: f64,
        mass_sign: Sign,
        kinetic_sign: Sign,
        t: f64,
    ) -> Result<Self> {
        check_grid(grid)?;
        check_time(t)?;
        let momenta = grid.mode_momenta();
        let modes = momenta
            .par_iter()
            .map(|k| {
                let h = dirac_mode_hamiltonian(k, mass, mass_sign, kinetic_sign)?;
                if h.iter().any(|z| !(z.re * t).is_finite()) {
                    return Err(Error::NumericFailure(
                        "generator times step overflows".into(),
                    ));
                }
                Ok(hermitian_propagator2(&h, t))
            })
            .collect::<Result<Vec<_>>>()?;
        if modes
            .iter()
            .flat_map(|m| m.iter())
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NumericFailure("non-finite Dirac propagator".into()));
        }
        Ok(DiracPropagator {
            grid: grid.clone(),
            modes,
        })
    }

    /// Applies the propagator; the result is in the same space as the input.
    pub fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        if *field.grid() != *self.grid {
            return Err(Error::Contract("field and propagator grids differ".into()));
        }
        let space = field.space();
        let k_field = match space {
            Space::Position => to_momentum(field)?,
            Space::Momentum => field.clone(),
        };
        let mut values = k_field.into_values();
        values
            .par_iter_mut()
            .zip(self.modes.par_iter())
            .for_each(|(v, p)| *v = p * *v);
        let out = SpinorField::from_parts(self.grid.clone(), values, Space::Momentum);
        match space {
            Space::Position => to_position(&out),
            Space::Momentum => Ok(out),
        }
    }
}

/// Evolves ψ under `i∂tψ = [kinetic_sign·σ·p + mass_sign·m·σz]ψ` for time `t`.
pub fn evolve_dirac(
    field: &SpinorField,
    m: f64,
    mass_sign: Sign,
    kinetic_sign: Sign,
    t: f64,
) -> Result<SpinorField> {
    DiracPropagator::new(field.grid_arc(), m, mass_sign, kinetic_sign, t)?.apply(field)
}

/// Propagators for the two Majorana components.
#[derive(Debug, Clone)]
struct PairPropagator {
    plus: DiracPropagator,
    minus: DiracPropagator,
    mass_plus: f64,
    mass_minus: f64,
}

impl PairPropagator {
    fn new(grid: &Arc<Grid>, kind: &EquationKind, t: f64, flip_kinetic_sign: bool) -> Result<Self> {
        kind.validate()?;
        let (kinetic, mass_plus, mass_minus) = kind.split_masses().ok_or_else(|| {
            Error::Unsupported(format!(
                "the decomposed backend cannot split a `{}` equation",
                kind.label()
            ))
        })?;
        let kinetic = if flip_kinetic_sign {
            kinetic.flipped()
        } else {
            kinetic
        };
        Ok(PairPropagator {
            plus: DiracPropagator::new(grid, mass_plus, Sign::Plus, kinetic, t)?,
            minus: DiracPropagator::new(grid, mass_minus, Sign::Plus, kinetic, t)?,
            mass_plus,
            mass_minus,
        })
    }

    fn apply(&self, pair: &MajoranaPair) -> Result<MajoranaPair> {
        Ok(MajoranaPair {
            plus: self.plus.apply(&pair.plus)?,
            minus: self.minus.apply(&pair.minus)?,
            mass_plus: Some(self.mass_plus),
            mass_minus: Some(self.mass_minus),
        })
    }

    fn label(&self, pair: MajoranaPair) -> MajoranaPair {
        MajoranaPair {
            mass_plus: Some(self.mass_plus),
            mass_minus: Some(self.mass_minus),
            ..pair
        }
    }
}

/// Decompose, evolve each component with its own Dirac equation, reconstruct.
pub fn evolve_decomposed(
    field: &SpinorField,
    kind: &EquationKind,
    t: f64,
    flip_kinetic_sign: bool,
) -> Result<(SpinorField, MajoranaPair)> {
    let prop = PairPropagator::new(field.grid_arc(), kind, t, flip_kinetic_sign)?;
    let pair = prop.apply(&decompose_majorana(field)?)?;
    Ok((reconstruct(&pair)?, pair))
}

/// Majorana equation `i∂tψ = σ·p ψ − i m σy ψ*` via components of mass ±m.
pub fn evolve_majorana_decomposed(
    field: &SpinorField,
    m: f64,
    t: f64,
) -> Result<(SpinorField, MajoranaPair)> {
    evolve_decomposed(field, &EquationKind::Majorana { mass: m }, t, false)
}

/// Dirac–Majorana equation via components of mass `m_D ± m_M`.
pub fn evolve_dirac_majorana_decomposed(
    field: &SpinorField,
    dirac_mass: f64,
    majorana_mass: f64,
    t: f64,
) -> Result<(SpinorField, MajoranaPair)> {
    evolve_decomposed(
        field,
        &EquationKind::DiracMajorana {
            dirac_mass,
            majorana_mass,
        },
        t,
        false,
    )
}

/// Exact per-mode propagator `exp(G(k)t)` of the real expansion.
#[derive(Debug, Clone)]
pub struct ExpandedPropagator {
    grid: Arc<Grid>,
    modes: Vec<Matrix4>,
}

fn mode_exponential(g: &Matrix4, t: f64) -> Result<Matrix4> {
    if g.iter()
        .any(|z| !((z.re * t).is_finite() && (z.im * t).is_finite()))
    {
        return Err(Error::NumericFailure(
            "generator times step overflows".into(),
        ));
    }
    // iG is Hermitian whenever the evolution conserves the norm
    let h = g * c(0.0, 1.0);
    let scale = g.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if is_hermitian4(&h, 1e-13 * scale) {
        return hermitian_propagator4(&(h + h.adjoint()).scale(0.5), t);
    }
    let dense = nalgebra::DMatrix::from_iterator(4, 4, (g * c(t, 0.0)).iter().copied());
    let e = expm(&dense)?;
    Ok(Matrix4::from_iterator(e.iter().copied()))
}

impl ExpandedPropagator {
    pub fn new(grid: &Arc<Grid>, kind: &EquationKind, t: f64) -> Result<Self> {
        check_grid(grid)?;
        check_time(t)?;
        kind.validate()?;
        let (symbol, conjugate) = kind.symbol();
        let modes = grid
            .mode_momenta()
            .par_iter()
            .map(|k| mode_exponential(&symbol.generator(k, &conjugate)?, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpandedPropagator {
            grid: grid.clone(),
            modes,
        })
    }

    /// Applies the propagator, returning the evolved field and the largest
    /// imaginary part left over in position space.
    pub fn apply(&self, field: &RealField4) -> Result<(RealField4, f64)> {
        if *field.grid() != *self.grid {
            return Err(Error::Contract("field and propagator grids differ".into()));
        }
        let mut comps: Vec<Vec<Complex64>> = (0..4)
            .map(|j| field.values().iter().map(|v| c(v[j], 0.0)).collect())
            .collect();
        for comp in comps.iter_mut() {
            transform_scalar(&self.grid, comp, FftDirection::Forward);
        }
        let total = self.grid.total_points();
        let mut evolved: Vec<[Complex64; 4]> = (0..total)
            .into_par_iter()
            .map(|i| {
                let v = nalgebra::Vector4::new(comps[0][i], comps[1][i], comps[2][i], comps[3][i]);
                let w = self.modes[i] * v;
                [w[0], w[1], w[2], w[3]]
            })
            .collect();
        for j in 0..4 {
            for (i, v) in evolved.iter().enumerate() {
                comps[j][i] = v[j];
            }
            transform_scalar(&self.grid, &mut comps[j], FftDirection::Inverse);
        }
        evolved.clear();
        let imag = comps
            .iter()
            .flatten()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
        let values = (0..total)
            .map(|i| {
                [
                    comps[0][i].re,
                    comps[1][i].re,
                    comps[2][i].re,
                    comps[3][i].re,
                ]
            })
            .collect();
        Ok((RealField4::new(self.grid.clone(), values)?, imag))
    }
}

/// Evolves the real expansion, returning it with the realness residual.
pub fn evolve_expanded_real(
    field: &RealField4,
    kind: &EquationKind,
    t: f64,
) -> Result<(RealField4, f64)> {
    ExpandedPropagator::new(field.grid_arc(), kind, t)?.apply(field)
}

/// Evolves ψ by exponentiating the real four-component generator per mode.
pub fn evolve_expanded(field: &SpinorField, kind: &EquationKind, t: f64) -> Result<SpinorField> {
    let (out, _) = evolve_expanded_real(&real_expand(field)?, kind, t)?;
    Ok(real_contract(&out))
}

/// Evolves ψ with any backend.
pub fn evolve(
    field: &SpinorField,
    kind: &EquationKind,
    backend: Backend,
    t: f64,
    opts: &EvolveOptions,
) -> Result<Evolved> {
    let stepper = Stepper::new(field.grid_arc(), kind, backend, t, opts)?;
    Stepper::view(&stepper.advance(&stepper.start(field)?)?)
}

/// Closed-form zero-momentum Majorana evolution of a single spinor.
pub fn rest_frame_solution(spinor0: &Spinor2, m: f64, t: f64) -> Result<Spinor2> {
    if !(m.is_finite() && t.is_finite())
        || spinor0
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::NumericDomain(
            "rest-frame inputs must be finite".into(),
        ));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sc = conj2() * spinor0.conjugate();
    let plus = (spinor0 + sc) * c(h, 0.0);
    let minus = (spinor0 - sc) * c(0.0, -h);
    let rot = |sign: f64| {
        let mut m2 = identity2();
        m2[(0, 0)] = Complex64::from_polar(1.0, -sign * m * t);
        m2[(1, 1)] = Complex64::from_polar(1.0, sign * m * t);
        m2
    };
    Ok((rot(1.0) * plus + rot(-1.0) * minus * c(0.0, 1.0)) * c(h, 0.0))
}

/// Single-step evolution operator for one backend.
enum Stepper {
    Decomposed(PairPropagator),
    Expanded(ExpandedPropagator),
    Oracle(DensePropagator),
}

/// Evolution state as carried between steps.
enum StepState {
    Pair(MajoranaPair),
    Psi(SpinorField),
}

impl Stepper {
    fn new(
        grid: &Arc<Grid>,
        kind: &EquationKind,
        backend: Backend,
        dt: f64,
        opts: &EvolveOptions,
    ) -> Result<Self> {
        kind.validate()?;
        check_grid(grid)?;
        Ok(match backend {
            Backend::Decomposed => {
                Stepper::Decomposed(PairPropagator::new(grid, kind, dt, opts.flip_kinetic_sign)?)
            }
            Backend::Expanded => Stepper::Expanded(ExpandedPropagator::new(grid, kind, dt)?),
            Backend::Oracle => {
                Stepper::Oracle(DensePropagator::new(grid, kind, dt, opts.oracle_cap)?)
            }
        })
    }

    fn start(&self, field: &SpinorField) -> Result<StepState> {
        if field.space() != Space::Position {
            return Err(Error::Contract(
                "evolution starts from a position-space field".into(),
            ));
        }
        Ok(match self {
            Stepper::Decomposed(p) => StepState::Pair(p.label(decompose_majorana(field)?)),
            _ => StepState::Psi(field.clone()),
        })
    }

    fn advance(&self, state: &StepState) -> Result<StepState> {
        Ok(match (self, state) {
            (Stepper::Decomposed(p), StepState::Pair(pair)) => StepState::Pair(p.apply(pair)?),
            (Stepper::Expanded(p), StepState::Psi(psi)) => {
                StepState::Psi(real_contract(&p.apply(&real_expand(psi)?)?.0))
            }
            (Stepper::Oracle(p), StepState::Psi(psi)) => StepState::Psi(p.apply(psi)?),
            _ => unreachable!("state does not match stepper"),
        })
    }

    fn view(state: &StepState) -> Result<Evolved> {
        Ok(match state {
            StepState::Pair(pair) => Evolved {
                psi: reconstruct(pair)?,
                pair: Some(pair.clone()),
            },
            StepState::Psi(psi) => Evolved {
                psi: psi.clone(),
                pair: None,
            },
        })
    }
}

/// Called at every recorded time with the step index, time, ψ and (for the
/// decomposed backend) the evolved pair.
pub trait Observer {
    fn observe(
        &mut self,
        step: usize,
        t: f64,
        psi: &SpinorField,
        pair: Option<&MajoranaPair>,
    ) -> Result<()>;
}

impl<F> Observer for F
where
    F: FnMut(usize, f64, &SpinorField, Option<&MajoranaPair>) -> Result<()>,
{
    fn observe(
        &mut self,
        step: usize,
        t: f64,
        psi: &SpinorField,
        pair: Option<&MajoranaPair>,
    ) -> Result<()> {
        self(step, t, psi, pair)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub dt: f64,
    pub steps: usize,
    pub record_every: usize,
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of recorded rows, `1 + ⌊steps / record_every⌋`.
    pub fn records(&self) -> usize {
        1 + self.steps / self.record_every
    }
}

#[derive(Debug, Clone)]
pub struct RecordedRun {
    pub series: ObservableSeries,
    pub final_state: Evolved,
}

/// A run that stopped early, with everything recorded up to the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub series: ObservableSeries,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (after {} records)",
            self.error,
            self.series.records().len()
        )
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Steps `schedule.steps` exact steps of length `dt`, recording observables at
/// `t = 0` and every `record_every` steps.
#[allow(clippy::result_large_err)]
pub fn evolve_recorded(
    field: &SpinorField,
    kind: &EquationKind,
    backend: Backend,
    opts: &EvolveOptions,
    schedule: &Schedule,
    observers: &mut [&mut dyn Observer],
) -> std::result::Result<RecordedRun, RunFailure> {
    let mut series = ObservableSeries::new(SeriesMetadata::new(kind, backend, field.grid()));
    match run_steps(field, kind, backend, opts, schedule, observers, &mut series) {
        Ok(final_state) => Ok(RecordedRun {
            series,
            final_state,
        }),
        Err(error) => Err(RunFailure { error, series }),
    }
}

fn run_steps(
    field: &SpinorField,
    kind: &EquationKind,
    backend: Backend,
    opts: &EvolveOptions,
    schedule: &Schedule,
    observers: &mut [&mut dyn Observer],
    series: &mut ObservableSeries,
) -> Result<Evolved> {
    schedule.validate()?;
    let stepper = Stepper::new(field.grid_arc(), kind, backend, schedule.dt, opts)?;
    let mut state = stepper.start(field)?;
    let mut record = |step: usize, view: &Evolved, series: &mut ObservableSeries| -> Result<()> {
        let t = step as f64 * schedule.dt;
        series.push(observe(t, &view.psi, view.pair.as_ref())?)?;
        for obs in observers.iter_mut() {
            obs.observe(step, t, &view.psi, view.pair.as_ref())?;
        }
        Ok(())
    };
    // the input itself, not its decompose/reconstruct round trip
    let mut view = Evolved {
        psi: field.clone(),
        pair: Stepper::view(&state)?.pair,
    };
    record(0, &view, series)?;
    for step in 1..=schedule.steps {
        state = stepper.advance(&state)?;
        view = Stepper::view(&state)?;
        let finite = view.psi.is_finite()
            && view
                .pair
                .as_ref()
                .is_none_or(|p| p.plus.is_finite() && p.minus.is_finite());
        if !finite {
            return Err(Error::NumericFailure(format!(
                "non-finite state at step {step} (t = {})",
                step as f64 * schedule.dt
            )));
        }
        if step % schedule.record_every == 0 {
            record(step, &view, series)?;
        }
    }
    Ok(view)
}
