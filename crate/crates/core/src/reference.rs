//! Dense reference evolution.
//!
//! Assembles the full real generator of the expanded equation on the grid,
//! using a position-space spectral differentiation matrix, and evolves by one
//! dense matrix exponential. Slow and memory hungry; meant for checking the
//! per-mode backends on small grids.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix4 as RealMatrix4};

use crate::dynamics::EquationKind;
use crate::error::{Error, Result};
use crate::fields::{real_contract, real_expand, Grid, RealField4, SpinorField};
use crate::linalg::expm;

/// Default limit on grid points (generator side `4 × cap`).
pub const DEFAULT_ORACLE_CAP: usize = 4096;

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

fn derivative_1d(n: usize, length: f64) -> DMatrix<f64> {
    let scale = std::f64::consts::PI / length;
    DMatrix::from_fn(n, n, |j, l| {
        if j == l {
            0.0
        } else {
            let d = j as i64 - l as i64;
            let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            scale * sign * cot(std::f64::consts::PI * d as f64 / n as f64)
        }
    })
}

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Fourier spectral differentiation matrix `∂/∂x_axis` acting on row-major
/// samples. Real and antisymmetric; the Nyquist mode is differentiated to
/// zero.
pub fn spectral_derivative(grid: &Grid, axis: usize) -> Result<DMatrix<f64>> {
    if axis >= grid.dim() {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} out of range for a {}-dimensional grid",
            grid.dim()
        )));
    }
    let mut out = DMatrix::<f64>::identity(1, 1);
    for a in 0..grid.dim() {
        let factor = if a == axis {
            derivative_1d(grid.shape()[a], grid.lengths()[a])
        } else {
            DMatrix::identity(grid.shape()[a], grid.shape()[a])
        };
        out = kron(&out, &factor);
    }
    Ok(out)
}

/// Full real generator `Ψ̇ = GΨ`, components ordered
/// `(Re ψ1, Re ψ2, Im ψ1, Im ψ2)` outermost, grid points innermost.
#[derive(Debug, Clone)]
pub struct DenseGenerator {
    pub matrix: DMatrix<f64>,
    pub kind: EquationKind,
    pub grid: Grid,
}

fn check_cap(grid: &Grid, cap: usize) -> Result<()> {
    if grid.total_points() > cap {
        return Err(Error::Resource(format!(
            "dense oracle limited to {cap} grid points, grid has {}",
            grid.total_points()
        )));
    }
    Ok(())
}

/// Real 4×4 block for the complex-linear coefficient `X` in `ψ̇ = Xψ`.
fn linear_block(x: &crate::algebra::Matrix2) -> RealMatrix4<f64> {
    let mut s = RealMatrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let z = x[(i, j)];
            s[(i, j)] = z.re;
            s[(i, j + 2)] = -z.im;
            s[(i + 2, j)] = z.im;
            s[(i + 2, j + 2)] = z.re;
        }
    }
    s
}

/// Real 4×4 block for the antilinear coefficient `Y` in `ψ̇ = Yψ*`.
fn antilinear_block(y: &crate::algebra::Matrix2) -> RealMatrix4<f64> {
    let mut s = RealMatrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let z = y[(i, j)];
            s[(i, j)] = z.re;
            s[(i, j + 2)] = z.im;
            s[(i + 2, j)] = z.im;
            s[(i + 2, j + 2)] = -z.re;
        }
    }
    s
}

fn add_kron(out: &mut DMatrix<f64>, spin: &RealMatrix4<f64>, space: &DMatrix<f64>) {
    let n = space.nrows();
    for r in 0..4 {
        for c in 0..4 {
            let w = spin[(r, c)];
            if w != 0.0 {
                let mut block = out.view_mut((r * n, c * n), (n, n));
                block.zip_apply(space, |o, s| *o += w * s);
            }
        }
    }
}

pub fn dense_generator(grid: &Grid, kind: &EquationKind, cap: usize) -> Result<DenseGenerator> {
    check_cap(grid, cap)?;
    kind.validate()?;
    let (symbol, conjugate) = kind.symbol();
    let i = num_complex::Complex64::new(0.0, 1.0);
    let n = grid.total_points();
    let mut g = DMatrix::<f64>::zeros(4 * n, 4 * n);
    // −i·Aₐ·(−i∂ₐ) = −Aₐ∂ₐ
    for axis in 0..grid.dim() {
        let d = spectral_derivative(grid, axis)?;
        add_kron(&mut g, &linear_block(&(-symbol.kinetic[axis])), &d);
    }
    let ident = DMatrix::<f64>::identity(n, n);
    let local = linear_block(&(symbol.mass * (-i))) + antilinear_block(&(conjugate * (-i)));
    add_kron(&mut g, &local, &ident);
    Ok(DenseGenerator {
        matrix: g,
        kind: kind.clone(),
        grid: grid.clone(),
    })
}

/// `exp(G t)` on the full grid.
#[derive(Debug, Clone)]
pub struct DensePropagator {
    grid: Arc<Grid>,
    matrix: DMatrix<f64>,
}

impl DensePropagator {
    pub fn new(grid: &Arc<Grid>, kind: &EquationKind, t: f64, cap: usize) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NumericDomain(format!("time {t} is not finite")));
        }
        let generator = dense_generator(grid, kind, cap)?;
        if generator.matrix.iter().any(|v| !(v * t).is_finite()) {
            return Err(Error::NumericFailure(
                "generator times step overflows".into(),
            ));
        }
        Ok(DensePropagator {
            grid: grid.clone(),
            matrix: expm(&(generator.matrix * t))?,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply_real(&self, field: &RealField4) -> Result<RealField4> {
        if *field.grid() != *self.grid {
            return Err(Error::Contract("field and propagator grids differ".into()));
        }
        let n = self.grid.total_points();
        let v = DVector::from_fn(4 * n, |r, _| field.values()[r % n][r / n]);
        let w = &self.matrix * v;
        let values = (0..n)
            .map(|p| [w[p], w[n + p], w[2 * n + p], w[3 * n + p]])
            .collect();
        RealField4::new(self.grid.clone(), values)
            .map_err(|_| Error::NumericFailure("oracle produced a non-finite state".into()))
    }

    pub fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        Ok(real_contract(&self.apply_real(&real_expand(field)?)?))
    }
}

pub fn dense_evolve(
    field: &SpinorField,
    kind: &EquationKind,
    t: f64,
    cap: usize,
) -> Result<SpinorField> {
    DensePropagator::new(field.grid_arc(), kind, t, cap)?.apply(field)
}
