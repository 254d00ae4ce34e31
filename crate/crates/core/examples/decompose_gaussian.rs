//! Splits a moving Gaussian packet with spinor (1, 1) into its two Majorana
//! components and compares them with the closed forms
//! `ψ+ = 2 sin(p0 x) g(x) χ−`, `ψ− = −2 cos(p0 x) g(x) χ−`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use majoranon::fields::{
    decompose_majorana, make_grid, norm, reconstruct, sample_initial, InitialState,
};
use majoranon::{Spinor2, SpinorField};
use num_complex::Complex64;

fn main() -> majoranon::Result<()> {
    let (p0, delta) = (0.5, 2.0);
    let grid = Arc::new(make_grid(1, &[256], &[40.0])?);
    let one = Complex64::new(1.0, 0.0);
    let psi = sample_initial(
        &grid,
        &InitialState::Gaussian {
            p0: vec![p0],
            delta,
            spinor: Spinor2::new(one, one),
            normalize: false,
        },
    )?;
    let pair = decompose_majorana(&psi)?;

    let chi_minus = Spinor2::new(
        Complex64::new(0.0, FRAC_1_SQRT_2),
        Complex64::new(0.0, FRAC_1_SQRT_2),
    );
    let closed = |f: fn(f64) -> f64, scale: f64| {
        SpinorField::from_fn(grid.clone(), |x| {
            let g = (-x[0] * x[0] / (4.0 * delta * delta)).exp();
            chi_minus * Complex64::new(scale * f(p0 * x[0]) * g, 0.0)
        })
    };
    let plus = closed(f64::sin, 2.0)?;
    let minus = closed(f64::cos, -2.0)?;

    println!(
        "|psi+ - closed form|max = {:.3e}",
        pair.plus.max_abs_diff(&plus)?
    );
    println!(
        "|psi- - closed form|max = {:.3e}",
        pair.minus.max_abs_diff(&minus)?
    );
    println!(
        "Majorana residual       = {:.3e}",
        pair.majorana_residual()?
    );
    println!(
        "round trip              = {:.3e}",
        reconstruct(&pair)?.max_abs_diff(&psi)?
    );
    println!(
        "|psi|^2 = {:.12}, (|psi+|^2 + |psi-|^2)/2 = {:.12}",
        norm(&psi).powi(2),
        (norm(&pair.plus).powi(2) + norm(&pair.minus).powi(2)) / 2.0
    );
    Ok(())
}
