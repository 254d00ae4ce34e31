//! 2+1D packet on a 32×32 grid. The decomposed and expanded backends agree,
//! and flipping the kinetic sign of the decomposed components breaks that.

use std::sync::Arc;

use majoranon::dynamics::evolve;
use majoranon::fields::{make_grid, sample_initial, InitialState};
use majoranon::measure::observe;
use majoranon::{Backend, EquationKind, EvolveOptions, Spinor2};
use num_complex::Complex64;

fn main() -> majoranon::Result<()> {
    let grid = Arc::new(make_grid(2, &[32, 32], &[20.0, 20.0])?);
    let psi0 = sample_initial(
        &grid,
        &InitialState::Gaussian {
            p0: vec![0.5, -0.3],
            delta: 2.0,
            spinor: Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            normalize: true,
        },
    )?;
    let kind = EquationKind::Majorana { mass: 1.0 };
    let t = 2.0;
    let opts = EvolveOptions::default();

    let dec = evolve(&psi0, &kind, Backend::Decomposed, t, &opts)?;
    let exp = evolve(&psi0, &kind, Backend::Expanded, t, &opts)?;
    let flipped = evolve(
        &psi0,
        &kind,
        Backend::Decomposed,
        t,
        &EvolveOptions {
            flip_kinetic_sign: true,
            ..opts
        },
    )?;

    let rec = observe(t, &dec.psi, dec.pair.as_ref())?;
    println!(
        "<x> = ({:.6}, {:.6}), <p> = ({:.6}, {:.6})",
        rec.x_mean[0], rec.x_mean[1], rec.p_mean[0], rec.p_mean[1]
    );
    println!(
        "decomposed vs expanded         : {:.3e}",
        dec.psi.max_abs_diff(&exp.psi)?
    );
    println!(
        "flipped kinetic sign vs expanded: {:.3e}",
        flipped.psi.max_abs_diff(&exp.psi)?
    );
    Ok(())
}
