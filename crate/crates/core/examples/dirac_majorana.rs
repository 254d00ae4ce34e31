//! A field with both a Dirac mass and a Majorana mass splits into two
//! Majorana fields of masses m_D + m_M and m_D − m_M. Compare that route with
//! the dense reference integrator, and watch the masses go to either limit.

use std::sync::Arc;

use majoranon::dynamics::{evolve, evolve_dirac};
use majoranon::fields::{make_grid, sample_initial, InitialState};
use majoranon::{Backend, EquationKind, EvolveOptions, Sign, Spinor2};
use num_complex::Complex64;

fn main() -> majoranon::Result<()> {
    let grid = Arc::new(make_grid(1, &[32], &[20.0])?);
    let psi0 = sample_initial(
        &grid,
        &InitialState::Gaussian {
            p0: vec![0.5],
            delta: 2.0,
            spinor: Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)),
            normalize: true,
        },
    )?;
    let opts = EvolveOptions::default();
    let t = 3.0;
    let dm = |d, m| EquationKind::DiracMajorana {
        dirac_mass: d,
        majorana_mass: m,
    };

    let out = evolve(&psi0, &dm(1.0, 0.5), Backend::Decomposed, t, &opts)?;
    let pair = out
        .pair
        .as_ref()
        .expect("decomposed backend returns the pair");
    println!(
        "component masses: {:?} / {:?}",
        pair.mass_plus, pair.mass_minus
    );
    let oracle = evolve(&psi0, &dm(1.0, 0.5), Backend::Oracle, t, &opts)?;
    println!(
        "decomposed vs oracle: {:.3e}",
        out.psi.max_abs_diff(&oracle.psi)?
    );

    let no_majorana = evolve(&psi0, &dm(1.0, 0.0), Backend::Decomposed, t, &opts)?.psi;
    let dirac = evolve_dirac(&psi0, 1.0, Sign::Plus, Sign::Plus, t)?;
    println!(
        "m_M = 0 vs Dirac    : {:.3e}",
        no_majorana.max_abs_diff(&dirac)?
    );

    let no_dirac = evolve(&psi0, &dm(0.0, 0.5), Backend::Decomposed, t, &opts)?.psi;
    let majorana = evolve(
        &psi0,
        &EquationKind::Majorana { mass: 0.5 },
        Backend::Expanded,
        t,
        &opts,
    )?
    .psi;
    println!(
        "m_D = 0 vs Majorana : {:.3e}",
        no_dirac.max_abs_diff(&majorana)?
    );
    Ok(())
}
