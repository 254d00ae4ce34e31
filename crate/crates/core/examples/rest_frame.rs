//! A Majoranon at rest oscillates between its two spin components, while a
//! Dirac particle prepared the same way only picks up a phase.
//!
//! ```text
//! cargo run --example rest_frame
//! ```

use std::sync::Arc;

use majoranon::dynamics::{evolve_recorded, Schedule};
use majoranon::fields::make_grid;
use majoranon::{Backend, EquationKind, EvolveOptions, Sign, Spinor2, SpinorField};
use num_complex::Complex64;

fn main() -> majoranon::Result<()> {
    // no momentum dependence, so a tiny grid is enough
    let grid = Arc::new(make_grid(1, &[4], &[1.0])?);
    let up = Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let psi0 = SpinorField::uniform(grid, up)?;
    let schedule = Schedule {
        dt: 0.25,
        steps: 25,
        record_every: 1,
    };

    let majorana = EquationKind::Majorana { mass: 1.0 };
    let dirac = EquationKind::Dirac {
        mass: 1.0,
        mass_sign: Sign::Plus,
        kinetic_sign: Sign::Plus,
    };
    let opts = EvolveOptions::default();
    let m = evolve_recorded(
        &psi0,
        &majorana,
        Backend::Decomposed,
        &opts,
        &schedule,
        &mut [],
    )
    .map_err(|f| f.error)?;
    let d = evolve_recorded(
        &psi0,
        &dirac,
        Backend::Decomposed,
        &opts,
        &schedule,
        &mut [],
    )
    .map_err(|f| f.error)?;

    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "t", "majorana", "cos^2 t", "dirac"
    );
    for (a, b) in m.series.records().iter().zip(d.series.records()) {
        println!(
            "{:>6.2} {:>12.9} {:>12.9} {:>12.9}",
            a.t,
            a.pop_up,
            a.t.cos().powi(2),
            b.pop_up
        );
    }
    Ok(())
}
