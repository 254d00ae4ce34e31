//! Evolves one wave packet with the decomposed, expanded and dense-oracle
//! backends and prints how far apart they end up.

use std::sync::Arc;
use std::time::Instant;

use majoranon::dynamics::evolve;
use majoranon::fields::{make_grid, norm, sample_initial, InitialState};
use majoranon::{Backend, EquationKind, EvolveOptions, Spinor2};
use num_complex::Complex64;

fn main() -> majoranon::Result<()> {
    let grid = Arc::new(make_grid(1, &[64], &[40.0])?);
    let psi0 = sample_initial(
        &grid,
        &InitialState::Gaussian {
            p0: vec![0.5],
            delta: 2.0,
            spinor: Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            normalize: true,
        },
    )?;
    let kind = EquationKind::Majorana { mass: 1.0 };

    let mut results = Vec::new();
    for backend in Backend::ALL {
        let start = Instant::now();
        let psi = evolve(&psi0, &kind, backend, 5.0, &EvolveOptions::default())?.psi;
        println!(
            "{backend:>10}: norm {:.15}  ({:.1} ms)",
            norm(&psi),
            start.elapsed().as_secs_f64() * 1e3
        );
        results.push((backend, psi));
    }
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            println!(
                "max |{} - {}| = {:.3e}",
                results[i].0,
                results[j].0,
                results[i].1.max_abs_diff(&results[j].1)?
            );
        }
    }
    Ok(())
}
