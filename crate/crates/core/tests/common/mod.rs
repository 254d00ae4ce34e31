#![allow(dead_code)]

use std::sync::Arc;

use majoranon::fields::{make_grid, Grid, InitialState};
use majoranon::{Spinor2, SpinorField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn grid1(n: usize, l: f64) -> Arc<Grid> {
    Arc::new(make_grid(1, &[n], &[l]).unwrap())
}

pub fn grid2(n: usize, l: f64) -> Arc<Grid> {
    Arc::new(make_grid(2, &[n, n], &[l, l]).unwrap())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_spinor(rng: &mut impl Rng) -> Spinor2 {
    Spinor2::new(
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
    )
}

/// White-noise field; exercises every Fourier mode including Nyquist.
pub fn random_field(grid: &Arc<Grid>, seed: u64) -> SpinorField {
    let mut r = rng(seed);
    let values = (0..grid.total_points())
        .map(|_| random_spinor(&mut r))
        .collect();
    SpinorField::new(grid.clone(), values, majoranon::Space::Position).unwrap()
}

pub fn gaussian(p0: &[f64], delta: f64, normalize: bool) -> InitialState {
    InitialState::Gaussian {
        p0: p0.to_vec(),
        delta,
        spinor: Spinor2::new(c(1.0, 0.0), c(1.0, 0.0)),
        normalize,
    }
}
