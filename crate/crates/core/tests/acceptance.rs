//! Acceptance criteria 1 to 10. Run with `cargo test --test acceptance`; each
//! criterion prints one PASS/FAIL line and the process fails if any does.

mod common;

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use majoranon::algebra::{
    build_majorana_4spinor, charge_conjugate_4c, decoupling_unitary, dirac_mode_hamiltonian,
    hermitian_eigenvalues2, hermitian_eigenvalues4, majorana_mode_hamiltonian,
    majorana_rep_mode_hamiltonian,
};
use majoranon::dynamics::{evolve, evolve_dirac, evolve_expanded_real};
use majoranon::fields::{decompose_majorana, inner, norm, real_expand, sample_initial};
use majoranon::measure::observe;
use majoranon::reference::{dense_generator, DEFAULT_ORACLE_CAP};
use majoranon::{Backend, EquationKind, EvolveOptions, Matrix4, Sign, Spinor2, SpinorField};
use num_complex::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

/// Checks `value <= tol` and describes the comparison.
fn within(what: &str, value: f64, tol: f64) -> Outcome {
    let text = format!("{what} = {value:.2e} (tol {tol:.0e})");
    if value <= tol {
        Ok(text)
    } else {
        Err(text)
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let failed = parts.iter().any(|p| p.is_err());
    let text = parts
        .into_iter()
        .map(|p| p.unwrap_or_else(|e| format!("FAILED {e}")))
        .collect::<Vec<_>>()
        .join("; ");
    if failed {
        Err(text)
    } else {
        Ok(text)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cmax<'a>(it: impl Iterator<Item = &'a Complex64>) -> f64 {
    it.map(|z| z.norm()).fold(0.0, f64::max)
}

fn opts() -> EvolveOptions {
    EvolveOptions::default()
}

fn majorana(m: f64) -> EquationKind {
    EquationKind::Majorana { mass: m }
}

fn max_dev_spinor(field: &SpinorField, target: &Spinor2) -> f64 {
    field
        .values()
        .iter()
        .map(|s| (s - target).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

fn rest_frame() -> Outcome {
    let grid = grid1(8, 10.0);
    let psi0 = SpinorField::uniform(grid.clone(), Spinor2::new(c(1.0, 0.0), c(0.0, 0.0))).unwrap();
    let dirac = EquationKind::Dirac {
        mass: 1.0,
        mass_sign: Sign::Plus,
        kinetic_sign: Sign::Plus,
    };
    let (mut field_dev, mut pop_dev, mut dirac_dev) = (0.0f64, 0.0f64, 0.0f64);
    for i in 1..=63 {
        let t = 0.1 * i as f64;
        let out = evolve(&psi0, &majorana(1.0), Backend::Decomposed, t, &opts()).unwrap();
        let expected = Spinor2::new(c(t.cos(), 0.0), c(0.0, -t.sin()));
        field_dev = field_dev.max(max_dev_spinor(&out.psi, &expected));
        let rec = observe(t, &out.psi, out.pair.as_ref()).unwrap();
        pop_dev = pop_dev.max((rec.pop_up - t.cos().powi(2)).abs());
        let d = evolve(&psi0, &dirac, Backend::Decomposed, t, &opts()).unwrap();
        dirac_dev = dirac_dev.max((observe(t, &d.psi, None).unwrap().pop_up - 1.0).abs());
    }
    all(vec![
        within("max |psi - (cos t, -i sin t)|", field_dev, 1e-12),
        within("max |pop_up - cos^2 t|", pop_dev, 1e-12),
        within("max |dirac pop_up - 1|", dirac_dev, 1e-12),
    ])
}

fn decomposition_fidelity() -> Outcome {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let grid = grid1(16, 10.0);
    let psi = SpinorField::uniform(grid, Spinor2::new(c(1.0, 0.0), c(0.0, 0.0))).unwrap();
    let pair = decompose_majorana(&psi).unwrap();
    let rest = max_dev_spinor(&pair.plus, &Spinor2::new(c(h, 0.0), c(-h, 0.0))).max(
        max_dev_spinor(&pair.minus, &Spinor2::new(c(0.0, -h), c(0.0, -h))),
    );

    let (p0, delta) = (0.5, 2.0);
    let grid = grid1(256, 40.0);
    let psi = sample_initial(&grid, &gaussian(&[p0], delta, false)).unwrap();
    let pair = decompose_majorana(&psi).unwrap();
    let chi_minus = Spinor2::new(c(0.0, h), c(0.0, h));
    let mut gauss: f64 = 0.0;
    for (j, x) in grid.coordinates(0).into_iter().enumerate() {
        let env = (-x * x / (4.0 * delta * delta)).exp();
        let plus = chi_minus * c(2.0 * (p0 * x).sin() * env, 0.0);
        let minus = chi_minus * c(-2.0 * (p0 * x).cos() * env, 0.0);
        gauss = gauss
            .max(cmax((pair.plus.values()[j] - plus).iter()))
            .max(cmax((pair.minus.values()[j] - minus).iter()));
    }
    all(vec![
        within("rest-frame pair deviation", rest, 1e-15),
        within("gaussian closed-form deviation", gauss, 1e-12),
    ])
}

fn decoupling() -> Outcome {
    let u = decoupling_unitary();
    let mut worst: f64 = 0.0;
    for m in [0.0, 0.5, 2.0] {
        for i in 0..64 {
            let k = -10.0 + 20.0 * i as f64 / 63.0;
            let lhs = u.adjoint() * majorana_mode_hamiltonian(k, m) * u;
            let hp = dirac_mode_hamiltonian(&[k], m, Sign::Plus, Sign::Plus).unwrap();
            let hm = dirac_mode_hamiltonian(&[k], m, Sign::Minus, Sign::Plus).unwrap();
            let mut rhs = Matrix4::zeros();
            rhs.fixed_view_mut::<2, 2>(0, 0).copy_from(&hp);
            rhs.fixed_view_mut::<2, 2>(2, 2).copy_from(&hm);
            worst = worst.max(cmax((lhs - rhs).iter()));
        }
    }
    within("max |U'H_M U - diag(H+, H-)|", worst, 1e-13)
}

fn triangle_1d() -> Outcome {
    let grid = grid1(64, 40.0);
    let psi0 = sample_initial(&grid, &gaussian(&[0.5], 2.0, true)).unwrap();
    let kind = majorana(1.0);
    let runs: Vec<_> = Backend::ALL
        .iter()
        .map(|&b| (b, evolve(&psi0, &kind, b, 5.0, &opts()).unwrap().psi))
        .collect();
    let mut dev: f64 = 0.0;
    let mut drift: f64 = 0.0;
    for (i, (_, a)) in runs.iter().enumerate() {
        drift = drift.max((norm(a) - norm(&psi0)).abs());
        for (_, b) in &runs[i + 1..] {
            dev = dev.max(a.max_abs_diff(b).unwrap());
        }
    }
    all(vec![
        within("max pairwise backend deviation", dev, 1e-10),
        within("max norm drift", drift, 1e-12),
    ])
}

fn pair_2d() -> Outcome {
    let grid = grid2(32, 20.0);
    let psi0 = sample_initial(&grid, &gaussian(&[0.5, -0.3], 2.0, true)).unwrap();
    let kind = majorana(1.0);
    let exp = evolve(&psi0, &kind, Backend::Expanded, 2.0, &opts())
        .unwrap()
        .psi;
    let dec = evolve(&psi0, &kind, Backend::Decomposed, 2.0, &opts())
        .unwrap()
        .psi;
    let flipped_opts = EvolveOptions {
        flip_kinetic_sign: true,
        ..opts()
    };
    let flipped = evolve(&psi0, &kind, Backend::Decomposed, 2.0, &flipped_opts)
        .unwrap()
        .psi;
    let flipped_dev = flipped.max_abs_diff(&exp).unwrap();
    let flipped_outcome = if flipped_dev > 1e-2 {
        Ok(format!(
            "flipped-sign deviation = {flipped_dev:.2e} (> 1e-2)"
        ))
    } else {
        Err(format!(
            "flipped-sign deviation = {flipped_dev:.2e} (should exceed 1e-2)"
        ))
    };
    all(vec![
        within(
            "decomposed vs expanded",
            dec.max_abs_diff(&exp).unwrap(),
            1e-10,
        ),
        flipped_outcome,
    ])
}

fn dirac_majorana() -> Outcome {
    let grid = grid1(32, 20.0);
    let psi0 = sample_initial(&grid, &gaussian(&[0.5], 2.0, true)).unwrap();
    let t = 3.0;
    let dm = |d: f64, m: f64| EquationKind::DiracMajorana {
        dirac_mass: d,
        majorana_mass: m,
    };
    let dec = evolve(&psi0, &dm(1.0, 0.5), Backend::Decomposed, t, &opts())
        .unwrap()
        .psi;
    let oracle = evolve(&psi0, &dm(1.0, 0.5), Backend::Oracle, t, &opts())
        .unwrap()
        .psi;
    let dirac_limit = evolve(&psi0, &dm(1.0, 0.0), Backend::Decomposed, t, &opts())
        .unwrap()
        .psi;
    let dirac = evolve_dirac(&psi0, 1.0, Sign::Plus, Sign::Plus, t).unwrap();
    let maj_limit = evolve(&psi0, &dm(0.0, 0.5), Backend::Decomposed, t, &opts())
        .unwrap()
        .psi;
    let maj = evolve(&psi0, &majorana(0.5), Backend::Expanded, t, &opts())
        .unwrap()
        .psi;
    all(vec![
        within(
            "decomposed vs oracle",
            dec.max_abs_diff(&oracle).unwrap(),
            1e-10,
        ),
        within(
            "m_M -> 0 vs Dirac",
            dirac_limit.max_abs_diff(&dirac).unwrap(),
            1e-12,
        ),
        within(
            "m_D -> 0 vs Majorana",
            maj_limit.max_abs_diff(&maj).unwrap(),
            1e-12,
        ),
    ])
}

fn spectra() -> Outcome {
    let mut equiv: f64 = 0.0;
    let mut closed: f64 = 0.0;
    for m in [0.0, 1.0, 2.5] {
        for i in 0..64 {
            let k = -10.0 + 20.0 * i as f64 / 63.0;
            let a = hermitian_eigenvalues4(&majorana_mode_hamiltonian(k, m)).unwrap();
            let b = hermitian_eigenvalues4(&majorana_rep_mode_hamiltonian(k, m)).unwrap();
            let p = hermitian_eigenvalues2(
                &dirac_mode_hamiltonian(&[k], m, Sign::Plus, Sign::Plus).unwrap(),
            );
            let q = hermitian_eigenvalues2(
                &dirac_mode_hamiltonian(&[k], m, Sign::Minus, Sign::Plus).unwrap(),
            );
            let mut pq = [p[0], p[1], q[0], q[1]];
            pq.sort_by(f64::total_cmp);
            let e = (k * k + m * m).sqrt();
            let target = [-e, -e, e, e];
            for j in 0..4 {
                equiv = equiv.max((a[j] - b[j]).abs()).max((a[j] - pq[j]).abs());
                closed = closed
                    .max((a[j] - target[j]).abs())
                    .max((b[j] - target[j]).abs());
            }
        }
    }
    all(vec![
        within("spectral mismatch", equiv, 1e-12),
        within("deviation from +-sqrt(k^2+m^2)", closed, 1e-12),
    ])
}

fn structural() -> Outcome {
    let grid = grid1(32, 12.0);
    let psi = random_field(&grid, 7);
    let kind = majorana(0.8);

    let out = evolve(&psi, &kind, Backend::Decomposed, 1.7, &opts()).unwrap();
    let condition = out.pair.as_ref().unwrap().majorana_residual().unwrap();

    let (_, imag) = evolve_expanded_real(&real_expand(&psi).unwrap(), &kind, 1.7).unwrap();

    let small = grid1(16, 1.0);
    let a = decompose_majorana(&random_field(&small, 11)).unwrap();
    let b = decompose_majorana(&random_field(&small, 12)).unwrap();
    let im_inner = [
        inner(&a.plus, &b.plus).unwrap().im,
        inner(&a.plus, &b.minus).unwrap().im,
        inner(&a.minus, &b.minus).unwrap().im,
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0, f64::max);

    let pair = decompose_majorana(&psi).unwrap();
    let norm_id =
        (norm(&psi).powi(2) - (norm(&pair.plus).powi(2) + norm(&pair.minus).powi(2)) / 2.0).abs();

    let mut semigroup: f64 = 0.0;
    for backend in Backend::ALL {
        let whole = evolve(&psi, &kind, backend, 2.5, &opts()).unwrap().psi;
        let half = evolve(&psi, &kind, backend, 1.1, &opts()).unwrap().psi;
        let rest = evolve(&half, &kind, backend, 1.4, &opts()).unwrap().psi;
        semigroup = semigroup.max(whole.max_abs_diff(&rest).unwrap());
    }

    let mut antisym: f64 = 0.0;
    let kinds = [
        EquationKind::Weyl,
        majorana(1.0),
        EquationKind::Dirac {
            mass: 1.0,
            mass_sign: Sign::Minus,
            kinetic_sign: Sign::Plus,
        },
        EquationKind::DiracMajorana {
            dirac_mass: 1.0,
            majorana_mass: 0.5,
        },
    ];
    for g in [grid1(16, 8.0), grid2(6, 5.0)] {
        for kind in &kinds {
            let a = dense_generator(&g, kind, DEFAULT_ORACLE_CAP)
                .unwrap()
                .matrix;
            antisym = antisym.max((&a + a.transpose()).amax());
        }
    }
    all(vec![
        within("Majorana condition after evolution", condition, 1e-12),
        within("expanded imaginary residual", imag, 1e-12),
        within("Im of Majorana inner products", im_inner, 1e-14),
        within("norm identity", norm_id, 1e-12),
        within("semigroup", semigroup, 1e-11),
        within("generator antisymmetry", antisym, 1e-12),
    ])
}

fn four_spinor() -> Outcome {
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s = build_majorana_4spinor(&random_spinor(&mut r)).unwrap();
        worst = worst.max(cmax((charge_conjugate_4c(&s).unwrap() - s).iter()));
    }
    within("max |C(psi_M) - psi_M| over 100 inputs", worst, 1e-14)
}

const DETERMINISM_CONFIG: &str = r#"{
    "dimension": 1,
    "equation": {"kind": "majorana", "mass": 1.0},
    "grid": {"n": [64], "length": [40.0]},
    "initial": {"type": "gaussian", "p0": [0.5], "delta": 2.0, "spinor": [[1, 0], [1, 0]], "normalize": true},
    "backend": "decomposed",
    "time": {"dt": 0.05, "steps": 100, "record_every": 5},
    "output": {"series": "out/series.csv", "metadata": "out/metadata.json", "snapshots": "out/snap_{label}.csv"}
}"#;

fn simulate_in(dir: &Path) -> (Vec<u8>, serde_json::Value, Vec<u8>) {
    let config = dir.join("run.json");
    fs::write(&config, DETERMINISM_CONFIG).unwrap();
    let args = [
        "majoranon",
        "simulate",
        "--quiet",
        "--config",
        config.to_str().unwrap(),
    ];
    let code = majoranon::cli::run(args, &mut Vec::new(), &mut Vec::new());
    assert_eq!(code, 0);
    let series = fs::read(dir.join("out/series.csv")).unwrap();
    let mut meta: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.join("out/metadata.json")).unwrap()).unwrap();
    meta.as_object_mut().unwrap().remove("wall_seconds");
    let snap = fs::read(dir.join("out/snap_000100.csv")).unwrap();
    (series, meta, snap)
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = simulate_in(a.path());
    let second = simulate_in(b.path());
    let identical = if first == second {
        Ok("series, snapshot and metadata byte-identical".to_string())
    } else {
        Err("outputs differ between runs".to_string())
    };

    let grid = grid2(12, 10.0);
    let psi = random_field(&grid, 3);
    let kind = majorana(1.0);
    let mut threads: f64 = 0.0;
    for backend in Backend::ALL {
        let on = |n: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| evolve(&psi, &kind, backend, 1.3, &opts()).unwrap().psi)
        };
        threads = threads.max(on(1).max_abs_diff(&on(4)).unwrap());
    }
    all(vec![identical, within("1 vs 4 threads", threads, 1e-13)])
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("rest-frame Majoranon", rest_frame, Duration::from_secs(1)),
        (
            "decomposition fidelity",
            decomposition_fidelity,
            Duration::from_secs(1),
        ),
        ("decoupling unitary", decoupling, Duration::from_secs(1)),
        (
            "backend triangle 1+1D",
            triangle_1d,
            Duration::from_secs(10),
        ),
        ("backend pair 2+1D", pair_2d, Duration::from_secs(30)),
        (
            "Dirac-Majorana splitting",
            dirac_majorana,
            Duration::from_secs(10),
        ),
        ("spectral equivalence", spectra, Duration::from_secs(1)),
        ("structural invariants", structural, Duration::from_secs(10)),
        (
            "four-spinor construction",
            four_spinor,
            Duration::from_secs(1),
        ),
        ("determinism", determinism, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let slow = elapsed > budget;
        let (status, detail) = match outcome {
            Ok(d) if !slow => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; runtime over budget")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status} {name}: {detail} [{:.3} s / {} s]",
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
