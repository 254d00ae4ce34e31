//! Per-mode spectra of the 4×4 Majorana Hamiltonian, its Majorana-
//! representation form and the block-diagonal pair diag(H+, H−). All three
//! give ±√(k² + m²), each twice.

use majoranon::algebra::{
    decoupling_unitary, dirac_mode_hamiltonian, hermitian_eigenvalues2, hermitian_eigenvalues4,
    majorana_mode_hamiltonian, majorana_rep_mode_hamiltonian,
};
use majoranon::Sign;

fn main() -> majoranon::Result<()> {
    let m = 1.0;
    println!("{:>6} {:>40} {:>12}", "k", "eig H_M", "sqrt(k²+m²)");
    for i in 0..9 {
        let k = -4.0 + i as f64;
        let hm = hermitian_eigenvalues4(&majorana_mode_hamiltonian(k, m))?;
        let hr = hermitian_eigenvalues4(&majorana_rep_mode_hamiltonian(k, m))?;
        let p = hermitian_eigenvalues2(&dirac_mode_hamiltonian(&[k], m, Sign::Plus, Sign::Plus)?);
        let q = hermitian_eigenvalues2(&dirac_mode_hamiltonian(&[k], m, Sign::Minus, Sign::Plus)?);
        let mut pq = [p[0], p[1], q[0], q[1]];
        pq.sort_by(f64::total_cmp);
        let spread = (0..4)
            .map(|j| (hm[j] - hr[j]).abs().max((hm[j] - pq[j]).abs()))
            .fold(0.0, f64::max);
        println!(
            "{k:>6.1} {:>40} {:>12.9}   spread {spread:.1e}",
            format!("{:+.6} {:+.6} {:+.6} {:+.6}", hm[0], hm[1], hm[2], hm[3]),
            (k * k + m * m).sqrt()
        );
    }

    // the unitary that block-diagonalises H_M
    let u = decoupling_unitary();
    let rotated = u.adjoint() * majorana_mode_hamiltonian(2.0, m) * u;
    println!("\nU'H_M(2)U =");
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|c| format!("{:+.3}{:+.3}i", rotated[(r, c)].re, rotated[(r, c)].im))
            .collect();
        println!("  {}", row.join("  "));
    }
    Ok(())
}
