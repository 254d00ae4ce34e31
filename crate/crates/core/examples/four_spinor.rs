//! Builds four-component Majorana spinors from left-chiral two-spinors and
//! checks they are fixed by charge conjugation. Also prints the named
//! representation matrices.

use majoranon::algebra::{
    build_majorana_4spinor, charge_conjugate_4c, constant_matrix, ConstantMatrix, ConstantName,
};
use majoranon::Spinor2;
use num_complex::Complex64;

fn main() -> majoranon::Result<()> {
    let inputs = [
        Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        Spinor2::new(Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5)),
    ];
    for psi_l in &inputs {
        let s = build_majorana_4spinor(psi_l)?;
        let residual = (charge_conjugate_4c(&s)? - s)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        println!("psi_L = [{}, {}]", psi_l[0], psi_l[1]);
        println!("  psi_M = [{}, {}, {}, {}]", s[0], s[1], s[2], s[3]);
        println!("  |C(psi_M) - psi_M| = {residual:.1e}");
    }

    for name in ConstantName::ALL {
        println!("\n{name}:");
        match constant_matrix(name) {
            ConstantMatrix::Two(m) => print_rows(m.nrows(), m.ncols(), |r, c| m[(r, c)]),
            ConstantMatrix::Four(m) => print_rows(m.nrows(), m.ncols(), |r, c| m[(r, c)]),
            ConstantMatrix::Expansion(m) => print_rows(m.nrows(), m.ncols(), |r, c| m[(r, c)]),
        }
    }
    Ok(())
}

fn print_rows(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> Complex64) {
    for r in 0..rows {
        let row: Vec<String> = (0..cols)
            .map(|c| {
                let z = entry(r, c);
                format!("{:>4}{:+}i", z.re + 0.0, z.im + 0.0)
            })
            .collect();
        println!("  {}", row.join("  "));
    }
}
