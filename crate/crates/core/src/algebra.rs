//! Fixed-representation spin algebra.
//!
//! Pauli matrices, the two- and four-component charge-conjugation maps, the
//! Dirac matrices used for the four-component construction, and the
//! per-momentum-mode generators of every equation evolved by this crate.
//!
//! Conventions: natural units (ħ = c = 1); Kronecker products `a ⊗ b` put `a`
//! on the outer (block) index; the real expansion of a two-spinor is ordered
//! `(Re ψ1, Re ψ2, Im ψ1, Im ψ2)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2x4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix2 = nalgebra::Matrix2<Complex64>;
pub type Matrix4 = nalgebra::Matrix4<Complex64>;
pub type Spinor2 = Vector2<Complex64>;
pub type Spinor4 = Vector4<Complex64>;
/// The 2×4 map `M = (1₂, i1₂)` taking the real expansion back to a two-spinor.
pub type ExpansionMap = Matrix2x4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A sign carried by mass and kinetic terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

pub fn identity2() -> Matrix2 {
    Matrix2::identity()
}

pub fn sigma_x() -> Matrix2 {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Matrix2 {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Matrix2 {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// `ε = iσy`.
pub fn epsilon() -> Matrix2 {
    sigma_y() * I
}

/// Two-component charge-conjugation matrix `B = −iσzσy`; `ψ_c = Bψ*`.
pub fn conj2() -> Matrix2 {
    sigma_z() * sigma_y() * (-I)
}

/// Kronecker product with `a` on the block index.
pub fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

fn block_diag(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut out = Matrix4::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    out
}

/// Names accepted by [`constant_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantName {
    SigmaX,
    SigmaY,
    SigmaZ,
    Epsilon,
    Conj2,
    CTilde,
    Gamma0Chiral,
    Gamma0Majorana,
    Gamma3Majorana,
    ExpansionMap,
}

impl ConstantName {
    pub const ALL: [ConstantName; 10] = [
        ConstantName::SigmaX,
        ConstantName::SigmaY,
        ConstantName::SigmaZ,
        ConstantName::Epsilon,
        ConstantName::Conj2,
        ConstantName::CTilde,
        ConstantName::Gamma0Chiral,
        ConstantName::Gamma0Majorana,
        ConstantName::Gamma3Majorana,
        ConstantName::ExpansionMap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstantName::SigmaX => "sigma_x",
            ConstantName::SigmaY => "sigma_y",
            ConstantName::SigmaZ => "sigma_z",
            ConstantName::Epsilon => "epsilon",
            ConstantName::Conj2 => "conj2",
            ConstantName::CTilde => "c_tilde",
            ConstantName::Gamma0Chiral => "gamma0_chiral",
            ConstantName::Gamma0Majorana => "gamma0_majorana",
            ConstantName::Gamma3Majorana => "gamma3_majorana",
            ConstantName::ExpansionMap => "expansion_map",
        }
    }
}

impl fmt::Display for ConstantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstantName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstantName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown constant matrix `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstantMatrix {
    Two(Matrix2),
    Four(Matrix4),
    Expansion(ExpansionMap),
}

pub fn constant_matrix(name: ConstantName) -> ConstantMatrix {
    match name {
        ConstantName::SigmaX => ConstantMatrix::Two(sigma_x()),
        ConstantName::SigmaY => ConstantMatrix::Two(sigma_y()),
        ConstantName::SigmaZ => ConstantMatrix::Two(sigma_z()),
        ConstantName::Epsilon => ConstantMatrix::Two(epsilon()),
        ConstantName::Conj2 => ConstantMatrix::Two(conj2()),
        ConstantName::CTilde => ConstantMatrix::Four(c_tilde()),
        ConstantName::Gamma0Chiral => ConstantMatrix::Four(gamma0_chiral()),
        ConstantName::Gamma0Majorana => ConstantMatrix::Four(gamma0_majorana()),
        ConstantName::Gamma3Majorana => ConstantMatrix::Four(gamma3_majorana()),
        ConstantName::ExpansionMap => ConstantMatrix::Expansion(expansion_map()),
    }
}

/// `C̃ = diag(iσy, −iσy)` in the chiral representation.
pub fn c_tilde() -> Matrix4 {
    block_diag(&epsilon(), &(-epsilon()))
}

/// Chiral-representation `γ⁰`, off-diagonal identity blocks.
pub fn gamma0_chiral() -> Matrix4 {
    kron(&sigma_x(), &identity2())
}

/// Majorana-representation `γ⁰ = σy ⊗ σx`.
pub fn gamma0_majorana() -> Matrix4 {
    kron(&sigma_y(), &sigma_x())
}

/// Majorana-representation `γ³ = iσy ⊗ σy`.
pub fn gamma3_majorana() -> Matrix4 {
    kron(&epsilon(), &sigma_y())
}

pub fn expansion_map() -> ExpansionMap {
    ExpansionMap::new(ONE, ZERO, I, ZERO, ZERO, ONE, ZERO, I)
}

fn ensure_finite<'a>(values: impl IntoIterator<Item = &'a Complex64>, what: &str) -> Result<()> {
    if values
        .into_iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        Ok(())
    } else {
        Err(Error::NumericDomain(format!(
            "{what} has non-finite entries"
        )))
    }
}

/// `ψ ↦ Bψ*` with `B = −iσzσy`. An involution.
pub fn charge_conjugate_2c(s: &Spinor2) -> Result<Spinor2> {
    ensure_finite(s.iter(), "spinor")?;
    Ok(conj2() * s.conjugate())
}

/// The real basis `(χ+, χ−) = ((1,−1)/√2, (i,i)/√2)` of charge-conjugation
/// fixed points.
pub fn majorana_basis() -> (Spinor2, Spinor2) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    (
        Spinor2::new(c(h, 0.0), c(-h, 0.0)),
        Spinor2::new(c(0.0, h), c(0.0, h)),
    )
}

/// Stacks a left-chiral spinor into the Majorana four-spinor `(εψL*, ψL)`.
pub fn build_majorana_4spinor(psi_l: &Spinor2) -> Result<Spinor4> {
    ensure_finite(psi_l.iter(), "spinor")?;
    let upper = epsilon() * psi_l.conjugate();
    Ok(Spinor4::new(upper[0], upper[1], psi_l[0], psi_l[1]))
}

/// `Ψ ↦ C̃(γ⁰)ᵀΨ*` in the chiral representation.
pub fn charge_conjugate_4c(s: &Spinor4) -> Result<Spinor4> {
    ensure_finite(s.iter(), "four-spinor")?;
    Ok(c_tilde() * gamma0_chiral().transpose() * s.conjugate())
}

fn rotation(generator: &Matrix2, angle: f64) -> Matrix2 {
    // exp(−iθσ) = cos θ − i sin θ σ for an involutory σ
    identity2() * c(angle.cos(), 0.0) - generator * c(0.0, angle.sin())
}

/// `U = i e^{−iπσy/4} ⊗ e^{−iπσx/4}`, which block-diagonalises the expanded
/// Majorana Hamiltonian into the pair of opposite-mass Dirac Hamiltonians.
pub fn decoupling_unitary() -> Matrix4 {
    let q = std::f64::consts::FRAC_PI_4;
    kron(&rotation(&sigma_y(), q), &rotation(&sigma_x(), q)) * I
}

fn check_momentum(k: &[f64]) -> Result<()> {
    if k.is_empty() || k.len() > 2 {
        return Err(Error::InvalidArgument(format!(
            "momentum must have 1 or 2 components, got {}",
            k.len()
        )));
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericDomain("momentum is not finite".into()));
    }
    Ok(())
}

/// `kinetic_sign·(σx k₁ + σy k₂) + mass_sign·m·σz`.
pub fn dirac_mode_hamiltonian(
    k: &[f64],
    m: f64,
    mass_sign: Sign,
    kinetic_sign: Sign,
) -> Result<Matrix2> {
    check_momentum(k)?;
    if !m.is_finite() {
        return Err(Error::NumericDomain("mass is not finite".into()));
    }
    let mut kinetic = sigma_x() * c(k[0], 0.0);
    if let Some(&ky) = k.get(1) {
        kinetic += sigma_y() * c(ky, 0.0);
    }
    Ok(kinetic * c(kinetic_sign.value(), 0.0) + sigma_z() * c(mass_sign.value() * m, 0.0))
}

/// Expanded-space Majorana Hamiltonian `(1⊗σx)k − m(σx⊗σy)` for one mode.
pub fn majorana_mode_hamiltonian(k: f64, m: f64) -> Matrix4 {
    kron(&identity2(), &sigma_x()) * c(k, 0.0) - kron(&sigma_x(), &sigma_y()) * c(m, 0.0)
}

/// Four-component Majorana-representation Hamiltonian `−k(1⊗σz) + m(σy⊗σx)`
/// for a plane wave `e^{ikz}`.
pub fn majorana_rep_mode_hamiltonian(k: f64, m: f64) -> Matrix4 {
    kron(&identity2(), &sigma_z()) * c(-k, 0.0) + kron(&sigma_y(), &sigma_x()) * c(m, 0.0)
}

pub fn is_hermitian2(m: &Matrix2, tol: f64) -> bool {
    (m - m.adjoint()).iter().all(|z| z.norm() <= tol)
}

pub fn is_hermitian4(m: &Matrix4, tol: f64) -> bool {
    (m - m.adjoint()).iter().all(|z| z.norm() <= tol)
}

fn hermitian_tol(m: &Matrix2) -> f64 {
    1e-12 * m.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

/// Real generator of one Fourier mode for `i∂tψ = Dψ + Kψ*`.
///
/// With `Ψ = (Re ψ, Im ψ)` the equation becomes linear, `Ψ̇ = GΨ`. The
/// antilinear term couples mode `k` to `−k`, so the linear part is needed at
/// both momenta: `d_k = D(k)`, `d_minus_k = D(−k)`. The returned matrix is the
/// mode symbol of the real operator; it satisfies `G(−k) = G(k)*` and is real
/// at `k = 0`.
pub fn antilinear_generator_mode(
    d_k: &Matrix2,
    d_minus_k: &Matrix2,
    conj_coeff: &Matrix2,
) -> Result<Matrix4> {
    ensure_finite(d_k.iter().chain(d_minus_k.iter()), "linear symbol")?;
    ensure_finite(conj_coeff.iter(), "conjugate coefficient")?;
    if !is_hermitian2(d_k, hermitian_tol(d_k))
        || !is_hermitian2(d_minus_k, hermitian_tol(d_minus_k))
    {
        return Err(Error::InvalidArgument(
            "linear symbol is not Hermitian".into(),
        ));
    }
    // Complex-linear part X = −iD split into real-operator halves.
    let x = d_k * (-I);
    let x_bar = d_minus_k.conjugate() * I;
    let xr = (x + x_bar) * c(0.5, 0.0);
    let xi = (x - x_bar) * c(0.0, -0.5);
    // Antilinear part Y ψ* with Y = −iK.
    let y = conj_coeff * (-I);
    let yr = y.map(|z| c(z.re, 0.0));
    let yi = y.map(|z| c(z.im, 0.0));

    let mut g = Matrix4::zeros();
    g.fixed_view_mut::<2, 2>(0, 0).copy_from(&(xr + yr));
    g.fixed_view_mut::<2, 2>(0, 2).copy_from(&(yi - xi));
    g.fixed_view_mut::<2, 2>(2, 0).copy_from(&(xi + yi));
    g.fixed_view_mut::<2, 2>(2, 2).copy_from(&(xr - yr));
    Ok(g)
}

/// Constant-coefficient linear part `D(k) = Σₐ Aₐkₐ + M` of a two-component
/// equation.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSymbol {
    pub kinetic: [Matrix2; 2],
    pub mass: Matrix2,
}

impl LinearSymbol {
    pub fn eval(&self, k: &[f64]) -> Matrix2 {
        let mut out = self.mass;
        for (a, &ka) in self.kinetic.iter().zip(k) {
            out += a * c(ka, 0.0);
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.kinetic
            .iter()
            .chain(std::iter::once(&self.mass))
            .all(|m| is_hermitian2(m, hermitian_tol(m)))
    }

    /// Mode generator of `i∂tψ = D ψ + K ψ*` at momentum `k`.
    pub fn generator(&self, k: &[f64], conj_coeff: &Matrix2) -> Result<Matrix4> {
        let minus: Vec<f64> = k.iter().map(|v| -v).collect();
        antilinear_generator_mode(&self.eval(k), &self.eval(&minus), conj_coeff)
    }
}

/// Ascending eigenvalues of a 2×2 Hermitian matrix, closed form.
pub fn hermitian_eigenvalues2(h: &Matrix2) -> [f64; 2] {
    let mean = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let half_gap = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let r = half_gap.hypot(h[(0, 1)].norm());
    [mean - r, mean + r]
}

fn eigen4(h: &Matrix4) -> Result<SymmetricEigen<Complex64, nalgebra::U4>> {
    if !h.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NumericFailure("non-finite Hermitian matrix".into()));
    }
    SymmetricEigen::try_new(*h, f64::EPSILON, 1000)
        .ok_or_else(|| Error::NumericFailure("4×4 Hermitian eigensolver did not converge".into()))
}

/// Ascending eigenvalues of a 4×4 Hermitian matrix.
pub fn hermitian_eigenvalues4(h: &Matrix4) -> Result<[f64; 4]> {
    let mut ev: Vec<f64> = eigen4(h)?.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok([ev[0], ev[1], ev[2], ev[3]])
}

/// `exp(−iHt)` for a 2×2 Hermitian `H`, via `H = h₀ + h·σ`.
pub fn hermitian_propagator2(h: &Matrix2, t: f64) -> Matrix2 {
    let h0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let hz = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let hx = h[(1, 0)].re;
    let hy = h[(1, 0)].im;
    let r = (hx * hx + hy * hy + hz * hz).sqrt();
    let (cos, sinc) = if r == 0.0 {
        (1.0, t)
    } else {
        ((r * t).cos(), (r * t).sin() / r)
    };
    let phase = Complex64::from_polar(1.0, -h0 * t);
    let hs = Matrix2::new(c(hz, 0.0), c(hx, -hy), c(hx, hy), c(-hz, 0.0));
    (identity2() * c(cos, 0.0) - hs * c(0.0, sinc)) * phase
}

/// `exp(−iHt)` for a 4×4 Hermitian `H` by eigendecomposition.
pub fn hermitian_propagator4(h: &Matrix4, t: f64) -> Result<Matrix4> {
    let eig = eigen4(h)?;
    let v = eig.eigenvectors;
    let phases =
        Matrix4::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t)));
    Ok(v * phases * v.adjoint())
}
