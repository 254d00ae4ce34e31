//! Spectral simulation of two-component Majorana-equation ("Majoranon")
//! spinor fields in 1+1 and 2+1 dimensions.
//!
//! A Majoranon state ψ obeys `i∂tψ = σ·p ψ − i m σy ψ*`. Because the mass term
//! is antilinear, ψ can be evolved either
//!
//! * by splitting it into two charge-conjugation-invariant fields
//!   `ψ = (ψ+ + iψ−)/√2`, each of which obeys an ordinary Dirac equation with
//!   mass `+m` or `−m` ([`dynamics::evolve_majorana_decomposed`]);
//! * by rewriting it as a linear equation for the real four-vector
//!   `(Re ψ, Im ψ)` ([`dynamics::evolve_expanded`]);
//! * or with a dense matrix exponential of the full discretised generator
//!   ([`reference::dense_evolve`]), used as an oracle.
//!
//! All three are exact per Fourier mode and agree to rounding error.

pub mod algebra;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod measure;
pub mod reference;

pub use algebra::{Matrix2, Matrix4, Sign, Spinor2, Spinor4};
pub use dynamics::{Backend, EquationKind, EvolveOptions, Evolved};
pub use error::{Error, Result};
pub use fields::{Grid, MajoranaPair, RealField4, Space, SpinorField};
pub use measure::{ObservableRecord, ObservableSeries};
