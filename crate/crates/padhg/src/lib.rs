//! p-adic special functions, p-adic L-values and explicit Frobenius
//! matrices on hypergeometric differential equations.
//!
//! The crate is organized bottom-up:
//!
//! * [`padic`] and [`cyclo`]: fixed-precision p-adic numbers and the
//!   unramified cyclotomic rings `Z_p[x]/Φ_m(x)`.
//! * [`series`]: truncated power series and series matrices, the Frobenius
//!   substitution `z ↦ c z^p` and a regular-singular ODE solver.
//! * [`special`]: Morita's gamma function `Γ_p`, the polygamma functions
//!   `ψ̃_p^(r)`, the beta function and the `Ψ_m` coefficient sequences.
//! * [`dirichlet`]: Dirichlet characters and p-adic L-values expressed
//!   through polygamma sums.
//! * [`hypergeom`]: hypergeometric data, Dwork primes, the companion
//!   connection matrix, residue constants and canonical bases.
//! * [`frobenius`]: residue matrices of the Frobenius intertwiner, change
//!   of basis and of Frobenius lift, and the intertwiner residual check.
//! * [`dwork`]: Katz's generalized Dwork pencils and brute-force point
//!   counting over small finite fields.
//!
//! Data-parallel loops go through [`par`]; with the default `parallel`
//! feature they run on rayon, otherwise sequentially.  Both paths produce
//! bit-identical results.

pub mod arith;
pub mod cyclo;
pub mod dirichlet;
pub mod dwork;
pub mod error;
pub mod frobenius;
pub mod hypergeom;
pub mod padic;
pub mod par;
pub mod qseries;
pub mod ring;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use padic::PAdic;
