//! Exact reduced-cycle counting on discrete tori.
//!
//! The discrete torus `DT_M` is the Cayley graph of `Z/m_1 x ... x Z/m_d`
//! with generators `±e_j`. This crate evaluates the closed-form count of
//! reduced cycles of length `n` on it as a finite sum of generalized Jacobi
//! polynomials (terminating Lauricella `F_C` series), and ships three
//! independent checks:
//!
//! * [`oracle`]: the trace of powers of the non-backtracking edge matrix,
//!   direct DFS enumeration, and reduced-modulo-`m` lattice path counts;
//! * [`spectral`]: floating-point identities between the Laplacian spectrum,
//!   the periodized I-Bessel heat kernel and the Ihara zeta function;
//! * exact cross-route identities inside [`hypergeo`].
//!
//! The hypergeometric layer is generic over [`Scalar`], so the same code
//! evaluates in exact rationals ([`Rational`]) or in `f64`/`f32`.

pub mod combinatorics;
pub mod error;
pub mod hypergeo;
pub mod oracle;
pub mod scalar;
pub mod spectral;
pub mod theorem;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision integer used for every exact count.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision reduced rational; the value domain of the theorem engine.
pub type Rational = num_rational::BigRational;

/// Generalized Jacobi parameters over exact rationals.
pub type JacobiParamsQ = hypergeo::JacobiParams<Rational>;
/// Generalized Jacobi parameters over `f64`.
pub type JacobiParamsF64 = hypergeo::JacobiParams<f64>;
/// Laplacian spectrum in `f64`.
pub type Spectrum = spectral::SpectrumData<f64>;
/// Laplacian spectrum in `f32`.
pub type SpectrumF32 = spectral::SpectrumData<f32>;

pub use combinatorics::{PartitionMu, TorusSpec, WeightVector};
pub use oracle::{DirectedEdgeMatrix, LatticeWalkQuery, TorusGraph, WorkBudget};
pub use theorem::{Contribution, CycleCountReport};
