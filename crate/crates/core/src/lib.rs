//! Expected numbers of real roots of random trigonometric polynomial systems.
//!
//! A system `f_1 = … = f_n = 0` on the torus `Tⁿ`, each `f_i` drawn with iid
//! standard normal coefficients in the orthonormal cosine/sine basis of its
//! support `Λ_i`, has on average `n!·V(ell(Λ_1), …, ell(Λ_n))` real roots,
//! where `ell(Λ)` is the ellipsoid with support function
//! `sqrt((1/N) Σ_λ ⟨λ, ξ⟩²)`. The generic number of complex roots is the BKK
//! count `n!·V(conv Λ_1, …, conv Λ_n)`, so their ratio is the expected
//! fraction of real roots.
//!
//! The crate computes both sides exactly or by Monte Carlo and checks them
//! against actual root counts of sampled systems.

pub mod asymptotics;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod mixedvol;
pub mod moments;
pub mod quadrature;
pub mod rational;
pub mod rootcount;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{ConvexBody, Ellipsoid, LatticePolytope};
pub use lattice::{BodySpec, LatticeVector, SupportSet};
pub use sampler::TrigPolynomial;
pub use stats::{McConfig, MVEstimate};
