pub mod algebra;
pub mod cyclic;
pub mod sigma;
pub mod torus;

pub use algebra::{symmetric_invariants, truncated_polynomial_algebra, FiniteAlgebra, FrobeniusReport};
pub use cyclic::{abelian_ring, cyclic_ring, AbelianRing, QuotientRing};
pub use sigma::{sigma_p_ring, SigmaPModel};
pub use torus::{torus_invariant_ring, TorusInvariants};
