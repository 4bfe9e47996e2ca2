pub mod algebra;
pub mod dmodel;
pub mod h2;
pub mod params;
pub mod relation;
pub mod tclass;

pub use algebra::{build_model, glp_algebra, k_reduce, GLPAlgebra, GlpModel, KReduction};
pub use dmodel::{alpha_of_sigmas, build_d, build_d_gamma, DGammaModel, DModel};
pub use h2::{build_h2, H2};
pub use h2::{translate_product, w_ring, WRing};
pub use params::{binomial, prime_power, GLpParams};
pub use relation::{
    crt_witness, psi_image, psi_targets, verify_t_relation, CrtWitness, PsiGen, PsiTarget, PsiTargets, TRelationReport,
};
pub use tclass::{build_t, divide_by_alpha_t, TClass};
