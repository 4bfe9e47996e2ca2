//! Finite fields, `GL_d(F_q)`, and the cyclic subgroup of order `p^{v+1}` in `GL_p(F_q)`.

pub mod cyclic;
pub mod field;
pub mod matrix;
pub mod order;

pub use cyclic::{
    build_generator_a, check_mu, conjugacy_check, diagonalize_gamma, find_conjugator, mu_embedding, normalizer_exponents,
    ConjugacyReport, Diagonalization, ExtField, GeneratorA, MuEmbedding, MuReport, NormalizerScan,
};
pub use field::Fq;
pub use matrix::GLMat;
pub use order::{
    gl_order, sylow_gl_descriptor, sylow_sigma_descriptor, vp_gl_order, vp_gl_order_by_factoring, wreath_permutation_order,
    SylowDescriptor,
};
