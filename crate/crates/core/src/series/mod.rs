pub mod e0;
pub mod json;
pub mod mseries;
pub mod poly;
pub mod quotient;
pub mod ring;
pub mod tensor;
pub mod useries;

pub use e0::{E0Elem, E0Ring, PrecisionCtx};
pub use mseries::{
    elementary_symmetric, invariant_basis, symmetrize_to_elementary, MLayout, MSeries, SymBasisIndex, SymBasisKind,
};
pub use quotient::PolyQuotient;
pub use ring::CoeffRing;
pub use tensor::TensorQuotient;
pub use useries::{series_arith, SeriesOp, USeries};
