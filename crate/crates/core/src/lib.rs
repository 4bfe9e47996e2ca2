#![allow(clippy::needless_range_loop)]

pub mod charcount;
pub mod error;
pub mod fgl;
pub mod glgroups;
pub mod glp;
pub mod linalg;
pub mod padic;
pub mod series;
pub mod smallrings;
pub mod suite;

pub use error::{Error, FailureKind, Result};
pub use padic::{PadicCtx, PadicInt, Valuation};
pub use series::e0::{E0Elem, E0Ring, PrecisionCtx};
