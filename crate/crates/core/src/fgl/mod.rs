pub mod law;
pub mod log;
pub mod weierstrass;

pub use law::{build_honda, build_ptypical, AxiomCheck, AxiomReport, Fgl, Height};
pub use log::{LawKind, LogData};
pub use weierstrass::{pr_weierstrass, weierstrass_prepare, weierstrass_prepare_with, PrepMethod, WeierstrassFactorization};
