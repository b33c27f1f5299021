pub mod analysis;
pub mod category;
pub mod cli;
pub mod combinat;
pub mod concrete;
pub mod dsl;
pub mod error;
pub mod functor;
pub mod harness;
pub mod limits;
pub mod naming;
pub mod signature;
pub mod verdict;

pub use category::{validate_category, CategoryBuilder, FinCategory, MorId, ObjId};
pub use error::{Error, Result};
pub use functor::{compose_functors, validate_functor, validate_nat, Functor, NatTrans};
pub use verdict::{Outcome, VerdictReport, Violation};
