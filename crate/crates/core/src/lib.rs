//! Finite Sugihara chains Z_k, their natural duality, test spaces, and the
//! admissibility algebras B_k used to decide admissibility and derivability
//! of rules in the R-mingle extensions RM_k.

pub mod admissibility;
pub mod algebra;
pub mod congruence;
pub mod duality;
pub mod error;
pub mod homomorphism;
pub mod parser;
pub mod partial;
pub mod subalgebra;
pub mod term;
pub mod testspace;

pub use algebra::{power_algebra, FiniteAlgebra, Parity, SugiharaChain, Tuple};
pub use error::{Error, Result};
pub use term::{eval_term, Term};
