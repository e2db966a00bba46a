//! Exact arithmetic in lexicographically ordered semirings and the measure,
//! probability, tree and weight machinery built on top of them.

pub mod error;
pub mod exec;
pub mod expr;
pub mod formats;
pub mod gen;
pub mod integrate;
pub mod laws;
pub mod measure;
pub mod prob;
pub mod selfcheck;
pub mod structure;
pub mod tree;
pub mod weights;
pub mod xreal;

pub use error::{Error, Result};
pub use structure::{Base, Sign, Structure, Value};
pub use xreal::XReal;
