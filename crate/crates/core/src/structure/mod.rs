//! Ordered structures built from a handful of bases by insertion combinators.

mod assoc;
mod desc;
mod ops;
mod parse;
mod seq;
mod value;
mod vector;

pub use assoc::{psi, psi_inverse, psi_target};
pub use desc::{Base, MixedSpec, Structure};
pub use seq::{SeqGen, Tail};
pub use value::{Sign, Value};
pub use vector::OVector;
