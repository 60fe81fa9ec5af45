//! Exact L-polynomials and family statistics for quadratic and order-l
//! twists of an elliptic curve over F_q(t).

pub mod characters;
pub mod cli;
pub mod config;
pub mod ecurve;
pub mod error;
pub mod famstats;
pub mod ffield;
pub mod fqpoly;
pub mod lfunction;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
pub use ffield::{build_extension, FieldElem, FieldSpec, FieldTable};
pub use fqpoly::Poly;
