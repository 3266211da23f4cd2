//! Decision procedures and constructions for birational plane embeddings of
//! curves with two or three collinear Galois points, over finite fields.

pub mod action;
pub mod algebra;
pub mod curve;
pub mod error;
pub mod galois;
pub mod linsys;
pub mod wire;

pub use error::{Error, ErrorClass, Result};
