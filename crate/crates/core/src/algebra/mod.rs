//! Exact arithmetic over finite fields and the polynomial algebra built on it.

pub mod field;
pub mod linalg;
pub mod tripoly;
pub mod upoly;

pub use field::{build_field, Embedding, Fe, Field};
pub use tripoly::{resultant, TriPoly};
pub use upoly::UniPoly;
