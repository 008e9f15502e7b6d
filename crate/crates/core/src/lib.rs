//! Grain-error combinatorics, grain-correcting codes, cardinality and rate
//! bounds, and capacity bounds for the grains channel of a one-dimensional
//! granular magnetic medium with grains of length at most two.

mod bitset;
pub mod bounds;
pub mod caps;
pub mod channel;
pub mod codes;
pub mod error;
pub mod graph;
pub mod model;
pub mod table;
pub mod word;

pub use caps::Caps;
pub use error::{Error, Result};
pub use model::{ErrorVector, GrainPattern};
pub use word::Word;
