//! Instance generators and the `TRN` text format.

pub mod generate;
pub mod trn;

pub use generate::{generate, BlockInner, GenSpec, Model, GENERATOR_NAME};
pub use trn::{from_trn, load, save, to_trn, to_trn_with_comments};
