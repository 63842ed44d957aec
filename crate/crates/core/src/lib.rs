//! Constructive linkage in highly connected tournaments.
//!
//! Given a tournament and two disjoint `k`-tuples of terminals, [`linker::link`]
//! builds `k` pairwise vertex-disjoint directed paths joining `x_i` to `y_i`.
//! The pipeline is assembled from smaller pieces that are useful on their own:
//!
//! - [`tournament`]: bit-matrix tournaments, degrees, induced subtournaments.
//! - [`ordering`]: local median orders with the interval-domination guarantee.
//! - [`flow`]: vertex connectivity, set-to-set disjoint paths, deficiency matchings.
//! - [`anchor`]: pairs of `k`-sets where one side routes to the other for every
//!   pairing.
//! - [`linker`]: the peel / match / route / assemble pipeline itself.
//! - [`oracle`]: exhaustive checkers used to certify all of the above on small
//!   instances.
//! - [`toolkit`]: generators and the `TRN` text format.

pub mod anchor;
pub mod error;
pub mod flow;
pub mod linker;
pub mod oracle;
pub mod ordering;
pub mod toolkit;
pub mod tournament;
pub mod vertex_set;

pub use error::{Error, Result};
pub use flow::{DigraphView, PathSystem};
pub use ordering::Ordering;
pub use tournament::{Dipath, Tournament};
pub use vertex_set::VertexSet;
