//! Geodesic length: the heuristic approximation driving the attack, an
//! exact breadth-first oracle for small braid groups, and the tuple-level
//! helpers (total length, generator support, separation).

mod bfs;
mod handle;
mod local;
mod oracle;
mod tuple;

pub use bfs::{exact_length_bfs, GeodesicBall};
pub use handle::{handle_reduce, HandleCaps};
pub use oracle::{LengthEstimate, LengthOracle};
pub use tuple::{generator_support, is_separated, tuple_length};

pub(crate) use tuple::{masks_separated, support_mask};
