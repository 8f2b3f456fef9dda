//! Coded caching with heterogeneous user profiles.
//!
//! `K` users in `G` groups share `N_c` common files, and each group has
//! `N_u` files of its own. The crate implements the split MAN scheme
//! (placement, XOR delivery, bit-exact decoding and its closed-form load), the
//! genie-aided converse under uncoded placement with exact brute-force checks
//! of its counting steps, and the gap analysis between the two.

pub mod analysis;
pub mod combinatorics;
pub mod converse;
pub mod error;
pub mod format;
pub mod model;
pub mod optimize;
pub mod scenario;
pub mod scheme2;
pub mod verify;

pub use error::{Error, Result};
