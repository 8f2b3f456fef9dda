//! System model: configuration, files, demands and uncoded placements.

mod config;
mod demand;
mod file;
mod placement;
mod subset;

pub use config::{ConfigViolation, SystemConfig, ValidationReport};
pub use demand::{
    alpha_profile, demand_count, enumerate_demands, symmetric_alpha, Demand, DemandClass, Request,
    DEFAULT_ENUMERATION_CAP,
};
pub use file::{FileId, FileKind};
pub use placement::{
    library_files, Bits, FileLibrary, PlacementEntry, PlacementSpec, PlacementViolation, Subfile,
    UserCache,
};
pub use subset::{UserSet, MAX_USERS};

use num_rational::Ratio;

/// Exact fraction of a file (sizes, loads).
pub type Frac = Ratio<i128>;

pub fn frac_to_f64(x: Frac) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
