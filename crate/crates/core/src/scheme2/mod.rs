//! The achievable side: split MAN placement, XOR delivery, bit-level
//! decoding and the closed-form load.

mod decode;
mod delivery;
mod formula;
mod placement;
mod split;

pub use decode::decode;
pub use delivery::{deliver, Message, MessageDump, Phase, Transmission};
pub use formula::{
    achievable_bound, load_at, load_formula, load_formula_exact, max_alpha_load,
    max_alpha_load_exact, AchievableBound,
};
pub use placement::{
    min_file_bits, place, place_split, place_with_library, with_default_file_bits,
};
pub use split::{feasible_beta, feasible_common_memory, integer_splits, SplitParams};
