use thiserror::Error;

use crate::model::{FileId, PlacementViolation, UserSet, ValidationReport};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("binomial C({n}, {k}) is out of f64 range")]
    OutOfRange { n: f64, k: f64 },

    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(ValidationReport),

    #[error("enumeration of {cardinality} demands exceeds the cap of {cap}")]
    CapExceeded { cardinality: u128, cap: u128 },

    #[error("simulation needs integer t_c and t_u, got t_c = {t_c}, t_u = {t_u}")]
    NonIntegerSplit { t_c: f64, t_u: f64 },

    #[error("beta = {beta} outside the feasible interval [{lo}, {hi}]")]
    InfeasibleBeta { beta: f64, lo: f64, hi: f64 },

    #[error("file size B = {bits} bits is not a multiple of the subpacketization {subpackets}")]
    Subpacketization { bits: u64, subpackets: u64 },

    #[error("invalid demand: {0}")]
    InvalidDemand(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("placement/demand mismatch: {0}")]
    Mismatch(String),

    #[error("user {user} cannot recover subfile {file}/{subset}")]
    DecodeFailure {
        user: usize,
        file: FileId,
        subset: UserSet,
    },

    #[error("placement violates {0}")]
    Placement(PlacementViolation),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
