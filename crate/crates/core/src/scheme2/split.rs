use crate::error::{Error, Result};
use crate::model::SystemConfig;

const INTEGER_TOL: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-12;

/// The cache split: `βM` for common files, `(1-β)M` for unique files, and the
/// induced MAN parameters `t_c = KβM/N_c`, `t_u = K(1-β)M/(G N_u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitParams {
    pub beta: f64,
    pub t_c: f64,
    pub t_u: f64,
}

/// Feasible common-memory share `βM ∈ [max(0, M - N_u), min(M, N_c)]`.
pub fn feasible_common_memory(cfg: &SystemConfig) -> (f64, f64) {
    let m = cfg.memory;
    (
        (m - cfg.unique_files as f64).max(0.0),
        m.min(cfg.common_files as f64),
    )
}

/// Feasible `β`: `[max(0, 1 - N_u/M), min(1, N_c/M)]` for `M > 0`, `{0}` at `M = 0`.
pub fn feasible_beta(cfg: &SystemConfig) -> (f64, f64) {
    if cfg.memory <= 0.0 {
        return (0.0, 0.0);
    }
    let (lo, hi) = feasible_common_memory(cfg);
    (lo / cfg.memory, hi / cfg.memory)
}

impl SplitParams {
    pub fn new(cfg: &SystemConfig, beta: f64) -> Result<Self> {
        if cfg.memory <= 0.0 {
            if !(0.0..=1.0).contains(&beta) {
                return Err(Error::InfeasibleBeta {
                    beta,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
            return Ok(SplitParams {
                beta,
                t_c: 0.0,
                t_u: 0.0,
            });
        }
        let (lo, hi) = feasible_beta(cfg);
        if beta.is_nan() || beta < lo - FEASIBILITY_TOL || beta > hi + FEASIBILITY_TOL {
            return Err(Error::InfeasibleBeta { beta, lo, hi });
        }
        let mut split = Self::from_common_memory(cfg, beta.clamp(lo, hi) * cfg.memory);
        split.beta = beta;
        Ok(split)
    }

    /// Split from the common share `βM` directly; exact at the interval
    /// endpoints (e.g. `t_c = K` when `βM = N_c`).
    pub fn from_common_memory(cfg: &SystemConfig, common: f64) -> Self {
        let k = cfg.users as f64;
        let per = cfg.users_per_group() as f64;
        let unique = (cfg.memory - common).max(0.0);
        let t_c = (k * common / cfg.common_files as f64).clamp(0.0, k);
        let t_u = (k * unique / (cfg.groups * cfg.unique_files) as f64).clamp(0.0, per);
        let beta = if cfg.memory > 0.0 {
            common / cfg.memory
        } else {
            0.0
        };
        SplitParams { beta, t_c, t_u }
    }

    /// `(t_c, t_u)` when both are integers.
    pub fn integer_ts(&self) -> Option<(usize, usize)> {
        let round = |t: f64| ((t - t.round()).abs() <= INTEGER_TOL).then_some(t.round() as usize);
        Some((round(self.t_c)?, round(self.t_u)?))
    }

    pub fn require_integer(&self) -> Result<(usize, usize)> {
        self.integer_ts().ok_or(Error::NonIntegerSplit {
            t_c: self.t_c,
            t_u: self.t_u,
        })
    }
}

/// Every split of `M` with integer `t_c` and `t_u`, ordered by `t_c`.
pub fn integer_splits(cfg: &SystemConfig) -> Vec<SplitParams> {
    let k = cfg.users as f64;
    (0..=cfg.users)
        .filter_map(|t_c| {
            let common = t_c as f64 * cfg.common_files as f64 / k;
            let (lo, hi) = feasible_common_memory(cfg);
            if common < lo - INTEGER_TOL || common > hi + INTEGER_TOL {
                return None;
            }
            let split = SplitParams::from_common_memory(cfg, common.clamp(lo, hi));
            split.integer_ts().map(|_| split)
        })
        .collect()
}
