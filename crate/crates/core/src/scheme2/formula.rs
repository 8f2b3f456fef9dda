use num_traits::Zero;

use crate::combinatorics::{binom_exact, gen_binom};
use crate::error::{Error, Result};
use crate::model::{Frac, SystemConfig};
use crate::optimize::grid_golden_minimize;
use crate::scheme2::{feasible_common_memory, SplitParams};

/// Worst-case split MAN load with `α` unique requesters per group:
///
/// `[C(K, t_c+1) - C(Gα, t_c+1)] / C(K, t_c) + G [C(K/G, t_u+1) - C(K/G-α, t_u+1)] / C(K/G, t_u)`
///
/// with real arguments through the Gamma function.
pub fn load_formula(cfg: &SystemConfig, beta: f64, alpha: f64) -> Result<f64> {
    let split = SplitParams::new(cfg, beta)?;
    load_at(cfg, &split, alpha)
}

pub fn load_at(cfg: &SystemConfig, split: &SplitParams, alpha: f64) -> Result<f64> {
    let k = cfg.users as f64;
    let g = cfg.groups as f64;
    let per = cfg.users_per_group() as f64;
    if alpha.is_nan() || !(0.0..=per).contains(&alpha) {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha,
            lo: 0.0,
            hi: per,
        });
    }
    let (t_c, t_u) = (split.t_c, split.t_u);
    let common = (gen_binom(k, t_c + 1.0)? - gen_binom(g * alpha, t_c + 1.0)?) / gen_binom(k, t_c)?;
    let unique = g * (gen_binom(per, t_u + 1.0)? - gen_binom(per - alpha, t_u + 1.0)?)
        / gen_binom(per, t_u)?;
    Ok(common + unique)
}

/// Same expression in exact rationals for integer `t_c`, `t_u`, `α`.
pub fn load_formula_exact(
    cfg: &SystemConfig,
    t_c: usize,
    t_u: usize,
    alpha: usize,
) -> Result<Frac> {
    let c = |n: usize, k: usize| -> Result<i128> {
        binom_exact(n as u64, k as u64)
            .map(|v| v as i128)
            .ok_or(Error::Overflow("load_formula_exact"))
    };
    let per = cfg.users_per_group();
    if alpha > per {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha as f64,
            lo: 0.0,
            hi: per as f64,
        });
    }
    let common = Frac::new(
        c(cfg.users, t_c + 1)? - c(cfg.groups * alpha, t_c + 1)?,
        c(cfg.users, t_c)?,
    );
    let unique = Frac::new(c(per, t_u + 1)? - c(per - alpha, t_u + 1)?, c(per, t_u)?);
    Ok(common + unique * Frac::from_integer(cfg.groups as i128))
}

/// `max_α` over `α ∈ {0, …, K/G}`; ties go to the smallest `α`.
pub fn max_alpha_load(cfg: &SystemConfig, split: &SplitParams) -> Result<(usize, f64)> {
    let mut best = (0, f64::NEG_INFINITY);
    for alpha in 0..=cfg.users_per_group() {
        let v = load_at(cfg, split, alpha as f64)?;
        if v > best.1 {
            best = (alpha, v);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AchievableBound {
    pub beta: f64,
    pub value: f64,
    /// Maximizing `α` at the returned `β`.
    pub alpha: usize,
}

/// `min_β max_α R(β, α)`.
pub fn achievable_bound(cfg: &SystemConfig) -> Result<AchievableBound> {
    cfg.ensure_valid()?;
    let (lo, hi) = feasible_common_memory(cfg);
    let xtol = 1e-9 * cfg.memory.max(f64::MIN_POSITIVE);
    let objective = |common: f64| {
        let split = SplitParams::from_common_memory(cfg, common);
        max_alpha_load(cfg, &split).map_or(f64::INFINITY, |(_, v)| v)
    };
    let best = grid_golden_minimize(objective, lo, hi, xtol);
    let split = SplitParams::from_common_memory(cfg, best.x);
    let (alpha, value) = max_alpha_load(cfg, &split)?;
    Ok(AchievableBound {
        beta: split.beta,
        value,
        alpha,
    })
}

/// Exact worst case over symmetric demands for an integer split.
pub fn max_alpha_load_exact(cfg: &SystemConfig, t_c: usize, t_u: usize) -> Result<(usize, Frac)> {
    let mut best: Option<(usize, Frac)> = None;
    for alpha in 0..=cfg.users_per_group() {
        let v = load_formula_exact(cfg, t_c, t_u, alpha)?;
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((alpha, v));
        }
    }
    Ok(best.unwrap_or((0, Frac::zero())))
}
