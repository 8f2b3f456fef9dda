use crate::combinatorics::{f_common, f_unique};
use crate::error::Result;
use crate::model::SystemConfig;
use crate::optimize::{grid_golden_minimize, is_discretely_convex, GRID_POINTS};
use crate::scheme2::{feasible_common_memory, SplitParams};

/// `(1/2) [f_c(t_c) + f_u(t_u)]` for one split.
pub fn theorem1_objective_at(cfg: &SystemConfig, split: &SplitParams) -> Result<f64> {
    Ok(0.5 * (f_common(split.t_c, cfg.users)? + f_unique(split.t_u, cfg.users, cfg.groups)?))
}

pub fn theorem1_objective(cfg: &SystemConfig, beta: f64) -> Result<f64> {
    theorem1_objective_at(cfg, &SplitParams::new(cfg, beta)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Bound {
    pub beta: f64,
    pub value: f64,
    /// Outcome of the discrete convexity scan of the objective over feasible β.
    pub convex: bool,
}

/// Lower bound on the worst-case load under uncoded placement:
/// `min_β (1/2) [f_c(KβM/N_c) + f_u(K(1-β)M/(G N_u))]`.
pub fn theorem1_bound(cfg: &SystemConfig) -> Result<Theorem1Bound> {
    cfg.ensure_valid()?;
    let (lo, hi) = feasible_common_memory(cfg);
    let objective = |common: f64| {
        theorem1_objective_at(cfg, &SplitParams::from_common_memory(cfg, common))
            .unwrap_or(f64::INFINITY)
    };
    let xtol = 1e-9 * cfg.memory.max(f64::MIN_POSITIVE);
    let best = grid_golden_minimize(objective, lo, hi, xtol);
    let convex = is_discretely_convex(objective, lo, hi, GRID_POINTS, 1e-9);
    let split = SplitParams::from_common_memory(cfg, best.x);
    Ok(Theorem1Bound {
        beta: split.beta,
        value: best.value,
        convex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        let cfg = SystemConfig::new(4, 2, 4, 2, 0.0);
        let b = theorem1_bound(&cfg).unwrap();
        assert_eq!(b.value, 4.0);
        let b = theorem1_bound(&cfg.with_memory(6.0)).unwrap();
        assert_eq!(b.value, 0.0);
        assert!((b.beta - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn desk_value() {
        let cfg = SystemConfig::new(4, 2, 4, 2, 2.0);
        let b = theorem1_bound(&cfg).unwrap();
        // mpmath root of the derivative: β* = 0.45445115010332, value 1.24430639376292.
        assert!((b.value - 1.244306393762915).abs() < 1e-12);
        assert!((b.beta - 0.454451150103322).abs() < 1e-8);
        assert!(b.convex);
        assert!((theorem1_objective(&cfg, 0.455).unwrap() - 1.2443).abs() < 1e-4);
    }
}
