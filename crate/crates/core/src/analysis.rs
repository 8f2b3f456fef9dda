//! Gap analysis between the achievable load and the converse bound, memory
//! sweeps, and exhaustive worst-case demand search.

use num_traits::Zero;
use serde::Serialize;

use crate::converse::theorem1_bound;
use crate::error::Result;
use crate::format::sig;
use crate::model::{alpha_profile, enumerate_demands, Demand, DemandClass, Frac, SystemConfig};
use crate::scheme2::{
    achievable_bound, deliver, load_formula_exact, max_alpha_load, place, SplitParams,
};

pub const DEFAULT_GRID_POINTS: usize = 101;
pub const CSV_HEADER: &str = "M,beta_ach,achievable,beta_conv,converse,gap";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "M")]
    pub memory: f64,
    pub beta_ach: f64,
    pub achievable: f64,
    pub beta_conv: f64,
    pub converse: f64,
    pub gap: f64,
}

/// `achievable / converse`, with 0/0 taken as 1.
pub fn gap_ratio(achievable: f64, converse: f64) -> f64 {
    if converse > 0.0 {
        achievable / converse
    } else if achievable == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// `points` evenly spaced memory sizes on `[0, N_c + N_u]`.
pub fn uniform_grid(cfg: &SystemConfig, points: usize) -> Vec<f64> {
    let max = cfg.max_memory();
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    max
                } else {
                    max * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Memory sizes at which both `t_c` and `t_u` can be integers:
/// `M = t_c N_c / K + t_u G N_u / K`.
pub fn integer_breakpoints(cfg: &SystemConfig) -> Vec<f64> {
    let k = cfg.users as f64;
    let mut out = Vec::new();
    for t_c in 0..=cfg.users {
        for t_u in 0..=cfg.users_per_group() {
            out.push(
                t_c as f64 * cfg.common_files as f64 / k
                    + t_u as f64 * (cfg.groups * cfg.unique_files) as f64 / k,
            );
        }
    }
    out
}

/// 101 uniform points plus the integer-`t` breakpoints, sorted and deduplicated.
pub fn default_grid(cfg: &SystemConfig) -> Vec<f64> {
    let mut grid = uniform_grid(cfg, DEFAULT_GRID_POINTS);
    grid.extend(integer_breakpoints(cfg));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    grid
}

pub fn sweep_row(cfg: &SystemConfig) -> Result<SweepRow> {
    let ach = achievable_bound(cfg)?;
    let conv = theorem1_bound(cfg)?;
    Ok(SweepRow {
        memory: cfg.memory,
        beta_ach: ach.beta,
        achievable: ach.value,
        beta_conv: conv.beta,
        converse: conv.value,
        gap: gap_ratio(ach.value, conv.value),
    })
}

pub fn gap_sweep(cfg: &SystemConfig, grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&m| sweep_row(&cfg.with_memory(m)))
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let cells = [
            r.memory,
            r.beta_ach,
            r.achievable,
            r.beta_conv,
            r.converse,
            r.gap,
        ]
        .map(sig);
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedBetaGap {
    pub beta_star: f64,
    pub achievable_at_beta_star: f64,
    pub converse: f64,
    pub ratio: f64,
}

/// Evaluates the scheme at the converse minimizer `β*` instead of its own
/// optimum; the ratio to the converse is at most 2.
pub fn fixed_beta_gap(cfg: &SystemConfig) -> Result<FixedBetaGap> {
    let conv = theorem1_bound(cfg)?;
    let split = SplitParams::new(cfg, conv.beta)?;
    let (_, achievable) = max_alpha_load(cfg, &split)?;
    Ok(FixedBetaGap {
        beta_star: conv.beta,
        achievable_at_beta_star: achievable,
        converse: conv.value,
        ratio: gap_ratio(achievable, conv.value),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCase {
    pub demand: Demand,
    #[serde(serialize_with = "frac_string")]
    pub load: Frac,
    pub alpha_profile: Vec<usize>,
    pub demands_checked: usize,
    /// Largest closed-form load over the symmetric `α` present in the class.
    #[serde(serialize_with = "frac_string")]
    pub symmetric_max: Frac,
    /// Some asymmetric demand strictly beats every symmetric one.
    pub asymmetric_exceeds: bool,
}

fn frac_string<S: serde::Serializer>(x: &Frac, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Simulates delivery for every demand in `class` and returns the first
/// demand (in enumeration order) attaining the largest load.
pub fn worst_case_bruteforce(
    cfg: &SystemConfig,
    beta: f64,
    class: DemandClass,
    cap: u128,
) -> Result<WorstCase> {
    let split = SplitParams::new(cfg, beta)?;
    let (t_c, t_u) = split.require_integer()?;
    let placement = place(cfg, beta)?;
    let demands = enumerate_demands(cfg, class, cap)?;
    let mut worst: Option<(Demand, Frac)> = None;
    for d in &demands {
        let load = deliver(cfg, &placement, d, &split)?.total_load;
        if worst.as_ref().is_none_or(|(_, w)| load > *w) {
            worst = Some((d.clone(), load));
        }
    }
    let alphas: Vec<usize> = match class {
        DemandClass::All => (0..=cfg.users_per_group()).collect(),
        DemandClass::CommonOnly => vec![0],
        DemandClass::UniqueOnly => vec![cfg.users_per_group()],
    };
    let mut symmetric_max = Frac::zero();
    for alpha in alphas {
        symmetric_max = symmetric_max.max(load_formula_exact(cfg, t_c, t_u, alpha)?);
    }
    let (demand, load) = worst.expect("demand classes are never empty for valid configs");
    Ok(WorstCase {
        alpha_profile: alpha_profile(&demand, cfg),
        demand,
        load,
        demands_checked: demands.len(),
        symmetric_max,
        asymmetric_exceeds: load > symmetric_max,
    })
}
