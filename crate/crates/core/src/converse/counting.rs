use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use serde::Serialize;

use crate::combinatorics::perm_count;
use crate::converse::genie::{lb_terms, r_lb};
use crate::converse::profile::{memory_profiles, MemoryProfile, Scalar};
use crate::error::{Error, Result};
use crate::model::{
    demand_count, enumerate_demands, frac_to_f64, library_files, DemandClass, FileId, Frac,
    PlacementSpec, Subfile, SystemConfig,
};

/// `Σ_{t'} f_c(t') x_c[t']` with `f_c(t') = (K - t') / (t' + 1)`.
pub fn counted_common_bound<T: Scalar>(profile: &MemoryProfile<T>, users: usize) -> T {
    profile
        .x_c
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (t, &x)| {
            acc + T::ratio(users.saturating_sub(t), t + 1) * x
        })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniqueBound<T> {
    /// `Σ_{t'} Σ_i (K/G - i) / (t' + 1) · x_u_ti[(t', i)]`.
    pub exact: T,
    /// `Σ_{t'} G (K/G - min(t', K/G)) / (t' + 1) · x_u[t']`.
    pub relaxed: T,
}

pub fn counted_unique_bound<T: Scalar>(
    profile: &MemoryProfile<T>,
    users: usize,
    groups: usize,
) -> UniqueBound<T> {
    let per = users / groups;
    let exact = profile.x_u_ti.iter().fold(T::zero(), |acc, (&(t, i), &x)| {
        acc + T::ratio(per.saturating_sub(i), t + 1) * x
    });
    let relaxed = profile
        .x_u
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (t, &x)| {
            acc + T::ratio(groups * per.saturating_sub(t), t + 1) * x
        });
    UniqueBound { exact, relaxed }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub class: DemandClass,
    pub pairs_checked: u128,
    pub brute_force_average: String,
    pub closed_form: String,
    pub max_abs_error: f64,
    pub subfiles_checked: usize,
    pub first_mismatch: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenieCountingReport {
    pub passed: bool,
    pub classes: Vec<ClassReport>,
}

/// Closed-form number of appearances of `sub` across all `(d, u) ∈ class × S_K`.
pub fn closed_form_appearances(
    cfg: &SystemConfig,
    class: DemandClass,
    sub: &Subfile,
) -> Result<u128> {
    let t = sub.cached_by.len();
    if t >= cfg.users {
        return Ok(0);
    }
    let perms = perm_count(cfg.users, t)?;
    let count = demand_count(cfg, class);
    let overflow = Error::Overflow("closed_form_appearances");
    match (class, sub.file) {
        (DemandClass::CommonOnly, FileId::Common { .. }) => {
            let outside = (cfg.users - t) as u128;
            Ok(count
                .checked_mul(outside)
                .and_then(|x| x.checked_mul(perms))
                .ok_or(overflow)?
                / cfg.common_files as u128)
        }
        (DemandClass::UniqueOnly, FileId::Unique { group, .. }) => {
            let i = sub.cached_by.intersection(cfg.group_members(group)).len();
            let outside = (cfg.users_per_group() - i) as u128;
            Ok(count
                .checked_mul(outside)
                .and_then(|x| x.checked_mul(perms))
                .ok_or(overflow)?
                / cfg.unique_files as u128)
        }
        _ => Ok(0),
    }
}

/// Brute-force check of the counting argument on one placement.
///
/// For `D_c` and `D_u`, averages `r_lb` over every `(d, u)` and compares it in
/// exact arithmetic with the counted closed forms (the common bound and the
/// `i`-resolved unique sum). Also counts the appearances of every `(file, T)`
/// index and compares them with their closed forms.
pub fn verify_genie_counting(
    cfg: &SystemConfig,
    placement: &PlacementSpec,
    cap: u128,
) -> Result<GenieCountingReport> {
    cfg.ensure_valid()?;
    placement.check(cfg).map_err(Error::Placement)?;
    let profile = memory_profiles(placement, cfg);
    let perms: Vec<Vec<usize>> = (0..cfg.users).permutations(cfg.users).collect();

    let mut classes = Vec::new();
    for class in [DemandClass::CommonOnly, DemandClass::UniqueOnly] {
        let pairs = demand_count(cfg, class).saturating_mul(perms.len() as u128);
        if pairs > cap {
            return Err(Error::CapExceeded {
                cardinality: pairs,
                cap,
            });
        }
        let demands = enumerate_demands(cfg, class, cap)?;
        let mut total = Frac::zero();
        let mut appearances: BTreeMap<Subfile, u128> = BTreeMap::new();
        for d in &demands {
            for u in &perms {
                total += r_lb(cfg, placement, d, u)?;
                for term in lb_terms(cfg, d, u) {
                    *appearances.entry(term).or_default() += 1;
                }
            }
        }
        let average = total / Frac::from_integer(pairs as i128);
        let closed = match class {
            DemandClass::CommonOnly => counted_common_bound(&profile, cfg.users),
            _ => counted_unique_bound(&profile, cfg.users, cfg.groups).exact,
        };

        let mut first_mismatch = (average != closed).then(|| "brute-force average".to_string());
        let mut subfiles_checked = 0;
        for file in library_files(cfg) {
            for cached_by in cfg.all_users().subsets() {
                let sub = Subfile::new(file, cached_by);
                let got = appearances.get(&sub).copied().unwrap_or(0);
                let want = closed_form_appearances(cfg, class, &sub)?;
                subfiles_checked += 1;
                if got != want && first_mismatch.is_none() {
                    first_mismatch = Some(format!("{sub}: counted {got}, closed form {want}"));
                }
            }
        }
        classes.push(ClassReport {
            class,
            pairs_checked: pairs,
            brute_force_average: average.to_string(),
            closed_form: closed.to_string(),
            max_abs_error: frac_to_f64(average - closed).abs(),
            subfiles_checked,
            first_mismatch,
        });
    }
    Ok(GenieCountingReport {
        passed: classes.iter().all(|c| c.first_mismatch.is_none()),
        classes,
    })
}
