//! Simulation suites run by `hetcache verify` and the acceptance tests.

use itertools::Itertools;
use serde::Serialize;

use crate::converse::{r_lb, verify_genie_counting};
use crate::error::Result;
use crate::model::{
    enumerate_demands, symmetric_alpha, DemandClass, PlacementSpec, SystemConfig,
    DEFAULT_ENUMERATION_CAP,
};
use crate::scheme2::{
    decode, deliver, load_formula_exact, place_split, place_with_library, with_default_file_bits,
    SplitParams,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            passed: true,
            checked: 0,
            failure: None,
        }
    }

    fn fail(&mut self, detail: String) {
        if self.passed {
            self.passed = false;
            self.failure = Some(detail);
        }
    }
}

/// Every user decodes its file bit-exactly, for every demand in `D` and each
/// seed. A zero `B` is replaced by the smallest subpacketization.
pub fn check_decodability(
    cfg: &SystemConfig,
    split: &SplitParams,
    seeds: &[u64],
) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("decodability");
    let cfg = &with_default_file_bits(cfg, split)?;
    let demands = enumerate_demands(cfg, DemandClass::All, DEFAULT_ENUMERATION_CAP)?;
    for &seed in seeds {
        let (placement, library) = place_with_library(cfg, split, seed)?;
        let layout = placement.without_payloads();
        let caches: Vec<_> = (0..cfg.users).map(|k| placement.user_cache(k)).collect();
        for d in &demands {
            let tx = deliver(cfg, &placement, d, split)?;
            for cache in &caches {
                suite.checked += 1;
                match decode(cfg, &layout, cache, &tx, d) {
                    Ok(bits) if Some(&bits) == library.get(d.file_of(cache.user)) => {}
                    Ok(_) => suite.fail(format!(
                        "seed {seed}: user {} decoded wrong bits",
                        cache.user
                    )),
                    Err(e) => suite.fail(format!("seed {seed}: {e}")),
                }
            }
        }
    }
    Ok(suite)
}

/// Delivered load equals the closed form for every group-symmetric demand.
pub fn check_formula_agreement(cfg: &SystemConfig, split: &SplitParams) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("formula_agreement");
    let (t_c, t_u) = split.require_integer()?;
    let placement = place_split(cfg, split)?;
    for d in enumerate_demands(cfg, DemandClass::All, DEFAULT_ENUMERATION_CAP)? {
        let Some(alpha) = symmetric_alpha(&d, cfg) else {
            continue;
        };
        suite.checked += 1;
        let load = deliver(cfg, &placement, &d, split)?.total_load;
        let formula = load_formula_exact(cfg, t_c, t_u, alpha)?;
        if load != formula {
            suite.fail(format!(
                "alpha = {alpha}: delivered {load}, formula {formula}"
            ));
        }
    }
    Ok(suite)
}

/// `r_lb(d, u)` never exceeds the delivered load, over all `(d, u) ∈ D × S_K`.
pub fn check_genie_validity(cfg: &SystemConfig, split: &SplitParams) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("genie_validity");
    let placement = place_split(cfg, split)?;
    let perms: Vec<Vec<usize>> = (0..cfg.users).permutations(cfg.users).collect();
    for d in enumerate_demands(cfg, DemandClass::All, DEFAULT_ENUMERATION_CAP)? {
        let load = deliver(cfg, &placement, &d, split)?.total_load;
        for u in &perms {
            suite.checked += 1;
            let lb = r_lb(cfg, &placement, &d, u)?;
            if lb > load {
                suite.fail(format!("u = {u:?}: r_lb {lb} exceeds delivered {load}"));
            }
        }
    }
    Ok(suite)
}

pub fn check_placement(cfg: &SystemConfig, placement: &PlacementSpec) -> SuiteResult {
    let mut suite = SuiteResult::new("placement_invariants");
    suite.checked = 1;
    if let Err(v) = placement.check(cfg) {
        suite.fail(v.to_string());
    }
    suite
}

pub fn check_genie_counting(cfg: &SystemConfig, placement: &PlacementSpec) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("genie_counting");
    let report = verify_genie_counting(cfg, placement, DEFAULT_ENUMERATION_CAP)?;
    for class in &report.classes {
        suite.checked += class.pairs_checked as u64;
        if let Some(m) = &class.first_mismatch {
            suite.fail(format!("{:?}: {m}", class.class));
        }
    }
    Ok(suite)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitReport {
    pub beta: f64,
    pub t_c: usize,
    pub t_u: usize,
    pub suites: Vec<SuiteResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub splits: Vec<SplitReport>,
    /// Suites run on a user-supplied placement, if any.
    pub fixture: Option<Vec<SuiteResult>>,
}

impl VerificationReport {
    pub fn first_failure(&self) -> Option<String> {
        let fixture = self.fixture.iter().flatten().map(|s| (None, s));
        let splits = self
            .splits
            .iter()
            .flat_map(|r| r.suites.iter().map(move |s| (Some(r), s)));
        fixture
            .chain(splits)
            .find(|(_, s)| !s.passed)
            .map(|(r, s)| {
                let at = r.map_or("placement fixture".to_string(), |r| {
                    format!("t_c = {}, t_u = {}", r.t_c, r.t_u)
                });
                format!(
                    "{} ({at}): {}",
                    s.name,
                    s.failure.as_deref().unwrap_or("failed")
                )
            })
    }
}

/// All suites for each split, plus invariant and counting checks on a fixture placement.
pub fn run_verification(
    cfg: &SystemConfig,
    splits: &[SplitParams],
    seeds: &[u64],
    fixture: Option<&PlacementSpec>,
) -> Result<VerificationReport> {
    let fixture = match fixture {
        Some(p) => {
            let invariants = check_placement(cfg, p);
            let mut suites = vec![invariants.clone()];
            if invariants.passed {
                suites.push(check_genie_counting(cfg, p)?);
            }
            Some(suites)
        }
        None => None,
    };
    let mut reports = Vec::new();
    for split in splits {
        let (t_c, t_u) = split.require_integer()?;
        let placement = place_split(cfg, split)?;
        let suites = vec![
            check_placement(cfg, &placement),
            check_decodability(cfg, split, seeds)?,
            check_formula_agreement(cfg, split)?,
            check_genie_validity(cfg, split)?,
            check_genie_counting(cfg, &placement)?,
        ];
        reports.push(SplitReport {
            beta: split.beta,
            t_c,
            t_u,
            suites,
        });
    }
    let passed = fixture
        .iter()
        .flatten()
        .chain(reports.iter().flat_map(|r| &r.suites))
        .all(|s| s.passed);
    Ok(VerificationReport {
        passed,
        splits: reports,
        fixture,
    })
}
