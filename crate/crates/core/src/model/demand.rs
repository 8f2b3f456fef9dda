use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom_exact, factorial};
use crate::error::{Error, Result};
use crate::model::{FileId, FileKind, SystemConfig};

pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// One request per user, all requested files pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Demand {
    files: Vec<FileId>,
}

/// Wire form of a single request: `{user, kind, index}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub user: usize,
    pub kind: FileKind,
    pub index: usize,
}

impl Demand {
    pub fn new(cfg: &SystemConfig, files: Vec<FileId>) -> Result<Self> {
        if files.len() != cfg.users {
            return Err(Error::InvalidDemand(format!(
                "expected {} requests, got {}",
                cfg.users,
                files.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for (user, &file) in files.iter().enumerate() {
            match file {
                FileId::Common { index } if index >= cfg.common_files => {
                    return Err(Error::InvalidDemand(format!(
                        "user {user}: no common file {index}"
                    )));
                }
                FileId::Unique { group, index } => {
                    if group != cfg.group_of(user) {
                        return Err(Error::InvalidDemand(format!(
                            "user {user} of group {} requests a unique file of group {group}",
                            cfg.group_of(user)
                        )));
                    }
                    if index >= cfg.unique_files {
                        return Err(Error::InvalidDemand(format!(
                            "user {user}: no unique file {index}"
                        )));
                    }
                }
                _ => {}
            }
            if !seen.insert(file) {
                return Err(Error::InvalidDemand(format!("{file} requested twice")));
            }
        }
        Ok(Demand { files })
    }

    pub fn from_requests(cfg: &SystemConfig, requests: &[Request]) -> Result<Self> {
        let mut files = vec![None; cfg.users];
        for r in requests {
            let slot = files
                .get_mut(r.user)
                .ok_or_else(|| Error::InvalidDemand(format!("user {} out of range", r.user)))?;
            *slot = Some(match r.kind {
                FileKind::Common => FileId::common(r.index),
                FileKind::Unique => FileId::unique(cfg.group_of(r.user), r.index),
            });
        }
        let files = files
            .into_iter()
            .enumerate()
            .map(|(k, f)| f.ok_or_else(|| Error::InvalidDemand(format!("user {k} has no request"))))
            .collect::<Result<Vec<_>>>()?;
        Demand::new(cfg, files)
    }

    pub fn requests(&self) -> Vec<Request> {
        self.files
            .iter()
            .enumerate()
            .map(|(user, f)| Request {
                user,
                kind: f.kind(),
                index: f.index(),
            })
            .collect()
    }

    pub fn file_of(&self, user: usize) -> FileId {
        self.files[user]
    }

    pub fn files(&self) -> &[FileId] {
        &self.files
    }

    pub fn users(&self) -> usize {
        self.files.len()
    }

    /// The user requesting `file`, if any.
    pub fn requester_of(&self, file: FileId) -> Option<usize> {
        self.files.iter().position(|&f| f == file)
    }
}

impl Serialize for Demand {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.requests().serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemandClass {
    All,
    CommonOnly,
    UniqueOnly,
}

fn falling(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    ((n - k + 1)..=n).try_fold(1u128, |acc, x| acc.checked_mul(x as u128))
}

/// `|D|`, `|D_c| = C(N_c, K) K!` or `|D_u| = (C(N_u, K/G) (K/G)!)^G` (saturating).
pub fn demand_count(cfg: &SystemConfig, class: DemandClass) -> u128 {
    let per = cfg.users_per_group();
    let both = |n: usize, k: usize| -> Option<u128> {
        binom_exact(n as u64, k as u64)?.checked_mul(factorial(k as u64)?)
    };
    let count = match class {
        DemandClass::CommonOnly => both(cfg.common_files, cfg.users),
        DemandClass::UniqueOnly => both(cfg.unique_files, per)
            .and_then(|one| (0..cfg.groups).try_fold(1u128, |acc, _| acc.checked_mul(one))),
        DemandClass::All => count_all(cfg),
    };
    count.unwrap_or(u128::MAX)
}

// Σ over per-group unique-request counts α_g of
// Π_g C(K/G, α_g) P(N_u, α_g) · P(N_c, K - Σ α_g).
fn count_all(cfg: &SystemConfig) -> Option<u128> {
    let per = cfg.users_per_group();
    // ways[a] = number of ways to fill the unique requests of the groups seen so far
    // with `a` unique requesters in total.
    let mut ways = vec![0u128; cfg.users + 1];
    ways[0] = 1;
    for _ in 0..cfg.groups {
        let mut next = vec![0u128; cfg.users + 1];
        for (a, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for alpha in 0..=per.min(cfg.unique_files) {
                if a + alpha > cfg.users {
                    break;
                }
                let term = w
                    .checked_mul(binom_exact(per as u64, alpha as u64)?)?
                    .checked_mul(falling(cfg.unique_files, alpha)?)?;
                next[a + alpha] = next[a + alpha].checked_add(term)?;
            }
        }
        ways = next;
    }
    ways.iter().enumerate().try_fold(0u128, |acc, (a, &w)| {
        acc.checked_add(w.checked_mul(falling(cfg.common_files, cfg.users - a)?)?)
    })
}

/// Enumerate a demand class in lexicographic order over `(kind, index)` per user,
/// user 0 most significant.
pub fn enumerate_demands(cfg: &SystemConfig, class: DemandClass, cap: u128) -> Result<Vec<Demand>> {
    cfg.ensure_valid()?;
    let cardinality = demand_count(cfg, class);
    if cardinality > cap {
        return Err(Error::CapExceeded { cardinality, cap });
    }
    let mut out = Vec::with_capacity(cardinality as usize);
    let mut current = Vec::with_capacity(cfg.users);
    let mut used = BTreeSet::new();
    extend(cfg, class, &mut current, &mut used, &mut out);
    debug_assert_eq!(out.len() as u128, cardinality);
    Ok(out)
}

fn options(cfg: &SystemConfig, class: DemandClass, user: usize) -> Vec<FileId> {
    let common = (0..cfg.common_files).map(FileId::common);
    let unique = (0..cfg.unique_files).map(|n| FileId::unique(cfg.group_of(user), n));
    match class {
        DemandClass::All => common.chain(unique).collect(),
        DemandClass::CommonOnly => common.collect(),
        DemandClass::UniqueOnly => unique.collect(),
    }
}

fn extend(
    cfg: &SystemConfig,
    class: DemandClass,
    current: &mut Vec<FileId>,
    used: &mut BTreeSet<FileId>,
    out: &mut Vec<Demand>,
) {
    let user = current.len();
    if user == cfg.users {
        out.push(Demand {
            files: current.clone(),
        });
        return;
    }
    for file in options(cfg, class, user) {
        if used.insert(file) {
            current.push(file);
            extend(cfg, class, current, used, out);
            current.pop();
            used.remove(&file);
        }
    }
}

/// Per-group number of unique-file requesters `α_g`.
pub fn alpha_profile(d: &Demand, cfg: &SystemConfig) -> Vec<usize> {
    let mut alpha = vec![0; cfg.groups];
    for (user, f) in d.files().iter().enumerate() {
        if !f.is_common() {
            alpha[cfg.group_of(user)] += 1;
        }
    }
    alpha
}

/// The common `α` when every group has the same number of unique requesters.
pub fn symmetric_alpha(d: &Demand, cfg: &SystemConfig) -> Option<usize> {
    let profile = alpha_profile(d, cfg);
    let first = *profile.first()?;
    profile.iter().all(|&a| a == first).then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_distinct(d: &Demand) -> bool {
        let f = d.files();
        (0..f.len()).all(|i| (i + 1..f.len()).all(|j| f[i] != f[j]))
    }

    #[test]
    fn class_cardinalities() {
        let cfg = SystemConfig::new(2, 1, 2, 2, 0.0);
        assert_eq!(
            enumerate_demands(&cfg, DemandClass::CommonOnly, DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .len(),
            2
        );

        let cfg = SystemConfig::new(2, 2, 2, 1, 0.0);
        assert_eq!(
            enumerate_demands(&cfg, DemandClass::UniqueOnly, DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .len(),
            1
        );
        // Each user picks c0, c1 or its own group's unique file; only the two
        // shared-common collisions are excluded: 3 * 3 - 2.
        assert_eq!(
            enumerate_demands(&cfg, DemandClass::All, DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .len(),
            7
        );
    }

    #[test]
    fn counts_match_enumeration() {
        for cfg in [
            SystemConfig::new(2, 1, 2, 2, 0.0),
            SystemConfig::new(2, 2, 2, 1, 0.0),
            SystemConfig::new(4, 2, 4, 2, 0.0),
            SystemConfig::new(3, 3, 4, 2, 0.0),
            SystemConfig::new(4, 2, 5, 3, 0.0),
        ] {
            for class in [
                DemandClass::All,
                DemandClass::CommonOnly,
                DemandClass::UniqueOnly,
            ] {
                let list = enumerate_demands(&cfg, class, DEFAULT_ENUMERATION_CAP).unwrap();
                assert_eq!(
                    list.len() as u128,
                    demand_count(&cfg, class),
                    "{cfg:?} {class:?}"
                );
                assert!(list.iter().all(all_distinct));
                assert!(list.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
            }
        }
    }

    #[test]
    fn classes_are_disjoint_subsets_of_all() {
        let cfg = SystemConfig::new(4, 2, 4, 2, 0.0);
        let all: BTreeSet<_> = enumerate_demands(&cfg, DemandClass::All, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .into_iter()
            .collect();
        let common =
            enumerate_demands(&cfg, DemandClass::CommonOnly, DEFAULT_ENUMERATION_CAP).unwrap();
        let unique =
            enumerate_demands(&cfg, DemandClass::UniqueOnly, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(common.len(), 24);
        assert_eq!(unique.len(), 4);
        assert!(common.iter().chain(&unique).all(|d| all.contains(d)));
        assert!(common.iter().all(|d| !unique.contains(d)));
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = SystemConfig::new(8, 2, 20, 10, 0.0);
        match enumerate_demands(&cfg, DemandClass::All, 1000) {
            Err(Error::CapExceeded { cardinality, cap }) => {
                assert_eq!(cap, 1000);
                assert!(cardinality > 1000);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn alpha_profiles() {
        let cfg = SystemConfig::new(4, 2, 4, 2, 0.0);
        let common = Demand::new(&cfg, (0..4).map(FileId::common).collect()).unwrap();
        assert_eq!(alpha_profile(&common, &cfg), vec![0, 0]);
        let unique = Demand::new(
            &cfg,
            vec![
                FileId::unique(0, 0),
                FileId::unique(0, 1),
                FileId::unique(1, 0),
                FileId::unique(1, 1),
            ],
        )
        .unwrap();
        assert_eq!(alpha_profile(&unique, &cfg), vec![2, 2]);
        let mixed = Demand::new(
            &cfg,
            vec![
                FileId::unique(0, 0),
                FileId::common(0),
                FileId::common(1),
                FileId::unique(1, 1),
            ],
        )
        .unwrap();
        assert_eq!(alpha_profile(&mixed, &cfg), vec![1, 1]);
        assert_eq!(symmetric_alpha(&mixed, &cfg), Some(1));
    }

    #[test]
    fn invalid_demands_rejected() {
        let cfg = SystemConfig::new(4, 2, 4, 2, 0.0);
        let dup = vec![
            FileId::common(0),
            FileId::common(0),
            FileId::common(1),
            FileId::common(2),
        ];
        assert!(Demand::new(&cfg, dup).is_err());
        let wrong_group = vec![
            FileId::unique(1, 0),
            FileId::common(0),
            FileId::common(1),
            FileId::common(2),
        ];
        assert!(Demand::new(&cfg, wrong_group).is_err());
        assert!(Demand::new(&cfg, vec![FileId::common(0)]).is_err());
    }

    #[test]
    fn request_json() {
        let cfg = SystemConfig::new(2, 2, 2, 1, 0.0);
        let d = Demand::new(&cfg, vec![FileId::common(1), FileId::unique(1, 0)]).unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"[{"user":0,"kind":"common","index":1},{"user":1,"kind":"unique","index":0}]"#
        );
        let reqs: Vec<Request> = serde_json::from_str(&json).unwrap();
        assert_eq!(Demand::from_requests(&cfg, &reqs).unwrap(), d);
    }
}
