use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Demand, Frac, PlacementSpec, Subfile, SystemConfig, UserSet};

/// Checks that `u` is a permutation of `0..K`.
pub fn check_permutation(cfg: &SystemConfig, u: &[usize]) -> Result<()> {
    let distinct: BTreeSet<_> = u.iter().copied().collect();
    if u.len() != cfg.users || distinct.len() != cfg.users || u.iter().any(|&k| k >= cfg.users) {
        return Err(Error::InvalidPermutation(format!(
            "{u:?} is not a permutation of 0..{}",
            cfg.users
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenieEntry {
    /// Position in the permutation whose cache contributed the subfile.
    pub position: usize,
    pub size: Frac,
}

/// Cache of the virtual user: position `k` keeps `Z_{u_k}` minus the caches of
/// `u_1..u_{k-1}` and minus the files those users requested.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenieCache {
    pub retained: BTreeMap<Subfile, GenieEntry>,
}

impl GenieCache {
    pub fn total_size(&self) -> Frac {
        self.retained
            .values()
            .fold(Frac::zero(), |acc, e| acc + e.size)
    }

    pub fn contains(&self, subfile: &Subfile) -> bool {
        self.retained.contains_key(subfile)
    }
}

pub fn genie_cache(
    cfg: &SystemConfig,
    placement: &PlacementSpec,
    d: &Demand,
    u: &[usize],
) -> Result<GenieCache> {
    check_permutation(cfg, u)?;
    let mut retained = BTreeMap::new();
    let mut earlier = UserSet::EMPTY;
    let mut requested = BTreeSet::new();
    for (position, &user) in u.iter().enumerate() {
        for (sub, &size) in placement.subfiles() {
            if sub.cached_by.contains(user)
                && sub.cached_by.is_disjoint(earlier)
                && !requested.contains(&sub.file)
            {
                retained.insert(*sub, GenieEntry { position, size });
            }
        }
        earlier = earlier.with(user);
        requested.insert(d.file_of(user));
    }
    Ok(GenieCache { retained })
}

/// Genie-aided lower bound for one `(d, u)`:
/// `Σ_k Σ_{T ⊆ [K] \ {u_1..u_k}} |W_{d_{u_k}, T}| / B`.
pub fn r_lb(
    cfg: &SystemConfig,
    placement: &PlacementSpec,
    d: &Demand,
    u: &[usize],
) -> Result<Frac> {
    check_permutation(cfg, u)?;
    let mut removed = UserSet::EMPTY;
    let mut total = Frac::zero();
    for &user in u {
        removed = removed.with(user);
        for (sub, &size) in placement.subfiles_of(d.file_of(user)) {
            if sub.cached_by.is_disjoint(removed) {
                total += size;
            }
        }
    }
    Ok(total)
}

/// Index pairs `(file, T)` summed by [`r_lb`], including zero-size ones.
pub(crate) fn lb_terms(cfg: &SystemConfig, d: &Demand, u: &[usize]) -> Vec<Subfile> {
    let mut removed = UserSet::EMPTY;
    let mut terms = Vec::new();
    for &user in u {
        removed = removed.with(user);
        let file = d.file_of(user);
        terms.extend(
            cfg.all_users()
                .difference(removed)
                .subsets()
                .map(|t| Subfile::new(file, t)),
        );
    }
    terms
}
