use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Sub};

use num_traits::Zero;

use crate::model::{frac_to_f64, FileId, Frac, PlacementSpec, SystemConfig};

/// Numbers a memory profile can be expressed in: `f64` for analytic work,
/// [`Frac`] for exact brute-force comparisons.
pub trait Scalar:
    Copy
    + Zero
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn ratio(num: usize, den: usize) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn ratio(num: usize, den: usize) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for Frac {
    fn ratio(num: usize, den: usize) -> Self {
        Frac::new(num as i128, den as i128)
    }
    fn to_f64(self) -> f64 {
        frac_to_f64(self)
    }
}

/// Valid in-group counts `i` for a cached set of size `t'`:
/// `max(0, t' - K + K/G) ..= min(t', K/G)`.
pub fn in_group_range(users: usize, groups: usize, t: usize) -> std::ops::RangeInclusive<usize> {
    let per = users / groups;
    (t + per).saturating_sub(users)..=t.min(per)
}

/// Fractions of cached library bits by replication count.
///
/// `x_c[t']`: share of common-file bits cached by exactly `t'` users.
/// `x_u_ti[(t', i)]`: unique-file bits cached by `t'` users of which `i` belong
/// to the file's group (summed over groups, so the whole map sums to `G`).
/// `x_u[t'] = Σ_i x_u_ti[(t', i)] / G`.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryProfile<T> {
    pub users: usize,
    pub groups: usize,
    pub x_c: Vec<T>,
    pub x_u: Vec<T>,
    pub x_u_ti: BTreeMap<(usize, usize), T>,
    pub beta_hat: f64,
}

impl<T: Scalar> MemoryProfile<T> {
    /// Assembles a profile, deriving `x_u` from the `(t', i)`-resolved masses.
    pub fn from_parts(
        users: usize,
        groups: usize,
        x_c: Vec<T>,
        x_u_ti: BTreeMap<(usize, usize), T>,
        beta_hat: f64,
    ) -> Self {
        let mut x_u = vec![T::zero(); users + 1];
        for (&(t, _), &mass) in &x_u_ti {
            x_u[t] = x_u[t] + mass / T::ratio(groups, 1);
        }
        MemoryProfile {
            users,
            groups,
            x_c,
            x_u,
            x_u_ti,
            beta_hat,
        }
    }

    pub fn common_moment(&self) -> T {
        self.x_c
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (t, &x)| acc + T::ratio(t, 1) * x)
    }

    pub fn unique_moment(&self) -> T {
        self.x_u
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (t, &x)| acc + T::ratio(t, 1) * x)
    }

    pub fn to_f64(&self) -> MemoryProfile<f64> {
        MemoryProfile {
            users: self.users,
            groups: self.groups,
            x_c: self.x_c.iter().map(|x| x.to_f64()).collect(),
            x_u: self.x_u.iter().map(|x| x.to_f64()).collect(),
            x_u_ti: self.x_u_ti.iter().map(|(&k, x)| (k, x.to_f64())).collect(),
            beta_hat: self.beta_hat,
        }
    }

    /// Checks normalization, the first-moment memory constraints for
    /// `beta_hat`, the `i` ranges and the `x_u`/`x_u_ti` consistency.
    pub fn check(&self, cfg: &SystemConfig, tol: f64) -> Result<(), String> {
        let sum = |v: &[T]| v.iter().fold(0.0, |acc, x| acc + x.to_f64());
        let (sc, su) = (sum(&self.x_c), sum(&self.x_u));
        if (sc - 1.0).abs() > tol || (su - 1.0).abs() > tol {
            return Err(format!("profiles sum to {sc} and {su}, expected 1"));
        }
        if self
            .x_c
            .iter()
            .chain(&self.x_u)
            .chain(self.x_u_ti.values())
            .any(|x| x.to_f64() < -tol)
        {
            return Err("negative mass".into());
        }
        let m = cfg.memory;
        let k = cfg.users as f64;
        let bound_c = k * self.beta_hat * m / cfg.common_files as f64;
        let bound_u = k * (1.0 - self.beta_hat) * m / (cfg.groups * cfg.unique_files) as f64;
        let (mc, mu) = (self.common_moment().to_f64(), self.unique_moment().to_f64());
        if mc > bound_c + tol || mu > bound_u + tol {
            return Err(format!(
                "first moments ({mc}, {mu}) exceed ({bound_c}, {bound_u}) at beta_hat = {}",
                self.beta_hat
            ));
        }
        let mut rebuilt = vec![0.0; self.users + 1];
        for (&(t, i), x) in &self.x_u_ti {
            if t > self.users || !in_group_range(self.users, self.groups, t).contains(&i) {
                return Err(format!("mass at invalid (t', i) = ({t}, {i})"));
            }
            rebuilt[t] += x.to_f64() / self.groups as f64;
        }
        if rebuilt
            .iter()
            .zip(&self.x_u)
            .any(|(a, b)| (a - b.to_f64()).abs() > tol)
        {
            return Err("x_u does not match the i-resolved profile".into());
        }
        Ok(())
    }
}

/// Extracts the exact memory profile of a placement. `beta_hat` is the
/// common-file share of the cache, `(N_c / (K M)) Σ t' x_c[t']`, clipped to
/// `[0, 1]` (0 when `M = 0`).
pub fn memory_profiles(placement: &PlacementSpec, cfg: &SystemConfig) -> MemoryProfile<Frac> {
    let mut x_c = vec![Frac::zero(); cfg.users + 1];
    let mut x_u_ti: BTreeMap<(usize, usize), Frac> = BTreeMap::new();
    let n_c = Frac::from_integer(cfg.common_files as i128);
    let n_u = Frac::from_integer(cfg.unique_files as i128);
    for (sub, &size) in placement.subfiles() {
        let t = sub.cached_by.len();
        match sub.file {
            FileId::Common { .. } => x_c[t] += size / n_c,
            FileId::Unique { group, .. } => {
                let i = sub.cached_by.intersection(cfg.group_members(group)).len();
                *x_u_ti.entry((t, i)).or_insert_with(Frac::zero) += size / n_u;
            }
        }
    }
    let mut profile = MemoryProfile::from_parts(cfg.users, cfg.groups, x_c, x_u_ti, 0.0);
    if cfg.memory > 0.0 {
        let moment = frac_to_f64(profile.common_moment());
        profile.beta_hat =
            (cfg.common_files as f64 * moment / (cfg.users as f64 * cfg.memory)).clamp(0.0, 1.0);
    }
    profile
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{library_files, UserSet};
    use crate::scheme2::place;

    #[test]
    fn man_profiles_are_point_masses() {
        let cfg = SystemConfig::new(4, 2, 4, 2, 2.0);
        let prof = memory_profiles(&place(&cfg, 0.5).unwrap(), &cfg);
        assert_eq!(
            prof.x_c,
            vec![0, 1, 0, 0, 0]
                .into_iter()
                .map(Frac::from_integer)
                .collect::<Vec<_>>()
        );
        assert_eq!(
            prof.x_u,
            vec![0, 1, 0, 0, 0]
                .into_iter()
                .map(Frac::from_integer)
                .collect::<Vec<_>>()
        );
        assert_eq!(prof.x_u_ti.len(), 1);
        assert_eq!(prof.x_u_ti[&(1, 1)], Frac::from_integer(2));
        assert_eq!(prof.beta_hat, 0.5);
        prof.check(&cfg, 1e-12).unwrap();
    }

    #[test]
    fn zero_memory_profiles() {
        let cfg = SystemConfig::new(4, 2, 4, 2, 0.0);
        let prof = memory_profiles(&place(&cfg, 0.0).unwrap(), &cfg);
        assert_eq!(prof.x_c[0], Frac::from_integer(1));
        assert_eq!(prof.x_u[0], Frac::from_integer(1));
        assert_eq!(prof.beta_hat, 0.0);
        prof.check(&cfg, 0.0).unwrap();
    }

    #[test]
    fn cross_group_placement_profile() {
        // Unique files of group 0 cached half by {0} and half by {0, 2}.
        let cfg = SystemConfig::new(4, 2, 4, 2, 2.0);
        let mut p = PlacementSpec::new();
        for f in library_files(&cfg) {
            match f {
                FileId::Common { .. } => p.add(f, UserSet::EMPTY, Frac::from_integer(1)),
                FileId::Unique { group: 0, .. } => {
                    p.add(f, UserSet::from_users([0]), Frac::new(1, 2));
                    p.add(f, UserSet::from_users([0, 2]), Frac::new(1, 2));
                }
                FileId::Unique { .. } => p.add(f, UserSet::EMPTY, Frac::from_integer(1)),
            }
        }
        p.check(&cfg).unwrap();
        let prof = memory_profiles(&p, &cfg);
        assert_eq!(prof.x_u_ti[&(1, 1)], Frac::new(1, 2));
        assert_eq!(prof.x_u_ti[&(2, 1)], Frac::new(1, 2));
        assert_eq!(prof.x_u_ti[&(0, 0)], Frac::from_integer(1));
        assert_eq!(
            prof.x_u,
            vec![
                Frac::new(1, 2),
                Frac::new(1, 4),
                Frac::new(1, 4),
                Frac::zero(),
                Frac::zero()
            ]
        );
        prof.check(&cfg, 1e-12).unwrap();
    }

    #[test]
    fn in_group_ranges() {
        assert_eq!(in_group_range(4, 2, 0), 0..=0);
        assert_eq!(in_group_range(4, 2, 3), 1..=2);
        assert_eq!(in_group_range(4, 2, 4), 2..=2);
        assert_eq!(in_group_range(6, 3, 5), 1..=2);
    }
}
