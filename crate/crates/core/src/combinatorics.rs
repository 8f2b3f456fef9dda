//! Binomial coefficients over the reals and the two bound kernels.
//!
//! `gen_binom` follows the zero convention `C(n, k) = 0` whenever `n < 0`,
//! `k < 0` or `n < k`, and otherwise evaluates `Γ(n+1) / (Γ(k+1) Γ(n-k+1))`.
//! Integer arguments take an exact path.

use crate::error::{Error, Result};

/// Exact `C(n, k)` for machine integers, `None` on overflow.
pub fn binom_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let num = u128::from(n - i);
        let den = u128::from(i + 1);
        let g = num_integer::gcd(acc, den);
        let (acc_r, den_r) = (acc / g, den / g);
        acc = acc_r.checked_mul(num / den_r)?;
    }
    Some(acc)
}

pub fn factorial(n: u64) -> Option<u128> {
    (1..=u128::from(n)).try_fold(1u128, |acc, i| acc.checked_mul(i))
}

fn is_integral(x: f64) -> bool {
    x.fract() == 0.0 && x.abs() < 1e15
}

/// Generalized binomial coefficient `Γ(n+1) / (Γ(k+1) Γ(n-k+1))`.
///
/// Zero for `n < 0`, `k < 0`, or `n - k + 1 ≤ 0` (the pole of `Γ(n-k+1)`);
/// on integers this is the usual `n < k` convention. For `k - 1 < n < k`
/// the Gamma expression is finite and is returned as is, which keeps
/// `C(K, t+1) / C(K, t) = (K-t)/(t+1)` on all of `[0, K]`.
pub fn gen_binom(n: f64, k: f64) -> Result<f64> {
    if n.is_nan() || k.is_nan() {
        return Err(Error::OutOfRange { n, k });
    }
    if n < 0.0 || k < 0.0 || n - k + 1.0 <= 0.0 {
        return Ok(0.0);
    }
    if is_integral(n) && is_integral(k) {
        if let Some(exact) = binom_exact(n as u64, k as u64) {
            return Ok(exact as f64);
        }
    }
    let ln = libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0);
    let value = ln.exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::OutOfRange { n, k })
    }
}

fn check_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_nan() || value < lo || value > hi {
        return Err(Error::Domain {
            what,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

/// `C(K, t+1) / C(K, t) = (K - t) / (t + 1)` on `t ∈ [0, K]`.
pub fn f_common(t: f64, users: usize) -> Result<f64> {
    let k = users as f64;
    check_range("t", t, 0.0, k)?;
    Ok((k - t) / (t + 1.0))
}

/// `G · C(K/G, t+1) / C(K/G, t) = G (K/G - t) / (t + 1)` on `t ∈ [0, K/G]`.
pub fn f_unique(t: f64, users: usize, groups: usize) -> Result<f64> {
    if groups == 0 || !users.is_multiple_of(groups) {
        return Err(Error::Domain {
            what: "G (must divide K)",
            value: groups as f64,
            lo: 1.0,
            hi: users as f64,
        });
    }
    let per_group = (users / groups) as f64;
    check_range("t", t, 0.0, per_group)?;
    Ok(groups as f64 * (per_group - t) / (t + 1.0))
}

/// Unique kernel continued by zero past `K/G`: `G · max(K/G - t, 0) / (t + 1)`.
///
/// This is the coefficient of `x^u_{t'}` after relaxing `i` to `min(t', K/G)`,
/// defined for every cardinality `t' ∈ [0, K]`. It is convex and
/// non-increasing on the whole range.
pub fn f_unique_extended(t: f64, users: usize, groups: usize) -> f64 {
    let per_group = (users / groups) as f64;
    groups as f64 * (per_group - t).max(0.0) / (t + 1.0)
}

/// Number of permutations of `[K]` in which a designated user precedes
/// `t` designated other users: `(K-1-t)! · t! · C(K, t+1)`.
pub fn perm_count(users: usize, t: usize) -> Result<u128> {
    if t + 1 > users {
        return Err(Error::Domain {
            what: "t",
            value: t as f64,
            lo: 0.0,
            hi: users.saturating_sub(1) as f64,
        });
    }
    let (k, t) = (users as u64, t as u64);
    factorial(k - 1 - t)
        .and_then(|a| a.checked_mul(factorial(t)?))
        .and_then(|a| a.checked_mul(binom_exact(k, t + 1)?))
        .ok_or(Error::Overflow("perm_count"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn integer_binomials() {
        assert_eq!(gen_binom(5.0, 2.0).unwrap(), 10.0);
        assert_eq!(gen_binom(3.0, 5.0).unwrap(), 0.0);
        assert_eq!(gen_binom(3.0, 4.0).unwrap(), 0.0);
        assert_eq!(gen_binom(1.0, 2.5).unwrap(), 0.0);
        assert_eq!(gen_binom(-1.0, 0.0).unwrap(), 0.0);
        assert_eq!(gen_binom(4.0, -0.5).unwrap(), 0.0);
        assert_eq!(gen_binom(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(binom_exact(60, 30), Some(118264581564861424));
        for n in 0..40u64 {
            for k in 0..=n {
                assert_eq!(
                    gen_binom(n as f64, k as f64).unwrap(),
                    binom_exact(n, k).unwrap() as f64
                );
            }
        }
    }

    #[test]
    fn real_binomials_match_mpmath() {
        // Reference values from mpmath.
        let cases = [
            (4.0, 1.5, 5.432_488_724_203_361),
            (2.0, 1.5, 1.697_652_726_313_550_4),
            (10.0, 3.3, 147.946_418_409_555),
            (7.5, 2.25, 29.780_724_018_558_36),
            (2.0, 2.5, 0.339_530_545_262_710_04),
            (1.0, 1.7, 0.216_401_770_924_573_1),
        ];
        for (n, k, want) in cases {
            let got = gen_binom(n, k).unwrap();
            assert!(
                rel_close(got, want, 1e-12),
                "C({n},{k}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn huge_binomial_is_out_of_range() {
        assert!(matches!(gen_binom(1e6, 5e5), Err(Error::OutOfRange { .. })));
        // Large but representable goes through log-gamma.
        assert!(gen_binom(1000.0, 500.0).unwrap().is_finite());
    }

    #[test]
    fn kernels_match_binomial_ratio() {
        for users in [1usize, 2, 4, 7, 12] {
            for step in 0..=100 {
                let t = users as f64 * step as f64 / 100.0;
                let ratio =
                    gen_binom(users as f64, t + 1.0).unwrap() / gen_binom(users as f64, t).unwrap();
                let f = f_common(t, users).unwrap();
                assert!(
                    rel_close(f, ratio, 1e-12),
                    "K={users} t={t}: {f} vs {ratio}"
                );
            }
        }
        for (users, groups) in [(4usize, 2usize), (12, 3), (16, 4), (6, 1)] {
            let per = users / groups;
            for step in 0..=50 {
                let t = per as f64 * step as f64 / 50.0;
                let ratio = groups as f64 * gen_binom(per as f64, t + 1.0).unwrap()
                    / gen_binom(per as f64, t).unwrap();
                assert!(rel_close(f_unique(t, users, groups).unwrap(), ratio, 1e-12));
            }
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(f_common(1.0, 4).unwrap(), 1.5);
        assert_eq!(f_common(4.0, 4).unwrap(), 0.0);
        assert_eq!(f_common(0.0, 7).unwrap(), 7.0);
        assert!(f_common(4.5, 4).is_err());
        assert!(f_common(-0.1, 4).is_err());

        assert_eq!(f_unique(0.0, 4, 2).unwrap(), 4.0);
        assert_eq!(f_unique(2.0, 4, 2).unwrap(), 0.0);
        assert_eq!(f_unique(1.0, 4, 2).unwrap(), 1.0);
        assert!(f_unique(2.5, 4, 2).is_err());
        assert!(f_unique(1.0, 4, 3).is_err());

        assert_eq!(f_unique_extended(3.0, 4, 2), 0.0);
        assert_eq!(f_unique_extended(1.0, 4, 2), 1.0);
    }

    #[test]
    fn common_kernel_convex_decreasing() {
        for users in [2usize, 4, 9] {
            let k = users as f64;
            let delta = 0.01;
            let mut t = delta;
            while t + delta <= k {
                let (a, b, c) = (
                    f_common(t - delta, users).unwrap(),
                    f_common(t, users).unwrap(),
                    f_common(t + delta, users).unwrap(),
                );
                assert!(a + c >= 2.0 * b - 1e-12);
                assert!(a > b && b > c);
                t += delta;
            }
        }
    }

    #[test]
    fn perm_count_examples() {
        assert_eq!(perm_count(2, 0).unwrap(), 2);
        assert_eq!(perm_count(3, 1).unwrap(), 3);
        for k in 1..7usize {
            assert_eq!(
                perm_count(k, k - 1).unwrap(),
                factorial(k as u64 - 1).unwrap()
            );
        }
        assert!(perm_count(3, 3).is_err());
    }

    #[test]
    fn perm_count_matches_enumeration() {
        // User 0 is designated; the cached set is any t-subset of the others.
        for k in 1..=5usize {
            for t in 0..k {
                for set in (1..k).combinations(t) {
                    let hits = (0..k)
                        .permutations(k)
                        .filter(|p| {
                            let pos = |x: usize| p.iter().position(|&y| y == x).unwrap();
                            set.iter().all(|&s| pos(0) < pos(s))
                        })
                        .count() as u128;
                    assert_eq!(hits, perm_count(k, t).unwrap(), "K={k} t={t}");
                }
            }
        }
    }

    #[test]
    fn gen_binom_symmetry() {
        for (n, k) in [(4.0, 1.5), (7.3, 2.1), (10.0, 0.25), (3.5, 3.5)] {
            let a = gen_binom(n, k).unwrap();
            let b = gen_binom(n, n - k).unwrap();
            assert!(rel_close(a, b, 1e-12));
        }
    }
}
