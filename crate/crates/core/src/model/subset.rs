use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A set of users `T ⊆ [K]` stored as a bitmask (bit `k` for user `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UserSet(u32);

pub const MAX_USERS: usize = 32;

impl UserSet {
    pub const EMPTY: UserSet = UserSet(0);

    pub fn from_bits(bits: u32) -> Self {
        UserSet(bits)
    }

    pub fn from_users<I: IntoIterator<Item = usize>>(users: I) -> Self {
        UserSet(users.into_iter().fold(0u32, |acc, k| {
            assert!(k < MAX_USERS, "user index {k} exceeds the bitmask width");
            acc | (1 << k)
        }))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, user: usize) -> bool {
        user < MAX_USERS && self.0 & (1 << user) != 0
    }

    pub fn with(self, user: usize) -> Self {
        UserSet(self.0 | (1 << user))
    }

    pub fn without(self, user: usize) -> Self {
        UserSet(self.0 & !(1 << user))
    }

    pub fn union(self, other: Self) -> Self {
        UserSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        UserSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        UserSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(k)
        })
    }

    /// Every subset of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = UserSet> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(UserSet(cur))
        })
    }

    /// Subsets of `self` with exactly `size` members, in increasing bitmask order.
    pub fn subsets_of_size(self, size: usize) -> impl Iterator<Item = UserSet> {
        self.subsets().filter(move |s| s.len() == size)
    }
}

impl fmt::Display for UserSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, k) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for UserSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for UserSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let users = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = users.iter().find(|&&k| k >= MAX_USERS) {
            return Err(serde::de::Error::custom(format!(
                "user index {bad} out of range"
            )));
        }
        Ok(UserSet::from_users(users))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate_power_set() {
        let s = UserSet::from_users([1, 3, 4]);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|t| t.is_subset_of(s)));
        assert_eq!(s.subsets_of_size(2).count(), 3);
        assert_eq!(UserSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn membership_and_display() {
        let s = UserSet::from_users([0, 2]);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.with(1).without(0), UserSet::from_users([1, 2]));
        assert_eq!(s.to_string(), "{0,2}");
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,2]");
        let back: UserSet = serde_json::from_str("[2,0]").unwrap();
        assert_eq!(back, s);
    }
}
