use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::UserSet;

/// System parameters `(K, G, N_c, N_u, M, B)`.
///
/// Users are numbered `0..K` and grouped in contiguous blocks of `K/G`:
/// user `k` belongs to group `k / (K/G)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    #[serde(rename = "K")]
    pub users: usize,
    #[serde(rename = "G")]
    pub groups: usize,
    #[serde(rename = "Nc")]
    pub common_files: usize,
    #[serde(rename = "Nu")]
    pub unique_files: usize,
    /// Cache size in file units.
    #[serde(rename = "M")]
    pub memory: f64,
    /// File size in bits; only read by the bit-level simulation.
    #[serde(rename = "B", default)]
    pub file_bits: u64,
}

impl SystemConfig {
    pub fn new(
        users: usize,
        groups: usize,
        common_files: usize,
        unique_files: usize,
        memory: f64,
    ) -> Self {
        SystemConfig {
            users,
            groups,
            common_files,
            unique_files,
            memory,
            file_bits: 0,
        }
    }

    pub fn with_file_bits(mut self, bits: u64) -> Self {
        self.file_bits = bits;
        self
    }

    pub fn with_memory(mut self, memory: f64) -> Self {
        self.memory = memory;
        self
    }

    pub fn users_per_group(&self) -> usize {
        self.users / self.groups
    }

    pub fn group_of(&self, user: usize) -> usize {
        user / self.users_per_group()
    }

    pub fn group_members(&self, group: usize) -> UserSet {
        let per = self.users_per_group();
        UserSet::from_users(group * per..(group + 1) * per)
    }

    pub fn all_users(&self) -> UserSet {
        UserSet::from_users(0..self.users)
    }

    /// `N = N_c + G N_u`.
    pub fn library_size(&self) -> usize {
        self.common_files + self.groups * self.unique_files
    }

    /// Largest meaningful cache size `N_c + N_u`.
    pub fn max_memory(&self) -> f64 {
        (self.common_files + self.unique_files) as f64
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.users == 0 {
            violations.push(ConfigViolation::NoUsers);
        }
        if self.groups == 0 {
            violations.push(ConfigViolation::NoGroups);
        } else if !self.users.is_multiple_of(self.groups) {
            violations.push(ConfigViolation::GroupsDoNotDivideUsers {
                users: self.users,
                groups: self.groups,
            });
        }
        if self.common_files < self.users {
            violations.push(ConfigViolation::TooFewCommonFiles {
                common_files: self.common_files,
                users: self.users,
            });
        }
        if self.groups > 0
            && self.users.is_multiple_of(self.groups)
            && self.unique_files < self.users_per_group()
        {
            violations.push(ConfigViolation::TooFewUniqueFiles {
                unique_files: self.unique_files,
                per_group: self.users_per_group(),
            });
        }
        if !(self.memory >= 0.0 && self.memory <= self.max_memory()) {
            violations.push(ConfigViolation::MemoryOutOfRange {
                memory: self.memory,
                max: self.max_memory(),
            });
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_pass() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(report))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ConfigViolation {
    NoUsers,
    NoGroups,
    GroupsDoNotDivideUsers {
        users: usize,
        groups: usize,
    },
    TooFewCommonFiles {
        common_files: usize,
        users: usize,
    },
    TooFewUniqueFiles {
        unique_files: usize,
        per_group: usize,
    },
    MemoryOutOfRange {
        memory: f64,
        max: f64,
    },
}

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigViolation::NoUsers => write!(f, "K must be positive"),
            ConfigViolation::NoGroups => write!(f, "G must be positive"),
            ConfigViolation::GroupsDoNotDivideUsers { users, groups } => {
                write!(f, "G must divide K (K = {users}, G = {groups})")
            }
            ConfigViolation::TooFewCommonFiles {
                common_files,
                users,
            } => {
                write!(f, "N_c ≥ K violated (N_c = {common_files}, K = {users})")
            }
            ConfigViolation::TooFewUniqueFiles {
                unique_files,
                per_group,
            } => {
                write!(
                    f,
                    "N_u ≥ K/G violated (N_u = {unique_files}, K/G = {per_group})"
                )
            }
            ConfigViolation::MemoryOutOfRange { memory, max } => {
                write!(
                    f,
                    "M must lie in [0, N_c + N_u] = [0, {max}] (M = {memory})"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<ConfigViolation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return write!(f, "pass");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
