use std::collections::BTreeMap;
use std::fmt;

use bitvec::prelude::*;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{frac_to_f64, FileId, Frac, SystemConfig, UserSet};

pub type Bits = BitVec<u64, Lsb0>;

/// `W_{n,T}`: the bits of `file` cached exactly by the users in `cached_by`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subfile {
    pub file: FileId,
    pub cached_by: UserSet,
}

impl Subfile {
    pub fn new(file: FileId, cached_by: UserSet) -> Self {
        Subfile { file, cached_by }
    }
}

impl fmt::Display for Subfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.file, self.cached_by)
    }
}

/// Every file of the library, in `FileId` order.
pub fn library_files(cfg: &SystemConfig) -> impl Iterator<Item = FileId> + '_ {
    let common = (0..cfg.common_files).map(FileId::common);
    let unique =
        (0..cfg.groups).flat_map(move |g| (0..cfg.unique_files).map(move |n| FileId::unique(g, n)));
    common.chain(unique)
}

/// Random file contents keyed by file, reproducible from a 64-bit seed.
#[derive(Debug, Clone)]
pub struct FileLibrary {
    files: BTreeMap<FileId, Bits>,
}

impl FileLibrary {
    pub fn random(cfg: &SystemConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = cfg.file_bits as usize;
        let files = library_files(cfg)
            .map(|file| {
                let words: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.random()).collect();
                let mut payload = Bits::from_vec(words);
                payload.truncate(bits);
                (file, payload)
            })
            .collect();
        FileLibrary { files }
    }

    pub fn get(&self, file: FileId) -> Option<&Bits> {
        self.files.get(&file)
    }
}

/// An uncoded placement: the partition of every file into subfiles `W_{n,T}`,
/// with sizes as exact fractions of `B` and optional bit payloads.
///
/// Only subfiles of nonzero size are stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlacementSpec {
    sizes: BTreeMap<Subfile, Frac>,
    payloads: Option<BTreeMap<Subfile, Bits>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum PlacementViolation {
    UnknownFile {
        subfile: String,
    },
    UserOutOfRange {
        subfile: String,
    },
    NegativeSize {
        subfile: String,
    },
    Partition {
        file: String,
        sum: String,
    },
    Memory {
        user: usize,
        used: String,
        capacity: f64,
    },
    PayloadLength {
        subfile: String,
        bits: usize,
        expected: String,
    },
}

impl fmt::Display for PlacementViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlacementViolation::UnknownFile { subfile } => {
                write!(f, "library invariant: {subfile} is not a library file")
            }
            PlacementViolation::UserOutOfRange { subfile } => {
                write!(f, "user range: {subfile} names a user outside [K]")
            }
            PlacementViolation::NegativeSize { subfile } => {
                write!(f, "size invariant: {subfile} has negative size")
            }
            PlacementViolation::Partition { file, sum } => {
                write!(
                    f,
                    "partition invariant: subfiles of {file} sum to {sum}, expected 1"
                )
            }
            PlacementViolation::Memory {
                user,
                used,
                capacity,
            } => {
                write!(
                    f,
                    "memory invariant: user {user} stores {used} > M = {capacity}"
                )
            }
            PlacementViolation::PayloadLength {
                subfile,
                bits,
                expected,
            } => {
                write!(
                    f,
                    "payload invariant: {subfile} carries {bits} bits, expected {expected}"
                )
            }
        }
    }
}

/// Wire form of one subfile in a placement fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementEntry {
    #[serde(flatten)]
    pub file: FileId,
    pub subset: UserSet,
    pub size_num: i64,
    pub size_den: i64,
}

impl PlacementSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `size` to `W_{file, cached_by}`.
    pub fn add(&mut self, file: FileId, cached_by: UserSet, size: Frac) {
        if size.is_zero() {
            return;
        }
        let entry = self
            .sizes
            .entry(Subfile::new(file, cached_by))
            .or_insert_with(Frac::zero);
        *entry += size;
        if entry.is_zero() {
            self.sizes.remove(&Subfile::new(file, cached_by));
        }
    }

    /// Drops a subfile entirely (used to build corrupted fixtures).
    pub fn remove(&mut self, subfile: &Subfile) -> Option<Frac> {
        if let Some(p) = self.payloads.as_mut() {
            p.remove(subfile);
        }
        self.sizes.remove(subfile)
    }

    pub fn size(&self, file: FileId, cached_by: UserSet) -> Frac {
        self.sizes
            .get(&Subfile::new(file, cached_by))
            .copied()
            .unwrap_or_else(Frac::zero)
    }

    pub fn subfiles(&self) -> impl Iterator<Item = (&Subfile, &Frac)> {
        self.sizes.iter()
    }

    /// Nonzero subfiles of one file, ordered by their user-set bitmask.
    pub fn subfiles_of(&self, file: FileId) -> impl Iterator<Item = (&Subfile, &Frac)> {
        let lo = Subfile::new(file, UserSet::EMPTY);
        let hi = Subfile::new(file, UserSet::from_bits(u32::MAX));
        self.sizes.range(lo..=hi)
    }

    /// Total size (in file units) cached by `user`.
    pub fn user_memory(&self, user: usize) -> Frac {
        self.sizes
            .iter()
            .filter(|(s, _)| s.cached_by.contains(user))
            .fold(Frac::zero(), |acc, (_, &size)| acc + size)
    }

    pub fn has_payloads(&self) -> bool {
        self.payloads.is_some()
    }

    pub fn payload(&self, subfile: &Subfile) -> Option<&Bits> {
        self.payloads.as_ref()?.get(subfile)
    }

    /// Splits each file of `library` into its subfiles, in subfile order.
    pub fn attach_payloads(&mut self, cfg: &SystemConfig, library: &FileLibrary) -> Result<()> {
        let bits = i128::from(cfg.file_bits);
        let mut payloads = BTreeMap::new();
        for file in library_files(cfg) {
            let source = library
                .get(file)
                .ok_or_else(|| Error::Mismatch(format!("library is missing {file}")))?;
            let mut offset = 0usize;
            for (subfile, size) in self.subfiles_of(file) {
                let scaled = *size * Frac::from_integer(bits);
                if !scaled.is_integer() {
                    return Err(Error::Subpacketization {
                        bits: cfg.file_bits,
                        subpackets: *size.denom() as u64,
                    });
                }
                let len = scaled.to_integer() as usize;
                let end = offset + len;
                if end > source.len() {
                    return Err(Error::Placement(PlacementViolation::Partition {
                        file: file.to_string(),
                        sum: "more than 1".into(),
                    }));
                }
                payloads.insert(*subfile, source[offset..end].to_bitvec());
                offset = end;
            }
        }
        self.payloads = Some(payloads);
        Ok(())
    }

    pub fn without_payloads(&self) -> Self {
        PlacementSpec {
            sizes: self.sizes.clone(),
            payloads: None,
        }
    }

    /// Payloads stored by `user`: every subfile whose user set contains it.
    pub fn user_cache(&self, user: usize) -> UserCache {
        let subfiles = self
            .payloads
            .iter()
            .flatten()
            .filter(|(s, _)| s.cached_by.contains(user))
            .map(|(s, bits)| (*s, bits.clone()))
            .collect();
        UserCache { user, subfiles }
    }

    /// Checks the partition and memory invariants of an uncoded placement.
    pub fn check(&self, cfg: &SystemConfig) -> std::result::Result<(), PlacementViolation> {
        let all = cfg.all_users();
        let library: Vec<FileId> = library_files(cfg).collect();
        for (subfile, size) in &self.sizes {
            if library.binary_search(&subfile.file).is_err() {
                return Err(PlacementViolation::UnknownFile {
                    subfile: subfile.to_string(),
                });
            }
            if !subfile.cached_by.is_subset_of(all) {
                return Err(PlacementViolation::UserOutOfRange {
                    subfile: subfile.to_string(),
                });
            }
            if *size < Frac::zero() {
                return Err(PlacementViolation::NegativeSize {
                    subfile: subfile.to_string(),
                });
            }
        }
        for &file in &library {
            let sum = self
                .subfiles_of(file)
                .fold(Frac::zero(), |acc, (_, &s)| acc + s);
            if !sum.is_one() {
                return Err(PlacementViolation::Partition {
                    file: file.to_string(),
                    sum: sum.to_string(),
                });
            }
        }
        for user in 0..cfg.users {
            let used = self.user_memory(user);
            if frac_to_f64(used) > cfg.memory * (1.0 + 1e-12) + 1e-12 {
                return Err(PlacementViolation::Memory {
                    user,
                    used: used.to_string(),
                    capacity: cfg.memory,
                });
            }
        }
        if let Some(payloads) = &self.payloads {
            let bits = Frac::from_integer(i128::from(cfg.file_bits));
            for (subfile, size) in &self.sizes {
                let expected = *size * bits;
                let got = payloads.get(subfile).map_or(0, |p| p.len());
                if Frac::from_integer(got as i128) != expected {
                    return Err(PlacementViolation::PayloadLength {
                        subfile: subfile.to_string(),
                        bits: got,
                        expected: expected.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn to_entries(&self) -> Vec<PlacementEntry> {
        self.sizes
            .iter()
            .map(|(s, size)| PlacementEntry {
                file: s.file,
                subset: s.cached_by,
                size_num: *size.numer() as i64,
                size_den: *size.denom() as i64,
            })
            .collect()
    }

    pub fn from_entries(entries: &[PlacementEntry]) -> Result<Self> {
        let mut placement = PlacementSpec::new();
        for e in entries {
            if e.size_den <= 0 {
                return Err(Error::Placement(PlacementViolation::NegativeSize {
                    subfile: Subfile::new(e.file, e.subset).to_string(),
                }));
            }
            placement.add(
                e.file,
                e.subset,
                Frac::new(e.size_num.into(), e.size_den.into()),
            );
        }
        Ok(placement)
    }
}

/// What a single user holds after placement.
#[derive(Debug, Clone)]
pub struct UserCache {
    pub user: usize,
    pub subfiles: BTreeMap<Subfile, Bits>,
}

impl UserCache {
    pub fn get(&self, subfile: &Subfile) -> Option<&Bits> {
        self.subfiles.get(subfile)
    }

    pub fn stored_bits(&self) -> usize {
        self.subfiles.values().map(|b| b.len()).sum()
    }
}
