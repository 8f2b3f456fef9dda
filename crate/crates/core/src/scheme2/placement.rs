use crate::combinatorics::binom_exact;
use crate::error::{Error, Result};
use crate::model::{library_files, FileId, FileLibrary, Frac, PlacementSpec, SystemConfig};
use crate::scheme2::SplitParams;

/// Split MAN placement: common files over all `K` users with parameter `t_c`,
/// unique files of group `g` over the `K/G` users of `g` with parameter `t_u`.
pub fn place(cfg: &SystemConfig, beta: f64) -> Result<PlacementSpec> {
    cfg.ensure_valid()?;
    let split = SplitParams::new(cfg, beta)?;
    place_split(cfg, &split)
}

pub fn place_split(cfg: &SystemConfig, split: &SplitParams) -> Result<PlacementSpec> {
    let (t_c, t_u) = split.require_integer()?;
    let common_parts =
        binom_exact(cfg.users as u64, t_c as u64).ok_or(Error::Overflow("placement"))?;
    let unique_parts = binom_exact(cfg.users_per_group() as u64, t_u as u64)
        .ok_or(Error::Overflow("placement"))?;
    let common_size = Frac::new(1, common_parts as i128);
    let unique_size = Frac::new(1, unique_parts as i128);

    let mut placement = PlacementSpec::new();
    for file in library_files(cfg) {
        match file {
            FileId::Common { .. } => {
                for set in cfg.all_users().subsets_of_size(t_c) {
                    placement.add(file, set, common_size);
                }
            }
            FileId::Unique { group, .. } => {
                for set in cfg.group_members(group).subsets_of_size(t_u) {
                    placement.add(file, set, unique_size);
                }
            }
        }
    }
    Ok(placement)
}

/// Smallest file size `B` splitting evenly into every subfile of `split`.
pub fn min_file_bits(cfg: &SystemConfig, split: &SplitParams) -> Result<u64> {
    let (t_c, t_u) = split.require_integer()?;
    let common =
        binom_exact(cfg.users as u64, t_c as u64).ok_or(Error::Overflow("subpacketization"))?;
    let unique = binom_exact(cfg.users_per_group() as u64, t_u as u64)
        .ok_or(Error::Overflow("subpacketization"))?;
    u64::try_from(num_integer::lcm(common, unique)).map_err(|_| Error::Overflow("subpacketization"))
}

/// `cfg` unchanged if it sets `B`, otherwise with `B` from [`min_file_bits`].
pub fn with_default_file_bits(cfg: &SystemConfig, split: &SplitParams) -> Result<SystemConfig> {
    if cfg.file_bits > 0 {
        return Ok(*cfg);
    }
    Ok((*cfg).with_file_bits(min_file_bits(cfg, split)?))
}

/// Placement with payloads cut from a seeded random library.
pub fn place_with_library(
    cfg: &SystemConfig,
    split: &SplitParams,
    seed: u64,
) -> Result<(PlacementSpec, FileLibrary)> {
    let mut placement = place_split(cfg, split)?;
    let library = FileLibrary::random(cfg, seed);
    placement.attach_payloads(cfg, &library)?;
    Ok((placement, library))
}
