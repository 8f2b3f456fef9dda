use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::model::{Bits, Demand, FileId, Frac, PlacementSpec, Subfile, SystemConfig, UserCache};
use crate::scheme2::delivery::{constituents, Phase};
use crate::scheme2::Transmission;

fn subfile_bits(cfg: &SystemConfig, size: Frac) -> usize {
    (size * Frac::from_integer(i128::from(cfg.file_bits)))
        .to_integer()
        .to_usize()
        .unwrap_or(0)
}

/// Reconstructs the file requested by `user` from its own cache and the
/// broadcast.
///
/// `layout` is the public partition (which subfiles exist and how long they
/// are); only its sizes are read, never its payloads. Every missing subfile
/// `W_{d_k, T}` is taken from the message aimed at `T ∪ {k}` after cancelling
/// the other constituents, all of which `user` has cached.
pub fn decode(
    cfg: &SystemConfig,
    layout: &PlacementSpec,
    cache: &UserCache,
    transmission: &Transmission,
    d: &Demand,
) -> Result<Bits> {
    let user = cache.user;
    let file = d.file_of(user);
    let phase = match file {
        FileId::Common { .. } => Phase::Common,
        FileId::Unique { .. } => Phase::Unique {
            group: cfg.group_of(user),
        },
    };
    let fail = |sub: &Subfile| Error::DecodeFailure {
        user,
        file: sub.file,
        subset: sub.cached_by,
    };

    let mut out = Bits::with_capacity(cfg.file_bits as usize);
    for (sub, &size) in layout.subfiles_of(file) {
        if sub.cached_by.contains(user) {
            out.extend_from_bitslice(cache.get(sub).ok_or_else(|| fail(sub))?);
            continue;
        }
        let target = sub.cached_by.with(user);
        let message = transmission.find(phase, target).ok_or_else(|| fail(sub))?;
        let mut residual = message.payload.clone().ok_or_else(|| fail(sub))?;
        for (other, side) in constituents(cfg, d, phase, target) {
            if other == user {
                continue;
            }
            let known = cache.get(&side).ok_or_else(|| fail(sub))?;
            let head = &mut residual[..known.len()];
            *head ^= known.as_bitslice();
        }
        let len = subfile_bits(cfg, size);
        if residual.len() < len {
            return Err(fail(sub));
        }
        out.extend_from_bitslice(&residual[..len]);
    }
    Ok(out)
}
