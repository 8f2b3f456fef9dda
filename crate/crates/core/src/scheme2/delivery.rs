use bitvec::prelude::*;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Bits, Demand, FileId, Frac, PlacementSpec, Subfile, SystemConfig, UserSet};
use crate::scheme2::SplitParams;

/// Which delivery phase a message belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Common,
    Unique { group: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub phase: Phase,
    /// Users the XOR is aimed at.
    pub subset: UserSet,
    /// Length in file units: the longest constituent subfile.
    pub size: Frac,
    pub payload: Option<Bits>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transmission {
    pub messages: Vec<Message>,
    pub total_load: Frac,
}

#[derive(Debug, Clone, Serialize)]
pub struct MessageDump {
    pub subset: UserSet,
    pub size_num: i64,
    pub size_den: i64,
}

impl Transmission {
    pub fn find(&self, phase: Phase, subset: UserSet) -> Option<&Message> {
        self.messages
            .iter()
            .find(|m| m.phase == phase && m.subset == subset)
    }

    pub fn dump(&self) -> Vec<MessageDump> {
        self.messages
            .iter()
            .map(|m| MessageDump {
                subset: m.subset,
                size_num: *m.size.numer() as i64,
                size_den: *m.size.denom() as i64,
            })
            .collect()
    }
}

/// Users served by `phase` under demand `d`.
pub(crate) fn phase_requesters(cfg: &SystemConfig, d: &Demand, phase: Phase) -> UserSet {
    UserSet::from_users((0..cfg.users).filter(|&k| match (phase, d.file_of(k)) {
        (Phase::Common, FileId::Common { .. }) => true,
        (Phase::Unique { group }, FileId::Unique { .. }) => cfg.group_of(k) == group,
        _ => false,
    }))
}

/// Subfiles XORed into the message of `phase` aimed at `subset`.
pub(crate) fn constituents(
    cfg: &SystemConfig,
    d: &Demand,
    phase: Phase,
    subset: UserSet,
) -> Vec<(usize, Subfile)> {
    subset
        .intersection(phase_requesters(cfg, d, phase))
        .iter()
        .map(|k| (k, Subfile::new(d.file_of(k), subset.without(k))))
        .collect()
}

fn check_structure(
    cfg: &SystemConfig,
    placement: &PlacementSpec,
    t_c: usize,
    t_u: usize,
) -> Result<()> {
    for (s, _) in placement.subfiles() {
        let ok = match s.file {
            FileId::Common { .. } => s.cached_by.len() == t_c,
            FileId::Unique { group, .. } => {
                s.cached_by.len() == t_u && s.cached_by.is_subset_of(cfg.group_members(group))
            }
        };
        if !ok {
            return Err(Error::Mismatch(format!(
                "{s} is not a split MAN subfile for t_c = {t_c}, t_u = {t_u}"
            )));
        }
    }
    Ok(())
}

fn xor_into(acc: &mut Bits, bits: &BitSlice<u64, Lsb0>) {
    if acc.len() < bits.len() {
        acc.resize(bits.len(), false);
    }
    let head = &mut acc[..bits.len()];
    *head ^= bits;
}

/// Split MAN delivery.
///
/// Common phase: one XOR per `(t_c+1)`-subset of `[K]` that contains a
/// common-file requester. Unique phase: per group, one XOR per
/// `(t_u+1)`-subset of the group containing a unique-file requester.
/// Subsets made only of users outside the phase are skipped.
pub fn deliver(
    cfg: &SystemConfig,
    placement: &PlacementSpec,
    d: &Demand,
    split: &SplitParams,
) -> Result<Transmission> {
    let (t_c, t_u) = split.require_integer()?;
    if d.users() != cfg.users {
        return Err(Error::Mismatch(format!(
            "demand has {} users, K = {}",
            d.users(),
            cfg.users
        )));
    }
    check_structure(cfg, placement, t_c, t_u)?;

    let mut targets: Vec<(Phase, UserSet)> = cfg
        .all_users()
        .subsets_of_size(t_c + 1)
        .map(|s| (Phase::Common, s))
        .collect();
    for group in 0..cfg.groups {
        targets.extend(
            cfg.group_members(group)
                .subsets_of_size(t_u + 1)
                .map(|s| (Phase::Unique { group }, s)),
        );
    }

    let with_payloads = placement.has_payloads();
    let mut messages = Vec::new();
    let mut total_load = Frac::zero();
    for (phase, subset) in targets {
        let parts = constituents(cfg, d, phase, subset);
        if parts.is_empty() {
            continue;
        }
        let mut size = Frac::zero();
        let mut payload = with_payloads.then(Bits::new);
        for (_, sub) in &parts {
            let s = placement.size(sub.file, sub.cached_by);
            if s.is_zero() {
                return Err(Error::Mismatch(format!("placement lacks {sub}")));
            }
            size = size.max(s);
            if let Some(acc) = payload.as_mut() {
                let bits = placement
                    .payload(sub)
                    .ok_or_else(|| Error::Mismatch(format!("no payload for {sub}")))?;
                xor_into(acc, bits);
            }
        }
        total_load += size;
        messages.push(Message {
            phase,
            subset,
            size,
            payload,
        });
    }
    Ok(Transmission {
        messages,
        total_load,
    })
}
