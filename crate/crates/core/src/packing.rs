//! Exact unary bin packing by memoized search over sorted residual capacities.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on the total item size accepted by the solver.
pub const DEFAULT_SCALE_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("total size {total} exceeds the limit {limit}")]
    ScaleExceeded { total: u64, limit: u64 },
    #[error("invalid instance: {0}")]
    Invalid(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinPackingInstance {
    pub k: usize,
    #[serde(rename = "V")]
    pub volume: u64,
    pub items: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenBinPackingInstance {
    pub k: usize,
    pub volumes: Vec<u64>,
    pub items: Vec<u64>,
}

/// Item indices per bin.
pub type Partition = Vec<Vec<usize>>;

fn check_items(items: &[u64], limit: u64) -> Result<(), PackingError> {
    if items.contains(&0) {
        return Err(PackingError::Invalid("item sizes must be positive"));
    }
    let total: u64 = items.iter().sum();
    if total > limit {
        return Err(PackingError::ScaleExceeded { total, limit });
    }
    Ok(())
}

/// Packs items into bins with the given capacities, or `None`.
fn pack(capacities: &[u64], items: &[u64]) -> Option<Partition> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[b].cmp(&items[a]).then(a.cmp(&b)));
    let mut residual: Vec<(u64, usize)> = capacities.iter().copied().zip(0..).collect();
    let mut assign = vec![0usize; items.len()];
    let mut failed: HashSet<(usize, Vec<u64>)> = HashSet::new();

    fn rec(
        depth: usize,
        order: &[usize],
        items: &[u64],
        residual: &mut Vec<(u64, usize)>,
        assign: &mut [usize],
        failed: &mut HashSet<(usize, Vec<u64>)>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        residual.sort_unstable();
        let key: Vec<u64> = residual.iter().map(|r| r.0).collect();
        if failed.contains(&(depth, key.clone())) {
            return false;
        }
        let size = items[order[depth]];
        for j in 0..residual.len() {
            // equal residuals are interchangeable
            if residual[j].0 < size || (j > 0 && residual[j].0 == residual[j - 1].0) {
                continue;
            }
            let snapshot = residual.clone();
            residual[j].0 -= size;
            assign[order[depth]] = residual[j].1;
            if rec(depth + 1, order, items, residual, assign, failed) {
                return true;
            }
            *residual = snapshot;
        }
        failed.insert((depth, key));
        false
    }

    if !rec(0, &order, items, &mut residual, &mut assign, &mut failed) {
        return None;
    }
    let mut parts = vec![Vec::new(); capacities.len()];
    for (i, &b) in assign.iter().enumerate() {
        parts[b].push(i);
    }
    Some(parts)
}

pub fn solve_binpacking(inst: &BinPackingInstance) -> Result<Option<Partition>, PackingError> {
    solve_binpacking_with_limit(inst, DEFAULT_SCALE_LIMIT)
}

pub fn solve_binpacking_with_limit(inst: &BinPackingInstance, limit: u64) -> Result<Option<Partition>, PackingError> {
    if inst.k == 0 || inst.volume == 0 {
        return Err(PackingError::Invalid("k and V must be positive"));
    }
    check_items(&inst.items, limit)?;
    Ok(pack(&vec![inst.volume; inst.k], &inst.items))
}

/// Maps a reduced partition back: drops the large items and sends each bin to
/// the volume its large item encodes.
#[derive(Clone, Debug)]
pub struct Decoder {
    original_items: usize,
    k: usize,
}

impl Decoder {
    pub fn decode(&self, reduced: &Partition) -> Partition {
        let mut out = vec![Vec::new(); self.k];
        for part in reduced {
            let large = part
                .iter()
                .find(|&&i| i >= self.original_items)
                .expect("each bin holds one large item");
            out[large - self.original_items] = part.iter().copied().filter(|&i| i < self.original_items).collect();
        }
        out
    }
}

/// Uniform-volume instance with `V' = 2·max V_i + 1` and one large item
/// `V' - V_i` per bin.
pub fn reduce_gen_to_bin(inst: &GenBinPackingInstance) -> (BinPackingInstance, Decoder) {
    let vmax = inst.volumes.iter().copied().max().unwrap_or(0);
    let volume = 2 * vmax + 1;
    let mut items = inst.items.clone();
    items.extend(inst.volumes.iter().map(|&v| volume - v));
    (
        BinPackingInstance {
            k: inst.k,
            volume,
            items,
        },
        Decoder {
            original_items: inst.items.len(),
            k: inst.k,
        },
    )
}

pub fn solve_genbinpacking(inst: &GenBinPackingInstance) -> Result<Option<Partition>, PackingError> {
    solve_genbinpacking_with_limit(inst, DEFAULT_SCALE_LIMIT)
}

pub fn solve_genbinpacking_with_limit(inst: &GenBinPackingInstance, limit: u64) -> Result<Option<Partition>, PackingError> {
    if inst.k == 0 || inst.volumes.len() != inst.k || inst.volumes.contains(&0) {
        return Err(PackingError::Invalid("need k positive volumes"));
    }
    check_items(&inst.items, limit)?;
    let (reduced, decoder) = reduce_gen_to_bin(inst);
    let reduced_limit = limit.saturating_add(reduced.items[inst.items.len()..].iter().sum());
    Ok(solve_binpacking_with_limit(&reduced, reduced_limit)?.map(|p| decoder.decode(&p)))
}
