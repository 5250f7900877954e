//! Welfare-maximising structures and representative consolidation.

use thiserror::Error;

use crate::model::{GroupPartition, Network, Society};
use crate::search::{Argmax, SearchError, SearchSpace};

/// Maximum welfare of a space and every member attaining it within the
/// society's tolerance, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficientSet {
    pub best_welfare: f64,
    pub argmax: Vec<Network>,
}

pub fn efficient_search(
    space: &SearchSpace,
    society: &Society,
) -> Result<EfficientSet, SearchError> {
    let resolved = space.resolve(society)?;
    let best = resolved.par_fold(
        || Argmax::new(society.epsilon()),
        |acc, mask, rows| acc.offer(mask, society.welfare_rows(rows)),
        Argmax::merge,
    );
    Ok(EfficientSet {
        best_welfare: best.best(),
        argmax: best.masks().map(|m| resolved.network(m)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsolidateError {
    #[error("group {group} is not a clique: pair ({i}, {j}) is missing")]
    NotClique { group: usize, i: usize, j: usize },
    #[error("interconnections ({a0}, {a1}) and ({b0}, {b1}) both map onto ({0}, {1})", .target.0, .target.1)]
    Collision {
        a0: usize,
        a1: usize,
        b0: usize,
        b1: usize,
        target: (usize, usize),
    },
    #[error("network has {net} nodes but the partition has {partition}")]
    SizeMismatch { net: usize, partition: usize },
}

/// Moves every interconnection endpoint onto a single representative per
/// group: the lowest-indexed member already carrying an interconnection, or
/// the lowest-indexed member when the group has none.
pub fn consolidate_representatives(
    net: &Network,
    partition: &GroupPartition,
) -> Result<Network, ConsolidateError> {
    if net.n() != partition.n() {
        return Err(ConsolidateError::SizeMismatch {
            net: net.n(),
            partition: partition.n(),
        });
    }
    for g in 0..partition.m() {
        let members: Vec<usize> = partition.members(g).collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                if !net.has_edge(i, j) {
                    return Err(ConsolidateError::NotClique { group: g, i, j });
                }
            }
        }
    }

    let mut reps: Vec<Option<usize>> = vec![None; partition.m()];
    let inter: Vec<(usize, usize)> = net
        .edges()
        .filter(|&(i, j)| !partition.same_group(i, j))
        .collect();
    for &(i, j) in &inter {
        for v in [i, j] {
            let g = partition.group_of(v);
            reps[g] = Some(reps[g].map_or(v, |r: usize| r.min(v)));
        }
    }
    let rep = |v: usize| {
        let g = partition.group_of(v);
        reps[g].unwrap_or_else(|| partition.members(g).next().unwrap())
    };

    let mut out = net.clone();
    for &(i, j) in &inter {
        out.remove_edge(i, j);
    }
    let mut placed: Vec<((usize, usize), (usize, usize))> = Vec::with_capacity(inter.len());
    for &(i, j) in &inter {
        let (a, b) = (rep(i), rep(j));
        let target = (a.min(b), a.max(b));
        if let Some(&(_, (b0, b1))) = placed.iter().find(|(t, _)| *t == target) {
            return Err(ConsolidateError::Collision {
                a0: b0,
                a1: b1,
                b0: i,
                b1: j,
                target,
            });
        }
        placed.push((target, (i, j)));
        out.add_edge(a, b);
    }
    Ok(out)
}
