//! Exhaustive search spaces over edge sets and the parallel enumeration
//! engine shared by stability and efficiency searches.
//!
//! A space is a fixed base network plus an ordered list of free pairs; member
//! `mask` of the space is the base with free pair `k` toggled on iff bit `k`
//! of `mask` is set. Free pairs are kept in canonical pair order, so ascending
//! `mask` is also ascending canonical edge-mask order.

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{pair_count, pair_from_index, Network, Society};
use crate::stability::{stable_rows, PriceOfAnarchy, StabilityError};

/// Default node cap for [`SearchSpace::FullGraph`].
pub const DEFAULT_FULL_MAX_NODES: usize = 7;
/// Default free-pair cap for [`SearchSpace::Interconnection`].
pub const DEFAULT_INTER_MAX_PAIRS: usize = 24;

const MIN_CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// Every edge set on `n` nodes; refused when `n > max_nodes`.
    FullGraph { max_nodes: usize },
    /// Every intra-group pair fixed present, cross-group pairs free; refused
    /// when there are more than `max_free_pairs` cross-group pairs.
    Interconnection { max_free_pairs: usize },
}

impl SearchSpace {
    pub fn full() -> Self {
        SearchSpace::FullGraph {
            max_nodes: DEFAULT_FULL_MAX_NODES,
        }
    }

    pub fn interconnection() -> Self {
        SearchSpace::Interconnection {
            max_free_pairs: DEFAULT_INTER_MAX_PAIRS,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchSpace::FullGraph { .. } => "full",
            SearchSpace::Interconnection { .. } => "inter",
        }
    }

    /// Resolves the space against a society, enforcing its cap.
    pub fn resolve(&self, society: &Society) -> Result<ResolvedSpace, SearchError> {
        let n = society.n();
        match *self {
            SearchSpace::FullGraph { max_nodes } => {
                if n > max_nodes || pair_count(n) > 63 {
                    return Err(SearchError::CapExceeded {
                        space: "full",
                        required: n,
                        cap: max_nodes,
                    });
                }
                let free = (0..pair_count(n)).map(|k| pair_from_index(n, k)).collect();
                Ok(ResolvedSpace {
                    base: vec![0; n],
                    free,
                })
            }
            SearchSpace::Interconnection { max_free_pairs } => {
                let free: Vec<_> = (0..pair_count(n))
                    .map(|k| pair_from_index(n, k))
                    .filter(|&(i, j)| !society.is_intra(i, j))
                    .collect();
                if free.len() > max_free_pairs.min(63) {
                    return Err(SearchError::CapExceeded {
                        space: "inter",
                        required: free.len(),
                        cap: max_free_pairs,
                    });
                }
                Ok(ResolvedSpace {
                    base: society.disjoint_cliques().rows().to_vec(),
                    free,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{space} search space needs cap {required} but the cap is {cap}")]
    CapExceeded {
        space: &'static str,
        required: usize,
        cap: usize,
    },
}

/// A space bound to a concrete node set.
#[derive(Debug, Clone)]
pub struct ResolvedSpace {
    base: Vec<u64>,
    free: Vec<(usize, usize)>,
}

impl ResolvedSpace {
    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn free_pairs(&self) -> &[(usize, usize)] {
        &self.free
    }

    pub fn len(&self) -> u64 {
        1u64 << self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn network(&self, mask: u64) -> Network {
        let mut rows = self.base.clone();
        self.apply(&mut rows, mask);
        Network::from_rows(rows)
    }

    fn apply(&self, rows: &mut [u64], mut bits: u64) {
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (i, j) = self.free[k];
            rows[i] ^= 1 << j;
            rows[j] ^= 1 << i;
        }
    }

    /// Visits every member in mask order inside contiguous chunks processed in
    /// parallel; chunk accumulators are merged left to right so the result
    /// does not depend on the thread count.
    pub fn par_fold<A, I, V, M>(&self, init: I, visit: V, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, u64, &[u64]) + Sync,
        M: Fn(A, A) -> A,
    {
        let total = self.len();
        let threads = rayon::current_num_threads() as u64;
        let chunk = (total / (threads * 16)).max(MIN_CHUNK).min(total);
        let chunks = total.div_ceil(chunk);
        let parts: Vec<A> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * chunk;
                let hi = (lo + chunk).min(total);
                let mut acc = init();
                let mut rows = self.base.clone();
                self.apply(&mut rows, lo);
                let mut mask = lo;
                loop {
                    visit(&mut acc, mask, &rows);
                    if mask + 1 == hi {
                        break;
                    }
                    // walk to mask + 1 by toggling the bits that change
                    self.apply(&mut rows, mask ^ (mask + 1));
                    mask += 1;
                }
                acc
            })
            .collect();
        parts.into_iter().reduce(merge).unwrap_or_else(init)
    }
}

/// Running maximum with every mask that stays within `eps` of it.
#[derive(Debug, Clone)]
pub(crate) struct Argmax {
    eps: f64,
    best: f64,
    members: Vec<(u64, f64)>,
}

impl Argmax {
    pub(crate) fn new(eps: f64) -> Self {
        Self {
            eps,
            best: f64::NEG_INFINITY,
            members: Vec::new(),
        }
    }

    pub(crate) fn offer(&mut self, mask: u64, value: f64) {
        if value < self.best - self.eps {
            return;
        }
        if value > self.best {
            self.best = value;
            let floor = value - self.eps;
            self.members.retain(|&(_, v)| v >= floor);
        }
        self.members.push((mask, value));
    }

    pub(crate) fn merge(mut self, other: Self) -> Self {
        self.best = self.best.max(other.best);
        self.members.extend(other.members);
        let floor = self.best - self.eps;
        self.members.retain(|&(_, v)| v >= floor);
        self
    }

    pub(crate) fn best(&self) -> f64 {
        self.best
    }

    pub(crate) fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(|&(m, _)| m)
    }
}

/// One exhaustive pass over a space collecting both the stable members with
/// their welfare and the welfare maximisers.
#[derive(Debug, Clone)]
pub struct Survey {
    space: &'static str,
    resolved: ResolvedSpace,
    stable: Vec<(u64, f64)>,
    best: Argmax,
}

impl Survey {
    pub fn run(space: &SearchSpace, society: &Society) -> Result<Self, SearchError> {
        let resolved = space.resolve(society)?;
        let eps = society.epsilon();
        let (stable, best) = resolved.par_fold(
            || (Vec::new(), Argmax::new(eps)),
            |(stable, best): &mut (Vec<(u64, f64)>, Argmax), mask, rows| {
                let w = society.welfare_rows(rows);
                best.offer(mask, w);
                let mut scratch = rows.to_vec();
                if stable_rows(society, &mut scratch) {
                    stable.push((mask, w));
                }
            },
            |(mut s1, b1), (s2, b2)| {
                s1.extend(s2);
                (s1, b1.merge(b2))
            },
        );
        Ok(Self {
            space: space.label(),
            resolved,
            stable,
            best,
        })
    }

    pub fn space_label(&self) -> &'static str {
        self.space
    }

    pub fn explored(&self) -> u64 {
        self.resolved.len()
    }

    /// Stable members as `(network, welfare)` in canonical order.
    pub fn stable(&self) -> Vec<(Network, f64)> {
        self.stable
            .iter()
            .map(|&(m, w)| (self.resolved.network(m), w))
            .collect()
    }

    pub fn stable_count(&self) -> usize {
        self.stable.len()
    }

    pub fn best_welfare(&self) -> f64 {
        self.best.best()
    }

    pub fn argmax(&self) -> Vec<Network> {
        self.best
            .masks()
            .map(|m| self.resolved.network(m))
            .collect()
    }

    pub fn min_stable_welfare(&self) -> Option<f64> {
        self.stable.iter().map(|&(_, w)| w).reduce(f64::min)
    }

    pub fn price_of_anarchy(&self) -> Result<PriceOfAnarchy, StabilityError> {
        let min = self
            .min_stable_welfare()
            .ok_or(StabilityError::NoStableNetwork(self.space))?;
        if min <= 0.0 {
            return Err(StabilityError::UndefinedRatio(min));
        }
        Ok(PriceOfAnarchy {
            value: self.best.best() / min,
            max_welfare: self.best.best(),
            min_stable_welfare: min,
            stable_count: self.stable.len(),
        })
    }
}
