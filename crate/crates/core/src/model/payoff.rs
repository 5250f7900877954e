use super::network::{all_pairs_distances, UNREACHABLE};
use super::{
    expand_matrix, CoordinationMatrix, GroupPartition, IndividualMatrix, ModelError, Network,
};

/// Default tolerance for payoff comparisons.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// One-hop benefit `delta`, per-link cost, and the indifference tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub delta: f64,
    pub cost: f64,
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(delta: f64, cost: f64) -> Result<Self, ModelError> {
        Self::with_epsilon(delta, cost, DEFAULT_EPSILON)
    }

    pub fn with_epsilon(delta: f64, cost: f64, epsilon: f64) -> Result<Self, ModelError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(ModelError::InvalidDelta(delta));
        }
        if !(cost > 0.0 && cost.is_finite()) {
            return Err(ModelError::InvalidCost(cost));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(ModelError::InvalidEpsilon(epsilon));
        }
        Ok(Self {
            delta,
            cost,
            epsilon,
        })
    }
}

/// `U_i(E) = sum_k Fhat_ik delta^d_ik - deg(i) c`, unreachable nodes
/// contributing nothing.
pub fn payoff(net: &Network, i: usize, fhat: &IndividualMatrix, params: &ModelParams) -> f64 {
    let d = all_pairs_distances(net);
    let benefit: f64 = (0..net.n())
        .filter(|&k| k != i && d.raw(i, k) != UNREACHABLE)
        .map(|k| fhat.get(i, k) * params.delta.powi(d.raw(i, k) as i32))
        .sum();
    benefit - net.degree(i) as f64 * params.cost
}

/// Sum of all payoffs.
pub fn welfare(net: &Network, fhat: &IndividualMatrix, params: &ModelParams) -> f64 {
    (0..net.n()).map(|i| payoff(net, i, fhat, params)).sum()
}

/// True iff no edge joins two different groups.
pub fn in_invariant_set(net: &Network, partition: &GroupPartition) -> bool {
    net.edges().all(|(i, j)| partition.same_group(i, j))
}

/// A fully specified society: partition, coordination weights and payoff
/// parameters, with precomputed group bitsets for fast payoff evaluation.
#[derive(Debug, Clone)]
pub struct Society {
    partition: GroupPartition,
    coordination: CoordinationMatrix,
    individual: IndividualMatrix,
    params: ModelParams,
    group_masks: Vec<u64>,
    powers: Vec<f64>,
}

impl Society {
    pub fn new(
        partition: GroupPartition,
        coordination: CoordinationMatrix,
        params: ModelParams,
    ) -> Result<Self, ModelError> {
        let n = partition.n();
        if n > super::MAX_NODES {
            return Err(ModelError::TooManyNodes(n));
        }
        let individual = expand_matrix(&coordination, &partition)?;
        let mut group_masks = vec![0u64; partition.m()];
        for (i, &g) in partition.membership().iter().enumerate() {
            group_masks[g] |= 1 << i;
        }
        let powers = (0..=n).map(|d| params.delta.powi(d as i32)).collect();
        Ok(Self {
            partition,
            coordination,
            individual,
            params,
            group_masks,
            powers,
        })
    }

    /// Two groups of the given sizes with cross weight `f12`.
    pub fn two_group(
        s1: usize,
        s2: usize,
        f12: f64,
        params: ModelParams,
    ) -> Result<Self, ModelError> {
        Self::new(
            GroupPartition::contiguous(&[s1, s2])?,
            CoordinationMatrix::from_upper(2, &[f12])?,
            params,
        )
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn partition(&self) -> &GroupPartition {
        &self.partition
    }

    pub fn coordination(&self) -> &CoordinationMatrix {
        &self.coordination
    }

    pub fn individual(&self) -> &IndividualMatrix {
        &self.individual
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    pub fn group_mask(&self, group: usize) -> u64 {
        self.group_masks[group]
    }

    #[inline]
    pub fn is_intra(&self, i: usize, j: usize) -> bool {
        self.partition.same_group(i, j)
    }

    pub fn payoff(&self, net: &Network, i: usize) -> f64 {
        self.payoff_rows(net.rows(), i)
    }

    pub fn payoffs(&self, net: &Network) -> Vec<f64> {
        (0..self.n())
            .map(|i| self.payoff_rows(net.rows(), i))
            .collect()
    }

    pub fn welfare(&self, net: &Network) -> f64 {
        self.welfare_rows(net.rows())
    }

    pub(crate) fn welfare_rows(&self, adj: &[u64]) -> f64 {
        (0..adj.len()).map(|i| self.payoff_rows(adj, i)).sum()
    }

    /// Level-synchronous BFS over adjacency bitsets; each level's benefit is
    /// accumulated per group by popcount.
    #[inline]
    pub(crate) fn payoff_rows(&self, adj: &[u64], i: usize) -> f64 {
        let gi = self.partition.group_of(i);
        let mut visited = 1u64 << i;
        let mut frontier = visited;
        let mut depth = 0;
        let mut benefit = 0.0;
        loop {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            next &= !visited;
            if next == 0 {
                break;
            }
            depth += 1;
            visited |= next;
            let mut level = 0.0;
            for (g, &mask) in self.group_masks.iter().enumerate() {
                let hits = (next & mask).count_ones();
                if hits > 0 {
                    level += self.coordination.get(gi, g) * hits as f64;
                }
            }
            benefit += self.powers[depth] * level;
            frontier = next;
        }
        benefit - adj[i].count_ones() as f64 * self.params.cost
    }

    pub fn intra_count(&self, net: &Network) -> usize {
        net.edges().filter(|&(i, j)| self.is_intra(i, j)).count()
    }

    pub fn inter_count(&self, net: &Network) -> usize {
        net.edges().filter(|&(i, j)| !self.is_intra(i, j)).count()
    }

    /// Every group a clique, no interconnections.
    pub fn disjoint_cliques(&self) -> Network {
        let rows = (0..self.n())
            .map(|i| self.group_masks[self.partition.group_of(i)] & !(1u64 << i))
            .collect();
        Network::from_rows(rows)
    }

    /// Number of interconnections between each pair of groups, indexed
    /// `[a * m + b]`.
    pub fn group_link_counts(&self, net: &Network) -> Vec<usize> {
        let m = self.partition.m();
        let mut counts = vec![0; m * m];
        for (i, j) in net.edges() {
            let (a, b) = (self.partition.group_of(i), self.partition.group_of(j));
            if a != b {
                counts[a * m + b] += 1;
                counts[b * m + a] += 1;
            }
        }
        counts
    }
}
