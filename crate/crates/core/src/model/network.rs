use std::collections::VecDeque;
use std::fmt;

use super::ModelError;

/// Largest supported node count (one `u64` adjacency row per node).
pub const MAX_NODES: usize = 64;
/// Largest node count whose edge set fits the `u128` canonical mask.
pub const MAX_MASK_NODES: usize = 16;
/// Distance sentinel for unreachable pairs.
pub const UNREACHABLE: u32 = u32::MAX;

/// Number of unordered node pairs, `C(n, 2)`.
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Canonical index of the pair `{i, j}` in lexicographic order over all
/// pairs `(a, b)` with `a < b`.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(a != b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(n: usize, mut index: usize) -> (usize, usize) {
    for a in 0..n {
        let row = n - a - 1;
        if index < row {
            return (a, a + 1 + index);
        }
        index -= row;
    }
    panic!("pair index out of range for n = {n}");
}

/// Labeled undirected simple graph stored as adjacency bitsets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Network {
    n: usize,
    adj: Vec<u64>,
}

impl Network {
    pub fn empty(n: usize) -> Result<Self, ModelError> {
        if n > MAX_NODES {
            return Err(ModelError::TooManyNodes(n));
        }
        Ok(Self { n, adj: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self, ModelError> {
        let mut net = Self::empty(n)?;
        for i in 0..n {
            net.adj[i] = full_mask(n) & !(1u64 << i);
        }
        Ok(net)
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut net = Self::empty(n)?;
        for (i, j) in edges {
            net.check_pair(i, j)?;
            net.add_edge(i, j);
        }
        Ok(net)
    }

    /// Decodes a canonical edge mask (bit `pair_index(i, j)` set iff `{i, j}`
    /// is an edge).
    pub fn from_edge_mask(n: usize, mask: u128) -> Result<Self, ModelError> {
        if n > MAX_MASK_NODES {
            return Err(ModelError::TooManyNodes(n));
        }
        let mut net = Self::empty(n)?;
        let mut bits = mask;
        while bits != 0 {
            let idx = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if idx >= pair_count(n) {
                return Err(ModelError::NodeOutOfRange { node: n, n });
            }
            let (i, j) = pair_from_index(n, idx);
            net.add_edge(i, j);
        }
        Ok(net)
    }

    /// Canonical edge mask. Panics for more than [`MAX_MASK_NODES`] nodes.
    pub fn edge_mask(&self) -> u128 {
        assert!(
            self.n <= MAX_MASK_NODES,
            "edge mask needs at most {MAX_MASK_NODES} nodes"
        );
        self.edges()
            .fold(0u128, |acc, (i, j)| acc | 1u128 << pair_index(self.n, i, j))
    }

    pub(crate) fn from_rows(adj: Vec<u64>) -> Self {
        Self { n: adj.len(), adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn neighbors_mask(&self, i: usize) -> u64 {
        self.adj[i]
    }

    pub fn check_pair(&self, i: usize, j: usize) -> Result<(), ModelError> {
        for node in [i, j] {
            if node >= self.n {
                return Err(ModelError::NodeOutOfRange { node, n: self.n });
            }
        }
        if i == j {
            return Err(ModelError::SelfLoop(i));
        }
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    #[inline]
    pub fn add_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i != j);
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
    }

    #[inline]
    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.adj[i] &= !(1 << j);
        self.adj[j] &= !(1 << i);
    }

    #[inline]
    pub fn toggle_edge(&mut self, i: usize, j: usize) {
        self.adj[i] ^= 1 << j;
        self.adj[j] ^= 1 << i;
    }

    pub fn with_edge(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.add_edge(i, j);
        out
    }

    pub fn without_edge(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.remove_edge(i, j);
        out
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Ratio of present to possible edges.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / pair_count(self.n) as f64
    }

    /// Edges `(i, j)` with `i < j` in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            let mut upper = self.adj[i] & !low_mask(i + 1);
            std::iter::from_fn(move || {
                if upper == 0 {
                    return None;
                }
                let j = upper.trailing_zeros() as usize;
                upper &= upper - 1;
                Some((i, j))
            })
        })
    }

    /// Pairs on which the two networks disagree, canonical order.
    pub fn differing_pairs(&self, other: &Network) -> Vec<(usize, usize)> {
        assert_eq!(self.n, other.n);
        let diff = Network::from_rows(
            self.adj
                .iter()
                .zip(&other.adj)
                .map(|(a, b)| a ^ b)
                .collect(),
        );
        diff.edges().collect()
    }
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Network(n={}, ", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

#[inline]
pub(crate) fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    low_mask(n)
}

/// Hop distances between all node pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Raw entry, [`UNREACHABLE`] when no path exists.
    #[inline]
    pub fn raw(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        match self.raw(i, j) {
            UNREACHABLE => None,
            d => Some(d),
        }
    }
}

/// Breadth-first search from every node.
pub fn all_pairs_distances(net: &Network) -> DistanceMatrix {
    let n = net.n();
    let mut d = vec![UNREACHABLE; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut d[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let next = row[u] + 1;
            for (v, dv) in row.iter_mut().enumerate() {
                if net.has_edge(u, v) && *dv == UNREACHABLE {
                    *dv = next;
                    queue.push_back(v);
                }
            }
        }
    }
    DistanceMatrix { n, d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 5;
        let mut expect = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(pair_index(n, i, j), expect);
                assert_eq!(pair_index(n, j, i), expect);
                assert_eq!(pair_from_index(n, expect), (i, j));
                expect += 1;
            }
        }
        assert_eq!(expect, pair_count(n));
    }

    #[test]
    fn empty_network_unreachable() {
        let d = all_pairs_distances(&Network::empty(3).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), if i == j { Some(0) } else { None });
            }
        }
    }

    #[test]
    fn path_distance() {
        let net = Network::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(all_pairs_distances(&net).get(0, 2), Some(2));
    }

    #[test]
    fn bridged_triangles() {
        let net = Network::from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3)])
            .unwrap();
        let d = all_pairs_distances(&net);
        assert_eq!(d.get(1, 5), Some(3));
        assert_eq!(d.get(0, 4), Some(2));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Network::empty(65), Err(ModelError::TooManyNodes(65)));
        assert_eq!(
            Network::from_edges(3, [(1, 1)]),
            Err(ModelError::SelfLoop(1))
        );
        assert_eq!(
            Network::from_edges(3, [(0, 3)]),
            Err(ModelError::NodeOutOfRange { node: 3, n: 3 })
        );
    }

    #[test]
    fn edges_and_density() {
        let k4 = Network::complete(4).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.density(), 1.0);
        assert_eq!(
            k4.edges().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        );
        let a = Network::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let b = Network::from_edges(4, [(0, 1), (1, 3)]).unwrap();
        assert_eq!(a.differing_pairs(&b), vec![(1, 3), (2, 3)]);
    }

    fn arb_network() -> impl Strategy<Value = Network> {
        (2usize..=9).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), pair_count(n)).prop_map(move |bits| {
                let edges = bits
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(k, _)| pair_from_index(n, k));
                Network::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn mask_round_trip(net in arb_network()) {
            let back = Network::from_edge_mask(net.n(), net.edge_mask()).unwrap();
            prop_assert_eq!(back, net);
        }

        #[test]
        fn distance_axioms(net in arb_network()) {
            let d = all_pairs_distances(&net);
            let n = net.n();
            for i in 0..n {
                prop_assert_eq!(d.raw(i, i), 0);
                for j in 0..n {
                    prop_assert_eq!(d.raw(i, j), d.raw(j, i));
                    prop_assert_eq!(d.raw(i, j) == 1, net.has_edge(i, j));
                    for k in 0..n {
                        if let (Some(a), Some(b)) = (d.get(i, k), d.get(k, j)) {
                            prop_assert!(d.raw(i, j) <= a + b);
                        }
                    }
                }
            }
        }

        #[test]
        fn adding_an_edge_never_lengthens(net in arb_network(), a in 0usize..9, b in 0usize..9) {
            let n = net.n();
            let (a, b) = (a % n, b % n);
            prop_assume!(a != b);
            let before = all_pairs_distances(&net);
            let after = all_pairs_distances(&net.with_edge(a, b));
            for i in 0..n {
                for j in 0..n {
                    prop_assert!(after.raw(i, j) <= before.raw(i, j));
                }
            }
        }
    }
}
