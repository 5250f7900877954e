//! Threshold functions `y1`, `y2`, `y3` and the closed-form regime bounds
//! built from them.
//!
//! Wherever a bound is the maximum over the two group sizes of `c / y(s)`,
//! it is evaluated at the smaller size: `y1` and `y2` increase with `s`.

use thiserror::Error;

use crate::model::{CoordinationMatrix, GroupPartition, ModelParams, Network};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("group size {0} is below 3")]
    GroupTooSmall(usize),
    #[error("delta {0} outside (0, 1)")]
    Delta(f64),
    #[error("link cost {cost} is not below y3 = {y3}; no regime is defined")]
    RegimeUndefined { cost: f64, y3: f64 },
    #[error("coordination value {0} outside [0, 1]")]
    Coordination(f64),
    #[error("group graph is disconnected")]
    Disconnected,
    #[error("group graph has {graph} groups, coordination matrix {matrix}, partition {partition}")]
    DimensionMismatch {
        graph: usize,
        matrix: usize,
        partition: usize,
    },
    #[error("invalid group graph edge ({0}, {1})")]
    InvalidEdge(usize, usize),
}

fn check_delta(delta: f64) -> Result<(), ThresholdError> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(ThresholdError::Delta(delta))
    }
}

fn check_size(s: usize) -> Result<(), ThresholdError> {
    if s >= 3 {
        Ok(())
    } else {
        Err(ThresholdError::GroupTooSmall(s))
    }
}

/// `delta + (s - 1) delta^2`
pub fn y1(s: usize, delta: f64) -> Result<f64, ThresholdError> {
    check_size(s)?;
    check_delta(delta)?;
    Ok(delta + (s - 1) as f64 * delta * delta)
}

/// `(1 - delta) y1(s)`
pub fn y2(s: usize, delta: f64) -> Result<f64, ThresholdError> {
    Ok((1.0 - delta) * y1(s, delta)?)
}

/// `delta - delta^2`
pub fn y3(delta: f64) -> Result<f64, ThresholdError> {
    check_delta(delta)?;
    Ok(delta - delta * delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// No interconnections.
    Disjoint,
    /// Exactly one interconnection.
    Bridge,
    /// Exactly `k >= 2` interconnections.
    ExactK(usize),
    /// At least two interconnections, not all.
    Redundant,
    /// Every cross-group pair linked.
    Maximal,
    /// On a regime boundary, where several structures coexist.
    BoundaryTie,
}

impl Regime {
    /// Position along the increasing-`F` axis; `None` for ties.
    pub fn rank(&self) -> Option<usize> {
        match *self {
            Regime::Disjoint => Some(0),
            Regime::Bridge => Some(1),
            Regime::ExactK(k) => Some(k),
            Regime::Redundant => Some(2),
            Regime::Maximal => Some(usize::MAX),
            Regime::BoundaryTie => None,
        }
    }

    /// Interconnection counts compatible with the regime between groups of
    /// sizes `s1` and `s2`, as an inclusive range.
    pub fn interconnections(&self, s1: usize, s2: usize) -> Option<(usize, usize)> {
        let all = s1 * s2;
        match *self {
            Regime::Disjoint => Some((0, 0)),
            Regime::Bridge => Some((1, 1)),
            Regime::ExactK(k) => Some((k, k)),
            Regime::Redundant => Some((2, all - 1)),
            Regime::Maximal => Some((all, all)),
            Regime::BoundaryTie => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Regime::ExactK(k) => format!("ExactK({k})"),
            other => format!("{other:?}"),
        }
    }
}

/// Predicted regime with the interval of `F12` it holds on. For ties both
/// bounds equal the boundary and `tie` names the regimes on either side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimePrediction {
    pub kind: Regime,
    pub lower: f64,
    pub upper: f64,
    pub tie: Option<(Regime, Regime)>,
}

impl RegimePrediction {
    /// Count range, spanning both neighbours for ties.
    pub fn interconnections(&self, s1: usize, s2: usize) -> (usize, usize) {
        match (self.kind.interconnections(s1, s2), self.tie) {
            (Some(r), _) => r,
            (None, Some((lo, hi))) => {
                let a = lo.interconnections(s1, s2).unwrap();
                let b = hi.interconnections(s1, s2).unwrap();
                (a.0.min(b.0), a.1.max(b.1))
            }
            (None, None) => unreachable!("tie without neighbours"),
        }
    }
}

fn require_regime_scope(params: &ModelParams, f12: f64) -> Result<f64, ThresholdError> {
    let y3v = y3(params.delta)?;
    if params.cost >= y3v {
        return Err(ThresholdError::RegimeUndefined {
            cost: params.cost,
            y3: y3v,
        });
    }
    if !(0.0..=1.0).contains(&f12) {
        return Err(ThresholdError::Coordination(f12));
    }
    Ok(y3v)
}

/// Boundaries of the two-group stable regimes in increasing order:
/// `c/y1, c/y2, c/(y2 - delta y3), ..., c/(y2 - (smin - 2) delta y3), c/y3`.
///
/// Interval `k` (between boundaries `k - 1` and `k`) holds `k`
/// interconnections; the last joins the maximal regime because
/// `y2(s) - (s - 1) delta y3 = y3`.
pub fn stable_boundaries(
    s1: usize,
    s2: usize,
    params: &ModelParams,
) -> Result<Vec<f64>, ThresholdError> {
    let (c, delta) = (params.cost, params.delta);
    let s = s1.min(s2);
    let y1v = y1(s, delta)?;
    let y2v = y2(s, delta)?;
    check_size(s1.max(s2))?;
    let y3v = y3(delta)?;
    let mut out = vec![c / y1v, c / y2v];
    for k in 2..s {
        out.push(c / (y2v - (k - 1) as f64 * delta * y3v));
    }
    out.push(c / y3v);
    Ok(out)
}

/// Boundaries of the two-group efficient regimes:
/// `c delta / (y1(s1) y1(s2))`, `2c / (y2(s1) + y2(s2) + (s1 + s2 - 4) delta y3)`, `c / y3`.
pub fn efficient_boundaries(
    s1: usize,
    s2: usize,
    params: &ModelParams,
) -> Result<[f64; 3], ThresholdError> {
    let (c, delta) = (params.cost, params.delta);
    let y3v = y3(delta)?;
    Ok([
        c * delta / (y1(s1, delta)? * y1(s2, delta)?),
        2.0 * c / (y2(s1, delta)? + y2(s2, delta)? + (s1 + s2 - 4) as f64 * delta * y3v),
        c / y3v,
    ])
}

fn locate(f12: f64, bounds: &[f64], regimes: &[Regime], eps: f64) -> RegimePrediction {
    debug_assert_eq!(regimes.len(), bounds.len() + 1);
    for (k, &b) in bounds.iter().enumerate() {
        if (f12 - b).abs() <= eps {
            return RegimePrediction {
                kind: Regime::BoundaryTie,
                lower: b,
                upper: b,
                tie: Some((regimes[k], regimes[k + 1])),
            };
        }
        if f12 < b {
            return RegimePrediction {
                kind: regimes[k],
                lower: if k == 0 { 0.0 } else { bounds[k - 1] },
                upper: b,
                tie: None,
            };
        }
    }
    RegimePrediction {
        kind: regimes[bounds.len()],
        lower: *bounds.last().unwrap(),
        upper: 1.0,
        tie: None,
    }
}

/// Pairwise stable structure of two groups, for `c < y3`.
pub fn classify_two_group_stable(
    s1: usize,
    s2: usize,
    params: &ModelParams,
    f12: f64,
) -> Result<RegimePrediction, ThresholdError> {
    require_regime_scope(params, f12)?;
    let bounds = stable_boundaries(s1, s2, params)?;
    let mut regimes = vec![Regime::Disjoint, Regime::Bridge];
    regimes.extend((2..=s1.min(s2)).map(Regime::ExactK));
    regimes.push(Regime::Maximal);
    Ok(locate(f12, &bounds, &regimes, params.epsilon))
}

/// Efficient structure of two groups, for `c < y3`.
pub fn classify_two_group_efficient(
    s1: usize,
    s2: usize,
    params: &ModelParams,
    f12: f64,
) -> Result<RegimePrediction, ThresholdError> {
    require_regime_scope(params, f12)?;
    let bounds = efficient_boundaries(s1, s2, params)?;
    let regimes = [
        Regime::Disjoint,
        Regime::Bridge,
        Regime::Redundant,
        Regime::Maximal,
    ];
    Ok(locate(f12, &bounds, &regimes, params.epsilon))
}

/// Intervals of `F12` on which the efficient structure is known to be the
/// pairwise stable one, closed, in increasing order.
pub fn overlap_intervals(
    s1: usize,
    s2: usize,
    params: &ModelParams,
) -> Result<Vec<(f64, f64)>, ThresholdError> {
    let [e_disjoint, e_bridge, e_maximal] = efficient_boundaries(s1, s2, params)?;
    let s_bridge = stable_boundaries(s1, s2, params)?[0];
    let n = (s1 + s2) as f64;
    let split = (s1.max(s2) as f64 - 3.0) / (n - 3.0);
    let mut out = vec![(0.0, e_disjoint)];
    if params.delta >= split {
        out.push((s_bridge, e_bridge));
    }
    out.push((e_maximal, 1.0));
    Ok(out)
}

pub fn stability_efficiency_overlap(
    s1: usize,
    s2: usize,
    params: &ModelParams,
    f12: f64,
) -> Result<bool, ThresholdError> {
    require_regime_scope(params, f12)?;
    let eps = params.epsilon;
    Ok(overlap_intervals(s1, s2, params)?
        .iter()
        .any(|&(lo, hi)| f12 >= lo - eps && f12 <= hi + eps))
}

/// `(max_s c/y2(s), c/y3)`: above the first value redundant interconnections
/// form between the two groups, above the second maximal ones.
pub fn redundancy_bounds(
    s_alpha: usize,
    s_beta: usize,
    params: &ModelParams,
) -> Result<(f64, f64), ThresholdError> {
    require_regime_scope(params, 0.0)?;
    let c = params.cost;
    let s = s_alpha.min(s_beta);
    check_size(s_alpha.max(s_beta))?;
    Ok((c / y2(s, params.delta)?, c / y3(params.delta)?))
}

/// Simple undirected graph on group ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupGraph {
    adj: Vec<u64>,
}

impl GroupGraph {
    pub fn new(m: usize, edges: &[(usize, usize)]) -> Result<Self, ThresholdError> {
        let mut g = Self { adj: vec![0; m] };
        for &(a, b) in edges {
            if a == b || a >= m || b >= m || m > 64 {
                return Err(ThresholdError::InvalidEdge(a, b));
            }
            g.adj[a] |= 1 << b;
            g.adj[b] |= 1 << a;
        }
        Ok(g)
    }

    pub fn star(m: usize, center: usize) -> Result<Self, ThresholdError> {
        let edges: Vec<_> = (0..m)
            .filter(|&a| a != center)
            .map(|a| (center, a))
            .collect();
        Self::new(m, &edges)
    }

    /// Cycle visiting the groups in the given order.
    pub fn ring(order: &[usize]) -> Result<Self, ThresholdError> {
        let m = order.len();
        let edges: Vec<_> = (0..m).map(|k| (order[k], order[(k + 1) % m])).collect();
        Self::new(m, &edges)
    }

    /// Groups joined by at least one interconnection of `net`.
    pub fn of_network(net: &Network, partition: &GroupPartition) -> Self {
        let mut adj = vec![0u64; partition.m()];
        for (i, j) in net.edges() {
            let (a, b) = (partition.group_of(i), partition.group_of(j));
            if a != b {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        Self { adj }
    }

    pub fn m(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    fn toggled(&self, a: usize, b: usize, present: bool) -> Self {
        let mut g = self.clone();
        if present {
            g.adj[a] |= 1 << b;
            g.adj[b] |= 1 << a;
        } else {
            g.adj[a] &= !(1 << b);
            g.adj[b] &= !(1 << a);
        }
        g
    }

    /// Hop distances from `src`; `None` when unreachable.
    pub fn distances_from(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.m()];
        dist[src] = Some(0);
        let mut frontier = 1u64 << src;
        let mut visited = frontier;
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            next &= !visited;
            visited |= next;
            let mut bits = next;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                dist[v] = Some(d);
            }
            frontier = next;
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.m() == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn is_star(&self) -> bool {
        let m = self.m();
        self.edge_count() == m - 1 && (0..m).any(|a| self.degree(a) == m - 1)
    }

    pub fn is_ring(&self) -> bool {
        self.m() >= 3 && self.is_connected() && (0..self.m()).all(|a| self.degree(a) == 2)
    }
}

/// Change in `alpha`'s representative payoff benefit from toggling the
/// group edge `(alpha, beta)`:
/// `sum_{l != alpha} F_{alpha l} (delta^{d'} - delta^{d}) (1 + (s_l - 1) delta)`,
/// `d'` measured with the edge, `d` without, unreachable counting as zero.
fn representative_gain(
    alpha: usize,
    with: &GroupGraph,
    without: &GroupGraph,
    f: &CoordinationMatrix,
    sizes: &[usize],
    delta: f64,
) -> f64 {
    let pow = |d: Option<u32>| d.map_or(0.0, |d| delta.powi(d as i32));
    let d_with = with.distances_from(alpha);
    let d_without = without.distances_from(alpha);
    (0..with.m())
        .filter(|&l| l != alpha)
        .map(|l| {
            f.get(alpha, l)
                * (pow(d_with[l]) - pow(d_without[l]))
                * (1.0 + (sizes[l] - 1) as f64 * delta)
        })
        .sum()
}

/// Sufficient condition for a pairwise stable structure made of cliques
/// minimally connected along `tree`, with one representative per group
/// carrying all interconnections.
pub fn minimally_connected_sufficient(
    tree: &GroupGraph,
    f: &CoordinationMatrix,
    partition: &GroupPartition,
    params: &ModelParams,
) -> Result<bool, ThresholdError> {
    require_regime_scope(params, 0.0)?;
    let m = tree.m();
    if f.m() != m || partition.m() != m {
        return Err(ThresholdError::DimensionMismatch {
            graph: m,
            matrix: f.m(),
            partition: partition.m(),
        });
    }
    if !tree.is_connected() {
        return Err(ThresholdError::Disconnected);
    }
    let (c, delta) = (params.cost, params.delta);
    let sizes = partition.sizes();
    for a in 0..m {
        for b in a + 1..m {
            let with = tree.toggled(a, b, true);
            let without = tree.toggled(a, b, false);
            let ga = representative_gain(a, &with, &without, f, sizes, delta);
            let gb = representative_gain(b, &with, &without, f, sizes, delta);
            let holds = if tree.has_edge(a, b) {
                let redundant = c / y2(sizes[a].min(sizes[b]), delta)?;
                ga > c && gb > c && f.get(a, b) < redundant
            } else {
                ga < c || gb < c
            };
            if !holds {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
