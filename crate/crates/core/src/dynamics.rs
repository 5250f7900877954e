//! Formation dynamics: one activated pair per period, links added by mutual
//! consent and removed unilaterally.
//!
//! Random activation uses `ChaCha8Rng::seed_from_u64(seed)` and draws a
//! canonical pair index with `random_range(0..n(n-1)/2)`; traces are
//! reproducible across platforms for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{in_invariant_set, pair_count, pair_from_index, Network, Society};
use crate::stability::is_pairwise_stable;
use crate::thresholds::{stable_boundaries, y3};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairSelector {
    SeededUniform(u64),
    /// Replays the pairs in order, then stops.
    Scripted(Vec<(usize, usize)>),
}

enum PairStream<'a> {
    Uniform {
        rng: Box<ChaCha8Rng>,
        n: usize,
        total: usize,
    },
    Scripted(std::slice::Iter<'a, (usize, usize)>),
}

impl<'a> PairStream<'a> {
    fn new(selector: &'a PairSelector, n: usize) -> Self {
        match selector {
            PairSelector::SeededUniform(seed) => PairStream::Uniform {
                rng: Box::new(ChaCha8Rng::seed_from_u64(*seed)),
                n,
                total: pair_count(n),
            },
            PairSelector::Scripted(pairs) => PairStream::Scripted(pairs.iter()),
        }
    }
}

impl Iterator for PairStream<'_> {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<(usize, usize)> {
        match self {
            PairStream::Uniform { total: 0, .. } => None,
            PairStream::Uniform { rng, n, total } => {
                Some(pair_from_index(*n, rng.random_range(0..*total)))
            }
            PairStream::Scripted(it) => it.next().copied(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Added,
    Removed,
    NoChange,
}

impl Action {
    pub fn label(&self) -> &'static str {
        match self {
            Action::Added => "added",
            Action::Removed => "removed",
            Action::NoChange => "none",
        }
    }
}

/// One period; counts are taken after the action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub index: usize,
    pub pair: (usize, usize),
    pub action: Action,
    pub intra_count: usize,
    pub inter_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTrace {
    pub steps: Vec<TraceStep>,
    pub final_network: Network,
    pub converged: bool,
    /// Periods applied when stability was first confirmed.
    pub steps_to_convergence: Option<usize>,
}

impl DynamicsTrace {
    /// Index of the first period that ends with an interconnection.
    pub fn first_inter_step(&self) -> Option<usize> {
        self.steps
            .iter()
            .find(|s| s.inter_count > 0)
            .map(|s| s.index)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("initial network has interconnections or non-clique intra links outside its groups")]
    NotInInvariantSet,
    #[error("network left the invariant set at step {0}")]
    LeftInvariantSet(usize),
    #[error("pair ({0}, {1}) is not a pair of distinct nodes")]
    InvalidPair(usize, usize),
    #[error("initial network has {net} nodes, society {society}")]
    SizeMismatch { net: usize, society: usize },
    #[error("max_steps must be at least 1")]
    NoSteps,
}

/// Applies the activation of `(i, j)` to `net`.
///
/// A non-edge is added iff one endpoint gains more than epsilon and the
/// other does not lose more than epsilon. An edge is removed iff some
/// endpoint gains more than epsilon from dropping it.
pub fn step(net: &Network, pair: (usize, usize), society: &Society) -> (Network, Action) {
    let (i, j) = pair;
    let eps = society.epsilon();
    let toggled = if net.has_edge(i, j) {
        net.without_edge(i, j)
    } else {
        net.with_edge(i, j)
    };
    let di = society.payoff(&toggled, i) - society.payoff(net, i);
    let dj = society.payoff(&toggled, j) - society.payoff(net, j);
    let change = if net.has_edge(i, j) {
        di > eps || dj > eps
    } else {
        (di > eps && dj >= -eps) || (dj > eps && di >= -eps)
    };
    match (change, net.has_edge(i, j)) {
        (false, _) => (net.clone(), Action::NoChange),
        (true, true) => (toggled, Action::Removed),
        (true, false) => (toggled, Action::Added),
    }
}

fn check_pair(n: usize, (i, j): (usize, usize)) -> Result<(), DynamicsError> {
    if i == j || i >= n || j >= n {
        Err(DynamicsError::InvalidPair(i, j))
    } else {
        Ok(())
    }
}

/// Runs the dynamics from `e0` for at most `max_steps` periods.
///
/// With `convergence_window == 0` stability is verified whenever the
/// network changes; otherwise after every `convergence_window` consecutive
/// quiet periods. Either way the verdict comes from a full stability check,
/// and a run that exhausts its script is checked once more at the end.
pub fn run(
    e0: &Network,
    selector: &PairSelector,
    society: &Society,
    max_steps: usize,
    convergence_window: usize,
) -> Result<DynamicsTrace, DynamicsError> {
    run_observed(
        e0,
        selector,
        society,
        max_steps,
        convergence_window,
        |_, _| Ok(()),
    )
}

fn run_observed<O>(
    e0: &Network,
    selector: &PairSelector,
    society: &Society,
    max_steps: usize,
    convergence_window: usize,
    mut observe: O,
) -> Result<DynamicsTrace, DynamicsError>
where
    O: FnMut(usize, &Network) -> Result<(), DynamicsError>,
{
    let n = society.n();
    if e0.n() != n {
        return Err(DynamicsError::SizeMismatch {
            net: e0.n(),
            society: n,
        });
    }
    if max_steps == 0 {
        return Err(DynamicsError::NoSteps);
    }
    if let PairSelector::Scripted(pairs) = selector {
        for &p in pairs {
            check_pair(n, p)?;
        }
    }
    let mut net = e0.clone();
    let mut steps = Vec::new();
    let mut quiet = 0usize;
    let mut stable = convergence_window == 0 && is_pairwise_stable(&net, society);
    let mut pairs = PairStream::new(selector, n);
    while !stable && steps.len() < max_steps {
        let Some(pair) = pairs.next() else { break };
        let (next, action) = step(&net, pair, society);
        net = next;
        let index = steps.len() + 1;
        observe(index, &net)?;
        steps.push(TraceStep {
            index,
            pair,
            action,
            intra_count: society.intra_count(&net),
            inter_count: society.inter_count(&net),
        });
        stable = if convergence_window == 0 {
            action != Action::NoChange && is_pairwise_stable(&net, society)
        } else {
            quiet = if action == Action::NoChange {
                quiet + 1
            } else {
                0
            };
            quiet > 0 && quiet % convergence_window == 0 && is_pairwise_stable(&net, society)
        };
    }
    if !stable && steps.len() < max_steps {
        // script exhausted
        stable = is_pairwise_stable(&net, society);
    }
    Ok(DynamicsTrace {
        steps_to_convergence: stable.then_some(steps.len()),
        steps,
        final_network: net,
        converged: stable,
    })
}

/// `run` from a network of the invariant set (no interconnections),
/// checking every period that the network stays there whenever all
/// coordination values lie strictly below the disjoint-cliques bound and
/// `c < y3`.
pub fn in_invariant_set_run(
    e0: &Network,
    selector: &PairSelector,
    society: &Society,
    max_steps: usize,
) -> Result<DynamicsTrace, DynamicsError> {
    let partition = society.partition();
    if e0.n() != society.n() {
        return Err(DynamicsError::SizeMismatch {
            net: e0.n(),
            society: society.n(),
        });
    }
    if !in_invariant_set(e0, partition) {
        return Err(DynamicsError::NotInInvariantSet);
    }
    let params = society.params();
    let eps = params.epsilon;
    let guarded = y3(params.delta).is_ok_and(|y| params.cost < y) && {
        let f = society.coordination();
        let sizes = partition.sizes();
        (0..f.m()).all(|a| {
            (a + 1..f.m()).all(|b| {
                stable_boundaries(sizes[a], sizes[b], params)
                    .is_ok_and(|bounds| f.get(a, b) < bounds[0] - eps)
            })
        })
    };
    run_observed(e0, selector, society, max_steps, 0, |index, net| {
        if guarded && !in_invariant_set(net, partition) {
            Err(DynamicsError::LeftInvariantSet(index))
        } else {
            Ok(())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{pair_index, CoordinationMatrix, GroupPartition, ModelParams};
    use proptest::prelude::*;

    fn two(s1: usize, s2: usize, f12: f64) -> Society {
        Society::two_group(s1, s2, f12, ModelParams::new(0.5, 0.2).unwrap()).unwrap()
    }

    #[test]
    fn uniform_stream_covers_all_pairs() {
        let sel = PairSelector::SeededUniform(7);
        let mut seen = vec![0usize; pair_count(6)];
        for (i, j) in PairStream::new(&sel, 6).take(3000) {
            assert!(i < j && j < 6);
            seen[pair_index(6, i, j)] += 1;
        }
        // 200 expected per pair
        assert!(seen.iter().all(|&c| (120..280).contains(&c)), "{seen:?}");
    }

    #[test]
    fn seeded_runs_are_identical() {
        let s = two(3, 5, 0.3);
        let e0 = Network::empty(8).unwrap();
        let a = run(&e0, &PairSelector::SeededUniform(42), &s, 2000, 0).unwrap();
        let b = run(&e0, &PairSelector::SeededUniform(42), &s, 2000, 0).unwrap();
        assert_eq!(a, b);
        let c = run(&e0, &PairSelector::SeededUniform(43), &s, 2000, 0).unwrap();
        assert_ne!(a.steps, c.steps);
    }

    #[test]
    fn trace_counts_follow_network() {
        let s = two(3, 4, 0.3);
        let e0 = Network::empty(7).unwrap();
        let trace = run(&e0, &PairSelector::SeededUniform(1), &s, 500, 0).unwrap();
        let mut net = e0;
        for st in &trace.steps {
            net = step(&net, st.pair, &s).0;
            assert_eq!(st.intra_count, s.intra_count(&net));
            assert_eq!(st.inter_count, s.inter_count(&net));
        }
        assert_eq!(net, trace.final_network);
        assert!(trace.converged);
        assert!(is_pairwise_stable(&trace.final_network, &s));
        assert_eq!(trace.steps_to_convergence, Some(trace.steps.len()));
    }

    #[test]
    fn windowed_detection_agrees() {
        let s = two(3, 4, 0.3);
        let e0 = Network::empty(7).unwrap();
        let a = run(&e0, &PairSelector::SeededUniform(9), &s, 5000, 0).unwrap();
        let b = run(&e0, &PairSelector::SeededUniform(9), &s, 5000, 25).unwrap();
        assert!(b.converged);
        assert_eq!(a.final_network, b.final_network);
        assert!(b.steps.len() >= a.steps.len() + 25);
    }

    #[test]
    fn stable_start_converges_immediately() {
        let s = two(3, 5, 0.1);
        let trace = run(
            &s.disjoint_cliques(),
            &PairSelector::SeededUniform(0),
            &s,
            10,
            0,
        )
        .unwrap();
        assert!(trace.converged);
        assert_eq!(trace.steps_to_convergence, Some(0));
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn script_exhaustion_and_step_cap() {
        let s = two(3, 5, 0.1);
        let e0 = Network::empty(8).unwrap();
        let short = run(&e0, &PairSelector::Scripted(vec![(0, 1)]), &s, 10, 0).unwrap();
        assert_eq!(short.steps.len(), 1);
        assert!(!short.converged);
        let capped = run(&e0, &PairSelector::SeededUniform(3), &s, 2, 0).unwrap();
        assert_eq!(capped.steps.len(), 2);
        assert!(!capped.converged && capped.steps_to_convergence.is_none());
        assert_eq!(
            run(&e0, &PairSelector::Scripted(vec![(2, 2)]), &s, 10, 0),
            Err(DynamicsError::InvalidPair(2, 2))
        );
        assert_eq!(
            run(&e0, &PairSelector::SeededUniform(3), &s, 0, 0),
            Err(DynamicsError::NoSteps)
        );
    }

    #[test]
    fn intra_non_edges_are_always_added() {
        let s = two(3, 5, 0.6);
        let pairs: Vec<_> = (0..8)
            .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
            .collect();
        for mask in (0u128..1 << 28).step_by(104_729) {
            let net = Network::from_edge_mask(8, mask).unwrap();
            for &(i, j) in &pairs {
                if s.is_intra(i, j) && !net.has_edge(i, j) {
                    assert_eq!(step(&net, (i, j), &s).1, Action::Added, "{net:?} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn cross_pair_without_intra_links_is_ignored() {
        // F12 * delta <= c: an isolated cross pair gains at most F12 * delta - c
        for f12 in [0.1, 0.3, 0.4] {
            let s = two(3, 5, f12);
            let e0 = Network::empty(8).unwrap();
            assert_eq!(step(&e0, (1, 5), &s).1, Action::NoChange);
        }
    }

    #[test]
    fn cross_pair_in_disjoint_cliques_below_bound() {
        let s = two(3, 5, 0.15);
        let (_, action) = step(&s.disjoint_cliques(), (2, 3), &s);
        assert_eq!(action, Action::NoChange);
        let s = two(3, 5, 0.3);
        let (_, action) = step(&s.disjoint_cliques(), (2, 3), &s);
        assert_eq!(action, Action::Added);
    }

    #[test]
    fn second_fresh_bridge_refused() {
        let s = two(3, 5, 0.3);
        let bridged = s.disjoint_cliques().with_edge(0, 3);
        assert_eq!(step(&bridged, (1, 4), &s).1, Action::NoChange);
    }

    #[test]
    fn invariant_run_errors() {
        let s = two(3, 5, 0.1);
        let e0 = Network::from_edges(8, [(0, 3)]).unwrap();
        assert_eq!(
            in_invariant_set_run(&e0, &PairSelector::SeededUniform(1), &s, 10),
            Err(DynamicsError::NotInInvariantSet)
        );
    }

    #[test]
    fn invariant_run_reaches_cliques() {
        let s = two(3, 5, 0.1);
        let e0 = Network::empty(8).unwrap();
        let trace =
            in_invariant_set_run(&e0, &PairSelector::SeededUniform(5), &s, 50 * 28).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.final_network, s.disjoint_cliques());
    }

    #[test]
    fn single_group_forms_clique() {
        let s = Society::new(
            GroupPartition::contiguous(&[5]).unwrap(),
            CoordinationMatrix::new(1, vec![1.0]).unwrap(),
            ModelParams::new(0.5, 0.2).unwrap(),
        )
        .unwrap();
        let trace = in_invariant_set_run(
            &Network::empty(5).unwrap(),
            &PairSelector::SeededUniform(11),
            &s,
            500,
        )
        .unwrap();
        assert_eq!(trace.final_network, Network::complete(5).unwrap());
    }

    fn society_strategy() -> impl Strategy<Value = Society> {
        (
            prop::collection::vec(3usize..=8, 1..=2),
            0.05f64..0.95,
            0.02f64..0.5,
            prop::collection::vec(0.0f64..=1.0, 3),
        )
            .prop_filter_map("n <= 8", |(sizes, delta, cost, upper)| {
                let n: usize = sizes.iter().sum();
                if n > 8 {
                    return None;
                }
                let m = sizes.len();
                let f = CoordinationMatrix::from_upper(m, &upper[..m * (m - 1) / 2]).ok()?;
                let p = GroupPartition::contiguous(&sizes).ok()?;
                Society::new(p, f, ModelParams::new(delta, cost).ok()?).ok()
            })
    }

    proptest! {
        #[test]
        fn fixpoint_iff_stable(society in society_strategy(), mask in any::<u128>()) {
            let n = society.n();
            let net = Network::from_edge_mask(n, mask & ((1u128 << pair_count(n)) - 1)).unwrap();
            let quiet = (0..n).all(|i| (i + 1..n).all(|j| step(&net, (i, j), &society).1 == Action::NoChange));
            prop_assert_eq!(quiet, is_pairwise_stable(&net, &society));
        }
    }
}
