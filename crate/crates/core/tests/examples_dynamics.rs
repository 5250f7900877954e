use netform_core::dynamics::{in_invariant_set_run, run, step, Action, PairSelector};
use netform_core::model::pair_count;
use netform_core::thresholds::GroupGraph;
use netform_core::{
    is_pairwise_stable, CoordinationMatrix, GroupPartition, ModelParams, Network, Society,
};

fn intra_pairs(society: &Society) -> Vec<(usize, usize)> {
    let n = society.n();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| society.is_intra(i, j))
        .collect()
}

fn two_line_society() -> Society {
    Society::two_group(3, 5, 0.4, ModelParams::new(0.5, 0.2).unwrap()).unwrap()
}

/// Group lines 0-1-2 and 3-4-5-7-6.
fn two_line_network() -> Network {
    Network::from_edges(8, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 7), (7, 6)]).unwrap()
}

#[test]
fn scripted_two_bridges_before_cliques() {
    let s = two_line_society();
    let mut script = vec![(1, 5), (2, 6)];
    script.extend(intra_pairs(&s));
    let trace = run(
        &two_line_network(),
        &PairSelector::Scripted(script),
        &s,
        1000,
        0,
    )
    .unwrap();
    assert_eq!(trace.steps[0].action, Action::Added);
    assert_eq!(trace.steps[1].action, Action::Added);
    assert!(trace.converged);
    assert_eq!(s.inter_count(&trace.final_network), 2);
    assert_eq!(s.intra_count(&trace.final_network), 13);
}

#[test]
fn example_one_natural_lines_refuse_second_bridge() {
    let s = two_line_society();
    let lines = Network::from_edges(8, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7)]).unwrap();
    let (after, a) = step(&lines, (1, 5), &s);
    assert_eq!(a, Action::Added);
    assert_eq!(step(&after, (2, 6), &s).1, Action::NoChange);
}

#[test]
fn example_one_cliques_first_single_bridge_is_a_tie() {
    let s = two_line_society();
    let mut script = intra_pairs(&s);
    script.push((1, 5));
    let trace = run(
        &two_line_network(),
        &PairSelector::Scripted(script),
        &s,
        1000,
        0,
    )
    .unwrap();
    let fin = &trace.final_network;
    assert_eq!(s.inter_count(fin), 1);
    // one endpoint of a fresh cross pair gains, the other is exactly
    // indifferent, so the addition rule accepts a second bridge
    assert!(!trace.converged);
    assert!(!is_pairwise_stable(fin, &s));
    let (_, a) = step(fin, (0, 3), &s);
    assert_eq!(a, Action::Added);
}

fn five_triangles() -> Society {
    let p = GroupPartition::contiguous(&[3; 5]).unwrap();
    let f = CoordinationMatrix::uniform(5, 0.2).unwrap();
    Society::new(p, f, ModelParams::new(0.55, 0.2).unwrap()).unwrap()
}

#[test]
fn example_two_star() {
    let s = five_triangles();
    let script = vec![(0, 3), (0, 6), (0, 9), (1, 10), (0, 12)];
    let trace = run(
        &s.disjoint_cliques(),
        &PairSelector::Scripted(script),
        &s,
        100,
        0,
    )
    .unwrap();
    let actions: Vec<_> = trace.steps.iter().map(|t| t.action).collect();
    use Action::*;
    assert_eq!(actions, [Added, Added, Added, NoChange, Added]);
    assert!(trace.converged);
    assert!(GroupGraph::of_network(&trace.final_network, s.partition()).is_star());
}

#[test]
fn example_two_ring() {
    let s = five_triangles();
    let script = vec![(3, 6), (0, 3), (0, 6), (0, 9), (6, 12), (3, 9), (9, 12)];
    let trace = run(
        &s.disjoint_cliques(),
        &PairSelector::Scripted(script),
        &s,
        100,
        0,
    )
    .unwrap();
    let actions: Vec<_> = trace.steps.iter().map(|t| t.action).collect();
    use Action::*;
    assert_eq!(
        actions,
        [Added, Added, NoChange, Added, Added, NoChange, Added]
    );
    assert!(trace.converged);
    let t = GroupGraph::of_network(&trace.final_network, s.partition());
    assert!(t.is_ring());
    assert_eq!(t, GroupGraph::ring(&[0, 1, 2, 4, 3]).unwrap());
}

#[test]
fn cliques_form_from_empty_below_bridge_bound() {
    for (sizes, f) in [
        (vec![3, 5], 0.15),
        (vec![4, 4, 4], 0.1),
        (vec![3, 3, 3, 3], 0.19),
    ] {
        let p = GroupPartition::contiguous(&sizes).unwrap();
        let m = sizes.len();
        let s = Society::new(
            p,
            CoordinationMatrix::uniform(m, f).unwrap(),
            ModelParams::new(0.5, 0.2).unwrap(),
        )
        .unwrap();
        let n = s.n();
        for seed in 0..20 {
            let trace = in_invariant_set_run(
                &Network::empty(n).unwrap(),
                &PairSelector::SeededUniform(seed),
                &s,
                50 * pair_count(n),
            )
            .unwrap();
            assert!(trace.converged, "{sizes:?} seed {seed}");
            assert_eq!(trace.final_network, s.disjoint_cliques());
        }
    }
}

#[test]
fn bridge_regime_reaches_one_interconnection() {
    let s = Society::two_group(3, 5, 0.3, ModelParams::new(0.5, 0.2).unwrap()).unwrap();
    for seed in 0..20 {
        let trace = in_invariant_set_run(
            &Network::empty(8).unwrap(),
            &PairSelector::SeededUniform(seed),
            &s,
            5000,
        )
        .unwrap();
        assert!(trace.converged);
        assert_eq!(s.inter_count(&trace.final_network), 1);
        assert_eq!(s.intra_count(&trace.final_network), 13);
    }
}

#[test]
fn intra_links_precede_the_first_interconnection() {
    let s = Society::two_group(7, 7, 0.3, ModelParams::new(0.5, 0.2).unwrap()).unwrap();
    let p = s.partition();
    for seed in 0..100 {
        let trace = run(
            &Network::empty(14).unwrap(),
            &PairSelector::SeededUniform(seed),
            &s,
            50 * 91,
            0,
        )
        .unwrap();
        assert!(trace.converged);
        let first = trace.first_inter_step().expect("bridge regime") - 1;
        let mut net = Network::empty(14).unwrap();
        for st in &trace.steps[..first] {
            net = step(&net, st.pair, &s).0;
        }
        let mut intra = vec![0; p.m()];
        for (i, j) in net.edges() {
            intra[p.group_of(i)] += 1;
            assert!(p.same_group(i, j));
        }
        assert!(intra.iter().all(|&k| k > 0), "seed {seed}: {intra:?}");
    }
}

#[test]
fn example_two_needs_low_coordination_in_the_band() {
    // c/y1 = 0.173 < 0.3 < c/y2 = 0.385, yet peripheral members of
    // non-adjacent groups then gain from a direct link
    let p = GroupPartition::contiguous(&[3; 5]).unwrap();
    let f = CoordinationMatrix::uniform(5, 0.3).unwrap();
    let s = Society::new(p, f, ModelParams::new(0.55, 0.2).unwrap()).unwrap();
    let star = s
        .disjoint_cliques()
        .with_edge(0, 3)
        .with_edge(0, 6)
        .with_edge(0, 9)
        .with_edge(0, 12);
    assert!(!is_pairwise_stable(&star, &s));
    assert_eq!(step(&star, (4, 7), &s).1, Action::Added);
}
