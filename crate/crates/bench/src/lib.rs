//! Fixtures shared by the benchmarks.

use netform_core::{ModelParams, Network, Society};

/// Two groups at the default discount and cost.
pub fn two_groups(s1: usize, s2: usize, f12: f64) -> Society {
    Society::two_group(s1, s2, f12, ModelParams::new(0.5, 0.2).unwrap()).unwrap()
}

/// Disjoint cliques joined by a path of interconnections between
/// consecutive groups' first members.
pub fn bridged_cliques(society: &Society) -> Network {
    let mut net = society.disjoint_cliques();
    let p = society.partition();
    let firsts: Vec<usize> = (0..p.m()).map(|g| p.members(g).next().unwrap()).collect();
    for w in firsts.windows(2) {
        net.add_edge(w[0], w[1]);
    }
    net
}
