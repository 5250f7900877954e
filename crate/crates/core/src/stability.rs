//! Pairwise stability, the one-edge defeat relation, exhaustive enumeration
//! of stable networks, and the price of anarchy.

use thiserror::Error;

use crate::model::{Network, Society, MAX_NODES};
use crate::search::{SearchError, SearchSpace, Survey};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("networks must differ in exactly one pair, they differ in {0}")]
    NotAdjacent(usize),
    #[error("no pairwise stable network in the {0} search space")]
    NoStableNetwork(&'static str),
    #[error("minimum stable welfare {0} is not positive; the ratio is undefined")]
    UndefinedRatio(f64),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// `U_i(E + ij) > U_i(E - ij)` beyond the tolerance.
pub fn benefits_from_edge(net: &Network, i: usize, j: usize, society: &Society) -> bool {
    let with = society.payoff(&net.with_edge(i, j), i);
    let without = society.payoff(&net.without_edge(i, j), i);
    with > without + society.epsilon()
}

pub fn is_pairwise_stable(net: &Network, society: &Society) -> bool {
    let mut rows = net.rows().to_vec();
    stable_rows(society, &mut rows)
}

/// Checks both stability clauses on adjacency rows; `rows` is toggled in
/// place and restored before returning.
pub(crate) fn stable_rows(society: &Society, rows: &mut [u64]) -> bool {
    let n = rows.len();
    let eps = society.epsilon();
    let mut current = [f64::NAN; MAX_NODES];
    let mut payoff_now = |k: usize, rows: &[u64]| {
        if current[k].is_nan() {
            current[k] = society.payoff_rows(rows, k);
        }
        current[k]
    };
    for i in 0..n {
        for j in i + 1..n {
            let linked = rows[i] >> j & 1 == 1;
            let ui = payoff_now(i, rows);
            let uj = payoff_now(j, rows);
            rows[i] ^= 1 << j;
            rows[j] ^= 1 << i;
            let ui_t = society.payoff_rows(rows, i);
            let uj_t = society.payoff_rows(rows, j);
            rows[i] ^= 1 << j;
            rows[j] ^= 1 << i;
            let violated = if linked {
                // each endpoint must not gain from severing
                ui < ui_t - eps || uj < uj_t - eps
            } else {
                // a strict gain for one side needs a strict loss for the other
                (ui_t > ui + eps && uj_t >= uj - eps) || (uj_t > uj + eps && ui_t >= ui - eps)
            };
            if violated {
                return false;
            }
        }
    }
    true
}

/// Whether `e_prime` defeats `e`: one-pair removal with a strictly gaining
/// remover, or one-pair addition that no endpoint opposes and at least one
/// strictly wants.
pub fn defeats(e_prime: &Network, e: &Network, society: &Society) -> Result<bool, StabilityError> {
    let diff = e_prime.differing_pairs(e);
    if diff.len() != 1 {
        return Err(StabilityError::NotAdjacent(diff.len()));
    }
    let (i, j) = diff[0];
    let eps = society.epsilon();
    let di = society.payoff(e_prime, i) - society.payoff(e, i);
    let dj = society.payoff(e_prime, j) - society.payoff(e, j);
    Ok(if e.has_edge(i, j) {
        di > eps || dj > eps
    } else {
        di >= -eps && dj >= -eps && (di > eps || dj > eps)
    })
}

/// All pairwise stable networks of the space, in canonical mask order.
///
/// Interconnection spaces fix the intra-group cliques but every candidate is
/// still checked against deviations on all pairs.
pub fn enumerate_stable(
    space: &SearchSpace,
    society: &Society,
) -> Result<Vec<Network>, SearchError> {
    let resolved = space.resolve(society)?;
    let masks = resolved.par_fold(
        Vec::new,
        |acc: &mut Vec<u64>, mask, rows| {
            let mut scratch = rows.to_vec();
            if stable_rows(society, &mut scratch) {
                acc.push(mask);
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    Ok(masks.into_iter().map(|m| resolved.network(m)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceOfAnarchy {
    pub value: f64,
    pub max_welfare: f64,
    pub min_stable_welfare: f64,
    pub stable_count: usize,
}

/// Maximum welfare over the space divided by the minimum welfare over its
/// pairwise stable members.
pub fn price_of_anarchy(
    space: &SearchSpace,
    society: &Society,
) -> Result<PriceOfAnarchy, StabilityError> {
    let survey = Survey::run(space, society)?;
    survey.price_of_anarchy()
}
