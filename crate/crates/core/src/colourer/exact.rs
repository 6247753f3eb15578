//! Exhaustive exploration of every random branch of a buffered run.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::buffered::BufferState;
use crate::error::{Error, Result};
use crate::graph::{ArrivalOrder, Graph};

pub const DEFAULT_BRANCH_CAP: u64 = 10_000_000;
pub const DEFAULT_ORDER_LIMIT: usize = 8;

/// Exact law of the number of colours used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeDistribution {
    pmf: BTreeMap<u32, BigRational>,
}

impl OutcomeDistribution {
    /// Builds a distribution, dropping zero entries.
    pub fn from_pmf(pmf: BTreeMap<u32, BigRational>) -> Self {
        let pmf = pmf.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        OutcomeDistribution { pmf }
    }

    pub fn point_mass(count: u32) -> Self {
        OutcomeDistribution {
            pmf: BTreeMap::from([(count, BigRational::one())]),
        }
    }

    pub fn pmf(&self) -> &BTreeMap<u32, BigRational> {
        &self.pmf
    }

    pub fn probability(&self, count: u32) -> BigRational {
        self.pmf
            .get(&count)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<u32> {
        self.pmf.keys().copied().collect()
    }

    pub fn total(&self) -> BigRational {
        self.pmf
            .values()
            .fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn mean(&self) -> BigRational {
        self.pmf.iter().fold(BigRational::zero(), |acc, (&k, p)| {
            acc + BigRational::from_integer(BigInt::from(k)) * p
        })
    }

    /// `Pr(C >= m)`.
    pub fn tail(&self, m: u32) -> BigRational {
        self.pmf
            .range(m..)
            .fold(BigRational::zero(), |acc, (_, p)| acc + p)
    }

    /// Probabilities as `f64`, for comparison with empirical frequencies.
    pub fn to_f64(&self) -> BTreeMap<u32, f64> {
        self.pmf
            .iter()
            .map(|(&k, p)| (k, rational_to_f64(p)))
            .collect()
    }
}

impl fmt::Display for OutcomeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pmf.iter().map(|(k, p)| format!("{k}:{p}")).collect();
        f.write_str(&parts.join(" "))
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact distribution of the colour count of the buffered algorithm over all
/// of its random choices, each of `r` tied candidates weighted `1/r`.
///
/// Fails once more than `branch_cap` complete runs have been explored.
pub fn exact_outcome_distribution(
    graph: &Graph,
    order: &ArrivalOrder,
    buffer: usize,
    branch_cap: u64,
) -> Result<OutcomeDistribution> {
    let state = BufferState::new(graph, order, buffer)?;
    let mut walk = Walk {
        cap: branch_cap,
        leaves: 0,
        pmf: BTreeMap::new(),
    };
    walk.explore(state, BigRational::one())?;
    Ok(OutcomeDistribution::from_pmf(walk.pmf))
}

struct Walk {
    cap: u64,
    leaves: u64,
    pmf: BTreeMap<u32, BigRational>,
}

impl Walk {
    fn explore(&mut self, mut state: BufferState<'_>, weight: BigRational) -> Result<()> {
        let mut weight = weight;
        loop {
            let candidates = state.candidates();
            match candidates.len() {
                0 => break,
                1 => {
                    state.commit(&candidates[0]);
                }
                r => {
                    weight /= BigRational::from_integer(BigInt::from(r));
                    let (last, rest) = candidates.split_last().unwrap();
                    for candidate in rest {
                        let mut branch = state.clone();
                        branch.commit(candidate);
                        self.explore(branch, weight.clone())?;
                    }
                    state.commit(last);
                }
            }
        }
        self.leaves += 1;
        if self.leaves > self.cap {
            return Err(Error::BranchCapExceeded {
                explored: self.leaves,
                cap: self.cap,
            });
        }
        let count = super::distinct(state.fixed()) as u32;
        *self.pmf.entry(count).or_insert_with(BigRational::zero) += weight;
        Ok(())
    }
}

/// Largest colour count reachable on any random branch.
pub fn max_colours_over_branches(
    graph: &Graph,
    order: &ArrivalOrder,
    buffer: usize,
) -> Result<u32> {
    fn walk(mut state: BufferState<'_>) -> u32 {
        loop {
            let candidates = state.candidates();
            match candidates.len() {
                0 => return super::distinct(state.fixed()) as u32,
                1 => {
                    state.commit(&candidates[0]);
                }
                _ => {
                    return candidates
                        .iter()
                        .map(|c| {
                            let mut branch = state.clone();
                            branch.commit(c);
                            walk(branch)
                        })
                        .max()
                        .unwrap()
                }
            }
        }
    }
    Ok(walk(BufferState::new(graph, order, buffer)?))
}

/// Worst case over every arrival order and every random branch.
pub fn worst_case_colours(graph: &Graph, buffer: usize, order_limit: usize) -> Result<u32> {
    let n = graph.n();
    if n > order_limit {
        return Err(Error::TooLarge {
            what: "graph",
            size: n,
            limit: order_limit,
            hint: "exhaustive search visits n! arrival orders",
        });
    }
    if buffer == 0 {
        return Err(Error::InvalidParameter(
            "buffer size must be at least 1".into(),
        ));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut worst = 0;
    loop {
        let order = ArrivalOrder::new(perm.clone(), n)?;
        worst = worst.max(max_colours_over_branches(graph, &order, buffer)?);
        if !next_permutation(&mut perm) {
            return Ok(worst);
        }
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colourer::first_fit;
    use crate::graph::{alternate_order, crown_graph, kneser_graph};

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn crown_four_buffer_two() {
        let g = crown_graph(4).unwrap();
        let d = exact_outcome_distribution(&g, &alternate_order(4).unwrap(), 2, DEFAULT_BRANCH_CAP)
            .unwrap();
        let expected = BTreeMap::from([(2, ratio(1, 2)), (3, ratio(1, 4)), (4, ratio(1, 4))]);
        assert_eq!(d.pmf(), &expected);
        assert_eq!(d.mean(), ratio(11, 4));
        assert_eq!(d.to_string(), "2:1/2 3:1/4 4:1/4");
    }

    #[test]
    fn crown_buffer_four_is_point_mass() {
        for n in 2..7 {
            let g = crown_graph(n).unwrap();
            let d = exact_outcome_distribution(&g, &alternate_order(n).unwrap(), 4, 1000).unwrap();
            assert_eq!(d, OutcomeDistribution::point_mass(2));
        }
    }

    #[test]
    fn buffer_one_is_first_fit_point_mass() {
        let g = kneser_graph(5, 2).unwrap();
        let order = crate::graph::random_order(&g, 11);
        let ff = first_fit(&g, &order).unwrap().count() as u32;
        let d = exact_outcome_distribution(&g, &order, 1, 10).unwrap();
        assert_eq!(d, OutcomeDistribution::point_mass(ff));
    }

    #[test]
    fn branch_cap_is_enforced() {
        let g = crown_graph(6).unwrap();
        let err = exact_outcome_distribution(&g, &alternate_order(6).unwrap(), 2, 2).unwrap_err();
        assert!(matches!(
            err,
            Error::BranchCapExceeded {
                explored: 3,
                cap: 2
            }
        ));
    }

    #[test]
    fn worst_case_small_crown() {
        let g = crown_graph(3).unwrap();
        assert_eq!(worst_case_colours(&g, 1, DEFAULT_ORDER_LIMIT).unwrap(), 3);
        assert_eq!(worst_case_colours(&g, 6, DEFAULT_ORDER_LIMIT).unwrap(), 2);
        assert_eq!(
            worst_case_colours(&Graph::empty(4), 2, DEFAULT_ORDER_LIMIT).unwrap(),
            1
        );
        assert!(worst_case_colours(&crown_graph(5).unwrap(), 1, DEFAULT_ORDER_LIMIT).is_err());
    }

    #[test]
    fn permutations_enumerate_all() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }
}
