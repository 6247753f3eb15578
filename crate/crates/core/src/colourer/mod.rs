//! First Fit, buffered online colouring and exact branch enumeration.

mod buffered;
mod candidates;
mod exact;

pub use buffered::{buffered_colouring, buffered_colouring_traced, BufferState, StepRecord};
pub use candidates::{enumerate_candidates, CandidateColouring, MAX_BUFFER};
pub use exact::{
    exact_outcome_distribution, max_colours_over_branches, worst_case_colours, OutcomeDistribution,
    DEFAULT_BRANCH_CAP, DEFAULT_ORDER_LIMIT,
};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{ArrivalOrder, Graph};

/// A complete colouring: `colours[v]` is the positive colour of vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    colours: Vec<u32>,
    count: usize,
}

impl Colouring {
    pub fn new(colours: Vec<u32>) -> Self {
        let count = distinct(&colours);
        Colouring { colours, count }
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    /// Number of distinct colours.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_proper_for(&self, graph: &Graph) -> bool {
        self.colours.len() == graph.n()
            && self.colours.iter().all(|&c| c > 0)
            && graph.is_proper(&self.colours)
    }
}

fn distinct(colours: &[u32]) -> usize {
    colours.iter().collect::<BTreeSet<_>>().len()
}

/// Number of distinct colours in `colouring`.
pub fn colours_used(colouring: &Colouring) -> usize {
    distinct(&colouring.colours)
}

/// Greedy online colouring: each arrival takes the smallest colour missing
/// from its already coloured neighbours.
pub fn first_fit(graph: &Graph, order: &ArrivalOrder) -> Result<Colouring> {
    if order.len() != graph.n() {
        return Err(Error::InvalidOrder(format!(
            "order has {} vertices, graph has {}",
            order.len(),
            graph.n()
        )));
    }
    let mut colours = vec![0u32; graph.n()];
    // seen[c] == v + 1 marks colour c as taken around vertex v.
    let mut seen = vec![0usize; graph.max_degree() + 2];
    for &v in order.as_slice() {
        for &w in graph.neighbours(v) {
            let c = colours[w] as usize;
            if c != 0 {
                seen[c] = v + 1;
            }
        }
        colours[v] = (1..).find(|&c| seen[c as usize] != v + 1).unwrap();
    }
    Ok(Colouring::new(colours))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{alternate_order, crown_graph, linear_order};

    #[test]
    fn first_fit_on_crown() {
        let g = crown_graph(4).unwrap();
        assert_eq!(
            first_fit(&g, &alternate_order(4).unwrap()).unwrap().count(),
            4
        );
        let linear = first_fit(&g, &linear_order(4).unwrap()).unwrap();
        assert_eq!(linear.colours(), &[1, 1, 1, 1, 2, 2, 2, 2]);

        let g = crown_graph(6).unwrap();
        let c = first_fit(&g, &alternate_order(6).unwrap()).unwrap();
        assert_eq!(colours_used(&c), 6);
        assert!(c.is_proper_for(&g));
    }

    #[test]
    fn first_fit_edgeless() {
        let g = Graph::empty(5);
        let c = first_fit(&g, &ArrivalOrder::identity(5)).unwrap();
        assert_eq!(c.count(), 1);
    }

    #[test]
    fn first_fit_rejects_mismatched_order() {
        assert!(first_fit(&Graph::empty(3), &ArrivalOrder::identity(4)).is_err());
    }

    #[test]
    fn colours_used_counts_distinct_values() {
        assert_eq!(colours_used(&Colouring::new(vec![1, 2, 1])), 2);
        assert_eq!(colours_used(&Colouring::new(vec![])), 0);
    }
}
