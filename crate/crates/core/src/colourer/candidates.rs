//! Minimal-key colourings of the lookahead buffer.
//!
//! A candidate assigns a colour to every queued vertex so that the buffer is
//! properly coloured together with the already fixed vertices. Its key is the
//! multiset of those colours sorted largest first; only candidates whose key
//! is lexicographically minimal survive. The search first finds the smallest
//! feasible maximum colour `K` (the key's leading entry), then enumerates every
//! proper assignment bounded by `K` and keeps the minimal keys.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// One proper colouring of the buffer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateColouring {
    /// Colour per queued vertex, in queue order.
    pub assignment: Vec<u32>,
    /// `assignment` sorted in descending order.
    pub key: Vec<u32>,
}

impl CandidateColouring {
    pub fn new(assignment: Vec<u32>) -> Self {
        let mut key = assignment.clone();
        key.sort_unstable_by(|a, b| b.cmp(a));
        CandidateColouring { assignment, key }
    }
}

/// Enumerates the minimal-key candidates for `queue` given the fixed partial
/// colouring `fixed` (indexed by vertex, `0` = not yet coloured).
///
/// Colours are drawn from `1..=C_max + queue.len()`. The result is non-empty
/// and sorted lexicographically by assignment.
pub fn enumerate_candidates(
    graph: &Graph,
    fixed: &[u32],
    queue: &[usize],
) -> Result<Vec<CandidateColouring>> {
    if fixed.len() != graph.n() {
        return Err(Error::InvalidParameter(format!(
            "fixed colouring covers {} vertices, graph has {}",
            fixed.len(),
            graph.n()
        )));
    }
    if queue.is_empty() {
        return Err(Error::InvalidParameter("queue must be non-empty".into()));
    }
    if queue.len() > MAX_BUFFER {
        return Err(Error::InvalidParameter(format!(
            "buffer larger than {MAX_BUFFER} is not supported"
        )));
    }
    for (i, &v) in queue.iter().enumerate() {
        if v >= graph.n() {
            return Err(Error::InvalidParameter(format!(
                "queued vertex {v} out of range"
            )));
        }
        if fixed[v] != 0 {
            return Err(Error::InvalidParameter(format!(
                "queued vertex {v} is already fixed"
            )));
        }
        if queue[..i].contains(&v) {
            return Err(Error::InvalidParameter(format!("vertex {v} queued twice")));
        }
    }
    if let Some((u, v)) = graph
        .edges()
        .find(|&(u, v)| fixed[u] != 0 && fixed[u] == fixed[v])
    {
        return Err(Error::ImproperColouring {
            u,
            v,
            colour: fixed[u],
        });
    }
    let max_fixed = fixed.iter().copied().max().unwrap_or(0);
    Ok(minimal_candidates(graph, fixed, max_fixed, queue))
}

/// Largest supported buffer; queue adjacency is packed into a `u64`.
pub const MAX_BUFFER: usize = 64;

/// Unchecked core of [`enumerate_candidates`].
pub(crate) fn minimal_candidates(
    graph: &Graph,
    fixed: &[u32],
    max_fixed: u32,
    queue: &[usize],
) -> Vec<CandidateColouring> {
    let search = BufferSearch::new(graph, fixed, max_fixed, queue);
    let bound = search.minimal_max_colour();
    search.minimal_under(bound)
}

struct BufferSearch {
    len: usize,
    universe: u32,
    words: usize,
    // blocked[i * words ..] is a bitset over colours 0..=universe for queue slot i.
    blocked: Vec<u64>,
    // Bit j of neighbours[i] is set when queue slots i and j are adjacent.
    neighbours: Vec<u64>,
}

impl BufferSearch {
    fn new(graph: &Graph, fixed: &[u32], max_fixed: u32, queue: &[usize]) -> Self {
        let len = queue.len();
        let universe = max_fixed + len as u32;
        let words = (universe as usize + 1).div_ceil(64);
        let mut blocked = vec![0u64; len * words];
        let mut neighbours = vec![0u64; len];
        for (i, &v) in queue.iter().enumerate() {
            let row = &mut blocked[i * words..(i + 1) * words];
            for &w in graph.neighbours(v) {
                let c = fixed[w] as usize;
                if c != 0 {
                    row[c / 64] |= 1 << (c % 64);
                }
            }
            for (j, &u) in queue.iter().enumerate() {
                if graph.has_edge(v, u) {
                    neighbours[i] |= 1 << j;
                }
            }
        }
        BufferSearch {
            len,
            universe,
            words,
            blocked,
            neighbours,
        }
    }

    #[inline]
    fn is_blocked(&self, slot: usize, colour: u32) -> bool {
        let c = colour as usize;
        self.blocked[slot * self.words + c / 64] & (1 << (c % 64)) != 0
    }

    fn first_free(&self, slot: usize) -> u32 {
        (1..=self.universe)
            .find(|&c| !self.is_blocked(slot, c))
            .expect("universe leaves a free colour for every slot")
    }

    /// Smallest `K` such that the buffer has a proper assignment within `1..=K`.
    fn minimal_max_colour(&self) -> u32 {
        let start = (0..self.len).map(|i| self.first_free(i)).max().unwrap_or(1);
        let mut assignment = vec![0u32; self.len];
        (start..=self.universe)
            .find(|&k| self.feasible(0, k, &mut assignment))
            .expect("a first-fit sweep stays within the universe")
    }

    fn feasible(&self, slot: usize, bound: u32, assignment: &mut [u32]) -> bool {
        if slot == self.len {
            return true;
        }
        for c in 1..=bound {
            if self.allowed(slot, c, assignment) {
                assignment[slot] = c;
                if self.feasible(slot + 1, bound, assignment) {
                    return true;
                }
            }
        }
        false
    }

    #[inline]
    fn allowed(&self, slot: usize, colour: u32, assignment: &[u32]) -> bool {
        if self.is_blocked(slot, colour) {
            return false;
        }
        let mut earlier = self.neighbours[slot] & ((1u64 << slot) - 1);
        while earlier != 0 {
            let j = earlier.trailing_zeros() as usize;
            if assignment[j] == colour {
                return false;
            }
            earlier &= earlier - 1;
        }
        true
    }

    fn minimal_under(&self, bound: u32) -> Vec<CandidateColouring> {
        let mut best: Option<Vec<u32>> = None;
        let mut found = Vec::new();
        let mut assignment = vec![0u32; self.len];
        self.collect(0, bound, &mut assignment, &mut best, &mut found);
        found
    }

    fn collect(
        &self,
        slot: usize,
        bound: u32,
        assignment: &mut [u32],
        best: &mut Option<Vec<u32>>,
        found: &mut Vec<CandidateColouring>,
    ) {
        if slot == self.len {
            let candidate = CandidateColouring::new(assignment.to_vec());
            match best.as_ref().map(|b| candidate.key.cmp(b)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => found.push(candidate),
                _ => {
                    *best = Some(candidate.key.clone());
                    found.clear();
                    found.push(candidate);
                }
            }
            return;
        }
        for c in 1..=bound {
            if self.allowed(slot, c, assignment) {
                assignment[slot] = c;
                self.collect(slot + 1, bound, assignment, best, found);
            }
        }
    }
}
