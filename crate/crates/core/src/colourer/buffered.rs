//! Online colouring with a FIFO lookahead buffer.

use super::candidates::{minimal_candidates, CandidateColouring, MAX_BUFFER};
use super::Colouring;
use crate::error::{Error, Result};
use crate::graph::{ArrivalOrder, Graph};
use crate::rng::RandomSource;

/// Progress of one buffered run: finalized colours, the queued vertices and
/// the position of the next arrival.
#[derive(Clone, Debug)]
pub struct BufferState<'a> {
    graph: &'a Graph,
    order: &'a [usize],
    capacity: usize,
    colours: Vec<u32>,
    max_colour: u32,
    queue: Vec<usize>,
    next: usize,
}

/// What happened when one head vertex was finalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub vertex: usize,
    pub colour: u32,
    /// Largest finalized colour before this step.
    pub max_before: u32,
    /// Number of tied minimal candidates the colour was drawn from.
    pub choices: usize,
}

impl<'a> BufferState<'a> {
    /// Starts a run: the first arrival is coloured 1 at once and the buffer
    /// is filled from the following arrivals.
    pub fn new(graph: &'a Graph, order: &'a ArrivalOrder, capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter(
                "buffer size must be at least 1".into(),
            ));
        }
        if capacity > MAX_BUFFER {
            return Err(Error::InvalidParameter(format!(
                "buffer size {capacity} exceeds the supported maximum {MAX_BUFFER}"
            )));
        }
        if order.len() != graph.n() {
            return Err(Error::InvalidOrder(format!(
                "order has {} vertices, graph has {}",
                order.len(),
                graph.n()
            )));
        }
        let mut state = BufferState {
            graph,
            order: order.as_slice(),
            capacity,
            colours: vec![0; graph.n()],
            max_colour: 0,
            queue: Vec::with_capacity(capacity),
            next: 0,
        };
        if let Some(&first) = state.order.first() {
            state.colours[first] = 1;
            state.max_colour = 1;
            state.next = 1;
        }
        state.refill();
        Ok(state)
    }

    fn refill(&mut self) {
        while self.queue.len() < self.capacity && self.next < self.order.len() {
            self.queue.push(self.order[self.next]);
            self.next += 1;
        }
    }

    pub fn is_done(&self) -> bool {
        self.queue.is_empty()
    }

    /// Finalized colours indexed by vertex, `0` for vertices not yet final.
    pub fn fixed(&self) -> &[u32] {
        &self.colours
    }

    pub fn queue(&self) -> &[usize] {
        &self.queue
    }

    pub fn max_colour(&self) -> u32 {
        self.max_colour
    }

    /// Minimal-key colourings of the current buffer. Empty once done.
    pub fn candidates(&self) -> Vec<CandidateColouring> {
        if self.queue.is_empty() {
            return Vec::new();
        }
        minimal_candidates(self.graph, &self.colours, self.max_colour, &self.queue)
    }

    /// Makes the head's colour from `candidate` final, drops the rest of the
    /// assignment and admits the next arrival.
    pub fn commit(&mut self, candidate: &CandidateColouring) -> StepRecord {
        debug_assert_eq!(candidate.assignment.len(), self.queue.len());
        let vertex = self.queue.remove(0);
        let colour = candidate.assignment[0];
        let record = StepRecord {
            vertex,
            colour,
            max_before: self.max_colour,
            choices: 0,
        };
        self.colours[vertex] = colour;
        self.max_colour = self.max_colour.max(colour);
        self.refill();
        record
    }

    /// Runs to completion, drawing each step's candidate with `rng`.
    pub fn run<R: RandomSource + ?Sized>(mut self, rng: &mut R) -> (Colouring, Vec<StepRecord>) {
        let mut trace = Vec::with_capacity(self.order.len());
        if let Some(&first) = self.order.first() {
            trace.push(StepRecord {
                vertex: first,
                colour: 1,
                max_before: 0,
                choices: 1,
            });
        }
        while !self.is_done() {
            let mut candidates = self.candidates();
            let r = candidates.len();
            let pick = candidates.swap_remove(rng.uniform_below(r));
            let mut record = self.commit(&pick);
            record.choices = r;
            trace.push(record);
        }
        (self.into_colouring(), trace)
    }

    pub fn into_colouring(self) -> Colouring {
        debug_assert!(self.is_done());
        Colouring::new(self.colours)
    }
}

/// Colours `graph` online in `order` with a lookahead buffer of size `buffer`.
///
/// At each step every minimal-key colouring of the buffer is enumerated, one
/// is drawn uniformly with `rng`, and only the head vertex keeps its colour.
pub fn buffered_colouring<R: RandomSource + ?Sized>(
    graph: &Graph,
    order: &ArrivalOrder,
    buffer: usize,
    rng: &mut R,
) -> Result<Colouring> {
    Ok(BufferState::new(graph, order, buffer)?.run(rng).0)
}

/// Like [`buffered_colouring`] but also returns one record per finalized vertex.
pub fn buffered_colouring_traced<R: RandomSource + ?Sized>(
    graph: &Graph,
    order: &ArrivalOrder,
    buffer: usize,
    rng: &mut R,
) -> Result<(Colouring, Vec<StepRecord>)> {
    Ok(BufferState::new(graph, order, buffer)?.run(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colourer::first_fit;
    use crate::graph::{alternate_order, crown_graph, kneser_graph};
    use crate::rng::SeededRng;

    #[test]
    fn buffer_one_matches_first_fit() {
        let g = kneser_graph(6, 2).unwrap();
        for seed in 0..20 {
            let order = crate::graph::random_order(&g, seed);
            let a = buffered_colouring(&g, &order, 1, &mut SeededRng::new(seed)).unwrap();
            assert_eq!(a, first_fit(&g, &order).unwrap());
        }
    }

    #[test]
    fn crown_alternate_buffer_four_uses_two() {
        for n in 2..8 {
            let g = crown_graph(n).unwrap();
            let order = alternate_order(n).unwrap();
            for seed in 0..10 {
                let c = buffered_colouring(&g, &order, 4, &mut SeededRng::new(seed)).unwrap();
                assert_eq!(c.count(), 2);
            }
        }
    }

    #[test]
    fn petersen_first_example() {
        let g = kneser_graph(5, 2).unwrap();
        let order = ArrivalOrder::from_one_based(&[8, 1, 5, 7, 6, 2, 10, 4, 3, 9], 10).unwrap();
        for seed in 0..20 {
            let c = buffered_colouring(&g, &order, 2, &mut SeededRng::new(seed)).unwrap();
            assert_eq!(c.count(), 3);
        }
        let c = buffered_colouring(&g, &order, 1, &mut SeededRng::new(0)).unwrap();
        assert_eq!(c.count(), 4);
    }

    #[test]
    fn small_graphs_drain_without_filling() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let order = ArrivalOrder::identity(2);
        let c = buffered_colouring(&g, &order, 5, &mut SeededRng::new(1)).unwrap();
        assert_eq!(c.colours(), &[1, 2]);

        let g = Graph::empty(0);
        let c =
            buffered_colouring(&g, &ArrivalOrder::identity(0), 2, &mut SeededRng::new(1)).unwrap();
        assert_eq!(c.count(), 0);
    }

    #[test]
    fn rejects_zero_buffer_and_wrong_order() {
        let g = Graph::empty(3);
        let mut rng = SeededRng::new(0);
        assert!(buffered_colouring(&g, &ArrivalOrder::identity(3), 0, &mut rng).is_err());
        assert!(buffered_colouring(&g, &ArrivalOrder::identity(2), 1, &mut rng).is_err());
    }

    #[test]
    fn trace_records_every_vertex() {
        let g = crown_graph(4).unwrap();
        let order = alternate_order(4).unwrap();
        let (c, trace) = buffered_colouring_traced(&g, &order, 2, &mut SeededRng::new(3)).unwrap();
        assert_eq!(trace.len(), 8);
        assert_eq!(trace[0].vertex, 0);
        assert_eq!(trace[1].choices, 2);
        for step in &trace {
            assert_eq!(c.colours()[step.vertex], step.colour);
        }
    }
}
