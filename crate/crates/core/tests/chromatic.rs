//! Cross-checks the solver-backed chromatic number against an independent
//! DSATUR backtracking search.

use lookahead_colouring::graph::{
    chromatic_number_exact, crown_graph, is_colourable, kneser_graph, Graph,
};
use lookahead_colouring::rng::{RandomSource, SeededRng};
use proptest::prelude::*;

fn dsatur_chromatic(graph: &Graph) -> u32 {
    if graph.n() == 0 {
        return 0;
    }
    (1..).find(|&k| dsatur_colourable(graph, k)).unwrap()
}

/// DSATUR branching with forward checking and new-colour symmetry breaking.
fn dsatur_colourable(graph: &Graph, k: u32) -> bool {
    let n = graph.n();
    if n == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    let k = k as usize;
    let mut search = Dsatur {
        graph,
        k,
        colours: vec![0; n],
        // forbidden[v * k + c] counts coloured neighbours of v with colour c + 1.
        forbidden: vec![0; n * k],
        saturation: vec![0; n],
        free_degree: (0..n).map(|v| graph.degree(v)).collect(),
    };
    search.solve(0, 0)
}

struct Dsatur<'g> {
    graph: &'g Graph,
    k: usize,
    colours: Vec<u32>,
    forbidden: Vec<u32>,
    saturation: Vec<usize>,
    // Number of uncoloured neighbours.
    free_degree: Vec<usize>,
}

impl Dsatur<'_> {
    fn solve(&mut self, coloured: usize, used: usize) -> bool {
        let n = self.graph.n();
        if coloured == n {
            return true;
        }
        let mut pick = usize::MAX;
        for v in 0..n {
            if self.colours[v] != 0 {
                continue;
            }
            if self.saturation[v] == self.k {
                return false;
            }
            if pick == usize::MAX
                || (self.saturation[v], self.free_degree[v])
                    > (self.saturation[pick], self.free_degree[pick])
            {
                pick = v;
            }
        }
        let v = pick;
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.forbidden[v * self.k + c] != 0 {
                continue;
            }
            self.assign(v, c);
            if self.solve(coloured + 1, used.max(c + 1)) {
                return true;
            }
            self.unassign(v, c);
        }
        false
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colours[v] = c as u32 + 1;
        for &w in self.graph.neighbours(v) {
            self.free_degree[w] -= 1;
            let slot = &mut self.forbidden[w * self.k + c];
            if *slot == 0 {
                self.saturation[w] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colours[v] = 0;
        for &w in self.graph.neighbours(v) {
            self.free_degree[w] += 1;
            let slot = &mut self.forbidden[w * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w] -= 1;
            }
        }
    }
}

fn random_graph(n: usize, density: usize, seed: u64) -> Graph {
    let mut rng = SeededRng::new(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.uniform_below(100) < density {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_agrees_with_dsatur(n in 0usize..=14, density in 0usize..=100, seed: u64) {
        let g = random_graph(n, density, seed);
        let chi = chromatic_number_exact(&g, 16).unwrap();
        prop_assert_eq!(chi, dsatur_chromatic(&g));
        prop_assert!(is_colourable(&g, chi));
        prop_assert!(chi == 0 || !is_colourable(&g, chi - 1));
    }
}

#[test]
fn known_families() {
    for n in 2..=8 {
        let g = crown_graph(n).unwrap();
        assert_eq!(chromatic_number_exact(&g, 16).unwrap(), 2);
    }
    for (n, k, chi) in [(5, 2, 3), (6, 2, 4), (7, 3, 3), (8, 3, 4), (7, 2, 5)] {
        let g = kneser_graph(n, k).unwrap();
        assert_eq!(
            chromatic_number_exact(&g, g.n()).unwrap(),
            chi,
            "K({n},{k})"
        );
        assert_eq!(dsatur_chromatic(&g), chi, "K({n},{k})");
    }
}
