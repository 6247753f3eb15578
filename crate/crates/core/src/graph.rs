//! Undirected simple graphs, the crown and Kneser families, arrival orders and
//! an exact chromatic-number search for small graphs.

use std::fmt;

use crate::error::{Error, Result};
use crate::rng::{RandomSource, SeededRng};

/// Default vertex limit for [`chromatic_number_exact`].
pub const DEFAULT_CHROMATIC_LIMIT: usize = 16;

/// Undirected simple graph on vertices `0..n`.
///
/// Neighbour lists are kept sorted for iteration; a dense bit matrix answers
/// adjacency queries in constant time. Memory is quadratic in `n`.
#[derive(Clone, Debug)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    matrix: Vec<u64>,
    words: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from an edge iterator. Duplicate edges are collapsed;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let words = n.div_ceil(64);
        let mut matrix = vec![0u64; n * words];
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
            }
            let bit = |a: usize, b: usize| (a * words + b / 64, 1u64 << (b % 64));
            let (w, m) = bit(u, v);
            if matrix[w] & m != 0 {
                continue;
            }
            matrix[w] |= m;
            let (w, m) = bit(v, u);
            matrix[w] |= m;
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            adjacency,
            matrix,
            words,
            labels: None,
        })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph::from_edges(n, std::iter::empty()).expect("no edges to validate")
    }

    /// Attaches display labels, one per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.words + v / 64] & (1u64 << (v % 64)) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    /// Edges as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// True when `colours` (indexed by vertex) gives distinct colours to the
    /// endpoints of every edge. Colour 0 means "uncoloured" and never clashes.
    pub fn is_proper(&self, colours: &[u32]) -> bool {
        self.edges()
            .all(|(u, v)| colours[u] == 0 || colours[u] != colours[v])
    }
}

/// Crown graph on `2n` vertices: `K_{n,n}` minus a perfect matching.
///
/// Index `i - 1` is `v_{1,i}` and index `n + i - 1` is `v_{2,i}`.
pub fn crown_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("crown graph needs n >= 1".into()));
    }
    let edges = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, n + j)));
    let labels = (1..=2)
        .flat_map(|side| (1..=n).map(move |i| format!("v{side},{i}")))
        .collect();
    Graph::from_edges(2 * n, edges)?.with_labels(labels)
}

/// All `k`-subsets of `{1..n}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(current.clone());
        // Rightmost position that can still advance.
        let Some(pos) = (0..k).rev().find(|&i| current[i] < n - (k - 1 - i)) else {
            return out;
        };
        current[pos] += 1;
        for i in pos + 1..k {
            current[i] = current[i - 1] + 1;
        }
    }
}

/// Kneser graph `K_{n,k}`: vertices are the `k`-subsets of `{1..n}` in
/// lexicographic order, adjacent when disjoint.
pub fn kneser_graph(n: usize, k: usize) -> Result<Graph> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "kneser graph needs n, k >= 1".into(),
        ));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "kneser graph needs k <= n (got n={n}, k={k})"
        )));
    }
    if n > 63 {
        return Err(Error::InvalidParameter(format!(
            "kneser graph ground set limited to 63 elements (got n={n})"
        )));
    }
    let subsets = k_subsets(n, k);
    let masks: Vec<u64> = subsets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &e| m | (1 << e)))
        .collect();
    let mut edges = Vec::new();
    for (a, &ma) in masks.iter().enumerate() {
        for (b, &mb) in masks.iter().enumerate().skip(a + 1) {
            if ma & mb == 0 {
                edges.push((a, b));
            }
        }
    }
    let labels = subsets
        .iter()
        .map(|s| {
            let items: Vec<String> = s.iter().map(usize::to_string).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    Graph::from_edges(subsets.len(), edges)?.with_labels(labels)
}

/// Parses the edge-list text format: the first significant line is the vertex
/// count, each further line two 0-based indices. Blank lines and lines
/// starting with `#` are skipped.
pub fn graph_from_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (first, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing vertex count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: first,
        message: format!("expected a vertex count, found `{header}`"),
    })?;

    let mut edges = Vec::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("`{s}` is not a vertex index"),
            })
        };
        let [a, b] = fields[..] else {
            return Err(Error::Parse {
                line,
                message: format!("expected two vertex indices, found {}", fields.len()),
            });
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                message: format!("vertex index out of range 0..{n}"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        edges.push((u, v));
    }
    Graph::from_edges(n, edges)
}

/// The online presentation sequence: a permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrivalOrder(Vec<usize>);

impl ArrivalOrder {
    /// Validates that `sequence` is a permutation of `0..n`.
    pub fn new(sequence: Vec<usize>, n: usize) -> Result<Self> {
        if sequence.len() != n {
            return Err(Error::InvalidOrder(format!(
                "length {} does not match vertex count {n}",
                sequence.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &sequence {
            if v >= n {
                return Err(Error::InvalidOrder(format!(
                    "vertex {v} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidOrder(format!("vertex {v} repeated")));
            }
        }
        Ok(ArrivalOrder(sequence))
    }

    /// Builds an order from 1-based vertex numbers.
    pub fn from_one_based(sequence: &[usize], n: usize) -> Result<Self> {
        let zero_based = sequence
            .iter()
            .map(|&v| {
                v.checked_sub(1)
                    .ok_or_else(|| Error::InvalidOrder("vertex numbers start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        ArrivalOrder::new(zero_based, n)
    }

    pub fn identity(n: usize) -> Self {
        ArrivalOrder((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// The order as 1-based vertex numbers.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Display for ArrivalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.to_one_based().iter().map(usize::to_string).collect();
        f.write_str(&items.join(","))
    }
}

/// `v_{1,1}, …, v_{1,n}, v_{2,1}, …, v_{2,n}` for `crown_graph(n)`.
pub fn linear_order(n: usize) -> Result<ArrivalOrder> {
    if n == 0 {
        return Err(Error::InvalidParameter("linear order needs n >= 1".into()));
    }
    Ok(ArrivalOrder::identity(2 * n))
}

/// `v_{1,1}, v_{2,1}, v_{1,2}, v_{2,2}, …` for `crown_graph(n)`.
pub fn alternate_order(n: usize) -> Result<ArrivalOrder> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "alternate order needs n >= 1".into(),
        ));
    }
    Ok(ArrivalOrder((0..n).flat_map(|i| [i, n + i]).collect()))
}

/// Uniform random permutation of the graph's vertices (Fisher–Yates).
pub fn random_order(graph: &Graph, seed: u64) -> ArrivalOrder {
    shuffled_order(graph.n(), &mut SeededRng::new(seed))
}

/// Fisher–Yates shuffle of `0..n` driven by `rng`.
pub fn shuffled_order<R: RandomSource + ?Sized>(n: usize, rng: &mut R) -> ArrivalOrder {
    let mut seq: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.uniform_below(i + 1);
        seq.swap(i, j);
    }
    ArrivalOrder(seq)
}

/// Exact chromatic number by backtracking, for graphs with at most
/// `vertex_limit` vertices.
pub fn chromatic_number_exact(graph: &Graph, vertex_limit: usize) -> Result<u32> {
    if graph.n() > vertex_limit {
        return Err(Error::TooLarge {
            what: "graph",
            size: graph.n(),
            limit: vertex_limit,
            hint: "use the analytical chromatic number for known families",
        });
    }
    Ok(chromatic_number(graph))
}

/// Exact chromatic number with no size guard.
pub(crate) fn chromatic_number(graph: &Graph) -> u32 {
    let n = graph.n();
    if n == 0 {
        return 0;
    }
    if graph.edge_count() == 0 {
        return 1;
    }
    // Start from a greedy colouring and prove each smaller count impossible
    // in turn; only the last query is unsatisfiable.
    let mut best = greedy_upper_bound(graph);
    while best > 1 && is_colourable(graph, best - 1) {
        best -= 1;
    }
    best
}

fn greedy_upper_bound(graph: &Graph) -> u32 {
    let mut colours = vec![0u32; graph.n()];
    let mut used = vec![usize::MAX; graph.n() + 2];
    for v in by_degree(graph) {
        for &w in graph.neighbours(v) {
            used[colours[w] as usize] = v;
        }
        colours[v] = (1..).find(|&c| used[c as usize] != v).unwrap();
    }
    colours.into_iter().max().unwrap_or(0)
}

fn by_degree(graph: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
    order
}

/// A clique found greedily in decreasing degree order.
fn greedy_clique(graph: &Graph) -> Vec<usize> {
    let mut clique: Vec<usize> = Vec::new();
    for v in by_degree(graph) {
        if clique.iter().all(|&u| graph.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique
}

/// Decides `k`-colourability with a SAT solver.
///
/// Variable `v * k + c + 1` states that vertex `v` takes colour `c`. Colours
/// are interchangeable, so the vertices of a greedy clique are pinned to
/// distinct colours up front.
pub fn is_colourable(graph: &Graph, k: u32) -> bool {
    let n = graph.n();
    let k = k as usize;
    if n == 0 || (k >= n && k > 0) {
        return true;
    }
    if k == 0 {
        return false;
    }
    let clique = greedy_clique(graph);
    if clique.len() > k {
        return false;
    }
    let var = |v: usize, c: usize| (v * k + c + 1) as i32;
    let mut solver: cadical::Solver = cadical::Solver::new();
    for v in 0..n {
        solver.add_clause((0..k).map(|c| var(v, c)));
    }
    for (u, v) in graph.edges() {
        for c in 0..k {
            solver.add_clause([-var(u, c), -var(v, c)]);
        }
    }
    for (c, &v) in clique.iter().enumerate() {
        solver.add_clause([var(v, c)]);
    }
    let satisfiable = solver.solve().expect("solver runs without limits");
    if satisfiable {
        let colours: Vec<u32> = (0..n)
            .map(|v| {
                let c = (0..k).find(|&c| solver.value(var(v, c)) == Some(true));
                c.expect("every vertex has a colour") as u32 + 1
            })
            .collect();
        assert!(
            graph.is_proper(&colours),
            "solver returned an improper colouring"
        );
    }
    satisfiable
}
