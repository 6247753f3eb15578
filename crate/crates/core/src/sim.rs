//! Seeded Monte Carlo harness.
//!
//! Repetition `i` of a run with master seed `s` shuffles its arrival order
//! with `derive_seed(s, i, 0)` and draws its tie-breaks with
//! `derive_seed(s, i, 1)` (see [`crate::rng::derive_seed`]). Results are
//! aggregated as integer counts, so a report does not depend on how the
//! repetitions were scheduled.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::colourer::BufferState;
use crate::error::{Error, Result};
use crate::graph::{
    alternate_order, crown_graph, graph_from_edge_list, kneser_graph, linear_order, shuffled_order,
    ArrivalOrder, Graph,
};
use crate::rng::{derive_seed, SeededRng};

pub const DEFAULT_REPETITIONS: usize = 20_000;
pub const CROWN_TABLE_SIZES: [usize; 6] = [4, 6, 10, 20, 50, 100];
pub const TABLE_BUFFERS: [usize; 2] = [1, 2];
/// The `(n, k)` cells of the Kneser table.
pub const KNESER_TABLE_CELLS: [(usize, usize); 12] = [
    (5, 2),
    (6, 2),
    (7, 2),
    (8, 2),
    (9, 2),
    (10, 2),
    (7, 3),
    (8, 3),
    (9, 3),
    (10, 3),
    (9, 4),
    (10, 4),
];

/// Which graph to colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Crown(usize),
    Kneser(usize, usize),
    EdgeList(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Crown(n) => crown_graph(*n),
            GraphSpec::Kneser(n, k) => kneser_graph(*n, *k),
            GraphSpec::EdgeList(path) => graph_from_edge_list(&std::fs::read_to_string(path)?),
        }
    }
}

fn spec_error(spec: &str, message: impl Into<String>) -> Error {
    Error::Spec {
        spec: spec.to_owned(),
        message: message.into(),
    }
}

fn parse_count(spec: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| spec_error(spec, format!("`{s}` is not a non-negative integer")))
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| spec_error(s, "expected crown:<n>, kneser:<n>,<k> or file:<path>"))?;
        match kind {
            "crown" => Ok(GraphSpec::Crown(parse_count(s, rest)?)),
            "kneser" => {
                let (n, k) = rest
                    .split_once(',')
                    .ok_or_else(|| spec_error(s, "expected kneser:<n>,<k>"))?;
                Ok(GraphSpec::Kneser(parse_count(s, n)?, parse_count(s, k)?))
            }
            "file" if !rest.is_empty() => Ok(GraphSpec::EdgeList(PathBuf::from(rest))),
            _ => Err(spec_error(
                s,
                "expected crown:<n>, kneser:<n>,<k> or file:<path>",
            )),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Crown(n) => write!(f, "crown:{n}"),
            GraphSpec::Kneser(n, k) => write!(f, "kneser:{n},{k}"),
            GraphSpec::EdgeList(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// How arrivals are ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderPolicy {
    /// Fresh uniform permutation per repetition.
    Random,
    /// Vertex index order (for crown graphs, all of one side first).
    Linear,
    /// Crown graphs only: the two sides interleaved.
    Alternate,
    /// Explicit 1-based vertex numbers.
    Explicit(Vec<usize>),
}

impl OrderPolicy {
    /// The order shared by every repetition, or `None` for [`OrderPolicy::Random`].
    pub fn fixed_order(&self, spec: &GraphSpec, graph: &Graph) -> Result<Option<ArrivalOrder>> {
        Ok(match self {
            OrderPolicy::Random => None,
            OrderPolicy::Linear => match spec {
                GraphSpec::Crown(n) => Some(linear_order(*n)?),
                _ => Some(ArrivalOrder::identity(graph.n())),
            },
            OrderPolicy::Alternate => match spec {
                GraphSpec::Crown(n) => Some(alternate_order(*n)?),
                other => {
                    return Err(spec_error(
                        &other.to_string(),
                        "alternate order is defined for crown graphs only",
                    ))
                }
            },
            OrderPolicy::Explicit(seq) => Some(ArrivalOrder::from_one_based(seq, graph.n())?),
        })
    }
}

impl FromStr for OrderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(OrderPolicy::Random),
            "linear" => Ok(OrderPolicy::Linear),
            "alternate" => Ok(OrderPolicy::Alternate),
            list => list
                .split(',')
                .map(|v| parse_count(s, v))
                .collect::<Result<Vec<_>>>()
                .map(OrderPolicy::Explicit)
                .map_err(|_| spec_error(s, "expected linear, alternate, random or a 1-based list")),
        }
    }
}

impl fmt::Display for OrderPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderPolicy::Random => f.write_str("random"),
            OrderPolicy::Linear => f.write_str("linear"),
            OrderPolicy::Alternate => f.write_str("alternate"),
            OrderPolicy::Explicit(seq) => {
                let items: Vec<String> = seq.iter().map(usize::to_string).collect();
                f.write_str(&items.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub graph: GraphSpec,
    pub order: OrderPolicy,
    pub buffer: usize,
    pub repetitions: usize,
    pub master_seed: u64,
}

impl TrialConfig {
    pub fn new(graph: GraphSpec, order: OrderPolicy, buffer: usize) -> Self {
        TrialConfig {
            graph,
            order,
            buffer,
            repetitions: DEFAULT_REPETITIONS,
            master_seed: 0,
        }
    }

    pub fn repetitions(mut self, repetitions: usize) -> Self {
        self.repetitions = repetitions;
        self
    }

    pub fn seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }
}

/// How repetitions are scheduled. Both modes produce identical reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon work-stealing over repetitions; sequential when the `parallel`
    /// feature is disabled.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub mean: f64,
    pub std_error: f64,
    pub empirical_pmf: BTreeMap<u32, u64>,
    pub min: u32,
    pub max: u32,
    pub repetitions: usize,
    pub master_seed: u64,
}

impl SimulationReport {
    /// Empirical frequencies normalized to probabilities.
    pub fn frequencies(&self) -> BTreeMap<u32, f64> {
        self.empirical_pmf
            .iter()
            .map(|(&k, &c)| (k, c as f64 / self.repetitions as f64))
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
struct Tally(BTreeMap<u32, u64>);

impl Tally {
    fn add(mut self, count: u32) -> Self {
        *self.0.entry(count).or_insert(0) += 1;
        self
    }

    #[cfg(feature = "parallel")]
    fn merge(mut self, other: Tally) -> Self {
        for (k, c) in other.0 {
            *self.0.entry(k).or_insert(0) += c;
        }
        self
    }
}

/// Runs `config.repetitions` independent colourings and aggregates the
/// colour counts.
pub fn run_trials(config: &TrialConfig) -> Result<SimulationReport> {
    run_trials_with(config, Execution::default())
}

pub fn run_trials_with(config: &TrialConfig, execution: Execution) -> Result<SimulationReport> {
    if config.repetitions == 0 {
        return Err(Error::InvalidParameter(
            "repetitions must be at least 1".into(),
        ));
    }
    let graph = config.graph.build()?;
    let fixed = config.order.fixed_order(&config.graph, &graph)?;
    // Surfaces buffer-size errors before any work is scheduled.
    let probe = fixed
        .clone()
        .unwrap_or_else(|| ArrivalOrder::identity(graph.n()));
    BufferState::new(&graph, &probe, config.buffer)?;

    let one = |i: usize| -> u32 {
        let i = i as u64;
        let order = match &fixed {
            Some(order) => order.clone(),
            None => shuffled_order(
                graph.n(),
                &mut SeededRng::new(derive_seed(config.master_seed, i, 0)),
            ),
        };
        let mut rng = SeededRng::new(derive_seed(config.master_seed, i, 1));
        let state = BufferState::new(&graph, &order, config.buffer).expect("validated above");
        state.run(&mut rng).0.count() as u32
    };

    let tally = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..config.repetitions)
                .into_par_iter()
                .fold(Tally::default, |t, i| t.add(one(i)))
                .reduce(Tally::default, Tally::merge)
        }
        _ => (0..config.repetitions).fold(Tally::default(), |t, i| t.add(one(i))),
    };
    Ok(summarize(tally.0, config))
}

fn summarize(pmf: BTreeMap<u32, u64>, config: &TrialConfig) -> SimulationReport {
    let reps = config.repetitions as f64;
    let (sum, sum_sq) = pmf.iter().fold((0u128, 0u128), |(s, q), (&k, &c)| {
        let k = k as u128;
        (s + k * c as u128, q + k * k * c as u128)
    });
    let mean = sum as f64 / reps;
    let std_error = if config.repetitions > 1 {
        let var = (sum_sq as f64 - reps * mean * mean) / (reps - 1.0);
        (var.max(0.0) / reps).sqrt()
    } else {
        0.0
    };
    SimulationReport {
        mean,
        std_error,
        min: *pmf.keys().next().unwrap(),
        max: *pmf.keys().next_back().unwrap(),
        empirical_pmf: pmf,
        repetitions: config.repetitions,
        master_seed: config.master_seed,
    }
}

/// One cell of a reproduced table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub b: usize,
    pub mean: f64,
    pub stderr: f64,
    pub min: u32,
    pub max: u32,
    pub reps: usize,
    pub seed: u64,
}

impl TableRow {
    fn new(n: usize, k: Option<usize>, b: usize, report: &SimulationReport) -> Self {
        TableRow {
            n,
            k,
            b,
            mean: report.mean,
            stderr: report.std_error,
            min: report.min,
            max: report.max,
            reps: report.repetitions,
            seed: report.master_seed,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn get(&self, n: usize, k: Option<usize>, b: usize) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.n == n && r.k == k && r.b == b)
    }

    fn has_k(&self) -> bool {
        self.rows.iter().any(|r| r.k.is_some())
    }

    /// CSV with header `n[,k],b,mean,stderr,min,max,reps,seed`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let with_k = self.has_k();
        let mut header = vec!["n"];
        if with_k {
            header.push("k");
        }
        header.extend(["b", "mean", "stderr", "min", "max", "reps", "seed"]);
        w.write_record(&header).map_err(csv_error)?;
        for r in &self.rows {
            let mut record = vec![r.n.to_string()];
            if with_k {
                record.push(r.k.map(|k| k.to_string()).unwrap_or_default());
            }
            record.extend([
                r.b.to_string(),
                format!("{:.4}", r.mean),
                format!("{:.4}", r.stderr),
                r.min.to_string(),
                r.max.to_string(),
                r.reps.to_string(),
                r.seed.to_string(),
            ]);
            w.write_record(&record).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    /// One JSON object per line, one line per cell.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.rows {
            serde_json::to_writer(&mut out, r).map_err(|e| Error::Io(e.into()))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.into())
}

/// Means over random orders of crown graphs for every `n × b` pair.
pub fn crown_table(
    n_list: &[usize],
    b_list: &[usize],
    reps: usize,
    seed: u64,
    execution: Execution,
) -> Result<Table> {
    let mut rows = Vec::new();
    for &n in n_list {
        for &b in b_list {
            let config = TrialConfig::new(GraphSpec::Crown(n), OrderPolicy::Random, b)
                .repetitions(reps)
                .seed(seed);
            rows.push(TableRow::new(
                n,
                None,
                b,
                &run_trials_with(&config, execution)?,
            ));
        }
    }
    Ok(Table { rows })
}

/// Means over random orders of Kneser graphs for every `(n, k) × b` pair.
pub fn kneser_table(
    nk_list: &[(usize, usize)],
    b_list: &[usize],
    reps: usize,
    seed: u64,
    execution: Execution,
) -> Result<Table> {
    let mut rows = Vec::new();
    for &(n, k) in nk_list {
        for &b in b_list {
            let config = TrialConfig::new(GraphSpec::Kneser(n, k), OrderPolicy::Random, b)
                .repetitions(reps)
                .seed(seed);
            rows.push(TableRow::new(
                n,
                Some(k),
                b,
                &run_trials_with(&config, execution)?,
            ));
        }
    }
    Ok(Table { rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaPoint {
    pub b: usize,
    pub mean: f64,
    /// `(E C^(2) - E C^(b)) / (n - 2k + 2)`.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaScan {
    pub smallest: Option<usize>,
    pub points: Vec<DeltaPoint>,
}

/// Smallest buffer `b` in `2..=b_max` whose normalized improvement over
/// `b = 2` on `K_{n,k}` exceeds `delta`. Every `b` shares the master seed, so
/// all buffer sizes see the same arrival orders.
pub fn delta_scan(
    n: usize,
    k: usize,
    b_max: usize,
    delta: f64,
    reps: usize,
    seed: u64,
    execution: Execution,
) -> Result<DeltaScan> {
    if k == 0 || n < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "delta scan needs n >= 2k (got n={n}, k={k})"
        )));
    }
    if b_max < 2 {
        return Err(Error::InvalidParameter(
            "delta scan needs b_max >= 2".into(),
        ));
    }
    let chi = (n - 2 * k + 2) as f64;
    let mut points = Vec::new();
    let mut baseline = 0.0;
    for b in 2..=b_max {
        let config = TrialConfig::new(GraphSpec::Kneser(n, k), OrderPolicy::Random, b)
            .repetitions(reps)
            .seed(seed);
        let mean = run_trials_with(&config, execution)?.mean;
        if b == 2 {
            baseline = mean;
        }
        points.push(DeltaPoint {
            b,
            mean,
            gap: (baseline - mean) / chi,
        });
    }
    let smallest = points.iter().find(|p| p.gap > delta).map(|p| p.b);
    Ok(DeltaScan { smallest, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_spec_parsing() {
        assert_eq!("crown:4".parse::<GraphSpec>().unwrap(), GraphSpec::Crown(4));
        assert_eq!(
            "kneser:5,2".parse::<GraphSpec>().unwrap(),
            GraphSpec::Kneser(5, 2)
        );
        assert_eq!(
            "file:g.txt".parse::<GraphSpec>().unwrap(),
            GraphSpec::EdgeList("g.txt".into())
        );
        for bad in ["crown", "crown:x", "kneser:5", "petersen:1", "file:"] {
            assert!(bad.parse::<GraphSpec>().is_err(), "{bad}");
        }
        assert_eq!(GraphSpec::Kneser(7, 3).to_string(), "kneser:7,3");
    }

    #[test]
    fn order_policy_parsing() {
        assert_eq!(
            "random".parse::<OrderPolicy>().unwrap(),
            OrderPolicy::Random
        );
        assert_eq!(
            "8,1,5".parse::<OrderPolicy>().unwrap(),
            OrderPolicy::Explicit(vec![8, 1, 5])
        );
        assert!("sideways".parse::<OrderPolicy>().is_err());
        assert_eq!(OrderPolicy::Explicit(vec![2, 1]).to_string(), "2,1");
    }

    #[test]
    fn alternate_needs_crown() {
        let spec = GraphSpec::Kneser(5, 2);
        let g = spec.build().unwrap();
        assert!(OrderPolicy::Alternate.fixed_order(&spec, &g).is_err());
        assert_eq!(
            OrderPolicy::Linear.fixed_order(&spec, &g).unwrap(),
            Some(ArrivalOrder::identity(10))
        );
    }

    #[test]
    fn single_repetition_is_point_mass() {
        let config = TrialConfig::new(GraphSpec::Kneser(6, 2), OrderPolicy::Random, 2)
            .repetitions(1)
            .seed(3);
        let r = run_trials(&config).unwrap();
        assert_eq!(r.empirical_pmf.len(), 1);
        assert_eq!(r.min, r.max);
        assert_eq!(r.mean, r.min as f64);
        assert_eq!(r.std_error, 0.0);
    }

    #[test]
    fn report_invariants() {
        let config = TrialConfig::new(GraphSpec::Crown(6), OrderPolicy::Random, 2)
            .repetitions(500)
            .seed(1);
        let r = run_trials(&config).unwrap();
        assert_eq!(r.empirical_pmf.values().sum::<u64>(), 500);
        assert!(r.min as f64 <= r.mean && r.mean <= r.max as f64);
        assert!(r.std_error > 0.0);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let config = TrialConfig::new(GraphSpec::Kneser(7, 2), OrderPolicy::Random, 2)
            .repetitions(300)
            .seed(99);
        assert_eq!(
            run_trials_with(&config, Execution::Sequential).unwrap(),
            run_trials_with(&config, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let base = TrialConfig::new(GraphSpec::Crown(3), OrderPolicy::Random, 1);
        assert!(run_trials(&base.clone().repetitions(0)).is_err());
        let mut zero_b = base.clone();
        zero_b.buffer = 0;
        assert!(run_trials(&zero_b).is_err());
        let bad_graph = TrialConfig::new(GraphSpec::Crown(0), OrderPolicy::Random, 1);
        assert!(run_trials(&bad_graph).is_err());
        let bad_order = TrialConfig::new(GraphSpec::Crown(2), OrderPolicy::Explicit(vec![1, 2]), 1);
        assert!(run_trials(&bad_order).is_err());
    }

    #[test]
    fn csv_and_json_shapes() {
        let table = crown_table(&[4], &[1, 2], 50, 5, Execution::Sequential).unwrap();
        let mut csv = Vec::new();
        table.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,b,mean,stderr,min,max,reps,seed");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("4,1,"));

        let table = kneser_table(&[(5, 2)], &[2], 20, 5, Execution::Sequential).unwrap();
        let mut csv = Vec::new();
        table.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv)
            .unwrap()
            .starts_with("n,k,b,mean,stderr,min,max,reps,seed\n5,2,2,"));

        let mut json = Vec::new();
        table.write_json_lines(&mut json).unwrap();
        let json = String::from_utf8(json).unwrap();
        assert_eq!(json.lines().count(), 1);
        let v: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
        assert_eq!(v["k"], 2);
        assert_eq!(v["reps"], 20);
    }

    #[test]
    fn delta_scan_edges() {
        let zero = delta_scan(5, 2, 3, 0.0, 200, 1, Execution::Sequential).unwrap();
        assert_eq!(zero.points[0].gap, 0.0);
        assert_ne!(zero.smallest, Some(2));

        let large = delta_scan(5, 2, 3, 10.0, 200, 1, Execution::Sequential).unwrap();
        assert_eq!(large.smallest, None);
        assert_eq!(large.points.len(), 2);

        assert!(delta_scan(5, 3, 3, 0.0, 10, 1, Execution::Sequential).is_err());
        assert!(delta_scan(5, 2, 1, 0.0, 10, 1, Execution::Sequential).is_err());
    }
}
