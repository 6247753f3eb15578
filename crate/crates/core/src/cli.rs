//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or spec errors,
//! 3 branch cap exceeded, 4 I/O errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::colourer::{buffered_colouring, exact_outcome_distribution, DEFAULT_BRANCH_CAP};
use crate::error::Error;
use crate::graph::{random_order, ArrivalOrder, Graph};
use crate::rng::SeededRng;
use crate::sim::{
    crown_table, delta_scan, kneser_table, run_trials_with, Execution, GraphSpec, OrderPolicy,
    Table, TrialConfig, CROWN_TABLE_SIZES, DEFAULT_REPETITIONS, KNESER_TABLE_CELLS, TABLE_BUFFERS,
};
use crate::verify::{self, Suite};

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BRANCH_CAP: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "lookahead-colouring",
    version,
    about = "Online graph colouring with a lookahead buffer"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Colour one graph once and print the colouring.
    Colour {
        /// crown:<n>, kneser:<n>,<k> or file:<path>
        #[arg(long)]
        graph: GraphSpec,
        /// linear, alternate, random or a comma-separated 1-based list
        #[arg(long, default_value = "linear")]
        order: OrderPolicy,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print colours as letters A, B, C, ...
        #[arg(long)]
        letters: bool,
    },
    /// Repeat a colouring run and summarize the colour counts.
    Simulate {
        #[arg(long)]
        graph: GraphSpec,
        #[arg(long, default_value = "random")]
        order: OrderPolicy,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Run repetitions on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Print the exact distribution of the colour count over all random branches.
    Enumerate {
        #[arg(long)]
        graph: GraphSpec,
        #[arg(long)]
        order: OrderPolicy,
        #[arg(long, default_value_t = 2)]
        b: usize,
        #[arg(long, default_value_t = DEFAULT_BRANCH_CAP)]
        branch_cap: u64,
    },
    /// Reproduce the crown or Kneser table of mean colour counts.
    Tables {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Smallest buffer whose normalized gain over b=2 on K(n,k) exceeds delta.
    DeltaScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        b_max: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the exact checks and report pass/fail per check.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Crown,
    Kneser,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `out` and `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BranchCapExceeded { .. } => EXIT_BRANCH_CAP,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Colour {
            graph,
            order,
            b,
            seed,
            letters,
        } => colour(out, &graph, &order, b, seed, letters).map(|_| 0),
        Command::Simulate {
            graph,
            order,
            b,
            reps,
            seed,
            json,
            sequential,
        } => {
            let config = TrialConfig::new(graph, order, b)
                .repetitions(reps)
                .seed(seed);
            let report = run_trials_with(&config, execution(sequential))?;
            if json {
                serde_json::to_writer(&mut *out, &report).map_err(|e| Error::Io(e.into()))?;
                writeln!(out)?;
            } else {
                writeln!(
                    out,
                    "graph {} order {} b {} reps {} seed {}",
                    config.graph, config.order, b, reps, seed
                )?;
                writeln!(
                    out,
                    "mean {:.4} stderr {:.4}",
                    report.mean, report.std_error
                )?;
                writeln!(out, "min {} max {}", report.min, report.max)?;
                for (k, c) in &report.empirical_pmf {
                    writeln!(out, "{k}: {c}")?;
                }
            }
            Ok(0)
        }
        Command::Enumerate {
            graph,
            order,
            b,
            branch_cap,
        } => {
            let g = graph.build()?;
            let arrival = order.fixed_order(&graph, &g)?.ok_or_else(|| Error::Spec {
                spec: order.to_string(),
                message: "enumeration needs a fixed order".into(),
            })?;
            let d = exact_outcome_distribution(&g, &arrival, b, branch_cap)?;
            writeln!(out, "{d}, mean {}", d.mean())?;
            Ok(0)
        }
        Command::Tables {
            which,
            reps,
            seed,
            format,
            out: path,
            sequential,
        } => {
            let exec = execution(sequential);
            let table = match which {
                Which::Crown => crown_table(&CROWN_TABLE_SIZES, &TABLE_BUFFERS, reps, seed, exec)?,
                Which::Kneser => {
                    kneser_table(&KNESER_TABLE_CELLS, &TABLE_BUFFERS, reps, seed, exec)?
                }
            };
            match path {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    write_table(&table, format, &mut file)?;
                    file.flush()?;
                }
                None => write_table(&table, format, out)?,
            }
            Ok(0)
        }
        Command::DeltaScan {
            n,
            k,
            b_max,
            delta,
            reps,
            seed,
        } => {
            let scan = delta_scan(n, k, b_max, delta, reps, seed, Execution::default())?;
            for p in &scan.points {
                writeln!(out, "b={} mean={:.4} gap={:.5}", p.b, p.mean, p.gap)?;
            }
            match scan.smallest {
                Some(b) => writeln!(out, "smallest b: {b}")?,
                None => writeln!(out, "smallest b: none")?,
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let report = verify::run(suite)?;
            for check in &report.checks {
                writeln!(out, "{check}")?;
            }
            for note in &report.notes {
                writeln!(out, "note: {note}")?;
            }
            if report.passed() {
                writeln!(out, "all {} checks passed", report.checks.len())?;
                Ok(0)
            } else {
                let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
                writeln!(out, "failed: {}", failed.join("; "))?;
                Ok(EXIT_VERIFY_FAILED)
            }
        }
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn write_table(table: &Table, format: Format, out: &mut dyn Write) -> Result<(), Error> {
    match format {
        Format::Csv => table.write_csv(out),
        Format::Json => table.write_json_lines(out),
    }
}

fn colour_name(c: u32, letters: bool) -> String {
    match (letters, c) {
        (true, 1..=26) => char::from(b'A' + (c - 1) as u8).to_string(),
        _ => c.to_string(),
    }
}

fn colour(
    out: &mut dyn Write,
    spec: &GraphSpec,
    policy: &OrderPolicy,
    b: usize,
    seed: u64,
    letters: bool,
) -> Result<(), Error> {
    let graph: Graph = spec.build()?;
    let order: ArrivalOrder = match policy.fixed_order(spec, &graph)? {
        Some(order) => order,
        None => random_order(&graph, seed),
    };
    let colouring = buffered_colouring(&graph, &order, b, &mut SeededRng::new(seed))?;
    writeln!(out, "graph {spec} order {order} b {b} seed {seed}")?;
    writeln!(out, "arrival\tvertex\tlabel\tcolour")?;
    for (i, &v) in order.as_slice().iter().enumerate() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            i + 1,
            v + 1,
            graph.label(v).unwrap_or("-"),
            colour_name(colouring.colours()[v], letters)
        )?;
    }
    writeln!(out, "colours {}", colouring.count())?;
    Ok(())
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
