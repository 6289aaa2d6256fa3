//! `nakayama`: tensor products, decompositions and cells of bimodules over
//! the radical-square-zero cyclic Nakayama algebra.

mod graph;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nakayama::cells::{
    find_left_witness, find_right_witness, find_two_sided_witness, left_cell_key, partition_report, right_cell_key,
    two_sided_cell, Budget, TwoSidedCellId,
};
use nakayama::certify::{run_checks, CheckConfig, SweepConfig};
use nakayama::decompose::{decompose, decompose_multiset};
use nakayama::realize::realize;
use nakayama::tensor_oracle::{tensor_capped, DEFAULT_CAP};
use nakayama::tensor_rules::symbolic_tensor;
use nakayama::{AlgebraContext, ConcreteBimodule, Descriptor, Error, Q};

const EXIT_USAGE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "nakayama", version, about = "Bimodules over the radical-square-zero cyclic Nakayama algebra Q_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Symbolic,
    Oracle,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessSide {
    Left,
    Right,
    Two,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose X ⊗_A Y.
    Tensor {
        #[arg(long)]
        n: usize,
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value = "symbolic")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Refuse oracle products above this dimension.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Two-sided cell and left/right cell keys of a descriptor.
    Cell {
        #[arg(long)]
        n: usize,
        descriptor: String,
    },
    /// Run the certification checks and report.
    Check {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        max_valleys: usize,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        #[arg(long, value_delimiter = ',', default_values = ["1", "2"])]
        lambdas: Vec<String>,
        /// Largest k for which J(k) is enumerated in the cell checks.
        #[arg(long, default_value_t = 3)]
        max_cell_valleys: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Worker threads; the report does not depend on this.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the JSON report here; otherwise it goes to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Action graph of a descriptor.
    Graph {
        #[arg(long)]
        n: usize,
        descriptor: String,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Cell partition table for finite cells.
    Cells {
        #[arg(long)]
        n: usize,
        /// Cells to list, e.g. Split,J(0),J(1); default Split and J(0..=3).
        #[arg(long, value_delimiter = ',')]
        cell: Vec<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Search for Z with X a summand of Z ⊗ Y (left), Y ⊗ Z (right) or Z ⊗ Y ⊗ Z' (two).
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "left")]
        side: WitnessSide,
        x: String,
        y: String,
    },
    /// Realize a descriptor as a torus-quiver representation (JSON).
    Realize {
        #[arg(long)]
        n: usize,
        descriptor: String,
    },
    /// Decompose a bimodule given as JSON (as printed by `realize`).
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Mismatch(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = Result<u8, Failure>;

fn context(n: usize) -> Result<AlgebraContext, Failure> {
    Ok(AlgebraContext::new(n)?)
}

fn parse(s: &str, ctx: &AlgebraContext) -> Result<Descriptor, Failure> {
    Descriptor::parse(s, ctx).map_err(|e| Failure::Usage(format!("{s:?}: {e}")))
}

fn cmd_tensor(n: usize, lhs: &str, rhs: &str, mode: Mode, seed: u64, cap: usize) -> Run {
    let ctx = context(n)?;
    let (x, y) = (parse(lhs, &ctx)?, parse(rhs, &ctx)?);
    let symbolic = match mode {
        Mode::Oracle => None,
        _ => Some(symbolic_tensor(&x, &y, &ctx)?),
    };
    let oracle = match mode {
        Mode::Symbolic => None,
        _ => {
            let (rx, ry) = (realize(&x, &ctx), realize(&y, &ctx));
            let t = tensor_capped(&rx, &ry, cap)?;
            Some(decompose_multiset(&t, seed)?)
        }
    };
    match (symbolic, oracle) {
        (Some(s), None) => println!("{s}"),
        (None, Some(o)) => println!("{o}"),
        (Some(s), Some(o)) if s == o => {
            println!("{s}");
            println!("MATCH");
        }
        (Some(s), Some(o)) => {
            println!("symbolic: {s}");
            println!("oracle:   {o}");
            println!("MISMATCH");
            return Err(Failure::Mismatch(format!("{x} ⊗ {y}")));
        }
        (None, None) => unreachable!(),
    }
    Ok(0)
}

fn cmd_cell(n: usize, s: &str) -> Run {
    let ctx = context(n)?;
    let d = parse(s, &ctx)?;
    println!("{}; left={}; right={}", two_sided_cell(&d), left_cell_key(&d), right_cell_key(&d));
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    ns: Vec<usize>,
    max_valleys: usize,
    max_m: usize,
    lambdas: &[String],
    max_cell_valleys: usize,
    seed: u64,
    cap: usize,
    jobs: Option<usize>,
    report: Option<PathBuf>,
    inject_fault: bool,
) -> Run {
    if ns.contains(&0) || max_m == 0 {
        return Err(Failure::Usage("n and max-m must be positive".into()));
    }
    let lambdas = lambdas
        .iter()
        .map(|l| match l.parse::<Q>() {
            Ok(q) if !q.is_zero() => Ok(q),
            _ => Err(Failure::Usage(format!("bad eigenvalue {l:?}"))),
        })
        .collect::<Result<Vec<Q>, _>>()?;
    let cfg = CheckConfig {
        sweep: SweepConfig {
            ns,
            max_valleys,
            max_m,
            lambdas,
            seed,
            cap,
        },
        max_cell_valleys,
        inject_fault,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let r = pool.install(|| run_checks(&cfg));
    let json = serde_json::to_string_pretty(&r)?;
    match report {
        Some(path) => {
            fs::write(&path, json + "\n")?;
            print!("{}", r.human());
        }
        None => {
            println!("{json}");
            eprint!("{}", r.human());
        }
    }
    Ok(if r.all_pass() { 0 } else { EXIT_MISMATCH })
}

fn cmd_cells(n: usize, cells: &[String], format: TableFormat) -> Run {
    let ctx = context(n)?;
    let ids: Vec<TwoSidedCellId> = if cells.is_empty() {
        let mut v = vec![TwoSidedCellId::Split];
        v.extend((0..=3).map(TwoSidedCellId::J));
        v
    } else {
        cells.iter().map(|c| c.parse()).collect::<Result<_, _>>()?
    };
    let rows = partition_report(&ids, &ctx)?;
    match format {
        TableFormat::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for r in &rows {
                w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_witness(n: usize, side: WitnessSide, x: &str, y: &str) -> Run {
    let ctx = context(n)?;
    let (x, y) = (parse(x, &ctx)?, parse(y, &ctx)?);
    let b = Budget::for_pair(&x, &y);
    let found = match side {
        WitnessSide::Left => find_left_witness(&x, &y, &ctx, &b)?.map(|z| format!("Z = {z}: {x} in {z} ⊗ {y}")),
        WitnessSide::Right => find_right_witness(&x, &y, &ctx, &b)?.map(|z| format!("Z = {z}: {x} in {y} ⊗ {z}")),
        WitnessSide::Two => find_two_sided_witness(&x, &y, &ctx, &b)?
            .map(|(z, w)| format!("Z = {z}, Z' = {w}: {x} in {z} ⊗ {y} ⊗ {w}")),
    };
    match found {
        Some(line) => println!("{line}"),
        None => println!(
            "no witness within budget (valleys <= {}, m <= {}, λ in {{{}}})",
            b.valleys,
            b.m,
            b.lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
        ),
    }
    Ok(0)
}

fn cmd_decompose(file: &PathBuf, seed: u64) -> Run {
    let text = fs::read_to_string(file)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let x = ConcreteBimodule::from_json(&value)?;
    let r = decompose(&x, seed);
    println!("{}", serde_json::to_string_pretty(&r)?);
    Ok(0)
}

fn dispatch(cmd: Command) -> Run {
    match cmd {
        Command::Tensor { n, lhs, rhs, mode, seed, cap } => cmd_tensor(n, &lhs, &rhs, mode, seed, cap),
        Command::Cell { n, descriptor } => cmd_cell(n, &descriptor),
        Command::Check {
            n,
            max_valleys,
            max_m,
            lambdas,
            max_cell_valleys,
            seed,
            cap,
            jobs,
            report,
            inject_fault,
        } => cmd_check(n, max_valleys, max_m, &lambdas, max_cell_valleys, seed, cap, jobs, report, inject_fault),
        Command::Graph { n, descriptor, format } => {
            let ctx = context(n)?;
            let d = parse(&descriptor, &ctx)?;
            match format {
                GraphFormat::Dot => print!("{}", graph::dot(&d, &ctx)),
            }
            Ok(0)
        }
        Command::Cells { n, cell, format } => cmd_cells(n, &cell, format),
        Command::Witness { n, side, x, y } => cmd_witness(n, side, &x, &y),
        Command::Realize { n, descriptor } => {
            let ctx = context(n)?;
            let d = parse(&descriptor, &ctx)?;
            let x = realize(&d, &ctx);
            println!("{}", serde_json::to_string_pretty(&x.to_json())?);
            Ok(0)
        }
        Command::Decompose { file, seed } => cmd_decompose(&file, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("aborted: {msg}");
            ExitCode::from(EXIT_CAP)
        }
    }
}
