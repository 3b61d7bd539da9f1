//! `circcodes`: verify, construct, bound, solve and lift codes in circulant
//! graphs from the command line.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage or applicability
//! error, 3 solver budget exceeded.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use circulant_codes::bounds::best_lower_bound;
use circulant_codes::grid::{grid_density, grid_verify, lift, literature_density, GridKind, GridReport};
use circulant_codes::io::{parse_inline, CodeDocument};
use circulant_codes::solver::{Exhausted, Progress};
use circulant_codes::sweep::{run_suite, CriterionOutcome};
use circulant_codes::{
    construct, exact_sid_value, min_code_size, verify, CirculantGraph, Code, CodeKind, FamilyId,
    FamilyParams, Shape, SolveRequest, SolveStatus,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "circcodes", version, about = "Identifying-type codes in circulant graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a code against a code kind.
    Verify(VerifyArgs),
    /// Build a code from a named family; prints the code document.
    Construct(ConstructArgs),
    /// Best lower bound for a graph and kind.
    Bound(BoundArgs),
    /// Exact minimum code size by branch and bound.
    Solve(SolveArgs),
    /// Lift a circulant code to an infinite grid.
    Lift(LiftArgs),
    /// Exact SID value where a formula applies.
    Exact(ExactArgs),
    /// Run the acceptance suite.
    Sweep(SweepArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum ShapeArg {
    Square,
    Tri,
    King,
}

#[derive(Args)]
struct GraphArgs {
    /// Order of the graph.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated generators, e.g. `1,4`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "shape")]
    gens: Option<Vec<i64>>,
    /// Generator shape `1,d` / `1,d-1,d` / `1,d-1,d,d+1`; needs `--d`.
    #[arg(long, requires = "d")]
    shape: Option<ShapeArg>,
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args)]
struct CodeArgs {
    /// JSON code document; `-` reads standard input.
    #[arg(long, conflicts_with = "inline")]
    code: Option<PathBuf>,
    /// Comma-separated codewords.
    #[arg(long)]
    inline: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    kind: CodeKind,
    #[command(flatten)]
    code: CodeArgs,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    family: FamilyId,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    kind: CodeKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    kind: CodeKind,
    /// Do not search above this size.
    #[arg(long)]
    max_size: Option<usize>,
    /// Single-threaded; returns the lexicographically smallest optimal code.
    #[arg(long)]
    deterministic: bool,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Start at size 1 instead of the best lower bound.
    #[arg(long)]
    no_bounds: bool,
    /// Emit a JSON progress line on stderr every this many search nodes.
    #[arg(long)]
    progress: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    grid: GridKind,
    #[command(flatten)]
    code: CodeArgs,
    /// Check the lifted code on the grid for this kind.
    #[arg(long)]
    verify: Option<CodeKind>,
    /// Write the fundamental-domain window as CSV `x,y,codeword`.
    #[arg(long)]
    dump_domain: Option<PathBuf>,
    /// Print an ASCII picture of the window.
    #[arg(long)]
    ascii: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    PaperAcceptance,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<circulant_codes::Error> for Failure {
    fn from(e: circulant_codes::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let Some(path) = path else { return Ok(()) };
    let text = serde_json::to_string_pretty(value).expect("serializable report");
    fs::write(path, text + "\n")
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

impl GraphArgs {
    /// Builds the graph, or `None` when neither generators nor a shape were given.
    fn build(&self, n_fallback: Option<usize>) -> Result<Option<CirculantGraph>, Failure> {
        let gens = match (&self.gens, self.shape) {
            (Some(g), _) => g.clone(),
            (None, Some(shape)) => {
                let d = self.d.expect("clap enforces --d");
                match shape {
                    ShapeArg::Square => Shape::Square { d },
                    ShapeArg::Tri => Shape::Triangular { d },
                    ShapeArg::King => Shape::King { d },
                }
                .gens()
            }
            (None, None) => return Ok(None),
        };
        let n = self
            .n
            .or(n_fallback)
            .ok_or_else(|| usage("--n is required"))?;
        Ok(Some(CirculantGraph::folded(n, &gens)?))
    }

    fn require(&self) -> Result<CirculantGraph, Failure> {
        self.build(None)?
            .ok_or_else(|| usage("either --gens or --shape with --d is required"))
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
    }
}

/// The code and, if the document carried one, its graph.
fn load_code(args: &CodeArgs, n: Option<usize>) -> Result<(Code, Option<CirculantGraph>), Failure> {
    match (&args.code, &args.inline) {
        (Some(path), _) => {
            let doc = CodeDocument::parse(&read_source(path)?)?;
            if let Some(n) = n {
                if n != doc.code.order() {
                    return Err(usage(format!(
                        "--n {n} disagrees with the document's n = {}",
                        doc.code.order()
                    )));
                }
            }
            Ok((doc.code, doc.graph))
        }
        (None, Some(list)) => {
            let n = n.ok_or_else(|| usage("--inline needs --n"))?;
            Ok((parse_inline(n, list)?, None))
        }
        (None, None) => Err(usage("either --code or --inline is required")),
    }
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let (code, doc_graph) = load_code(&a.code, a.graph.n)?;
    let g = match a.graph.build(Some(code.order()))? {
        Some(g) => g,
        None => doc_graph.ok_or_else(|| usage("no generators: pass --gens or include them in the document"))?,
    };
    if g.order() != code.order() {
        return Err(usage(format!(
            "code lives in Z_{} but the graph has order {}",
            code.order(),
            g.order()
        )));
    }
    let report = verify(&g, &code, a.kind);
    write_json(a.out.as_deref(), &report)?;
    if report.pass {
        println!("PASS: {code:?} is a {} code in {g} ({} codewords)", a.kind, code.len());
        Ok(0)
    } else {
        println!("FAIL: not a {} code in {g}", a.kind);
        let witness = serde_json::to_string(&report.witness).expect("serializable");
        println!("witness: {witness}");
        if report.no_code_exists() {
            println!("the graph has closed twins, so no {} code exists", a.kind);
        }
        Ok(EXIT_FAIL)
    }
}

fn cmd_construct(a: ConstructArgs) -> Outcome {
    let r = construct(
        a.family,
        FamilyParams {
            n: a.n,
            d: a.d,
            k: a.k,
        },
    )?;
    write_json(a.out.as_deref(), &r)?;
    eprintln!(
        "{}: {} code in {} with {} codewords",
        r.family,
        r.kind,
        r.graph,
        r.code.len()
    );
    let doc = CodeDocument {
        graph: Some(r.graph),
        code: r.code,
    };
    println!("{}", doc.to_json());
    Ok(0)
}

fn cmd_bound(a: BoundArgs) -> Outcome {
    let g = a.graph.require()?;
    let report = best_lower_bound(&g, a.kind);
    write_json(a.out.as_deref(), &report)?;
    println!(
        "{} lower bound for {g}: {} ({}{})",
        a.kind,
        report.value,
        report.provenance,
        if report.exact { ", exact" } else { "" }
    );
    for c in &report.candidates {
        println!("  {}: {}", c.source, c.value);
    }
    if let Some(e) = &report.exact_value {
        println!("  exact value {} ({})", e.value, e.source);
    }
    Ok(0)
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let g = a.graph.require()?;
    let mut req = SolveRequest::new(g.clone(), a.kind)
        .deterministic(a.deterministic)
        .use_bounds(!a.no_bounds);
    req.max_size = a.max_size;
    if let Some(secs) = a.time_limit {
        let budget = Duration::try_from_secs_f64(secs)
            .map_err(|_| usage(format!("--time-limit must be a nonnegative number, got {secs}")))?;
        req.time_budget = Some(budget);
    }
    if let Some(every) = a.progress {
        req.progress_interval = every;
        req.progress = Some(std::sync::Arc::new(|p: &Progress| {
            eprintln!("{}", serde_json::to_string(p).expect("serializable"));
        }));
    }
    let r = min_code_size(&req)?;
    write_json(a.out.as_deref(), &r)?;
    match r.status {
        SolveStatus::Optimal => {
            let w = r.witness.as_ref().expect("optimal carries a witness");
            println!("optimal {} size for {g}: {}", a.kind, w.len());
            println!("witness: {w:?}");
            println!("nodes explored: {}", r.nodes_explored);
            Ok(0)
        }
        SolveStatus::Infeasible => {
            println!("no {} code exists in {g} (closed twins)", a.kind);
            Ok(0)
        }
        SolveStatus::BudgetExceeded => {
            let why = match r.exhausted {
                Some(Exhausted::MaxSize) => "no code within --max-size",
                _ => "time limit reached",
            };
            println!(
                "budget exceeded ({why}): {} ≤ γ ≤ {}",
                r.lower_bound,
                r.upper_bound.map_or("?".into(), |u| u.to_string())
            );
            Ok(EXIT_BUDGET)
        }
    }
}

#[derive(Serialize)]
struct LiftReport {
    grid: GridKind,
    n: usize,
    d: usize,
    code: Vec<usize>,
    density: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal_density: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<GridReport>,
}

fn cmd_lift(a: LiftArgs) -> Outcome {
    let (code, _) = load_code(&a.code, a.n)?;
    let p = lift(&code, code.order(), a.d, a.grid)?;
    let density = grid_density(&p);
    let report = a.verify.map(|k| grid_verify(&p, k));
    let optimal = a.verify.and_then(|k| literature_density(a.grid, k).ok());
    let width = p.order();
    let height = p.order().div_ceil(p.d().max(1)).max(4);
    if let Some(path) = &a.dump_domain {
        fs::write(path, p.to_csv(width, height))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    write_json(
        a.out.as_deref(),
        &LiftReport {
            grid: a.grid,
            n: p.order(),
            d: p.d(),
            code: code.to_vec(),
            density: density.to_string(),
            optimal_density: optimal.map(|d| d.to_string()),
            report: report.clone(),
        },
    )?;
    println!("lifted to the {} grid, density {density}", a.grid);
    if let Some(best) = optimal {
        println!("optimal density for the grid: {best}");
    }
    if a.ascii {
        print!("{}", p.to_ascii(width.min(80), height.min(40)));
    }
    match report {
        Some(r) if !r.pass => {
            println!("FAIL: not a {} code on the grid", r.kind);
            let witness = serde_json::to_string(&r.witness).expect("serializable");
            println!("witness: {witness}");
            Ok(EXIT_FAIL)
        }
        Some(r) => {
            println!("PASS: {} code on the grid", r.kind);
            Ok(0)
        }
        None => Ok(0),
    }
}

#[derive(Serialize)]
struct ExactReport {
    n: usize,
    gens: Vec<usize>,
    kind: CodeKind,
    value: usize,
    source: &'static str,
}

fn cmd_exact(a: ExactArgs) -> Outcome {
    let g = a.graph.require()?;
    let e = exact_sid_value(&g).ok_or_else(|| {
        usage(format!(
            "no exact SID formula covers {g}: needs C_n(1,3) with n > 11, C_2k+1(1,4) with k > 5, \
             C_2k(1,k) with k ≥ 5, or a grid-shaped graph inside an SID window"
        ))
    })?;
    write_json(
        a.out.as_deref(),
        &ExactReport {
            n: g.order(),
            gens: g.gens().to_vec(),
            kind: CodeKind::Sid,
            value: e.value,
            source: e.source,
        },
    )?;
    println!("{}", e.value);
    eprintln!("SID value of {g} from {}", e.source);
    Ok(0)
}

#[derive(Serialize)]
struct SweepReport<'a> {
    suite: &'static str,
    pass: bool,
    criteria: &'a [CriterionOutcome],
}

fn cmd_sweep(a: SweepArgs) -> Outcome {
    let Suite::PaperAcceptance = a.suite;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = a.jobs {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool
        .build()
        .map_err(|e| usage(format!("cannot start worker pool: {e}")))?;
    let outcomes = pool.install(run_suite);
    let pass = outcomes.iter().all(|o| o.pass);
    write_json(
        a.out.as_deref(),
        &SweepReport {
            suite: "paper-acceptance",
            pass,
            criteria: &outcomes,
        },
    )?;
    println!("{:<3} {:<6} {:>7} {:>8}  title", "id", "result", "checks", "seconds");
    for o in &outcomes {
        println!(
            "{:<3} {:<6} {:>7} {:>8.2}  {}",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.checked,
            o.elapsed_ms as f64 / 1000.0,
            o.title
        );
        for f in &o.failures {
            println!("      {f}");
        }
    }
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    // Exit quietly when a downstream pipe closes.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Lift(a) => cmd_lift(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
