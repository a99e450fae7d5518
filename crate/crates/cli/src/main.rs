//! `edom`: generate, filter and analyse small graphs for eternal domination.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rayon::prelude::*;

use edom_core::constructions::{CirculantSpec, ConstructionError};
use edom_core::eternal::{
    defense_move, dominating_sets_of_size_capped, eternal_domination_number_connected, prune_to_eternal,
    EternalError, DEFAULT_CONFIG_CAP,
};
use edom_core::graph6::{self, OnError, StreamError};
use edom_core::invariants::InvariantRecord;
use edom_core::pipeline::{
    check_appendix, construct, reproduce_table, run_filter_generated, run_filter_stream, with_workers,
    AppendixId, AppendixOptions, Completeness, Construction, FilterSpec, PipelineError, RowStatus,
    RunOptions, TableId, TableOptions,
};
use edom_core::{Constraint, GenerateError, GenerateOptions, Generator, Graph, VertexSet};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "edom", version, about = "Exact eternal domination on small graphs")]
struct Cli {
    /// Worker threads (default: all logical CPUs).
    #[arg(long, global = true, env = "EDOM_WORKERS")]
    workers: Option<usize>,
    /// Maximum dominating sets held by one solver call.
    #[arg(long, global = true, default_value_t = DEFAULT_CONFIG_CAP)]
    config_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an invariant record for each graph6 line.
    Analyze {
        /// Input file; stdin when absent or `-`.
        input: Option<PathBuf>,
        /// Skip the eternal domination solver.
        #[arg(long)]
        no_eternal: bool,
        #[command(flatten)]
        errors: ErrorPolicy,
    },
    /// Generate connected graphs of one order as graph6.
    Gen {
        n: usize,
        #[arg(long, short, default_value = "all", value_parser = parse_constraint)]
        constraint: Constraint,
        /// Include disconnected graphs.
        #[arg(long)]
        all_components: bool,
        /// Allow the extended order budget.
        #[arg(long)]
        large: bool,
        /// Print only the number of graphs.
        #[arg(long)]
        count: bool,
    },
    /// Run a predicate chain over generated or streamed graphs.
    Filter {
        /// Comma-separated chain, e.g. `connected,alpha_lt_theta`.
        #[arg(long)]
        chain: String,
        /// Generate the input at this order instead of reading graph6.
        #[arg(long, conflicts_with = "input")]
        gen: Option<usize>,
        #[arg(long, short, default_value = "all", value_parser = parse_constraint)]
        constraint: Constraint,
        #[arg(long)]
        large: bool,
        /// graph6 input file; stdin when absent or `-`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Evaluate γ∞ even when α = θ.
        #[arg(long)]
        no_shortcut: bool,
        /// Write the count report here instead of stderr.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        errors: ErrorPolicy,
    },
    /// Recompute a count table and compare it with the published values.
    Table {
        #[arg(value_parser = parse_table)]
        id: TableId,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        large: bool,
    },
    /// Verify a bundled (or supplied) appendix graph list.
    Appendix {
        #[arg(value_parser = parse_appendix)]
        id: AppendixId,
        /// Check this file instead of the bundled list.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Confirm completeness by exhaustive search for orders up to 10.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        large: bool,
    },
    /// Build a named graph and print it as graph6.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        /// Append the invariant record.
        #[arg(long, global = true)]
        record: bool,
    },
    /// Solve the eternal domination game on one graph.
    Eternal {
        /// graph6 string.
        graph: String,
        /// Print every surviving configuration at γ∞ guards.
        #[arg(long)]
        list: bool,
        /// Play this many random attacks against the optimal defence.
        #[arg(long, default_value_t = 0)]
        trace: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// `C_n[keys]`, keys comma-separated.
    Circulant { n: usize, keys: String },
    /// The k-th Mycielski graph (M2 = K2, M4 = Grötzsch).
    Mycielski { k: usize },
    /// `C_n[keys] ⋈ K2`.
    BowtieK2 { n: usize, keys: String },
}

#[derive(Args)]
struct ErrorPolicy {
    /// What to do with undecodable lines.
    #[arg(long, value_enum, default_value_t = Policy::FailFast)]
    on_error: Policy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    FailFast,
    Skip,
}

impl From<Policy> for OnError {
    fn from(p: Policy) -> Self {
        match p {
            Policy::FailFast => OnError::FailFast,
            Policy::Skip => OnError::Skip,
        }
    }
}

fn parse_constraint(s: &str) -> Result<Constraint, String> {
    Constraint::from_name(s).ok_or_else(|| format!("unknown constraint {s:?} (all, tf, mtf, cubic)"))
}

fn parse_table(s: &str) -> Result<TableId, String> {
    TableId::parse(s).map_err(|e| e.to_string())
}

fn parse_appendix(s: &str) -> Result<AppendixId, String> {
    AppendixId::parse(s).map_err(|e| e.to_string())
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match e {
            PipelineError::Generate(GenerateError::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<GenerateError> for Failure {
    fn from(e: GenerateError) -> Self {
        PipelineError::from(e).into()
    }
}

impl From<EternalError> for Failure {
    fn from(e: EternalError) -> Self {
        let code = match e {
            EternalError::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers;
    let result = with_workers(workers, move || run(cli)).unwrap_or_else(|e| Err(e.into()));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("edom: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let ropts = RunOptions { config_cap: cli.config_cap, ..Default::default() };
    match cli.command {
        Command::Analyze { input, no_eternal, errors } => analyze(input, no_eternal, errors.on_error.into(), ropts),
        Command::Gen { n, constraint, all_components, large, count } => {
            gen(n, constraint, GenerateOptions { connected_only: !all_components, large }, count)
        }
        Command::Filter { chain, gen, constraint, large, input, no_shortcut, report, errors } => {
            let spec = FilterSpec::parse(&chain)?;
            let ropts = RunOptions { shortcut: !no_shortcut, ..ropts };
            filter(spec, gen, constraint, large, input, report, errors.on_error.into(), ropts)
        }
        Command::Table { id, max_n, large } => table(id, max_n, large, ropts),
        Command::Appendix { id, file, exhaustive, large } => appendix(id, file, exhaustive, large, ropts),
        Command::Construct { kind, record } => construct_cmd(kind, record),
        Command::Eternal { graph, list, trace, seed } => eternal(&graph, list, trace, seed, cli.config_cap),
    }
}

fn open_input(path: Option<PathBuf>) -> Result<Box<dyn BufRead + Send>, Failure> {
    match path {
        None => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) => {
            let f = File::open(&p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufReader::new(f)))
        }
    }
}

fn record_line(g: &Graph, no_eternal: bool, cap: usize) -> Result<String, EternalError> {
    let r = InvariantRecord::compute(g);
    let gamma_inf = if no_eternal {
        "-".to_string()
    } else if g.is_connected() && r.alpha == r.theta {
        format!("{} (=theta, implied)", r.theta)
    } else {
        let mut total = 0;
        for comp in g.connected_components() {
            let h = g.induced_subgraph(comp).expect("component");
            let rh = InvariantRecord::compute(&h);
            total += eternal_domination_number_connected(&h, rh.alpha, rh.theta, cap)?;
        }
        total.to_string()
    };
    let g6 = graph6::encode(g).unwrap_or_default();
    Ok(format!(
        "graph6:{g6}\tn:{}\talpha:{}\tgamma:{}\ttheta:{}\tgamma_inf:{gamma_inf}\ttriangle_free:{}\tclaw_free:{}\tcubic:{}\ttwo_connected:{}\tvertex_critical:{}\tedge_critical:{}",
        r.n, r.alpha, r.gamma, r.theta, r.triangle_free, r.claw_free, r.cubic, r.two_connected, r.vertex_critical, r.edge_critical
    ))
}

fn analyze(input: Option<PathBuf>, no_eternal: bool, policy: OnError, ropts: RunOptions) -> Outcome {
    let reader = graph6::read_stream(open_input(input)?, policy);
    let mut out = BufWriter::new(io::stdout().lock());
    let mut code = 0;
    let mut chunk: Vec<Graph> = Vec::new();
    let flush = |chunk: &mut Vec<Graph>, out: &mut BufWriter<_>| -> Result<(), Failure> {
        let lines: Vec<Result<String, EternalError>> =
            chunk.par_iter().map(|g| record_line(g, no_eternal, ropts.config_cap)).collect();
        chunk.clear();
        for l in lines {
            writeln!(out, "{}", l?)?;
        }
        Ok(())
    };
    for item in reader {
        match item {
            Ok((_, g)) => {
                chunk.push(g);
                if chunk.len() == edom_core::pipeline::CHUNK {
                    flush(&mut chunk, &mut out)?;
                }
            }
            Err(e) => {
                eprintln!("edom: {e}");
                code = EXIT_INPUT;
            }
        }
    }
    flush(&mut chunk, &mut out)?;
    out.flush()?;
    Ok(code)
}

fn gen(n: usize, constraint: Constraint, opts: GenerateOptions, count: bool) -> Outcome {
    let gen = Generator::new(n, constraint, opts)?;
    if count {
        println!("{}", gen.count());
        return Ok(0);
    }
    let mut out = BufWriter::new(io::stdout().lock());
    let parents: Vec<usize> = (0..gen.parent_count()).collect();
    for block in parents.chunks(256) {
        let children: Vec<Vec<Graph>> = block.par_iter().map(|&i| gen.children_of(i)).collect();
        for g in children.iter().flatten() {
            writeln!(out, "{}", graph6::encode(g).expect("order within graph6 range"))?;
        }
    }
    out.flush()?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn filter(
    spec: FilterSpec,
    gen: Option<usize>,
    constraint: Constraint,
    large: bool,
    input: Option<PathBuf>,
    report: Option<PathBuf>,
    policy: OnError,
    ropts: RunOptions,
) -> Outcome {
    let row = match gen {
        Some(n) => run_filter_generated(n, constraint, large, &spec, ropts)?,
        None => {
            let reader = graph6::read_stream(open_input(input)?, policy);
            let source = reader.inspect(|item: &Result<(usize, Graph), StreamError>| {
                if let Err(e) = item {
                    eprintln!("edom: {e}");
                }
            });
            run_filter_stream(source, "stream", &spec, ropts)
        }
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for m in &row.matches {
        writeln!(out, "{m}")?;
    }
    out.flush()?;
    let text = format!("{}\n{}\n", row.tsv_header(), row.tsv_line());
    match report {
        Some(p) => std::fs::write(p, text)?,
        None => eprint!("{text}"),
    }
    Ok(if row.decode_errors > 0 {
        EXIT_INPUT
    } else if !row.authoritative() {
        EXIT_BUDGET
    } else {
        0
    })
}

fn table(id: TableId, max_n: Option<usize>, large: bool, ropts: RunOptions) -> Outcome {
    if large {
        eprintln!("edom: --large rows can take from several minutes to about an hour and a half on one core");
    }
    let report = reproduce_table(id, TableOptions { max_n, large }, ropts)?;
    print!("{}", report.to_tsv());
    for r in &report.rows {
        if r.status == RowStatus::Mismatch {
            eprintln!("edom: {} n={} MISMATCH: got {:?}, expected {:?}", id.name(), r.n, r.cells, r.expected);
        }
    }
    Ok(if report.has_mismatch() {
        EXIT_MISMATCH
    } else if report.has_skipped() {
        EXIT_BUDGET
    } else {
        0
    })
}

fn appendix(id: AppendixId, file: Option<PathBuf>, exhaustive: bool, large: bool, ropts: RunOptions) -> Outcome {
    let text = match file {
        Some(p) => std::fs::read_to_string(&p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => id.fixture().to_string(),
    };
    let report = check_appendix(id, &text, AppendixOptions { exhaustive, large }, ropts)?;
    let mut by_order = std::collections::BTreeMap::<usize, (usize, usize)>::new();
    for e in &report.entries {
        let c = by_order.entry(e.n).or_default();
        c.0 += 1;
        c.1 += e.ok as usize;
    }
    println!("# appendix {}", id.name());
    println!("n\tlisted\tverified\tcompleteness");
    for n in report.completeness.keys() {
        by_order.entry(*n).or_default();
    }
    for (n, (listed, ok)) in &by_order {
        let comp = match report.completeness.get(n) {
            None => "-".to_string(),
            Some(Completeness::Exact { found }) => format!("exact ({found})"),
            Some(Completeness::Differs { missing, extra }) => {
                format!("DIFFERS (unlisted {}, spurious {})", missing.len(), extra.len())
            }
            Some(Completeness::Skipped(why)) => format!("skipped ({why})"),
        };
        println!("{n}\t{listed}\t{ok}\t{comp}");
    }
    if let Some(bad) = report.first_failure() {
        eprintln!("edom: line {}: {} {}", bad.line, bad.graph6, bad.detail);
        return Ok(EXIT_MISMATCH);
    }
    if !report.complete() {
        eprintln!("edom: exhaustive search disagrees with the list");
        return Ok(EXIT_MISMATCH);
    }
    Ok(0)
}

fn parse_keys(n: usize, keys: &str) -> Result<CirculantSpec, Failure> {
    let offsets = keys
        .split(',')
        .map(|k| k.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::input(format!("keys {keys:?}: {e}")))?;
    CirculantSpec::from_offsets(n, &offsets).map_err(|e: ConstructionError| Failure::input(format!("C{n}[{keys}]: {e}")))
}

fn construct_cmd(kind: ConstructKind, record: bool) -> Outcome {
    let c = match kind {
        ConstructKind::Circulant { n, keys } => Construction::Circulant(parse_keys(n, &keys)?),
        ConstructKind::Mycielski { k } => Construction::Mycielski(k),
        ConstructKind::BowtieK2 { n, keys } => Construction::BowtieK2(parse_keys(n, &keys)?),
    };
    let g = construct(&c).map_err(|e| Failure::input(format!("{c:?}: {e}")))?;
    if record {
        println!("{}", record_line(&g, false, DEFAULT_CONFIG_CAP)?);
    } else {
        println!("{}", graph6::encode(&g).expect("order within graph6 range"));
    }
    Ok(0)
}

fn show(s: VertexSet) -> String {
    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn eternal(graph: &str, list: bool, trace: usize, seed: u64, cap: usize) -> Outcome {
    let g = graph6::decode(graph.trim()).map_err(|e| Failure::input(format!("{graph:?}: {e}")))?;
    if g.order() == 0 {
        println!("gamma_inf\t0");
        return Ok(0);
    }
    let mut k = 0;
    for comp in g.connected_components() {
        let h = g.induced_subgraph(comp).expect("component");
        let r = InvariantRecord::compute(&h);
        k += eternal_domination_number_connected(&h, r.alpha, r.theta, cap)?;
    }
    let space = prune_to_eternal(&g, dominating_sets_of_size_capped(&g, k, cap)?);
    println!("gamma_inf\t{k}");
    println!("dominating_sets\t{}", space.len());
    println!("surviving\t{}", space.surviving_count());
    if list {
        for x in space.surviving() {
            println!("config\t{}", show(x));
        }
    }
    if trace > 0 {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut current = space.surviving().next().expect("γ∞ guards have a surviving configuration");
        println!("start\t{}", show(current));
        for step in 1..=trace {
            let Some(attack) = (g.vertices() & !current).iter().choose(&mut rng) else {
                println!("every vertex is guarded; no attack possible");
                break;
            };
            current = defense_move(&g, &space, current, attack)?;
            println!("attack\t{step}\t{attack}\t{}", show(current));
        }
    }
    Ok(0)
}
