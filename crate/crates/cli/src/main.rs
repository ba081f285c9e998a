use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use repext::hardness::{self, ThreePartition};
use repext::io::{self, PackingInput};
use repext::oracle::{brute_force, OracleBudget};
use repext::packing::{solve_binpacking, solve_genbinpacking, BinPackingInstance};
use repext::pint::minspan_pint;
use repext::intg::minspan_int;
use repext::prep::prune;
use repext::solvers::{self, recog_fixed, recog_standard, SolveOptions, Strategy};
use repext::{validate_representation, GraphClass, HostTree, Instance, ModType, PartialRepresentation, Verdict};

const EXTENDIBLE: u8 = 0;
const NOT_EXTENDIBLE: u8 = 1;
const USAGE: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "repext", version, about = "Partial representation extension for interval, path and chordal graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an instance extends; writes the solution when it does
    Solve(SolveArgs),
    /// Minimum span of each component on a path
    Minspan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        class: GraphClass,
    },
    /// Check a solution against its instance
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Recognition without a partial representation, on any host or a fixed path
    Recog {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        class: GraphClass,
        /// fixed path host with this many nodes
        #[arg(long)]
        path: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive brute-force decision
    Oracle {
        #[arg(long)]
        input: PathBuf,
        /// extra host nodes to try
        #[arg(long, default_value_t = 4)]
        budget: usize,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate hardness instances
    #[command(subcommand)]
    Gen(Gen),
    /// Bin packing
    #[command(subcommand)]
    Pack(Pack),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "auto")]
    strategy: Strategy,
    /// extra host nodes the exact search may create
    #[arg(long)]
    budget: Option<usize>,
    /// seconds before the exact search gives up
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Gen {
    /// Instance from a 3-Partition input
    #[command(name = "3part")]
    ThreePart {
        #[arg(long)]
        class: GraphClass,
        #[arg(long = "mod")]
        mod_type: ModType,
        #[arg(long)]
        k: usize,
        #[arg(long = "M")]
        m: u64,
        #[arg(long = "A", value_delimiter = ',')]
        a: Vec<u64>,
        #[command(flatten)]
        out: GenOutput,
    },
    /// PINT Fixed instance from a bin packing input
    Binpack {
        #[arg(long)]
        k: usize,
        #[arg(long = "V")]
        volume: u64,
        #[arg(long, value_delimiter = ',')]
        items: Vec<u64>,
        #[command(flatten)]
        out: GenOutput,
    },
}

#[derive(Args)]
struct GenOutput {
    /// instance file; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    /// metadata file; defaults to the instance file with `.meta.json`
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Pack {
    /// Solve a bin packing file
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Error with the exit code to report.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(USAGE, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let text = io::to_pretty(value);
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(USAGE, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn timeout(secs: Option<f64>) -> Result<Option<Duration>, Failure> {
    secs.map(|s| Duration::try_from_secs_f64(s).map_err(|e| Failure(USAGE, format!("--timeout: {e}"))))
        .transpose()
}

fn report(verdict: &Verdict, output: Option<&Path>) -> Outcome {
    match verdict {
        Verdict::Extendible(solution) => {
            write(output, &io::solution_to_json(solution))?;
            eprintln!("extendible");
            Ok(EXTENDIBLE)
        }
        Verdict::NotExtendible => {
            eprintln!("not extendible");
            Ok(NOT_EXTENDIBLE)
        }
        Verdict::Inconclusive => {
            eprintln!("inconclusive");
            Ok(INCONCLUSIVE)
        }
    }
}

fn solve(args: &SolveArgs) -> Outcome {
    let instance = io::instance_from_json(&read(&args.input)?)?;
    let options = SolveOptions {
        strategy: args.strategy,
        node_budget: args.budget,
        time_limit: timeout(args.timeout)?,
    };
    let verdict = solvers::solve(&instance, &options).map_err(|e| match e {
        solvers::SolveError::Packing(e) => Failure(INCONCLUSIVE, e.to_string()),
        e => Failure(USAGE, e.to_string()),
    })?;
    report(&verdict, args.output.as_deref())
}

fn minspan(input: &Path, class: GraphClass) -> Outcome {
    let graph = io::graph_from_json(&read(input)?)?;
    let pruned = prune(&graph, &PartialRepresentation::empty(HostTree::path(1)));
    let g = &pruned.pruned_graph;
    let mut spans = Vec::new();
    for comp in g.components() {
        let c = g.induced(&comp);
        let span = match class {
            GraphClass::ProperInterval => minspan_pint(&c, &Default::default()).ok().and_then(|r| r.span),
            GraphClass::Interval => minspan_int(&c).map(|p| p.span()),
            _ => return Err(Failure(USAGE, format!("minspan is defined for PINT and INT, not {class}"))),
        };
        match span {
            Some(s) => spans.push(s),
            None => {
                eprintln!("not in {class}");
                return Ok(NOT_EXTENDIBLE);
            }
        }
    }
    for s in spans {
        println!("{s}");
    }
    Ok(EXTENDIBLE)
}

fn verify(instance: &Path, solution: &Path) -> Outcome {
    let instance = io::instance_from_json(&read(instance)?)?;
    let solution = io::solution_from_json(&read(solution)?, instance.graph.n())?;
    match validate_representation(&instance, &solution) {
        Ok(v) if v.is_empty() => {
            println!("valid");
            Ok(0)
        }
        Ok(violations) => {
            for v in violations {
                println!("{v}");
            }
            Ok(1)
        }
        Err(e) => {
            println!("{e}");
            Ok(1)
        }
    }
}

fn recog(input: &Path, class: GraphClass, path: Option<usize>, output: Option<&Path>) -> Outcome {
    let graph = io::graph_from_json(&read(input)?)?;
    let verdict = match path {
        Some(0) => return Err(Failure(USAGE, "--path needs at least one node".into())),
        Some(t) if class.needs_path_host() => recog_fixed(class, &graph, &HostTree::path(t)),
        Some(t) => {
            let instance = Instance::recognition(graph, class, ModType::Fixed, HostTree::path(t))?;
            solvers::exact_search(&instance, &solvers::SearchLimits::new(0))
        }
        None => recog_standard(class, &graph),
    };
    report(&verdict, output)
}

fn oracle(input: &Path, budget: usize, secs: Option<f64>, output: Option<&Path>) -> Outcome {
    let instance = io::instance_from_json(&read(input)?)?;
    let pruned = prune(&instance.graph, &instance.partial);
    let small = pruned.pruned_instance(&instance);
    let verdict = brute_force(&small, &OracleBudget { extra_nodes: budget, time_limit: timeout(secs)? });
    let verdict = match verdict {
        Verdict::Extendible(s) => Verdict::Extendible(Box::new(pruned.unprune(*s))),
        v => v,
    };
    report(&verdict, output)
}

fn write_generated(
    out: &GenOutput,
    generated: Result<(Instance, hardness::ReductionMeta), hardness::HardnessError>,
    source: Value,
) -> Outcome {
    let (instance, meta) = generated?;
    write(out.output.as_deref(), &io::instance_to_json(&instance))?;
    let meta_path = out.meta.clone().or_else(|| {
        out.output.as_ref().map(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            p.with_file_name(format!("{stem}.meta.json"))
        })
    });
    if let Some(p) = meta_path {
        write(Some(&p), &io::meta_to_json(&meta, source))?;
    }
    Ok(0)
}

fn generate(cmd: &Gen) -> Outcome {
    match cmd {
        Gen::ThreePart { class, mod_type, k, m, a, out } => {
            let tp = ThreePartition::new(*k, *m, a.clone())?;
            let source = serde_json::to_value(&tp)?;
            use GraphClass::*;
            let generated = match (class, mod_type) {
                (ProperInterval | Interval, ModType::Fixed) => hardness::gen_int_fixed(&tp, *class),
                (Interval, ModType::Add) => hardness::gen_int_add(&tp),
                (Path, ModType::Add) => hardness::gen_path_add(&tp),
                (Path | Chordal, ModType::Fixed) => hardness::gen_pathchor_fixed(&tp, *class),
                (Path | Chordal, ModType::Sub) => hardness::gen_pathchor_sub(&tp, *class),
                (Chordal, ModType::Add | ModType::Both) => hardness::gen_chor_universal(&tp, *mod_type),
                _ => return Err(Failure(USAGE, format!("no 3-Partition reduction for {class} {mod_type}"))),
            };
            write_generated(out, generated, source)
        }
        Gen::Binpack { k, volume, items, out } => {
            let bp = BinPackingInstance { k: *k, volume: *volume, items: items.clone() };
            let source = serde_json::to_value(&bp)?;
            write_generated(out, hardness::gen_pint_fixed_from_binpacking(&bp), source)
        }
    }
}

fn pack(cmd: &Pack) -> Outcome {
    let Pack::Solve { input, output } = cmd;
    let solved = match io::packing_from_json(&read(input)?)? {
        PackingInput::Uniform(bp) => solve_binpacking(&bp),
        PackingInput::General(gp) => solve_genbinpacking(&gp),
    };
    match solved.map_err(|e| Failure(INCONCLUSIVE, e.to_string()))? {
        Some(bins) => {
            write(output.as_deref(), &json!({ "format": io::FORMAT, "bins": bins }))?;
            Ok(0)
        }
        None => {
            eprintln!("no packing");
            Ok(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Solve(args) => solve(args),
        Command::Minspan { input, class } => minspan(input, *class),
        Command::Verify { instance, solution } => verify(instance, solution),
        Command::Recog { input, class, path, output } => recog(input, *class, *path, output.as_deref()),
        Command::Oracle { input, budget, timeout, output } => oracle(input, *budget, *timeout, output.as_deref()),
        Command::Gen(g) => generate(g),
        Command::Pack(p) => pack(p),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

