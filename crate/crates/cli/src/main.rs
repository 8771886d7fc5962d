use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use recolour::bench::{loglog_slope, run_bench, write_csv, BenchConfig, BenchError, Family};
use recolour::decompose::DecomposeError;
use recolour::io::{parse_colouring, parse_dimacs, parse_sequence, write_dimacs, write_sequence};
use recolour::{
    bfs_distance, densest_subgraph, derive_params, diameter_check, generate, length_bound, mad_bruteforce,
    params_with_override, peel, random_proper_colouring, recolor_over, summarize, verify_sequence, Colouring,
    DensityError, FailureReason, Graph, GraphKind, OracleError, Params, Rational, RecolorError, SequenceFailure,
    VertexSubset,
};

#[derive(Parser)]
#[command(
    name = "recolour",
    version,
    about = "Recolouring sequences between proper k-colourings of sparse graphs"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write CSV rows to this file.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Overrides {
    /// Degree parameter d instead of the smallest feasible one.
    #[arg(long)]
    d: Option<usize>,
    /// Slack epsilon as `p/q`; requires --d.
    #[arg(long, requires = "d")]
    eps: Option<Rational>,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum average degree and a densest subgraph.
    Mad {
        graph: PathBuf,
        /// Cross-check against exhaustive search (at most 20 vertices).
        #[arg(long)]
        check: bool,
    },
    /// Peel the graph into special independent sets.
    Peel {
        graph: PathBuf,
        /// Palette size; defaults to floor(mad) + 2.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Recolour ALPHA into BETA, printing the sequence.
    Recolor {
        graph: PathBuf,
        alpha: PathBuf,
        beta: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        overrides: Overrides,
        /// Write the sequence here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay a sequence file and check it leads from ALPHA to BETA.
    Verify {
        graph: PathBuf,
        alpha: PathBuf,
        beta: PathBuf,
        sequence: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Exhaustive search over all k-colourings of a small graph.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Recolour seeded instances of a family over a range of sizes.
    Bench {
        /// `forest_union:<t>`, `cycle` or `grid`.
        family: String,
        /// Comma-separated sizes, or `a..b` for a, 2a, 4a, ... up to b. Empty for none.
        sizes: String,
        #[arg(long)]
        k: usize,
        /// Replicates per size.
        #[arg(long, default_value_t = 3)]
        seeds: usize,
        #[command(flatten)]
        overrides: Overrides,
        /// Add the exact distance where the oracle can afford it.
        #[arg(long)]
        oracle: bool,
    },
    /// Print a generated graph in DIMACS form, e.g. `grid:3:4` or `forest_union:50:2:7`.
    Generate { kind: GraphKind },
    /// Print a random proper colouring.
    Colour {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Length of a shortest recolouring sequence.
    Distance {
        graph: PathBuf,
        alpha: PathBuf,
        beta: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Colourings, components, diameters and frozen colourings.
    Summary {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Compare the exact diameter with the length budget.
    Check {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 1,
            error: error.into(),
        }
    }

    fn infeasible(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 2,
            error: error.into(),
        }
    }

    fn invariant(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 3,
            error: error.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Mad { graph, check } => cmd_mad(cli, graph, *check),
        Command::Peel { graph, k, overrides } => cmd_peel(cli, graph, *k, overrides),
        Command::Recolor {
            graph,
            alpha,
            beta,
            k,
            overrides,
            output,
        } => cmd_recolor(cli, graph, alpha, beta, *k, overrides, output.as_deref()),
        Command::Verify {
            graph,
            alpha,
            beta,
            sequence,
            k,
        } => cmd_verify(cli, graph, alpha, beta, sequence, *k),
        Command::Oracle { command } => match command {
            OracleCommand::Distance { graph, alpha, beta, k } => cmd_distance(cli, graph, alpha, beta, *k),
            OracleCommand::Summary { graph, k } => cmd_summary(cli, graph, *k),
            OracleCommand::Check { graph, k, overrides } => cmd_check(cli, graph, *k, overrides),
        },
        Command::Bench {
            family,
            sizes,
            k,
            seeds,
            overrides,
            oracle,
        } => cmd_bench(cli, family, sizes, *k, *seeds, overrides, *oracle),
        Command::Generate { kind } => {
            let g = generate(*kind).map_err(Failure::input)?;
            emit(&write_dimacs(&g))
        }
        Command::Colour { graph, k } => {
            let g = read_graph(graph)?;
            let f = random_proper_colouring(&g, *k, cli.seed)
                .ok_or_else(|| Failure::infeasible(anyhow!("greedy colouring needs more than {k} colours")))?;
            emit(&format!("{}\n", join(f.as_slice())))
        }
    }
}

fn cmd_mad(cli: &Cli, path: &Path, check: bool) -> Outcome {
    let g = read_graph(path)?;
    let densest = densest_subgraph(&g).map_err(Failure::input)?;
    if check {
        let brute = mad_bruteforce(&g).map_err(Failure::input)?;
        if brute != densest.mad {
            return Err(Failure::invariant(anyhow!(
                "flow gives {} but exhaustive search gives {brute}",
                densest.mad
            )));
        }
    }
    match cli.format {
        Format::Text => emit(&format!(
            "mad = {}\nedge density = {}\nsubset = {}\n",
            densest.mad, densest.density, densest.subset
        )),
        Format::Json => emit_json(json!({
            "mad": densest.mad.to_string(),
            "density": densest.density.to_string(),
            "subset": one_indexed(&densest.subset),
        })),
    }
}

fn cmd_peel(cli: &Cli, path: &Path, k: Option<usize>, overrides: &Overrides) -> Outcome {
    let g = read_graph(path)?;
    let madval = graph_mad(&g)?;
    let k = k.unwrap_or((madval.floor() + 2) as usize);
    let params = resolve_params(madval, k, overrides)?;
    let peeling = peel(&g, params.d, params.epsilon).map_err(decompose_failure)?;
    let certs = peeling.certificates();
    match cli.format {
        Format::Text => {
            let mut out = format!(
                "d = {}, epsilon = {}, layers = {}\n",
                params.d,
                params.epsilon,
                peeling.len()
            );
            for (j, cert) in certs.iter().enumerate() {
                out += &format!(
                    "layer {}: {} | |I| = {} size_bound={} | |S| = {} low_degree_bound={}\n",
                    j + 1,
                    cert.independent,
                    cert.independent.len(),
                    cert.size_bound_met(),
                    cert.low_degree.len(),
                    cert.low_degree_bound_met(),
                );
            }
            emit(&out)
        }
        Format::Json => emit_json(json!({
            "d": params.d,
            "epsilon": params.epsilon.to_string(),
            "layers": certs.iter().map(|c| json!({
                "vertices": one_indexed(&c.independent),
                "host_order": c.host_order,
                "low_degree": c.low_degree.len(),
                "size_threshold": c.size_threshold().to_string(),
                "size_bound": c.size_bound_met(),
                "low_degree_threshold": c.low_degree_threshold().to_string(),
                "low_degree_bound": c.low_degree_bound_met(),
            })).collect::<Vec<_>>(),
        })),
    }
}

fn cmd_recolor(
    cli: &Cli,
    graph: &Path,
    alpha: &Path,
    beta: &Path,
    k: usize,
    overrides: &Overrides,
    output: Option<&Path>,
) -> Outcome {
    let g = read_graph(graph)?;
    let params = resolve_params(graph_mad(&g)?, k, overrides)?;
    let alpha = read_colouring(alpha, &g, k)?;
    let beta = read_colouring(beta, &g, k)?;
    let peeling = peel(&g, params.d, params.epsilon).map_err(decompose_failure)?;
    let seq = recolor_over(&g, &peeling, &alpha, &beta).map_err(recolor_failure)?;
    verify_sequence(&g, &alpha, &beta, &seq.steps)
        .map_err(|f| Failure::invariant(anyhow!("produced sequence is invalid: {}", describe(&f))))?;
    let budget = length_bound(g.n(), params.d, params.epsilon);
    let certified = peeling.all_size_bounds_met();
    if certified && !budget.admits(seq.len()) {
        return Err(Failure::invariant(anyhow!(
            "length {} exceeds the bound {}",
            seq.len(),
            budget.total_bound
        )));
    }
    let summary = format!(
        "c length = {}, bound = {}, levels = {}, layers = {}, d = {}, epsilon = {}{}\n",
        seq.len(),
        budget.total_bound,
        budget.levels,
        peeling.len(),
        params.d,
        params.epsilon,
        if certified { "" } else { ", uncertified" },
    );
    let sequence = write_sequence(&seq.steps);
    if let Some(path) = output {
        write_file(path, &sequence)?;
    }
    match cli.format {
        Format::Text if output.is_some() => emit(&summary),
        Format::Text => emit(&(sequence + &summary)),
        Format::Json => emit_json(json!({
            "length": seq.len(),
            "bound": budget.total_bound.to_string(),
            "levels": budget.levels,
            "layers": peeling.len(),
            "d": params.d,
            "epsilon": params.epsilon.to_string(),
            "certified": certified,
            "max_per_vertex": seq.max_recolourings(),
            "steps": seq.steps.iter().map(|s| [s.vertex + 1, s.colour]).collect::<Vec<_>>(),
        })),
    }
}

fn cmd_verify(cli: &Cli, graph: &Path, alpha: &Path, beta: &Path, sequence: &Path, k: usize) -> Outcome {
    let g = read_graph(graph)?;
    let alpha = read_colouring(alpha, &g, k)?;
    let beta = read_colouring(beta, &g, k)?;
    let steps = parse_sequence(&read(sequence)?)
        .with_context(|| format!("parsing {}", sequence.display()))
        .map_err(Failure::input)?;
    let result = verify_sequence(&g, &alpha, &beta, &steps);
    match cli.format {
        Format::Text => match &result {
            Ok(()) => emit(&format!("ok ({} steps)\n", steps.len()))?,
            Err(f) => emit(&format!("invalid: {}\n", describe(f)))?,
        },
        Format::Json => emit_json(json!({
            "valid": result.is_ok(),
            "steps": steps.len(),
            "failure": result.as_ref().err().map(describe),
        }))?,
    }
    result.map_err(|f| Failure::invariant(anyhow!("sequence rejected: {}", describe(&f))))
}

fn cmd_distance(cli: &Cli, graph: &Path, alpha: &Path, beta: &Path, k: usize) -> Outcome {
    let g = read_graph(graph)?;
    let alpha = read_colouring(alpha, &g, k)?;
    let beta = read_colouring(beta, &g, k)?;
    let distance = bfs_distance(&g, k, &alpha, &beta).map_err(oracle_failure)?;
    match cli.format {
        Format::Text => emit(&match distance {
            Some(d) => format!("distance = {d}\n"),
            None => "distance = unreachable\n".to_string(),
        }),
        Format::Json => emit_json(json!({ "distance": distance })),
    }
}

fn cmd_summary(cli: &Cli, graph: &Path, k: usize) -> Outcome {
    let g = read_graph(graph)?;
    let summary = summarize(&g, k).map_err(oracle_failure)?;
    let bound = match g.n() {
        0 => None,
        _ => derive_params(graph_mad(&g)?, k).map(|p| length_bound(g.n(), p.d, p.epsilon).total_bound.to_string()),
    };
    write_oracle_csv(
        cli,
        &g,
        k,
        summary.colouring_count,
        summary.component_count,
        summary.diameter(),
        bound.as_deref(),
    )?;
    match cli.format {
        Format::Text => emit(&format!(
            "colourings = {}\ncomponents = {}\nconnected = {}\ndiameter = {}\ncomponent diameters = {}\nfrozen = {}\n",
            summary.colouring_count,
            summary.component_count,
            summary.is_connected(),
            summary.diameter(),
            join(&summary.component_diameters),
            summary.frozen_count,
        )),
        Format::Json => emit_json(json!({
            "colourings": summary.colouring_count,
            "components": summary.component_count,
            "connected": summary.is_connected(),
            "diameter": summary.diameter(),
            "component_diameters": summary.component_diameters,
            "frozen": summary.frozen_count,
            "bound": bound,
        })),
    }
}

fn cmd_check(cli: &Cli, graph: &Path, k: usize, overrides: &Overrides) -> Outcome {
    let g = read_graph(graph)?;
    let params = resolve_params(graph_mad(&g)?, k, overrides)?;
    let report = diameter_check(&g, k, &params).map_err(oracle_failure)?;
    let bound = report.budget.total_bound.to_string();
    write_oracle_csv(
        cli,
        &g,
        k,
        report.colourings,
        report.components,
        report.diameter,
        Some(&bound),
    )?;
    match cli.format {
        Format::Text => emit(&format!(
            "colourings = {}\ncomponents = {}\ndiameter = {}\nbound = {}\nhypothesis holds = {}\nwithin bound = {}\n{}\n",
            report.colourings,
            report.components,
            report.diameter,
            bound,
            report.hypothesis_holds,
            report.within_bound,
            if report.passed() { "pass" } else { "FAIL" },
        ))?,
        Format::Json => emit_json(json!({
            "colourings": report.colourings,
            "components": report.components,
            "connected": report.connected,
            "diameter": report.diameter,
            "bound": bound,
            "hypothesis_holds": report.hypothesis_holds,
            "within_bound": report.within_bound,
            "passed": report.passed(),
        }))?,
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::invariant(anyhow!(
            "the reconfiguration graph is disconnected or exceeds the bound"
        )))
    }
}

fn cmd_bench(
    cli: &Cli,
    family: &str,
    sizes: &str,
    k: usize,
    seeds: usize,
    overrides: &Overrides,
    oracle: bool,
) -> Outcome {
    let family: Family = family.parse().map_err(Failure::input)?;
    let sizes = parse_sizes(sizes).map_err(Failure::input)?;
    let config = BenchConfig {
        family,
        sizes,
        seeds,
        k,
        seed: cli.seed,
        d_override: overrides.d,
        epsilon_override: overrides.eps,
        oracle,
    };
    let records = run_bench(&config).map_err(bench_failure)?;
    let mut csv = Vec::new();
    write_csv(&records, &mut csv).map_err(Failure::input)?;
    let csv = String::from_utf8(csv).expect("csv output is UTF-8");
    let slope = loglog_slope(&records);
    match &cli.csv {
        Some(path) => {
            write_file(path, &csv)?;
            match cli.format {
                Format::Text => emit(&format!(
                    "rows = {}, loglog slope = {}\n",
                    records.len(),
                    slope.map_or("n/a".to_string(), |s| format!("{s:.4}"))
                )),
                Format::Json => emit_json(json!({ "rows": records.len(), "loglog_slope": slope })),
            }
        }
        None => emit(&csv),
    }
}

/// `32,64,128`, or `a..b` for `a, 2a, 4a, ...` up to `b`, or the empty list.
fn parse_sizes(text: &str) -> anyhow::Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().context("malformed range start")?;
        let hi: usize = hi.trim().parse().context("malformed range end")?;
        anyhow::ensure!(lo >= 1, "range start must be positive");
        anyhow::ensure!(lo <= hi, "range {lo}..{hi} is not ascending");
        return Ok(std::iter::successors(Some(lo), |&n| n.checked_mul(2))
            .take_while(|&n| n <= hi)
            .collect());
    }
    let sizes = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("malformed size `{s}`"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    anyhow::ensure!(sizes.windows(2).all(|w| w[0] <= w[1]), "sizes must be ascending");
    Ok(sizes)
}

fn resolve_params(madval: Rational, k: usize, overrides: &Overrides) -> Result<Params, Failure> {
    match overrides.d {
        Some(d) => params_with_override(madval, k, d, overrides.eps).map_err(Failure::infeasible),
        None => derive_params(madval, k)
            .ok_or_else(|| Failure::infeasible(anyhow!("mad = {madval} is not below k - 1 = {}", k as i64 - 1))),
    }
}

fn graph_mad(g: &Graph) -> Result<Rational, Failure> {
    match recolour::mad(g) {
        Ok(m) => Ok(m),
        Err(DensityError::EmptyGraph) => Ok(Rational::ZERO),
        Err(e) => Err(Failure::input(e)),
    }
}

fn decompose_failure(e: DecomposeError) -> Failure {
    match e {
        DecomposeError::EmptyGraph => Failure::input(e),
        _ => Failure::infeasible(e),
    }
}

fn recolor_failure(e: RecolorError) -> Failure {
    match e {
        RecolorError::Colouring(_)
        | RecolorError::ImproperStart(..)
        | RecolorError::ImproperTarget(..)
        | RecolorError::PaletteMismatch { .. } => Failure::input(e),
        RecolorError::PaletteTooSmall { .. } => Failure::infeasible(e),
        RecolorError::Decompose(e) => decompose_failure(e),
        RecolorError::PeelingMismatch { .. } | RecolorError::NoFreeColour(_) => Failure::invariant(e),
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    Failure::input(e)
}

fn bench_failure(e: BenchError) -> Failure {
    match e {
        BenchError::Infeasible { .. } | BenchError::Params { .. } => Failure::infeasible(e),
        BenchError::Recolor {
            source: RecolorError::Decompose(_),
            ..
        } => Failure::infeasible(e),
        BenchError::Recolor { .. } | BenchError::Verification { .. } => Failure::invariant(e),
        BenchError::Graph(_) | BenchError::UnknownFamily(_) | BenchError::Csv(_) | BenchError::Io(_) => {
            Failure::input(e)
        }
    }
}

/// A validator failure in 1-indexed terms.
fn describe(f: &SequenceFailure) -> String {
    let reason = match &f.reason {
        FailureReason::Shape => "colourings have different lengths or palettes".to_string(),
        FailureReason::ImproperStart(u, v) => format!("start colouring is not proper (edge {}-{})", u + 1, v + 1),
        FailureReason::VertexOutOfRange(v) => format!("vertex {} out of range", v + 1),
        FailureReason::ColourOutOfRange(c) => format!("colour {c} out of range"),
        FailureReason::NoOp { vertex, colour } => format!("vertex {} already has colour {colour}", vertex + 1),
        FailureReason::Monochromatic(u, v) => format!("edge {}-{} becomes monochromatic", u + 1, v + 1),
        FailureReason::EndMismatch(v) => format!("final colouring differs from the target at vertex {}", v + 1),
    };
    match f.step {
        Some(i) => format!("step {}: {reason}", i + 1),
        None => reason,
    }
}

fn write_oracle_csv(
    cli: &Cli,
    g: &Graph,
    k: usize,
    colourings: usize,
    components: usize,
    diameter: usize,
    bound: Option<&str>,
) -> Outcome {
    let Some(path) = &cli.csv else { return Ok(()) };
    let text = format!(
        "n,k,colourings,components,diameter,bound\n{},{k},{colourings},{components},{diameter},{}\n",
        g.n(),
        bound.unwrap_or("")
    );
    write_file(path, &text)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::input)
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::input)
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    parse_dimacs(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::input)
}

fn read_colouring(path: &Path, g: &Graph, k: usize) -> Result<Colouring, Failure> {
    let f = parse_colouring(&read(path)?, k)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::input)?;
    if f.len() != g.n() {
        return Err(Failure::input(anyhow!(
            "{} has {} colours for {} vertices",
            path.display(),
            f.len(),
            g.n()
        )));
    }
    if let Some((u, v)) = f.conflict(g) {
        return Err(Failure::input(anyhow!(
            "{} is not proper: edge {}-{}",
            path.display(),
            u + 1,
            v + 1
        )));
    }
    Ok(f)
}

fn one_indexed(s: &VertexSubset) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn emit(text: &str) -> Outcome {
    io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .context("writing output")
        .map_err(Failure::input)
}

fn emit_json(value: Value) -> Outcome {
    emit(&format!("{value:#}\n"))
}
