use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use trifree_color::finisher::{FinisherMode, FinisherOptions, DEFAULT_BUDGET};
use trifree_color::harness::{
    color_instance, generate, independent_set_from_coloring, results_csv, run_experiment,
    verify_total, ColorChoice, ExperimentConfig, GeneratorKind, GeneratorSpec, PracticalSpec,
    Verdict,
};
use trifree_color::hypergraph::io::{parse, serialize};
use trifree_color::lists::{parse_coloring, parse_lists, serialize_coloring};
use trifree_color::nibble::{
    QMode, RunOptions, SurvivalOptions, DEFAULT_EXACT_LIMIT, DEFAULT_MC_SAMPLES,
};
use trifree_color::params::{check_constraints, claim_report, fixed_assignment, NibbleParams};
use trifree_color::reduce::codegree_reduce;
use trifree_color::{find_triangles, ListAssignment, RankedHypergraph};

#[derive(Parser)]
#[command(
    name = "trifree-color",
    version,
    about = "List coloring of triangle-free rank-3 hypergraphs"
)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "TRIFREE_WORKERS")]
    workers: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Color an instance: nibble rounds, then the finisher.
    Color(ColorArgs),
    /// Replace high-codegree pairs by 2-edges.
    Reduce(ReduceArgs),
    /// List triangles.
    DetectTriangles(DetectArgs),
    /// Evaluate the parameter constraints for the fixed assignment.
    ParamsCheck(ParamsArgs),
    /// Check a coloring.
    Verify(VerifyArgs),
    /// Run the full pipeline over many seeds.
    Experiment(ExperimentArgs),
}

#[derive(Args, Clone)]
struct GenOpts {
    #[arg(long, value_parser = parse_kind)]
    kind: GeneratorKind,
    #[arg(long)]
    n: usize,
    /// Number of 3-edges.
    #[arg(long)]
    edges: Option<usize>,
    /// Target maximum 3-degree.
    #[arg(long)]
    delta: Option<usize>,
    /// Mean 2-degree.
    #[arg(long, default_value_t = 0.0)]
    degree2: f64,
    /// Complete system (partial_steiner, n = 3 mod 6).
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 0.0)]
    book_bias: f64,
}

impl GenOpts {
    fn spec(&self, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            edges: self.edges,
            delta: self.delta,
            degree2: self.degree2,
            full: self.full,
            book_bias: self.book_bias,
            ..GeneratorSpec::new(self.kind, self.n, seed)
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    gen: GenOpts,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum QModeArg {
    Exact,
    Bound,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum FinisherArg {
    Mt,
    Greedy,
    ReportOnly,
}

#[derive(Args)]
struct EngineOpts {
    #[arg(long, value_enum, default_value = "exact")]
    q_mode: QModeArg,
    /// Largest link component evaluated exactly.
    #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
    exact_limit: usize,
    /// Samples per cell for larger components.
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    mc_samples: usize,
    /// `C,T,theta,p_hat`.
    #[arg(long, value_parser = parse_practical)]
    practical: Option<NibbleParams>,
    #[arg(long, value_enum, default_value = "mt")]
    finisher: FinisherArg,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    mt_budget: usize,
    /// Check invariants after every iteration.
    #[arg(long)]
    debug_invariants: bool,
    /// Skip the triangle-freeness precondition.
    #[arg(long = "unsafe")]
    unchecked: bool,
    /// Apply codegree reduction first.
    #[arg(long)]
    reduce: bool,
}

impl EngineOpts {
    fn run_options(&self, workers: Option<usize>) -> RunOptions {
        RunOptions {
            survival: SurvivalOptions {
                mode: match self.q_mode {
                    QModeArg::Exact => QMode::Exact,
                    QModeArg::Bound => QMode::Bound,
                    QModeArg::Mc => QMode::MonteCarlo,
                },
                exact_limit: self.exact_limit,
                mc_samples: self.mc_samples,
            },
            workers,
            debug_invariants: self.debug_invariants,
            skip_triangle_check: self.unchecked,
        }
    }

    fn finisher_options(&self) -> FinisherOptions {
        FinisherOptions {
            mode: match self.finisher {
                FinisherArg::Mt => FinisherMode::Mt,
                FinisherArg::Greedy => FinisherMode::Greedy,
                FinisherArg::ReportOnly => FinisherMode::ReportOnly,
            },
            budget: self.mt_budget,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct ColorArgs {
    file: PathBuf,
    /// Per-vertex lists, one `v c1 c2 ...` line each.
    #[arg(long, conflicts_with = "palette")]
    lists: Option<PathBuf>,
    /// Every vertex gets the list {0, ..., C-1}.
    #[arg(long)]
    palette: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    engine: EngineOpts,
    /// Write the per-iteration trace as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the coloring (`v c` lines).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args)]
struct ReduceArgs {
    file: PathBuf,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
}

#[derive(Args)]
struct DetectArgs {
    file: PathBuf,
    #[arg(long, default_value_t = usize::MAX)]
    limit: usize,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long, required_unless_present = "log10_delta")]
    delta: Option<f64>,
    #[arg(long)]
    delta2: Option<f64>,
    #[arg(long, conflicts_with = "delta")]
    log10_delta: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long)]
    coloring: PathBuf,
    #[arg(long)]
    lists: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    gen: GenOpts,
    #[arg(long, default_value_t = 20)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    /// Reuse one instance (generated from `--seed-base`) for every run.
    #[arg(long)]
    fixed_instance: bool,
    /// Colors as `⌈k·√(Δ/ln Δ)⌉`; ignored with `--practical`.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    /// `p̂ = min(1, factor/C)`.
    #[arg(long)]
    p_hat_factor: Option<f64>,
    #[command(flatten)]
    engine: EngineOpts,
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_kind(s: &str) -> std::result::Result<GeneratorKind, String> {
    s.parse().map_err(|e: trifree_color::Error| e.to_string())
}

fn parse_practical(s: &str) -> std::result::Result<NibbleParams, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [c, t, theta, p_hat] = parts[..] else {
        return Err("expected C,T,theta,p_hat".into());
    };
    Ok(NibbleParams {
        colors: c.parse().map_err(|_| format!("bad C {c:?}"))?,
        iterations: t.parse().map_err(|_| format!("bad T {t:?}"))?,
        theta: theta.parse().map_err(|_| format!("bad theta {theta:?}"))?,
        p_hat: p_hat.parse().map_err(|_| format!("bad p_hat {p_hat:?}"))?,
    })
}

fn read_hypergraph(path: &Path) -> Result<RankedHypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> Result<ExitCode> {
    let h = generate(&a.gen.spec(a.seed))?;
    let text = serialize(&h);
    if cli.json {
        if let Some(p) = &a.out {
            fs::write(p, &text)?;
        }
        let v = json!({
            "n": h.n(),
            "edges2": h.edges2().len(),
            "edges3": h.edges3().len(),
            "profile": h.profile(),
            "out": a.out,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        emit(a.out.as_deref(), &text)?;
        if a.out.is_some() {
            let p = h.profile();
            println!(
                "n={} edges2={} edges3={} delta3={} delta2={} codegree={}",
                h.n(),
                h.edges2().len(),
                h.edges3().len(),
                p.delta3,
                p.delta2,
                p.codegree_max
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_color(cli: &Cli, a: &ColorArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&a.file)?;
    let profile = h.profile();
    let given: Option<ListAssignment> = match (&a.lists, a.palette) {
        (Some(p), _) => Some(parse_lists(&fs::read_to_string(p)?, h.n())?),
        (None, Some(c)) => Some(ListAssignment::uniform(h.n(), c)),
        (None, None) => None,
    };
    let np = match (a.engine.practical, &given) {
        (Some(np), _) => np,
        (None, Some(l)) => {
            let Some(c) = l.uniform_size() else {
                bail!("lists must all have the same size");
            };
            PracticalSpec {
                colors: ColorChoice::Fixed(c),
                ..Default::default()
            }
            .resolve(profile.delta3)?
        }
        (None, None) => PracticalSpec::default().resolve(profile.delta3)?,
    };
    let lists = given.unwrap_or_else(|| ListAssignment::uniform(h.n(), np.colors));
    let res = color_instance(
        &h,
        &lists,
        np,
        a.engine.reduce,
        a.seed,
        &a.engine.run_options(cli.workers),
        &FinisherOptions {
            seed: a.seed,
            ..a.engine.finisher_options()
        },
    )?;
    if let Some(p) = &a.trace {
        fs::write(p, res.trace.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    let ok = res.verdict.as_ref().is_some_and(Verdict::is_ok);
    let partial: Vec<Option<usize>> = match &res.coloring {
        Some(c) => c.iter().copied().map(Some).collect(),
        None => vec![None; h.n()],
    };
    let independent = match (&res.coloring, ok) {
        (Some(c), true) => Some(independent_set_from_coloring(&h, c)?.len()),
        _ => None,
    };
    if let Some(p) = &a.out {
        fs::write(p, serialize_coloring(&partial))?;
    }
    if cli.json {
        let v = json!({
            "verdict": res.verdict,
            "params": np,
            "profile": profile,
            "colored_by_nibble": res.trace.colored,
            "rounds": res.trace.rounds.len(),
            "always_proper": res.trace.always_proper(),
            "finisher": res.finish,
            "reduction": res.reduction,
            "independent_set": independent,
            "coloring": if a.out.is_none() { res.coloring.clone() } else { None },
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        if a.out.is_none() && res.coloring.is_some() {
            print!("{}", serialize_coloring(&partial));
        }
        eprintln!(
            "colors={} iterations={} theta={} p_hat={:.6}",
            np.colors, np.iterations, np.theta, np.p_hat
        );
        eprintln!(
            "nibble colored {}/{}; finisher {:?} (residual {}, resamples {})",
            res.trace.colored,
            h.n(),
            res.finish.method,
            res.finish.residual,
            res.finish.resamples
        );
        eprintln!("verdict: {:?}", res.verdict);
    }
    Ok(status(ok))
}

fn cmd_reduce(cli: &Cli, a: &ReduceArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&a.file)?;
    let delta = a.delta.unwrap_or(h.profile().delta3);
    let (r, rep) = codegree_reduce(&h, delta)?;
    if let Some(p) = &a.out {
        fs::write(p, serialize(&r))?;
    }
    if cli.json || matches!(a.report, ReportFormat::Json) {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        if a.out.is_none() {
            print!("{}", serialize(&r));
        }
        eprintln!(
            "threshold {}: replaced {} pairs, removed {} 3-edges, added {} 2-edges",
            rep.threshold,
            rep.pairs_replaced.len(),
            rep.edges3_removed,
            rep.edges2_added
        );
        eprintln!("before {:?}", rep.profile_before);
        eprintln!("after  {:?}", rep.profile_after);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_detect(cli: &Cli, a: &DetectArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&a.file)?;
    let ts = find_triangles(&h, a.limit);
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&ts)?);
    } else if ts.is_empty() {
        println!("triangle-free");
    } else {
        for t in &ts {
            let edges: Vec<String> = t
                .edges
                .iter()
                .map(|e| format!("{:?}", e.vertices()))
                .collect();
            println!("{:<8?} {:?}  {}", t.kind, t.vertices, edges.join(" "));
        }
    }
    Ok(status(ts.is_empty()))
}

fn cmd_params(cli: &Cli, a: &ParamsArgs) -> Result<ExitCode> {
    let ln_delta = match (a.delta, a.log10_delta) {
        (_, Some(x)) => x * std::f64::consts::LN_10,
        (Some(d), None) => d.ln(),
        (None, None) => bail!("--delta or --log10-delta is required"),
    };
    if !(ln_delta > 0.0 && ln_delta.is_finite()) {
        bail!("delta must exceed 1");
    }
    let ln_delta2 = a.delta2.map_or(ln_delta, f64::ln);
    let p = fixed_assignment(ln_delta, ln_delta2);
    let report = check_constraints(&p);
    let claims = claim_report(&p);
    if cli.json {
        let v = json!({ "parameters": p, "report": report, "claims": claims });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!(
            "ln Δ = {ln_delta:.6}  ε = {}  ω = {:.6e}  θ = {:.6e}",
            p.epsilon, p.omega, p.theta
        );
        for issue in &report.regime_issues {
            println!("regime: {issue}");
        }
        println!("{:<5} {:<9} {:>16}  statement", "name", "status", "slack");
        for r in &report.constraints {
            let st = if r.satisfied { "ok" } else { "VIOLATED" };
            println!(
                "{:<5} {:<9} {:>16.6e}  {}",
                r.name, st, r.slack, r.statement
            );
        }
        let c = &claims.consistency_chain;
        println!(
            "chain {:<9} {:>16.6e}  {}",
            if c.satisfied { "ok" } else { "VIOLATED" },
            c.ln_rhs - c.ln_lhs,
            c.statement
        );
    }
    Ok(status(report.all_satisfied()))
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&a.file)?;
    let coloring = parse_coloring(&fs::read_to_string(&a.coloring)?, h.n())?;
    let lists = match &a.lists {
        Some(p) => Some(parse_lists(&fs::read_to_string(p)?, h.n())?),
        None => None,
    };
    let v = verify_total(&h, lists.as_ref(), &coloring);
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("{v:?}");
    }
    Ok(status(v.is_ok()))
}

fn cmd_experiment(cli: &Cli, a: &ExperimentArgs) -> Result<ExitCode> {
    let d = PracticalSpec::default();
    let practical = match a.engine.practical {
        Some(np) => PracticalSpec {
            colors: ColorChoice::Fixed(np.colors),
            iterations: np.iterations,
            theta: np.theta,
            p_hat_factor: np.p_hat * np.colors as f64,
        },
        None => PracticalSpec {
            colors: a.k.map_or(d.colors, ColorChoice::Scaled),
            iterations: a.iterations.unwrap_or(d.iterations),
            theta: a.theta.unwrap_or(d.theta),
            p_hat_factor: a.p_hat_factor.unwrap_or(d.p_hat_factor),
        },
    };
    let cfg = ExperimentConfig {
        generator: a.gen.spec(a.seed_base),
        vary_instance: !a.fixed_instance,
        practical,
        reduce: a.engine.reduce,
        run: RunOptions {
            workers: Some(1),
            ..a.engine.run_options(None)
        },
        finisher: a.engine.finisher_options(),
        seeds: (a.seed_base..a.seed_base + a.runs).collect(),
    };
    let run = || run_experiment(&cfg);
    let (results, summary) = match cli.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()?
            .install(run)?,
        None => run()?,
    };
    if let Some(p) = &a.csv {
        fs::write(p, results_csv(&results))?;
    }
    if cli.json {
        let v = json!({ "config": cfg, "results": results, "summary": summary });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!(
            "{:>6} {:>6} {:>6} {:>6} {:>7} {:>9} {:>10} {:>9} {:>8}",
            "seed", "delta", "delta2", "C", "nibble", "finisher", "resamples", "success", "ms"
        );
        for r in &results {
            println!(
                "{:>6} {:>6} {:>6} {:>6} {:>7.3} {:>9} {:>10} {:>9} {:>8.1}",
                r.seed,
                r.profile.delta3,
                r.profile.delta2,
                r.params.map_or(0, |p| p.colors),
                r.colored_by_nibble,
                r.finisher.map_or("-".to_string(), |f| format!("{f:?}")),
                r.resamples,
                r.success,
                r.wall_ms
            );
            if let Some(e) = &r.error {
                println!("       error: {e}");
            }
        }
        println!(
            "success {}/{} ({:.1}%)  mean nibble fraction {:.3}  mean ratio {}",
            summary.successes,
            summary.runs,
            100.0 * summary.success_rate,
            summary.mean_colored_by_nibble,
            summary
                .mean_ratio
                .map_or("-".to_string(), |r| format!("{r:.3}"))
        );
    }
    Ok(status(summary.successes == summary.runs))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Gen(a) => cmd_gen(&cli, a),
        Command::Color(a) => cmd_color(&cli, a),
        Command::Reduce(a) => cmd_reduce(&cli, a),
        Command::DetectTriangles(a) => cmd_detect(&cli, a),
        Command::ParamsCheck(a) => cmd_params(&cli, a),
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::Experiment(a) => cmd_experiment(&cli, a),
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
