use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use robust_leq::experiments::{
    self, complexity_sweep::sweep_table, ClassSpec, ComplexitySweepConfig, ExperimentConfig, ExperimentOutput,
    LearnerKind, LearningCurveConfig, LmqLowerBoundConfig, LmqStrategy, OutputPaths, PairSpec, RiskTableConfig,
    SeparationConfig,
};

mod parse;

/// Robust learning simulator: oracle demos, learners, risk tables and
/// complexity sweeps.
#[derive(Parser, Debug)]
#[command(name = "robust-leq", version)]
struct Cli {
    /// Run the experiment described by a JSON config instead of a subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; `.csv` gets the result rows, `.json` the summary.
    /// May be given twice.
    #[arg(long, global = true)]
    out: Vec<PathBuf>,

    /// Print the result rows as CSV on stdout.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Constructive demonstrations.
    #[command(subcommand)]
    Demo(Demo),
    /// Learning curve for one learner over an eps grid.
    Learn(LearnArgs),
    /// Exact robust-risk table.
    Risk(RiskArgs),
    /// VC / robust VC / Littlestone sweep.
    Complexity(ComplexityArgs),
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Point-mass separation between λ-LEQ and ρ-robust learning.
    Separation(SeparationArgs),
    /// LMQ sample/query lower bound for conjunctions.
    LmqLb(LmqArgs),
}

#[derive(Args, Debug)]
struct SeparationArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rho: usize,
    #[arg(long)]
    lambda: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    sample_size: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    ConsistentGuess,
    MajorityVote,
}

#[derive(Args, Debug)]
struct LmqArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rho: usize,
    /// LMQ radius (defaults to n).
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Strategies to run (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    strategy: Vec<StrategyArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LearnerArg {
    Conjunction,
    Winnow,
    Perceptron,
    Soa,
}

#[derive(Args, Debug)]
struct LearnArgs {
    #[arg(long, value_enum)]
    learner: LearnerArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 20)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Winnow weight budget W.
    #[arg(long, default_value_t = 4)]
    budget: u64,
    /// Perceptron support bound B.
    #[arg(long, default_value_t = 1.0)]
    bound: f64,
    /// Perceptron margin γ.
    #[arg(long, default_value_t = 0.5)]
    margin: f64,
}

#[derive(Args, Debug)]
struct RiskArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    rho: Vec<usize>,
    /// `disjoint:L`, `identical:L`, or a JSON pair object. Repeatable.
    #[arg(long, required = true)]
    pair: Vec<String>,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ComplexityArgs {
    /// `conjunctions:N`, `monotone:N`, or `ltf:N:W`. Repeatable.
    #[arg(long, required = true)]
    class: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    rho: Vec<usize>,
    #[arg(long)]
    seed: u64,
}

fn build_config(command: Command) -> Result<ExperimentConfig> {
    let cfg = match command {
        Command::Demo(Demo::Separation(a)) => {
            let mut c = SeparationConfig::new(a.n, a.rho, a.lambda, a.trials, a.seed);
            c.sample_size = a.sample_size;
            ExperimentConfig::Separation(c)
        }
        Command::Demo(Demo::LmqLb(a)) => {
            let mut c = LmqLowerBoundConfig::new(a.n, a.rho, a.trials, a.seed);
            c.lambda = a.lambda;
            if !a.strategy.is_empty() {
                c.strategies = a
                    .strategy
                    .iter()
                    .map(|s| match s {
                        StrategyArg::ConsistentGuess => LmqStrategy::ConsistentGuess,
                        StrategyArg::MajorityVote => LmqStrategy::MajorityVote,
                    })
                    .collect();
            }
            ExperimentConfig::LmqLowerBound(c)
        }
        Command::Learn(a) => {
            let kind = match a.learner {
                LearnerArg::Conjunction => LearnerKind::Conjunction,
                LearnerArg::Winnow => LearnerKind::Winnow,
                LearnerArg::Perceptron => LearnerKind::Perceptron,
                LearnerArg::Soa => LearnerKind::Soa,
            };
            let mut c = LearningCurveConfig::new(kind, a.n, a.rho, a.eps, a.delta, a.trials, a.seed);
            c.budget = a.budget;
            c.bound = a.bound;
            c.margin = a.margin;
            ExperimentConfig::LearningCurve(c)
        }
        Command::Risk(a) => {
            let pairs: Vec<PairSpec> = a.pair.iter().map(|p| parse::pair(p)).collect::<Result<_>>()?;
            ExperimentConfig::RiskTable(RiskTableConfig::new(a.n, a.rho, pairs, a.seed))
        }
        Command::Complexity(a) => {
            let classes: Vec<ClassSpec> = a.class.iter().map(|c| parse::class(c)).collect::<Result<_>>()?;
            ExperimentConfig::ComplexitySweep(ComplexitySweepConfig::new(classes, a.rho, a.seed))
        }
    };
    Ok(cfg)
}

fn output_paths(config: &ExperimentConfig, out: &[PathBuf]) -> Result<OutputPaths> {
    let mut paths = config.output().clone();
    for p in out {
        match p.extension().and_then(|e| e.to_str()) {
            Some("csv") => paths.csv = Some(p.clone()),
            Some("json") => paths.json = Some(p.clone()),
            _ => bail!("--out {} needs a .csv or .json extension", p.display()),
        }
    }
    Ok(paths)
}

fn print_report(out: &ExperimentOutput, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "experiment: {}", out.experiment)?;
    if let ExperimentConfig::ComplexitySweep(_) = out.config {
        writeln!(w, "class,n,rho,vc,rvc,lit")?;
        for (class, n, rho, vc, rvc, lit) in sweep_table(&out.rows) {
            writeln!(w, "{class},{n},{rho},{vc},{rvc},{lit}")?;
        }
    }
    if let ExperimentConfig::LearningCurve(_) = out.config {
        print_accounting(out, w)?;
    }
    for (k, v) in &out.summary {
        writeln!(w, "  {k:<48} {v}")?;
    }
    for a in &out.audits {
        let tag = if a.ok { "ok" } else { "FAIL" };
        writeln!(w, "[{tag}] {}: {}", a.name, a.detail)?;
    }
    Ok(())
}

/// Per-run table: eps, trial, m, leq_count, updates, robust risk.
fn print_accounting(out: &ExperimentOutput, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{:>6} {:>6} {:>8} {:>10} {:>8} {:>10}", "eps", "trial", "m", "leq_count", "updates", "risk")?;
    let per_trial: Vec<_> = out.rows.iter().filter(|r| r.trial.is_some()).collect();
    for chunk in per_trial.chunks(4) {
        let [m, leq, upd, risk] = chunk else { continue };
        let eps = serde_json::from_str::<serde_json::Value>(&m.metadata)
            .ok()
            .and_then(|v| v["eps"].as_f64())
            .unwrap_or(f64::NAN);
        writeln!(
            w,
            "{:>6} {:>6} {:>8} {:>10} {:>8} {:>10.6}",
            eps,
            m.trial.unwrap_or(0),
            m.value,
            leq.value,
            upd.value,
            risk.value
        )?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let config = match (cli.config, cli.command) {
        (Some(_), Some(_)) => bail!("give either --config or a subcommand, not both"),
        (Some(path), None) => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(cmd)) => build_config(cmd)?,
        (None, None) => bail!("nothing to run: give a subcommand or --config (see --help)"),
    };
    config.validate()?;
    let paths = output_paths(&config, &cli.out)?;
    let out = config.run()?;
    out.write_outputs(&paths)?;
    let stdout = io::stdout();
    let mut w = stdout.lock();
    if cli.csv {
        experiments::write_csv(&out.rows, &mut w)?;
    } else {
        print_report(&out, &mut w)?;
    }
    Ok(out.audit_ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("invariant audit failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
