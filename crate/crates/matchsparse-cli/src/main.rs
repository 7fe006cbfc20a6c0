use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use matchsparse::harness::{
    emit_report, run_independence_test, run_ratio_sweep, run_sparsify, run_validity_audit,
    run_vimatch_demo, AuditOptions, ExperimentSpec, GraphSource, Report,
};
use matchsparse::sparsifier::SparsifierConfig;
use matchsparse::vimatch::VimatchParams;
use matchsparse::weight::parse_ratio;

/// Degree-bounded matching sparsifiers for stochastic weighted graphs:
/// build them, certify them with exact fractional matchings, and measure
/// the statistical properties of the underlying recursive matcher.
#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Graph file in the plain text format (`n m` header, one `u v w` line
    /// per edge). Mutually exclusive with --gen.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,

    /// Generator spec, e.g. er:n=16,m=32,wmin=1,wmax=10,decimals=2 or
    /// path:n=8, cycle:n=9, clique:n=6, paths:count=2,len=5.
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,

    /// Accuracy parameter, a rational or decimal in (0, 1].
    #[arg(long, default_value = "0.3")]
    epsilon: String,

    /// Edge realization probability, a rational or decimal in [0, 1].
    #[arg(long, default_value = "0.5")]
    p: String,

    /// Root seed; every random quantity derives from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Sampling rounds override. Omit to use the round formula.
    #[arg(long = "R", value_name = "R")]
    rounds: Option<u64>,

    /// Realizations for the per-edge matching-probability estimates.
    #[arg(long, default_value_t = 1000)]
    n_q: usize,

    /// Write the JSON report here (a CSV lands next to it).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Omit timestamps so identical runs emit byte-identical reports.
    #[arg(long)]
    no_timestamps: bool,
}

impl CommonArgs {
    fn spec(&self, trials: usize, t_eval: usize) -> Result<ExperimentSpec> {
        let source = match (&self.graph, &self.gen) {
            (Some(path), None) => GraphSource::File(path.clone()),
            (None, Some(gen)) => GraphSource::Generated(gen.parse()?),
            (Some(_), Some(_)) => bail!("--graph and --gen are mutually exclusive"),
            (None, None) => bail!("one of --graph or --gen is required"),
        };
        let epsilon = parse_ratio(&self.epsilon).context("--epsilon")?;
        let p = parse_ratio(&self.p).context("--p")?;
        let mut cfg = SparsifierConfig::new(epsilon.clone(), p)?;
        cfg.r_override = self.rounds;
        cfg.n_q = self.n_q;
        let spec = ExperimentSpec {
            source,
            cfg,
            vparams: VimatchParams::desk(epsilon),
            trials,
            t_eval,
            seed: self.seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the sparsifier once and report its shape.
    Sparsify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run full pipeline trials and check every hard invariant.
    Audit {
        #[command(flatten)]
        common: CommonArgs,

        /// Full pipeline trials.
        #[arg(long, default_value_t = 10)]
        trials: usize,

        /// Largest odd-set size for the exhaustive blossom check.
        #[arg(long, default_value_t = 5)]
        blossom_limit: usize,
    },
    /// Estimate the approximation ratio across sampling-round counts.
    RatioSweep {
        #[command(flatten)]
        common: CommonArgs,

        /// Comma-separated round counts, e.g. 1,4,16,64.
        #[arg(long = "R-values", value_delimiter = ',', default_value = "1,4,16,64")]
        r_values: Vec<u64>,

        /// Paired evaluation realizations shared across all R values.
        #[arg(long, default_value_t = 500)]
        t_eval: usize,
    },
    /// Chi-square independence of matched statuses at far vertex pairs.
    Independence {
        #[command(flatten)]
        common: CommonArgs,

        /// Minimum hop distance for a pair to be eligible.
        #[arg(long, default_value_t = 5)]
        lambda_hops: u32,

        /// Matcher runs to aggregate.
        #[arg(long, default_value_t = 5000)]
        runs: usize,
    },
    /// Run the recursive matcher at increasing depths and show its trace.
    VimatchDemo {
        #[command(flatten)]
        common: CommonArgs,

        /// Deepest recursion level to run.
        #[arg(long, default_value_t = 2)]
        depth: usize,

        /// Runs per depth for the mean matched weight.
        #[arg(long, default_value_t = 50)]
        runs: usize,
    },
}

fn finish(report: Report, out: Option<&PathBuf>) -> Result<ExitCode> {
    match out {
        Some(path) => {
            emit_report(&report, path)?;
            eprintln!("report written to {}", path.display());
        }
        None => print!("{}", report.to_json()),
    }
    for c in &report.criteria {
        eprintln!(
            "{} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    Ok(if report.hard_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sparsify { common } => {
            let spec = common.spec(1, 1)?;
            let report = run_sparsify(&spec, !common.no_timestamps)?;
            finish(report, common.out.as_ref())
        }
        Command::Audit {
            common,
            trials,
            blossom_limit,
        } => {
            let spec = common.spec(trials, 1)?;
            let opts = AuditOptions {
                blossom_limit,
                corrupt_x: false,
            };
            let report = run_validity_audit(&spec, opts, !common.no_timestamps)?;
            finish(report, common.out.as_ref())
        }
        Command::RatioSweep {
            common,
            r_values,
            t_eval,
        } => {
            let spec = common.spec(1, t_eval)?;
            let report = run_ratio_sweep(&spec, &r_values, !common.no_timestamps)?;
            finish(report, common.out.as_ref())
        }
        Command::Independence {
            common,
            lambda_hops,
            runs,
        } => {
            let spec = common.spec(1, 1)?;
            let report = run_independence_test(&spec, lambda_hops, runs, !common.no_timestamps)?;
            finish(report, common.out.as_ref())
        }
        Command::VimatchDemo {
            common,
            depth,
            runs,
        } => {
            let spec = common.spec(1, 1)?;
            let report = run_vimatch_demo(&spec, depth, runs, !common.no_timestamps)?;
            finish(report, common.out.as_ref())
        }
    }
}
