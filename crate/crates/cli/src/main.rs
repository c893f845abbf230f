use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use elastic_motion::registration::CosineSpace;
use elastic_motion_cli::ingest::ingest;
use elastic_motion_cli::{run, write_artifacts, ConfigOverrides, Manifest, PipelineConfig, RunOptions, Stage};

#[derive(Parser)]
#[command(name = "elastic-motion", version, about = "Score motion trials against a healthy elastic mean")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the manifest and every trial, then report what was read.
    IngestCheck(Common),
    /// Write the healthy elastic mean.
    Mean(WithOutput),
    /// Also align every trial to the mean.
    Align(WithOutput),
    /// Also write per-trial distances.
    Distances(WithOutput),
    /// Also run the group tests and regressions.
    Stats(WithOutput),
    /// Everything, including distance matrices and rolling correlations.
    Report(WithOutput),
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Signal,
    Srvf,
}

#[derive(Args)]
struct Common {
    /// Manifest CSV (participant_id, cohort, trial_path[, brooke_score, dynamometry]).
    #[arg(long)]
    manifest: PathBuf,
    /// TOML config; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Drop unreadable trials instead of failing.
    #[arg(long)]
    skip_bad: bool,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    filter_order: Option<usize>,
    #[arg(long)]
    cutoff_ratio: Option<f64>,
    /// Signal column in the trial files.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    dp_max_slope: Option<usize>,
    #[arg(long)]
    mean_max_iter: Option<usize>,
    #[arg(long)]
    mean_tol: Option<f64>,
    #[arg(long)]
    rolling_window_frac: Option<f64>,
}

#[derive(Args)]
struct WithOutput {
    #[command(flatten)]
    common: Common,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Representation compared by the cosine distance.
    #[arg(long, value_enum, default_value = "signal")]
    cosine_space: Space,
}

impl Common {
    fn config(&self) -> anyhow::Result<PipelineConfig> {
        let overrides = ConfigOverrides {
            grid_n: self.grid_n,
            filter_order: self.filter_order,
            cutoff_ratio: self.cutoff_ratio,
            channel: self.channel.clone(),
            dp_max_slope: self.dp_max_slope,
            mean_max_iter: self.mean_max_iter,
            mean_tol: self.mean_tol,
            rolling_window_frac: self.rolling_window_frac,
        };
        Ok(PipelineConfig::resolve(self.config.as_deref(), &overrides)?)
    }
}

fn ingest_check(c: &Common) -> anyhow::Result<()> {
    let config = c.config()?;
    let manifest = Manifest::load(&c.manifest)?;
    let ingested = ingest(&manifest, &config, c.skip_bad)?;
    for t in &ingested.trials {
        println!("ok\t{}\t{}\t{}", t.entry.participant_id, t.entry.trial, t.entry.cohort);
    }
    for s in &ingested.skipped {
        println!("skipped\t{s}");
    }
    println!("{} trial(s) read, {} skipped", ingested.trials.len(), ingested.skipped.len());
    Ok(())
}

fn staged(args: &WithOutput, stage: Stage) -> anyhow::Result<()> {
    let config = args.common.config()?;
    let opts = RunOptions {
        skip_bad: args.common.skip_bad,
        cosine_space: match args.cosine_space {
            Space::Signal => CosineSpace::Signal,
            Space::Srvf => CosineSpace::Srvf,
        },
    };
    let art = run(&args.common.manifest, &config, opts, stage)?;
    let written = write_artifacts(&art, &args.out)
        .with_context(|| format!("writing outputs to {}", args.out.display()))?;
    for s in &art.ingested.skipped {
        eprintln!("skipped: {s}");
    }
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::IngestCheck(c) => ingest_check(c),
        Command::Mean(a) => staged(a, Stage::Mean),
        Command::Align(a) => staged(a, Stage::Align),
        Command::Distances(a) => staged(a, Stage::Distances),
        Command::Stats(a) => staged(a, Stage::Stats),
        Command::Report(a) => staged(a, Stage::Report),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
