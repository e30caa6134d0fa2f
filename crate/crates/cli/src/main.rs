use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use esmamds::data::write_dataset;
use esmamds::search::Preset;
use esmamds::stats::BaselineMode;
use esmamds::synth::{generate_synthetic, SynthSpec};
use esmamds_cli::campaign::{run_campaign, summarize, METRIC_NOTES};
use esmamds_cli::compare::{compare_sets, load_set, set_metrics};
use esmamds_cli::config::{prepare_dataset, DiscretizeConfig, RunConfig};

#[derive(Parser)]
#[command(
    name = "esmamds",
    version,
    about = "Mine diverse subgroups with exceptional survival"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded campaign and write results.
    Mine(MineArgs),
    /// Compute set metrics for a subgroup file.
    Metrics(MetricsArgs),
    /// Similarity matrices and metrics for two subgroup files.
    Compare(CompareArgs),
    /// Generate a dataset with planted subgroups.
    Synth(SynthArgs),
    /// Load, clean and discretize a dataset, then write it out.
    Preprocess(PreprocessArgs),
}

#[derive(Args)]
struct DataArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset file, overriding the config.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    time: Option<String>,
    #[arg(long)]
    event: Option<String>,
    /// Column to ignore; repeatable.
    #[arg(long)]
    exclude: Vec<String>,
    /// Numeric column to discretize; repeatable.
    #[arg(long)]
    discretize: Vec<String>,
    /// Discretize every numeric column with more distinct values than `--bins`.
    #[arg(long)]
    auto_discretize: bool,
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_parser = parse_preset)]
    preset: Option<Preset>,
    #[arg(long, value_parser = parse_baseline)]
    baseline: Option<BaselineMode>,
    /// Seed of the first run; run `i` uses `seed + i`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    subgroups: PathBuf,
    /// Significance level; the file's own level when absent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    native: PathBuf,
    #[arg(long)]
    other: PathBuf,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// TOML generator spec; the two-group design when absent.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 500)]
    records: usize,
    #[arg(long, default_value_t = 5)]
    noise: usize,
    #[arg(long, default_value_t = 0.2)]
    censoring: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct PreprocessArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    output: PathBuf,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: esmamds::Error| e.to_string())
}

fn parse_baseline(s: &str) -> Result<BaselineMode, String> {
    s.parse().map_err(|e: esmamds::Error| e.to_string())
}

fn base_config(args: &DataArgs) -> Result<RunConfig> {
    let mut c = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &args.data {
        c.dataset.path = p.clone();
    }
    if let Some(t) = &args.time {
        c.schema.time = t.clone();
    }
    if let Some(e) = &args.event {
        c.schema.event = e.clone();
    }
    c.schema.exclude.extend(args.exclude.iter().cloned());
    if !args.discretize.is_empty() || args.auto_discretize || args.bins.is_some() {
        let d = c.discretize.get_or_insert_with(DiscretizeConfig::default);
        d.columns.extend(args.discretize.iter().cloned());
        d.auto |= args.auto_discretize;
        if let Some(b) = args.bins {
            d.bins = b;
        }
    }
    Ok(c)
}

fn write_report(output: Option<&PathBuf>, text: String) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn mine(args: MineArgs) -> Result<()> {
    let mut c = base_config(&args.data)?;
    if let Some(p) = args.preset {
        c.preset = p;
    }
    if let Some(b) = args.baseline {
        c.search.baseline = Some(b);
    }
    if let Some(s) = args.seed {
        c.seed_base = s;
    }
    if let Some(r) = args.repeats {
        c.repeats = r;
    }
    if let Some(o) = args.output {
        c.output = o;
    }
    c.validate()?;
    let prepared = prepare_dataset(&c)?;
    for w in &prepared.warnings {
        log::warn!("{w}");
    }
    let outcomes = run_campaign(&c, &prepared)?;
    let summary = summarize(&outcomes);
    println!("{} runs written to {}", summary.runs, c.output.display());
    for (name, mean, std, _) in summary.metrics {
        if let (Some(m), Some(s)) = (mean, std) {
            println!("  {name:<14} {m:>10.4} ± {s:.4}");
        }
    }
    Ok(())
}

fn metrics(args: MetricsArgs) -> Result<()> {
    let c = base_config(&args.data)?;
    let prepared = prepare_dataset(&c)?;
    let set = load_set(&args.subgroups, &prepared.dataset)?;
    let alpha = args.alpha.unwrap_or(set.alpha);
    let report = set_metrics(&set, &prepared.dataset, alpha)?;
    let mut text = serde_json::to_string_pretty(&serde_json::json!({
        "alpha": alpha,
        "baseline": set.baseline,
        "metrics": report,
        "notes": METRIC_NOTES,
    }))?;
    text.push('\n');
    write_report(args.output.as_ref(), text)
}

fn compare(args: CompareArgs) -> Result<()> {
    let c = base_config(&args.data)?;
    let prepared = prepare_dataset(&c)?;
    let a = load_set(&args.native, &prepared.dataset)?;
    let b = load_set(&args.other, &prepared.dataset)?;
    let alpha = args.alpha.unwrap_or(a.alpha);
    compare_sets(&a, &b, alpha, &prepared.dataset, &args.output)?;
    println!("comparison written to {}", args.output.display());
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let spec = match &args.spec {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => SynthSpec::two_planted(args.records, args.noise, args.censoring),
    };
    let out = generate_synthetic(&spec, args.seed)?;
    fs::create_dir_all(&args.output)?;
    let data = fs::File::create(args.output.join("data.csv"))?;
    write_dataset(&out.dataset, data, b',')?;
    let mut truth = serde_json::to_string_pretty(&out.truth)?;
    truth.push('\n');
    fs::write(args.output.join("truth.json"), truth)?;
    println!(
        "{} records written to {}",
        out.dataset.n_records(),
        args.output.display()
    );
    Ok(())
}

fn preprocess(args: PreprocessArgs) -> Result<()> {
    let c = base_config(&args.data)?;
    let prepared = prepare_dataset(&c)?;
    for w in &prepared.warnings {
        log::warn!("{w}");
    }
    let file = fs::File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    write_dataset(&prepared.dataset, file, b',')?;
    let s = prepared.dataset.summary();
    println!(
        "{} records, {} attributes, {} items, {:.2}% censored, {} rows dropped",
        s.records, s.attributes, s.items, s.censored_pct, prepared.dropped_rows
    );
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(a) => mine(a),
        Command::Metrics(a) => metrics(a),
        Command::Compare(a) => compare(a),
        Command::Synth(a) => synth(a),
        Command::Preprocess(a) => preprocess(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
