//! `fcause`: feature causes, explications, blame and interaction witnesses
//! for a feature model and an effect.

mod analysis;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use analysis::{Analysis, EffectSource, Request, Sections};

#[derive(Parser, Debug)]
#[command(name = "fcause", version, about = "Feature cause analysis for configurable systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Feature causes of the effect.
    Causes(Common),
    /// Characteristic formula, its simplification, most general causes and covers.
    Explicate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Blame of features and partial configurations.
    Account {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        account: AccountArgs,
    },
    /// Interaction degree and witnesses.
    Interactions(Common),
    /// Every section.
    Report {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        account: AccountArgs,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Feature model file (`features:` and `valid:` lines).
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    #[command(flatten)]
    effect: EffectArgs,
    /// `metric REL value` over the measurement table; repeatable, one
    /// analysis each.
    #[arg(long, value_name = "METRIC REL VALUE")]
    threshold: Vec<String>,
    /// Analyse the complement of the effect within the valid configurations.
    #[arg(long)]
    negate: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for several thresholds.
    #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Significant digits for decimals in text output.
    #[arg(long, value_name = "N", default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=30))]
    digits: u8,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct EffectArgs {
    /// Effect as an expression over the features.
    #[arg(long, value_name = "EXPR")]
    effect_expr: Option<String>,
    /// Effect as a list of configurations, one per line.
    #[arg(long, value_name = "PATH")]
    effect_list: Option<PathBuf>,
    /// Measurement table; use with `--threshold`.
    #[arg(long, value_name = "PATH", requires = "threshold")]
    measurements: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoverArgs {
    /// Cover strategy; both when omitted.
    #[arg(long, value_enum)]
    cover: Option<CoverChoice>,
}

#[derive(Args, Debug)]
struct AccountArgs {
    /// `uniform-effects`, `uniform-valid` or a weight table file.
    #[arg(long, value_name = "DIST", default_value = "uniform-effects")]
    dist: String,
    /// Responsibility of every feature at every effect instance.
    #[arg(long)]
    per_instance: bool,
    /// Partial configuration such as `f=1,g=0`; repeatable.
    #[arg(long, value_name = "SPEC")]
    pairs: Vec<String>,
    /// Features to report, comma separated; all when omitted.
    #[arg(long, value_name = "NAMES", value_delimiter = ',')]
    features: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum CoverChoice {
    Greedy,
    Exact,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Invariant(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Input(e)
    }
}

impl From<feature_causes::Error> for Failure {
    fn from(e: feature_causes::Error) -> Failure {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, sections, cover, account) = match cli.command {
        Command::Causes(c) => (c, Sections::CAUSES, None, None),
        Command::Explicate { common, cover } => (common, Sections::EXPLICATE, Some(cover), None),
        Command::Account { common, account } => (common, Sections::ACCOUNT, None, Some(account)),
        Command::Interactions(c) => (c, Sections::INTERACTIONS, None, None),
        Command::Report { common, cover, account } => (common, Sections::ALL, Some(cover), Some(account)),
    };

    let model_text = read(&common.model)?;
    let model = feature_causes::ingest::parse_model(&model_text)
        .with_context(|| format!("in model {}", common.model.display()))?;

    let sources = effect_sources(&common.effect, &common.threshold)?;

    let dist = match account.as_ref().map(|a| a.dist.as_str()) {
        None | Some("uniform-effects") => analysis::DistSpec::UniformEffects,
        Some("uniform-valid") => analysis::DistSpec::UniformValid,
        Some(path) => analysis::DistSpec::Weights {
            name: path.to_string(),
            text: read(Path::new(path))?,
        },
    };
    let request = Request {
        model_text,
        sections,
        negate: common.negate,
        cover: cover.and_then(|c| c.cover),
        dist,
        per_instance: account.as_ref().is_some_and(|a| a.per_instance),
        pairs: account.as_ref().map(|a| a.pairs.clone()).unwrap_or_default(),
        features: account.as_ref().and_then(|a| a.features.clone()),
    };
    request.validate(&model.space)?;

    let analyses = run_all(&request, &sources, common.jobs as usize)?;
    let out = render::render(common.format, &model.space, &analyses, common.digits as usize);
    print!("{out}");
    if common.format != Format::Text {
        for a in &analyses {
            for w in &a.warnings {
                eprintln!("warning: {w}");
            }
        }
    }
    Ok(())
}

fn effect_sources(effect: &EffectArgs, thresholds: &[String]) -> anyhow::Result<Vec<EffectSource>> {
    if effect.measurements.is_none() && !thresholds.is_empty() {
        bail!("--threshold needs --measurements");
    }
    if let Some(expr) = &effect.effect_expr {
        return Ok(vec![EffectSource::Expression(expr.clone())]);
    }
    if let Some(path) = &effect.effect_list {
        return Ok(vec![EffectSource::List {
            name: path.display().to_string(),
            text: read(path)?,
        }]);
    }
    let path = effect.measurements.as_ref().expect("clap enforces one effect source");
    if thresholds.is_empty() {
        bail!("--measurements needs at least one --threshold");
    }
    let table = std::sync::Arc::new(read(path)?);
    thresholds
        .iter()
        .map(|t| {
            let threshold = t.parse().with_context(|| format!("in threshold `{t}`"))?;
            Ok(EffectSource::Threshold {
                table: table.clone(),
                threshold,
            })
        })
        .collect()
}

/// Runs one session per effect source. Sessions are confined to the thread
/// that builds them, so each worker parses its own model.
fn run_all(request: &Request, sources: &[EffectSource], jobs: usize) -> Result<Vec<Analysis>, Failure> {
    if jobs <= 1 || sources.len() <= 1 {
        return sources.iter().map(|s| analysis::analyse(request, s)).collect();
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Analysis, Failure>>>> = Mutex::new((0..sources.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(sources.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= sources.len() {
                    break;
                }
                let r = analysis::analyse(request, &sources[i]);
                results.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every source analysed"))
        .collect()
}
