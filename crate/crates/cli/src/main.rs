use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use rumour_cli::{commands, service, Artifacts, RunConfig};
use rumour_core::bench::SynthSpec;
use rumour_core::learn::Family;
use rumour_core::select::Method;

#[derive(Parser)]
#[command(name = "rumour", version, about = "Rumour veracity pipeline and exploration service")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus and print its summary table
    Ingest(Common),
    /// Write the feature matrix, time series, forests and rumour index
    Features(Common),
    /// Run a feature-reduction method on the training half
    Select(Common),
    /// Select, tune and fit models on the training half
    Train(Common),
    /// Hold-out metrics of the models and benchmarks
    Evaluate(Common),
    /// Accuracy over the 20 cumulative intervals
    Curves(Common),
    /// Generate a synthetic corpus
    Synth(SynthArgs),
    /// Serve an artifact directory over HTTP
    Serve(ServeArgs),
}

#[derive(Args)]
struct Common {
    /// Corpus directory with tweets/users/followees/rumours .jsonl files
    #[arg(long)]
    corpus: PathBuf,
    /// Lexicon TSV; the bundled demo lexicon when omitted
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Feature catalog TOML; the default catalog when omitted
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Reduction method 1..4
    #[arg(long, default_value = "2")]
    method: Method,
    /// Classifier family; repeat or comma-separate for several
    #[arg(long, value_delimiter = ',', default_values = ["logreg", "cart", "rf"])]
    family: Vec<Family>,
    #[arg(long = "k-folds", default_value_t = 10)]
    k_folds: usize,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            corpus: Some(self.corpus.clone()),
            lexicon: self.lexicon.clone(),
            catalog: self.catalog.clone(),
            families: self.family.clone(),
            method: self.method,
            k_folds: self.k_folds,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "synthetic")]
    out: PathBuf,
    #[arg(long, default_value_t = 72)]
    rumours: usize,
    #[arg(long = "true-rumours", default_value_t = 41)]
    true_rumours: usize,
}

#[derive(Args)]
struct ServeArgs {
    /// Artifact directory written by `features` (and `evaluate` for predictions)
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// Model whose predictions are served
    #[arg(long)]
    family: Option<Family>,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(c) => {
            let r = commands::ingest(&c.config())?;
            print!("{}", r.summary);
            println!(
                "{} rumours, {} tweets ({} stances inherited from retweet sources), {} load warnings",
                r.dataset.rumours.len(),
                r.dataset.tweet_count(),
                r.closed,
                r.warnings
            );
        }
        Command::Features(c) => {
            let series = commands::features(&c.config())?;
            println!("wrote features for {} rumours to {}", series.len(), c.out.display());
        }
        Command::Select(c) => {
            for t in commands::select(&c.config())? {
                let best = t.best_step().map_or(0, |s| s.size);
                println!("method {} {}: best at {best} features: {}", t.method, t.family, t.prefix(best).join(", "));
            }
        }
        Command::Train(c) => {
            let r = commands::train(&c.config())?;
            for s in &r.specs {
                println!("{}: {} features, wrote model-{}.json", s.name, s.features.len(), s.name);
            }
        }
        Command::Evaluate(c) => {
            let r = commands::evaluate(&c.config())?;
            print!("{}", r.holdout);
        }
        Command::Curves(c) => {
            let r = commands::curves(&c.config())?;
            print!("{}", r.curves.to_csv());
        }
        Command::Synth(s) => {
            let spec = SynthSpec {
                seed: s.seed,
                rumours: s.rumours,
                true_rumours: s.true_rumours,
                ..SynthSpec::default()
            };
            commands::synth(&spec, &s.out)?;
            println!("wrote synthetic corpus to {}", s.out.display());
        }
        Command::Serve(s) => {
            let artifacts = Artifacts::load(&s.out, s.family.map(|f| f.short_name()))?;
            let addr = SocketAddr::new(s.host, s.port);
            tokio::runtime::Runtime::new()?.block_on(service::serve(artifacts, addr))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
