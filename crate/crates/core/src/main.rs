use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use entangle_ssl::experiment::{self, ExperimentConfig, Method, RunOptions};
use entangle_ssl::Result;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Generate,
    Train,
    Eval,
    SweepBound,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Sl,
    Slk,
    Ssl,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Sl => Method::Sl,
            MethodArg::Slk => Method::Slk,
            MethodArg::Ssl => Method::Ssl,
        }
    }
}

/// Semi-supervised entanglement classification experiments.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON experiment config; may name a preset and override its fields.
    #[arg(long)]
    config: PathBuf,
    /// Preset to start from (overrides the config's "preset").
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum, default_value = "ssl")]
    method: MethodArg,
    /// Comma-separated seeds replacing the config's list.
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    /// Seeds run in parallel.
    #[arg(long, env = "ENTANGLE_SSL_THREADS", default_value_t = 1)]
    jobs: usize,
    /// Output directory [default: runs/<config name>].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accept inputs whose recorded config or file digests differ.
    #[arg(long)]
    force: bool,
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg: ExperimentConfig = experiment::load_config(&cli.config, cli.preset.as_deref())?;
    if let Some(seeds) = &cli.seed_list {
        cfg.seeds = seeds.clone();
        cfg.validate()?;
    }
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("runs").join(&cfg.name));
    let opts = RunOptions {
        out,
        jobs: cli.jobs,
        force: cli.force,
    };
    let method = Method::from(cli.method);
    if cfg.long_running {
        eprintln!("note: {} is a long-running preset", cfg.name);
    }
    match cli.command {
        Command::Generate => {
            let manifests = experiment::generate(&cfg, &opts)?;
            println!("generated {} seed(s) under {}", manifests.len(), opts.out.display());
        }
        Command::Train => {
            for r in experiment::train(&cfg, method, &opts)? {
                println!("seed {} {method}: validation accuracy {:.4}", r.seed, r.validation_accuracy);
            }
        }
        Command::Eval => {
            let summary = experiment::evaluate(&cfg, method, &opts)?;
            for (name, t) in &summary.tests {
                println!(
                    "{name} {method}: accuracy {:.4} ± {:.4}, auc {:.4} ± {:.4}",
                    t.accuracy.mean, t.accuracy.std, t.auc.mean, t.auc.std
                );
            }
        }
        Command::SweepBound => {
            let s = experiment::sweep_bound(&cfg, method, &opts)?;
            let fmt = |v: Option<f64>| v.map_or("-".to_owned(), |v| format!("{v:.4}"));
            println!(
                "n = {} k = {} {method}: mean b_hat {} (reference {}), RE of mean {}, mean RE {}",
                s.n,
                s.k,
                fmt(s.b_hat_mean),
                fmt(s.reference),
                fmt(s.relative_error_of_mean),
                fmt(s.mean_relative_error)
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
