use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use vortexlink::config::{parse_config, Study};
use vortexlink::study::run;

/// Environment variable holding the worker thread count.
const THREADS_ENV: &str = "VORTEXLINK_THREADS";

#[derive(Parser, Debug)]
#[command(name = "vortexlink", version, about = "OAM radio link, field and network simulator")]
struct Cli {
    /// Study to run
    #[arg(value_enum)]
    study: Study,

    /// Flat TOML configuration file
    #[arg(long)]
    config: PathBuf,

    /// Output directory for CSV artifacts
    #[arg(long)]
    out: PathBuf,

    /// Overrides the seed given in the configuration
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("warning: could not size thread pool: {e}");
                }
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got `{v}`");
                return ExitCode::from(2);
            }
        }
    }

    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: io: {}: {e}", cli.config.display());
            return ExitCode::FAILURE;
        }
    };
    let mut config = match parse_config(&text, Some(cli.study)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    println!("study = {}", config.study);
    println!("seed = {}", config.seed);

    match run(&config, &cli.out) {
        Ok(report) => {
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
