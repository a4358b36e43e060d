use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;

use proxregret::cli::{run_source, ConfigError, Overrides, RunOutcome, Source};

/// Run proximal-regret experiments described by TOML config files.
#[derive(Debug, Parser)]
#[command(name = "proxregret", version)]
struct Args {
    /// Experiment config, or a batch file listing configs. Repeatable.
    #[arg(long = "config", value_name = "PATH", required = true)]
    configs: Vec<PathBuf>,
    /// Output directory. With several experiments each writes to DIR/<stem>/.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override the seed of every experiment.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Exit with status 1 when a realized regret exceeds its bound.
    #[arg(long)]
    assert_bounds: bool,
    /// Number of experiments run concurrently.
    #[arg(long, value_name = "K", default_value_t = 1)]
    workers: usize,
}

/// Expands batch files into the experiment files they list.
fn expand(paths: &[PathBuf]) -> Result<Vec<Source>, ConfigError> {
    let mut out = Vec::new();
    for path in paths {
        let src = Source::read(path)?;
        if src.is_batch() {
            let batch = src.parse_batch()?;
            let base = src.base_dir();
            for entry in &batch.batch {
                let nested = Source::read(&base.join(entry))
                    .map_err(|e| src.error_at("batch", e.to_string()))?;
                if nested.is_batch() {
                    return Err(src.error_at("batch", format!("`{entry}` is itself a batch file")));
                }
                out.push(nested);
            }
        } else {
            out.push(src);
        }
    }
    Ok(out)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".into())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let sources = match expand(&args.configs) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        seed: args.seed,
        assert_bounds: args.assert_bounds,
    };
    let many = sources.len() > 1;
    let run_one = |src: &Source| -> Result<RunOutcome, ConfigError> {
        let out = match (&args.out, many) {
            (Some(dir), true) => Some(dir.join(stem(&src.path))),
            (Some(dir), false) => Some(dir.clone()),
            (None, true) => Some(PathBuf::from("out").join(stem(&src.path))),
            (None, false) => None,
        };
        run_source(src, out.as_deref(), &overrides)
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let results: Vec<_> = pool.install(|| sources.par_iter().map(run_one).collect());

    let mut code = 0u8;
    for result in results {
        match result {
            Ok(outcome) => {
                let s = &outcome.summary;
                println!(
                    "{}: mode {} comparators {} max regret {} violations {} -> {}",
                    outcome.out_dir.display(),
                    s.mode,
                    s.comparators,
                    s.max_regret.map_or("-".into(), |r| format!("{r:.6}")),
                    s.bound_violations,
                    if s.bounds_hold {
                        "ok"
                    } else {
                        "BOUND EXCEEDED"
                    },
                );
                code = code.max(outcome.exit_code());
            }
            Err(e) => {
                eprintln!("error: {e}");
                code = 2;
            }
        }
    }
    ExitCode::from(code)
}
