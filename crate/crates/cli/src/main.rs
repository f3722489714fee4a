use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use coset_mtc::Tolerances;

mod args;
mod cache;
mod commands;
mod emit;
mod error;

use args::{Cli, Command};
use cache::Cache;
use commands::{Context, Outcome};
use error::CliError;

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = &cli.config;
    let tol = Tolerances::new(cfg.tolerance, cfg.integer_tolerance)?;
    let cache = (!cfg.no_cache)
        .then(|| Cache::new(cfg.cache_dir.clone().unwrap_or_else(Cache::default_dir)));
    let ctx = Context { tol, cache };
    match &cli.command {
        Command::Wzw { n, level, emit } => commands::wzw(&ctx, *n, *level, *emit),
        Command::Coset { n, m1, m2, emit } => commands::coset(&ctx, *n, *m1, *m2, *emit),
        Command::Kw(a) => commands::kw(&ctx, a),
        Command::Invariant(a) => commands::invariant(&ctx, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| {
        let text = emit::render(cli.config.format, &o.emission)?;
        Ok((text, o.passed))
    });
    match result {
        Ok((text, passed)) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
