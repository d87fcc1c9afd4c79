//! Command-line front end for `bernoulli-core`.
//!
//! [`dispatch`] parses an argument vector, runs one subcommand and returns
//! the exit code with the exact bytes for standard output and standard
//! error, so the binary and the tests share one code path.

pub mod args;
pub mod cache;
pub mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use cache::Cache;
use commands::{Body, Failure, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Where to look for cached results.
#[derive(Clone, Debug)]
pub enum CacheDir {
    /// `$BERNOULLI_CACHE` or the user cache directory.
    Default,
    At(PathBuf),
}

/// Runs `argv` (program name first) with the default cache location.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    dispatch_with(argv, CacheDir::Default)
}

pub fn dispatch_with<I, T>(argv: I, cache_dir: CacheDir) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: EXIT_OK, stdout: text, stderr: String::new() },
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut stderr = String::new();
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        let c = Cache::open(match cache_dir {
            CacheDir::Default => cache::default_dir(),
            CacheDir::At(p) => Some(p),
        });
        if let Some(w) = &c.warning {
            stderr.push_str(&format!("warning: {w}\n"));
        }
        c
    };
    let canonical = serde_json::to_string(&serde_json::to_value(&cli.command).expect("serializable")).expect("serializable");
    let digest = cache::request_digest(&canonical, TOOL_VERSION);
    if let Some(hit) = cache.lookup(&digest, TOOL_VERSION) {
        stderr.push_str(&format!("cached: true ({digest})\n"));
        return Outcome { code: hit.exit_code, stdout: hit.payload, stderr };
    }

    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| commands::run(&cli.command)),
            Err(e) => Err(Failure::Compute(format!("cannot start {j} workers: {e}"))),
        },
        None => commands::run(&cli.command),
    };
    match result {
        Ok(report) => {
            let stdout = match report.body {
                Body::Json(v) => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
                Body::Csv(s) => s,
            };
            if cache.is_enabled() {
                match cache.store(&digest, TOOL_VERSION, report.code, &stdout) {
                    Ok(()) => stderr.push_str(&format!("cached: false ({digest})\n")),
                    Err(e) => stderr.push_str(&format!("warning: cache write failed: {e}\n")),
                }
            }
            Outcome { code: report.code, stdout, stderr }
        }
        Err(Failure::Usage(msg)) => {
            stderr.push_str(&format!("error: {msg}\n"));
            Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
        }
        Err(Failure::Compute(msg)) => {
            stderr.push_str(&format!("error: {msg}\n"));
            Outcome { code: EXIT_INCONCLUSIVE, stdout: String::new(), stderr }
        }
    }
}
