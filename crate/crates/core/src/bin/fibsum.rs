use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fibsum::report::{
    eval_series, fuzz_identities, render_markdown, render_text, verify_catalog, RunConfig,
};
use fibsum::{fib_capped, lucas_capped, quad::phi_pow_capped, sqrt5_convergent, Limits, Verdict};

/// Exit status when a verification record fails or a fuzz case breaks.
const EXIT_FAILED: u8 = 1;
/// Exit status for uncertified records under `--strict`.
const EXIT_UNCERTIFIED: u8 = 3;
/// Exit status for evaluation errors (parse, domain, caps, io).
const EXIT_ERROR: u8 = 4;

#[derive(Parser)]
#[command(
    name = "fibsum",
    version,
    about = "Fibonacci series with certified digits"
)]
struct Cli {
    /// Largest |n| for any F(n) or L(n)
    #[arg(long, global = true, env = "FIBSUM_INDEX_CAP", default_value_t = fibsum::DEFAULT_INDEX_CAP)]
    index_cap: u64,
    /// Most terms a single summation may use
    #[arg(long, global = true, env = "FIBSUM_TERM_CAP", default_value_t = 10_000)]
    term_cap: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print F(n)
    Fib {
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Print L(n)
    Lucas {
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Print Phi^n as a + b√5
    PhiPow {
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Sum a series, e.g. "type1 arith:1,1 k=2" or "recip geom:1,2 from=0"
    Eval {
        spec: String,
        #[arg(long, default_value_t = 25)]
        digits: u32,
    },
    /// Verify the identity catalog
    Verify {
        #[arg(long, default_value_t = 25)]
        digits: u32,
        /// Exit non-zero when any record is not certified
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = RunConfig::default().seed)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
    /// Check random Fibonacci/Lucas/Phi identities
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = RunConfig::default().seed)]
        seed: u64,
    },
    /// Print continued-fraction convergents of √5
    Convergents {
        #[arg(long, default_value_t = 8)]
        count: u64,
    },
}

fn run(cli: Cli) -> Result<u8, Box<dyn std::error::Error>> {
    let limits = Limits {
        index_cap: cli.index_cap,
        term_cap: cli.term_cap,
        ..Limits::default()
    };
    match cli.cmd {
        Cmd::Fib { n } => println!("{}", fib_capped(n, limits.index_cap)?),
        Cmd::Lucas { n } => println!("{}", lucas_capped(n, limits.index_cap)?),
        Cmd::PhiPow { n } => println!("{}", phi_pow_capped(n, limits.index_cap)?),
        Cmd::Eval { spec, digits } => {
            let out = eval_series(&spec, digits, limits)?;
            println!("{out}");
            if !out.result.certified {
                return Ok(EXIT_UNCERTIFIED);
            }
        }
        Cmd::Verify {
            digits,
            strict,
            seed,
            json,
            markdown,
        } => {
            let config = RunConfig {
                digits,
                limits,
                seed,
                ..RunConfig::default()
            };
            let records = verify_catalog(&config);
            print!("{}", render_text(&records));
            if let Some(path) = json {
                fs::write(path, serde_json::to_string_pretty(&records)? + "\n")?;
            }
            if let Some(path) = markdown {
                fs::write(path, render_markdown(&records, &config))?;
            }
            let count = |v| records.iter().filter(|r| r.status == v).count();
            let (failed, uncertified) = (count(Verdict::Failed), count(Verdict::NonCertified));
            println!(
                "{} records: {} verified, {} non_certified, {} failed (seed {seed})",
                records.len(),
                count(Verdict::Verified),
                uncertified,
                failed
            );
            if failed > 0 {
                return Ok(EXIT_FAILED);
            }
            if uncertified > 0 {
                if strict {
                    return Ok(EXIT_UNCERTIFIED);
                }
                eprintln!(
                    "warning: {uncertified} records could not be certified to {digits} digits"
                );
            }
        }
        Cmd::Fuzz { samples, seed } => {
            let summary = fuzz_identities(samples, seed, limits.index_cap)?;
            println!("{summary}");
            if !summary.passed() {
                return Ok(EXIT_FAILED);
            }
        }
        Cmd::Convergents { count } => {
            for n in 1..=count {
                let c = sqrt5_convergent(n)?;
                println!("{n:>3}  {}/{}", c.numer(), c.denom());
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
