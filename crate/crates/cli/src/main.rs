use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use wa_locus::oracle::{self, VerifyConfig};
use wa_locus::{persist, Direction, IndexOptions, LocusIndex};

mod bench;

#[derive(Parser)]
#[command(name = "wa-locus", version, about = "Constant-time suffix-tree locus queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a text file and write it to disk.
    Build {
        text: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Give every heavy path its own sampled array (debugging aid).
        #[arg(long)]
        no_share: bool,
    },
    /// Print the locus of s[p..=q] as one line of key=value pairs.
    Query {
        index: PathBuf,
        p: usize,
        q: usize,
        /// Also print the branching count in this direction.
        #[arg(long)]
        direction: Option<Direction>,
    },
    /// Check a text's index against brute-force oracles.
    Verify {
        text: PathBuf,
        /// Texts up to this length are checked on every (p, q).
        #[arg(long, default_value_t = 300)]
        n_cap: usize,
        /// Random queries for longer texts.
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Time locus queries per length bucket and print CSV.
    Bench {
        index: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        queries: usize,
        #[arg(long, value_enum, default_value_t = Profile::Fixed)]
        profile: Profile,
        /// Query lengths for the fixed profile: integers, `n` or `n/K`.
        #[arg(long, value_delimiter = ',', default_value = "1,16,n/4,n/2")]
        lengths: Vec<String>,
        /// Queries per bucket for the symbol-by-symbol descent baseline.
        #[arg(long, default_value_t = 200)]
        naive_queries: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Reader threads sharing the index.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Print structure statistics of a saved index.
    Stats {
        index: PathBuf,
        /// Only report this direction's structures.
        #[arg(long)]
        direction: Option<Direction>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Profile {
    /// Every listed length gets the full query count.
    Fixed,
    /// Uniform random (p, q), bucketed by the power of two below the length.
    Uniform,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_text(path: &PathBuf) -> anyhow::Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &PathBuf) -> anyhow::Result<LocusIndex> {
    persist::load_file(path).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Build { text, out, no_share } => {
            let raw = read_text(&text)?;
            let started = std::time::Instant::now();
            let index = LocusIndex::build(&raw, IndexOptions { share: !no_share })?;
            eprintln!("built in {:.3} s", started.elapsed().as_secs_f64());
            persist::save_file(&index, &out).with_context(|| format!("writing {}", out.display()))?;
            println!("{}", index.stats());
        }
        Command::Query { index, p, q, direction } => {
            let index = load(&index)?;
            let v = index.locus(p, q)?;
            let (start, len) = index.label(v);
            let mut line = format!(
                "p={p} q={q} node={v} depth={} label_start={start} label_len={len}",
                index.string_depth(v)
            );
            if let Some(dir) = direction {
                let c = index.count_branching_at_least(p, q - p + 1, dir);
                line.push_str(&format!(" count_{}={c}", dir.name()));
            }
            println!("{line}");
        }
        Command::Verify {
            text,
            n_cap,
            queries,
            seed,
        } => {
            let raw = read_text(&text)?;
            let index = wa_locus::build_index(&raw)?;
            let cfg = VerifyConfig { n_cap, queries, seed };
            let report = match oracle::verify(&index, &cfg) {
                Ok(r) => r,
                Err(m) => {
                    println!("FAIL {m}");
                    return Ok(ExitCode::FAILURE);
                }
            };
            let back = persist::from_bytes(&persist::to_bytes(&index))?;
            if back != index {
                println!("FAIL serialization round trip changed the index");
                return Ok(ExitCode::FAILURE);
            }
            println!(
                "PASS n={} mode={} locus={} count={} bp={} unshared={} round_trip=ok",
                report.n,
                if report.exhaustive { "exhaustive" } else { "sampled" },
                report.locus_checks,
                report.count_checks,
                report.bp_checks,
                report.unshared_checks
            );
        }
        Command::Bench {
            index,
            queries,
            profile,
            lengths,
            naive_queries,
            seed,
            threads,
        } => {
            if threads == 0 {
                bail!("--threads must be at least 1");
            }
            let index = load(&index)?;
            let cfg = bench::Config {
                queries,
                profile,
                lengths,
                naive_queries,
                seed,
                threads,
            };
            bench::run(&index, &cfg, std::io::stdout().lock())?;
        }
        Command::Stats { index, direction } => {
            let stats = load(&index)?.stats();
            match direction {
                None => println!("{stats}"),
                Some(dir) => {
                    let d = &stats.directions[dir.index()];
                    println!("n = {}", stats.n);
                    println!("irreducible LCP sum = {} ({})", d.irreducible_sum, dir.name());
                    println!("{d:#?}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
