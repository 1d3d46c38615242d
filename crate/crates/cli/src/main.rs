use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rebuf::config::OutputFormat;
use rebuf::error::{CliError, Result};
use rebuf::report::{emit, format_summary, sig6};
use rebuf::runner::{run_experiment, summarize};
use rebuf::seqfile::{format_sequence, read_sequence, write_sequence};
use rebuf::trace::render_trace;
use rebuf::RunConfig;
use rebuf_core::{
    blocks_lower_bound, count_switches, k_min_branches, optimal_blocks_with_limits, profile,
    sample_sequence, simulate, DistributionSpec, OracleLimits, StrategyKind,
};

#[derive(Parser)]
#[command(name = "rebuf", version, about = "Reordering buffer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one strategy over a sequence file.
    Simulate {
        /// Sequence file.
        input: PathBuf,
        /// Buffer size.
        #[arg(long)]
        k: usize,
        /// mcf, bw, rc or picky.
        #[arg(long, default_value = "mcf")]
        strategy: StrategyKind,
        /// Seed for rc.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the stage table.
        #[arg(long)]
        trace: bool,
    },
    /// Run an experiment grid described by a config file.
    Experiment(ExperimentArgs),
    /// Write a random sequence file.
    Generate {
        /// Distribution, e.g. `uniform` or `zipf:a=1.1`.
        #[arg(long)]
        spec: DistributionSpec,
        /// Number of items.
        #[arg(long)]
        n: usize,
        /// Number of colors.
        #[arg(long)]
        sigma: usize,
        /// Generator seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum buffer size from a sequence file or from explicit counts.
    Kmin {
        /// Sequence file to profile.
        #[arg(long, conflicts_with_all = ["o1", "o2", "sigma"])]
        file: Option<PathBuf>,
        /// Count of the most frequent color.
        #[arg(long, requires_all = ["o2", "sigma"])]
        o1: Option<usize>,
        /// Count of the second most frequent color.
        #[arg(long)]
        o2: Option<usize>,
        /// Number of colors.
        #[arg(long)]
        sigma: Option<usize>,
    },
    /// Exact minimum number of blocks for a small sequence.
    Oracle {
        /// Sequence file.
        input: PathBuf,
        /// Buffer size.
        #[arg(long)]
        k: usize,
        /// Largest accepted input length.
        #[arg(long, default_value_t = OracleLimits::default().max_n)]
        max_n: usize,
        /// Largest accepted number of colors.
        #[arg(long, default_value_t = OracleLimits::default().max_sigma)]
        max_sigma: usize,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// Config file; the reference grid when absent.
    config: Option<PathBuf>,
    /// Overrides the config's output path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overrides the config's format (csv or json).
    #[arg(long)]
    format: Option<String>,
    /// Overrides the config's worker count.
    #[arg(long)]
    parallelism: Option<usize>,
    /// Overrides the config's base seed.
    #[arg(long, env = "REBUF_SEED")]
    seed: Option<u64>,
    /// Print the per-distribution summary on stderr.
    #[arg(long)]
    summary: bool,
    /// No progress counter.
    #[arg(long, short)]
    quiet: bool,
}

fn cmd_simulate(
    input: PathBuf,
    k: usize,
    strategy: StrategyKind,
    seed: Option<u64>,
    trace: bool,
) -> Result<()> {
    let file = read_sequence(&input)?;
    let items = file.items;
    let result = simulate(&items, k, strategy, seed)?;
    let mut out = String::new();
    if trace {
        out.push_str(&render_trace(&items, k, &result)?);
        out.push('\n');
    }
    let (sin, sout) = (count_switches(&items), count_switches(&result.output));
    let ratio = if sin == 0 {
        f64::NAN
    } else {
        sout as f64 / sin as f64
    };
    let excess = if items.is_empty() {
        0.0
    } else {
        result.skipped_count as f64 / items.len() as f64
    };
    out.push_str(&format!("output: {}\n", result.output));
    out.push_str(&format!("blocks: {}\n", result.output.blocks()));
    out.push_str(&format!("switches: {sin} -> {sout}\n"));
    out.push_str(&format!("switch_ratio: {}\n", sig6(ratio)));
    out.push_str(&format!("skipped: {}\n", result.skipped_count));
    out.push_str(&format!("excess_run: {}\n", sig6(excess)));
    print!("{out}");
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::read(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.grid.base_seed = seed;
    }
    if let Some(p) = args.parallelism {
        cfg.parallelism = p;
    }
    if let Some(f) = &args.format {
        cfg.format = f.parse::<OutputFormat>()?;
    }
    if args.output.is_some() {
        cfg.output = args.output;
    }
    let quiet = args.quiet;
    let progress = move |done: usize, total: usize| {
        if !quiet {
            eprint!("\rcell {done}/{total}");
            if done == total {
                eprintln!();
            }
            let _ = std::io::stderr().flush();
        }
    };
    let rows = run_experiment(&cfg, &progress)?;
    let summary = summarize(&rows, &cfg.strategies);
    emit(&cfg, &rows, &summary)?;
    if args.summary {
        eprint!("{}", format_summary(&summary));
    }
    Ok(())
}

fn cmd_generate(
    spec: DistributionSpec,
    n: usize,
    sigma: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<()> {
    let items = sample_sequence(&spec, n, sigma, seed)?;
    match out {
        Some(path) => write_sequence(&path, &items, &spec, sigma, seed),
        None => {
            print!("{}", format_sequence(&items, &spec, sigma, seed));
            Ok(())
        }
    }
}

fn cmd_kmin(
    file: Option<PathBuf>,
    o1: Option<usize>,
    o2: Option<usize>,
    sigma: Option<usize>,
) -> Result<()> {
    let (o1, o2, sigma) = match (file, o1, o2, sigma) {
        (Some(path), ..) => {
            let p = profile(&read_sequence(&path)?.items);
            (p.o1, p.o2, p.sigma)
        }
        (None, Some(o1), Some(o2), Some(sigma)) => (o1, o2, sigma),
        _ => {
            return Err(CliError::Config(
                "kmin needs --file or all of --o1, --o2, --sigma".into(),
            ))
        }
    };
    let b = k_min_branches(o1, o2, sigma)?;
    println!("k_min: {}", b.k_min);
    println!("by_o1: {}", b.by_o1);
    println!("by_o2: {}", b.by_o2);
    println!("o1={o1} o2={o2} sigma={sigma}");
    Ok(())
}

fn cmd_oracle(input: PathBuf, k: usize, max_n: usize, max_sigma: usize) -> Result<()> {
    let items = read_sequence(&input)?.items;
    let opt = optimal_blocks_with_limits(&items, k, OracleLimits { max_n, max_sigma })?;
    println!("optimal_blocks: {opt}");
    println!("lower_bound: {}", blocks_lower_bound(&items));
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            input,
            k,
            strategy,
            seed,
            trace,
        } => cmd_simulate(input, k, strategy, seed, trace),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Generate {
            spec,
            n,
            sigma,
            seed,
            out,
        } => cmd_generate(spec, n, sigma, seed, out),
        Command::Kmin {
            file,
            o1,
            o2,
            sigma,
        } => cmd_kmin(file, o1, o2, sigma),
        Command::Oracle {
            input,
            k,
            max_n,
            max_sigma,
        } => cmd_oracle(input, k, max_n, max_sigma),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
