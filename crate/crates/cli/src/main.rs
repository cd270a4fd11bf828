//! `pt3`: formula checks, counts, character-sum bounds, sieve tables and the
//! certification chain for primitive polynomials with three prescribed
//! coefficients.

mod commands;
mod output;
mod ranges;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{Exit, Format, Report};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pt3", version, about = "Primitive polynomials with three prescribed coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here; a short summary still goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

/// A prescribed triple, given as traces or as coefficients.
#[derive(Args, Clone, Debug)]
pub struct TripleArgs {
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    c: Option<u64>,
    /// Every triple of F_q^3.
    #[arg(long, conflicts_with_all = ["a", "b", "c"])]
    all: bool,
    /// How --a/--b/--c are read.
    #[arg(long, value_enum, default_value_t = Input::Traces)]
    input: Input,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Input {
    /// (Tr x, Tr x^2, Tr x^3)
    Traces,
    /// f(x) = x^n - f1 x^{n-1} + f2 x^{n-2} - f3 x^{n-3} + ...
    Signed,
    /// f(x) = x^n + g1 x^{n-1} + g2 x^{n-2} + g3 x^{n-3} + ...
    Unsigned,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TierArg {
    Scalar,
    Parallel,
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectArg {
    /// Witness searches, reusing PT3_CACHE_DIR when set.
    Compute,
    /// Take the reported computer checks as given.
    Reported,
    /// No direct checks.
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-check the trace formula, the Newton recursion and the coefficients of random irreducibles.
    VerifyFormula {
        #[arg(long)]
        q: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Indices to check (default: 1..=n/2).
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
    },
    /// Count e-free (by default primitive) elements by trace triple.
    Count {
        #[arg(long)]
        q: String,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        triple: TripleArgs,
        /// A divisor of q^n - 1 (default q^n - 1, i.e. primitive elements).
        #[arg(long)]
        e: Option<u64>,
        #[arg(long, value_enum, default_value_t = TierArg::Parallel)]
        tier: TierArg,
    },
    /// Evaluate the character sums T_1..T_8 directly and test each against its bound.
    CharsumCheck {
        #[arg(long)]
        q: String,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        triple: TripleArgs,
        /// Also check the counting identity for every squarefree e | q^n - 1.
        #[arg(long)]
        identity: bool,
    },
    /// Evaluate the sufficiency condition (7 <= n <= 12) or the large-n resolver (n >= 13).
    Bounds {
        #[arg(long)]
        q: String,
        #[arg(long)]
        n: String,
        /// zeros, nonzeros, or a zero pattern such as 0b0 or abc.
        #[arg(long, default_value = "zeros")]
        pattern: String,
    },
    /// Regenerate the sieving tables and exception lists and diff them against the printed values.
    Tables {
        #[arg(long, default_value = "7..12")]
        n: String,
        /// zeros or nonzeros (default: both).
        #[arg(long)]
        pattern: Option<String>,
        /// Skip the comparison with the printed tables.
        #[arg(long)]
        no_golden: bool,
        /// Known-discrepancy ledger to use instead of the bundled one (JSON).
        #[arg(long, conflicts_with = "no_golden")]
        ledger: Option<PathBuf>,
    },
    /// Run the certification chain bound | table | sieve | direct | UNRESOLVED.
    Certify {
        #[arg(long, default_value = "5..1000")]
        q: String,
        #[arg(long, default_value = "7..12")]
        n: String,
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, value_enum, default_value_t = DirectArg::Compute)]
        direct_mode: DirectArg,
        /// Run witness searches for every survivor, not only the reported ones.
        #[arg(long)]
        direct_all: bool,
        /// Print only the summary in text mode.
        #[arg(long)]
        summary: bool,
    },
    /// List the possible exceptions of a sieving table and how each is settled.
    Exceptions {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "zeros")]
        pattern: String,
        #[arg(long, value_enum, default_value_t = DirectArg::Compute)]
        direct_mode: DirectArg,
        #[arg(long)]
        direct_all: bool,
    },
}

fn run(cli: Cli) -> Result<Report, Exit> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Exit::config("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Exit::other(e.to_string()))?;
    }
    match cli.command {
        Command::VerifyFormula { q, n, samples, k } => commands::verify_formula(&q, n, samples, cli.seed, &k),
        Command::Count { q, n, triple, e, tier } => commands::count(&q, n, &triple, e, tier),
        Command::CharsumCheck { q, n, triple, identity } => commands::charsum_check(&q, n, &triple, identity),
        Command::Bounds { q, n, pattern } => commands::bounds(&q, &n, &pattern),
        Command::Tables {
            n,
            pattern,
            no_golden,
            ledger,
        } => commands::tables(&n, pattern.as_deref(), !no_golden, ledger.as_deref()),
        Command::Certify {
            q,
            n,
            pattern,
            direct_mode,
            direct_all,
            summary,
        } => commands::certify(&q, &n, pattern.as_deref(), direct_mode, direct_all, summary),
        Command::Exceptions {
            n,
            pattern,
            direct_mode,
            direct_all,
        } => commands::exceptions(n, &pattern, direct_mode, direct_all),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap's own code for usage errors is 2, which here means a failed check
            return ExitCode::from(if e.use_stderr() { output::EXIT_CONFIG } else { 0 });
        }
    };
    let (format, out) = (cli.format, cli.out.clone());
    match run(cli).and_then(|r| r.emit(format, out.as_deref())) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("pt3: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
