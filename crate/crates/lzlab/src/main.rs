use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lzlab::driver::{self, Command, Format, RunConfig, Suite};
use lzlab::Error;

/// Exact tables and verification suites for the mod-p opposite Lambda
/// algebra, the Dyer-Lashof algebra, the Dickson-Mui invariants and the
/// low-rank Lannes-Zarati homomorphisms.
#[derive(Parser)]
#[command(name = "lzlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension table and representatives of the Lambda-algebra homology
    Ext(CommonArgs),
    /// Dimension table of the Steenrod-annihilated subspace of R_s
    Ann(CommonArgs),
    /// Rank table of the chain-level projection per stem
    Phi(CommonArgs),
    /// Run a verification suite; exits nonzero on any falsification
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[command(flatten)]
        args: CommonArgs,
    },
    /// Membership report: invariant products inside the Steenrod-decomposables
    Conjecture(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Odd prime
    #[arg(long, default_value_t = 3)]
    p: u32,
    /// Homological degree (required for ext/ann/phi/conjecture)
    #[arg(long)]
    s: Option<usize>,
    /// Largest stem / internal degree
    #[arg(long = "t-max", default_value_t = 60)]
    t_max: i64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Directory for the persistent pair-rewrite cache
    /// (defaults to $LZLAB_CACHE when set)
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    /// Worker threads; 0 uses all cores
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Seed for the randomized suites
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the feasibility caps
    #[arg(long)]
    force: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, ValueEnum)]
enum SuiteArg {
    Adem,
    Differential,
    Dickson,
    Uv,
    Duality,
    Power,
    Theorems,
    All,
}

fn to_config(command: Command, a: &CommonArgs) -> RunConfig {
    RunConfig {
        p: a.p,
        s: a.s,
        t_max: a.t_max,
        command,
        format: match a.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        },
        cache_dir: a
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os("LZLAB_CACHE").map(PathBuf::from)),
        jobs: a.jobs,
        seed: a.seed,
        force: a.force,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match &cli.command {
        Cmd::Ext(a) => to_config(Command::Ext, a),
        Cmd::Ann(a) => to_config(Command::Ann, a),
        Cmd::Phi(a) => to_config(Command::Phi, a),
        Cmd::Verify { suite, args } => to_config(
            Command::Verify(match suite {
                SuiteArg::Adem => Suite::Adem,
                SuiteArg::Differential => Suite::Differential,
                SuiteArg::Dickson => Suite::Dickson,
                SuiteArg::Uv => Suite::Uv,
                SuiteArg::Duality => Suite::Duality,
                SuiteArg::Power => Suite::Power,
                SuiteArg::Theorems => Suite::Theorems,
                SuiteArg::All => Suite::All,
            }),
            args,
        ),
        Cmd::Conjecture(a) => to_config(Command::Conjecture, a),
    };

    match driver::run(&cfg) {
        Ok((doc, pass)) => {
            println!("{}", doc.render(cfg.format));
            if pass {
                ExitCode::SUCCESS
            } else {
                for v in doc.verdicts.iter().filter(|v| !v.pass) {
                    eprintln!("lzlab: FALSIFIED {}: {}", v.name, v.detail);
                }
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("lzlab: error: {e}");
            match e {
                Error::Usage(_) | Error::InvalidPrime(_) => ExitCode::from(1),
                Error::DualityFalsified { .. } | Error::ImageOutsideAnn { .. } => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}
