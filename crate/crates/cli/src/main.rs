use std::path::PathBuf;
use std::process::ExitCode;

use channel_gauge_cli::commands::{self, CertifyArgs, Source, DEFAULT_BUDGET, DEFAULT_TOL};
use channel_gauge_cli::json::to_canonical_string;
use channel_gauge_cli::CliError;
use clap::{Args, Parser, Subcommand};

/// Certify non-mixed-unitarity of quantum channels and compute channel distances.
#[derive(Parser)]
#[command(name = "channel-gauge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Channel, Schur-matrix, mixture or state file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in channel.
    #[arg(long, value_parser = ["example1", "example2"])]
    builtin: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for the random multi-starts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Common {
    fn source(&self) -> Result<Source, CliError> {
        match (&self.input, &self.builtin) {
            (Some(p), None) => Ok(Source::File(p.clone())),
            (None, Some(b)) => Ok(Source::Builtin(b.clone())),
            _ => Err(CliError::Parse("pass exactly one of --input and --builtin".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lower-bound the distance to the mixed-unitary channels and issue a verdict.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Threshold on c_phi.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Number of tensor copies the bound is claimed for.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Pricing rounds for the upper bound
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Diamond distance between two channels.
    Diamond {
        #[command(flatten)]
        common: Common,
        /// Second channel file
        #[arg(long)]
        input_b: PathBuf,
    },
    /// Lower and upper bounds for a Schur channel.
    Bound {
        #[command(flatten)]
        common: Common,
        /// Pricing rounds for the upper bound
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Optimal discrimination of two states, or of two channels at a fixed input.
    Discriminate {
        #[command(flatten)]
        common: Common,
        /// Second state or channel; without it the channel is compared with its Uhlmann mixture
        #[arg(long)]
        input_b: Option<PathBuf>,
        /// Input state for channel discrimination.
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(String, Option<PathBuf>), CliError> {
    let (report, common) = match cli.command {
        Command::Certify { common, tol, n, budget } => {
            let args = CertifyArgs {
                source: common.source()?,
                tol,
                n,
                budget,
                seed: common.seed,
            };
            (commands::certify(&args)?, common)
        }
        Command::Diamond { common, input_b } => (commands::diamond(&common.source()?, &Source::File(input_b))?, common),
        Command::Bound { common, budget } => (commands::bound(&common.source()?, budget, common.seed)?, common),
        Command::Discriminate { common, input_b, state } => {
            let b = input_b.map(Source::File);
            let s = state.map(Source::File);
            (commands::discriminate(&common.source()?, b.as_ref(), s.as_ref())?, common)
        }
    };
    Ok((to_canonical_string(&report), common.output))
}

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var("CHANNEL_GAUGE_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Parse(format!("CHANNEL_GAUGE_THREADS must be a positive integer, got {s:?}"))),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads().and_then(|n| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = n {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| CliError::Parse(e.to_string()))?;
        let (text, output) = pool.install(|| run(cli))?;
        match output {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("channel-gauge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
