use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use looplab::closedform::loop_cohomology;
use looplab::thom::{ct_assemble_z, SpaceDescriptor};
use looplab::verify::{
    compare_f2, compare_z, verify_ez, verify_main1, verify_steenrod, Main1Config, RunReport,
};
use looplab::Error;

#[derive(Parser)]
#[command(
    name = "looplab",
    version,
    about = "Verify free loop space cohomology computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one of the verification suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Compare CT(M) with the free loop space of M.
    Compare {
        #[arg(long)]
        space: SpaceDescriptor,
        #[arg(long, value_enum)]
        coeff: Coeff,
        #[arg(long, default_value_t = 100)]
        max_degree: u32,
        #[arg(long, default_value_t = 16)]
        max_sq: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Print a computed table: the loop-space module (json) or the integral homology of CT(M) (tsv).
    Dump {
        #[arg(long)]
        space: SpaceDescriptor,
        #[arg(long, value_enum)]
        coeff: Coeff,
        #[arg(long, default_value_t = 60)]
        max_degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Brute-force homology against the closed form and the Koszul oracle.
    Main1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
        /// Largest internal degree [default: 3(n+1)m]
        #[arg(long)]
        max_degree: Option<u32>,
        /// Skip the product and operation relations.
        #[arg(long)]
        dims_only: bool,
        /// Corrupt one face map (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Instability, Cartan and Adem on the loop-space cohomology.
    Steenrod {
        #[arg(long)]
        space: SpaceDescriptor,
        #[arg(long, default_value_t = 80)]
        max_degree: u32,
        #[arg(long, default_value_t = 16)]
        max_sq: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded random instances of the shuffle identities and lemmas.
    Ez {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    F2,
    Z,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(run: &RunReport, output: &Output) -> Result<ExitCode, Error> {
    let text = match output.format {
        Format::Tsv => run.to_tsv(),
        Format::Json => run.to_json() + "\n",
    };
    emit(&text, &output.out)?;
    Ok(ExitCode::from(run.exit_code() as u8))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Verify(VerifyCommand::Main1 {
            n,
            m,
            max_level,
            max_degree,
            dims_only,
            inject_fault,
            output,
        }) => {
            let mut cfg = Main1Config::new(n, m, max_level);
            cfg.max_degree = max_degree;
            cfg.relations = !dims_only;
            cfg.fault = inject_fault;
            let (run, _) = verify_main1(&cfg)?;
            report(&run, &output)
        }
        Command::Verify(VerifyCommand::Steenrod {
            space,
            max_degree,
            max_sq,
            output,
        }) => report(&verify_steenrod(&space, max_degree, max_sq)?, &output),
        Command::Verify(VerifyCommand::Ez {
            n,
            m,
            max_level,
            trials,
            seed,
            output,
        }) => report(&verify_ez(n, m, max_level, trials, seed)?, &output),
        Command::Compare {
            space,
            coeff,
            max_degree,
            max_sq,
            output,
        } => {
            let run = match coeff {
                Coeff::F2 => compare_f2(&space, max_degree, max_sq)?,
                Coeff::Z => compare_z(&space, max_degree)?,
            };
            report(&run, &output)
        }
        Command::Dump {
            space,
            coeff,
            max_degree,
            out,
        } => {
            let text = match coeff {
                Coeff::F2 => loop_cohomology(&space, max_degree)?.to_json() + "\n",
                Coeff::Z => ct_assemble_z(&space, max_degree)?.to_tsv(max_degree),
            };
            emit(&text, &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("LOOPLAB_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("looplab: {e}");
            match e {
                Error::Structural(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
