use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands;
use crate::{CliError, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "cosetcx", version, about = "Coset complexes of EL_{n+1}(F_q[t]/(t^s)): build, verify, certify")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Output directory (same as `--set out=DIR`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the summary on stdout.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the group and write complex.json, skeleton.dot and group.cxg.
    Build,
    /// Check the axioms at full and link level; writes axioms.json.
    VerifyAxioms,
    /// Run the whole pipeline; writes certificate.json.
    Certify,
    /// Link spectra and the expansion certificate; writes spectra.csv and spectra.json.
    Spectra,
    /// Group-algebra angle against link spectra; writes ortho.json.
    Ortho,
    /// Dihedral, transitivity and commutator audits; writes symmetry.json.
    Symmetry,
    /// Reduction to a smaller truncation; writes quotient.json.
    Quotient {
        /// Target truncation s'; defaults to s - 1.
        #[arg(long)]
        target: Option<usize>,
    },
    /// Validate a certificate and print its summary.
    Report { bundle: PathBuf },
}

fn execute(args: Args) -> Result<commands::Outcome, CliError> {
    if let Command::Report { bundle } = &args.command {
        return commands::cmd_report(bundle);
    }
    let mut sets = args.set.clone();
    if let Some(o) = &args.out {
        sets.push(format!("out={}", o.display()));
    }
    if let Command::Quotient { target: Some(t) } = &args.command {
        sets.push(format!("target={t}"));
    }
    let cfg = RunConfig::load(args.config.as_deref(), &sets)?;
    match args.command {
        Command::Build => commands::cmd_build(&cfg),
        Command::VerifyAxioms => commands::cmd_verify_axioms(&cfg),
        Command::Certify => commands::cmd_certify(&cfg),
        Command::Spectra => commands::cmd_spectra(&cfg),
        Command::Ortho => commands::cmd_ortho(&cfg),
        Command::Symmetry => commands::cmd_symmetry(&cfg),
        Command::Quotient { .. } => commands::cmd_quotient(&cfg),
        Command::Report { .. } => unreachable!(),
    }
}

/// Parses `argv`, runs the command and returns the process exit code:
/// 0 when every check passed, 1 on a failed check or runtime error, 2 on
/// usage and configuration errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let quiet = args.quiet;
    match execute(args) {
        Ok(out) => {
            if !quiet {
                print!("{}", out.summary);
                for f in &out.files {
                    println!("wrote {}", f.display());
                }
            }
            if out.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
