use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use tate_core::exec::Exec;
use tate_core::harness::{format_betti, run_build, run_verify, BuildOutput, HarnessError, ProblemInstance};
use tate_core::tate::{mcm_generator_count, structural_generator_count};

/// Tate resolutions and maximal Cohen-Macaulay approximations over graded
/// complete intersections.
#[derive(Parser)]
#[command(name = "tate", version)]
struct Cli {
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, certify and minimize the Tate resolution of an instance.
    Build {
        instance: PathBuf,
        /// Write the JSON output here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recompute the certificates of a build output from scratch.
    Verify {
        output: PathBuf,
        /// Largest internal degree to check.
        #[arg(long)]
        dmax: Option<i32>,
    },
    /// Print the Betti table of the minimized window.
    Betti { output: PathBuf },
    /// Print the presentation of the MCM approximation.
    Mcm { output: PathBuf },
    /// Evaluate the generator-count formula.
    CountFormula {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_output(path: &Path) -> Result<BuildOutput> {
    BuildOutput::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Build { instance, output } => {
            let text = read(&instance)?;
            let inst = ProblemInstance::from_json(&text).with_context(|| format!("in {}", instance.display()))?;
            let out = run_build(&inst, exec).with_context(|| format!("building {}", instance.display()))?;
            let json = out.to_json();
            match output {
                Some(path) => {
                    fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
                    println!("codim {}  twist {}", out.codim, out.twist);
                    print!("{}", format_betti(&out.betti));
                    println!("MCM approximation generators: {}", out.mcm.generator_count);
                }
                None => print!("{json}"),
            }
        }
        Command::Verify { output, dmax } => {
            let out = load_output(&output)?;
            let report = run_verify(&out, dmax, exec)?;
            println!("internal degrees {}..{}", report.degrees.0, report.degrees.1);
            print!("{}", report.to_text());
            report.ensure_passed()?;
        }
        Command::Betti { output } => {
            print!("{}", format_betti(&load_output(&output)?.betti));
        }
        Command::Mcm { output } => {
            let mcm = load_output(&output)?.mcm;
            println!("generators: {}", mcm.generator_count);
            println!("minimal: {}", mcm.minimal);
            println!("target twists: {:?}", mcm.target_twists);
            println!("source twists: {:?}", mcm.source_twists);
            for row in &mcm.matrix {
                println!("[{}]", row.join(", "));
            }
        }
        Command::CountFormula { n, c } => {
            if c == 0 || c > n {
                return Err(HarnessError::Validation(format!("need 1 <= c <= n, got n = {n}, c = {c}")).into());
            }
            println!("formula:    {}", mcm_generator_count(n, c));
            println!("structural: {}", structural_generator_count(n, c));
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<HarnessError>() {
        Some(h) => h.exit_code() as u8,
        None => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
