use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use carnot_steer::io::{parse_target, read_report, write_plot_data, write_report_json, write_trajectory_csv};
use carnot_steer::steer::DEFAULT_ACCEPTANCE;
use carnot_steer::{steer, verify, Error, Model, SteerOptions};

#[derive(Parser)]
#[command(name = "carnot-steer", version, about = "Steer the (3,6) and (4,7) Carnot groups along geodesics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the SO(3) invariants of a point.
    Invariants {
        #[arg(long)]
        model: Option<Model>,
        /// Target JSON, inline or a file path.
        #[arg(long)]
        target: String,
    },
    /// Find a geodesic from the origin to a point.
    Steer {
        #[arg(long)]
        model: Option<Model>,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 10.0)]
        kmax: f64,
        #[arg(long, default_value_t = 20.0)]
        tmax: f64,
        /// Residual bound for accepted roots.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 128)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Endpoint acceptance bound.
        #[arg(long, default_value_t = DEFAULT_ACCEPTANCE)]
        accept: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Directory for per-axis trajectory CSVs.
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
    },
    /// Re-check a steering report; exit status 0 iff every check passes.
    Verify { report: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InfeasibleTarget { .. } => 2,
        Error::DegenerateConfiguration(_) => 3,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Parse(_) | Error::InvalidPoint(_) => 4,
        _ => 1,
    }
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Invariants { model, target } => {
            let point = parse_target(&target, model)?;
            let inv = point.invariants();
            let map: serde_json::Map<String, serde_json::Value> = point
                .model()
                .invariant_names()
                .iter()
                .zip(inv.to_vec())
                .map(|(n, v)| (n.to_string(), v.into()))
                .collect();
            println!("{}", serde_json::to_string_pretty(&map)?);
            Ok(0)
        }
        Command::Steer {
            model,
            target,
            samples,
            kmax,
            tmax,
            tol,
            starts,
            seed,
            accept,
            out,
            format,
            emit_plot_data,
        } => {
            let point = parse_target(&target, model)?;
            let opts = SteerOptions {
                samples,
                k_max: kmax,
                t_max: tmax,
                tolerance: tol,
                starts,
                seed,
                acceptance: accept,
            };
            let report = steer(&point, &opts)?;
            let sink = output(&out)?;
            match format {
                Format::Json => write_report_json(&report, sink)?,
                Format::Csv => write_trajectory_csv(&report, sink)?,
            }
            if let Some(dir) = emit_plot_data {
                write_plot_data(&report, dir)?;
            }
            eprintln!(
                "t = {:.6}, endpoint error {:.3e}",
                report.t_final, report.endpoint_error
            );
            Ok(0)
        }
        Command::Verify { report } => {
            let report = read_report(report)?;
            let v = verify(&report);
            for c in &v.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(if v.passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
