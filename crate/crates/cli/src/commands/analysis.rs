//! `estimate` and the `lab` subcommands.

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use serde_json::json;

use arion_core::lab::{density_experiment, exhaustive_bijection_check, mds_check};
use arion_core::params::{ArionParameters, GenerateOptions, Mode};
use arion_core::security::full_report;
use arion_core::PrimeModulus;

use crate::io::{emit, load_params, parse_prime};

#[derive(Args)]
pub struct EstimateArgs {
    #[arg(long)]
    params: PathBuf,
    /// Linear-algebra exponent in [2, 2.3727].
    #[arg(long, default_value_t = 2.0)]
    omega: f64,
    /// Emit the full JSON report instead of the summary table.
    #[arg(long)]
    json: bool,
}

pub fn run_estimate(args: EstimateArgs) -> Result<i32> {
    let params = load_params(&args.params)?;
    let report = full_report(&params, args.omega)?;
    if args.json {
        let mut value = serde_json::to_value(&report)?;
        value["params_id"] = json!(params.id());
        emit(&value, None)?;
    } else {
        println!(
            "security levels for n={} r={} d1={} d2={} over p >= 2^{} (omega = {})",
            report.n, report.rounds, report.d1, report.d2, report.n_bits, report.omega
        );
        for entry in &report.entries {
            let flags = if entry.flags.is_empty() {
                String::new()
            } else {
                format!("  [{}]", entry.flags.join(", "))
            };
            println!(
                "  {:<24} {:>8} bits{}",
                format!("{:?}", entry.kind),
                entry.kappa_bits,
                flags
            );
        }
    }
    Ok(0)
}

#[derive(Subcommand)]
pub enum LabCommand {
    /// Interpolate the 2-round prefix over small primes and report densities.
    Density(DensityArgs),
    /// Exhaustively confirm bijectivity of a small instance.
    Bijection(BijectionArgs),
    /// Minor-enumeration MDS check of the mixing matrix.
    Mds(MdsArgs),
}

#[derive(Args)]
pub struct DensityArgs {
    /// Comma-separated primes.
    #[arg(long = "p", value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    d1: u64,
    #[arg(long, default_value_t = 3)]
    d2: u64,
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    /// Prefix length to interpolate.
    #[arg(long, default_value_t = 2)]
    rounds: usize,
}

#[derive(Args)]
pub struct BijectionArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    d1: Option<u64>,
    #[arg(long, default_value_t = 3)]
    d2: u64,
    #[arg(long, default_value_t = 2)]
    rounds: usize,
    #[arg(long, default_value = "6c6162")]
    seed: String,
}

#[derive(Args)]
pub struct MdsArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated primes: decimal, hex (0x...), bls12 or bn254.
    #[arg(long = "p", value_delimiter = ',')]
    primes: Vec<String>,
}

pub fn run_lab(cmd: LabCommand) -> Result<i32> {
    match cmd {
        LabCommand::Density(args) => {
            let reports =
                density_experiment(&args.primes, args.n, args.d1, args.d2, args.seeds, args.rounds)?;
            emit(&serde_json::to_value(&reports)?, None)?;
            Ok(0)
        }
        LabCommand::Bijection(args) => {
            let modulus = PrimeModulus::new(args.p.into())?;
            let seed = hex::decode(&args.seed).unwrap_or_else(|_| args.seed.clone().into_bytes());
            let params = ArionParameters::generate(
                modulus,
                args.n,
                args.d2,
                Mode::Standard,
                &seed,
                GenerateOptions {
                    rounds: Some(args.rounds),
                    d1: args.d1,
                    allow_unsafe_d2: true,
                    ..Default::default()
                },
            )?;
            let bijective = exhaustive_bijection_check(&params)?;
            emit(
                &json!({"p": args.p, "n": args.n, "rounds": args.rounds, "bijective": bijective}),
                None,
            )?;
            Ok(if bijective { 0 } else { 1 })
        }
        LabCommand::Mds(args) => {
            let mut results = Vec::new();
            let mut all = true;
            for spec in &args.primes {
                let modulus = match spec.parse::<u64>() {
                    Ok(p) => PrimeModulus::new(p.into())?,
                    Err(_) => parse_prime(spec)?,
                };
                let is_mds = mds_check(args.n, &modulus)?;
                all &= is_mds;
                results.push(json!({"p": spec, "n": args.n, "mds": is_mds}));
            }
            emit(&serde_json::Value::Array(results), None)?;
            Ok(if all { 0 } else { 1 })
        }
    }
}
