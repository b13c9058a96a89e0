//! `arion` - one binary binding the permutation, the sponge hash, circuit
//! emission, cost counting, security estimation and the lab instruments.
//! All machine output is JSON on stdout; diagnostics go to stderr as JSON
//! objects. Exit codes: 0 success, 1 validation/usage error, 2 internal
//! invariant failure.

mod commands;
mod io;

use clap::{Parser, Subcommand};

use arion_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "arion", version, about = "Arion permutation and ArionHash toolkit")]
struct Cli {
    /// Cap internal parallelism at this many threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive a parameter set from a seed and write it as JSON.
    GenParams(commands::gen::GenParamsArgs),
    /// Apply the (keyed) permutation to a state.
    Permute(commands::eval::PermuteArgs),
    /// Hash field elements or a byte file in sponge mode.
    Hash(commands::eval::HashArgs),
    /// Build a Merkle tree over leaves; prove or verify membership.
    Merkle(commands::eval::MerkleArgs),
    /// Evaluate a published constraint-count formula.
    Count(commands::circuits::CountArgs),
    /// Emit the hash circuit as an R1CS file (optionally with a witness).
    R1csEmit(commands::circuits::R1csEmitArgs),
    /// Check a witness against an emitted system.
    R1csCheck(commands::circuits::R1csCheckArgs),
    /// Run every security estimator against a parameter set.
    Estimate(commands::analysis::EstimateArgs),
    /// Small-prime brute-force instruments.
    #[command(subcommand)]
    Lab(commands::analysis::LabCommand),
    /// Emit the self-contained test-vector bundle for the built-in profiles.
    Vectors(commands::gen::VectorsArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap's rendered message is for humans; the machine-readable
            // diagnostic goes first.
            eprintln!(
                "{}",
                serde_json::json!({"error": err.to_string().lines().next().unwrap_or("usage"), "kind": "usage"})
            );
            eprintln!("{err}");
            std::process::exit(1);
        }
    };
    if let Some(threads) = cli.threads {
        // Ignore failure: the global pool can only be set once (tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    let result = match cli.command {
        Command::GenParams(args) => commands::gen::run_gen_params(args),
        Command::Permute(args) => commands::eval::run_permute(args),
        Command::Hash(args) => commands::eval::run_hash(args),
        Command::Merkle(args) => commands::eval::run_merkle(args),
        Command::Count(args) => commands::circuits::run_count(args),
        Command::R1csEmit(args) => commands::circuits::run_r1cs_emit(args),
        Command::R1csCheck(args) => commands::circuits::run_r1cs_check(args),
        Command::Estimate(args) => commands::analysis::run_estimate(args),
        Command::Lab(cmd) => commands::analysis::run_lab(cmd),
        Command::Vectors(args) => commands::gen::run_vectors(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            let internal = err
                .downcast_ref::<CoreError>()
                .is_some_and(|e| matches!(e, CoreError::InternalInvariant(_)));
            let kind = if internal { "internal" } else { "validation" };
            eprintln!("{}", serde_json::json!({"error": err.to_string(), "kind": kind}));
            std::process::exit(if internal { 2 } else { 1 });
        }
    }
}
