//! `gen-params` and `vectors`.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde_json::json;

use arion_core::params::{ArionParameters, GenerateOptions, Mode, SpongeParameters};
use arion_core::permutation::{arion_permute, Direction};
use arion_core::sponge::arion_hash_single;
use arion_core::PrimeModulus;

use crate::io::{elements_to_hex, emit, parse_prime};

#[derive(Args)]
pub struct GenParamsArgs {
    /// bls12, bn254 or a hex prime.
    #[arg(long)]
    prime: String,
    /// State size (number of branches).
    #[arg(long)]
    n: usize,
    /// Low-degree exponent; defaults to the smallest valid choice.
    #[arg(long)]
    d1: Option<u64>,
    /// High-degree exponent from the supported chain set.
    #[arg(long, default_value_t = 257)]
    d2: u64,
    /// Round-number profile.
    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    mode: ModeArg,
    /// Derivation seed, hex.
    #[arg(long, default_value = "00")]
    seed: String,
    /// Override the round count (required for lab primes).
    #[arg(long)]
    rounds: Option<usize>,
    /// Accept a d2 outside the supported chain set (lab use).
    #[arg(long)]
    allow_unsafe_d2: bool,
    /// Draw fresh GTDS coefficients every round.
    #[arg(long)]
    per_round_coefficients: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum ModeArg {
    Standard,
    Aggressive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Standard => Mode::Standard,
            ModeArg::Aggressive => Mode::Aggressive,
        }
    }
}

pub fn run_gen_params(args: GenParamsArgs) -> Result<i32> {
    let modulus = parse_prime(&args.prime)?;
    let seed = hex::decode(&args.seed).context("seed must be hex")?;
    let params = ArionParameters::generate(
        modulus,
        args.n,
        args.d2,
        args.mode.into(),
        &seed,
        GenerateOptions {
            rounds: args.rounds,
            d1: args.d1,
            allow_unsafe_d2: args.allow_unsafe_d2,
            per_round_coefficients: args.per_round_coefficients,
        },
    )?;
    let value: serde_json::Value = serde_json::from_str(&params.to_json())?;
    emit(&value, args.out.as_deref())?;
    Ok(0)
}

#[derive(Args)]
pub struct VectorsArgs {
    /// Write one params/vectors file pair per profile into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

const VECTOR_SEED: &[u8] = b"arion-test-vectors-v1";
const HASH_VECTORS: usize = 20;
const PERMUTATION_VECTORS: usize = 5;

pub fn run_vectors(args: VectorsArgs) -> Result<i32> {
    let profiles: [(&str, fn() -> std::sync::Arc<PrimeModulus>, usize, usize); 4] = [
        ("bls12_n3_r6", PrimeModulus::bls12, 3, 6),
        ("bls12_n8_r4", PrimeModulus::bls12, 8, 4),
        ("bn254_n3_r6", PrimeModulus::bn254, 3, 6),
        ("bn254_n8_r4", PrimeModulus::bn254, 8, 4),
    ];
    let mut bundle = Vec::new();
    for (name, modulus, n, rounds) in profiles {
        let params = ArionParameters::generate(
            modulus(),
            n,
            257,
            Mode::Standard,
            VECTOR_SEED,
            GenerateOptions { rounds: Some(rounds), ..Default::default() },
        )?;
        let sponge = SpongeParameters::default_for(&params)?;

        let mut hash_vectors = Vec::with_capacity(HASH_VECTORS);
        for i in 0..HASH_VECTORS {
            // Message lengths cycle through 0..=4 blocks worth of elements.
            let len = i % 5 * sponge.rate + i % 3;
            let message = params.derive_elements(&format!("vector-msg/{i}"), len)?;
            let digest = arion_hash_single(&message, &params, &sponge)?;
            hash_vectors.push(json!({
                "params_id": params.id(),
                "input": elements_to_hex(&message),
                "digest": digest.to_hex(),
            }));
        }

        let mut permutation_vectors = Vec::with_capacity(PERMUTATION_VECTORS);
        for i in 0..PERMUTATION_VECTORS {
            let state = params.derive_elements(&format!("vector-state/{i}"), n)?;
            let key = params.derive_elements(&format!("vector-key/{i}"), n)?;
            let output = arion_permute(&state, Some(&key), &params, Direction::Forward)?;
            permutation_vectors.push(json!({
                "params_id": params.id(),
                "key": elements_to_hex(&key),
                "input": elements_to_hex(&state),
                "output": elements_to_hex(&output),
            }));
        }

        bundle.push(json!({
            "profile": name,
            "params": serde_json::from_str::<serde_json::Value>(&params.to_json())?,
            "sponge": {"rate": sponge.rate, "capacity": sponge.capacity},
            "hash_vectors": hash_vectors,
            "permutation_vectors": permutation_vectors,
        }));
    }
    let bundle = json!({"format": "arion-vectors-v1", "profiles": bundle});

    match args.out {
        Some(dir) => {
            std::fs::create_dir_all(&dir)
                .with_context(|| format!("cannot create {}", dir.display()))?;
            for profile in bundle["profiles"].as_array().unwrap() {
                let name = profile["profile"].as_str().unwrap();
                emit(&profile["params"], Some(&dir.join(format!("{name}.params.json"))))?;
                // Vector files are JSON lines: one object per vector.
                let mut lines = String::new();
                for v in profile["permutation_vectors"].as_array().unwrap() {
                    lines.push_str(&serde_json::to_string(v)?);
                    lines.push('\n');
                }
                std::fs::write(dir.join(format!("{name}.permute.jsonl")), lines)?;
                let mut lines = String::new();
                for v in profile["hash_vectors"].as_array().unwrap() {
                    lines.push_str(&serde_json::to_string(v)?);
                    lines.push('\n');
                }
                std::fs::write(dir.join(format!("{name}.hash.jsonl")), lines)?;
            }
            println!("{}", json!({"written": 4, "dir": dir.display().to_string()}));
        }
        None => emit(&bundle, None)?,
    }
    Ok(0)
}
