//! `count`, `r1cs-emit` and `r1cs-check`.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde_json::json;

use arion_core::constraints::counts::{
    count_plonk, count_r1cs, plonk_comparison_report, HashKind, Rounds,
};
use arion_core::constraints::{build_r1cs, generate_witness, ConstraintSystem, Witness};
use arion_core::field::FieldElement;
use arion_core::params::SpongeParameters;

use crate::io::{emit, load_params, parse_elements};

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum SchemeArg {
    R1cs,
    Plonk2,
    Plonk3,
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum HashArg {
    Arion,
    AggressiveArion,
    Griffin,
    Anemoi,
    Poseidon,
}

impl From<HashArg> for HashKind {
    fn from(h: HashArg) -> HashKind {
        match h {
            HashArg::Arion => HashKind::ArionHash,
            HashArg::AggressiveArion => HashKind::AggressiveArionHash,
            HashArg::Griffin => HashKind::Griffin,
            HashArg::Anemoi => HashKind::Anemoi,
            HashArg::Poseidon => HashKind::Poseidon,
        }
    }
}

#[derive(Args)]
pub struct CountArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[arg(long, value_enum)]
    hash: HashArg,
    #[arg(long)]
    n: u64,
    /// Low-degree / S-box exponent (alias: --d).
    #[arg(long, alias = "d", default_value_t = 3)]
    d1: u64,
    /// High-degree exponent (hash circuits only).
    #[arg(long)]
    d2: Option<u64>,
    /// Override the published round number.
    #[arg(long)]
    rounds: Option<u64>,
    /// Full rounds (Poseidon).
    #[arg(long, requires = "rp")]
    rf: Option<u64>,
    /// Partial rounds (Poseidon).
    #[arg(long, requires = "rf")]
    rp: Option<u64>,
    /// Also print the formula-vs-published comparison with deviation flags.
    #[arg(long)]
    compare: bool,
}

pub fn run_count(args: CountArgs) -> Result<i32> {
    let kind: HashKind = args.hash.into();
    let rounds = match (args.rounds, args.rf, args.rp) {
        (Some(r), None, None) => Some(Rounds::Simple(r)),
        (None, Some(full), Some(partial)) => Some(Rounds::Poseidon { full, partial }),
        (None, None, None) => None,
        _ => anyhow::bail!("pass either --rounds or --rf/--rp"),
    };
    let count = match args.scheme {
        SchemeArg::R1cs => count_r1cs(kind, args.n, args.d1, args.d2, rounds)?,
        SchemeArg::Plonk2 => count_plonk(kind, 2, args.n, args.d1, args.d2, rounds)?,
        SchemeArg::Plonk3 => count_plonk(kind, 3, args.n, args.d1, args.d2, rounds)?,
    };
    let formula = match (args.scheme, kind) {
        (SchemeArg::R1cs, HashKind::ArionHash | HashKind::AggressiveArionHash) => {
            "r*((n-1)*(d1_inc+2) + d2_inc)"
        }
        (SchemeArg::R1cs, HashKind::Griffin) => "2*r*(d_inc + n - 2)",
        (SchemeArg::R1cs, HashKind::Anemoi) => "(r*n/2)*(d_inc + 2)",
        (SchemeArg::R1cs, HashKind::Poseidon) => "d_inc*(n*rf + rp)",
        (SchemeArg::Plonk2, HashKind::ArionHash | HashKind::AggressiveArionHash) => {
            "r*((n-1)*(d1_inc+6) + d2_inc - 1) + (r+1)*layer2(n)"
        }
        (SchemeArg::Plonk3, HashKind::ArionHash | HashKind::AggressiveArionHash) => {
            "r*((n-1)*(d1_inc+4) + d2_inc) + (r+1)*layer3(n)"
        }
        (SchemeArg::Plonk2 | SchemeArg::Plonk3, _) => "published per-design gate formula",
    };
    let mut out = json!({
        "scheme": match args.scheme { SchemeArg::R1cs => "r1cs", SchemeArg::Plonk2 => "plonk2", SchemeArg::Plonk3 => "plonk3" },
        "hash": kind,
        "n": args.n,
        "d1": args.d1,
        "d2": args.d2,
        "count": count,
        "formula": formula,
    });
    if args.compare {
        out["comparison"] = serde_json::to_value(plonk_comparison_report())?;
    }
    emit(&out, None)?;
    Ok(0)
}

#[derive(Args)]
pub struct R1csEmitArgs {
    #[arg(long)]
    params: PathBuf,
    /// Message elements, comma-separated hex (may be empty).
    #[arg(long, default_value = "")]
    message: String,
    #[arg(long)]
    rate: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Also run the honest prover and write the witness here.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

pub fn run_r1cs_emit(args: R1csEmitArgs) -> Result<i32> {
    let params = load_params(&args.params)?;
    let n = params.branches();
    let rate = args.rate.unwrap_or(n - 1);
    let sponge = SpongeParameters::new(&params, rate, n - rate)?;
    let message = parse_elements(&args.message, params.modulus())?;

    let (system, witness, digest) = if args.witness_out.is_some() {
        let (cs, w) = generate_witness(&message, &params, &sponge)?;
        let digest = cs.output_value(&w)?;
        (cs, Some(w), Some(digest))
    } else {
        (build_r1cs(&params, &sponge, message.len())?, None, None)
    };
    std::fs::write(&args.out, system.to_json())
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    if let (Some(path), Some(w)) = (&args.witness_out, &witness) {
        std::fs::write(path, w.to_json())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    emit(
        &json!({
            "system": args.out.display().to_string(),
            "constraints": system.constraints.len(),
            "variables": system.num_vars,
            "public_inputs": system.public_inputs.len(),
            "digest": digest.as_ref().map(FieldElement::to_hex),
        }),
        None,
    )?;
    Ok(0)
}

#[derive(Args)]
pub struct R1csCheckArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long)]
    witness: PathBuf,
    /// Also require the output combination to evaluate to this digest.
    #[arg(long)]
    digest: Option<String>,
}

pub fn run_r1cs_check(args: R1csCheckArgs) -> Result<i32> {
    let system = ConstraintSystem::from_json(
        &std::fs::read_to_string(&args.system)
            .with_context(|| format!("cannot read {}", args.system.display()))?,
    )?;
    let witness = Witness::from_json(
        &std::fs::read_to_string(&args.witness)
            .with_context(|| format!("cannot read {}", args.witness.display()))?,
        &system.modulus,
    )?;
    system.check_shape(&witness)?;
    let failing = system.failing_constraints(&witness);
    let output = system.output_value(&witness)?;
    let digest_ok = match &args.digest {
        Some(expect) => FieldElement::from_hex(expect, &system.modulus)? == output,
        None => true,
    };
    let satisfied = failing.is_empty() && digest_ok;
    emit(
        &json!({
            "satisfied": satisfied,
            "failing_constraints": failing,
            "output": output.to_hex(),
            "digest_matches": digest_ok,
        }),
        None,
    )?;
    Ok(if satisfied { 0 } else { 1 })
}
