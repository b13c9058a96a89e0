//! `permute`, `hash` and `merkle`.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde_json::json;

use arion_core::field::FieldElement;
use arion_core::merkle::{merkle_verify, MerklePath, MerkleTree};
use arion_core::params::SpongeParameters;
use arion_core::permutation::{arion_permute, Direction};
use arion_core::sponge::{arion_hash, bytes_to_field_elements};

use crate::io::{elements_to_hex, emit, load_leaves, load_params, parse_elements, read_json_file};

#[derive(Args)]
pub struct PermuteArgs {
    #[arg(long)]
    params: PathBuf,
    /// Comma-separated hex state of length n.
    #[arg(long)]
    state: String,
    /// Comma-separated hex key of length n; omitted = unkeyed permutation.
    #[arg(long)]
    key: Option<String>,
    /// Apply the inverse direction.
    #[arg(long)]
    inverse: bool,
}

pub fn run_permute(args: PermuteArgs) -> Result<i32> {
    let params = load_params(&args.params)?;
    let state = parse_elements(&args.state, params.modulus())?;
    let key = args.key.as_deref().map(|k| parse_elements(k, params.modulus())).transpose()?;
    let direction = if args.inverse { Direction::Inverse } else { Direction::Forward };
    let output = arion_permute(&state, key.as_deref(), &params, direction)?;
    emit(
        &json!({
            "params_id": params.id(),
            "input": elements_to_hex(&state),
            "key": key.as_deref().map(elements_to_hex),
            "direction": if args.inverse { "inverse" } else { "forward" },
            "output": elements_to_hex(&output),
        }),
        None,
    )?;
    Ok(0)
}

#[derive(Args)]
pub struct HashArgs {
    #[arg(long)]
    params: PathBuf,
    /// Comma-separated hex field elements (may be empty for the empty message).
    #[arg(long, conflicts_with = "bytes")]
    input: Option<String>,
    /// Hash the raw bytes of this file instead.
    #[arg(long)]
    bytes: Option<PathBuf>,
    /// Sponge rate; defaults to n - 1.
    #[arg(long)]
    rate: Option<usize>,
    /// Sponge capacity; defaults to 1.
    #[arg(long)]
    capacity: Option<usize>,
    /// Digest length in field elements.
    #[arg(long, default_value_t = 1)]
    output_len: usize,
}

pub fn run_hash(args: HashArgs) -> Result<i32> {
    let params = load_params(&args.params)?;
    let n = params.branches();
    let rate = args.rate.unwrap_or(n - 1);
    let capacity = args.capacity.unwrap_or(n - rate.min(n - 1));
    let sponge = SpongeParameters::new(&params, rate, capacity)?.with_output_len(args.output_len);
    let message: Vec<FieldElement> = match (&args.input, &args.bytes) {
        (Some(input), None) => parse_elements(input, params.modulus())?,
        (None, Some(path)) => {
            let bytes = std::fs::read(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            bytes_to_field_elements(&bytes, &params)
        }
        (None, None) => bail!("pass --input or --bytes"),
        _ => unreachable!("clap conflicts_with"),
    };
    let digest = arion_hash(&message, &params, &sponge)?;
    emit(
        &json!({
            "params_id": params.id(),
            "rate": rate,
            "capacity": capacity,
            "input": elements_to_hex(&message),
            "digest": elements_to_hex(&digest),
        }),
        None,
    )?;
    Ok(0)
}

#[derive(Args)]
pub struct MerkleArgs {
    #[arg(long)]
    params: PathBuf,
    /// JSON array of hex leaves.
    #[arg(long)]
    leaves: PathBuf,
    /// Tree arity = sponge rate; defaults to n - 1.
    #[arg(long)]
    rate: Option<usize>,
    /// Emit the membership proof for this leaf index.
    #[arg(long)]
    prove: Option<usize>,
    /// Verify a proof file produced by --prove.
    #[arg(long, requires = "leaf", requires = "root")]
    verify: Option<PathBuf>,
    /// Leaf value (hex) for --verify.
    #[arg(long)]
    leaf: Option<String>,
    /// Expected root (hex) for --verify.
    #[arg(long)]
    root: Option<String>,
}

pub fn run_merkle(args: MerkleArgs) -> Result<i32> {
    let params = load_params(&args.params)?;
    let rate = args.rate.unwrap_or(params.branches() - 1);

    if let Some(proof_path) = &args.verify {
        let proof: MerklePath = serde_json::from_value(read_json_file(proof_path)?)
            .context("proof file does not parse")?;
        let leaf = FieldElement::from_hex(args.leaf.as_deref().unwrap(), params.modulus())?;
        let root = FieldElement::from_hex(args.root.as_deref().unwrap(), params.modulus())?;
        let valid = merkle_verify(&leaf, &proof, &root, &params, rate)?;
        emit(&json!({"valid": valid}), None)?;
        return Ok(if valid { 0 } else { 1 });
    }

    let leaves = load_leaves(&args.leaves, params.modulus())?;
    let tree = MerkleTree::build(&leaves, &params, rate)?;
    match args.prove {
        Some(index) => {
            let path = tree.path(index)?;
            emit(
                &json!({
                    "root": tree.root().to_hex(),
                    "leaf_index": path.leaf_index,
                    "siblings": path.siblings,
                }),
                None,
            )?;
        }
        None => emit(&json!({"root": tree.root().to_hex(), "leaves": leaves.len()}), None)?,
    }
    Ok(0)
}
