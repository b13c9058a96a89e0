//! Shared parsing and printing helpers.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};

use arion_core::field::{FieldElement, PrimeModulus};
use arion_core::params::ArionParameters;

/// `bls12`, `bn254`, or a hex prime (with or without `0x`).
pub fn parse_prime(spec: &str) -> Result<Arc<PrimeModulus>> {
    match spec.to_ascii_lowercase().as_str() {
        "bls12" => Ok(PrimeModulus::bls12()),
        "bn254" => Ok(PrimeModulus::bn254()),
        hex => PrimeModulus::from_hex(hex).context("prime must be bls12, bn254 or a hex prime"),
    }
}

pub fn load_params(path: &Path) -> Result<ArionParameters> {
    let json = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read params file {}", path.display()))?;
    let params = ArionParameters::from_json(&json)?;
    let violations = params.validate();
    if !violations.is_empty() {
        // Lab-grade sets (small primes, overridden exponents) are usable but
        // called out; hard violations still surface when operations fail.
        eprintln!(
            "{}",
            serde_json::json!({"warning": "parameter set violates construction rules", "violations": violations})
        );
    }
    Ok(params)
}

/// Comma-separated lowercase hex field elements.
pub fn parse_elements(spec: &str, modulus: &Arc<PrimeModulus>) -> Result<Vec<FieldElement>> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|s| FieldElement::from_hex(s.trim(), modulus).map_err(Into::into))
        .collect()
}

pub fn elements_to_hex(elems: &[FieldElement]) -> Vec<String> {
    elems.iter().map(FieldElement::to_hex).collect()
}

/// Pretty JSON to stdout or to a file.
pub fn emit(json: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let rendered = serde_json::to_string_pretty(json)?;
    match out {
        Some(path) => std::fs::write(path, rendered + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{rendered}"),
    }
    Ok(())
}

pub fn read_json_file(path: &Path) -> Result<serde_json::Value> {
    let raw = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&raw).with_context(|| format!("{} is not JSON", path.display()))
}

/// Leaves file: a JSON array of hex field elements.
pub fn load_leaves(path: &Path, modulus: &Arc<PrimeModulus>) -> Result<Vec<FieldElement>> {
    let value = read_json_file(path)?;
    let Some(items) = value.as_array() else {
        bail!("{} must contain a JSON array of hex field elements", path.display());
    };
    items
        .iter()
        .map(|v| {
            let s = v.as_str().context("leaf entries must be hex strings")?;
            FieldElement::from_hex(s, modulus).map_err(Into::into)
        })
        .collect()
}
