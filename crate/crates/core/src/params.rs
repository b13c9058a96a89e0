//! Parameter-set construction, validation and serialization.
//!
//! # Constant derivation (`arion-constants-v1`)
//!
//! All constants are derived from a caller-supplied seed with a counter-based
//! SHA-256 expander. The byte stream for a label is
//! `SHA256("arion-constants-v1" || u8(len(label)) || label || u32_be(len(seed)) || seed || u32_be(block))`
//! for block = 0, 1, ... Field elements are drawn from consecutive
//! `ceil(bitlen(p)/8) + 8` byte chunks: a chunk is accepted when its
//! big-endian value is below the largest multiple of p representable in that
//! width (then reduced mod p), and skipped otherwise, so draws are uniform.
//! Labels: `alpha/{i}` draws `(alpha1, alpha2)` pairs for branch `i` until the
//! discriminant `alpha1^2 - 4*alpha2` is a quadratic non-residue, `beta/{i}`
//! draws one element, `rc/{round}` draws the n round constants. Per-round
//! coefficient schedules prefix the labels with the round index
//! (`alpha/{round}/{i}`, `beta/{round}/{i}`). A draw gives up after 1000
//! rejections.

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::affine::{circulant_matrix, invert_matrix};
use crate::chain::ALLOWED_D2;
use crate::error::{Error, Result};
use crate::field::{inv_mod, legendre_is_qnr, FieldElement, PrimeModulus};

const CONSTANT_DERIVATION_TAG: &[u8] = b"arion-constants-v1";
const REJECTION_CAP: usize = 1000;

/// Round-number profile. The standard profile resists both deterministic and
/// probabilistic system solving; the aggressive profile only the former.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Aggressive,
}

/// GTDS quadratic coefficients for branches `1..n-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtdsCoefficients {
    pub alpha1: Vec<FieldElement>,
    pub alpha2: Vec<FieldElement>,
    pub beta: Vec<FieldElement>,
}

/// Coefficients are shared across rounds by default; a per-round schedule
/// draws a fresh set for every round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientSchedule {
    Shared(GtdsCoefficients),
    PerRound(Vec<GtdsCoefficients>),
}

/// A full Arion parameter set: prime, shape, exponents, GTDS coefficients and
/// round constants. Immutable after construction.
#[derive(Clone, Debug)]
pub struct ArionParameters {
    modulus: Arc<PrimeModulus>,
    n: usize,
    rounds: usize,
    d1: u64,
    d2: u64,
    e: BigUint,
    d1_inv: BigUint,
    mode: Mode,
    seed: Vec<u8>,
    allow_unsafe_d2: bool,
    coefficients: CoefficientSchedule,
    round_constants: Vec<Vec<FieldElement>>,
    inv_circulant: Vec<Vec<FieldElement>>,
}

/// Knobs for [`ArionParameters::generate`]. The defaults produce a
/// table-profile instance; the overrides exist for lab-scale primes.
#[derive(Clone, Debug, Default)]
pub struct GenerateOptions {
    /// Override the round count (required for primes below 2^250).
    pub rounds: Option<usize>,
    /// Override `d1`. Flagged by `validate` unless it is the smallest
    /// exponent coprime to `p - 1`.
    pub d1: Option<u64>,
    /// Accept `d2` outside the supported chain set.
    pub allow_unsafe_d2: bool,
    /// Draw fresh GTDS coefficients for every round.
    pub per_round_coefficients: bool,
}

/// A named rule violation. Violations are data, not errors: `validate`
/// reports every broken invariant of a candidate parameter set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    BranchCountTooSmall,
    RoundCountZero,
    D1NotCoprime,
    D1NotSmallest { smallest: u64 },
    D2NotCoprime,
    D2NotAllowed,
    BadInverseExponent,
    BadD1Inverse,
    Discriminant { round: Option<usize>, branch: usize },
    RoundCountBelowTable { required: usize },
    CoefficientLength,
    RoundConstantShape,
}

impl ArionParameters {
    /// Derives a parameter set deterministically from a seed.
    pub fn generate(
        modulus: Arc<PrimeModulus>,
        n: usize,
        d2: u64,
        mode: Mode,
        seed: &[u8],
        opts: GenerateOptions,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("branch count must be at least 2".into()));
        }
        let p_minus_1 = modulus.value() - 1u32;
        let d1 = match opts.d1 {
            Some(d) => d,
            None => select_d1(&modulus),
        };
        if !BigUint::from(d1).gcd(&p_minus_1).is_one() {
            return Err(Error::InvalidParameter(format!("gcd(d1={d1}, p-1) != 1")));
        }
        if !opts.allow_unsafe_d2 && !ALLOWED_D2.contains(&d2) {
            return Err(Error::InvalidParameter(format!(
                "d2={d2} is outside the supported set {ALLOWED_D2:?}; pass the unsafe override for lab use"
            )));
        }
        let e = compute_e(d2, &modulus)?;
        let d1_inv = inv_mod(&BigUint::from(d1), &p_minus_1)?;
        let rounds = match opts.rounds {
            Some(r) if r >= 1 => r,
            Some(_) => return Err(Error::InvalidParameter("round count must be at least 1".into())),
            None => rounds_for(n, d1, mode)?,
        };

        let coefficients = if opts.per_round_coefficients {
            let per_round = (0..rounds)
                .map(|r| draw_coefficients(&modulus, n, seed, Some(r)))
                .collect::<Result<Vec<_>>>()?;
            CoefficientSchedule::PerRound(per_round)
        } else {
            CoefficientSchedule::Shared(draw_coefficients(&modulus, n, seed, None)?)
        };
        let round_constants = (0..rounds)
            .map(|r| {
                let mut stream = ByteStream::new(seed, &format!("rc/{r}"));
                (0..n).map(|_| stream.draw_element(&modulus)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let inv_circulant = invert_matrix(&circulant_matrix(n, &modulus))
            .map_err(|_| Error::InvalidParameter(format!("circ(1..{n}) is singular mod p")))?;

        Ok(ArionParameters {
            modulus,
            n,
            rounds,
            d1,
            d2,
            e,
            d1_inv,
            mode,
            seed: seed.to_vec(),
            allow_unsafe_d2: opts.allow_unsafe_d2,
            coefficients,
            round_constants,
            inv_circulant,
        })
    }

    pub fn modulus(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    pub fn branches(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn d1(&self) -> u64 {
        self.d1
    }

    pub fn d2(&self) -> u64 {
        self.d2
    }

    /// The inverse exponent `e` with `e * d2 = 1 (mod p - 1)`.
    pub fn e(&self) -> &BigUint {
        &self.e
    }

    /// Cached `d1^-1 mod (p - 1)` for the inverse direction.
    pub fn d1_inv(&self) -> &BigUint {
        &self.d1_inv
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn coefficients(&self) -> &CoefficientSchedule {
        &self.coefficients
    }

    fn coeffs_for_round(&self, round: usize) -> &GtdsCoefficients {
        match &self.coefficients {
            CoefficientSchedule::Shared(c) => c,
            CoefficientSchedule::PerRound(v) => &v[round],
        }
    }

    /// `alpha_{i,1}` for 0-indexed branch `i < n - 1`.
    pub fn alpha1(&self, round: usize, branch: usize) -> &FieldElement {
        &self.coeffs_for_round(round).alpha1[branch]
    }

    pub fn alpha2(&self, round: usize, branch: usize) -> &FieldElement {
        &self.coeffs_for_round(round).alpha2[branch]
    }

    pub fn beta(&self, round: usize, branch: usize) -> &FieldElement {
        &self.coeffs_for_round(round).beta[branch]
    }

    pub fn round_constants(&self, round: usize) -> &[FieldElement] {
        &self.round_constants[round]
    }

    /// `circ(1..n)^-1`, cached at construction.
    pub fn inverse_circulant(&self) -> &[Vec<FieldElement>] {
        &self.inv_circulant
    }

    /// Derives auxiliary field elements from the parameter seed, e.g. domain
    /// separated sponge IVs. Same expander as the constants.
    pub fn derive_elements(&self, label: &str, count: usize) -> Result<Vec<FieldElement>> {
        derive_field_elements(&self.modulus, &self.seed, label, count)
    }

    /// Short content-derived identifier used in vector and circuit files.
    pub fn id(&self) -> String {
        let json = serde_json::to_vec(&ParamsFile::from_params(self)).expect("params serialize");
        let digest = Sha256::digest(&json);
        hex::encode(&digest[..8])
    }

    /// Checks every construction invariant, returning all violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let p_minus_1 = self.modulus.value() - 1u32;
        if self.n < 2 {
            out.push(Violation::BranchCountTooSmall);
        }
        if self.rounds == 0 {
            out.push(Violation::RoundCountZero);
        }
        if !BigUint::from(self.d1).gcd(&p_minus_1).is_one() {
            out.push(Violation::D1NotCoprime);
        } else {
            let smallest = select_d1(&self.modulus);
            if self.d1 != smallest {
                out.push(Violation::D1NotSmallest { smallest });
            }
        }
        if !BigUint::from(self.d2).gcd(&p_minus_1).is_one() {
            out.push(Violation::D2NotCoprime);
        } else if (&self.e * self.d2) % &p_minus_1 != BigUint::one() {
            out.push(Violation::BadInverseExponent);
        }
        if !self.allow_unsafe_d2 && !ALLOWED_D2.contains(&self.d2) {
            out.push(Violation::D2NotAllowed);
        }
        if (&self.d1_inv * self.d1) % &p_minus_1 != BigUint::one() {
            out.push(Violation::BadD1Inverse);
        }
        let check_coeffs = |c: &GtdsCoefficients, round: Option<usize>, out: &mut Vec<Violation>| {
            if c.alpha1.len() != self.n - 1 || c.alpha2.len() != self.n - 1 || c.beta.len() != self.n - 1 {
                out.push(Violation::CoefficientLength);
                return;
            }
            for branch in 0..self.n - 1 {
                let disc = c.alpha1[branch]
                    .square()
                    .sub(&scale4(&c.alpha2[branch]))
                    .expect("same modulus");
                if !matches!(legendre_is_qnr(&disc), Ok(true)) {
                    out.push(Violation::Discriminant { round, branch });
                }
            }
        };
        match &self.coefficients {
            CoefficientSchedule::Shared(c) => check_coeffs(c, None, &mut out),
            CoefficientSchedule::PerRound(v) => {
                if v.len() != self.rounds {
                    out.push(Violation::CoefficientLength);
                } else {
                    for (r, c) in v.iter().enumerate() {
                        check_coeffs(c, Some(r), &mut out);
                    }
                }
            }
        }
        if self.round_constants.len() != self.rounds
            || self.round_constants.iter().any(|c| c.len() != self.n)
        {
            out.push(Violation::RoundConstantShape);
        }
        // 128-bit profile round floor applies to tabulated shapes over big primes.
        if self.modulus.bit_length() >= 251 {
            if let Ok(required) = rounds_for(self.n, self.d1, self.mode) {
                if self.rounds < required {
                    out.push(Violation::RoundCountBelowTable { required });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ParamsFile::from_params(self)).expect("params serialize")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: ParamsFile =
            serde_json::from_str(json).map_err(|e| Error::Encoding(format!("params json: {e}")))?;
        file.into_params()
    }
}

fn scale4(x: &FieldElement) -> FieldElement {
    x.mul(&x.modulus().element_from_u64(4)).expect("same modulus")
}

/// Smallest exponent `d >= 2` with `gcd(d, p - 1) = 1`. For odd `p` this is
/// odd, and 3 or 5 for every supported prime.
pub fn select_d1(modulus: &Arc<PrimeModulus>) -> u64 {
    let p_minus_1 = modulus.value() - 1u32;
    (2u64..)
        .find(|d| BigUint::from(*d).gcd(&p_minus_1).is_one())
        .expect("some exponent below p is coprime to p - 1")
}

/// `e = d2^-1 mod (p - 1)`.
pub fn compute_e(d2: u64, modulus: &Arc<PrimeModulus>) -> Result<BigUint> {
    inv_mod(&BigUint::from(d2), &(modulus.value() - 1u32))
}

/// Smallest integer `m` with `m * e >= p`, i.e. `ceil(p / e)`: the factor by
/// which the inverse power map overshoots the field size.
pub fn degree_overflow_factor(modulus: &Arc<PrimeModulus>, d2: u64) -> Result<BigUint> {
    let e = compute_e(d2, modulus)?;
    let p = modulus.value();
    Ok((p + &e - 1u32) / &e)
}

/// Round numbers for the 128-bit profiles over primes of at least 250 bits.
pub fn rounds_for(n: usize, d1: u64, mode: Mode) -> Result<usize> {
    let table: &[(usize, usize)] = match (d1, mode) {
        (3, Mode::Standard) => &[(3, 6), (4, 6), (5, 5), (6, 5), (8, 4)],
        (3, Mode::Aggressive) => &[(3, 5), (4, 4), (5, 4), (6, 4), (8, 4)],
        (5, Mode::Standard) => &[(3, 6), (4, 5), (5, 5), (6, 5), (8, 4)],
        (5, Mode::Aggressive) => &[(3, 4), (4, 4), (5, 4), (6, 4), (8, 4)],
        _ => return Err(Error::Unsupported(format!("no round table for d1={d1}"))),
    };
    table
        .iter()
        .find(|(nn, _)| *nn == n)
        .map(|(_, r)| *r)
        .ok_or_else(|| Error::Unsupported(format!("no round table entry for n={n}, d1={d1}")))
}

/// Uniform field elements from the labelled seed expander.
pub fn derive_field_elements(
    modulus: &Arc<PrimeModulus>,
    seed: &[u8],
    label: &str,
    count: usize,
) -> Result<Vec<FieldElement>> {
    let mut stream = ByteStream::new(seed, label);
    (0..count).map(|_| stream.draw_element(modulus)).collect()
}

fn draw_coefficients(
    modulus: &Arc<PrimeModulus>,
    n: usize,
    seed: &[u8],
    round: Option<usize>,
) -> Result<GtdsCoefficients> {
    let mut alpha1 = Vec::with_capacity(n - 1);
    let mut alpha2 = Vec::with_capacity(n - 1);
    let mut beta = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let (alpha_label, beta_label) = match round {
            Some(r) => (format!("alpha/{r}/{i}"), format!("beta/{r}/{i}")),
            None => (format!("alpha/{i}"), format!("beta/{i}")),
        };
        let mut stream = ByteStream::new(seed, &alpha_label);
        let mut accepted = None;
        for _ in 0..REJECTION_CAP {
            let a1 = stream.draw_element(modulus)?;
            let a2 = stream.draw_element(modulus)?;
            let disc = a1.square().sub(&scale4(&a2))?;
            if matches!(legendre_is_qnr(&disc), Ok(true)) {
                accepted = Some((a1, a2));
                break;
            }
        }
        let (a1, a2) = accepted.ok_or(Error::IterationCap(REJECTION_CAP))?;
        alpha1.push(a1);
        alpha2.push(a2);
        beta.push(derive_field_elements(modulus, seed, &beta_label, 1)?.remove(0));
    }
    Ok(GtdsCoefficients { alpha1, alpha2, beta })
}

/// Counter-based SHA-256 expander with per-constant-class domain separation.
struct ByteStream {
    prefix: Vec<u8>,
    block: u32,
    buffer: Vec<u8>,
    offset: usize,
}

impl ByteStream {
    fn new(seed: &[u8], label: &str) -> Self {
        let mut prefix = Vec::with_capacity(CONSTANT_DERIVATION_TAG.len() + label.len() + seed.len() + 16);
        prefix.extend_from_slice(CONSTANT_DERIVATION_TAG);
        prefix.push(label.len() as u8);
        prefix.extend_from_slice(label.as_bytes());
        prefix.extend_from_slice(&(seed.len() as u32).to_be_bytes());
        prefix.extend_from_slice(seed);
        ByteStream { prefix, block: 0, buffer: Vec::new(), offset: 0 }
    }

    fn take(&mut self, len: usize) -> Vec<u8> {
        while self.buffer.len() - self.offset < len {
            let mut hasher = Sha256::new();
            hasher.update(&self.prefix);
            hasher.update(self.block.to_be_bytes());
            self.buffer.extend_from_slice(&hasher.finalize());
            self.block += 1;
        }
        let out = self.buffer[self.offset..self.offset + len].to_vec();
        self.offset += len;
        out
    }

    /// Rejection-samples a uniform element below p from chunks 64 bits wider
    /// than the modulus; virtually every chunk is accepted.
    fn draw_element(&mut self, modulus: &Arc<PrimeModulus>) -> Result<FieldElement> {
        let width = modulus.byte_length() + 8;
        let bound = (BigUint::one() << (8 * width as u64)) - (BigUint::one() << (8 * width as u64)) % modulus.value();
        for _ in 0..REJECTION_CAP {
            let v = BigUint::from_bytes_be(&self.take(width));
            if v < bound {
                return Ok(modulus.element(v % modulus.value()));
            }
        }
        Err(Error::IterationCap(REJECTION_CAP))
    }
}

// Sponge shape -------------------------------------------------------------

/// Rate/capacity split of the permutation width, plus the initial value of
/// the capacity half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpongeParameters {
    pub rate: usize,
    pub capacity: usize,
    pub output_len: usize,
    pub iv: Vec<FieldElement>,
}

impl SpongeParameters {
    /// A sponge with the given split and an all-zero IV.
    pub fn new(params: &ArionParameters, rate: usize, capacity: usize) -> Result<Self> {
        if rate < 1 || capacity < 1 {
            return Err(Error::InvalidParameter("rate and capacity must be at least 1".into()));
        }
        if rate + capacity != params.branches() {
            return Err(Error::InvalidParameter(format!(
                "rate + capacity must equal n: {rate} + {capacity} != {}",
                params.branches()
            )));
        }
        Ok(SpongeParameters {
            rate,
            capacity,
            output_len: 1,
            iv: vec![params.modulus().zero(); capacity],
        })
    }

    /// The recommended split for digest use: capacity 1, single-element output.
    pub fn default_for(params: &ArionParameters) -> Result<Self> {
        Self::new(params, params.branches() - 1, 1)
    }

    pub fn with_output_len(mut self, output_len: usize) -> Self {
        self.output_len = output_len;
        self
    }

    pub fn with_iv(mut self, iv: Vec<FieldElement>) -> Result<Self> {
        if iv.len() != self.capacity {
            return Err(Error::LengthMismatch { expected: self.capacity, got: iv.len() });
        }
        self.iv = iv;
        Ok(self)
    }

    /// Whether the split supports `kappa` bits of sponge security, i.e.
    /// `rate >= kappa/log2(p)` and `capacity >= 2*kappa/log2(p)`. The bounds
    /// are floored so that the recommended capacity-1 splits over 250-bit
    /// primes qualify at the 128-bit level.
    pub fn supports_security_level(&self, params: &ArionParameters, kappa: u32) -> bool {
        let log2_p = crate::security::log2_biguint(params.modulus().value());
        let rate_req = ((kappa as f64 / log2_p).floor() as usize).max(1);
        let cap_req = ((2.0 * kappa as f64 / log2_p).floor() as usize).max(1);
        self.rate >= rate_req && self.capacity >= cap_req
    }
}

// Serialization -------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CoefficientsFile {
    alpha1: Vec<String>,
    alpha2: Vec<String>,
    beta: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ScheduleFile {
    Shared(CoefficientsFile),
    PerRound(Vec<CoefficientsFile>),
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    format: String,
    prime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    prime_name: Option<String>,
    n: usize,
    rounds: usize,
    d1: u64,
    d2: u64,
    e: String,
    d1_inv: String,
    mode: Mode,
    seed: String,
    allow_unsafe_d2: bool,
    coefficients: ScheduleFile,
    round_constants: Vec<Vec<String>>,
}

impl ParamsFile {
    fn from_params(p: &ArionParameters) -> Self {
        let coeff_file = |c: &GtdsCoefficients| CoefficientsFile {
            alpha1: c.alpha1.iter().map(FieldElement::to_hex).collect(),
            alpha2: c.alpha2.iter().map(FieldElement::to_hex).collect(),
            beta: c.beta.iter().map(FieldElement::to_hex).collect(),
        };
        let prime_hex = hex_biguint(p.modulus.value());
        let prime_name = if prime_hex == crate::field::BLS12_HEX {
            Some("bls12".to_string())
        } else if prime_hex == crate::field::BN254_HEX {
            Some("bn254".to_string())
        } else {
            None
        };
        ParamsFile {
            format: "arion-params-v1".to_string(),
            prime: prime_hex,
            prime_name,
            n: p.n,
            rounds: p.rounds,
            d1: p.d1,
            d2: p.d2,
            e: hex_biguint(&p.e),
            d1_inv: hex_biguint(&p.d1_inv),
            mode: p.mode,
            seed: hex::encode(&p.seed),
            allow_unsafe_d2: p.allow_unsafe_d2,
            coefficients: match &p.coefficients {
                CoefficientSchedule::Shared(c) => ScheduleFile::Shared(coeff_file(c)),
                CoefficientSchedule::PerRound(v) => {
                    ScheduleFile::PerRound(v.iter().map(coeff_file).collect())
                }
            },
            round_constants: p
                .round_constants
                .iter()
                .map(|rc| rc.iter().map(FieldElement::to_hex).collect())
                .collect(),
        }
    }

    fn into_params(self) -> Result<ArionParameters> {
        if self.format != "arion-params-v1" {
            return Err(Error::Encoding(format!("unknown params format {}", self.format)));
        }
        let modulus = match self.prime_name.as_deref() {
            Some("bls12") => PrimeModulus::bls12(),
            Some("bn254") => PrimeModulus::bn254(),
            _ => PrimeModulus::from_hex(&self.prime)?,
        };
        if hex_biguint(modulus.value()) != self.prime.trim_start_matches("0x").to_lowercase() {
            return Err(Error::Encoding("prime does not match prime_name".into()));
        }
        let parse_vec = |v: &[String]| -> Result<Vec<FieldElement>> {
            v.iter().map(|s| FieldElement::from_hex(s, &modulus)).collect()
        };
        let parse_coeffs = |c: &CoefficientsFile| -> Result<GtdsCoefficients> {
            Ok(GtdsCoefficients {
                alpha1: parse_vec(&c.alpha1)?,
                alpha2: parse_vec(&c.alpha2)?,
                beta: parse_vec(&c.beta)?,
            })
        };
        let coefficients = match &self.coefficients {
            ScheduleFile::Shared(c) => CoefficientSchedule::Shared(parse_coeffs(c)?),
            ScheduleFile::PerRound(v) => CoefficientSchedule::PerRound(
                v.iter().map(parse_coeffs).collect::<Result<Vec<_>>>()?,
            ),
        };
        let round_constants = self
            .round_constants
            .iter()
            .map(|rc| parse_vec(rc))
            .collect::<Result<Vec<_>>>()?;
        let inv_circulant = invert_matrix(&circulant_matrix(self.n, &modulus))
            .map_err(|_| Error::InvalidParameter(format!("circ(1..{}) is singular mod p", self.n)))?;
        Ok(ArionParameters {
            modulus,
            n: self.n,
            rounds: self.rounds,
            d1: self.d1,
            d2: self.d2,
            e: biguint_from_hex(&self.e)?,
            d1_inv: biguint_from_hex(&self.d1_inv)?,
            mode: self.mode,
            seed: hex::decode(&self.seed).map_err(|e| Error::Encoding(format!("seed hex: {e}")))?,
            allow_unsafe_d2: self.allow_unsafe_d2,
            coefficients,
            round_constants,
            inv_circulant,
        })
    }
}

fn hex_biguint(x: &BigUint) -> String {
    x.to_str_radix(16)
}

fn biguint_from_hex(s: &str) -> Result<BigUint> {
    BigUint::parse_bytes(s.trim_start_matches("0x").as_bytes(), 16)
        .ok_or_else(|| Error::Encoding(format!("bad hex integer: {s}")))
}
