//! Sponge-mode hashing over the unkeyed permutation.
//!
//! The state splits into a rate part (positions `0..rate`) and a capacity
//! part (the remaining positions, initialized from the IV). Messages are
//! padded with the fewest zeros reaching a multiple of the rate; whenever at
//! least one zero is appended, the first capacity element is replaced by the
//! original message length so padded and unpadded messages can never collide.
//!
//! # Byte input (`arion-bytes-v1`)
//!
//! Byte strings are split into `floor(bitlen(p-1)/8)`-byte chunks interpreted
//! big-endian (each below p by construction); a shorter trailing chunk is
//! taken as-is. The resulting field elements are hashed like any message.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::params::{ArionParameters, SpongeParameters};
use crate::permutation::arion_pi;

/// Zero-pads to a multiple of `rate`; the second component carries the
/// length encoding that replaces the first IV element when padding happened.
pub fn pad(
    message: &[FieldElement],
    rate: usize,
    params: &ArionParameters,
) -> Result<(Vec<FieldElement>, Option<FieldElement>)> {
    if rate < 1 {
        return Err(Error::InvalidParameter("rate must be at least 1".into()));
    }
    if BigUint::from(message.len()) >= *params.modulus().value() {
        return Err(Error::InvalidParameter(
            "message length does not fit in one field element".into(),
        ));
    }
    let mut padded = message.to_vec();
    let remainder = message.len() % rate;
    let needs_padding = message.is_empty() || remainder != 0;
    if !needs_padding {
        return Ok((padded, None));
    }
    let zeros = if message.is_empty() { rate } else { rate - remainder };
    padded.extend(std::iter::repeat_with(|| params.modulus().zero()).take(zeros));
    let tag = params.modulus().element(BigUint::from(message.len()));
    Ok((padded, Some(tag)))
}

/// Sponge evaluation: absorb rate-sized blocks by addition, permuting after
/// each block, then squeeze `output_len` elements (permuting between
/// squeezes if more than one block of output is requested).
pub fn arion_hash(
    message: &[FieldElement],
    params: &ArionParameters,
    sponge: &SpongeParameters,
) -> Result<Vec<FieldElement>> {
    if sponge.rate + sponge.capacity != params.branches() {
        return Err(Error::InvalidParameter("sponge shape does not match the permutation width".into()));
    }
    let (padded, length_tag) = pad(message, sponge.rate, params)?;

    let mut state = Vec::with_capacity(params.branches());
    state.extend(std::iter::repeat_with(|| params.modulus().zero()).take(sponge.rate));
    state.extend(sponge.iv.iter().cloned());
    if let Some(tag) = length_tag {
        // |m| takes the first capacity slot; the rest keep the IV. With
        // capacity 1 the encoding is the length alone.
        state[sponge.rate] = tag;
    }

    for block in padded.chunks(sponge.rate) {
        for (slot, m) in state.iter_mut().zip(block) {
            *slot = slot.add(m)?;
        }
        state = arion_pi(&state, params)?;
    }

    let mut out = Vec::with_capacity(sponge.output_len);
    loop {
        let take = sponge.rate.min(sponge.output_len - out.len());
        out.extend(state[..take].iter().cloned());
        if out.len() == sponge.output_len {
            return Ok(out);
        }
        state = arion_pi(&state, params)?;
    }
}

/// Single-element digest with the sponge's default output length of 1.
pub fn arion_hash_single(
    message: &[FieldElement],
    params: &ArionParameters,
    sponge: &SpongeParameters,
) -> Result<FieldElement> {
    let mut digest = arion_hash(message, params, &sponge.clone().with_output_len(1))?;
    Ok(digest.remove(0))
}

/// Splits bytes into sub-modulus big-endian chunks.
pub fn bytes_to_field_elements(bytes: &[u8], params: &ArionParameters) -> Vec<FieldElement> {
    let chunk_len = (((params.modulus().value() - 1u32).bits()) / 8) as usize;
    let chunk_len = chunk_len.max(1);
    bytes
        .chunks(chunk_len)
        .map(|c| params.modulus().element(BigUint::from_bytes_be(c)))
        .collect()
}

/// Hashes a byte string under the `arion-bytes-v1` chunking rule.
pub fn hash_bytes(
    bytes: &[u8],
    params: &ArionParameters,
    sponge: &SpongeParameters,
) -> Result<Vec<FieldElement>> {
    arion_hash(&bytes_to_field_elements(bytes, params), params, sponge)
}
