//! The keyed permutation: a key addition and unkeyed mixing layer followed by
//! `r` rounds of (GTDS, mixing layer with round constants, key addition).
//! With the all-zero key this is the unkeyed permutation used for hashing.

use rayon::prelude::*;

use crate::affine::{affine_layer, mat_vec_mul};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::gtds::{gtds_forward, gtds_inverse};
use crate::params::ArionParameters;

/// Whether to apply the permutation or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

pub type StateVector = Vec<FieldElement>;

fn check_key(key: Option<&[FieldElement]>, params: &ArionParameters) -> Result<()> {
    if let Some(k) = key {
        if k.len() != params.branches() {
            return Err(Error::LengthMismatch { expected: params.branches(), got: k.len() });
        }
    }
    Ok(())
}

fn add_key(state: &mut [FieldElement], key: Option<&[FieldElement]>) -> Result<()> {
    if let Some(k) = key {
        for (s, ki) in state.iter_mut().zip(k) {
            *s = s.add(ki)?;
        }
    }
    Ok(())
}

fn sub_key(state: &mut [FieldElement], key: Option<&[FieldElement]>) -> Result<()> {
    if let Some(k) = key {
        for (s, ki) in state.iter_mut().zip(k) {
            *s = s.sub(ki)?;
        }
    }
    Ok(())
}

/// One round in the forward direction: GTDS, then the mixing layer with this
/// round's constants, then key addition. Exposed so compositions can be
/// checked against the full permutation.
pub fn round_forward(
    state: &[FieldElement],
    key: Option<&[FieldElement]>,
    params: &ArionParameters,
    round: usize,
) -> Result<StateVector> {
    let mut s = gtds_forward(state, params, round)?;
    s = affine_layer(&s, Some(params.round_constants(round)))?;
    add_key(&mut s, key)?;
    Ok(s)
}

fn round_inverse(
    state: &[FieldElement],
    key: Option<&[FieldElement]>,
    params: &ArionParameters,
    round: usize,
) -> Result<StateVector> {
    let mut s = state.to_vec();
    sub_key(&mut s, key)?;
    for (si, ci) in s.iter_mut().zip(params.round_constants(round)) {
        *si = si.sub(ci)?;
    }
    let s = mat_vec_mul(params.inverse_circulant(), &s)?;
    gtds_inverse(&s, params, round)
}

/// Applies the keyed permutation (`key = None` gives the unkeyed variant).
/// The same key is added in every round; no key schedule is defined for
/// longer keys.
pub fn arion_permute(
    state: &[FieldElement],
    key: Option<&[FieldElement]>,
    params: &ArionParameters,
    direction: Direction,
) -> Result<StateVector> {
    if state.len() != params.branches() {
        return Err(Error::LengthMismatch { expected: params.branches(), got: state.len() });
    }
    check_key(key, params)?;
    match direction {
        Direction::Forward => {
            let mut s = state.to_vec();
            add_key(&mut s, key)?;
            s = affine_layer(&s, None)?;
            for round in 0..params.rounds() {
                s = round_forward(&s, key, params, round)?;
            }
            Ok(s)
        }
        Direction::Inverse => {
            let mut s = state.to_vec();
            for round in (0..params.rounds()).rev() {
                s = round_inverse(&s, key, params, round)?;
            }
            s = mat_vec_mul(params.inverse_circulant(), &s)?;
            sub_key(&mut s, key)?;
            Ok(s)
        }
    }
}

/// Unkeyed permutation, the sponge primitive.
pub fn arion_pi(state: &[FieldElement], params: &ArionParameters) -> Result<StateVector> {
    arion_permute(state, None, params, Direction::Forward)
}

/// Permutes a batch of independent states in parallel.
pub fn arion_permute_batch(
    states: &[StateVector],
    key: Option<&[FieldElement]>,
    params: &ArionParameters,
    direction: Direction,
) -> Result<Vec<StateVector>> {
    states
        .par_iter()
        .map(|s| arion_permute(s, key, params, direction))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeModulus;
    use crate::params::{ArionParameters, GenerateOptions, Mode};
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lab(p: u64, n: usize, d1: u64, d2: u64, rounds: usize) -> ArionParameters {
        ArionParameters::generate(
            PrimeModulus::new(BigUint::from(p)).unwrap(),
            n,
            d2,
            Mode::Standard,
            b"permutation tests",
            GenerateOptions {
                rounds: Some(rounds),
                d1: Some(d1),
                allow_unsafe_d2: true,
                ..Default::default()
            },
        )
        .unwrap()
    }

    /// From-the-definition evaluator for one round on p = 11, n = 2, r = 1,
    /// written against the naive formulas rather than the library helpers.
    #[test]
    fn matches_definition_oracle_small() {
        let params = lab(11, 2, 3, 3, 1);
        let m = params.modulus();
        let p = 11u64;
        let e = 7u64; // 3 * 7 = 21 = 1 mod 10
        let a1 = params.alpha1(0, 0).value().to_u64_digits().first().copied().unwrap_or(0);
        let a2 = params.alpha2(0, 0).value().to_u64_digits().first().copied().unwrap_or(0);
        let b = params.beta(0, 0).value().to_u64_digits().first().copied().unwrap_or(0);
        let c0 = params.round_constants(0)[0].value().to_u64_digits().first().copied().unwrap_or(0);
        let c1 = params.round_constants(0)[1].value().to_u64_digits().first().copied().unwrap_or(0);
        let k = [3u64, 8u64];
        let powm = |x: u64, e: u64| -> u64 {
            let mut acc = 1u64;
            for _ in 0..e {
                acc = acc * x % p;
            }
            acc
        };
        for x0 in 0..p {
            for x1 in 0..p {
                // key add, then circ(1,2) = [[1,2],[2,1]]
                let (y0, y1) = ((x0 + k[0]) % p, (x1 + k[1]) % p);
                let (l0, l1) = ((y0 + 2 * y1) % p, (2 * y0 + y1) % p);
                // GTDS: f1 = l1^e; sigma = l1 + f1; f0 = l0^3 * g + h
                let f1 = powm(l1, e);
                let sigma = (l1 + f1) % p;
                let g = (sigma * sigma + a1 * sigma + a2) % p;
                let h = (sigma * sigma + b * sigma) % p;
                let f0 = (powm(l0, 3) * g + h) % p;
                // affine with round constants, key add
                let (o0, o1) = ((f0 + 2 * f1 + c0 + k[0]) % p, (2 * f0 + f1 + c1 + k[1]) % p);
                let key: Vec<_> = k.iter().map(|&v| m.element_from_u64(v)).collect();
                let got = arion_permute(
                    &[m.element_from_u64(x0), m.element_from_u64(x1)],
                    Some(&key),
                    &params,
                    Direction::Forward,
                )
                .unwrap();
                assert_eq!(got, vec![m.element_from_u64(o0), m.element_from_u64(o1)]);
            }
        }
    }

    #[test]
    fn keyed_roundtrip_small_prime() {
        let params = lab(10007, 3, 3, 257, 4);
        let m = params.modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let state: Vec<_> = (0..3).map(|_| m.element_from_u64(rng.gen_range(0..10007))).collect();
            let key: Vec<_> = (0..3).map(|_| m.element_from_u64(rng.gen_range(0..10007))).collect();
            let ct = arion_permute(&state, Some(&key), &params, Direction::Forward).unwrap();
            let back = arion_permute(&ct, Some(&key), &params, Direction::Inverse).unwrap();
            assert_eq!(back, state);
        }
    }

    #[test]
    fn unkeyed_equals_manual_round_composition() {
        let params = lab(10007, 3, 3, 257, 4);
        let m = params.modulus();
        let state: Vec<_> = (0..3).map(|i| m.element_from_u64(17 * i as u64 + 5)).collect();
        let full = arion_pi(&state, &params).unwrap();
        let mut manual = crate::affine::affine_layer(&state, None).unwrap();
        for round in 0..params.rounds() {
            manual = round_forward(&manual, None, &params, round).unwrap();
        }
        assert_eq!(full, manual);
    }

    #[test]
    fn batch_matches_sequential() {
        let params = lab(10007, 3, 3, 257, 2);
        let m = params.modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let states: Vec<Vec<_>> = (0..16)
            .map(|_| (0..3).map(|_| m.element_from_u64(rng.gen_range(0..10007))).collect())
            .collect();
        let batched = arion_permute_batch(&states, None, &params, Direction::Forward).unwrap();
        for (s, b) in states.iter().zip(&batched) {
            assert_eq!(&arion_pi(s, &params).unwrap(), b);
        }
    }

    #[test]
    fn wrong_width_rejected() {
        let params = lab(10007, 3, 3, 257, 2);
        let m = params.modulus();
        let err = arion_permute(&[m.one()], None, &params, Direction::Forward);
        assert!(matches!(err, Err(crate::error::Error::LengthMismatch { .. })));
    }
}
