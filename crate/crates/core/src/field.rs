//! Arbitrary-precision prime-field arithmetic.
//!
//! Elements are kept in canonical reduced form `0 <= value < p` at all times.
//! No lazy or Montgomery representation is observable through this API
//! (num-bigint's `modpow` may use one internally for exponentiation).

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// 250-bit scalar field prime of the BLS12-381 curve.
pub const BLS12_HEX: &str = "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";
/// 250-bit scalar field prime of the BN254 curve.
pub const BN254_HEX: &str = "30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001";

const MILLER_RABIN_ROUNDS: usize = 64;

/// An odd prime modulus `p > 4`, shared by every element of the field.
#[derive(Debug, PartialEq, Eq)]
pub struct PrimeModulus {
    value: BigUint,
    bits: u64,
}

impl PrimeModulus {
    /// Builds a modulus, rejecting composites with a Miller-Rabin test of
    /// error probability at most 2^-128.
    pub fn new(value: BigUint) -> Result<Arc<Self>> {
        if value <= BigUint::from(4u32) {
            return Err(Error::ModulusTooSmall);
        }
        if !is_probable_prime(&value, MILLER_RABIN_ROUNDS) {
            return Err(Error::NotPrime(value.to_str_radix(10)));
        }
        Ok(Self::new_unchecked(value))
    }

    fn new_unchecked(value: BigUint) -> Arc<Self> {
        let bits = value.bits();
        Arc::new(PrimeModulus { value, bits })
    }

    /// Parses a lowercase/uppercase hex modulus.
    pub fn from_hex(s: &str) -> Result<Arc<Self>> {
        let value = BigUint::parse_bytes(s.trim_start_matches("0x").as_bytes(), 16)
            .ok_or_else(|| Error::Encoding(format!("bad hex modulus: {s}")))?;
        Self::new(value)
    }

    /// The BLS12-381 scalar field. Primality is vouched for, not re-tested.
    pub fn bls12() -> Arc<Self> {
        static M: OnceLock<Arc<PrimeModulus>> = OnceLock::new();
        M.get_or_init(|| {
            Self::new_unchecked(BigUint::parse_bytes(BLS12_HEX.as_bytes(), 16).unwrap())
        })
        .clone()
    }

    /// The BN254 scalar field. Primality is vouched for, not re-tested.
    pub fn bn254() -> Arc<Self> {
        static M: OnceLock<Arc<PrimeModulus>> = OnceLock::new();
        M.get_or_init(|| {
            Self::new_unchecked(BigUint::parse_bytes(BN254_HEX.as_bytes(), 16).unwrap())
        })
        .clone()
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn bit_length(&self) -> u64 {
        self.bits
    }

    /// Serialized width of one element: ceil(bitlen(p)/8) bytes.
    pub fn byte_length(&self) -> usize {
        self.bits.div_ceil(8) as usize
    }

    /// Reduces an arbitrary integer into the field.
    pub fn element(self: &Arc<Self>, value: BigUint) -> FieldElement {
        FieldElement {
            value: value % &self.value,
            modulus: self.clone(),
        }
    }

    pub fn element_from_u64(self: &Arc<Self>, value: u64) -> FieldElement {
        self.element(BigUint::from(value))
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.element(BigUint::zero())
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.element(BigUint::one())
    }
}

/// A canonical residue modulo a shared prime.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: BigUint,
    modulus: Arc<PrimeModulus>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.to_str_radix(10))
    }
}

impl FieldElement {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check_same_modulus(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.modulus, &other.modulus) || self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_modulus(rhs)?;
        let mut v = &self.value + &rhs.value;
        if v >= self.modulus.value {
            v -= &self.modulus.value;
        }
        Ok(Self { value: v, modulus: self.modulus.clone() })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_modulus(rhs)?;
        let v = if self.value >= rhs.value {
            &self.value - &rhs.value
        } else {
            &self.modulus.value - &rhs.value + &self.value
        };
        Ok(Self { value: v, modulus: self.modulus.clone() })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_modulus(rhs)?;
        Ok(Self {
            value: &self.value * &rhs.value % &self.modulus.value,
            modulus: self.modulus.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        let v = if self.value.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus.value - &self.value
        };
        Self { value: v, modulus: self.modulus.clone() }
    }

    pub fn square(&self) -> Self {
        Self {
            value: &self.value * &self.value % &self.modulus.value,
            modulus: self.modulus.clone(),
        }
    }

    /// `self^k` by square-and-multiply (num-bigint `modpow`).
    pub fn pow(&self, k: &BigUint) -> Self {
        Self {
            value: self.value.modpow(k, &self.modulus.value),
            modulus: self.modulus.clone(),
        }
    }

    pub fn pow_u64(&self, k: u64) -> Self {
        self.pow(&BigUint::from(k))
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self> {
        let v = inv_mod(&self.value, &self.modulus.value)?;
        Ok(Self { value: v, modulus: self.modulus.clone() })
    }

    /// Fixed-width big-endian serialization (`ceil(bitlen(p)/8)` bytes).
    pub fn to_bytes(&self) -> Vec<u8> {
        let width = self.modulus.byte_length();
        let raw = self.value.to_bytes_be();
        let mut out = vec![0u8; width - raw.len()];
        out.extend_from_slice(&raw);
        out
    }

    /// Rejects encodings that are not canonical residues (value >= p).
    pub fn from_bytes(bytes: &[u8], modulus: &Arc<PrimeModulus>) -> Result<Self> {
        let value = BigUint::from_bytes_be(bytes);
        if value >= *modulus.value() {
            return Err(Error::Encoding("byte value is not a canonical residue".into()));
        }
        Ok(Self { value, modulus: modulus.clone() })
    }

    /// Lowercase hex, zero-padded to the modulus width.
    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(s: &str, modulus: &Arc<PrimeModulus>) -> Result<Self> {
        let s = s.trim_start_matches("0x");
        // Accept unpadded hex as well; pad to an even number of digits.
        let padded = if s.len() % 2 == 1 { format!("0{s}") } else { s.to_string() };
        let bytes = hex::decode(&padded).map_err(|e| Error::Encoding(format!("bad hex: {e}")))?;
        Self::from_bytes(&bytes, modulus)
    }
}

/// Modular inverse by extended Euclid: the unique `b` in `[0, m)` with
/// `a*b = 1 (mod m)`. Errors when `gcd(a, m) != 1`.
pub fn inv_mod(a: &BigUint, m: &BigUint) -> Result<BigUint> {
    let a_int = BigInt::from(a.clone());
    let m_int = BigInt::from(m.clone());
    let ext = a_int.extended_gcd(&m_int);
    if !ext.gcd.is_one() {
        return Err(Error::NotInvertible {
            value: a.to_str_radix(10),
            modulus: m.to_str_radix(10),
        });
    }
    let mut x = ext.x % &m_int;
    if x.sign() == num_bigint::Sign::Minus {
        x += &m_int;
    }
    Ok(x.to_biguint().expect("reduced representative is non-negative"))
}

/// Euler-criterion test for quadratic non-residues: true iff
/// `a^((p-1)/2) = p - 1`. Errors on zero (neither residue nor non-residue).
pub fn legendre_is_qnr(a: &FieldElement) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = a.modulus.value();
    let exp = (p - 1u32) >> 1;
    let r = a.value.modpow(&exp, p);
    Ok(r == p - 1u32)
}

/// Miller-Rabin with `rounds` pseudo-random bases derived from the candidate
/// itself, so the check is deterministic for a given input.
fn is_probable_prime(n: &BigUint, rounds: usize) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigUint::from(small);
        if n == &s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let n_bytes = n.to_bytes_be();
    'witness: for i in 0..rounds {
        let mut hasher = Sha256::new();
        hasher.update(b"miller-rabin");
        hasher.update(&n_bytes);
        hasher.update((i as u64).to_be_bytes());
        let digest = hasher.finalize();
        // Base in [2, n-2]; the digest is stretched to the candidate's width.
        let mut raw = Vec::with_capacity(n_bytes.len() + 32);
        let mut counter = 0u64;
        while raw.len() < n_bytes.len() + 8 {
            let mut h = Sha256::new();
            h.update(digest);
            h.update(counter.to_be_bytes());
            raw.extend_from_slice(&h.finalize());
            counter += 1;
        }
        let base = BigUint::from_bytes_be(&raw) % (n - 3u32) + &two;

        let mut x = base.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Arc<PrimeModulus> {
        PrimeModulus::new(BigUint::from(p)).unwrap()
    }

    #[test]
    fn add_mul_neg_reduce_canonically() {
        let p7 = fp(7);
        assert_eq!(
            p7.element_from_u64(5).add(&p7.element_from_u64(4)).unwrap(),
            p7.element_from_u64(2)
        );
        assert_eq!(
            p7.element_from_u64(3).mul(&p7.element_from_u64(5)).unwrap(),
            p7.element_from_u64(1)
        );
        let p11 = fp(11);
        assert_eq!(p11.zero().neg(), p11.zero());
    }

    #[test]
    fn mismatched_moduli_rejected() {
        let a = fp(7).element_from_u64(1);
        let b = fp(11).element_from_u64(1);
        assert_eq!(a.add(&b), Err(Error::ModulusMismatch));
    }

    #[test]
    fn pow_small_cases() {
        let p11 = fp(11);
        assert_eq!(p11.element_from_u64(2).pow_u64(10), p11.one());
        let p13 = fp(13);
        assert_eq!(p13.element_from_u64(3).pow_u64(0), p13.one());
    }

    #[test]
    fn pow_by_inverse_exponent_undoes_power() {
        // e = 257^-1 mod 10006; raising 5^e back to the 257th power returns 5.
        let p = fp(10007);
        let e = inv_mod(&BigUint::from(257u32), &BigUint::from(10006u32)).unwrap();
        let x = p.element_from_u64(5);
        assert_eq!(x.pow(&e).pow_u64(257), x);
    }

    #[test]
    fn inv_mod_examples() {
        assert_eq!(
            inv_mod(&BigUint::from(3u32), &BigUint::from(10u32)).unwrap(),
            BigUint::from(7u32)
        );
        assert_eq!(
            inv_mod(&BigUint::from(1u32), &BigUint::from(10u32)).unwrap(),
            BigUint::from(1u32)
        );
        assert!(matches!(
            inv_mod(&BigUint::from(2u32), &BigUint::from(10u32)),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn qnr_detection_mod_7_and_13() {
        let p7 = fp(7);
        // Squares mod 7 are {1, 2, 4}.
        assert!(legendre_is_qnr(&p7.element_from_u64(3)).unwrap());
        assert!(!legendre_is_qnr(&p7.element_from_u64(2)).unwrap());
        let p13 = fp(13);
        assert!(!legendre_is_qnr(&p13.one()).unwrap());
        assert_eq!(legendre_is_qnr(&p13.zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn modulus_construction_guards() {
        assert_eq!(PrimeModulus::new(BigUint::from(3u32)), Err(Error::ModulusTooSmall));
        assert!(matches!(
            PrimeModulus::new(BigUint::from(10006u32)),
            Err(Error::NotPrime(_))
        ));
        assert!(PrimeModulus::new(BigUint::from(10007u32)).is_ok());
        // Builtins parse and have the advertised sizes.
        assert_eq!(PrimeModulus::bls12().bit_length(), 255);
        assert_eq!(PrimeModulus::bn254().bit_length(), 254);
    }

    #[test]
    fn hex_is_fixed_width_lowercase() {
        let p = fp(10007);
        let x = p.element_from_u64(5);
        assert_eq!(x.to_hex(), "0005");
        assert_eq!(FieldElement::from_hex("0005", &p).unwrap(), x);
        // Non-canonical encodings are rejected.
        assert!(FieldElement::from_hex("2717", &p).is_err()); // 10007 itself
    }

    proptest! {
        #[test]
        fn inverse_times_self_is_one(a in 1u64..10007) {
            let p = fp(10007);
            let x = p.element_from_u64(a);
            prop_assert_eq!(x.inv().unwrap().mul(&x).unwrap(), p.one());
        }

        #[test]
        fn fermat_little_theorem(a in 1u64..10007) {
            let p = fp(10007);
            prop_assert_eq!(p.element_from_u64(a).pow_u64(10006), p.one());
        }

        #[test]
        fn pow_matches_naive_product(a in 0u64..131, k in 0u32..1024u32) {
            let p = fp(131);
            let x = p.element_from_u64(a);
            let mut acc = p.one();
            for _ in 0..k {
                acc = acc.mul(&x).unwrap();
            }
            prop_assert_eq!(x.pow_u64(k as u64), acc);
        }

        #[test]
        fn bytes_roundtrip(a in 0u64..10007) {
            let p = fp(10007);
            let x = p.element_from_u64(a);
            prop_assert_eq!(FieldElement::from_bytes(&x.to_bytes(), &p).unwrap(), x);
        }
    }
}
