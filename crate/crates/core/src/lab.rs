//! Small-prime brute-force instruments: exhaustive bijectivity, full
//! polynomial interpolation of the unkeyed permutation, the two-round
//! density experiment, and the MDS check for the mixing matrix.
//!
//! Everything here is gated to `p^n <= 10^6` grid points and runs its
//! arithmetic in u64 (the primes are tiny).

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::circulant_entry;
use crate::error::{Error, Result};
use crate::params::{ArionParameters, GenerateOptions, Mode};
use crate::permutation::arion_pi;

const GRID_GUARD: u64 = 1_000_000;

fn grid_size(p: u64, n: usize) -> Result<usize> {
    let mut total = 1u64;
    for _ in 0..n {
        total = total
            .checked_mul(p)
            .filter(|&t| t <= GRID_GUARD)
            .ok_or_else(|| Error::SizeGuard(format!("p^n = {p}^{n} exceeds {GRID_GUARD}")))?;
    }
    Ok(total as usize)
}

fn small_prime(params: &ArionParameters) -> Result<u64> {
    let digits = params.modulus().value().to_u64_digits();
    match digits.len() {
        0 | 1 if params.modulus().bit_length() <= 20 => Ok(digits.first().copied().unwrap_or(0)),
        _ => Err(Error::SizeGuard("lab instruments need a prime below 2^20".into())),
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// The first `rounds` rounds of the unkeyed permutation in u64 arithmetic:
/// the unkeyed mixing layer, then `rounds` iterations of (GTDS, mixing with
/// round constants). `rounds = 0` is the identity map.
fn prefix_pi_u64(state: &[u64], params: &SmallParams, rounds: usize) -> Vec<u64> {
    if rounds == 0 {
        return state.to_vec();
    }
    let mut s = affine_u64(state, None, params.p);
    for round in 0..rounds {
        s = gtds_u64(&s, params, round);
        s = affine_u64(&s, Some(&params.round_constants[round]), params.p);
    }
    s
}

fn affine_u64(v: &[u64], constants: Option<&[u64]>, p: u64) -> Vec<u64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut acc = 0u64;
            for (j, &x) in v.iter().enumerate() {
                acc = (acc + mul_mod(circulant_entry(n, i, j) % p, x, p)) % p;
            }
            if let Some(c) = constants {
                acc = (acc + c[i]) % p;
            }
            acc
        })
        .collect()
}

fn gtds_u64(x: &[u64], params: &SmallParams, round: usize) -> Vec<u64> {
    let n = x.len();
    let p = params.p;
    let mut out = vec![0u64; n];
    out[n - 1] = pow_mod(x[n - 1], params.e, p);
    let mut sigma = (x[n - 1] + out[n - 1]) % p;
    for i in (0..n - 1).rev() {
        let (a1, a2, b) = params.coeffs[round][i];
        let sq = mul_mod(sigma, sigma, p);
        let g = (sq + mul_mod(a1, sigma, p) + a2) % p;
        let h = (sq + mul_mod(b, sigma, p)) % p;
        out[i] = (mul_mod(pow_mod(x[i], params.d1, p), g, p) + h) % p;
        if i > 0 {
            sigma = (sigma + x[i] + out[i]) % p;
        }
    }
    out
}

/// u64 mirror of a parameter set, for grid-scale evaluation.
struct SmallParams {
    p: u64,
    d1: u64,
    e: u64,
    /// per round, per branch: (alpha1, alpha2, beta)
    coeffs: Vec<Vec<(u64, u64, u64)>>,
    round_constants: Vec<Vec<u64>>,
}

impl SmallParams {
    fn from_params(params: &ArionParameters, rounds: usize) -> Result<Self> {
        let p = small_prime(params)?;
        let as_u64 = |f: &crate::field::FieldElement| -> u64 {
            f.value().to_u64_digits().first().copied().unwrap_or(0)
        };
        let n = params.branches();
        let coeffs = (0..rounds.max(1))
            .map(|r| {
                let r = r.min(params.rounds() - 1);
                (0..n - 1)
                    .map(|i| {
                        (
                            as_u64(params.alpha1(r, i)),
                            as_u64(params.alpha2(r, i)),
                            as_u64(params.beta(r, i)),
                        )
                    })
                    .collect()
            })
            .collect();
        let round_constants = (0..rounds.max(1))
            .map(|r| {
                let r = r.min(params.rounds() - 1);
                params.round_constants(r).iter().map(&as_u64).collect()
            })
            .collect();
        let e = params.e().to_u64_digits().first().copied().unwrap_or(0);
        Ok(SmallParams { p, d1: params.d1(), e, coeffs, round_constants })
    }
}

/// The unique coefficient tables of the map's components in
/// `F_p[x_1..x_n] / (x_i^p - x_i)`. Exponent vectors are indexed
/// little-endian: entry `sum(e_k * p^k)` holds the coefficient of
/// `prod(x_k^e_k)`.
#[derive(Clone, Debug)]
pub struct InterpolatedMap {
    pub p: u64,
    pub n: usize,
    pub components: Vec<Vec<u64>>,
}

/// Summary of one component's coefficient table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DensityStats {
    pub nonzero: u64,
    pub density: f64,
    pub total_degree: u64,
    pub univariate_degree: u64,
}

impl InterpolatedMap {
    pub fn stats(&self) -> Vec<DensityStats> {
        let total = self.components[0].len() as u64;
        self.components
            .iter()
            .map(|coeffs| {
                let mut nonzero = 0u64;
                let mut total_degree = 0u64;
                let mut univariate = 0u64;
                for (idx, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    nonzero += 1;
                    let mut rem = idx as u64;
                    let mut deg = 0u64;
                    for _ in 0..self.n {
                        let e = rem % self.p;
                        rem /= self.p;
                        deg += e;
                        univariate = univariate.max(e);
                    }
                    total_degree = total_degree.max(deg);
                }
                DensityStats {
                    nonzero,
                    density: nonzero as f64 / total as f64,
                    total_degree,
                    univariate_degree: univariate,
                }
            })
            .collect()
    }

    /// Horner-free evaluation of the interpolated polynomial at a point;
    /// interpolation followed by evaluation must reproduce the map.
    pub fn evaluate(&self, point: &[u64]) -> Vec<u64> {
        let p = self.p;
        // Power tables per coordinate.
        let powers: Vec<Vec<u64>> = point
            .iter()
            .map(|&x| {
                let mut row = vec![1u64; p as usize];
                for k in 1..p as usize {
                    row[k] = mul_mod(row[k - 1], x, p);
                }
                row
            })
            .collect();
        self.components
            .iter()
            .map(|coeffs| {
                let mut acc = 0u64;
                for (idx, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut term = c;
                    let mut rem = idx as u64;
                    for pw in &powers {
                        let e = (rem % p) as usize;
                        rem /= p;
                        term = mul_mod(term, pw[e], p);
                    }
                    acc = (acc + term) % p;
                }
                acc
            })
            .collect()
    }
}

/// Inverse of the p x p evaluation (Vandermonde) matrix over F_p.
fn inverse_vandermonde(p: u64) -> Vec<Vec<u64>> {
    let np = p as usize;
    let mut a: Vec<Vec<u64>> = (0..np)
        .map(|x| {
            let mut row = vec![1u64; np];
            for k in 1..np {
                row[k] = mul_mod(row[k - 1], x as u64, p);
            }
            row
        })
        .collect();
    let mut inv: Vec<Vec<u64>> = (0..np)
        .map(|i| (0..np).map(|j| u64::from(i == j)).collect())
        .collect();
    for col in 0..np {
        let pivot = (col..np).find(|&r| a[r][col] != 0).expect("Vandermonde is invertible");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = pow_mod(a[col][col], p - 2, p);
        for j in 0..np {
            a[col][j] = mul_mod(a[col][j], pinv, p);
            inv[col][j] = mul_mod(inv[col][j], pinv, p);
        }
        for r in 0..np {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for j in 0..np {
                let t = mul_mod(f, a[col][j], p);
                a[r][j] = (a[r][j] + p - t) % p;
                let t = mul_mod(f, inv[col][j], p);
                inv[r][j] = (inv[r][j] + p - t) % p;
            }
        }
    }
    inv
}

/// Evaluates the `rounds`-round prefix of the unkeyed permutation on the
/// whole grid and recovers the coefficient tables by applying the inverse
/// evaluation transform along each axis (n * p^n * p multiplications, no
/// dense solve).
pub fn interpolate_pi(params: &ArionParameters, rounds: usize) -> Result<InterpolatedMap> {
    let n = params.branches();
    let small = SmallParams::from_params(params, rounds)?;
    let p = small.p;
    let total = grid_size(p, n)?;

    // Evaluation grid, component-major.
    let stride: Vec<u64> = (0..n).map(|k| p.pow(k as u32)).collect();
    let values: Vec<Vec<u64>> = (0..total as u64)
        .into_par_iter()
        .map(|idx| {
            let point: Vec<u64> = stride.iter().map(|s| idx / s % p).collect();
            prefix_pi_u64(&point, &small, rounds)
        })
        .collect();
    let mut components: Vec<Vec<u64>> = (0..n)
        .map(|c| values.iter().map(|v| v[c]).collect())
        .collect();

    let vinv = inverse_vandermonde(p);
    for table in &mut components {
        for &s in &stride {
            let s = s as usize;
            let block = s * p as usize;
            // Transform every line along this axis.
            let transformed: Vec<u64> = (0..total)
                .into_par_iter()
                .map(|idx| {
                    let line_base = idx / block * block + idx % s;
                    let k = idx / s % p as usize;
                    let mut acc = 0u64;
                    let row = &vinv[k];
                    for (j, &w) in row.iter().enumerate() {
                        if w != 0 {
                            acc = (acc + mul_mod(w, table[line_base + j * s], p)) % p;
                        }
                    }
                    acc
                })
                .collect();
            *table = transformed;
        }
    }
    Ok(InterpolatedMap { p, n, components })
}

/// The observed two-round profile of one `(p, n, d1, d2)` instance across
/// the fixed seed set.
#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub p: u64,
    pub n: usize,
    pub d1: u64,
    pub d2: u64,
    pub rounds_evaluated: usize,
    pub seeds: Vec<String>,
    pub min_density: f64,
    pub max_total_degree: u64,
    pub max_univariate_degree: u64,
    pub per_seed_min_density: Vec<f64>,
}

/// The enumerated seeds of the experiment, reproducible by construction.
pub fn density_seeds(count: usize) -> Vec<Vec<u8>> {
    (0..count).map(|i| format!("arion-density-{i}").into_bytes()).collect()
}

/// Builds each instance with the 6-round profile, measures the 2-round
/// prefix on every seed, and reports minima over components and seeds.
pub fn density_experiment(
    primes: &[u64],
    n: usize,
    d1: u64,
    d2: u64,
    seed_count: usize,
    rounds: usize,
) -> Result<Vec<DensityReport>> {
    let seeds = density_seeds(seed_count.max(1));
    primes
        .iter()
        .map(|&p| {
            let modulus = crate::field::PrimeModulus::new(p.into())?;
            let mut min_density = f64::INFINITY;
            let mut max_total = 0u64;
            let mut max_univar = 0u64;
            let mut per_seed = Vec::with_capacity(seeds.len());
            for seed in &seeds {
                let params = ArionParameters::generate(
                    modulus.clone(),
                    n,
                    d2,
                    Mode::Standard,
                    seed,
                    GenerateOptions {
                        rounds: Some(6),
                        d1: Some(d1),
                        allow_unsafe_d2: true,
                        ..Default::default()
                    },
                )?;
                let map = interpolate_pi(&params, rounds)?;
                let stats = map.stats();
                let seed_min =
                    stats.iter().map(|s| s.density).fold(f64::INFINITY, f64::min);
                per_seed.push(seed_min);
                min_density = min_density.min(seed_min);
                for s in &stats {
                    max_total = max_total.max(s.total_degree);
                    max_univar = max_univar.max(s.univariate_degree);
                }
            }
            Ok(DensityReport {
                p,
                n,
                d1,
                d2,
                rounds_evaluated: rounds,
                seeds: seeds.iter().map(hex::encode).collect(),
                min_density,
                max_total_degree: max_total,
                max_univariate_degree: max_univar,
                per_seed_min_density: per_seed,
            })
        })
        .collect()
}

/// Exhaustively confirms the full permutation hits every state exactly once.
pub fn exhaustive_bijection_check(params: &ArionParameters) -> Result<bool> {
    let n = params.branches();
    let modulus = params.modulus();
    let p_digits = modulus.value().to_u64_digits();
    let p = p_digits.first().copied().unwrap_or(0);
    if modulus.bit_length() > 20 {
        return Err(Error::SizeGuard("bijection check needs a prime below 2^20".into()));
    }
    let total = grid_size(p, n)?;
    let stride: Vec<u64> = (0..n).map(|k| p.pow(k as u32)).collect();
    let hits: Vec<u64> = (0..total as u64)
        .into_par_iter()
        .map(|idx| {
            let point: Vec<_> = stride.iter().map(|s| modulus.element_from_u64(idx / s % p)).collect();
            let out = arion_pi(&point, params).expect("state width matches");
            out.iter()
                .zip(&stride)
                .map(|(f, s)| f.value().to_u64_digits().first().copied().unwrap_or(0) * s)
                .sum()
        })
        .collect();
    let mut seen = vec![false; total];
    for h in hits {
        let h = h as usize;
        if seen[h] {
            return Ok(false);
        }
        seen[h] = true;
    }
    Ok(seen.iter().all(|&s| s))
}

/// Checks that every square submatrix of `circ(1..n)` is nonsingular mod p
/// by direct minor enumeration. Valid for `n <= 4` and `p > 130`.
pub fn mds_check(n: usize, modulus: &std::sync::Arc<crate::field::PrimeModulus>) -> Result<bool> {
    if !(2..=4).contains(&n) {
        return Err(Error::Unsupported(format!("minor enumeration covers n in 2..=4, got {n}")));
    }
    if *modulus.value() <= 130u32.into() {
        return Err(Error::InvalidParameter("the MDS statement needs p > 130".into()));
    }
    let matrix = crate::affine::circulant_matrix(n, modulus);
    for size in 1..=n {
        for rows in subsets(n, size) {
            for cols in subsets(n, size) {
                let minor: Vec<Vec<crate::field::FieldElement>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| matrix[i][j].clone()).collect())
                    .collect();
                if crate::affine::invert_matrix(&minor).is_err() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, size, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeModulus;
    use num_bigint::BigUint;

    fn lab(p: u64, n: usize, d1: u64, d2: u64, rounds: usize, seed: &[u8]) -> ArionParameters {
        ArionParameters::generate(
            PrimeModulus::new(BigUint::from(p)).unwrap(),
            n,
            d2,
            Mode::Standard,
            seed,
            GenerateOptions {
                rounds: Some(rounds),
                d1: Some(d1),
                allow_unsafe_d2: true,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn zero_rounds_interpolates_to_coordinate_monomials() {
        let params = lab(11, 3, 3, 3, 6, b"interp");
        let map = interpolate_pi(&params, 0).unwrap();
        for (c, stats) in map.stats().iter().enumerate() {
            assert_eq!(stats.nonzero, 1, "component {c}");
            assert_eq!(stats.total_degree, 1);
            assert_eq!(stats.univariate_degree, 1);
        }
        // The single monomial is x_c itself.
        assert_eq!(map.components[0][1], 1);
        assert_eq!(map.components[1][11], 1);
        assert_eq!(map.components[2][121], 1);
    }

    #[test]
    fn interpolation_reevaluates_on_the_grid() {
        let params = lab(11, 2, 3, 3, 6, b"interp");
        let small = SmallParams::from_params(&params, 1).unwrap();
        let map = interpolate_pi(&params, 1).unwrap();
        for a in 0..11u64 {
            for b in 0..11u64 {
                assert_eq!(map.evaluate(&[a, b]), prefix_pi_u64(&[a, b], &small, 1));
            }
        }
    }

    #[test]
    fn prefix_matches_big_field_permutation() {
        // The u64 fast path must agree with the generic implementation on
        // the full permutation.
        let params = lab(11, 3, 3, 3, 2, b"prefix");
        let small = SmallParams::from_params(&params, 2).unwrap();
        let m = params.modulus();
        for idx in 0..150u64 {
            let point = [idx % 11, idx / 11 % 11, idx * 7 % 11];
            let big: Vec<_> = point.iter().map(|&v| m.element_from_u64(v)).collect();
            let expect: Vec<u64> = arion_pi(&big, &params)
                .unwrap()
                .iter()
                .map(|f| f.value().to_u64_digits().first().copied().unwrap_or(0))
                .collect();
            assert_eq!(prefix_pi_u64(&point, &small, 2), expect);
        }
    }

    #[test]
    fn two_round_density_small_instance() {
        let reports = density_experiment(&[11], 3, 3, 3, 5, 2).unwrap();
        let r = &reports[0];
        assert!(r.min_density >= 0.82, "density {}", r.min_density);
        assert_eq!(r.max_total_degree, 3 * 10 - 1);
        assert_eq!(r.max_univariate_degree, 10);
    }

    #[test]
    fn bijection_small_primes() {
        assert!(exhaustive_bijection_check(&lab(11, 2, 3, 3, 6, b"bij")).unwrap());
        assert!(exhaustive_bijection_check(&lab(13, 2, 5, 5, 6, b"bij")).unwrap());
        // e = 3 since 3 * 3 = 9 = 1 mod 4.
        let p5 = lab(5, 2, 3, 3, 2, b"bij");
        assert_eq!(*p5.e(), BigUint::from(3u32));
        assert!(exhaustive_bijection_check(&p5).unwrap());
    }

    #[test]
    fn corrupted_discriminant_breaks_bijectivity() {
        // alpha1 = 2, alpha2 = 1 gives discriminant 0, so g = (sigma + 1)^2
        // vanishes at sigma = -1 and branch 1 collapses there.
        let good = lab(11, 2, 3, 3, 1, b"bij");
        let mut json: serde_json::Value = serde_json::from_str(&good.to_json()).unwrap();
        json["coefficients"]["shared"]["alpha1"][0] = serde_json::json!("02");
        json["coefficients"]["shared"]["alpha2"][0] = serde_json::json!("01");
        let bad = ArionParameters::from_json(&json.to_string()).unwrap();
        assert!(!bad.validate().is_empty());
        assert!(!exhaustive_bijection_check(&bad).unwrap());
    }

    #[test]
    fn size_guard_enforced() {
        let params = lab(2039, 3, 3, 7, 2, b"guard");
        assert!(matches!(interpolate_pi(&params, 2), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn mds_small_cases() {
        let fp = |p: u64| PrimeModulus::new(BigUint::from(p)).unwrap();
        assert!(mds_check(2, &fp(131)).unwrap());
        assert!(mds_check(3, &fp(131)).unwrap());
        assert!(mds_check(3, &fp(10007)).unwrap());
        assert!(mds_check(4, &fp(10007)).unwrap());
        assert!(mds_check(5, &fp(10007)).is_err());
        assert!(mds_check(3, &fp(127)).is_err());
    }
}
