//! The circulant mixing layer `x -> circ(1, ..., n) * x + c` and the matrix
//! helpers shared with the lab checks.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

/// Applies the mixing layer using the O(n) evaluation rule: with
/// `sigma = sum(v_i)` and `w_1 = sigma + sum((i-1) * v_i)`, each further
/// component is `w_i = w_{i-1} - sigma + n * v_{i-1}`.
pub fn affine_layer(v: &[FieldElement], constants: Option<&[FieldElement]>) -> Result<Vec<FieldElement>> {
    let n = v.len();
    if n < 2 {
        return Err(Error::LengthMismatch { expected: 2, got: n });
    }
    if let Some(c) = constants {
        if c.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: c.len() });
        }
    }
    let modulus = v[0].modulus().clone();
    let mut sigma = modulus.zero();
    let mut weighted = modulus.zero();
    for (i, x) in v.iter().enumerate() {
        sigma = sigma.add(x)?;
        weighted = weighted.add(&scale(x, i as u64)?)?;
    }
    let mut w = Vec::with_capacity(n);
    w.push(sigma.add(&weighted)?);
    for i in 1..n {
        let prev = w[i - 1].sub(&sigma)?;
        w.push(prev.add(&scale(&v[i - 1], n as u64)?)?);
    }
    if let Some(c) = constants {
        for (wi, ci) in w.iter_mut().zip(c) {
            *wi = wi.add(ci)?;
        }
    }
    Ok(w)
}

fn scale(x: &FieldElement, k: u64) -> Result<FieldElement> {
    x.mul(&x.modulus().element_from_u64(k))
}

/// Entries of `circ(1, ..., n)`: row `i` is the first row rotated right `i`
/// places, so entry `(i, j) = ((j - i) mod n) + 1`.
pub fn circulant_entry(n: usize, i: usize, j: usize) -> u64 {
    ((j + n - i) % n) as u64 + 1
}

/// Dense `circ(1, ..., n)` over the given field.
pub fn circulant_matrix(n: usize, modulus: &Arc<PrimeModulus>) -> Vec<Vec<FieldElement>> {
    (0..n)
        .map(|i| (0..n).map(|j| modulus.element_from_u64(circulant_entry(n, i, j))).collect())
        .collect()
}

/// Schoolbook matrix-vector product; the independent oracle for
/// [`affine_layer`] and the workhorse of the inverse direction.
pub fn mat_vec_mul(matrix: &[Vec<FieldElement>], v: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let n = v.len();
    let modulus = v[0].modulus().clone();
    let mut out = Vec::with_capacity(matrix.len());
    for row in matrix {
        if row.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: row.len() });
        }
        let mut acc = modulus.zero();
        for (m, x) in row.iter().zip(v) {
            acc = acc.add(&m.mul(x)?)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Matrix inverse by Gauss-Jordan elimination. Errors if singular.
pub fn invert_matrix(matrix: &[Vec<FieldElement>]) -> Result<Vec<Vec<FieldElement>>> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::LengthMismatch { expected: 1, got: 0 });
    }
    let modulus = matrix[0][0].modulus().clone();
    let mut a: Vec<Vec<FieldElement>> = matrix.to_vec();
    let mut inv: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { modulus.one() } else { modulus.zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidParameter("singular matrix".into()))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pivot_inv = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&pivot_inv)?;
            inv[col][j] = inv[col][j].mul(&pivot_inv)?;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let t = factor.mul(&a[col][j])?;
                a[r][j] = a[r][j].sub(&t)?;
                let t = factor.mul(&inv[col][j])?;
                inv[r][j] = inv[r][j].sub(&t)?;
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Arc<PrimeModulus> {
        PrimeModulus::new(BigUint::from(p)).unwrap()
    }

    #[test]
    fn first_column_of_circ_3() {
        let p = fp(10007);
        let v = vec![p.one(), p.zero(), p.zero()];
        let w = affine_layer(&v, None).unwrap();
        let expect: Vec<_> = [1u64, 3, 2].iter().map(|&x| p.element_from_u64(x)).collect();
        assert_eq!(w, expect);
    }

    #[test]
    fn zero_vector_passes_constants_through() {
        let p = fp(10007);
        let v = vec![p.zero(); 4];
        let c: Vec<_> = (0..4).map(|i| p.element_from_u64(17 * i + 3)).collect();
        assert_eq!(affine_layer(&v, Some(&c)).unwrap(), c);
    }

    #[test]
    fn matches_naive_circulant_multiply() {
        let p = fp(10007);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=8usize {
            let matrix = circulant_matrix(n, &p);
            for _ in 0..50 {
                let v: Vec<_> = (0..n).map(|_| p.element_from_u64(rng.gen_range(0..10007))).collect();
                assert_eq!(affine_layer(&v, None).unwrap(), mat_vec_mul(&matrix, &v).unwrap());
            }
        }
    }

    #[test]
    fn inverse_matrix_roundtrips() {
        let p = fp(10007);
        for n in 2..=8usize {
            let m = circulant_matrix(n, &p);
            let m_inv = invert_matrix(&m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let v: Vec<_> = (0..n).map(|_| p.element_from_u64(rng.gen_range(0..10007))).collect();
            let w = mat_vec_mul(&m, &v).unwrap();
            assert_eq!(mat_vec_mul(&m_inv, &w).unwrap(), v);
        }
    }
}
