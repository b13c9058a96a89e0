//! The generalized triangular dynamical system at the heart of each round.
//!
//! Branch `i < n` maps to `x_i^d1 * g_i(sigma) + h_i(sigma)` where `sigma`
//! sums `x_j + f_j` over the branches below, and the last branch applies the
//! high-degree inverse power map `x_n^e`. The quadratics `g_i` have
//! non-residue discriminants, so they never vanish and the system inverts by
//! back-substitution.

use num_bigint::BigUint;
use num_traits::One;

use crate::chain::ExponentChain;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::params::ArionParameters;

fn check_width(state: &[FieldElement], params: &ArionParameters) -> Result<()> {
    if state.len() != params.branches() {
        return Err(Error::LengthMismatch { expected: params.branches(), got: state.len() });
    }
    Ok(())
}

/// `g_i(s) = s^2 + alpha1 * s + alpha2`
fn eval_g(s: &FieldElement, alpha1: &FieldElement, alpha2: &FieldElement) -> Result<FieldElement> {
    s.square().add(&alpha1.mul(s)?)?.add(alpha2)
}

/// `h_i(s) = s^2 + beta * s`
fn eval_h(s: &FieldElement, beta: &FieldElement) -> Result<FieldElement> {
    s.square().add(&beta.mul(s)?)
}

/// Forward evaluation in a single backward sweep: the running sum over the
/// branches below is extended once per branch instead of being recomputed.
pub fn gtds_forward(state: &[FieldElement], params: &ArionParameters, round: usize) -> Result<Vec<FieldElement>> {
    check_width(state, params)?;
    let n = params.branches();
    let mut out = vec![params.modulus().zero(); n];
    out[n - 1] = state[n - 1].pow(params.e());
    let mut sigma = state[n - 1].add(&out[n - 1])?;
    for i in (0..n - 1).rev() {
        let g = eval_g(&sigma, params.alpha1(round, i), params.alpha2(round, i))?;
        let h = eval_h(&sigma, params.beta(round, i))?;
        out[i] = state[i].pow_u64(params.d1()).mul(&g)?.add(&h)?;
        if i > 0 {
            sigma = sigma.add(&state[i])?.add(&out[i])?;
        }
    }
    Ok(out)
}

/// Back-substitution inverse: recover `x_n = y_n^d2`, then walk the branches
/// upward, solving `x_i = ((y_i - h_i) / g_i)^(1/d1)` with the same running
/// sum as the forward direction (the `y_j` are the `f_j`).
pub fn gtds_inverse(output: &[FieldElement], params: &ArionParameters, round: usize) -> Result<Vec<FieldElement>> {
    check_width(output, params)?;
    let n = params.branches();
    let mut state = vec![params.modulus().zero(); n];
    state[n - 1] = match ExponentChain::for_exponent(params.d2()) {
        Some(chain) => crate::chain::chain_pow(&output[n - 1], chain),
        None => output[n - 1].pow(&BigUint::from(params.d2())),
    };
    let mut sigma = state[n - 1].add(&output[n - 1])?;
    for i in (0..n - 1).rev() {
        let g = eval_g(&sigma, params.alpha1(round, i), params.alpha2(round, i))?;
        if g.is_zero() {
            return Err(Error::InternalInvariant(
                "GTDS quadratic vanished; discriminant is not a non-residue".into(),
            ));
        }
        let h = eval_h(&sigma, params.beta(round, i))?;
        let base = output[i].sub(&h)?.mul(&g.inv()?)?;
        state[i] = base.pow(params.d1_inv());
        if i > 0 {
            sigma = sigma.add(&state[i])?.add(&output[i])?;
        }
    }
    Ok(state)
}

/// The graph-equivalent system: identical recursion, but the last branch is
/// the low-degree map `x_n^d2`. Checking `(y_1..y_n) = F(x)` is the same as
/// checking `(y_1..y_{n-1}, x_n) = G(x_1..x_{n-1}, y_n)`, which is what makes
/// cheap verification circuits possible.
pub fn gtds_ccz(state: &[FieldElement], params: &ArionParameters, round: usize) -> Result<Vec<FieldElement>> {
    check_width(state, params)?;
    let n = params.branches();
    let mut out = vec![params.modulus().zero(); n];
    out[n - 1] = match ExponentChain::for_exponent(params.d2()) {
        Some(chain) => crate::chain::chain_pow(&state[n - 1], chain),
        None => state[n - 1].pow(&BigUint::from(params.d2())),
    };
    let mut tau = state[n - 1].add(&out[n - 1])?;
    for i in (0..n - 1).rev() {
        let g = eval_g(&tau, params.alpha1(round, i), params.alpha2(round, i))?;
        let h = eval_h(&tau, params.beta(round, i))?;
        out[i] = state[i].pow_u64(params.d1()).mul(&g)?.add(&h)?;
        if i > 0 {
            tau = tau.add(&state[i])?.add(&out[i])?;
        }
    }
    Ok(out)
}

/// Total degree of each branch polynomial: `2^(n-i) * (d1 + e) - d1` for
/// branch `i` (1-indexed), so the last branch has degree `e`.
pub fn gtds_degrees(n: usize, d1: u64, e: &BigUint) -> Vec<BigUint> {
    (1..=n)
        .map(|i| {
            let factor = BigUint::one() << (n - i);
            factor * (e + d1) - d1
        })
        .collect()
}
