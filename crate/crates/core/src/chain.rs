//! Short multiplication chains for the supported power maps.
//!
//! The eight built-in chains evaluate `x^d2` for
//! `d2 in {121, 123, 125, 129, 161, 193, 195, 257}` with at most 9
//! multiplications; they double as the constraint recipe for verifying
//! `y^d2 = x` in a prover circuit.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::FieldElement;

/// Exponents with a built-in evaluation chain.
pub const ALLOWED_D2: [u64; 8] = [121, 123, 125, 129, 161, 193, 195, 257];

/// One step of a chain. Register 0 holds the input; every step appends the
/// register holding its result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainStep {
    Square(usize),
    Mul(usize, usize),
}

/// A straight-line program computing `x^exponent` from `x`.
#[derive(Clone, Debug)]
pub struct ExponentChain {
    exponent: u64,
    steps: Vec<ChainStep>,
}

impl ExponentChain {
    fn new(exponent: u64, steps: Vec<ChainStep>) -> Self {
        let chain = ExponentChain { exponent, steps };
        debug_assert_eq!(*chain.register_exponents().last().unwrap(), exponent);
        chain
    }

    /// The built-in chain for `d2`, if `d2` is in [`ALLOWED_D2`].
    pub fn for_exponent(d2: u64) -> Option<&'static ExponentChain> {
        static TABLE: OnceLock<HashMap<u64, ExponentChain>> = OnceLock::new();
        TABLE.get_or_init(builtin_chains).get(&d2)
    }

    /// Left-to-right square-and-multiply chain for an arbitrary exponent.
    /// Optimal for the small `d1` values in use (2 steps for 3, 3 for 5).
    pub fn square_and_multiply(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Unsupported(format!("no chain for exponent {d}")));
        }
        let mut steps = Vec::new();
        let mut last = 0usize; // register holding the running power
        for bit in (0..63 - d.leading_zeros() as u64).rev() {
            steps.push(ChainStep::Square(last));
            last = steps.len();
            if (d >> bit) & 1 == 1 {
                steps.push(ChainStep::Mul(last, 0));
                last = steps.len();
            }
        }
        Ok(Self::new(d, steps))
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    /// Number of field multiplications the chain performs.
    pub fn multiplications(&self) -> usize {
        self.steps.len()
    }

    /// The exponent held by each register, input included.
    pub fn register_exponents(&self) -> Vec<u64> {
        let mut exps = vec![1u64];
        for step in &self.steps {
            let e = match *step {
                ChainStep::Square(i) => 2 * exps[i],
                ChainStep::Mul(i, j) => exps[i] + exps[j],
            };
            exps.push(e);
        }
        exps
    }

    /// Evaluates the chain, returning the result and the number of
    /// multiplications actually performed.
    pub fn evaluate(&self, x: &FieldElement) -> (FieldElement, usize) {
        let mut regs = Vec::with_capacity(self.steps.len() + 1);
        regs.push(x.clone());
        let mut count = 0usize;
        for step in &self.steps {
            let value = match *step {
                ChainStep::Square(i) => regs[i].square(),
                ChainStep::Mul(i, j) => regs[i]
                    .mul(&regs[j])
                    .expect("chain registers share one modulus"),
            };
            count += 1;
            regs.push(value);
        }
        (regs.pop().unwrap(), count)
    }
}

/// Evaluates `x^chain.exponent()` via the chain. Equals `x.pow(d2)`.
pub fn chain_pow(x: &FieldElement, chain: &ExponentChain) -> FieldElement {
    chain.evaluate(x).0
}

/// Minimal multiplication count for `x^d` (the `d_inc` of the counting
/// formulas). Built-in chains are authoritative for their exponents; other
/// values fall back to an exact shortest-addition-chain search.
pub fn d_inc(d: u64) -> Result<u64> {
    if d == 1 {
        return Ok(0);
    }
    if let Some(chain) = ExponentChain::for_exponent(d) {
        return Ok(chain.multiplications() as u64);
    }
    shortest_addition_chain(d).map(|l| l as u64)
}

/// Exact shortest addition chain length by iterative-deepening search over
/// strictly increasing chains. Intended for small exponents only.
pub fn shortest_addition_chain(d: u64) -> Result<usize> {
    if d == 0 {
        return Err(Error::Unsupported("no addition chain for 0".into()));
    }
    if d > 4096 {
        return Err(Error::SizeGuard(format!("addition chain search capped at 4096, got {d}")));
    }
    if d == 1 {
        return Ok(0);
    }
    // Lower bound: ceil(log2 d) steps are always needed.
    let lower = 64 - (d - 1).leading_zeros() as usize;
    for limit in lower.. {
        let mut chain = vec![1u64];
        if chain_search(&mut chain, d, limit) {
            return Ok(limit);
        }
    }
    unreachable!()
}

fn chain_search(chain: &mut Vec<u64>, target: u64, limit: usize) -> bool {
    let last = *chain.last().unwrap();
    if last == target {
        return true;
    }
    let steps_left = limit - (chain.len() - 1);
    if steps_left == 0 || last << steps_left < target {
        return false;
    }
    for i in (0..chain.len()).rev() {
        for j in (0..=i).rev() {
            let next = chain[i] + chain[j];
            if next <= last || next > target {
                continue;
            }
            chain.push(next);
            if chain_search(chain, target, limit) {
                return true;
            }
            chain.pop();
        }
    }
    false
}

fn builtin_chains() -> HashMap<u64, ExponentChain> {
    use ChainStep::{Mul, Square};
    let mut table = HashMap::new();
    let mut add = |d2: u64, steps: Vec<ChainStep>| {
        table.insert(d2, ExponentChain::new(d2, steps));
    };
    // y = (x^2)^2, z = (y^2 * y)^2, x^121 = (z^2)^2 * z * x
    add(121, vec![
        Square(0), Square(1), Square(2), Mul(3, 2), Square(4),
        Square(5), Square(6), Mul(7, 5), Mul(8, 0),
    ]);
    // y = x^2 * x, z = ((y^2)^2)^2, x^123 = (z^2)^2 * z * y
    add(123, vec![
        Square(0), Mul(1, 0), Square(2), Square(3), Square(4),
        Square(5), Square(6), Mul(7, 5), Mul(8, 2),
    ]);
    // y = (x^2)^2 * x, z = ((y^2)^2)^2, x^125 = z^2 * z * y
    add(125, vec![
        Square(0), Square(1), Mul(2, 0), Square(3), Square(4),
        Square(5), Square(6), Mul(7, 6), Mul(8, 3),
    ]);
    // y = (((x^2)^2)^2)^2, z = ((y^2)^2)^2, x^129 = z * x
    add(129, vec![
        Square(0), Square(1), Square(2), Square(3), Square(4),
        Square(5), Square(6), Mul(7, 0),
    ]);
    // y = (x^2)^2 * x, z = ((y^2)^2)^2, x^161 = (z^2)^2 * x
    add(161, vec![
        Square(0), Square(1), Mul(2, 0), Square(3), Square(4),
        Square(5), Square(6), Square(7), Mul(8, 0),
    ]);
    // y = x^2 * x, z = (((y^2)^2)^2)^2, x^193 = (z^2)^2 * x
    add(193, vec![
        Square(0), Mul(1, 0), Square(2), Square(3), Square(4),
        Square(5), Square(6), Square(7), Mul(8, 0),
    ]);
    // y = x^2 * x, z = (((y^2)^2)^2)^2, x^195 = (z^2)^2 * y
    add(195, vec![
        Square(0), Mul(1, 0), Square(2), Square(3), Square(4),
        Square(5), Square(6), Square(7), Mul(8, 2),
    ]);
    // y = (((x^2)^2)^2)^2, z = (((y^2)^2)^2)^2, x^257 = z * x
    add(257, vec![
        Square(0), Square(1), Square(2), Square(3), Square(4),
        Square(5), Square(6), Square(7), Mul(8, 0),
    ]);
    table
}
