//! Rank-1 constraint emission for the sponge hash, plus witness generation
//! and satisfaction checking.
//!
//! The circuit never computes the high-degree power map. For each round the
//! prover supplies `z = x_n^e` as a witness and the circuit checks the graph
//! relation `z^d2 = x_n` through the short multiplication chain (`d2_inc`
//! constraints). Each remaining branch costs `d1_inc` constraints for
//! `x_i^d1`, one squaring `q = sigma^2` shared by the two quadratics (both
//! are `q` plus linear terms), and one product with `g_i`; every sum and the
//! whole mixing layer stay inside linear combinations. Total:
//! `r * ((n - 1) * (d1_inc + 2) + d2_inc)` constraints per permutation call.

pub mod counts;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::circulant_entry;
use crate::chain::{ChainStep, ExponentChain};
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};
use crate::params::{ArionParameters, SpongeParameters};
use crate::sponge::pad;

/// Sparse affine form `sum(coeff * var)`; variable 0 is the constant one.
/// Terms are kept sorted by variable index and zero coefficients pruned, so
/// systems are comparable across runs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearCombination {
    terms: BTreeMap<usize, FieldElement>,
}

impl LinearCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_var(var: usize, modulus: &Arc<PrimeModulus>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(var, modulus.one());
        LinearCombination { terms }
    }

    pub fn constant(value: FieldElement) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(0, value);
        }
        LinearCombination { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &FieldElement)> {
        self.terms.iter().map(|(v, c)| (*v, c))
    }

    pub fn add_term(&mut self, var: usize, coeff: &FieldElement) -> Result<()> {
        match self.terms.remove(&var) {
            Some(existing) => {
                let sum = existing.add(coeff)?;
                if !sum.is_zero() {
                    self.terms.insert(var, sum);
                }
            }
            None => {
                if !coeff.is_zero() {
                    self.terms.insert(var, coeff.clone());
                }
            }
        }
        Ok(())
    }

    pub fn add_lc(&mut self, other: &Self) -> Result<()> {
        for (var, coeff) in other.terms() {
            self.add_term(var, coeff)?;
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &FieldElement) -> Result<()> {
        for (var, coeff) in other.terms() {
            self.add_term(var, &coeff.mul(factor)?)?;
        }
        Ok(())
    }

    pub fn evaluate(&self, assignment: &[FieldElement], modulus: &Arc<PrimeModulus>) -> Result<FieldElement> {
        let mut acc = modulus.zero();
        for (var, coeff) in self.terms() {
            let value = assignment
                .get(var)
                .ok_or(Error::LengthMismatch { expected: var + 1, got: assignment.len() })?;
            acc = acc.add(&coeff.mul(value)?)?;
        }
        Ok(acc)
    }
}

/// One rank-1 constraint `<a, w> * <b, w> = <c, w>`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub a: LinearCombination,
    pub b: LinearCombination,
    pub c: LinearCombination,
}

/// A full system for one hash evaluation. The digest is exposed as an affine
/// combination of witness variables rather than a dedicated variable, so the
/// constraint count is exactly the multiplicative cost.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub modulus: Arc<PrimeModulus>,
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    /// Message variables, in absorption order.
    pub public_inputs: Vec<usize>,
    pub output: LinearCombination,
    pub params_id: String,
}

/// A variable assignment; index 0 holds the constant one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Vec<FieldElement>,
}

impl ConstraintSystem {
    /// The witness must be exactly `num_vars` long with the constant one at
    /// index 0.
    pub fn check_shape(&self, witness: &Witness) -> Result<()> {
        if witness.assignment.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: witness.assignment.len(),
            });
        }
        if witness.assignment[0] != self.modulus.one() {
            return Err(Error::InvalidParameter("witness slot 0 must hold the constant one".into()));
        }
        Ok(())
    }

    /// Indices of unsatisfied constraints (empty = satisfied). Constraints
    /// are checked in parallel. A constraint referencing a missing variable
    /// counts as failing.
    pub fn failing_constraints(&self, witness: &Witness) -> Vec<usize> {
        let mut failing: Vec<usize> = self
            .constraints
            .par_iter()
            .enumerate()
            .filter_map(|(i, cst)| {
                let eval = || -> Result<bool> {
                    let a = cst.a.evaluate(&witness.assignment, &self.modulus)?;
                    let b = cst.b.evaluate(&witness.assignment, &self.modulus)?;
                    let c = cst.c.evaluate(&witness.assignment, &self.modulus)?;
                    Ok(a.mul(&b)? == c)
                };
                match eval() {
                    Ok(true) => None,
                    _ => Some(i),
                }
            })
            .collect();
        failing.sort_unstable();
        failing
    }

    pub fn is_satisfied(&self, witness: &Witness) -> bool {
        self.check_shape(witness).is_ok() && self.failing_constraints(witness).is_empty()
    }

    /// The digest the witness claims, i.e. the output combination evaluated.
    pub fn output_value(&self, witness: &Witness) -> Result<FieldElement> {
        self.output.evaluate(&witness.assignment, &self.modulus)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SystemFile::from_system(self)).expect("system serialize")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: SystemFile =
            serde_json::from_str(json).map_err(|e| Error::Encoding(format!("r1cs json: {e}")))?;
        file.into_system()
    }
}

impl Witness {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&WitnessFile {
            format: "arion-witness-v1".into(),
            assignment: self.assignment.iter().map(FieldElement::to_hex).collect(),
        })
        .expect("witness serialize")
    }

    pub fn from_json(json: &str, modulus: &Arc<PrimeModulus>) -> Result<Self> {
        let file: WitnessFile =
            serde_json::from_str(json).map_err(|e| Error::Encoding(format!("witness json: {e}")))?;
        if file.format != "arion-witness-v1" {
            return Err(Error::Encoding(format!("unknown witness format {}", file.format)));
        }
        Ok(Witness {
            assignment: file
                .assignment
                .iter()
                .map(|s| FieldElement::from_hex(s, modulus))
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

/// Builds the system for a message of `message_len` field elements (the
/// padding shape, and hence the layout, depends only on the length).
pub fn build_r1cs(
    params: &ArionParameters,
    sponge: &SpongeParameters,
    message_len: usize,
) -> Result<ConstraintSystem> {
    synthesize(params, sponge, Message::Shape(message_len)).map(|(cs, _)| cs)
}

/// Runs the honest prover: same synthesis as [`build_r1cs`] with values
/// attached. The witness satisfies the returned system and the system's
/// output combination evaluates to the sponge digest.
pub fn generate_witness(
    message: &[FieldElement],
    params: &ArionParameters,
    sponge: &SpongeParameters,
) -> Result<(ConstraintSystem, Witness)> {
    let (cs, w) = synthesize(params, sponge, Message::Values(message))?;
    Ok((cs, w.expect("values supplied")))
}

enum Message<'a> {
    Shape(usize),
    Values(&'a [FieldElement]),
}

struct Synthesizer<'p> {
    params: &'p ArionParameters,
    num_vars: usize,
    constraints: Vec<Constraint>,
    assignment: Option<Vec<FieldElement>>,
}

impl<'p> Synthesizer<'p> {
    fn modulus(&self) -> &Arc<PrimeModulus> {
        self.params.modulus()
    }

    fn alloc(&mut self, value: Option<FieldElement>) -> Result<usize> {
        let var = self.num_vars;
        self.num_vars += 1;
        if let Some(assignment) = &mut self.assignment {
            assignment.push(value.ok_or_else(|| {
                Error::InternalInvariant("witness value missing during proving synthesis".into())
            })?);
        }
        Ok(var)
    }

    fn value_of(&self, lc: &LinearCombination) -> Result<Option<FieldElement>> {
        match &self.assignment {
            Some(assignment) => Ok(Some(lc.evaluate(assignment, self.modulus())?)),
            None => Ok(None),
        }
    }

    fn enforce(&mut self, a: LinearCombination, b: LinearCombination, c: LinearCombination) {
        self.constraints.push(Constraint { a, b, c });
    }

    /// Allocates `a * b` and enforces the product constraint.
    fn mul(&mut self, a: &LinearCombination, b: &LinearCombination) -> Result<LinearCombination> {
        let value = match (self.value_of(a)?, self.value_of(b)?) {
            (Some(va), Some(vb)) => Some(va.mul(&vb)?),
            _ => None,
        };
        let var = self.alloc(value)?;
        let out = LinearCombination::from_var(var, self.modulus());
        self.enforce(a.clone(), b.clone(), out.clone());
        Ok(out)
    }

    /// Verifies `z^d2 = target` along the chain, allocating z and the
    /// intermediate registers. Exactly `d2_inc` constraints.
    fn inverse_power_gadget(
        &mut self,
        target: &LinearCombination,
        chain: &ExponentChain,
    ) -> Result<LinearCombination> {
        let z_value = match self.value_of(target)? {
            Some(v) => Some(v.pow(self.params.e())),
            None => None,
        };
        let z_var = self.alloc(z_value)?;
        let z = LinearCombination::from_var(z_var, self.modulus());
        let mut regs = vec![z.clone()];
        let steps = chain.steps();
        for (k, step) in steps.iter().enumerate() {
            let (a, b) = match *step {
                ChainStep::Square(i) => (regs[i].clone(), regs[i].clone()),
                ChainStep::Mul(i, j) => (regs[i].clone(), regs[j].clone()),
            };
            if k + 1 == steps.len() {
                // Last product must land exactly on the branch input.
                self.enforce(a, b, target.clone());
            } else {
                regs.push(self.mul(&a, &b)?);
            }
        }
        Ok(z)
    }

    /// `x^d1` by its chain; every step allocates.
    fn power_gadget(&mut self, x: &LinearCombination, chain: &ExponentChain) -> Result<LinearCombination> {
        let mut regs = vec![x.clone()];
        for step in chain.steps() {
            let (a, b) = match *step {
                ChainStep::Square(i) => (regs[i].clone(), regs[i].clone()),
                ChainStep::Mul(i, j) => (regs[i].clone(), regs[j].clone()),
            };
            regs.push(self.mul(&a, &b)?);
        }
        Ok(regs.pop().unwrap())
    }

    fn gtds(&mut self, state: &[LinearCombination], round: usize) -> Result<Vec<LinearCombination>> {
        let n = self.params.branches();
        let d2_chain = ExponentChain::for_exponent(self.params.d2()).ok_or_else(|| {
            Error::Unsupported(format!("no multiplication chain for d2={}", self.params.d2()))
        })?;
        let d1_chain = ExponentChain::square_and_multiply(self.params.d1())?;

        let mut out = vec![LinearCombination::zero(); n];
        let z = self.inverse_power_gadget(&state[n - 1], d2_chain)?;
        out[n - 1] = z.clone();

        let mut sigma = state[n - 1].clone();
        sigma.add_lc(&z)?;
        for i in (0..n - 1).rev() {
            let xi_pow = self.power_gadget(&state[i], &d1_chain)?;
            let q = self.mul(&sigma, &sigma)?;
            // g = q + alpha1*sigma + alpha2, h = q + beta*sigma: one shared squaring.
            let mut g = q.clone();
            g.add_scaled(&sigma, self.params.alpha1(round, i))?;
            g.add_lc(&LinearCombination::constant(self.params.alpha2(round, i).clone()))?;
            let mut h = q;
            h.add_scaled(&sigma, self.params.beta(round, i))?;
            let m = self.mul(&xi_pow, &g)?;
            let mut f = m;
            f.add_lc(&h)?;
            out[i] = f;
            if i > 0 {
                sigma.add_lc(&state[i])?;
                sigma.add_lc(&out[i])?;
            }
        }
        Ok(out)
    }

    /// The mixing layer is free: it folds into the linear combinations.
    fn affine(&self, state: &[LinearCombination], round: Option<usize>) -> Result<Vec<LinearCombination>> {
        let n = self.params.branches();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut lc = LinearCombination::zero();
            for (j, s) in state.iter().enumerate() {
                let coeff = self.modulus().element_from_u64(circulant_entry(n, i, j));
                lc.add_scaled(s, &coeff)?;
            }
            if let Some(r) = round {
                lc.add_lc(&LinearCombination::constant(self.params.round_constants(r)[i].clone()))?;
            }
            out.push(lc);
        }
        Ok(out)
    }

    fn permutation(&mut self, state: &[LinearCombination]) -> Result<Vec<LinearCombination>> {
        let mut s = self.affine(state, None)?;
        for round in 0..self.params.rounds() {
            s = self.gtds(&s, round)?;
            s = self.affine(&s, Some(round))?;
        }
        Ok(s)
    }
}

fn synthesize(
    params: &ArionParameters,
    sponge: &SpongeParameters,
    message: Message,
) -> Result<(ConstraintSystem, Option<Witness>)> {
    if sponge.rate + sponge.capacity != params.branches() {
        return Err(Error::InvalidParameter("sponge shape does not match the permutation width".into()));
    }
    let modulus = params.modulus().clone();
    let (message_len, values) = match message {
        Message::Shape(len) => (len, None),
        Message::Values(v) => (v.len(), Some(v)),
    };
    // Padding shape and length tag depend only on the message length.
    let shape_probe = vec![modulus.zero(); message_len];
    let (padded_shape, length_tag) = pad(&shape_probe, sponge.rate, params)?;

    let mut synth = Synthesizer {
        params,
        num_vars: 1,
        constraints: Vec::new(),
        assignment: values.is_some().then(|| vec![modulus.one()]),
    };

    // Message elements are the public inputs; padding zeros are constants.
    let mut public_inputs = Vec::with_capacity(message_len);
    let mut message_lcs = Vec::with_capacity(padded_shape.len());
    for i in 0..message_len {
        let var = synth.alloc(values.map(|v| v[i].clone()))?;
        public_inputs.push(var);
        message_lcs.push(LinearCombination::from_var(var, &modulus));
    }
    for _ in message_len..padded_shape.len() {
        message_lcs.push(LinearCombination::zero());
    }

    // Initial state: zero rate, IV capacity, with the length-tag override.
    let mut state: Vec<LinearCombination> = Vec::with_capacity(params.branches());
    for _ in 0..sponge.rate {
        state.push(LinearCombination::zero());
    }
    for (slot, iv) in sponge.iv.iter().enumerate() {
        let value = match (&length_tag, slot) {
            (Some(tag), 0) => tag.clone(),
            _ => iv.clone(),
        };
        state.push(LinearCombination::constant(value));
    }

    for block in message_lcs.chunks(sponge.rate) {
        for (slot, m) in state.iter_mut().zip(block) {
            slot.add_lc(m)?;
        }
        state = synth.permutation(&state)?;
    }
    let output = state[0].clone();

    let witness = synth.assignment.map(|assignment| Witness { assignment });
    let cs = ConstraintSystem {
        modulus,
        num_vars: synth.num_vars,
        constraints: synth.constraints,
        public_inputs,
        output,
        params_id: params.id(),
    };
    Ok((cs, witness))
}

// Serialization -------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct WitnessFile {
    format: String,
    assignment: Vec<String>,
}

type TermsFile = Vec<(usize, String)>;

#[derive(Serialize, Deserialize)]
struct ConstraintFile {
    a: TermsFile,
    b: TermsFile,
    c: TermsFile,
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    format: String,
    prime: String,
    params_id: String,
    num_vars: usize,
    public_inputs: Vec<usize>,
    output: TermsFile,
    constraints: Vec<ConstraintFile>,
}

impl SystemFile {
    fn from_system(cs: &ConstraintSystem) -> Self {
        let dump = |lc: &LinearCombination| -> TermsFile {
            lc.terms().map(|(v, c)| (v, c.to_hex())).collect()
        };
        SystemFile {
            format: "arion-r1cs-v1".into(),
            prime: cs.modulus.value().to_str_radix(16),
            params_id: cs.params_id.clone(),
            num_vars: cs.num_vars,
            public_inputs: cs.public_inputs.clone(),
            output: dump(&cs.output),
            constraints: cs
                .constraints
                .iter()
                .map(|c| ConstraintFile { a: dump(&c.a), b: dump(&c.b), c: dump(&c.c) })
                .collect(),
        }
    }

    fn into_system(self) -> Result<ConstraintSystem> {
        if self.format != "arion-r1cs-v1" {
            return Err(Error::Encoding(format!("unknown r1cs format {}", self.format)));
        }
        let modulus = PrimeModulus::from_hex(&self.prime)?;
        let parse = |terms: &TermsFile| -> Result<LinearCombination> {
            let mut lc = LinearCombination::zero();
            for (var, coeff) in terms {
                lc.add_term(*var, &FieldElement::from_hex(coeff, &modulus)?)?;
            }
            Ok(lc)
        };
        Ok(ConstraintSystem {
            num_vars: self.num_vars,
            public_inputs: self.public_inputs.clone(),
            output: parse(&self.output)?,
            constraints: self
                .constraints
                .iter()
                .map(|c| Ok(Constraint { a: parse(&c.a)?, b: parse(&c.b)?, c: parse(&c.c)? }))
                .collect::<Result<Vec<_>>>()?,
            params_id: self.params_id,
            modulus,
        })
    }
}
