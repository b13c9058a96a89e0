//! Fixed-arity Merkle tree over the sponge hash, with arity equal to the
//! sponge rate so every internal node absorbs its children as one block.
//! Leaf and internal hashing are domain-separated through distinct IVs
//! derived from the parameter seed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::params::{ArionParameters, SpongeParameters};
use crate::sponge::arion_hash_single;

const LEAF_IV_LABEL: &str = "iv/merkle-leaf";
const NODE_IV_LABEL: &str = "iv/merkle-node";

/// The two domain-separated sponges (leaf level, internal levels).
pub fn merkle_sponges(
    params: &ArionParameters,
    rate: usize,
) -> Result<(SpongeParameters, SpongeParameters)> {
    let capacity = params.branches() - rate;
    let base = SpongeParameters::new(params, rate, capacity)?;
    let leaf_iv = params.derive_elements(LEAF_IV_LABEL, capacity)?;
    let node_iv = params.derive_elements(NODE_IV_LABEL, capacity)?;
    Ok((base.clone().with_iv(leaf_iv)?, base.with_iv(node_iv)?))
}

/// An authentication path: for every level, the digests of the other
/// `arity - 1` group members in positional order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MerklePath {
    pub leaf_index: usize,
    pub siblings: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct MerkleTree {
    arity: usize,
    /// `levels[0]` holds the leaf digests, the last level the root alone.
    levels: Vec<Vec<FieldElement>>,
}

impl MerkleTree {
    /// Builds the tree over the leaves; the leaf count must be a power of
    /// the arity (= rate).
    pub fn build(leaves: &[FieldElement], params: &ArionParameters, rate: usize) -> Result<Self> {
        if leaves.is_empty() {
            return Err(Error::InvalidParameter("a tree needs at least one leaf".into()));
        }
        let arity = rate;
        if leaves.len() > 1 {
            if arity < 2 {
                return Err(Error::InvalidParameter("multi-leaf trees need rate >= 2".into()));
            }
            let mut c = leaves.len();
            while c.is_multiple_of(arity) {
                c /= arity;
            }
            if c != 1 {
                return Err(Error::InvalidParameter(format!(
                    "leaf count {} is not a power of the arity {}",
                    leaves.len(),
                    arity
                )));
            }
        }
        let (leaf_sponge, node_sponge) = merkle_sponges(params, rate)?;
        let mut levels = Vec::new();
        let level0 = leaves
            .par_iter()
            .map(|leaf| arion_hash_single(std::slice::from_ref(leaf), params, &leaf_sponge))
            .collect::<Result<Vec<_>>>()?;
        levels.push(level0);
        while levels.last().unwrap().len() > 1 {
            let prev = levels.last().unwrap();
            let next = prev
                .par_chunks(arity)
                .map(|group| arion_hash_single(group, params, &node_sponge))
                .collect::<Result<Vec<_>>>()?;
            levels.push(next);
        }
        Ok(MerkleTree { arity, levels })
    }

    pub fn root(&self) -> &FieldElement {
        &self.levels.last().unwrap()[0]
    }

    pub fn leaf_digests(&self) -> &[FieldElement] {
        &self.levels[0]
    }

    /// The copath for the given leaf.
    pub fn path(&self, leaf_index: usize) -> Result<MerklePath> {
        if leaf_index >= self.levels[0].len() {
            return Err(Error::InvalidParameter(format!("no leaf at index {leaf_index}")));
        }
        let mut siblings = Vec::new();
        let mut idx = leaf_index;
        for level in &self.levels[..self.levels.len() - 1] {
            let group = idx / self.arity * self.arity;
            let sibs: Vec<String> = (group..group + self.arity)
                .filter(|&j| j != idx)
                .map(|j| level[j].to_hex())
                .collect();
            siblings.push(sibs);
            idx /= self.arity;
        }
        Ok(MerklePath { leaf_index, siblings })
    }
}

/// Recomputes the root from a leaf value and its copath and compares.
pub fn merkle_verify(
    leaf: &FieldElement,
    path: &MerklePath,
    root: &FieldElement,
    params: &ArionParameters,
    rate: usize,
) -> Result<bool> {
    let (leaf_sponge, node_sponge) = merkle_sponges(params, rate)?;
    let mut current = arion_hash_single(std::slice::from_ref(leaf), params, &leaf_sponge)?;
    let mut idx = path.leaf_index;
    for sibs in &path.siblings {
        if sibs.len() != rate - 1 {
            return Ok(false);
        }
        let pos = idx % rate;
        let mut group = Vec::with_capacity(rate);
        let mut sib_iter = sibs.iter();
        for j in 0..rate {
            if j == pos {
                group.push(current.clone());
            } else {
                let s = sib_iter.next().expect("sibling count checked");
                group.push(FieldElement::from_hex(s, params.modulus())?);
            }
        }
        current = arion_hash_single(&group, params, &node_sponge)?;
        idx /= rate;
    }
    Ok(&current == root)
}
