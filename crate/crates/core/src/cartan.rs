//! Path counts of the truncated quiver modulo commutativity, and the
//! Cartan matrix built from them.
//!
//! Because the relations let any two letters commute, a path class from
//! `i` to `i + s` is the same thing as a multiset of letters whose weights
//! sum to `s`. Every reordering of such a multiset stays strictly between
//! its endpoints, so it never touches a removed vertex. The count therefore
//! depends only on the offset `s`, and the Cartan matrix is Toeplitz.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::params::QuotientParams;
use crate::quiver::Quiver;

pub const DEFAULT_PATH_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("path enumeration exceeded the cap of {cap} raw paths")]
    PathExplosion { cap: u64 },
    #[error("path count from vertex {from} at offset {offset} is {found}, but vertex 1 has {expected}")]
    NotHomogeneous { from: usize, offset: usize, found: u64, expected: u64 },
}

/// `counts[s]` is the number of path classes of total weight `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCountVector {
    #[serde(with = "crate::bigint_serde::vec")]
    counts: Vec<BigInt>,
}

impl PathCountVector {
    /// Panics unless `counts` starts with 1 (the empty path).
    pub fn new(counts: Vec<BigInt>) -> Self {
        assert!(counts.first().is_some_and(One::is_one), "P(0) must be 1");
        PathCountVector { counts }
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Lower-triangular Toeplitz matrix with entry `(i, j) = P(i - j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    entries: IntMatrix,
}

impl CartanMatrix {
    pub fn from_counts(counts: &PathCountVector) -> Self {
        cartan_matrix(counts)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }
}

/// Coefficients of `prod_j 1 / (1 - t^{a_j})` up to degree `n - 2`.
pub fn path_counts_gf(params: &QuotientParams) -> PathCountVector {
    let len = params.vertex_count();
    let mut coeffs = vec![BigInt::zero(); len];
    coeffs[0] = BigInt::one();
    // multiplying by 1/(1 - t^a) is a running sum with stride a
    for &a in params.weights() {
        for s in a..len {
            let prev = coeffs[s - a].clone();
            coeffs[s] += prev;
        }
    }
    PathCountVector::new(coeffs)
}

/// Raw paths leaving `start`, each reduced to its sorted letter multiset.
fn classes_from(
    quiver: &Quiver,
    start: usize,
    budget: &AtomicU64,
    cap: u64,
) -> Result<HashSet<(usize, Vec<usize>)>, CartanError> {
    let mut classes = HashSet::new();
    let mut stack = vec![(start, Vec::new())];
    while let Some((vertex, letters)) = stack.pop() {
        if budget.fetch_add(1, Ordering::Relaxed) >= cap {
            return Err(CartanError::PathExplosion { cap });
        }
        for arrow in quiver.arrows_from(vertex) {
            let mut next = letters.clone();
            next.push(arrow.letter);
            stack.push((arrow.target, next));
        }
        let mut key = letters;
        key.sort_unstable();
        classes.insert((vertex, key));
    }
    Ok(classes)
}

/// Counts path classes by explicit enumeration from every vertex.
///
/// Checks that the tally from each vertex agrees with the tally from
/// vertex 1 at every offset that fits, and returns the vertex-1 tally.
pub fn path_counts_bruteforce(quiver: &Quiver, cap: u64) -> Result<PathCountVector, CartanError> {
    let size = quiver.vertex_count;
    let budget = AtomicU64::new(0);
    let tallies: Vec<Vec<u64>> = (1..=size)
        .into_par_iter()
        .map(|start| {
            let classes = classes_from(quiver, start, &budget, cap)?;
            let mut tally = vec![0u64; size - start + 1];
            for (end, _) in classes {
                tally[end - start] += 1;
            }
            Ok(tally)
        })
        .collect::<Result<_, CartanError>>()?;

    let reference = &tallies[0];
    for (idx, tally) in tallies.iter().enumerate().skip(1) {
        for (offset, &found) in tally.iter().enumerate() {
            if found != reference[offset] {
                return Err(CartanError::NotHomogeneous {
                    from: idx + 1,
                    offset,
                    found,
                    expected: reference[offset],
                });
            }
        }
    }
    Ok(PathCountVector::new(reference.iter().map(|&c| BigInt::from(c)).collect()))
}

/// Counts path classes from vertex 1 without assuming letters commute:
/// two raw paths are identified only through explicit commutation squares
/// of the quiver. Exponential; meant for small instances.
pub fn path_classes_by_relations(quiver: &Quiver) -> BTreeMap<usize, usize> {
    let mut raw: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut stack = vec![(1usize, Vec::new())];
    while let Some((vertex, letters)) = stack.pop() {
        for arrow in quiver.arrows_from(vertex) {
            let mut next = letters.clone();
            next.push(arrow.letter);
            stack.push((arrow.target, next));
        }
        raw.push((vertex, letters));
    }
    raw.sort();
    let index: std::collections::HashMap<&(usize, Vec<usize>), usize> =
        raw.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut parent: Vec<usize> = (0..raw.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }

    let weight_of = |letter: usize| -> usize {
        let arrow = quiver.arrows.iter().find(|a| a.letter == letter).expect("letter occurs");
        arrow.target - arrow.source
    };
    for (i, (end, letters)) in raw.iter().enumerate() {
        let mut at = 1usize;
        for k in 0..letters.len().saturating_sub(1) {
            let (x, y) = (letters[k], letters[k + 1]);
            if x != y && quiver.has_relation(at, x, y) {
                let mut swapped = letters.clone();
                swapped.swap(k, k + 1);
                if let Some(&j) = index.get(&(*end, swapped)) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
            at += weight_of(x);
        }
    }

    let mut roots: HashSet<usize> = HashSet::new();
    let mut per_end: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..raw.len() {
        let r = find(&mut parent, i);
        if roots.insert(r) {
            *per_end.entry(raw[r].0).or_default() += 1;
        }
    }
    per_end
}

pub fn cartan_matrix(counts: &PathCountVector) -> CartanMatrix {
    let size = counts.len();
    let entries = IntMatrix::from_fn(size, size, |i, j| {
        if i >= j {
            counts.counts[i - j].clone()
        } else {
            BigInt::zero()
        }
    });
    CartanMatrix { entries }
}
