//! The truncated McKay quiver with commutativity relations.
//!
//! Start from vertices `Z/nZ` with one arrow `x_j: i -> i + a_j` per vertex
//! and letter, drop every arrow that wraps around (its target, taken in
//! `0..n`, is smaller than its source), then drop vertex `0`. What remains
//! lives on vertices `1..=n-1` and every arrow strictly increases the index.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::params::QuotientParams;

/// An arrow `x_letter: source -> target`. Letters are 1-based weight indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub letter: usize,
}

/// Commutation square `x_second x_first = x_first x_second` starting at
/// `vertex`, stored with `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub vertex: usize,
    pub letters: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Builds the quiver by literally carrying out the three construction steps
/// on the cyclic quiver.
pub fn build_quiver(params: &QuotientParams) -> Quiver {
    let n = params.n();
    let weights = params.weights();

    // (s1) full cyclic quiver, letters are 1-based
    let cyclic: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| weights.iter().enumerate().map(move |(j, &a)| (i, (i + a) % n, j + 1)))
        .collect();
    let mut squares = Vec::new();
    for i in 0..n {
        for j in 1..=weights.len() {
            for jj in (j + 1)..=weights.len() {
                squares.push((i, j, jj));
            }
        }
    }

    // (s2) drop wrap-around arrows, (s3) drop vertex 0
    let survives = |&(src, dst, _): &(usize, usize, usize)| src < dst && src != 0;
    let mut arrows: Vec<Arrow> = cyclic
        .iter()
        .filter(|e| survives(e))
        .map(|&(source, target, letter)| Arrow { source, target, letter })
        .collect();
    arrows.sort();

    let has_arrow = |src: usize, letter: usize| -> Option<usize> {
        let dst = (src + weights[letter - 1]) % n;
        survives(&(src, dst, letter)).then_some(dst)
    };
    // a square survives when all four of its arrows do
    let mut relations: Vec<Relation> = squares
        .into_iter()
        .filter(|&(i, j, jj)| {
            let left = has_arrow(i, j).and_then(|mid| has_arrow(mid, jj));
            let right = has_arrow(i, jj).and_then(|mid| has_arrow(mid, j));
            left.is_some() && right.is_some()
        })
        .map(|(vertex, j, jj)| Relation { vertex, letters: (j, jj) })
        .collect();
    relations.sort();

    Quiver { vertex_count: n - 1, arrows, relations }
}

impl Quiver {
    /// Arrows leaving `vertex`, in letter order.
    pub fn arrows_from(&self, vertex: usize) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.source == vertex)
    }

    pub fn has_relation(&self, vertex: usize, first: usize, second: usize) -> bool {
        let letters = if first < second { (first, second) } else { (second, first) };
        self.relations.binary_search(&Relation { vertex, letters }).is_ok()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n    rankdir=LR;\n");
        for v in 1..=self.vertex_count {
            writeln!(out, "    {v} [label=\"{v}\"];").unwrap();
        }
        for a in &self.arrows {
            writeln!(out, "    {} -> {} [label=\"x{}\"];", a.source, a.target, a.letter).unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("quiver serializes")
    }
}

pub fn export_quiver(quiver: &Quiver, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => quiver.to_dot(),
        ExportFormat::Json => quiver.to_json(),
    }
}
