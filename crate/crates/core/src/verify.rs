//! Comparison of printed matrices against the computed pipeline.
//!
//! Disagreement is a result, not an error: the report carries both sides,
//! every differing entry and the determinant facts that explain it.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::family::family_matrix_closed_form;
use crate::ktheory::{
    low_dim_params, pipeline_matrix, printed_low_dim_matrix, KTheoryError, PRINTED_LOW_DIM_DETERMINANT,
};
use crate::linalg::{determinant, is_perfect_square, pfaffian, IntMatrix};
use crate::params::{validate_params, QuotientParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fixture", rename_all = "kebab-case")]
pub enum PaperFixture {
    LowDimExample,
    Family { d: usize },
}

impl fmt::Display for PaperFixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PaperFixture::LowDimExample => write!(f, "low-dim-example"),
            PaperFixture::Family { d } => write!(f, "family d={d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDiff {
    pub row: usize,
    pub col: usize,
    #[serde(with = "crate::bigint_serde")]
    pub printed: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub computed: BigInt,
}

/// Which determinant identity the pipeline matrix must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DeterminantIdentity {
    /// Odd `d`: `det M = det(C - C^T)`, and for even size this is `Pf^2`.
    Skew {
        #[serde(with = "crate::bigint_serde")]
        skew_determinant: BigInt,
        #[serde(with = "crate::bigint_serde::option")]
        pfaffian: Option<BigInt>,
        holds: bool,
    },
    /// Even `d`: `|det M| = |det(C + C^T)|`.
    Symmetric {
        #[serde(with = "crate::bigint_serde")]
        symmetric_determinant: BigInt,
        holds: bool,
    },
}

impl DeterminantIdentity {
    pub fn holds(&self) -> bool {
        match self {
            DeterminantIdentity::Skew { holds, .. } | DeterminantIdentity::Symmetric { holds, .. } => *holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub fixture: PaperFixture,
    pub params: QuotientParams,
    /// The printed matrix (fixture) or the printed closed form (family).
    pub printed_matrix: IntMatrix,
    pub pipeline_matrix: IntMatrix,
    pub entries_agree: bool,
    pub entry_diffs: Vec<EntryDiff>,
    /// Determinant stated in print, when one is stated.
    #[serde(with = "crate::bigint_serde::option")]
    pub printed_determinant_claim: Option<BigInt>,
    #[serde(with = "crate::bigint_serde")]
    pub printed_matrix_determinant: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub pipeline_determinant: BigInt,
    pub pipeline_determinant_is_perfect_square: bool,
    pub determinant_identity: DeterminantIdentity,
    pub agreement: bool,
}

/// Determinant identity of `M` against the Cartan matrix it came from.
pub fn determinant_identity(cartan: &IntMatrix, m: &IntMatrix, d: usize) -> DeterminantIdentity {
    let det_m = determinant(m).expect("square");
    if d % 2 == 1 {
        let skew = cartan - &cartan.transpose();
        let skew_determinant = determinant(&skew).expect("square");
        let pfaffian = (skew.rows() % 2 == 0).then(|| pfaffian(&skew).expect("skew-symmetric, even size"));
        let holds = det_m == skew_determinant
            && match &pfaffian {
                Some(pf) => pf * pf == skew_determinant,
                None => skew_determinant == BigInt::from(0),
            };
        DeterminantIdentity::Skew { skew_determinant, pfaffian, holds }
    } else {
        let symmetric_determinant = determinant(&(cartan + &cartan.transpose())).expect("square");
        let holds = det_m.abs() == symmetric_determinant.abs();
        DeterminantIdentity::Symmetric { symmetric_determinant, holds }
    }
}

fn compare(
    fixture: PaperFixture,
    params: QuotientParams,
    printed: IntMatrix,
    claim: Option<BigInt>,
) -> VerificationReport {
    let (cartan, pipeline) = pipeline_matrix(&params);
    let mut entry_diffs = Vec::new();
    for i in 0..printed.rows() {
        for j in 0..printed.cols() {
            if printed[(i, j)] != pipeline[(i, j)] {
                entry_diffs.push(EntryDiff {
                    row: i + 1,
                    col: j + 1,
                    printed: printed[(i, j)].clone(),
                    computed: pipeline[(i, j)].clone(),
                });
            }
        }
    }
    let printed_matrix_determinant = determinant(&printed).expect("square");
    let pipeline_determinant = determinant(&pipeline).expect("square");
    let identity = determinant_identity(cartan.matrix(), &pipeline, params.d());
    let entries_agree = entry_diffs.is_empty();
    let claim_agrees = claim.as_ref().map_or(true, |c| *c == pipeline_determinant);
    VerificationReport {
        fixture,
        params,
        pipeline_determinant_is_perfect_square: is_perfect_square(&pipeline_determinant),
        printed_matrix: printed,
        pipeline_matrix: pipeline,
        entries_agree,
        entry_diffs,
        printed_determinant_claim: claim,
        printed_matrix_determinant,
        pipeline_determinant,
        agreement: entries_agree && claim_agrees,
        determinant_identity: identity,
    }
}

pub fn verify_paper(fixture: PaperFixture) -> Result<VerificationReport, KTheoryError> {
    match fixture {
        PaperFixture::LowDimExample => Ok(compare(
            fixture,
            low_dim_params(),
            printed_low_dim_matrix(),
            Some(BigInt::from(PRINTED_LOW_DIM_DETERMINANT)),
        )),
        PaperFixture::Family { d } => {
            let printed = family_matrix_closed_form(d)?;
            let params = validate_params(d as i64, d as i64, &vec![1; d]).expect("unit family is valid");
            Ok(compare(fixture, params, printed, None))
        }
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        writeln!(out, "fixture:    {}", self.fixture).unwrap();
        writeln!(out, "parameters: {}", self.params).unwrap();
        writeln!(out, "printed M =").unwrap();
        for line in self.printed_matrix.to_string().lines() {
            writeln!(out, "  {line}").unwrap();
        }
        writeln!(out, "pipeline M =").unwrap();
        for line in self.pipeline_matrix.to_string().lines() {
            writeln!(out, "  {line}").unwrap();
        }
        if self.entries_agree {
            writeln!(out, "entries: agree").unwrap();
        } else {
            writeln!(out, "entries: {} differ", self.entry_diffs.len()).unwrap();
            for diff in &self.entry_diffs {
                writeln!(out, "  ({},{}): printed {} vs computed {}", diff.row, diff.col, diff.printed, diff.computed)
                    .unwrap();
            }
        }
        if let Some(claim) = &self.printed_determinant_claim {
            writeln!(out, "printed det claim:    {claim}").unwrap();
        }
        writeln!(out, "det of printed M:     {}", self.printed_matrix_determinant).unwrap();
        writeln!(
            out,
            "det of pipeline M:    {} ({})",
            self.pipeline_determinant,
            if self.pipeline_determinant_is_perfect_square { "perfect square" } else { "not a perfect square" }
        )
        .unwrap();
        match &self.determinant_identity {
            DeterminantIdentity::Skew { skew_determinant, pfaffian, holds } => {
                write!(out, "det(C - C^T) = {skew_determinant}").unwrap();
                if let Some(pf) = pfaffian {
                    write!(out, ", Pf(C - C^T) = {pf}").unwrap();
                }
                writeln!(out, "; identity det M = det(C - C^T) {}", if *holds { "holds" } else { "FAILS" }).unwrap();
            }
            DeterminantIdentity::Symmetric { symmetric_determinant, holds } => {
                writeln!(
                    out,
                    "det(C + C^T) = {symmetric_determinant}; identity |det M| = |det(C + C^T)| {}",
                    if *holds { "holds" } else { "FAILS" }
                )
                .unwrap();
            }
        }
        writeln!(out, "verdict: {}", if self.agreement { "agreement" } else { "DISCREPANCY" }).unwrap();
        out
    }
}
