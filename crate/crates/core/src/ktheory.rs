//! K-theory with `Z/l^nu` coefficients of the singularity category: the
//! cokernel of `M` in even degrees, its kernel in odd degrees, and zero in
//! negative degrees.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{cartan_matrix, path_counts_gf, CartanMatrix};
use crate::family::family_matrix_closed_form;
use crate::group::{gcd_with_modulus, FiniteAbelianGroup};
use crate::linalg::{determinant, theorem_matrix, IntMatrix};
use crate::params::{PrimePower, QuotientParams};
use crate::snf::smith_normal_form;
use crate::verify::{verify_paper, PaperFixture, VerificationReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KTheoryError {
    #[error("matrix source {matrix_source} is unavailable for {params}: {reason}")]
    SourceUnavailable { matrix_source: MatrixSource, params: String, reason: &'static str },
    #[error("closed-form family needs d >= 3, got d = {0}")]
    DimensionTooSmall(usize),
}

/// Where the matrix `M` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixSource {
    /// Quiver, path counts, Cartan matrix, then `(-1)^(d-1) C C^-T - Id`.
    TheoremPipeline,
    /// Printed closed form; only for `n = d` with unit weights.
    ClosedFormFamily,
    /// The printed 4x4 matrix for `n = 5, d = 3, a = (1, 2, 2)`, as printed.
    PaperFixture,
}

impl fmt::Display for MatrixSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixSource::TheoremPipeline => "theorem-pipeline",
            MatrixSource::ClosedFormFamily => "closed-form-family",
            MatrixSource::PaperFixture => "paper-fixture",
        })
    }
}

/// The low-dimensional example matrix exactly as printed.
pub const PRINTED_LOW_DIM_MATRIX: [[i64; 4]; 4] =
    [[0, -1, -3, -3], [1, -1, -4, -6], [3, -2, -10, -13], [3, 0, -11, -19]];

/// Determinant claimed alongside the printed matrix.
pub const PRINTED_LOW_DIM_DETERMINANT: i64 = 26;

/// `(n, weights)` the printed matrix belongs to.
pub const LOW_DIM_PARAMS: (i64, [i64; 3]) = (5, [1, 2, 2]);

pub fn printed_low_dim_matrix() -> IntMatrix {
    IntMatrix::from_rows(&PRINTED_LOW_DIM_MATRIX.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

pub fn low_dim_params() -> QuotientParams {
    let (n, w) = LOW_DIM_PARAMS;
    crate::params::validate_params(n, w.len() as i64, &w).expect("fixture parameters are valid")
}

/// Kernel and cokernel of `m` acting on `(Z/q)^k`, read off the integral
/// Smith form: both are `sum_i Z/gcd(d_i, q)`.
pub fn mod_q_kernel_cokernel(m: &IntMatrix, q: &BigInt) -> (FiniteAbelianGroup, FiniteAbelianGroup) {
    assert!(m.is_square(), "kernel/cokernel over Z/q needs a square matrix");
    assert!(*q >= BigInt::from(2), "modulus must be at least 2");
    let snf = smith_normal_form(m);
    let group = || {
        FiniteAbelianGroup::from_cyclic_orders(snf.divisors.iter().map(|d| gcd_with_modulus(d, q)))
            .expect("gcd with q is positive")
    };
    let kernel = group();
    let cokernel = group();
    (kernel, cokernel)
}

/// Builds `M` from the requested source.
pub fn source_matrix(params: &QuotientParams, source: MatrixSource) -> Result<IntMatrix, KTheoryError> {
    match source {
        MatrixSource::TheoremPipeline => Ok(pipeline_matrix(params).1),
        MatrixSource::ClosedFormFamily => {
            if !params.is_unit_family() {
                return Err(KTheoryError::SourceUnavailable {
                    matrix_source: source,
                    params: params.to_string(),
                    reason: "closed form covers only n = d with all weights 1",
                });
            }
            family_matrix_closed_form(params.d())
        }
        MatrixSource::PaperFixture => {
            if *params != low_dim_params() {
                return Err(KTheoryError::SourceUnavailable {
                    matrix_source: source,
                    params: params.to_string(),
                    reason: "the printed matrix belongs to n = 5, d = 3, weights 1,2,2",
                });
            }
            Ok(printed_low_dim_matrix())
        }
    }
}

/// Cartan matrix and `M` along the full pipeline.
pub fn pipeline_matrix(params: &QuotientParams) -> (CartanMatrix, IntMatrix) {
    let cartan = cartan_matrix(&path_counts_gf(params));
    let m = theorem_matrix(&cartan, params.d());
    (cartan, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// One implication drawn from the computed groups via the universal
/// coefficient sequence. Statements concern integral groups, which are
/// never computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Conclusion {
    /// Some `IK_j(-; Z/l^nu)` with `j` of this parity is nonzero.
    AtLeastOneNonzero { parity: Parity, witness_degree: u32, statement: String },
    /// Every `IK_i(-; Z/l^nu)`, `i >= 0`, vanishes.
    UniquelyDivisible { l: u64, nu: u32, statement: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorollaryNotes {
    pub conclusions: Vec<Conclusion>,
}

impl CorollaryNotes {
    pub fn fires_nonzero(&self, parity: Parity) -> bool {
        self.conclusions
            .iter()
            .any(|c| matches!(c, Conclusion::AtLeastOneNonzero { parity: p, .. } if *p == parity))
    }

    pub fn fires_divisible(&self) -> bool {
        self.conclusions.iter().any(|c| matches!(c, Conclusion::UniquelyDivisible { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTheoryReport {
    pub schema_version: u32,
    pub params: QuotientParams,
    pub coefficient: PrimePower,
    pub matrix_source: MatrixSource,
    pub matrix: IntMatrix,
    #[serde(with = "crate::bigint_serde")]
    pub determinant: BigInt,
    #[serde(with = "crate::bigint_serde::vec")]
    pub divisors: Vec<BigInt>,
    /// `IK_i` for even `i >= 0`: the cokernel.
    pub even_group: FiniteAbelianGroup,
    /// `IK_i` for odd `i >= 0`: the kernel.
    pub odd_group: FiniteAbelianGroup,
    /// `IK_i` for `i < 0`.
    pub negative_degrees: FiniteAbelianGroup,
    pub corollary: CorollaryNotes,
    pub verification: Option<VerificationReport>,
}

impl KTheoryReport {
    /// Group in degree `i`.
    pub fn group_in_degree(&self, i: i64) -> &FiniteAbelianGroup {
        if i < 0 {
            &self.negative_degrees
        } else if i % 2 == 0 {
            &self.even_group
        } else {
            &self.odd_group
        }
    }

    pub fn all_vanish(&self) -> bool {
        self.even_group.is_trivial() && self.odd_group.is_trivial()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_pretty(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        writeln!(out, "parameters:   {}", self.params).unwrap();
        writeln!(out, "coefficients: {}", self.coefficient).unwrap();
        writeln!(out, "source:       {}", self.matrix_source).unwrap();
        writeln!(out, "M =").unwrap();
        for line in self.matrix.to_string().lines() {
            writeln!(out, "  {line}").unwrap();
        }
        writeln!(out, "det M = {}", self.determinant).unwrap();
        let divs: Vec<String> = self.divisors.iter().map(ToString::to_string).collect();
        writeln!(out, "elementary divisors: {}", divs.join(", ")).unwrap();
        writeln!(out, "IK_i(-; {}) for i >= 0 even: {}", self.coefficient, self.even_group).unwrap();
        writeln!(out, "IK_i(-; {}) for i >= 0 odd:  {}", self.coefficient, self.odd_group).unwrap();
        writeln!(out, "IK_i(-; {}) for i < 0:       {}", self.coefficient, self.negative_degrees).unwrap();
        for c in &self.corollary.conclusions {
            let statement = match c {
                Conclusion::AtLeastOneNonzero { statement, .. } => statement,
                Conclusion::UniquelyDivisible { statement, .. } => statement,
            };
            writeln!(out, "conclusion: {statement}").unwrap();
        }
        out
    }
}

/// Runs the requested source through the kernel/cokernel computation.
pub fn compute_ktheory(
    params: &QuotientParams,
    coefficient: &PrimePower,
    source: MatrixSource,
) -> Result<KTheoryReport, KTheoryError> {
    let matrix = source_matrix(params, source)?;
    let mut report = report_for_matrix(params.clone(), coefficient.clone(), source, matrix);
    // printed sources always travel with their comparison against the pipeline
    report.verification = match source {
        MatrixSource::TheoremPipeline => None,
        MatrixSource::ClosedFormFamily => Some(verify_paper(PaperFixture::Family { d: params.d() })?),
        MatrixSource::PaperFixture => Some(verify_paper(PaperFixture::LowDimExample)?),
    };
    Ok(report)
}

pub(crate) fn report_for_matrix(
    params: QuotientParams,
    coefficient: PrimePower,
    source: MatrixSource,
    matrix: IntMatrix,
) -> KTheoryReport {
    let snf = smith_normal_form(&matrix);
    let q = coefficient.q();
    let summands = || snf.divisors.iter().map(|d| gcd_with_modulus(d, q));
    let odd_group = FiniteAbelianGroup::from_cyclic_orders(summands()).expect("positive orders");
    let even_group = FiniteAbelianGroup::from_cyclic_orders(summands()).expect("positive orders");
    let determinant = determinant(&matrix).expect("square matrix");
    let mut report = KTheoryReport {
        schema_version: SCHEMA_VERSION,
        params,
        coefficient,
        matrix_source: source,
        matrix,
        determinant,
        divisors: snf.divisors,
        even_group,
        odd_group,
        negative_degrees: FiniteAbelianGroup::trivial(),
        corollary: CorollaryNotes::default(),
        verification: None,
    };
    report.corollary = corollary_analysis(&report);
    report
}

/// The two implications available from the mod-`l^nu` groups alone.
pub fn corollary_analysis(report: &KTheoryReport) -> CorollaryNotes {
    let l = report.coefficient.l();
    let nu = report.coefficient.nu();
    let modulus = if nu == 1 { l.to_string() } else { format!("{l}^{nu}") };
    let mut conclusions = Vec::new();
    for (parity, group, witness_degree) in
        [(Parity::Even, &report.even_group, 0), (Parity::Odd, &report.odd_group, 1)]
    {
        if !group.is_trivial() {
            conclusions.push(Conclusion::AtLeastOneNonzero {
                parity,
                witness_degree,
                statement: format!(
                    "IK_{witness_degree}(-; Z/{modulus}) = {group} is non-zero, so for every {parity} i >= 0 at least one of the integral groups IK_i, IK_(i-1) is non-zero"
                ),
            });
        }
    }
    if report.all_vanish() {
        conclusions.push(Conclusion::UniquelyDivisible {
            l,
            nu,
            statement: format!(
                "IK_i(-; Z/{modulus}) = 0 for every i >= 0, so the integral groups IK_i, i >= 0, are uniquely {modulus}-divisible"
            ),
        });
    }
    CorollaryNotes { conclusions }
}

/// Both groups vanish exactly when `det M` is a unit modulo `q`.
pub fn vanishing_by_determinant(det: &BigInt, q: &BigInt) -> bool {
    det.gcd(q).is_one()
}
