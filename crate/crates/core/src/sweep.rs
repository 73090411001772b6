//! Batch evaluation over grids of parameters and coefficient rings.
//!
//! Rows come out sorted by `(n, d, weights, l, nu)` regardless of how many
//! worker threads computed them.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{gcd_with_modulus, FiniteAbelianGroup};
use crate::ktheory::{corollary_analysis, source_matrix, Conclusion, KTheoryError, MatrixSource};
use crate::linalg::determinant;
use crate::params::{
    all_weight_tuples, sorted_weight_tuples, validate_params, validate_prime_power, ParamsError, PrimePower,
    QuotientParams,
};
use crate::snf::smith_normal_form;

pub const DEFAULT_MAX_CELLS: usize = 100_000;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep grid has {cells} cells, above the cap of {cap}")]
    RangeTooLarge { cells: usize, cap: usize },
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    KTheory(#[from] KTheoryError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightMode {
    /// Every valid ordered weight tuple.
    All,
    /// One nondecreasing tuple per weight multiset.
    Sorted,
    /// `d = n`, all weights 1.
    Ones,
    /// A single fixed weight tuple; `d` is its length.
    Explicit(Vec<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeChoice {
    Fixed(u64),
    /// Use `l = n` for each row.
    MatchN,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    /// `None` means every `d` in `2..=n`.
    pub d_values: Option<Vec<usize>>,
    pub mode: WeightMode,
    pub primes: Vec<PrimeChoice>,
    pub exponents: Vec<u32>,
    pub source: MatrixSource,
    pub max_cells: usize,
    pub jobs: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_values: Vec::new(),
            d_values: None,
            mode: WeightMode::Sorted,
            primes: Vec::new(),
            exponents: vec![1],
            source: MatrixSource::TheoremPipeline,
            max_cells: DEFAULT_MAX_CELLS,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: QuotientParams,
    pub coefficient: PrimePower,
    pub matrix_source: MatrixSource,
    #[serde(with = "crate::bigint_serde")]
    pub determinant: BigInt,
    #[serde(with = "crate::bigint_serde::vec")]
    pub divisors: Vec<BigInt>,
    pub even_group: FiniteAbelianGroup,
    pub odd_group: FiniteAbelianGroup,
    pub vanishing: bool,
    pub corollary: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTable {
    pub schema_version: u32,
    pub rows: Vec<SweepRow>,
}

fn parameter_grid(config: &SweepConfig) -> Result<Vec<QuotientParams>, SweepError> {
    let mut ns = config.n_values.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut grid = Vec::new();
    match &config.mode {
        WeightMode::Explicit(weights) => {
            for &n in &ns {
                grid.push(validate_params(n as i64, weights.len() as i64, weights)?);
            }
        }
        WeightMode::Ones => {
            for &n in &ns {
                grid.push(validate_params(n as i64, n as i64, &vec![1; n])?);
            }
        }
        mode => {
            for &n in &ns {
                let mut ds: Vec<usize> = match &config.d_values {
                    Some(ds) => ds.clone(),
                    None => (2..=n).collect(),
                };
                ds.sort_unstable();
                ds.dedup();
                for d in ds {
                    if *mode == WeightMode::All {
                        grid.extend(all_weight_tuples(n, d));
                    } else {
                        grid.extend(sorted_weight_tuples(n, d));
                    }
                }
            }
        }
    }
    Ok(grid)
}

fn coefficients_for(params: &QuotientParams, config: &SweepConfig) -> Result<Vec<PrimePower>, SweepError> {
    let mut out = Vec::new();
    for choice in &config.primes {
        let l = match choice {
            PrimeChoice::Fixed(l) => *l,
            PrimeChoice::MatchN => params.n() as u64,
        };
        for &nu in &config.exponents {
            out.push(validate_prime_power(l as i128, nu as i64)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn rows_for(params: &QuotientParams, coefficients: &[PrimePower], source: MatrixSource) -> Result<Vec<SweepRow>, SweepError> {
    if coefficients.is_empty() {
        return Ok(Vec::new());
    }
    let matrix = source_matrix(params, source)?;
    let snf = smith_normal_form(&matrix);
    let det = determinant(&matrix).expect("square matrix");
    let rows = coefficients
        .iter()
        .map(|coefficient| {
            let q = coefficient.q();
            let summands = || snf.divisors.iter().map(|d| gcd_with_modulus(d, q));
            let even_group = FiniteAbelianGroup::from_cyclic_orders(summands()).expect("positive");
            let odd_group = even_group.clone();
            let vanishing = even_group.is_trivial();
            let report = crate::ktheory::KTheoryReport {
                schema_version: crate::ktheory::SCHEMA_VERSION,
                params: params.clone(),
                coefficient: coefficient.clone(),
                matrix_source: source,
                matrix: matrix.clone(),
                determinant: det.clone(),
                divisors: snf.divisors.clone(),
                even_group: even_group.clone(),
                odd_group: odd_group.clone(),
                negative_degrees: FiniteAbelianGroup::trivial(),
                corollary: Default::default(),
                verification: None,
            };
            let corollary = corollary_analysis(&report)
                .conclusions
                .iter()
                .map(|c| match c {
                    Conclusion::AtLeastOneNonzero { parity, .. } => format!("nonzero-{parity}"),
                    Conclusion::UniquelyDivisible { .. } => "uniquely-divisible".to_string(),
                })
                .collect();
            SweepRow {
                params: params.clone(),
                coefficient: coefficient.clone(),
                matrix_source: source,
                determinant: det.clone(),
                divisors: snf.divisors.clone(),
                even_group,
                odd_group,
                vanishing,
                corollary,
            }
        })
        .collect();
    Ok(rows)
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepTable, SweepError> {
    let grid = parameter_grid(config)?;
    let mut cells = Vec::with_capacity(grid.len());
    let mut total = 0usize;
    for params in grid {
        let coefficients = coefficients_for(&params, config)?;
        total += coefficients.len();
        if total > config.max_cells {
            return Err(SweepError::RangeTooLarge { cells: total, cap: config.max_cells });
        }
        cells.push((params, coefficients));
    }

    let compute = || -> Result<Vec<SweepRow>, SweepError> {
        let per_params: Vec<Vec<SweepRow>> = cells
            .par_iter()
            .map(|(params, coefficients)| rows_for(params, coefficients, config.source))
            .collect::<Result<_, _>>()?;
        Ok(per_params.into_iter().flatten().collect())
    };
    let rows = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| SweepError::Pool(e.to_string()))?
            .install(compute)?,
        None => compute()?,
    };
    Ok(SweepTable { schema_version: crate::ktheory::SCHEMA_VERSION, rows })
}

impl SweepTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "n", "d", "weights", "l", "nu", "q", "source", "det", "divisors", "even_group", "odd_group",
                "vanishing", "corollary",
            ])
            .expect("in-memory write");
        let join = |items: Vec<String>| items.join(";");
        for row in &self.rows {
            writer
                .write_record([
                    row.params.n().to_string(),
                    row.params.d().to_string(),
                    join(row.params.weights().iter().map(ToString::to_string).collect()),
                    row.coefficient.l().to_string(),
                    row.coefficient.nu().to_string(),
                    row.coefficient.q().to_string(),
                    row.matrix_source.to_string(),
                    row.determinant.to_string(),
                    join(row.divisors.iter().map(ToString::to_string).collect()),
                    row.even_group.to_string(),
                    row.odd_group.to_string(),
                    row.vanishing.to_string(),
                    join(row.corollary.clone()),
                ])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }
}
