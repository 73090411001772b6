//! Algebraic K-theory with `Z/l^nu` coefficients of cyclic quotient
//! singularities, computed exactly.
//!
//! The pipeline runs from the weights `(n; a_1, ..., a_d)` to the truncated
//! McKay quiver, its Cartan matrix `C` of path counts modulo commutativity,
//! the integer matrix `M = (-1)^(d-1) C (C^-1)^T - Id`, and finally the
//! kernel and cokernel of `M` on `(Z/l^nu)^(n-1)` through a certified Smith
//! normal form.

pub mod bigint_serde;
pub mod cartan;
pub mod cli;
pub mod family;
pub mod group;
pub mod ktheory;
pub mod linalg;
pub mod params;
pub mod quiver;
pub mod snf;
pub mod sweep;
pub mod verify;

pub use cartan::{cartan_matrix, path_counts_bruteforce, path_counts_gf, CartanMatrix, PathCountVector};
pub use family::{family_matrix_closed_form, multiset_number};
pub use group::FiniteAbelianGroup;
pub use ktheory::{compute_ktheory, corollary_analysis, mod_q_kernel_cokernel, KTheoryReport, MatrixSource};
pub use linalg::{determinant, pfaffian, theorem_matrix, unipotent_inverse, IntMatrix};
pub use params::{validate_params, validate_prime_power, PrimePower, QuotientParams};
pub use quiver::{build_quiver, export_quiver, Quiver};
pub use snf::{smith_normal_form, SnfDecomposition};
pub use verify::{verify_paper, PaperFixture, VerificationReport};
