//! Finite abelian groups in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// `Z/c_1 + ... + Z/c_k` with `c_1 | c_2 | ... | c_k` and every `c_i >= 2`.
/// The empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    #[serde(with = "crate::bigint_serde::vec")]
    invariant_factors: Vec<BigInt>,
    #[serde(with = "crate::bigint_serde")]
    order: BigInt,
}

impl From<FiniteAbelianGroup> for GroupRepr {
    fn from(g: FiniteAbelianGroup) -> Self {
        let order = g.order();
        GroupRepr { invariant_factors: g.invariant_factors, order }
    }
}

impl TryFrom<GroupRepr> for FiniteAbelianGroup {
    type Error = String;

    fn try_from(repr: GroupRepr) -> Result<Self, Self::Error> {
        let g = FiniteAbelianGroup::from_cyclic_orders(repr.invariant_factors.clone())?;
        if g.invariant_factors != repr.invariant_factors {
            return Err("invariant factors are not in canonical form".into());
        }
        if g.order() != repr.order {
            return Err(format!("stated order {} does not match {}", repr.order, g.order()));
        }
        Ok(g)
    }
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Canonicalizes an arbitrary direct sum of cyclic groups. Orders of 1
    /// are dropped; orders of 0 or below are rejected.
    pub fn from_cyclic_orders(orders: impl IntoIterator<Item = BigInt>) -> Result<Self, String> {
        let mut factors: Vec<BigInt> = Vec::new();
        for c in orders {
            if !c.is_positive() {
                return Err(format!("cyclic order {c} is not positive"));
            }
            if !c.is_one() {
                factors.push(c);
            }
        }
        // pairwise (gcd, lcm) until the list is a divisibility chain
        let len = factors.len();
        for i in 0..len {
            for j in (i + 1)..len {
                let g = factors[i].gcd(&factors[j]);
                let l = factors[i].lcm(&factors[j]);
                factors[i] = g;
                factors[j] = l;
            }
        }
        factors.retain(|c| !c.is_one());
        Ok(FiniteAbelianGroup { invariant_factors: factors })
    }

    /// `(Z/c)^count`.
    pub fn power(c: &BigInt, count: usize) -> Self {
        Self::from_cyclic_orders(std::iter::repeat(c.clone()).take(count)).expect("positive order")
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Number of elements killed by `e`.
    pub fn torsion_count(&self, e: &BigInt) -> BigInt {
        self.invariant_factors.iter().map(|c| c.gcd(e)).product()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|c| format!("Z/{c}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Kernel or cokernel summand `Z/gcd(divisor, q)`, with `gcd(0, q) = q`.
pub(crate) fn gcd_with_modulus(divisor: &BigInt, q: &BigInt) -> BigInt {
    if divisor.is_zero() {
        q.clone()
    } else {
        divisor.gcd(q)
    }
}
