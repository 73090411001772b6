//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use cyclic_ktheory::params::all_weight_tuples;
use cyclic_ktheory::{FiniteAbelianGroup, IntMatrix, QuotientParams};
use num_bigint::BigInt;
use rand::Rng;

/// Every valid parameter set with `n <= max_n` and `d <= max_d`.
pub fn all_params(max_n: usize, max_d: usize) -> Vec<QuotientParams> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for d in 2..=max_d.min(n) {
            out.extend(all_weight_tuples(n, d));
        }
    }
    out
}

/// `(p, v)` with `q = p^v`; panics if `q` is not a prime power.
pub fn prime_power_parts(q: u64) -> (u64, u32) {
    let p = (2..=q).find(|p| q % p == 0).unwrap();
    let mut rest = q;
    let mut v = 0;
    while rest % p == 0 {
        rest /= p;
        v += 1;
    }
    assert_eq!(rest, 1, "{q} is not a prime power");
    (p, v)
}

/// Rebuilds a finite abelian p-group from the sizes of its `p^i`-torsion
/// subgroups, `sizes[i] = |G[p^i]|` for `i = 0..=v`.
fn group_from_torsion_sizes(p: u64, sizes: &[u64]) -> FiniteAbelianGroup {
    let log_p = |mut x: u64| {
        let mut e = 0usize;
        while x > 1 {
            assert_eq!(x % p, 0);
            x /= p;
            e += 1;
        }
        e
    };
    // at_least[i] = number of cyclic factors of order >= p^i
    let at_least: Vec<usize> = (1..sizes.len()).map(|i| log_p(sizes[i] / sizes[i - 1])).collect();
    let mut orders = Vec::new();
    for (i, &count) in at_least.iter().enumerate() {
        let next = at_least.get(i + 1).copied().unwrap_or(0);
        for _ in 0..(count - next) {
            orders.push(BigInt::from(p.pow(i as u32 + 1)));
        }
    }
    FiniteAbelianGroup::from_cyclic_orders(orders).unwrap()
}

/// Kernel and cokernel of `m` on `(Z/q)^k` by explicit enumeration of all
/// `q^k` vectors. `q` must be a prime power.
pub fn brute_kernel_cokernel(m: &IntMatrix, q: u64) -> (FiniteAbelianGroup, FiniteAbelianGroup) {
    let k = m.rows();
    let (p, v) = prime_power_parts(q);
    let qb = BigInt::from(q);
    let entries: Vec<u64> = m
        .reduce_mod(&qb)
        .entries()
        .iter()
        .map(|x| u64::try_from(x).unwrap())
        .collect();
    let total = q.pow(k as u32) as usize;
    let decode = |mut idx: usize, out: &mut [u64]| {
        for slot in out.iter_mut() {
            *slot = (idx as u64) % q;
            idx /= q as usize;
        }
    };
    let encode = |xs: &[u64]| xs.iter().rev().fold(0usize, |acc, &x| acc * q as usize + x as usize);

    let mut in_image = vec![false; total];
    let mut kernel = Vec::new();
    let mut x = vec![0u64; k];
    let mut y = vec![0u64; k];
    for idx in 0..total {
        decode(idx, &mut x);
        for i in 0..k {
            y[i] = (0..k).map(|j| entries[i * k + j] * x[j]).sum::<u64>() % q;
        }
        in_image[encode(&y)] = true;
        if y.iter().all(|&c| c == 0) {
            kernel.push(idx);
        }
    }
    let image_size = in_image.iter().filter(|&&b| b).count() as u64;

    let mut kernel_sizes = Vec::new();
    let mut cokernel_sizes = Vec::new();
    for i in 0..=v {
        let e = p.pow(i);
        let killed = kernel
            .iter()
            .filter(|&&idx| {
                decode(idx, &mut x);
                x.iter().all(|&c| (c * e) % q == 0)
            })
            .count() as u64;
        kernel_sizes.push(killed);
        let mut into_image = 0u64;
        for idx in 0..total {
            decode(idx, &mut x);
            for c in x.iter_mut() {
                *c = (*c * e) % q;
            }
            if in_image[encode(&x)] {
                into_image += 1;
            }
        }
        assert_eq!(into_image % image_size, 0);
        cokernel_sizes.push(into_image / image_size);
    }
    (group_from_torsion_sizes(p, &kernel_sizes), group_from_torsion_sizes(p, &cokernel_sizes))
}

/// Random unimodular matrix as a product of elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, size: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..size).map(|i| (0..size).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..(3 * size) {
        let a = rng.gen_range(0..size);
        let b = rng.gen_range(0..size);
        match rng.gen_range(0..4) {
            0 if a != b => rows.swap(a, b),
            1 => rows[a].iter_mut().for_each(|x| *x = -*x),
            _ if a != b => {
                let f = rng.gen_range(-2i64..=2);
                let src = rows[b].clone();
                rows[a].iter_mut().zip(src).for_each(|(x, s)| *x += f * s);
            }
            _ => {}
        }
    }
    IntMatrix::from_rows(&rows)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}
