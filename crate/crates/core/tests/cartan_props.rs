mod common;

use cyclic_ktheory::cartan::{path_classes_by_relations, DEFAULT_PATH_CAP};
use cyclic_ktheory::{
    build_quiver, cartan_matrix, determinant, multiset_number, path_counts_bruteforce, path_counts_gf,
    unipotent_inverse, validate_params, IntMatrix,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[test]
fn generating_function_matches_enumeration() {
    for p in common::all_params(9, 6) {
        let brute = path_counts_bruteforce(&build_quiver(&p), DEFAULT_PATH_CAP).unwrap();
        assert_eq!(path_counts_gf(&p), brute, "{p}");
    }
}

#[test]
fn canonicalization_agrees_with_relation_closure() {
    for p in common::all_params(8, 4) {
        let by_relations = path_classes_by_relations(&build_quiver(&p));
        let counts = path_counts_gf(&p);
        for (s, c) in counts.counts().iter().enumerate() {
            let found = by_relations.get(&(s + 1)).copied().unwrap_or(0);
            assert_eq!(BigInt::from(found), *c, "{p} offset {s}");
        }
    }
}

#[test]
fn unit_family_counts_are_multicombinations() {
    for d in 2..=12usize {
        let p = validate_params(d as i64, d as i64, &vec![1; d]).unwrap();
        let counts = path_counts_gf(&p);
        for (s, c) in counts.counts().iter().enumerate() {
            assert_eq!(*c, multiset_number(d, s));
        }
    }
}

#[test]
fn cartan_is_unipotent_toeplitz_with_integral_inverse() {
    for p in common::all_params(10, 10) {
        let counts = path_counts_gf(&p);
        let c = cartan_matrix(&counts);
        let m = c.matrix();
        assert!(m.is_lower_unitriangular());
        for i in 0..m.rows() {
            for j in 0..=i {
                assert_eq!(m[(i, j)], counts.counts()[i - j]);
            }
        }
        assert_eq!(determinant(m).unwrap(), BigInt::one());
        let inv = unipotent_inverse(m).unwrap();
        assert_eq!(&inv * m, IntMatrix::identity(m.rows()));
    }
}

#[test]
fn positivity_matches_reachability() {
    for p in common::all_params(12, 6) {
        let len = p.vertex_count();
        // sums of weights with repetition
        let mut reachable = vec![false; len];
        reachable[0] = true;
        for s in 1..len {
            reachable[s] = p.weights().iter().any(|&a| a <= s && reachable[s - a]);
        }
        for (s, c) in path_counts_gf(&p).counts().iter().enumerate() {
            assert_eq!(!c.is_zero(), reachable[s], "{p} s={s}");
        }
    }
}
