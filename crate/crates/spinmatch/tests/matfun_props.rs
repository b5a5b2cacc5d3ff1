mod common;

use common::{rel, rng};
use proptest::prelude::*;
use spinmatch::matfun::{
    embed_bipartite, hafnian, hafnian_enum, loop_hafnian, loop_hafnian_enum, permanent,
    permanent_enum, HafnianTable,
};
use spinmatch::{SquareMatrix, SubsetIndex, SymmetricMatrix};

fn symmetric(
    max_dim: usize,
    even: bool,
    zero_diag: bool,
) -> impl Strategy<Value = SymmetricMatrix> {
    (0..=max_dim)
        .prop_map(move |n| if even { n & !1 } else { n })
        .prop_flat_map(move |n| {
            prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
                SymmetricMatrix::from_upper(n, |i, j| {
                    if zero_diag && i == j {
                        0.0
                    } else {
                        v[i * n + j]
                    }
                })
            })
        })
}

fn square(max_dim: usize) -> impl Strategy<Value = SquareMatrix> {
    (0..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, n * n)
            .prop_map(move |v| SquareMatrix::new(n, v).unwrap())
    })
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    if want.abs() < 1e-10 {
        (got - want).abs() < 1e-10
    } else {
        rel(got, want) < tol
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hafnian_matches_pair_partitions(m in symmetric(10, true, false)) {
        let fast = hafnian(&m).unwrap();
        let slow = hafnian_enum(&m).unwrap();
        prop_assert!(close(fast, slow, 1e-10), "{fast} vs {slow}");
    }

    #[test]
    fn loop_hafnian_matches_subset_sum(m in symmetric(10, false, false)) {
        let fast = loop_hafnian(&m).unwrap();
        let slow = loop_hafnian_enum(&m).unwrap();
        prop_assert!(close(fast, slow, 1e-10), "{fast} vs {slow}");
    }

    #[test]
    fn bipartite_hafnian_is_permanent(b in square(8)) {
        let haf = hafnian(&embed_bipartite(&b)).unwrap();
        let perm = permanent(&b).unwrap();
        let perm_enum = permanent_enum(&b).unwrap();
        prop_assert!(close(perm, perm_enum, 1e-10), "{perm} vs {perm_enum}");
        prop_assert!(close(haf, perm_enum, 1e-10), "{haf} vs {perm_enum}");
    }

    #[test]
    fn zero_diagonal_loop_hafnian_is_hafnian(m in symmetric(10, true, true)) {
        prop_assert_eq!(loop_hafnian(&m).unwrap(), hafnian(&m).unwrap());
    }

    #[test]
    fn relabelling_preserves_matching_sums(
        (m, perm) in symmetric(8, true, false).prop_flat_map(|m| {
            let n = m.dim();
            (Just(m), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let p = m.permuted(&perm);
        prop_assert!(close(hafnian(&p).unwrap(), hafnian(&m).unwrap(), 1e-10));
        prop_assert!(close(loop_hafnian(&p).unwrap(), loop_hafnian(&m).unwrap(), 1e-10));
    }

    #[test]
    fn isolated_index_gives_zero_hafnian(m in symmetric(8, true, false), pick in 0usize..8) {
        prop_assume!(m.dim() >= 2);
        let v = pick % m.dim();
        let cut = SymmetricMatrix::from_upper(m.dim(), |i, j| {
            if (i == v || j == v) && i != j { 0.0 } else { m.get(i, j) }
        });
        prop_assert_eq!(hafnian(&cut).unwrap(), 0.0);
        prop_assert_eq!(hafnian_enum(&cut).unwrap(), 0.0);
    }
}

#[test]
fn random_permanent_5x5_matches_enumeration() {
    let mut r = rng(5);
    let b = common::random_square(&mut r, 5);
    assert!(rel(permanent(&b).unwrap(), permanent_enum(&b).unwrap()) < 1e-12);
}

#[test]
fn random_hafnian_8x8_matches_enumeration() {
    let mut r = rng(8);
    let m = common::random_zero_diagonal(&mut r, 8);
    assert!(rel(hafnian(&m).unwrap(), hafnian_enum(&m).unwrap()) < 1e-12);
}

#[test]
fn random_loop_hafnian_6x6_matches_enumeration() {
    let mut r = rng(6);
    let m = common::random_symmetric(&mut r, 6);
    assert!(rel(loop_hafnian(&m).unwrap(), loop_hafnian_enum(&m).unwrap()) < 1e-12);
}

#[test]
fn random_bipartite_4x4() {
    let mut r = rng(44);
    let b = common::random_square(&mut r, 4);
    let haf = hafnian(&embed_bipartite(&b)).unwrap();
    assert!(rel(haf, permanent_enum(&b).unwrap()) < 1e-12);
}

#[test]
fn table_entries_are_submatrix_hafnians() {
    let mut r = rng(9);
    let m = common::random_symmetric(&mut r, 8);
    let table = HafnianTable::new(&m).unwrap();
    for mask in 0..1u64 << 8 {
        let s = SubsetIndex::from_mask(mask);
        let want = if s.len().is_multiple_of(2) {
            hafnian_enum(&m.principal(s)).unwrap()
        } else {
            0.0
        };
        assert!(close(table.get(s), want, 1e-12), "mask {mask:#b}");
    }
}
