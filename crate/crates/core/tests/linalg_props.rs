use fdrep_core::Mat;
use proptest::prelude::*;

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn mat(p: u32, rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(0..p, rows * cols).prop_map(move |d| Mat::from_vec(p, rows, cols, d))
}

fn any_mat() -> impl Strategy<Value = Mat> {
    (prop::sample::select(&PRIMES[..]), 0usize..6, 0usize..6).prop_flat_map(|(p, r, c)| mat(p, r, c))
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in any_mat()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_is_annihilated_and_complements_rank(m in any_mat()) {
        let k = m.kernel();
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.cols() + m.rank(), m.cols());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn solutions_satisfy_the_system(
        (m, x) in (prop::sample::select(&PRIMES[..]), 1usize..6, 1usize..6, 1usize..3)
            .prop_flat_map(|(p, r, c, k)| (mat(p, r, c), mat(p, c, k)))
    ) {
        let b = m.mul(&x);
        let sol = m.solve(&b).unwrap();
        prop_assert!(sol.is_some());
        prop_assert_eq!(m.mul(&sol.unwrap()), b);
    }

    #[test]
    fn solve_reports_inconsistency_correctly(
        (m, b) in (prop::sample::select(&PRIMES[..]), 1usize..5, 1usize..5)
            .prop_flat_map(|(p, r, c)| (mat(p, r, c), mat(p, r, 1)))
    ) {
        let consistent = m.rank() == m.hstack(&b).rank();
        match m.solve(&b).unwrap() {
            Some(x) => {
                prop_assert!(consistent);
                prop_assert_eq!(m.mul(&x), b);
            }
            None => prop_assert!(!consistent),
        }
    }

    #[test]
    fn kron_is_associative(
        (a, b, c) in (prop::sample::select(&PRIMES[..]), 1usize..3, 1usize..3, 1usize..3, 1usize..3)
            .prop_flat_map(|(p, r, s, t, u)| (mat(p, r, s), mat(p, s, t), mat(p, t, u)))
    ) {
        prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
    }

    #[test]
    fn kron_respects_products(
        (a, b, c, d) in (prop::sample::select(&PRIMES[..]), 1usize..3, 1usize..3, 1usize..3, 1usize..3)
            .prop_flat_map(|(p, r, s, t, u)| (mat(p, r, s), mat(p, s, t), mat(p, t, u), mat(p, u, r)))
    ) {
        prop_assert_eq!(a.kron(&c).mul(&b.kron(&d)), a.mul(&b).kron(&c.mul(&d)));
    }

    #[test]
    fn inverse_round_trips(m in (prop::sample::select(&PRIMES[..]), 1usize..5).prop_flat_map(|(p, n)| mat(p, n, n))) {
        match m.inverse() {
            Some(inv) => {
                prop_assert_eq!(m.mul(&inv), Mat::identity(m.p(), m.rows()));
                prop_assert_eq!(inv.mul(&m), Mat::identity(m.p(), m.rows()));
            }
            None => prop_assert!(m.rank() < m.rows()),
        }
    }
}
