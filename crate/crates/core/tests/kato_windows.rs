use fdrep_core::ar::knit;
use fdrep_core::homological::{is_injective, syzygy};
use fdrep_core::kato::{
    dominant_dimension_at_least_one, in_l_window, is_gorenstein_projective, kato_complex, perp_check,
    shift_in_l, totally_acyclic_window,
};
use fdrep_core::zoo;

#[test]
fn kato_windows_lie_in_l_and_pass_perp() {
    for (name, alg) in zoo::finite_type(2).into_iter().chain([("Kronecker", zoo::kronecker(2))]) {
        let q = knit(&alg, 14).unwrap();
        assert!(q.vertices.len() >= 2, "{name}");
        for x in q.modules(&alg) {
            let k = kato_complex(&x, -3, 3).unwrap();
            let r = in_l_window(&k.window);
            assert!(r.ok(), "{name} {:?}: {:?}", x.dim_vector(), r.violations);
            assert!(perp_check(&k.window).unwrap(), "{name} {:?}", x.dim_vector());
        }
    }
}

#[test]
fn gorenstein_verdicts_match_the_global_picture() {
    for alg in [zoo::dual_numbers(2), zoo::truncated(3, 3), zoo::nakayama2(2)] {
        for x in knit(&alg, 10).unwrap().modules(&alg) {
            let v = is_gorenstein_projective(&x, 6).unwrap();
            assert!(v.is_yes(), "{:?}: {v:?}", x.dim_vector());
            assert!(shift_in_l(&x, 1).unwrap() && shift_in_l(&x, -1).unwrap());
            let om = syzygy(&x).0;
            if om.dim() > 0 {
                assert!(is_gorenstein_projective(&om, 6).unwrap().is_yes());
            }
            assert!(totally_acyclic_window(&kato_complex(&x, -4, 4).unwrap().window));
        }
    }
    for alg in [zoo::a2(3), zoo::a3(3), zoo::kronecker(3)] {
        for x in knit(&alg, 8).unwrap().modules(&alg) {
            let v = is_gorenstein_projective(&x, 6).unwrap();
            assert_eq!(v.is_yes(), x.is_projective(), "{:?}: {v:?}", x.dim_vector());
            assert_eq!(v.is_no(), !x.is_projective());
        }
    }
}

#[test]
fn dominant_dimension_of_the_zoo() {
    assert!(dominant_dimension_at_least_one(&zoo::a3_rad_square_zero(2)));
    assert!(dominant_dimension_at_least_one(&zoo::nakayama2(2)));
    assert!(!dominant_dimension_at_least_one(&zoo::kronecker(2)));
    let a = zoo::a2(2);
    // A_2: P_1 = I_2 is projective-injective, P_2 = S_2 embeds in it.
    assert!(dominant_dimension_at_least_one(&a));
    assert!(knit(&a, 4).unwrap().modules(&a).iter().any(|m| m.is_projective() && is_injective(m)));
}
