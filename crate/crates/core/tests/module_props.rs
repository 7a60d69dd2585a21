use std::sync::Arc;

use fdrep_core::ar::knit;
use fdrep_core::decompose::{decompose, is_indecomposable, isomorphic};
use fdrep_core::fuzz::Fuzzer;
use fdrep_core::homological::{
    indecomposable_injectives, indecomposable_projectives, inside_radical, is_injective, nakayama, star,
    strip_projectives, syzygy, transpose,
};
use fdrep_core::kato::dominant_dimension_at_least_one;
use fdrep_core::module::hom_space;
use fdrep_core::seq::ShortExactSeq;
use fdrep_core::{zoo, Algebra, Mat, Module};
use proptest::prelude::*;

fn universes() -> Vec<(Arc<Algebra>, Vec<Module>)> {
    let mut algs: Vec<Arc<Algebra>> = zoo::finite_type(2).into_iter().map(|(_, a)| a).collect();
    algs.push(zoo::truncated(3, 3));
    algs.push(zoo::kronecker(2));
    algs.into_iter()
        .map(|a| {
            let mods = knit(&a, 12).unwrap().modules(&a);
            (a, mods)
        })
        .collect()
}

#[test]
fn nakayama_sends_projectives_to_injectives_bijectively() {
    for (a, _) in universes() {
        let images: Vec<Module> = indecomposable_projectives(&a).iter().map(nakayama).collect();
        for m in &images {
            assert!(is_indecomposable(m).unwrap() && is_injective(m), "{}", a.name());
        }
        let injectives = indecomposable_injectives(&a);
        for inj in &injectives {
            let hits = images.iter().filter(|m| isomorphic(m, inj).unwrap()).count();
            assert_eq!(hits, 1, "{}", a.name());
        }
    }
}

/// Every matrix `dim x` by `dim y` over F_2, tested for being a homomorphism.
fn brute_force_hom_count(x: &Module, y: &Module) -> usize {
    let cells = x.dim() * y.dim();
    (0..1usize << cells)
        .filter(|bits| {
            let data = (0..cells).map(|c| ((bits >> c) & 1) as u32).collect();
            x.is_hom_to(y, &Mat::from_vec(2, x.dim(), y.dim(), data))
        })
        .count()
}

#[test]
fn hom_dimensions_match_exhaustive_count_over_f2() {
    for (a, mods) in universes() {
        if a.p() != 2 {
            continue;
        }
        let mut small: Vec<Module> = mods.iter().filter(|m| m.dim() <= 2).cloned().collect();
        let simples: Vec<Module> = mods.iter().filter(|m| m.dim() == 1).cloned().collect();
        for s in &simples {
            for t in &simples {
                small.push(s.direct_sum2(t));
            }
        }
        for x in &small {
            for y in &small {
                let d = hom_space(x, y).unwrap().dim();
                assert_eq!(brute_force_hom_count(x, y), 1 << d, "{}: {:?} -> {:?}", a.name(), x.dim_vector(), y.dim_vector());
            }
        }
    }
}

#[test]
fn syzygy_is_superfluous_in_the_cover() {
    for (a, mods) in universes() {
        for x in &mods {
            let cover = x.cover();
            let (_, incl) = syzygy(x);
            assert!(inside_radical(&cover.projective, &incl), "{}: {:?}", a.name(), x.dim_vector());
        }
    }
}

#[test]
fn submodules_without_maps_to_projectives_carry_perfect_sequences() {
    let mut fz = Fuzzer::new(11);
    let mut checked = 0;
    for (a, mods) in universes() {
        if !dominant_dimension_at_least_one(&a) {
            continue;
        }
        for y in &mods {
            if star(y).module.dim() != 0 {
                continue;
            }
            for _ in 0..4 {
                let gens = Mat::from_vec(a.p(), 1, y.dim(), fz.coefficients(a.p(), y.dim()));
                let sub = y.generated_submodule(&gens);
                let (yp, _) = y.submodule(&sub).unwrap();
                assert_eq!(star(&yp).module.dim(), 0, "{}", a.name());
                if yp.dim() == 0 {
                    continue;
                }
                let inner = Mat::from_vec(a.p(), 1, yp.dim(), fz.coefficients(a.p(), yp.dim()));
                let xs = yp.generated_submodule(&inner);
                let (x, incl) = yp.submodule(&xs).unwrap();
                let (z, proj, _) = yp.quotient(&xs);
                let s = ShortExactSeq::new(x, yp.clone(), z, incl, proj).unwrap();
                assert!(s.is_perfect().unwrap(), "{}", a.name());
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn double_transpose_recovers_the_non_projective_part(which in 0usize..8, seed in any::<u64>()) {
        let us = universes();
        let (a, mods) = &us[which % us.len()];
        let mut fz = Fuzzer::new(seed);
        let x = fz.module(mods);
        let tt = transpose(&transpose(&x));
        prop_assert!(Arc::ptr_eq(tt.algebra(), a));
        let stripped = strip_projectives(&x).unwrap();
        prop_assert_eq!(tt.dim(), stripped.dim());
        if tt.dim() > 0 {
            prop_assert!(isomorphic(&tt, &stripped).unwrap());
        }
    }

    #[test]
    fn decomposition_reassembles(which in 0usize..8, seed in any::<u64>()) {
        let us = universes();
        let (_, mods) = &us[which % us.len()];
        let mut fz = Fuzzer::new(seed);
        let x = fz.module(mods).direct_sum2(&fz.module(mods));
        let parts: Vec<Module> = decompose(&x).unwrap().summands.into_iter().map(|s| s.module).collect();
        prop_assert!(isomorphic(&Module::direct_sum(&parts), &x).unwrap());
        for p in &parts {
            prop_assert!(is_indecomposable(p).unwrap());
        }
    }
}
