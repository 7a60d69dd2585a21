use std::sync::Arc;

use fdrep_core::ar::knit;
use fdrep_core::fuzz::Fuzzer;
use fdrep_core::homological::star;
use fdrep_core::seq::{remove_split_summands, ShortExactSeq};
use fdrep_core::{zoo, Algebra, Module};
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

fn random_sequence(which: usize, seed: u64) -> ShortExactSeq {
    let us = universes();
    let (_, mods) = &us[which % us.len()];
    let mut fz = Fuzzer::new(seed);
    let z = fz.module(mods);
    let x = fz.module(mods);
    fz.extension(&z, &x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perfect_iff_dual_sequence_is_exact(which in 0usize..8, seed in any::<u64>()) {
        let s = random_sequence(which, seed);
        let by_counts = star(&s.y).module.dim() == star(&s.x).module.dim() + star(&s.z).module.dim();
        prop_assert_eq!(s.is_perfect().unwrap(), by_counts);
        prop_assert_eq!(s.is_perfect().unwrap(), s.dual_is_exact());
    }

    #[test]
    fn split_removal_is_idempotent_and_reassembles(which in 0usize..8, seed in any::<u64>(), extra in 0usize..3) {
        let s = random_sequence(which, seed);
        let us = universes();
        let (_, mods) = &us[which % us.len()];
        let w = mods[seed as usize % mods.len()].clone();
        let zero = Module::zero(s.algebra());
        let padded = match extra {
            0 => s.clone(),
            1 => ShortExactSeq::direct_sum(&[s.clone(), ShortExactSeq::split(&w, &zero)]),
            _ => ShortExactSeq::direct_sum(&[ShortExactSeq::split(&zero, &w), s.clone()]),
        };
        let r = remove_split_summands(&padded).unwrap();
        if extra > 0 {
            prop_assert!(!r.pieces.is_empty());
        }
        prop_assert!(remove_split_summands(&r.seq).unwrap().pieces.is_empty());
        let (whole, iso) = r.reassemble();
        prop_assert!(whole.is_morphism_to(&padded, &iso));
        for m in &iso {
            prop_assert!(m.is_invertible());
        }
        prop_assert_eq!(r.seq.is_perfect().unwrap(), padded.is_perfect().unwrap());
    }
}
