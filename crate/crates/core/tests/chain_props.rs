use std::sync::Arc;

use fdrep_core::ar::{depth, is_node, knit, Depth};
use fdrep_core::decompose::decompose;
use fdrep_core::eta::{depth_hypothesis, run_chain, ChainStatus};
use fdrep_core::fuzz::Fuzzer;
use fdrep_core::homological::simple_modules;
use fdrep_core::module::hom_basis;
use fdrep_core::seq::{ext1_classes, remove_split_summands, ShortExactSeq};
use fdrep_core::{zoo, Algebra, Module};
use proptest::prelude::*;

fn finite_type() -> Vec<(Arc<Algebra>, Vec<Module>)> {
    let mut algs: Vec<Arc<Algebra>> = zoo::finite_type(2).into_iter().map(|(_, a)| a).collect();
    algs.push(zoo::truncated(3, 3));
    algs.into_iter()
        .map(|a| {
            let q = knit(&a, 64).unwrap();
            assert!(q.complete, "{} is of finite type", a.name());
            let mods = q.modules(&a);
            (a, mods)
        })
        .collect()
}

fn summand_dims(m: &Module) -> Vec<Vec<usize>> {
    if m.dim() == 0 {
        return vec![];
    }
    let mut v = decompose(m).unwrap().dim_vectors();
    v.sort();
    v
}

fn has_node_summand(x: &Module) -> bool {
    x.dim() > 0
        && decompose(x).unwrap().summands.iter().any(|s| {
            s.module.radical_submodule().rows() == 0
                && s.module.top_vector().iter().sum::<usize>() == 1
                && is_node(&s.module).unwrap()
        })
}

fn admissible(s: &ShortExactSeq) -> bool {
    !s.is_split()
        && s.is_perfect().unwrap()
        && remove_split_summands(s).unwrap().pieces.is_empty()
        && !has_node_summand(&s.x)
}

fn is_sub_multiset(small: &[Vec<usize>], big: &[Vec<usize>]) -> bool {
    let mut rest = big.to_vec();
    small.iter().all(|d| match rest.iter().position(|e| e == d) {
        Some(i) => {
            rest.remove(i);
            true
        }
        None => false,
    })
}

#[test]
fn node_criteria_agree_on_every_simple() {
    let mut algs: Vec<Arc<Algebra>> = zoo::finite_type(2).into_iter().map(|(_, a)| a).collect();
    algs.push(zoo::kronecker(2));
    algs.push(zoo::truncated(3, 3));
    for a in algs {
        for s in simple_modules(&a) {
            is_node(&s).unwrap();
        }
    }
}

#[test]
fn homomorphisms_have_bounded_depth_on_finite_type() {
    for (a, mods) in finite_type() {
        let n = mods.len();
        for x in &mods {
            for y in &mods {
                for f in hom_basis(x, y) {
                    match depth(x, y, &f, n * n).unwrap() {
                        Depth::Finite(d) => assert!(d <= n * n),
                        other => panic!("{}: basis map has depth {other:?}", a.name()),
                    }
                }
            }
        }
    }
}

#[test]
fn chain_steps_keep_their_invariants() {
    let mut runs = 0;
    for (a, mods) in finite_type() {
        let bound = mods.len() * mods.len();
        for z in &mods {
            for x in &mods {
                for s in ext1_classes(z, x).unwrap() {
                    if !admissible(&s) {
                        continue;
                    }
                    let finite_start = depth_hypothesis(&s, bound).unwrap().all_finite();
                    let chain = run_chain(&s, bound).unwrap();
                    assert!(matches!(chain.status, ChainStatus::TerminatedAlmostSplit(_)), "{}", a.name());
                    let seqs = chain.sequences();
                    for w in seqs.windows(2) {
                        let (cur, next) = (w[0], w[1]);
                        assert!(!has_node_summand(&next.x), "{}", a.name());
                        assert!(next.is_perfect().unwrap());
                        assert!(remove_split_summands(next).unwrap().pieces.is_empty());
                        assert!(is_sub_multiset(&summand_dims(&next.z), &summand_dims(&cur.z)), "{}", a.name());
                        if finite_start {
                            assert!(depth_hypothesis(next, bound).unwrap().all_finite(), "{}", a.name());
                        }
                    }
                    runs += 1;
                }
            }
        }
    }
    assert!(runs > 0);
}

fn depth_rank(d: Depth) -> usize {
    match d {
        Depth::Finite(n) | Depth::Exceeded(n) => n,
        Depth::Infinite => usize::MAX,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composing_never_decreases_depth(which in 0usize..7, seed in any::<u64>()) {
        let us = finite_type();
        let (_, mods) = &us[which % us.len()];
        let mut fz = Fuzzer::new(seed);
        let (w, x, y, v) = (fz.pick(mods).clone(), fz.pick(mods).clone(), fz.pick(mods).clone(), fz.pick(mods).clone());
        let f = fz.hom(&x, &y);
        let h = fz.hom(&w, &x);
        let g = fz.hom(&y, &v);
        let bound = mods.len() * mods.len();
        let df = depth(&x, &y, &f, bound).unwrap();
        let dc = depth(&w, &v, &h.mul(&f).mul(&g), bound).unwrap();
        prop_assert!(depth_rank(dc) >= depth_rank(df), "{:?} < {:?}", dc, df);
    }
}
