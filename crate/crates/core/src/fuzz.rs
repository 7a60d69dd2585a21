//! Seeded random instances: modules, extensions, inputs to the merge and
//! splice constructions, and complexes of projectives.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ar::{almost_split_starting, sum_almost_split};
use crate::decompose::{find_iso, is_indecomposable};
use crate::homological::{has_injective_summand, indecomposable_projectives, injective_hull, tau, Extensions};
use crate::kato::{kato_complex, ComplexWindow};
use crate::module::{factor_from, factor_through, hom_basis};
use crate::seq::{split_module, ShortExactSeq};
use crate::{Algebra, Mat, Module, Result};

pub struct Fuzzer {
    rng: ChaCha8Rng,
}

impl Fuzzer {
    pub fn new(seed: u64) -> Fuzzer {
        Fuzzer { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("pick from an empty slice")
    }

    /// One or two indecomposables, summed.
    pub fn module(&mut self, mods: &[Module]) -> Module {
        let first = self.pick(mods).clone();
        if self.below(3) == 0 {
            first.direct_sum2(self.pick(mods))
        } else {
            first
        }
    }

    pub fn coefficients(&mut self, p: u32, n: usize) -> Vec<u32> {
        (0..n).map(|_| self.rng.gen_range(0..p)).collect()
    }

    /// A uniformly random homomorphism `x -> y`.
    pub fn hom(&mut self, x: &Module, y: &Module) -> Mat {
        let p = x.p();
        let mut f = Mat::zeros(p, x.dim(), y.dim());
        for b in hom_basis(x, y) {
            let c = self.rng.gen_range(0..p);
            f.add_scaled(&b, c);
        }
        f
    }

    /// A random class of `Ext^1(z, x)` realized as a sequence; split when
    /// the class is zero.
    pub fn extension(&mut self, z: &Module, x: &Module) -> Result<ShortExactSeq> {
        let ext = Extensions::new(z, x);
        let class = self.coefficients(x.p(), ext.dim());
        let (e, f, g) = ext.realize(&class);
        ShortExactSeq::new(x.clone(), e, z.clone(), f, g)
    }

    /// A random non-split sequence between modules of the universe, if one
    /// turns up within a few draws.
    pub fn non_split(&mut self, mods: &[Module]) -> Result<Option<ShortExactSeq>> {
        for _ in 0..12 {
            let z = self.module(mods);
            let x = self.module(mods);
            let s = self.extension(&z, &x)?;
            if !s.is_split() {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    /// Inputs `(s, t, alpha)` to `merge_left`: `t` starts in the first term
    /// of `s` and `f = u alpha`.
    pub fn merge_left_input(&mut self, mods: &[Module]) -> Result<Option<(ShortExactSeq, ShortExactSeq, Mat)>> {
        let Some(s) = self.non_split(mods)? else { return Ok(None) };
        let t = match self.below(3) {
            0 if !has_injective_summand(&s.x)? => sum_almost_split(&s.x)?,
            1 => {
                let (i, u) = injective_hull(&s.x);
                let (v, g, _) = i.hom_cokernel(&u);
                ShortExactSeq::new(s.x.clone(), i, v, u, g)?
            }
            _ => {
                let v = self.module(mods);
                self.extension(&v, &s.x)?
            }
        };
        Ok(factor_from(&t.y, &s.y, &t.f, &s.f).map(|alpha| (s, t, alpha)))
    }

    /// Inputs `(s, t, alpha)` to `merge_right`: `t` ends in the last term of
    /// `s` and `g = alpha v`.
    pub fn merge_right_input(&mut self, mods: &[Module]) -> Result<Option<(ShortExactSeq, ShortExactSeq, Mat)>> {
        let Some(s) = self.non_split(mods)? else { return Ok(None) };
        let t = match self.below(3) {
            0 if !s.z.is_projective() && is_indecomposable(&s.z)? => {
                let ar = almost_split_starting(&tau(&s.z))?.seq;
                let iso = match find_iso(&ar.z, &s.z)? {
                    Some(iso) => iso,
                    None => return Ok(None),
                };
                ShortExactSeq::new(ar.x, ar.y, s.z.clone(), ar.f, ar.g.mul(&iso))?
            }
            1 => {
                let cov = s.z.cover();
                let (k, incl) = cov.projective.hom_kernel(&cov.epi);
                ShortExactSeq::new(k, cov.projective.clone(), s.z.clone(), incl, cov.epi.clone())?
            }
            _ => {
                let u = self.module(mods);
                self.extension(&s.z, &u)?
            }
        };
        Ok(factor_through(&s.y, &t.y, &t.g, &s.g).map(|alpha| (s, t, alpha)))
    }

    /// A sequence rewritten on canonical blocks whose middle term has at
    /// least two blocks, with a random block boundary.
    fn split_middle(&mut self, mods: &[Module]) -> Result<Option<(ShortExactSeq, usize)>> {
        let Some(s) = self.non_split(mods)? else { return Ok(None) };
        let (n, _) = s.normalized()?;
        let ranges = n.y.block_ranges();
        if ranges.len() < 2 {
            return Ok(None);
        }
        let cut = ranges[1 + self.below(ranges.len() - 1)].0;
        Ok(Some((n, cut)))
    }

    /// Inputs to the first snake splice:
    /// `s1: 0 -> X -> U + P -> V -> 0` and the pushout-type
    /// `s2: 0 -> U -> E + V -> Z -> 0` built from a random extension of `U`.
    pub fn snake_1_input(&mut self, mods: &[Module]) -> Result<Option<(ShortExactSeq, ShortExactSeq)>> {
        let Some((s1, cut)) = self.split_middle(mods)? else { return Ok(None) };
        let (u, _) = split_module(&s1.y, cut)?;
        let t = s1.g.block(0, cut, 0, s1.z.dim());
        let q = self.module(mods);
        let e = self.extension(&q, &u)?;
        let middle = e.y.direct_sum2(&s1.z);
        let first = e.f.hstack(&t);
        let (z, g, _) = middle.hom_cokernel(&first);
        let s2 = ShortExactSeq::new(u, middle, z, first, g)?;
        Ok(Some((s1, s2)))
    }

    /// Inputs to the second snake splice:
    /// `s1: 0 -> U -> V + P -> Z -> 0` and the pullback-type
    /// `s2: 0 -> X -> Y + U -> V -> 0` built from a random extension ending
    /// in `V`.
    pub fn snake_2_input(&mut self, mods: &[Module]) -> Result<Option<(ShortExactSeq, ShortExactSeq)>> {
        let Some((s1, cut)) = self.split_middle(mods)? else { return Ok(None) };
        let (v, _) = split_module(&s1.y, cut)?;
        let s = s1.f.block(0, s1.x.dim(), 0, cut);
        let k = self.module(mods);
        let e = self.extension(&v, &k)?;
        let middle = e.y.direct_sum2(&s1.x);
        let second = e.g.vstack(&s);
        let (x, incl) = middle.hom_kernel(&second);
        let s2 = ShortExactSeq::new(x, middle, v, incl, second)?;
        Ok(Some((s1, s2)))
    }

    /// A window of projectives: a shifted Kato complex of a random module,
    /// or a random map between projectives padded with zeros.
    pub fn window(&mut self, alg: &Arc<Algebra>, mods: &[Module]) -> Result<ComplexWindow> {
        if self.coin() {
            let x = self.module(mods);
            let c = kato_complex(&x, -3, 3)?.window;
            let s = self.below(3) as i64 - 1;
            return Ok(c.shift(s));
        }
        let projectives = indecomposable_projectives(alg);
        let src = self.module(&projectives);
        let dst = self.module(&projectives);
        let d = self.hom(&src, &dst);
        let zero = Module::zero(alg);
        let p = alg.p();
        let terms = vec![zero.clone(), src.clone(), dst.clone(), zero];
        let diffs = vec![
            Mat::zeros(p, 0, src.dim()),
            d,
            Mat::zeros(p, dst.dim(), 0),
        ];
        ComplexWindow::new(-2, terms, diffs)
    }
}
