//! Almost split sequences, knitting, powers of the radical and depth.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::decompose::{
    canonical_label, canonical_module, canonicalize, decompose, end_radical, is_indecomposable, normalize,
};
use crate::error::{invariant, precondition, Error, Result};
use crate::homological::{self, is_injective, Extensions};
use crate::linalg::Mat;
use crate::module::{hom_basis, stably_zero, HomSpace, Module};
use crate::seq::ShortExactSeq;

/// Cached almost split sequence starting in a canonical indecomposable:
/// raw maps on canonical blocks.
#[derive(Clone, Debug)]
pub struct ArRecord {
    pub middle: Vec<usize>,
    pub end: usize,
    pub f: Mat,
    pub g: Mat,
}

/// An almost split sequence with the canonical ids of its end terms.
#[derive(Clone, Debug)]
pub struct ArSequence {
    pub seq: ShortExactSeq,
    pub start: usize,
    pub end: usize,
}

fn blocks_module(alg: &Arc<Algebra>, ids: &[usize]) -> Module {
    if ids.is_empty() {
        return Module::zero(alg);
    }
    let mods: Vec<Module> = ids.iter().map(|&id| canonical_module(alg, id)).collect();
    Module::direct_sum(&mods)
}

fn canon_ids(m: &Module) -> Vec<usize> {
    m.parts().unwrap_or(&[]).iter().map(|pt| pt.canon.expect("canonical block")).collect()
}

/// The almost split sequence starting in the canonical indecomposable `id`.
pub fn almost_split_canonical(alg: &Arc<Algebra>, id: usize) -> Result<ArSequence> {
    let cached = alg.caches.lock().unwrap().ar.get(&id).cloned();
    let rec = match cached {
        Some(r) => r,
        None => {
            let r = build_almost_split(alg, id)?;
            alg.caches.lock().unwrap().ar.insert(id, r.clone());
            r
        }
    };
    let x = canonical_module(alg, id);
    let e = blocks_module(alg, &rec.middle);
    let z = canonical_module(alg, rec.end);
    Ok(ArSequence { seq: ShortExactSeq::unchecked(x, e, z, rec.f, rec.g), start: id, end: rec.end })
}

fn build_almost_split(alg: &Arc<Algebra>, id: usize) -> Result<ArRecord> {
    let c = canonical_module(alg, id);
    if is_injective(&c) {
        return precondition("an injective module starts no almost split sequence");
    }
    let zraw = homological::tau_inv(&c);
    let (zid, _) = canonicalize(&zraw)?;
    let z = canonical_module(alg, zid);
    let ext = Extensions::new(&z, &c);
    if ext.dim() == 0 {
        return invariant("Ext^1(tau^-1 X, X) vanishes");
    }
    // Classes killed by pulling back along every radical endomorphism.
    let p = alg.p();
    let mut conditions = Mat::zeros(p, ext.dim(), 0);
    for h in end_radical(&z)? {
        conditions = conditions.hstack(&ext.pullback_matrix(&h));
    }
    let socle = if conditions.cols() == 0 {
        Mat::identity(p, ext.dim())
    } else {
        conditions.left_kernel().row_basis()
    };
    if socle.rows() == 0 {
        return invariant("no class is killed by the radical of End(tau^-1 X)");
    }
    let class = socle.row(0).to_vec();
    let (e, f, g) = ext.realize(&class);
    let ne = normalize(&e)?;
    let f = f.mul(&ne.iso);
    let g = ne.inv.mul(&g);
    let seq = ShortExactSeq::new(c, ne.module.clone(), z, f, g)?;
    if seq.is_split() {
        return invariant("chosen class splits");
    }
    Ok(ArRecord { middle: canon_ids(&ne.module), end: zid, f: seq.f, g: seq.g })
}

/// The almost split sequence `0 -> X -> E -> tau^-1 X -> 0` for an
/// indecomposable non-injective `X`, with `E` on canonical blocks.
pub fn almost_split_starting(x: &Module) -> Result<ArSequence> {
    if x.dim() == 0 || !is_indecomposable(x)? {
        return precondition("almost split sequences start in indecomposables");
    }
    let (id, iso) = canonicalize(x)?;
    let mut ar = almost_split_canonical(x.algebra(), id)?;
    ar.seq.f = iso.mul(&ar.seq.f);
    ar.seq.x = x.clone();
    Ok(ar)
}

/// Direct sum of the almost split sequences starting in the summands of
/// `X`: `0 -> X -s-> E_X -t-> T(X) -> 0`.
pub fn sum_almost_split(x: &Module) -> Result<ShortExactSeq> {
    let alg = x.algebra();
    if x.dim() == 0 {
        return Ok(ShortExactSeq::zero(alg));
    }
    let nx = normalize(x)?;
    let mut seqs = Vec::new();
    for id in canon_ids(&nx.module) {
        if is_injective(&canonical_module(alg, id)) {
            return precondition("module has an injective summand");
        }
        seqs.push(almost_split_canonical(alg, id)?.seq);
    }
    let mut s = ShortExactSeq::direct_sum(&seqs);
    s.f = nx.iso.mul(&s.f);
    s.x = x.clone();
    Ok(s)
}

/// Socle of a module, as reduced rows.
pub fn socle(x: &Module) -> Mat {
    let alg = x.algebra();
    let rad = alg.radical();
    let mut stacked = Mat::zeros(x.p(), x.dim(), 0);
    for r in 0..rad.rows() {
        stacked = stacked.hstack(&x.act(rad.row(r)));
    }
    if stacked.cols() == 0 {
        return Mat::identity(x.p(), x.dim());
    }
    stacked.left_kernel().row_basis()
}

/// Left almost split map out of a canonical indecomposable: the first map
/// of its almost split sequence, or `I -> I/soc I` for an injective.
/// The target is on canonical blocks.
pub fn left_almost_split(alg: &Arc<Algebra>, id: usize) -> Result<(Module, Mat)> {
    let c = canonical_module(alg, id);
    if !is_injective(&c) {
        let ar = almost_split_canonical(alg, id)?;
        return Ok((ar.seq.y, ar.seq.f));
    }
    let (q, proj, _) = c.quotient(&socle(&c));
    if q.dim() == 0 {
        return Ok((Module::zero(alg), Mat::zeros(alg.p(), c.dim(), 0)));
    }
    let nq = normalize(&q)?;
    Ok((nq.module, proj.mul(&nq.iso)))
}

/// The AR quiver found by knitting.
#[derive(Clone, Debug)]
pub struct ArQuiver {
    /// Canonical ids of the indecomposables found.
    pub vertices: Vec<usize>,
    pub labels: Vec<String>,
    pub dim_vectors: Vec<Vec<usize>>,
    pub projective: Vec<bool>,
    pub injective: Vec<bool>,
    /// `(from, to, multiplicity)` as vertex positions.
    pub arrows: Vec<(usize, usize, usize)>,
    /// `(i, j)` with `tau(vertex i) = vertex j`.
    pub tau: Vec<(usize, usize)>,
    /// Closed under all knitting steps within the bound.
    pub complete: bool,
    pub bound: usize,
}

impl ArQuiver {
    pub fn position(&self, id: usize) -> Option<usize> {
        self.vertices.iter().position(|&v| v == id)
    }

    pub fn modules(&self, alg: &Arc<Algebra>) -> Vec<Module> {
        self.vertices.iter().map(|&id| canonical_module(alg, id)).collect()
    }
}

/// Knit the AR quiver from the indecomposable projectives and injectives,
/// stopping once more than `bound` indecomposables are found.
pub fn knit(alg: &Arc<Algebra>, bound: usize) -> Result<ArQuiver> {
    let mut order: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |id: usize, order: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
        if seen.insert(id) {
            order.push(id);
            queue.push_back(id);
        }
    };
    for m in homological::indecomposable_projectives(alg)
        .into_iter()
        .chain(homological::indecomposable_injectives(alg))
    {
        let (id, _) = canonicalize(&m)?;
        push(id, &mut order, &mut queue);
    }
    let mut arrows: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut tau_pairs = Vec::new();
    let mut complete = true;
    while let Some(id) = queue.pop_front() {
        if order.len() > bound {
            complete = false;
            break;
        }
        let c = canonical_module(alg, id);
        let (mid, _) = left_almost_split(alg, id)?;
        for t in canon_ids(&mid) {
            *arrows.entry((id, t)).or_default() += 1;
            push(t, &mut order, &mut queue);
        }
        if !is_injective(&c) {
            let ar = almost_split_canonical(alg, id)?;
            tau_pairs.push((ar.end, id));
            push(ar.end, &mut order, &mut queue);
        }
        if c.is_projective() {
            let r = c.submodule_unchecked(&c.radical_submodule());
            if r.dim() > 0 {
                for s in decompose(&r)?.summands {
                    push(s.canon, &mut order, &mut queue);
                }
            }
        } else {
            let (tid, _) = canonicalize(&homological::tau(&c))?;
            push(tid, &mut order, &mut queue);
        }
    }
    if order.len() > bound {
        complete = false;
        order.truncate(bound);
    }
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let arrows = arrows
        .into_iter()
        .filter_map(|((a, b), m)| Some((*pos.get(&a)?, *pos.get(&b)?, m)))
        .collect();
    let tau = tau_pairs.into_iter().filter_map(|(a, b)| Some((*pos.get(&a)?, *pos.get(&b)?))).collect();
    let mods: Vec<Module> = order.iter().map(|&id| canonical_module(alg, id)).collect();
    Ok(ArQuiver {
        labels: order.iter().map(|&id| canonical_label(alg, id)).collect(),
        dim_vectors: mods.iter().map(|m| m.dim_vector()).collect(),
        projective: mods.iter().map(|m| m.is_projective()).collect(),
        injective: mods.iter().map(is_injective).collect(),
        vertices: order,
        arrows,
        tau,
        complete,
        bound,
    })
}

/// Depth of a morphism in the radical filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Depth {
    Finite(usize),
    /// The zero map lies in every power.
    Infinite,
    /// The map lies in `rad^bound`; larger powers were not examined.
    Exceeded(usize),
}

impl Depth {
    pub fn is_finite(&self) -> bool {
        matches!(self, Depth::Finite(_))
    }
}

/// Powers of the radical `rad^n(C, Y)` for canonical indecomposables `C`
/// and a fixed target `Y`, computed through left almost split maps:
/// `rad^n(C, Y) = l_C * rad^(n-1)(E_C, Y)`.
pub struct RadicalTower {
    alg: Arc<Algebra>,
    y: Module,
    memo: HashMap<(usize, usize), Arc<HomSpace>>,
    left: HashMap<usize, (Module, Mat)>,
}

impl RadicalTower {
    pub fn new(y: &Module) -> RadicalTower {
        RadicalTower { alg: y.algebra().clone(), y: y.clone(), memo: HashMap::new(), left: HashMap::new() }
    }

    fn left_map(&mut self, id: usize) -> Result<(Module, Mat)> {
        if let Some(l) = self.left.get(&id) {
            return Ok(l.clone());
        }
        let l = left_almost_split(&self.alg, id)?;
        self.left.insert(id, l.clone());
        Ok(l)
    }

    /// `rad^n(C_id, Y)`.
    pub fn power(&mut self, id: usize, n: usize) -> Result<Arc<HomSpace>> {
        if let Some(h) = self.memo.get(&(id, n)) {
            return Ok(h.clone());
        }
        let p = self.alg.p();
        let c = canonical_module(&self.alg, id);
        let mats = if n == 0 {
            hom_basis(&c, &self.y)
        } else {
            let (m, l) = self.left_map(id)?;
            let mut out = Vec::new();
            for (bid, (off, size)) in canon_ids(&m).into_iter().zip(m.block_ranges()) {
                let lb = l.block(0, c.dim(), off, size);
                for h in self.power(bid, n - 1)?.elements() {
                    out.push(lb.mul(&h));
                }
            }
            out
        };
        let space = Arc::new(HomSpace::from_matrices(p, c.dim(), self.y.dim(), &mats));
        self.memo.insert((id, n), space.clone());
        Ok(space)
    }
}

/// Basis of `rad^n(X, Y)`.
pub fn rad_power(x: &Module, y: &Module, n: usize) -> Result<HomSpace> {
    let p = x.p();
    let nx = normalize(x)?;
    let mut tower = RadicalTower::new(y);
    let mut mats = Vec::new();
    for (id, (off, _)) in canon_ids(&nx.module).into_iter().zip(nx.module.block_ranges()) {
        for h in tower.power(id, n)?.elements() {
            let mut big = Mat::zeros(p, nx.module.dim(), y.dim());
            big.set_block(off, 0, &h);
            mats.push(nx.iso.mul(&big));
        }
    }
    Ok(HomSpace::from_matrices(p, x.dim(), y.dim(), &mats))
}

/// Depth of `f: X -> Y`, examined up to `rad^bound`.
pub fn depth(x: &Module, y: &Module, f: &Mat, bound: usize) -> Result<Depth> {
    if f.shape() != (x.dim(), y.dim()) {
        return Err(Error::Dimension("map does not match its modules".into()));
    }
    if f.is_zero() {
        return Ok(Depth::Infinite);
    }
    let nx = normalize(x)?;
    let fb = nx.inv.mul(f);
    let mut tower = RadicalTower::new(y);
    let mut best: Option<usize> = None;
    for (id, (off, size)) in canon_ids(&nx.module).into_iter().zip(nx.module.block_ranges()) {
        let fa = fb.block(off, size, 0, y.dim());
        if fa.is_zero() {
            continue;
        }
        let mut d = None;
        for n in 1..=bound {
            if tower.power(id, n)?.coords(&fa).is_none() {
                d = Some(n - 1);
                break;
            }
        }
        if let Some(d) = d {
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
    }
    Ok(match best {
        Some(d) => Depth::Finite(d),
        None => Depth::Exceeded(bound),
    })
}

/// Whether a simple module is a node: neither projective nor injective,
/// with projective middle term in its almost split sequence. The stable
/// criterion (the first map factors through a projective) is checked to
/// agree.
pub fn is_node(s: &Module) -> Result<bool> {
    if s.dim() == 0 || s.radical_submodule().rows() != 0 || !is_indecomposable(s)? {
        return precondition("node test needs a simple module");
    }
    if s.is_projective() || is_injective(s) {
        return Ok(false);
    }
    let ar = almost_split_starting(s)?;
    let by_middle = ar.seq.y.is_projective();
    let by_stable = stably_zero(&ar.seq.x, &ar.seq.y, &ar.seq.f);
    if by_middle != by_stable {
        return invariant("node criteria disagree");
    }
    Ok(by_middle)
}

/// Simples of the algebra that are nodes.
pub fn nodes(alg: &Arc<Algebra>) -> Result<Vec<Module>> {
    let mut out = Vec::new();
    for s in homological::simple_modules(alg) {
        if is_node(&s)? {
            out.push(s);
        }
    }
    Ok(out)
}
