//! Krull-Schmidt decomposition by Fitting splitting, endomorphism-ring
//! radicals, and the per-algebra registry of canonical indecomposables.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invariant, Result};
use crate::linalg::{inv, pow_mod, rowspace, Mat};
use crate::module::{hom_basis, hom_space, CanonEntry, HomSpace, Module, Part};

static DEFAULT_SEED: AtomicU64 = AtomicU64::new(0x5eed_f00d);

/// Seed used by the randomized splitting search.
pub fn default_seed() -> u64 {
    DEFAULT_SEED.load(Ordering::Relaxed)
}

pub fn set_default_seed(seed: u64) {
    DEFAULT_SEED.store(seed, Ordering::Relaxed);
}

const RANDOM_TRIES: usize = 256;

/// The endomorphism algebra of a module with its multiplication table.
pub struct EndAlgebra {
    pub space: HomSpace,
    p: u32,
    /// `table[i][j]` = coordinates of `E_i * E_j`.
    table: Vec<Vec<Vec<u32>>>,
}

impl EndAlgebra {
    pub fn new(x: &Module) -> EndAlgebra {
        let space = hom_space(x, x).expect("same module");
        let mats = space.elements();
        let table = mats
            .iter()
            .map(|a| {
                mats.iter()
                    .map(|b| space.coords(&a.mul(b)).expect("End is closed under composition"))
                    .collect()
            })
            .collect();
        EndAlgebra { space, p: x.p(), table }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    fn mul(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let d = self.dim();
        let mut out = vec![0u64; d];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = a as u64 * b as u64 % p;
                for (o, &c) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = (*o + ab * c as u64) % p;
                }
            }
        }
        out.into_iter().map(|v| v as u32).collect()
    }

    fn pow(&self, u: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = self.identity();
        let mut base = u.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn identity(&self) -> Vec<u32> {
        let n = self.space.rows;
        self.space.coords(&Mat::identity(self.p, n)).expect("identity is an endomorphism")
    }

    /// Right multiplication by basis element `k`, as a `d x d` matrix.
    fn right_matrix(&self, k: usize) -> Mat {
        let d = self.dim();
        let rows: Vec<Vec<u32>> = (0..d).map(|i| self.table[i][k].clone()).collect();
        Mat::from_rows_shaped(self.p, d, &rows)
    }

    fn left_matrix(&self, k: usize) -> Mat {
        let d = self.dim();
        let rows: Vec<Vec<u32>> = (0..d).map(|i| self.table[k][i].clone()).collect();
        Mat::from_rows_shaped(self.p, d, &rows)
    }

    /// Smallest two-sided ideal containing the rows of `gens`.
    fn ideal(&self, gens: &Mat) -> Mat {
        let d = self.dim();
        let mults: Vec<Mat> = (0..d).flat_map(|k| [self.right_matrix(k), self.left_matrix(k)]).collect();
        let mut basis = gens.row_basis();
        loop {
            let mut grown = basis.clone();
            for m in &mults {
                grown = grown.vstack(&basis.mul(m));
            }
            let next = grown.row_basis();
            if next.rows() == basis.rows() {
                return basis;
            }
            basis = next;
        }
    }

    /// Whether the ideal spanned by the rows of `c` is nilpotent.
    fn ideal_is_nilpotent(&self, c: &Mat) -> bool {
        let p = self.p;
        let d = self.dim();
        let mut power = c.clone();
        while power.rows() > 0 {
            let mut prods = Vec::new();
            for i in 0..power.rows() {
                for j in 0..c.rows() {
                    prods.push(self.mul(power.row(i), c.row(j)));
                }
            }
            let next = Mat::from_rows_shaped(p, d, &prods).row_basis();
            if next.rows() == power.rows() {
                return false;
            }
            power = next;
        }
        true
    }

    /// Minimal polynomial of `u` (coefficients, lowest degree first, monic).
    fn min_poly(&self, u: &[u32]) -> Vec<u32> {
        let p = self.p;
        let d = self.dim();
        let mut powers = vec![self.identity()];
        loop {
            let k = powers.len();
            let stacked = Mat::from_rows_shaped(p, d, &powers);
            let next = self.mul(powers.last().unwrap(), u);
            if let Some(c) = stacked.solve_left(&Mat::row_vector(p, &next)).unwrap() {
                let mut poly: Vec<u32> = (0..k).map(|i| (p - c.get(0, i)) % p).collect();
                poly.push(1);
                return poly;
            }
            powers.push(next);
        }
    }

    pub fn element(&self, u: &[u32]) -> Mat {
        self.space.combine(u)
    }
}

fn roots_in_prime_field(poly: &[u32], p: u32) -> Vec<u32> {
    (0..p)
        .filter(|&c| {
            let mut acc: u64 = 0;
            for &a in poly.iter().rev() {
                acc = (acc * c as u64 + a as u64) % p as u64;
            }
            acc == 0
        })
        .collect()
}

/// Result of analysing `End(X)`.
pub struct EndAnalysis {
    pub end: EndAlgebra,
    /// Whether `End(X)` is local (`X` indecomposable and nonzero).
    pub local: bool,
    /// Basis of the Jacobson radical when `local`.
    pub radical: Vec<Mat>,
    /// An endomorphism with a nontrivial Fitting decomposition when not
    /// local.
    pub splitter: Option<Mat>,
}

/// Split `End(X)` into "local with this radical" or "here is an
/// endomorphism that splits X".
pub fn analyze_end(x: &Module) -> Result<EndAnalysis> {
    let end = EndAlgebra::new(x);
    let p = end.p;
    let d = end.dim();
    if x.dim() == 0 {
        return Ok(EndAnalysis { end, local: false, radical: vec![], splitter: None });
    }
    let one = end.identity();
    // Commutator ideal.
    let mut comms = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let a = &end.table[i][j];
            let b = &end.table[j][i];
            comms.push(a.iter().zip(b).map(|(&u, &v)| (u + p - v) % p).collect::<Vec<u32>>());
        }
    }
    let c = end.ideal(&Mat::from_rows_shaped(p, d, &comms));
    let one_row = Mat::row_vector(p, &one);
    // End local forces C inside the radical; a non-nilpotent element of C
    // is a proper non-nilpotent endomorphism and splits X.
    for r in 0..c.rows() {
        if let Some(s) = fitting_split(&end, x, c.row(r)) {
            return Ok(EndAnalysis { end, local: false, radical: vec![], splitter: Some(s) });
        }
    }
    let c_nilpotent = end.ideal_is_nilpotent(&c);
    if c_nilpotent && !rowspace::contains(&c, &one_row) {
        // R = End / C is commutative; its nilradical is the kernel of a high
        // Frobenius power, which is linear there.
        let (proj, section) = rowspace::quotient(&c, d);
        let q = proj.cols();
        let frob = |m_section: &Mat, m_proj: &Mat| -> Mat {
            let rows: Vec<Vec<u32>> = (0..m_section.rows())
                .map(|t| {
                    let u = m_section.row(t).to_vec();
                    let up = end.pow(&u, p as u64);
                    Mat::row_vector(p, &up).mul(m_proj).row(0).to_vec()
                })
                .collect();
            Mat::from_rows_shaped(p, m_proj.cols(), &rows)
        };
        let fm = frob(&section, &proj);
        let nil = fm.pow(q as u64 + 1).left_kernel();
        let j = c.vstack(&nil.mul(&section)).row_basis();
        let (proj2, section2) = rowspace::quotient(&j, d);
        let f2 = frob(&section2, &proj2);
        let fixed = f2.sub(&Mat::identity(p, f2.rows())).left_kernel();
        if fixed.rows() == 1 {
            let radical = (0..j.rows()).map(|r| end.element(j.row(r))).collect();
            return Ok(EndAnalysis { end, local: true, radical, splitter: None });
        }
        // A Frobenius-fixed element that is not a scalar separates two
        // simple factors; shifting by one of its eigenvalues splits X.
        let one_q = Mat::row_vector(p, &one).mul(&proj2);
        for r in 0..fixed.rows() {
            let z = fixed.select_rows(&[r]);
            if z.vstack(&one_q).rank() < 2 {
                continue;
            }
            let lift = z.mul(&section2).row(0).to_vec();
            if let Some(s) = fitting_split(&end, x, &lift) {
                return Ok(EndAnalysis { end, local: false, radical: vec![], splitter: Some(s) });
            }
        }
    }
    let splitter = random_splitter(&end, x)?;
    Ok(EndAnalysis { end, local: false, radical: vec![], splitter: Some(splitter) })
}

/// Try `u - c` for every root `c` of the minimal polynomial of `u`; return
/// the first that is neither invertible nor nilpotent.
fn fitting_split(end: &EndAlgebra, x: &Module, u: &[u32]) -> Option<Mat> {
    let p = end.p;
    let n = x.dim();
    let phi = end.element(u);
    let poly = end.min_poly(u);
    for c in roots_in_prime_field(&poly, p) {
        let shifted = phi.sub(&Mat::identity(p, n).scale(c));
        let power = shifted.pow(n as u64);
        let r = power.rank();
        if r > 0 && r < n {
            return Some(shifted);
        }
    }
    None
}

fn random_splitter(end: &EndAlgebra, x: &Module) -> Result<Mat> {
    let p = end.p;
    let d = end.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(default_seed() ^ (x.dim() as u64) << 32 ^ d as u64);
    for _ in 0..RANDOM_TRIES {
        let u: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        if let Some(s) = fitting_split(end, x, &u) {
            return Ok(s);
        }
    }
    if d <= 8 && (p as u64).checked_pow(d as u32).is_some_and(|n| n <= 1 << 20) {
        let total = (p as u64).pow(d as u32);
        for idx in 0..total {
            let mut t = idx;
            let u: Vec<u32> = (0..d)
                .map(|_| {
                    let v = (t % p as u64) as u32;
                    t /= p as u64;
                    v
                })
                .collect();
            if let Some(s) = fitting_split(end, x, &u) {
                return Ok(s);
            }
        }
    }
    invariant(format!(
        "no splitting endomorphism found for a module of dimension {} with End of dimension {d}",
        x.dim()
    ))
}

/// Indecomposable pieces of `x` as (module, rows spanning it inside `x`).
fn split_raw(x: &Module) -> Result<Vec<(Module, Mat)>> {
    let p = x.p();
    let mut done = Vec::new();
    let mut stack = vec![(x.without_parts(), Mat::identity(p, x.dim()))];
    while let Some((m, incl)) = stack.pop() {
        if m.dim() == 0 {
            continue;
        }
        let an = analyze_end(&m)?;
        if an.local {
            done.push((m, incl));
            continue;
        }
        let s = an.splitter.expect("non-local End comes with a splitter");
        let power = s.pow(m.dim() as u64);
        let ker = power.left_kernel().row_basis();
        let im = power.row_basis();
        if ker.rows() == 0 || im.rows() == 0 || ker.rows() + im.rows() != m.dim() {
            return invariant("Fitting decomposition is degenerate");
        }
        // Push the image first so that the kernel part is handled next;
        // order is fixed later anyway.
        for basis in [im, ker] {
            let sub = m.submodule_unchecked(&basis);
            stack.push((sub, basis.mul(&incl)));
        }
    }
    Ok(done)
}

/// An isomorphism between two indecomposables, if one exists.
pub fn indecomposable_iso(w: &Module, c: &Module) -> Option<Mat> {
    if w.dim() != c.dim() || w.dim_vector() != c.dim_vector() {
        return None;
    }
    // If W and C are isomorphic, some basis element of Hom(W, C) composed
    // with some map back is outside the radical of the local ring End(W),
    // hence that basis element is already an isomorphism.
    hom_basis(w, c).into_iter().find(|h| h.is_invertible())
}

/// Register an indecomposable; returns its canonical index and an
/// isomorphism from `w` to the canonical representative.
pub fn canonicalize(w: &Module) -> Result<(usize, Mat)> {
    let alg = w.algebra().clone();
    let _gate = alg.registry_gate.lock().unwrap();
    let dv = w.dim_vector();
    let candidates: Vec<(usize, Vec<Mat>)> = {
        let caches = alg.caches.lock().unwrap();
        caches
            .canon
            .iter()
            .enumerate()
            .filter(|(_, e)| e.dim_vector == dv)
            .map(|(i, e)| (i, e.action.clone()))
            .collect()
    };
    let same_dv = candidates.len();
    for (id, action) in candidates {
        let c = Module::new_unchecked(&alg, w.dim(), action);
        if let Some(iso) = indecomposable_iso(&w.without_parts(), &c) {
            return Ok((id, iso));
        }
    }
    let mut caches = alg.caches.lock().unwrap();
    let label = format_dim_vector(&dv, same_dv);
    caches.canon.push(CanonEntry { dim_vector: dv, action: w.actions().to_vec(), label });
    Ok((caches.canon.len() - 1, Mat::identity(w.p(), w.dim())))
}

pub fn format_dim_vector(dv: &[usize], index: usize) -> String {
    let inner: Vec<String> = dv.iter().map(|d| d.to_string()).collect();
    if index == 0 {
        format!("({})", inner.join(","))
    } else {
        format!("({})#{}", inner.join(","), index + 1)
    }
}

/// The canonical representative with the given index.
pub fn canonical_module(alg: &std::sync::Arc<crate::algebra::Algebra>, id: usize) -> Module {
    let e = alg.caches.lock().unwrap().canon[id].clone();
    let dim = e.action.first().map_or(0, |m| m.rows());
    Module::with_parts(alg, dim, e.action, vec![Part { size: dim, canon: Some(id) }])
}

pub fn canonical_label(alg: &std::sync::Arc<crate::algebra::Algebra>, id: usize) -> String {
    alg.caches.lock().unwrap().canon[id].label.clone()
}

#[derive(Clone, Debug)]
pub struct Summand {
    /// Canonical representative.
    pub module: Module,
    pub canon: usize,
    /// `W -> X`.
    pub inclusion: Mat,
    /// `X -> W`.
    pub projection: Mat,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

impl Decomposition {
    /// Iso classes with multiplicities, in order of first appearance.
    pub fn multiplicities(&self) -> Vec<(Module, usize)> {
        let mut out: Vec<(usize, Module, usize)> = Vec::new();
        for s in &self.summands {
            if let Some(e) = out.iter_mut().find(|e| e.0 == s.canon) {
                e.2 += 1;
            } else {
                out.push((s.canon, s.module.clone(), 1));
            }
        }
        out.into_iter().map(|(_, m, k)| (m, k)).collect()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Dimension vectors of the summands, sorted.
    pub fn dim_vectors(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.summands.iter().map(|s| s.module.dim_vector()).collect();
        v.sort();
        v
    }
}

/// Complete decomposition into indecomposables, ordered by canonical index.
pub fn decompose(x: &Module) -> Result<Decomposition> {
    let p = x.p();
    if let (Some(parts), Some(offs)) = (x.parts(), x.part_offsets()) {
        if parts.iter().all(|pt| pt.canon.is_some()) {
            let summands = parts
                .iter()
                .zip(offs)
                .map(|(pt, off)| {
                    let id = pt.canon.unwrap();
                    let mut inclusion = Mat::zeros(p, pt.size, x.dim());
                    inclusion.set_block(0, off, &Mat::identity(p, pt.size));
                    Summand {
                        module: canonical_module(x.algebra(), id),
                        canon: id,
                        projection: inclusion.transpose(),
                        inclusion,
                    }
                })
                .collect();
            return Ok(Decomposition { summands });
        }
    }
    let raw = split_raw(x)?;
    let mut rows = Mat::zeros(p, 0, x.dim());
    for (_, incl) in &raw {
        rows = rows.vstack(incl);
    }
    let t_inv = rows.inverse().ok_or_else(|| {
        crate::error::Error::Invariant("summands do not span the module".into())
    })?;
    let mut summands = Vec::new();
    let mut off = 0;
    for (w, incl) in &raw {
        let (id, h) = canonicalize(w)?;
        let h_inv = h.inverse().expect("canonical iso");
        let proj_w = t_inv.block(0, x.dim(), off, w.dim());
        off += w.dim();
        summands.push(Summand {
            module: canonical_module(x.algebra(), id),
            canon: id,
            inclusion: h_inv.mul(incl),
            projection: proj_w.mul(&h),
        });
    }
    summands.sort_by_key(|s| s.canon);
    Ok(Decomposition { summands })
}

/// `X` rewritten as a direct sum of canonical representatives, with the
/// isomorphism `X -> X'` and its inverse.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub module: Module,
    pub iso: Mat,
    pub inv: Mat,
}

pub fn normalize(x: &Module) -> Result<Normalized> {
    let p = x.p();
    if x.parts().is_some_and(|ps| ps.iter().all(|pt| pt.canon.is_some())) {
        let id = Mat::identity(p, x.dim());
        return Ok(Normalized { module: x.clone(), iso: id.clone(), inv: id });
    }
    if x.dim() == 0 {
        return Ok(Normalized { module: Module::zero(x.algebra()), iso: Mat::zeros(p, 0, 0), inv: Mat::zeros(p, 0, 0) });
    }
    let dec = decompose(x)?;
    let mods: Vec<Module> = dec.summands.iter().map(|s| s.module.clone()).collect();
    let module = Module::direct_sum(&mods);
    let projs: Vec<Mat> = dec.summands.iter().map(|s| s.projection.clone()).collect();
    let mut iso = Mat::zeros(p, x.dim(), 0);
    for pm in &projs {
        iso = iso.hstack(pm);
    }
    let incs: Vec<Mat> = dec.summands.iter().map(|s| s.inclusion.clone()).collect();
    let inv = Mat::vstack_all(p, x.dim(), &incs);
    Ok(Normalized { module, iso, inv })
}

pub fn is_indecomposable(x: &Module) -> Result<bool> {
    if x.dim() == 0 {
        return Ok(false);
    }
    if x.parts().is_some_and(|ps| ps.len() == 1 && ps[0].canon.is_some()) {
        return Ok(true);
    }
    Ok(analyze_end(x)?.local)
}

/// Whether two modules are isomorphic (via their decompositions).
pub fn isomorphic(x: &Module, y: &Module) -> Result<bool> {
    if x.dim() != y.dim() || x.dim_vector() != y.dim_vector() {
        return Ok(false);
    }
    let mut a: Vec<usize> = decompose(x)?.summands.iter().map(|s| s.canon).collect();
    let mut b: Vec<usize> = decompose(y)?.summands.iter().map(|s| s.canon).collect();
    a.sort();
    b.sort();
    Ok(a == b)
}

/// An explicit isomorphism `x -> y`, if one exists.
pub fn find_iso(x: &Module, y: &Module) -> Result<Option<Mat>> {
    if !isomorphic(x, y)? {
        return Ok(None);
    }
    let nx = normalize(x)?;
    let ny = normalize(y)?;
    // Both normalized modules list the same canonical blocks in the same
    // sorted order, so they are literally equal.
    Ok(Some(nx.iso.mul(&ny.inv)))
}

/// The radical of `End(X)` for an indecomposable `X`.
pub fn end_radical(x: &Module) -> Result<Vec<Mat>> {
    let an = analyze_end(x)?;
    if !an.local {
        return invariant("end_radical needs an indecomposable module");
    }
    Ok(an.radical)
}

/// Scalar helper: `a / b` in `F_p`.
pub fn field_div(a: u32, b: u32, p: u32) -> u32 {
    (a as u64 * inv(b, p) as u64 % p as u64) as u32
}

/// `x^e` in `F_p`.
pub fn field_pow(x: u32, e: u32, p: u32) -> u32 {
    pow_mod(x, e, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn simple_is_indecomposable() {
        let a = zoo::a2(3);
        let s = Module::vertex_top(&a, 0);
        let d = decompose(&s).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.multiplicities()[0].1, 1);
    }

    #[test]
    fn square_has_one_class_with_multiplicity_two() {
        let a = zoo::kronecker(2);
        let x = zoo::kronecker_preprojective(&a, 2);
        let d = decompose(&x.power(2)).unwrap();
        let m = d.multiplicities();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].1, 2);
        assert_eq!(m[0].0.dim_vector(), vec![2, 3]);
    }

    #[test]
    fn kronecker_regular_module_splits_into_projectives() {
        let a = zoo::kronecker(2);
        let d = decompose(&Module::regular(&a)).unwrap();
        assert_eq!(d.dim_vectors(), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn witnesses_compose_correctly() {
        let a = zoo::a3(5);
        let x = Module::regular(&a).direct_sum2(&Module::vertex_top(&a, 1));
        let d = decompose(&x).unwrap();
        let n = x.dim();
        let mut total = Mat::zeros(5, n, n);
        for (i, si) in d.summands.iter().enumerate() {
            assert!(si.module.is_hom_to(&x, &si.inclusion));
            assert!(x.is_hom_to(&si.module, &si.projection));
            for (j, sj) in d.summands.iter().enumerate() {
                let c = si.inclusion.mul(&sj.projection);
                if i == j {
                    assert_eq!(c, Mat::identity(5, si.module.dim()));
                } else {
                    assert!(c.is_zero());
                }
            }
            total = total.add(&si.projection.mul(&si.inclusion));
        }
        assert_eq!(total, Mat::identity(5, n));
    }

    #[test]
    fn local_endomorphism_rings_over_larger_primes() {
        let a = zoo::truncated(7, 3);
        for m in 1..=3 {
            let x = zoo::truncated_module(&a, m);
            let an = analyze_end(&x).unwrap();
            assert!(an.local);
            assert_eq!(an.radical.len(), m - 1);
        }
    }

    #[test]
    fn matrix_block_plus_a_corner_is_not_local() {
        // End((3,4)^2 + (1,0)) has a non-nilpotent commutator ideal while
        // End/C is a field.
        let a = zoo::kronecker(3);
        let m = zoo::kronecker_preprojective(&a, 3).power(2).direct_sum2(&Module::vertex_top(&a, 0)).without_parts();
        let d = decompose(&m).unwrap();
        let mut dims = d.dim_vectors();
        dims.sort();
        assert_eq!(dims, vec![vec![1, 0], vec![3, 4], vec![3, 4]]);
    }

    #[test]
    fn normalization_identifies_isomorphic_copies() {
        let a = zoo::kronecker(3);
        let x = zoo::kronecker_preprojective(&a, 1);
        // A conjugated copy of x.
        let t = Mat::from_rows(3, &[vec![1, 1, 0], vec![0, 1, 0], vec![2, 0, 1]]);
        let y = x.conjugate(&t, &t.inverse().unwrap());
        assert!(isomorphic(&x, &y).unwrap());
        let iso = find_iso(&x, &y).unwrap().unwrap();
        assert!(x.is_hom_to(&y, &iso));
        assert!(iso.is_invertible());
    }
}
