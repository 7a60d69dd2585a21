//! Right modules given by action matrices, and their homomorphisms.
//!
//! Elements are row vectors and `x * a = x * M_a`. A homomorphism
//! `f: X -> Y` is a `dim X x dim Y` matrix `F` with `F * M^Y_a = M^X_a * F`;
//! "f then g" is the product `F * G`.

use std::sync::{Arc, OnceLock};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{rowspace, Mat};

/// A block of a certified direct-sum decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub size: usize,
    /// Index into the algebra's registry of canonical indecomposables, if
    /// the block's action is literally the canonical one.
    pub canon: Option<usize>,
}

/// Raw data of a canonical indecomposable, stored inside the algebra.
#[derive(Clone, Debug)]
pub struct CanonEntry {
    pub dim_vector: Vec<usize>,
    pub action: Vec<Mat>,
    pub label: String,
}

pub(crate) struct ModuleData {
    alg: Arc<Algebra>,
    dim: usize,
    action: Vec<Mat>,
    parts: Option<Vec<Part>>,
    cover: OnceLock<Cover>,
    views: OnceLock<Vec<Module>>,
}

#[derive(Clone)]
pub struct Module(Arc<ModuleData>);

impl std::fmt::Debug for Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Module{:?}", self.dim_vector())
    }
}

/// Minimal projective presentation data of a module.
#[derive(Clone)]
pub struct Cover {
    /// Vertex of each top generator.
    pub vertices: Vec<usize>,
    /// Generator vectors in the module.
    pub generators: Mat,
    /// Basis of `e_v A` (rows are algebra elements) per generator.
    pub bases: Vec<Mat>,
    pub projective: Module,
    /// `P -> X`.
    pub epi: Mat,
    /// Linear section `X -> P` with `section * epi = id`.
    pub section: Mat,
    /// Module generators of the kernel, in coordinates of `P`.
    pub relations: Mat,
}

impl Module {
    /// Build from action matrices without checking the module axioms.
    pub fn new_unchecked(alg: &Arc<Algebra>, dim: usize, action: Vec<Mat>) -> Module {
        debug_assert_eq!(action.len(), alg.dim());
        Module(Arc::new(ModuleData { alg: alg.clone(), dim, action, parts: None, cover: OnceLock::new(), views: OnceLock::new() }))
    }

    pub(crate) fn with_parts(alg: &Arc<Algebra>, dim: usize, action: Vec<Mat>, parts: Vec<Part>) -> Module {
        debug_assert_eq!(parts.iter().map(|p| p.size).sum::<usize>(), dim);
        Module(Arc::new(ModuleData {
            alg: alg.clone(),
            dim,
            action,
            parts: Some(parts),
            cover: OnceLock::new(),
            views: OnceLock::new(),
        }))
    }

    /// Build from action matrices, checking the unit law and the
    /// multiplication table.
    pub fn new(alg: &Arc<Algebra>, action: Vec<Mat>) -> Result<Module> {
        if action.len() != alg.dim() {
            return Err(Error::Input(format!(
                "expected {} action matrices, got {}",
                alg.dim(),
                action.len()
            )));
        }
        let dim = action.first().map_or(0, |m| m.rows());
        for m in &action {
            if m.shape() != (dim, dim) || m.p() != alg.p() {
                return Err(Error::Input("action matrices must be square of equal size over F_p".into()));
            }
        }
        let m = Module::new_unchecked(alg, dim, action);
        m.check_axioms()?;
        Ok(m)
    }

    pub fn check_axioms(&self) -> Result<()> {
        let alg = self.algebra();
        if self.act(alg.unit()) != Mat::identity(alg.p(), self.dim()) {
            return Err(Error::Input("unit does not act as the identity".into()));
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = self.0.action[i].mul(&self.0.action[j]);
                let prod = alg.right_mult(j).row(i).to_vec();
                if lhs != self.act(&prod) {
                    return Err(Error::Input(format!("action fails on the product b_{i} b_{j}")));
                }
            }
        }
        Ok(())
    }

    /// Module from a quiver representation: one space per vertex and one
    /// matrix per arrow (`dim at src x dim at tgt`).
    pub fn from_representation(alg: &Arc<Algebra>, dims: &[usize], arrows: &[Mat]) -> Result<Module> {
        let qd = alg
            .quiver()
            .ok_or_else(|| Error::Input("algebra has no quiver presentation".into()))?;
        let q = &qd.quiver;
        if dims.len() != q.vertices.len() || arrows.len() != q.arrows.len() {
            return Err(Error::Input("representation does not match the quiver".into()));
        }
        let p = alg.p();
        let n: usize = dims.iter().sum();
        let offs: Vec<usize> = dims.iter().scan(0, |s, &d| { let o = *s; *s += d; Some(o) }).collect();
        let vidx = |name: &str| q.vertices.iter().position(|v| v == name).unwrap();
        let mut arrow_mats = Vec::new();
        for (a, m) in q.arrows.iter().zip(arrows) {
            let (s, t) = (vidx(&a.src), vidx(&a.tgt));
            if m.shape() != (dims[s], dims[t]) {
                return Err(Error::Input(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.name, dims[s], dims[t], m.rows(), m.cols()
                )));
            }
            let mut big = Mat::zeros(p, n, n);
            big.set_block(offs[s], offs[t], m);
            arrow_mats.push(big);
        }
        let mut action = Vec::with_capacity(alg.dim());
        for path in &qd.paths {
            if path.arrows.is_empty() {
                let v = path.start;
                let mut e = Mat::zeros(p, n, n);
                e.set_block(offs[v], offs[v], &Mat::identity(p, dims[v]));
                action.push(e);
            } else {
                let mut m = arrow_mats[path.arrows[0]].clone();
                for &a in &path.arrows[1..] {
                    m = m.mul(&arrow_mats[a]);
                }
                action.push(m);
            }
        }
        let m = Module::new_unchecked(alg, n, action);
        m.check_axioms()
            .map_err(|_| Error::Input("representation does not satisfy the relations".into()))?;
        Ok(m)
    }

    pub fn zero(alg: &Arc<Algebra>) -> Module {
        let p = alg.p();
        Module::with_parts(alg, 0, vec![Mat::zeros(p, 0, 0); alg.dim()], vec![])
    }

    /// The right regular module `A_A`.
    pub fn regular(alg: &Arc<Algebra>) -> Module {
        Module::new_unchecked(alg, alg.dim(), (0..alg.dim()).map(|j| alg.right_mult(j).clone()).collect())
    }

    /// The indecomposable projective `e_v A` together with its basis (rows
    /// are algebra elements in reduced echelon form).
    pub fn vertex_projective(alg: &Arc<Algebra>, v: usize) -> (Module, Mat) {
        let basis = alg.left_mult_by(&alg.idempotents()[v]).row_basis();
        let m = Module::regular(alg).submodule_unchecked(&basis);
        (m, basis)
    }

    /// Simple top of `e_v A`.
    pub fn vertex_top(alg: &Arc<Algebra>, v: usize) -> Module {
        let (pv, _) = Module::vertex_projective(alg, v);
        let rad = pv.radical_submodule();
        pv.quotient(&rad).0
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.0.alg
    }
    pub fn p(&self) -> u32 {
        self.0.alg.p()
    }
    pub fn dim(&self) -> usize {
        self.0.dim
    }
    pub fn is_zero(&self) -> bool {
        self.0.dim == 0
    }
    pub fn action(&self, i: usize) -> &Mat {
        &self.0.action[i]
    }
    pub fn actions(&self) -> &[Mat] {
        &self.0.action
    }
    pub fn parts(&self) -> Option<&[Part]> {
        self.0.parts.as_deref()
    }
    pub fn ptr_eq(&self, other: &Module) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Forget any recorded decomposition.
    pub fn without_parts(&self) -> Module {
        Module::new_unchecked(self.algebra(), self.dim(), self.0.action.clone())
    }

    /// Offsets of the recorded blocks.
    pub fn part_offsets(&self) -> Option<Vec<usize>> {
        self.parts().map(|ps| {
            ps.iter()
                .scan(0, |s, p| {
                    let o = *s;
                    *s += p.size;
                    Some(o)
                })
                .collect()
        })
    }

    /// The recorded block `i` as a module of its own.
    pub fn part_module(&self, i: usize) -> Module {
        let parts = self.parts().expect("module has no recorded parts");
        let off = self.part_offsets().unwrap()[i];
        let size = parts[i].size;
        let action = self.0.action.iter().map(|m| m.block(off, size, off, size)).collect();
        Module::with_parts(self.algebra(), size, action, vec![parts[i].clone()])
    }

    /// `(offset, size)` of each recorded block, or the whole module as one
    /// block if none are recorded.
    pub fn block_ranges(&self) -> Vec<(usize, usize)> {
        match self.parts() {
            Some(ps) => {
                let mut off = 0;
                ps.iter()
                    .map(|p| {
                        let r = (off, p.size);
                        off += p.size;
                        r
                    })
                    .collect()
            }
            None => vec![(0, self.dim())],
        }
    }

    /// The blocks of [`Module::block_ranges`] as modules (cached).
    pub fn block_modules(&self) -> Vec<Module> {
        match self.parts() {
            Some(ps) if ps.len() != 1 => {
                self.0.views.get_or_init(|| (0..ps.len()).map(|i| self.part_module(i)).collect()).clone()
            }
            // A single block is the module itself; caching it would make a cycle.
            _ => vec![self.clone()],
        }
    }

    /// Matrix by which an arbitrary algebra element acts.
    pub fn act(&self, a: &[u32]) -> Mat {
        let mut out = Mat::zeros(self.p(), self.dim(), self.dim());
        for (m, &c) in self.0.action.iter().zip(a) {
            if c != 0 {
                out.add_scaled(m, c);
            }
        }
        out
    }

    pub fn same_algebra(&self, other: &Module) -> bool {
        self.algebra().same_as(other.algebra())
    }

    fn require_same(&self, other: &Module) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// `dim(X e_v)` for every vertex.
    pub fn dim_vector(&self) -> Vec<usize> {
        let alg = self.algebra();
        alg.idempotents().iter().map(|e| self.act(e).rank()).collect()
    }

    /// Whether `m` (`dim self x dim other`) is a module homomorphism.
    pub fn is_hom_to(&self, other: &Module, m: &Mat) -> bool {
        if m.shape() != (self.dim(), other.dim()) {
            return false;
        }
        let alg = self.algebra();
        alg.generators()
            .iter()
            .all(|&g| m.mul(other.action(g)) == self.action(g).mul(m))
    }

    /// Direct sum; blocks are kept if every summand has them.
    pub fn direct_sum(mods: &[Module]) -> Module {
        assert!(!mods.is_empty(), "direct sum of nothing");
        let alg = mods[0].algebra().clone();
        let p = alg.p();
        let dim = mods.iter().map(|m| m.dim()).sum();
        let action = (0..alg.dim())
            .map(|i| {
                let blocks: Vec<Mat> = mods.iter().map(|m| m.action(i).clone()).collect();
                Mat::block_diag_all(p, &blocks)
            })
            .collect();
        if mods.iter().all(|m| m.parts().is_some()) {
            let parts = mods.iter().flat_map(|m| m.parts().unwrap().to_vec()).collect();
            Module::with_parts(&alg, dim, action, parts)
        } else {
            Module::new_unchecked(&alg, dim, action)
        }
    }

    pub fn direct_sum2(&self, other: &Module) -> Module {
        Module::direct_sum(&[self.clone(), other.clone()])
    }

    /// `X^n`.
    pub fn power(&self, n: usize) -> Module {
        if n == 0 {
            return Module::zero(self.algebra());
        }
        Module::direct_sum(&vec![self.clone(); n])
    }

    /// Smallest submodule containing the rows of `gens`, as reduced rows.
    pub fn generated_submodule(&self, gens: &Mat) -> Mat {
        let mut basis = gens.row_basis();
        loop {
            let mut grown = basis.clone();
            for &g in self.algebra().generators() {
                grown = grown.vstack(&basis.mul(self.action(g)));
            }
            let next = grown.row_basis();
            if next.rows() == basis.rows() {
                return basis;
            }
            basis = next;
        }
    }

    /// `X * rad A`, as reduced rows.
    pub fn radical_submodule(&self) -> Mat {
        let alg = self.algebra();
        let rad = alg.radical();
        let mut rows = Mat::zeros(self.p(), 0, self.dim());
        for r in 0..rad.rows() {
            rows = rows.vstack(&self.act(rad.row(r)));
        }
        rows.row_basis()
    }

    /// Submodule spanned by the rows of `basis`, which must be invariant.
    /// The rows are put in reduced form; the returned inclusion has them as
    /// its rows.
    pub fn submodule(&self, basis: &Mat) -> Result<(Module, Mat)> {
        let b = basis.row_basis();
        for &g in self.algebra().generators() {
            if !rowspace::contains(&b, &b.mul(self.action(g))) {
                return Err(Error::Input("subspace is not a submodule".into()));
            }
        }
        Ok((self.submodule_unchecked(&b), b))
    }

    /// Module structure on an invariant subspace given by reduced rows.
    pub(crate) fn submodule_unchecked(&self, b: &Mat) -> Module {
        let (rb, piv) = b.rref();
        debug_assert_eq!(&rb.block(0, piv.len(), 0, b.cols()), b, "rows must be reduced");
        let action = self.0.action.iter().map(|m| b.mul(m).select_cols(&piv)).collect();
        Module::new_unchecked(self.algebra(), b.rows(), action)
    }

    /// Quotient by an invariant subspace. Returns the module, the projection
    /// `X -> X/S` and a linear section.
    pub fn quotient(&self, sub: &Mat) -> (Module, Mat, Mat) {
        let (proj, section) = rowspace::quotient(sub, self.dim());
        let action = self.0.action.iter().map(|m| section.mul(m).mul(&proj)).collect();
        (Module::new_unchecked(self.algebra(), proj.cols(), action), proj, section)
    }

    /// Kernel of a homomorphism as a submodule, with its inclusion.
    pub fn hom_kernel(&self, f: &Mat) -> (Module, Mat) {
        let k = f.left_kernel().row_basis();
        (self.submodule_unchecked(&k), k)
    }

    /// Image of a homomorphism out of `self` inside `target`.
    pub fn hom_image(target: &Module, f: &Mat) -> (Module, Mat) {
        let im = f.row_basis();
        (target.submodule_unchecked(&im), im)
    }

    /// Cokernel of `f: X -> self`.
    pub fn hom_cokernel(&self, f: &Mat) -> (Module, Mat, Mat) {
        self.quotient(&f.row_basis())
    }

    /// Minimal projective cover with presentation data (cached).
    pub fn cover(&self) -> &Cover {
        self.0.cover.get_or_init(|| compute_cover(self))
    }

    pub fn is_projective(&self) -> bool {
        self.cover().projective.dim() == self.dim()
    }

    /// Radical top generators count per vertex.
    pub fn top_vector(&self) -> Vec<usize> {
        let mut t = vec![0; self.algebra().vertex_count()];
        for &v in &self.cover().vertices {
            t[v] += 1;
        }
        t
    }

    /// The module given by transporting `self` along an isomorphism of
    /// vector spaces: `iso` is `dim self x dim self`, invertible, and the new
    /// action is `iso^-1 M iso`.
    pub fn conjugate(&self, iso: &Mat, inv: &Mat) -> Module {
        let action = self.0.action.iter().map(|m| inv.mul(m).mul(iso)).collect();
        Module::new_unchecked(self.algebra(), self.dim(), action)
    }

    /// Restriction of scalars along an algebra map given by the images of
    /// basis elements (`images[i]` is the image of `b_i` in this module's
    /// algebra).
    pub fn restrict(&self, target_alg: &Arc<Algebra>, images: &[Vec<u32>]) -> Module {
        let action = images.iter().map(|a| self.act(a)).collect();
        Module::new_unchecked(target_alg, self.dim(), action)
    }
}

fn compute_cover(x: &Module) -> Cover {
    let alg = x.algebra().clone();
    let p = alg.p();
    let n = x.dim();
    let mut span = x.radical_submodule();
    let mut vertices = Vec::new();
    let mut gens = Mat::zeros(p, 0, n);
    for (v, e) in alg.idempotents().iter().enumerate() {
        let xe = x.act(e).row_basis();
        for r in 0..xe.rows() {
            let cand = xe.select_rows(&[r]);
            if rowspace::contains(&span, &cand) {
                continue;
            }
            vertices.push(v);
            gens = gens.vstack(&cand);
            let grown = x.generated_submodule(&cand);
            span = rowspace::sum(&span, &grown);
        }
    }
    let mut bases = Vec::new();
    let mut proj_parts = Vec::new();
    let mut epi_rows = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        let (pv, basis) = Module::vertex_projective(&alg, v);
        let g = gens.select_rows(&[i]);
        for r in 0..basis.rows() {
            epi_rows.push(g.mul(&x.act(basis.row(r))));
        }
        bases.push(basis);
        proj_parts.push(pv);
    }
    let projective = if proj_parts.is_empty() {
        Module::zero(&alg)
    } else {
        Module::direct_sum(&proj_parts)
    };
    let epi = Mat::vstack_all(p, n, &epi_rows);
    let section = if n == 0 {
        Mat::zeros(p, 0, projective.dim())
    } else {
        epi.solve_left(&Mat::identity(p, n))
            .expect("shapes agree")
            .expect("cover is surjective")
    };
    // Kernel generators modulo kernel * rad.
    let kernel = epi.left_kernel().row_basis();
    let relations = if kernel.rows() == 0 {
        kernel
    } else {
        let omega = projective.submodule_unchecked(&kernel);
        let rad = omega.radical_submodule().mul(&kernel);
        let picked = rowspace::extend(&rad, &kernel);
        kernel.select_rows(&picked)
    };
    Cover { vertices, generators: gens, bases, projective, epi, section, relations }
}

/// A space of homomorphisms, stored as reduced flattened matrices so that
/// coordinates of a member are read off at the pivot positions.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub rows: usize,
    pub cols: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl HomSpace {
    pub fn from_matrices(p: u32, rows: usize, cols: usize, mats: &[Mat]) -> HomSpace {
        let flat: Vec<Mat> = mats.iter().map(|m| m.flatten()).collect();
        let stacked = Mat::vstack_all(p, rows * cols, &flat);
        let (r, piv) = stacked.rref();
        let basis = r.block(0, piv.len(), 0, rows * cols);
        HomSpace { rows, cols, basis, pivots: piv }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn element(&self, i: usize) -> Mat {
        Mat::from_vec(self.basis.p(), self.rows, self.cols, self.basis.row(i).to_vec())
    }

    pub fn elements(&self) -> Vec<Mat> {
        (0..self.dim()).map(|i| self.element(i)).collect()
    }

    /// Flattened basis, one row per element.
    pub fn flat_basis(&self) -> &Mat {
        &self.basis
    }

    /// Coordinates of `f`, or `None` if `f` is not in the space.
    pub fn coords(&self, f: &Mat) -> Option<Vec<u32>> {
        let flat = f.flatten();
        let c: Vec<u32> = self.pivots.iter().map(|&j| flat.get(0, j)).collect();
        let back = Mat::row_vector(self.basis.p(), &c).mul(&self.basis);
        (back == flat).then_some(c)
    }

    pub fn combine(&self, c: &[u32]) -> Mat {
        Mat::row_vector(self.basis.p(), c).mul(&self.basis).reshape(self.rows, self.cols)
    }
}

/// Basis of `Hom_A(X, Y)`.
pub fn hom_space(x: &Module, y: &Module) -> Result<HomSpace> {
    x.require_same(y)?;
    let mats = hom_basis(x, y);
    Ok(HomSpace::from_matrices(x.p(), x.dim(), y.dim(), &mats))
}

/// Unreduced basis of `Hom_A(X, Y)`. Modules with recorded blocks are
/// handled block by block.
pub fn hom_basis(x: &Module, y: &Module) -> Vec<Mat> {
    if x.dim() == 0 || y.dim() == 0 {
        return Vec::new();
    }
    let (bx, by) = (x.block_ranges(), y.block_ranges());
    if bx.len() > 1 || by.len() > 1 {
        let (mx, my) = (x.block_modules(), y.block_modules());
        let mut out = Vec::new();
        for (a, &(ox, _)) in bx.iter().enumerate() {
            for (b, &(oy, _)) in by.iter().enumerate() {
                for h in block_hom(&mx[a], &my[b]).iter() {
                    let mut m = Mat::zeros(x.p(), x.dim(), y.dim());
                    m.set_block(ox, oy, h);
                    out.push(m);
                }
            }
        }
        return out;
    }
    presented_hom_basis(x, y)
}

fn presented_hom_basis(x: &Module, y: &Module) -> Vec<Mat> {
    let p = x.p();
    let cov = x.cover();
    let alg = x.algebra();
    // Unknowns: y_i = c_i * B_i with B_i a basis of Y e_{v_i}.
    let bases_y: Vec<Mat> = cov.vertices.iter().map(|&v| y.act(&alg.idempotents()[v]).row_basis()).collect();
    let nunk: usize = bases_y.iter().map(|b| b.rows()).sum();
    if nunk == 0 {
        return Vec::new();
    }
    let offs_p: Vec<usize> = cov.bases.iter().scan(0, |s, b| { let o = *s; *s += b.rows(); Some(o) }).collect();
    // Coefficient matrix: rows = unknowns, columns = (relation, Y coordinate).
    let nrel = cov.relations.rows();
    let mut coeff = Mat::zeros(p, nunk, nrel * y.dim());
    for k in 0..nrel {
        let mut row_off = 0;
        for (i, basis) in cov.bases.iter().enumerate() {
            let ki = cov.relations.block(k, 1, offs_p[i], basis.rows());
            let w = ki.mul(basis);
            if !w.is_zero() {
                let block = bases_y[i].mul(&y.act(w.row(0)));
                coeff.set_block(row_off, k * y.dim(), &block);
            }
            row_off += bases_y[i].rows();
        }
    }
    let sols = coeff.left_kernel();
    let mut out = Vec::with_capacity(sols.rows());
    for s in 0..sols.rows() {
        // Psi: P -> Y, row (i, t) = y_i * M^Y_{u_{i,t}}.
        let mut psi_rows = Vec::new();
        let mut off = 0;
        for (i, basis) in cov.bases.iter().enumerate() {
            let ci = sols.block(s, 1, off, bases_y[i].rows());
            off += bases_y[i].rows();
            let yi = ci.mul(&bases_y[i]);
            for t in 0..basis.rows() {
                psi_rows.push(yi.mul(&y.act(basis.row(t))));
            }
        }
        let psi = Mat::vstack_all(p, y.dim(), &psi_rows);
        out.push(cov.section.mul(&psi));
    }
    out
}

fn single_canon(m: &Module) -> Option<usize> {
    match m.parts() {
        Some([part]) => part.canon,
        _ => None,
    }
}

/// Basis of `Hom(X, Y)` for single blocks, cached for canonical pairs.
pub(crate) fn block_hom(x: &Module, y: &Module) -> Arc<Vec<Mat>> {
    let alg = x.algebra();
    if let (Some(ca), Some(cb)) = (single_canon(x), single_canon(y)) {
        if let Some(h) = alg.caches.lock().unwrap().hom.get(&(ca, cb)) {
            return h.clone();
        }
        let basis = Arc::new(hom_basis(x, y));
        alg.caches.lock().unwrap().hom.insert((ca, cb), basis.clone());
        return basis;
    }
    Arc::new(hom_basis(x, y))
}

/// Coefficients `c` with `sum c_i terms_i = target`.
fn solve_combination(p: u32, terms: &[Mat], target: &Mat) -> Option<Vec<u32>> {
    if target.is_zero() {
        return Some(vec![0; terms.len()]);
    }
    if terms.is_empty() {
        return None;
    }
    let n = target.rows() * target.cols();
    let rows: Vec<Mat> = terms.iter().map(|t| t.flatten()).collect();
    let a = Mat::vstack_all(p, n, &rows);
    let c = a.solve_left(&target.flatten()).ok()??;
    Some(c.row(0).to_vec())
}

/// Whether `f: X -> Y` factors through a projective module.
pub fn stably_zero(x: &Module, y: &Module, f: &Mat) -> bool {
    // f factors through a projective iff it lifts along the cover P(Y) -> Y.
    let cov = y.cover();
    factor_through(x, &cov.projective, &cov.epi, f).is_some()
}

/// Some `h: X -> W` with `h * g = f`, where `g: W -> Y`, or `None`.
pub fn factor_through(x: &Module, w: &Module, g: &Mat, f: &Mat) -> Option<Mat> {
    let p = x.p();
    let mut h = Mat::zeros(p, x.dim(), w.dim());
    if x.dim() == 0 || f.is_zero() {
        return Some(h);
    }
    let (wr, wm) = (w.block_ranges(), w.block_modules());
    // Split along the blocks of X: each block's rows factor separately.
    for (xa, &(oa, sa)) in x.block_modules().iter().zip(&x.block_ranges()) {
        let target = f.block(oa, sa, 0, f.cols());
        if target.is_zero() {
            continue;
        }
        let mut terms = Vec::new();
        let mut embed = Vec::new();
        for (wc, &(oc, sc)) in wm.iter().zip(&wr) {
            let gc = g.block(oc, sc, 0, g.cols());
            for b in block_hom(xa, wc).iter() {
                terms.push(b.mul(&gc));
                embed.push((oc, b.clone()));
            }
        }
        let c = solve_combination(p, &terms, &target)?;
        for (ci, (oc, b)) in c.iter().zip(&embed) {
            if *ci != 0 {
                let mut piece = Mat::zeros(p, sa, w.dim());
                piece.set_block(0, *oc, &b.scale(*ci));
                let cur = h.block(oa, sa, 0, w.dim());
                h.set_block(oa, 0, &cur.add(&piece));
            }
        }
    }
    Some(h)
}

/// Some `h: W -> Y` with `g * h = f`, where `g: X -> W`, or `None`.
pub fn factor_from(w: &Module, y: &Module, g: &Mat, f: &Mat) -> Option<Mat> {
    let p = y.p();
    let mut h = Mat::zeros(p, w.dim(), y.dim());
    if y.dim() == 0 || f.is_zero() {
        return Some(h);
    }
    let (wr, wm) = (w.block_ranges(), w.block_modules());
    // Split along the blocks of Y: each block's columns factor separately.
    for (yb, &(ob, sb)) in y.block_modules().iter().zip(&y.block_ranges()) {
        let target = f.block(0, f.rows(), ob, sb);
        if target.is_zero() {
            continue;
        }
        let mut terms = Vec::new();
        let mut embed = Vec::new();
        for (wc, &(oc, sc)) in wm.iter().zip(&wr) {
            let gc = g.block(0, g.rows(), oc, sc);
            for b in block_hom(wc, yb).iter() {
                terms.push(gc.mul(b));
                embed.push((oc, b.clone()));
            }
        }
        let c = solve_combination(p, &terms, &target)?;
        for (ci, (oc, b)) in c.iter().zip(&embed) {
            if *ci != 0 {
                let cur = h.block(*oc, b.rows(), ob, sb);
                h.set_block(*oc, ob, &cur.add(&b.scale(*ci)));
            }
        }
    }
    Some(h)
}

/// `dim Hom(X,Y) - dim PHom(X,Y)`, where `PHom` are the maps factoring
/// through projectives.
pub fn stable_hom_dim(x: &Module, y: &Module) -> Result<usize> {
    let h = hom_space(x, y)?;
    let cov = y.cover();
    // PHom(X, Y) = image of Hom(X, P(Y)) under composition with the cover.
    let through: Vec<Mat> = hom_basis(x, &cov.projective).iter().map(|m| m.mul(&cov.epi)).collect();
    let ph = HomSpace::from_matrices(x.p(), x.dim(), y.dim(), &through);
    Ok(h.dim() - ph.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn regular_module_dimension_vectors() {
        let a = zoo::kronecker(2);
        assert_eq!(Module::regular(&a).dim_vector(), vec![1, 3]);
        let (p1, _) = Module::vertex_projective(&a, 0);
        assert_eq!(p1.dim_vector(), vec![1, 2]);
    }

    #[test]
    fn schur_for_simples() {
        let a = zoo::kronecker(3);
        for v in 0..2 {
            let s = Module::vertex_top(&a, v);
            assert_eq!(hom_space(&s, &s).unwrap().dim(), 1);
        }
    }

    #[test]
    fn hom_into_zero_is_empty() {
        let a = zoo::kronecker(2);
        let x = Module::regular(&a);
        assert_eq!(hom_space(&x, &Module::zero(&a)).unwrap().dim(), 0);
    }

    #[test]
    fn hom_between_kronecker_projectives() {
        // dim Hom(e_2 A, e_1 A) = dim e_1 A e_2 = number of arrows.
        let a = zoo::kronecker(2);
        let (p2, _) = Module::vertex_projective(&a, 1);
        let (p1, _) = Module::vertex_projective(&a, 0);
        assert_eq!(p2.dim_vector(), vec![0, 1]);
        assert_eq!(hom_space(&p2, &p1).unwrap().dim(), 2);
        assert_eq!(hom_space(&p1, &p2).unwrap().dim(), 0);
    }

    #[test]
    fn identity_of_non_projective_is_not_stably_zero() {
        let a = zoo::kronecker(2);
        let s = Module::vertex_top(&a, 0);
        assert!(!stably_zero(&s, &s, &Mat::identity(2, 1)));
    }

    #[test]
    fn maps_into_projectives_are_stably_zero() {
        let a = zoo::kronecker(2);
        let x = Module::regular(&a);
        for h in hom_space(&x, &x).unwrap().elements() {
            assert!(stably_zero(&x, &x, &h));
        }
    }

    #[test]
    fn cover_of_simple() {
        let a = zoo::kronecker(2);
        let s = Module::vertex_top(&a, 0);
        assert_eq!(s.dim_vector(), vec![1, 0]);
        assert_eq!(s.cover().projective.dim_vector(), vec![1, 2]);
        assert_eq!(s.cover().relations.rows(), 2);
    }

    #[test]
    fn quotient_and_submodule_round_trip() {
        let a = zoo::kronecker(5);
        let x = Module::regular(&a);
        let rad = x.radical_submodule();
        let (q, proj, section) = x.quotient(&rad);
        assert_eq!(q.dim_vector(), vec![1, 1]);
        assert!(x.is_hom_to(&q, &proj));
        assert_eq!(section.mul(&proj), Mat::identity(5, 2));
        let (r, inc) = x.submodule(&rad).unwrap();
        assert!(r.is_hom_to(&x, &inc));
    }
}
