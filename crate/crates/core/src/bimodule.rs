//! Bimodules as modules over the enveloping algebra, the functors
//! `- (x)_A M`, duals of bimodules, and instance checks for stable
//! equivalences of Morita type.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::ar::{knit, nodes};
use crate::decompose::{decompose, is_indecomposable, isomorphic};
use crate::error::{invariant, precondition, Error, Result};
use crate::homological::{
    ext1_dim, indecomposable_projectives, injective_hull, nakayama, simple_modules, star,
};
use crate::kato::{dominant_dimension_at_least_one, in_l_window, kato_complex, ComplexWindow};
use crate::linalg::{rowspace, Mat};
use crate::module::{hom_space, Module};
use crate::seq::ShortExactSeq;

/// An `A`-`B`-bimodule. `lefts[i]` is `m -> a_i m` and `rights[j]` is
/// `m -> m b_j`, both in row convention; `module` is the same data over
/// `A^op (x) B`, where `(i, j)` acts as `lefts[i] * rights[j]`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    lefts: Vec<Mat>,
    rights: Vec<Mat>,
    module: Module,
}

impl Bimodule {
    pub fn from_actions(a: &Arc<Algebra>, b: &Arc<Algebra>, lefts: Vec<Mat>, rights: Vec<Mat>) -> Result<Bimodule> {
        if lefts.len() != a.dim() || rights.len() != b.dim() {
            return Err(Error::Input("one action matrix per basis element on each side".into()));
        }
        let n = lefts.first().or(rights.first()).map_or(0, |m| m.rows());
        if lefts.iter().chain(&rights).any(|m| m.shape() != (n, n)) {
            return Err(Error::Dimension("action matrices must all be square of the same size".into()));
        }
        for &i in a.generators() {
            for &j in b.generators() {
                if lefts[i].mul(&rights[j]) != rights[j].mul(&lefts[i]) {
                    return Err(Error::Input(format!("left action of a_{i} and right action of b_{j} do not commute")));
                }
            }
        }
        let env = Algebra::shared_envelope(a, b)?;
        let mut action = Vec::with_capacity(env.dim());
        for l in &lefts {
            for r in &rights {
                action.push(l.mul(r));
            }
        }
        let module = if n == 0 {
            Module::zero(&env)
        } else {
            Module::new(&env, action)?
        };
        Ok(Bimodule { left: a.clone(), right: b.clone(), lefts, rights, module })
    }

    /// `A` as an `A`-`A`-bimodule.
    pub fn regular(a: &Arc<Algebra>) -> Result<Bimodule> {
        let lefts = (0..a.dim()).map(|i| a.left_mult(i).clone()).collect();
        let rights = (0..a.dim()).map(|j| a.right_mult(j).clone()).collect();
        Bimodule::from_actions(a, a, lefts, rights)
    }

    /// `A (x)_k B` with `a (x) b` in position `i * dim B + j`.
    pub fn free(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Bimodule> {
        let p = a.p();
        let lefts = (0..a.dim()).map(|i| a.left_mult(i).kron(&Mat::identity(p, b.dim()))).collect();
        let rights = (0..b.dim()).map(|j| Mat::identity(p, a.dim()).kron(b.right_mult(j))).collect();
        Bimodule::from_actions(a, b, lefts, rights)
    }

    /// Row vectors `A^n` as an `A`-`M_n(A)`-bimodule; `b` must be
    /// `a.matrix_algebra(n)`.
    pub fn matrix_row(a: &Arc<Algebra>, b: &Arc<Algebra>, n: usize) -> Result<Bimodule> {
        let p = a.p();
        let d = a.dim();
        if b.dim() != n * n * d {
            return precondition("second algebra is not the n x n matrix algebra of the first");
        }
        let lefts = (0..d).map(|i| Mat::identity(p, n).kron(a.left_mult(i))).collect();
        let mut rights = Vec::with_capacity(b.dim());
        for r in 0..n {
            for s in 0..n {
                let mut unit = Mat::zeros(p, n, n);
                unit.set(r, s, 1);
                for l in 0..d {
                    rights.push(unit.kron(a.right_mult(l)));
                }
            }
        }
        Bimodule::from_actions(a, b, lefts, rights)
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left
    }
    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right
    }
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
    /// The module over the enveloping algebra.
    pub fn module(&self) -> &Module {
        &self.module
    }
    pub fn left_action(&self, i: usize) -> &Mat {
        &self.lefts[i]
    }
    pub fn right_action(&self, j: usize) -> &Mat {
        &self.rights[j]
    }

    /// `M_B`.
    pub fn as_right_module(&self) -> Module {
        Module::new_unchecked(&self.right, self.dim(), self.rights.clone())
    }

    /// `_A M` as a right module over `A^op`.
    pub fn as_left_module(&self) -> Module {
        Module::new_unchecked(&self.left.opposite(), self.dim(), self.lefts.clone())
    }

    /// For a `B`-`A`-bimodule, the `A^op`-`B^op`-bimodule on the same space.
    pub fn swap(&self) -> Result<Bimodule> {
        Bimodule::from_actions(&self.right.opposite(), &self.left.opposite(), self.rights.clone(), self.lefts.clone())
    }

    /// `D M = Hom_k(M, k)` as a `B`-`A`-bimodule.
    pub fn dual(&self) -> Result<Bimodule> {
        let lefts = self.rights.iter().map(Mat::transpose).collect();
        let rights = self.lefts.iter().map(Mat::transpose).collect();
        Bimodule::from_actions(&self.right, &self.left, lefts, rights)
    }
}

/// `X (x)_A M` with the quotient data used to compute induced maps:
/// `proj: X (x)_k M -> X (x)_A M` and a linear section of it.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub module: Module,
    pub proj: Mat,
    pub section: Mat,
}

/// Quotient of `F^u (x) F^v` by the rows of `U (x) 1 - 1 (x) V` over the
/// given pairs.
fn balanced_quotient(p: u32, du: usize, dv: usize, pairs: &[(&Mat, &Mat)]) -> (Mat, Mat) {
    let n = du * dv;
    let parts: Vec<Mat> = pairs
        .iter()
        .map(|(u, v)| u.kron(&Mat::identity(p, dv)).sub(&Mat::identity(p, du).kron(v)))
        .collect();
    let rel = Mat::vstack_all(p, n, &parts);
    rowspace::quotient(&rel.row_basis(), n)
}

pub fn tensor_right(x: &Module, m: &Bimodule) -> Result<Tensor> {
    if !x.algebra().same_as(&m.left) {
        return Err(Error::AlgebraMismatch);
    }
    let p = x.p();
    let (dx, dm) = (x.dim(), m.dim());
    let pairs: Vec<(&Mat, &Mat)> = m.left.generators().iter().map(|&g| (x.action(g), &m.lefts[g])).collect();
    let (proj, section) = balanced_quotient(p, dx, dm, &pairs);
    let id_x = Mat::identity(p, dx);
    let action = m.rights.iter().map(|r| section.mul(&id_x.kron(r)).mul(&proj)).collect();
    let module = Module::new_unchecked(&m.right, proj.cols(), action);
    Ok(Tensor { module, proj, section })
}

/// `f (x) M: X (x) M -> Y (x) M`.
pub fn tensor_map(tx: &Tensor, ty: &Tensor, f: &Mat, m: &Bimodule) -> Mat {
    tx.section.mul(&f.kron(&Mat::identity(f.p(), m.dim()))).mul(&ty.proj)
}

/// `s (x) M`; fails when the result is not exact.
pub fn tensor_sequence(s: &ShortExactSeq, m: &Bimodule) -> Result<ShortExactSeq> {
    let tx = tensor_right(&s.x, m)?;
    let ty = tensor_right(&s.y, m)?;
    let tz = tensor_right(&s.z, m)?;
    let f = tensor_map(&tx, &ty, &s.f, m);
    let g = tensor_map(&ty, &tz, &s.g, m);
    ShortExactSeq::new(tx.module, ty.module, tz.module, f, g)
}

/// `M (x)_B N` for an `A`-`B`-bimodule `M` and a `B`-`C`-bimodule `N`.
pub fn tensor_bimodules(m: &Bimodule, n: &Bimodule) -> Result<Bimodule> {
    if !m.right.same_as(&n.left) {
        return Err(Error::AlgebraMismatch);
    }
    let p = m.left.p();
    let (dm, dn) = (m.dim(), n.dim());
    let pairs: Vec<(&Mat, &Mat)> = m.right.generators().iter().map(|&g| (&m.rights[g], &n.lefts[g])).collect();
    let (proj, section) = balanced_quotient(p, dm, dn, &pairs);
    let (im, inn) = (Mat::identity(p, dm), Mat::identity(p, dn));
    let lefts = m.lefts.iter().map(|l| section.mul(&l.kron(&inn)).mul(&proj)).collect();
    let rights = n.rights.iter().map(|r| section.mul(&im.kron(r)).mul(&proj)).collect();
    Bimodule::from_actions(&m.left, &n.right, lefts, rights)
}

/// `N = Hom_B(M, B)` as a `B`-`A`-bimodule: `(b phi a)(m) = b phi(a m)`.
pub fn hom_right_dual(m: &Bimodule) -> Result<Bimodule> {
    let b = &m.right;
    let p = b.p();
    let hs = hom_space(&m.as_right_module(), &Module::regular(b))?;
    let elems = hs.elements();
    let coords_of = |op: &dyn Fn(&Mat) -> Mat| -> Result<Mat> {
        let mut rows = Vec::with_capacity(elems.len());
        for phi in &elems {
            match hs.coords(&op(phi)) {
                Some(c) => rows.push(c),
                None => return invariant("Hom_B(M, B) is not closed under the bimodule actions"),
            }
        }
        Ok(Mat::from_rows_shaped(p, hs.dim(), &rows))
    };
    let mut lefts = Vec::with_capacity(b.dim());
    for j in 0..b.dim() {
        lefts.push(coords_of(&|phi: &Mat| phi.mul(b.left_mult(j)))?);
    }
    let mut rights = Vec::with_capacity(m.left.dim());
    for l in &m.lefts {
        rights.push(coords_of(&|phi: &Mat| l.mul(phi))?);
    }
    Bimodule::from_actions(b, &m.left, lefts, rights)
}

/// `X (x) M` with its label, used in reports.
fn label(x: &Module) -> String {
    format!("{:?}", x.dim_vector())
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoCheck {
    pub module: String,
    pub dims: (usize, usize),
    pub isomorphic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NatIsoReport {
    pub per_projective: Vec<IsoCheck>,
}

impl NatIsoReport {
    pub fn all_isomorphic(&self) -> bool {
        self.per_projective.iter().all(|c| c.isomorphic)
    }
}

/// `(P (x) M)^* ~ N (x) P^*` as left `B`-modules for each indecomposable
/// projective `P`, with `N = Hom_B(M, B)`.
pub fn natiso_check(m: &Bimodule) -> Result<NatIsoReport> {
    let n_swapped = hom_right_dual(m)?.swap()?;
    let mut per_projective = Vec::new();
    for pm in indecomposable_projectives(&m.left) {
        let lhs = star(&tensor_right(&pm, m)?.module).module;
        let rhs = tensor_right(&star(&pm).module, &n_swapped)?.module;
        per_projective.push(IsoCheck {
            module: label(&pm),
            dims: (lhs.dim(), rhs.dim()),
            isomorphic: isomorphic(&lhs, &rhs)?,
        });
    }
    Ok(NatIsoReport { per_projective })
}

/// `nu_B(P (x) M) ~ nu_A(P) (x) M` for each indecomposable projective `P`.
pub fn nakayama_check(m: &Bimodule) -> Result<Vec<IsoCheck>> {
    let mut out = Vec::new();
    for pm in indecomposable_projectives(&m.left) {
        let lhs = nakayama(&tensor_right(&pm, m)?.module);
        let rhs = tensor_right(&nakayama(&pm), m)?.module;
        out.push(IsoCheck { module: label(&pm), dims: (lhs.dim(), rhs.dim()), isomorphic: isomorphic(&lhs, &rhs)? });
    }
    Ok(out)
}

/// `M (x)_B DB ~ DA (x)_A M` as right `B`-modules.
pub fn dual_commutation_check(m: &Bimodule) -> Result<IsoCheck> {
    let db = Bimodule::regular(&m.right)?.dual()?;
    let da = Bimodule::regular(&m.left)?.dual()?;
    let lhs = tensor_bimodules(m, &db)?.as_right_module();
    let rhs = tensor_bimodules(&da, m)?.as_right_module();
    Ok(IsoCheck { module: "M".into(), dims: (lhs.dim(), rhs.dim()), isomorphic: isomorphic(&lhs, &rhs)? })
}

/// Summands of a tensor product over the enveloping algebra once one copy
/// of each indecomposable summand of the regular bimodule is taken out.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorTerm {
    pub contains_regular: bool,
    /// Dimensions of the remaining indecomposable summands.
    pub remainder: Vec<usize>,
    pub remainder_projective: bool,
}

impl ErrorTerm {
    pub fn is_zero(&self) -> bool {
        self.remainder.is_empty()
    }
}

fn error_term(product: &Bimodule, regular: &Bimodule) -> Result<ErrorTerm> {
    let mut ids: Vec<_> = decompose(product.module())?.summands;
    let mut contains_regular = true;
    for s in decompose(regular.module())?.summands {
        match ids.iter().position(|t| t.canon == s.canon) {
            Some(i) => {
                ids.remove(i);
            }
            None => contains_regular = false,
        }
    }
    Ok(ErrorTerm {
        contains_regular,
        remainder: ids.iter().map(|s| s.module.dim()).collect(),
        remainder_projective: ids.iter().all(|s| s.module.is_projective()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    pub m_left_projective: bool,
    pub m_right_projective: bool,
    pub n_left_projective: bool,
    pub n_right_projective: bool,
    /// `M (x)_B N ~ A + P`.
    pub p: ErrorTerm,
    /// `N (x)_A M ~ B + Q`.
    pub q: ErrorTerm,
}

impl MoritaReport {
    pub fn passes(&self) -> bool {
        self.m_left_projective
            && self.m_right_projective
            && self.n_left_projective
            && self.n_right_projective
            && self.p.contains_regular
            && self.q.contains_regular
            && self.p.remainder_projective
            && self.q.remainder_projective
    }

    /// Passes with `P = Q = 0`, i.e. a Morita equivalence.
    pub fn passes_without_error_terms(&self) -> bool {
        self.passes() && self.p.is_zero() && self.q.is_zero()
    }
}

pub fn morita_type_check(m: &Bimodule, n: &Bimodule) -> Result<MoritaReport> {
    if !m.left.same_as(&n.right) || !m.right.same_as(&n.left) {
        return Err(Error::AlgebraMismatch);
    }
    let p = error_term(&tensor_bimodules(m, n)?, &Bimodule::regular(&m.left)?)?;
    let q = error_term(&tensor_bimodules(n, m)?, &Bimodule::regular(&m.right)?)?;
    Ok(MoritaReport {
        m_left_projective: m.as_left_module().is_projective(),
        m_right_projective: m.as_right_module().is_projective(),
        n_left_projective: n.as_left_module().is_projective(),
        n_right_projective: n.as_right_module().is_projective(),
        p,
        q,
    })
}

fn is_simple(x: &Module) -> bool {
    x.dim() > 0 && x.radical_submodule().rows() == 0 && x.top_vector().iter().sum::<usize>() == 1
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpleImage {
    pub simple: String,
    /// `(dimension vector, simple, projective)` per indecomposable summand.
    pub summands: Vec<(Vec<usize>, bool, bool)>,
    pub indecomposable: bool,
    /// `S (x) M ~ S' + P` with `S'` simple or zero and `P` projective.
    pub simple_plus_projective: bool,
}

pub fn simple_image_analysis(s: &Module, m: &Bimodule) -> Result<SimpleImage> {
    if !is_simple(s) {
        return precondition("simple_image_analysis needs a simple module");
    }
    let image = tensor_right(s, m)?.module;
    let summands: Vec<(Vec<usize>, bool, bool)> = if image.dim() == 0 {
        Vec::new()
    } else {
        decompose(&image)?
            .summands
            .iter()
            .map(|t| (t.module.dim_vector(), is_simple(&t.module), t.module.is_projective()))
            .collect()
    };
    let non_projective: Vec<_> = summands.iter().filter(|t| !t.2).collect();
    let simple_plus_projective = non_projective.len() <= 1 && non_projective.iter().all(|t| t.1);
    Ok(SimpleImage {
        simple: label(s),
        indecomposable: summands.len() == 1,
        summands,
        simple_plus_projective,
    })
}

/// `F (x) M` applied termwise to a window; fails when an image term is not
/// projective.
pub fn tensor_window(c: &ComplexWindow, m: &Bimodule) -> Result<ComplexWindow> {
    let ts: Vec<Tensor> = c.terms.iter().map(|t| tensor_right(t, m)).collect::<Result<_>>()?;
    let diffs = c.diffs.iter().enumerate().map(|(k, d)| tensor_map(&ts[k], &ts[k + 1], d, m)).collect();
    ComplexWindow::new(c.lo, ts.into_iter().map(|t| t.module).collect(), diffs)
}

#[derive(Clone, Debug)]
pub struct ConditionOptions {
    pub test_modules: Vec<Module>,
    pub lo: i64,
    pub hi: i64,
    /// Knitting bound for the finite-type test.
    pub knit_bound: usize,
}

impl ConditionOptions {
    /// Simples and indecomposable projectives of `A`, on `[-2, 2]`.
    pub fn defaults(a: &Arc<Algebra>) -> ConditionOptions {
        let mut test_modules = simple_modules(a);
        test_modules.extend(indecomposable_projectives(a));
        ConditionOptions { test_modules, lo: -2, hi: 2, knit_bound: 40 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    /// `H_k((F_X (x) M)^*) = 0` at interior `k >= 0`, per test module.
    pub dual_homology_vanishes: Vec<(String, bool)>,
    pub nakayama: Vec<IsoCheck>,
    pub dual_commutation: IsoCheck,
    pub nodes_left: Vec<String>,
    pub nodes_right: Vec<String>,
    pub dominant_dimension_left: bool,
    pub dominant_dimension_right: bool,
    pub finite_type_left: bool,
    pub finite_type_right: bool,
    /// `S (x) M` indecomposable, for simples `S` with non-projective
    /// injective hull.
    pub simple_images_indecomposable: Vec<(String, bool)>,
    /// `Ext^1(X, A) = 0 => Ext^1(X (x) M, B) = 0`, per test module.
    pub ext_transfer: Vec<(String, bool)>,
    pub bimodule_indecomposable: bool,
}

impl ConditionReport {
    pub fn nakayama_holds(&self) -> bool {
        self.nakayama.iter().all(|c| c.isomorphic)
    }
    pub fn dual_commutation_holds(&self) -> bool {
        self.dual_commutation.isomorphic
    }
}

fn dual_homology_after_tensor(x: &Module, m: &Bimodule, lo: i64, hi: i64) -> Result<bool> {
    let c = kato_complex(x, lo, hi)?.window;
    let t = match tensor_window(&c, m) {
        Ok(t) => t,
        Err(Error::Invariant(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(((t.lo + 1).max(0)..t.hi()).all(|k| t.dual_homology_dim(k) == 0))
}

pub fn condition_report(m: &Bimodule, options: &ConditionOptions) -> Result<ConditionReport> {
    let (a, b) = (&m.left, &m.right);
    let mut dual_homology_vanishes = Vec::new();
    let mut ext_transfer = Vec::new();
    let reg_a = Module::regular(a);
    let reg_b = Module::regular(b);
    for x in &options.test_modules {
        dual_homology_vanishes.push((label(x), dual_homology_after_tensor(x, m, options.lo, options.hi)?));
        if x.dim() > 0 && ext1_dim(x, &reg_a) == 0 {
            let image = tensor_right(x, m)?.module;
            ext_transfer.push((label(x), image.dim() == 0 || ext1_dim(&image, &reg_b) == 0));
        }
    }
    let mut simple_images_indecomposable = Vec::new();
    for s in simple_modules(a) {
        if !injective_hull(&s).0.is_projective() {
            simple_images_indecomposable.push((label(&s), simple_image_analysis(&s, m)?.indecomposable));
        }
    }
    let node_labels = |alg: &Arc<Algebra>| -> Result<Vec<String>> { Ok(nodes(alg)?.iter().map(label).collect()) };
    Ok(ConditionReport {
        dual_homology_vanishes,
        nakayama: nakayama_check(m)?,
        dual_commutation: dual_commutation_check(m)?,
        nodes_left: node_labels(a)?,
        nodes_right: node_labels(b)?,
        dominant_dimension_left: dominant_dimension_at_least_one(a),
        dominant_dimension_right: dominant_dimension_at_least_one(b),
        finite_type_left: knit(a, options.knit_bound)?.complete,
        finite_type_right: knit(b, options.knit_bound)?.complete,
        simple_images_indecomposable,
        ext_transfer,
        bimodule_indecomposable: m.dim() > 0 && is_indecomposable(m.module())?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeStatus {
    /// Every image window lies in `L_B` and the Morita-type check passes.
    Consistent,
    /// Both fail.
    BothFail,
    /// An image window leaves `L_B` although the Morita-type check passes.
    LFailsMoritaHolds,
    /// All image windows lie in `L_B` on the test set but the Morita-type
    /// check fails.
    LHoldsMoritaFails,
}

#[derive(Clone, Debug, Serialize)]
pub struct LProbe {
    /// Per test module: in `L_B`, or the reason it is not.
    pub per_module: Vec<(String, std::result::Result<(), String>)>,
    pub morita: MoritaReport,
    pub status: ProbeStatus,
}

impl LProbe {
    pub fn contradiction(&self) -> bool {
        matches!(self.status, ProbeStatus::LFailsMoritaHolds | ProbeStatus::LHoldsMoritaFails)
    }
}

pub fn l_equivalence_probe(m: &Bimodule, tests: &[Module], lo: i64, hi: i64) -> Result<LProbe> {
    let mut per_module = Vec::new();
    for x in tests {
        let c = kato_complex(x, lo, hi)?.window;
        let verdict = match tensor_window(&c, m) {
            Ok(t) => {
                let r = in_l_window(&t);
                if r.ok() {
                    Ok(())
                } else {
                    Err(format!("violations at {:?}", r.violations))
                }
            }
            Err(Error::Invariant(msg)) => Err(msg),
            Err(e) => return Err(e),
        };
        per_module.push((label(x), verdict));
    }
    let morita = morita_type_check(m, &hom_right_dual(m)?)?;
    let l_ok = per_module.iter().all(|(_, v)| v.is_ok());
    let status = match (l_ok, morita.passes()) {
        (true, true) => ProbeStatus::Consistent,
        (false, false) => ProbeStatus::BothFail,
        (false, true) => ProbeStatus::LFailsMoritaHolds,
        (true, false) => ProbeStatus::LHoldsMoritaFails,
    };
    Ok(LProbe { per_module, morita, status })
}
