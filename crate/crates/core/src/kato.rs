//! Bounded windows of complexes of projectives, the complexes `F_X` built
//! from a projective resolution of `X` and the dual of one of `X^*`, and
//! the Gorenstein-projective checks that run on them.

use serde::Serialize;

use crate::decompose::isomorphic;
use crate::error::{invariant, precondition, Error, Result};
use crate::homological::{
    ext_dim, has_projective_summand, indecomposable_projectives, injective_hull, is_injective,
    projective_resolution, star, star_map, strip_projectives, syzygy, Star,
};
use crate::linalg::{rowspace, Mat};
use crate::module::{hom_space, HomSpace, Module};

/// Terms `F^lo, ..., F^hi` and differentials `d^k: F^k -> F^(k+1)`.
#[derive(Clone, Debug)]
pub struct ComplexWindow {
    pub lo: i64,
    pub terms: Vec<Module>,
    pub diffs: Vec<Mat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `H^k(F)`.
    Cohomology,
    /// `H_k(F^*)`.
    DualHomology,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LReport {
    pub violations: Vec<(i64, Side)>,
    /// Degrees whose condition needs terms outside the window.
    pub unchecked: Vec<(i64, Side)>,
}

impl LReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ComplexWindow {
    /// Validate shapes, `d d = 0`, module maps and projectivity of terms.
    pub fn new(lo: i64, terms: Vec<Module>, diffs: Vec<Mat>) -> Result<ComplexWindow> {
        let c = ComplexWindow { lo, terms, diffs };
        c.certify()?;
        Ok(c)
    }

    pub fn zero(alg: &std::sync::Arc<crate::algebra::Algebra>, lo: i64, hi: i64) -> ComplexWindow {
        let n = (hi - lo + 1) as usize;
        let p = alg.p();
        ComplexWindow {
            lo,
            terms: vec![Module::zero(alg); n],
            diffs: vec![Mat::zeros(p, 0, 0); n - 1],
        }
    }

    pub fn certify(&self) -> Result<()> {
        if self.terms.is_empty() || self.diffs.len() + 1 != self.terms.len() {
            return Err(Error::Dimension("a window needs one differential fewer than terms".into()));
        }
        for (k, t) in self.terms.iter().enumerate() {
            if !t.same_algebra(&self.terms[0]) {
                return Err(Error::AlgebraMismatch);
            }
            if !t.is_projective() {
                return invariant(format!("term in degree {} is not projective", self.lo + k as i64));
            }
        }
        for (k, d) in self.diffs.iter().enumerate() {
            if d.shape() != (self.terms[k].dim(), self.terms[k + 1].dim()) {
                let deg = self.lo + k as i64;
                return Err(Error::Dimension(format!("d^{deg} has shape {:?}", d.shape())));
            }
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let deg = self.lo + k as i64;
            if !self.terms[k].is_hom_to(&self.terms[k + 1], d) {
                return invariant(format!("d^{deg} is not a module map"));
            }
            if k + 1 < self.diffs.len() && !d.mul(&self.diffs[k + 1]).is_zero() {
                return invariant(format!("d^{} d^{deg} is not zero", deg + 1));
            }
        }
        Ok(())
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    fn index(&self, k: i64) -> usize {
        (k - self.lo) as usize
    }

    pub fn term(&self, k: i64) -> &Module {
        &self.terms[self.index(k)]
    }

    /// `d^k`, for `lo <= k < hi`.
    pub fn diff(&self, k: i64) -> &Mat {
        &self.diffs[self.index(k)]
    }

    pub fn is_interior(&self, k: i64) -> bool {
        self.lo < k && k < self.hi()
    }

    /// `F[s]` with `F[s]^k = F^(k+s)` and differentials signed by `(-1)^s`.
    pub fn shift(&self, s: i64) -> ComplexWindow {
        let diffs = if s % 2 == 0 { self.diffs.clone() } else { self.diffs.iter().map(Mat::neg).collect() };
        ComplexWindow { lo: self.lo - s, terms: self.terms.clone(), diffs }
    }

    /// `H^k` as a module, for interior `k`.
    pub fn cohomology(&self, k: i64) -> Result<Module> {
        if !self.is_interior(k) {
            return precondition(format!("degree {k} is not interior to [{}, {}]", self.lo, self.hi()));
        }
        let t = self.term(k);
        let (ker, incl) = t.hom_kernel(self.diff(k));
        let im = self.diff(k - 1).row_basis();
        let sub = match rowspace::coords(&incl, &im) {
            Some(c) => c,
            None => return invariant(format!("image of d^{} is not inside ker d^{k}", k - 1)),
        };
        Ok(ker.quotient(&sub).0)
    }

    pub fn cohomology_dim(&self, k: i64) -> usize {
        let d = self.diff(k);
        d.rows() - d.rank() - self.diff(k - 1).rank()
    }

    fn stars(&self) -> Vec<Star> {
        self.terms.iter().map(star).collect()
    }

    fn dual_homology_dim_with(&self, stars: &[Star], k: i64) -> usize {
        let i = self.index(k);
        // (d^(k-1))^*: F^k* -> F^(k-1)*, (d^k)^*: F^(k+1)* -> F^k*.
        let into = star_map(&stars[i - 1], &stars[i], &self.diffs[i - 1]);
        let out = star_map(&stars[i], &stars[i + 1], &self.diffs[i]);
        into.rows() - into.rank() - out.rank()
    }

    /// `dim H_k(F^*)` for interior `k`.
    pub fn dual_homology_dim(&self, k: i64) -> usize {
        self.dual_homology_dim_with(&self.stars(), k)
    }
}

/// Membership test for the subcategory `L_A` on a window: `H^k = 0` for
/// `k < 0` and `H_k(F^*) = 0` for `k >= 0`, at interior degrees.
pub fn in_l_window(c: &ComplexWindow) -> LReport {
    let stars = c.stars();
    let mut violations = Vec::new();
    let mut unchecked = Vec::new();
    for k in c.lo..=c.hi() {
        let side = if k < 0 { Side::Cohomology } else { Side::DualHomology };
        if !c.is_interior(k) {
            unchecked.push((k, side));
            continue;
        }
        let dim = match side {
            Side::Cohomology => c.cohomology_dim(k),
            Side::DualHomology => c.dual_homology_dim_with(&stars, k),
        };
        if dim != 0 {
            violations.push((k, side));
        }
    }
    LReport { violations, unchecked }
}

/// `H^k(c) = 0` and `H_k(c^*) = 0` at every interior degree.
pub fn totally_acyclic_window(c: &ComplexWindow) -> bool {
    let stars = c.stars();
    (c.lo + 1..c.hi()).all(|k| c.cohomology_dim(k) == 0 && c.dual_homology_dim_with(&stars, k) == 0)
}

/// `F_X` on a window, with the two resolutions it is spliced from.
#[derive(Clone, Debug)]
pub struct KatoComplex {
    pub window: ComplexWindow,
    pub module: Module,
    /// `P_0 -> X`.
    pub augmentation: Mat,
    /// `X^*` over the opposite algebra.
    pub module_star: Module,
}

/// The evaluation map `P -> P^**`.
fn evaluation(sp: &Star, spp: &Star, dim: usize) -> Result<Mat> {
    let p = sp.basis.flat_basis().p();
    let elems = sp.basis.elements();
    let mut rows = Vec::with_capacity(dim);
    for r in 0..dim {
        let img: Vec<Vec<u32>> = elems.iter().map(|phi| phi.row(r).to_vec()).collect();
        let m = Mat::from_rows_shaped(p, sp.basis.cols, &img);
        match spp.basis.coords(&m) {
            Some(c) => rows.push(c),
            None => return invariant("evaluation is not a homomorphism"),
        }
    }
    Ok(Mat::from_rows_shaped(p, spp.basis.dim(), &rows))
}

/// Pad a resolution out to `len` terms with zero modules.
fn padded_resolution(x: &Module, len: usize) -> Vec<(Module, Mat)> {
    let mut res = projective_resolution(x, len.saturating_sub(1));
    let p = x.p();
    while res.len() < len {
        let prev = res.last().map(|(m, _)| m.dim()).unwrap_or(0);
        res.push((Module::zero(x.algebra()), Mat::zeros(p, 0, prev)));
    }
    res
}

/// `F_X` restricted to degrees `lo..=hi`: the minimal projective resolution
/// of `X` in degrees `<= 0`, and in degrees `>= 1` the dual of the minimal
/// projective resolution of `X^*`.
pub fn kato_complex(x: &Module, lo: i64, hi: i64) -> Result<KatoComplex> {
    if lo > 0 || hi < 0 {
        return precondition(format!("window [{lo}, {hi}] must contain 0"));
    }
    let left = padded_resolution(x, (-lo) as usize + 1);
    let sx = star(x);
    let (p0, eps) = (&left[0].0, &left[0].1);
    let sp0 = star(p0);
    let eps_star = star_map(&sp0, &sx, eps);
    let right = padded_resolution(&sx.module, hi.max(1) as usize);

    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for k in lo..=0 {
        terms.push(left[(-k) as usize].0.clone());
    }
    for k in lo..0 {
        diffs.push(left[(-k) as usize].1.clone());
    }
    let right_stars: Vec<Star> = right.iter().map(|(m, _)| star(m)).collect();
    for k in 1..=hi {
        terms.push(right_stars[(k - 1) as usize].module.clone());
    }
    if hi >= 1 {
        // d^0 = P_0 -> P_0^** -> R_0^*, dual to R_0 -> X^* -> P_0^*.
        let to_p0_star = right[0].1.mul(&eps_star);
        let sp0_star = star(&sp0.module);
        let ev = evaluation(&sp0, &sp0_star, p0.dim())?;
        diffs.push(ev.mul(&star_map(&right_stars[0], &sp0_star, &to_p0_star)));
    }
    for k in 1..hi {
        let i = k as usize;
        diffs.push(star_map(&right_stars[i], &right_stars[i - 1], &right[i].1));
    }
    let window = ComplexWindow::new(lo, terms, diffs)?;
    let coker_dim = p0.dim() - if lo < 0 { window.diff(-1).rank() } else { 0 };
    if coker_dim != x.dim() {
        return invariant("H^0 of the resolution part differs from X");
    }
    Ok(KatoComplex { window, module: x.clone(), augmentation: eps.clone(), module_star: sx.module })
}

/// Whether `F_X[s]` lies in `L_A` for `s = -1` or `s = 1`. For `s = -1`
/// this is `Ext^1(X, A) = 0`; for `s = 1` it is `H^0(F_X) = 0`.
pub fn shift_in_l(x: &Module, s: i64) -> Result<bool> {
    match s {
        -1 => Ok(x.dim() == 0 || ext_dim(x, &Module::regular(x.algebra()), 1) == 0),
        1 => Ok(kato_complex(x, -1, 1)?.window.cohomology_dim(0) == 0),
        _ => precondition("only shifts by 1 and -1 are decided"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GprojCertificate {
    Projective,
    /// `Omega^i X` stripped of projectives is zero.
    SyzygyVanishes(usize),
    /// `Omega^i X ~ Omega^j X` up to projective summands, `i < j`, and all
    /// checks hold up to degree `j`.
    SyzygyCycle(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GprojVerdict {
    Yes(GprojCertificate),
    No(String),
    Unknown,
}

impl GprojVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, GprojVerdict::Yes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, GprojVerdict::No(_))
    }
}

/// Whether `X -> X^**` is an isomorphism.
pub fn is_reflexive(x: &Module) -> Result<bool> {
    let sx = star(x);
    let sxx = star(&sx.module);
    if sxx.basis.dim() != x.dim() {
        return Ok(false);
    }
    Ok(evaluation(&sx, &sxx, x.dim())?.inverse().is_some())
}

/// Gorenstein-projectivity on bounded evidence: `No` with a witness as soon
/// as an Ext group or reflexivity fails, `Yes` once the syzygy orbit closes
/// up and every check up to the period passed.
pub fn is_gorenstein_projective(x: &Module, bound: usize) -> Result<GprojVerdict> {
    if x.is_projective() {
        return Ok(GprojVerdict::Yes(GprojCertificate::Projective));
    }
    let alg = x.algebra();
    let reg = Module::regular(alg);
    let mut ext_ok = 0;
    for i in 1..=bound {
        if ext_dim(x, &reg, i) != 0 {
            return Ok(GprojVerdict::No(format!("Ext^{i}(X, A) != 0")));
        }
        ext_ok = i;
    }
    if !is_reflexive(x)? {
        return Ok(GprojVerdict::No("X -> X** is not an isomorphism".into()));
    }
    let xs = star(x).module;
    if xs.dim() > 0 {
        let reg_op = Module::regular(xs.algebra());
        for i in 1..=bound {
            if ext_dim(&xs, &reg_op, i) != 0 {
                return Ok(GprojVerdict::No(format!("Ext^{i}(X*, A) != 0 over the opposite algebra")));
            }
        }
    }
    let mut orbit = vec![strip_projectives(x)?];
    for j in 1..=bound {
        let next = strip_projectives(&syzygy(orbit.last().unwrap()).0)?;
        if next.dim() == 0 {
            return Ok(GprojVerdict::Yes(GprojCertificate::SyzygyVanishes(j)));
        }
        for (i, prev) in orbit.iter().enumerate() {
            if prev.dim() == next.dim() && j <= ext_ok && isomorphic(prev, &next)? {
                return Ok(GprojVerdict::Yes(GprojCertificate::SyzygyCycle(i, j)));
            }
        }
        orbit.push(next);
    }
    Ok(GprojVerdict::Unknown)
}

/// Dimension consequences of Yoshino's four-term sequence
/// `0 -> Ext^1(Cok d^k, M) -> H^k(Hom(F, M)) -> Hom(H^k(F), M) -> Ext^2(Cok d^k, M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YoshinoReport {
    pub degree: i64,
    pub ext1_cokernel: usize,
    pub hom_complex_cohomology: usize,
    pub hom_of_cohomology: usize,
}

impl YoshinoReport {
    pub fn inequality_holds(&self) -> bool {
        self.ext1_cokernel <= self.hom_complex_cohomology
    }
    /// Equality is forced when `Hom(H^k(F), M) = 0`.
    pub fn equality_holds(&self) -> bool {
        self.hom_of_cohomology != 0 || self.ext1_cokernel == self.hom_complex_cohomology
    }
    pub fn vanishing_holds(&self) -> bool {
        !(self.ext1_cokernel == 0 && self.hom_of_cohomology == 0) || self.hom_complex_cohomology == 0
    }
    pub fn ok(&self) -> bool {
        self.inequality_holds() && self.equality_holds() && self.vanishing_holds()
    }
}

/// Matrix of `phi -> d phi` from `Hom(T, M)` to `Hom(S, M)`, for `d: S -> T`.
fn precompose(d: &Mat, from: &HomSpace, to: &HomSpace) -> Result<Mat> {
    let p = d.p();
    let mut rows = Vec::with_capacity(from.dim());
    for phi in from.elements() {
        match to.coords(&d.mul(&phi)) {
            Some(c) => rows.push(c),
            None => return invariant("composite left the Hom space"),
        }
    }
    Ok(Mat::from_rows_shaped(p, to.dim(), &rows))
}

pub fn yoshino_consequences(c: &ComplexWindow, m: &Module, k: i64) -> Result<YoshinoReport> {
    if !c.is_interior(k) {
        return precondition(format!("degree {k} is not interior to [{}, {}]", c.lo, c.hi()));
    }
    let next = c.term(k + 1);
    let cok = next.hom_cokernel(c.diff(k)).0;
    let ext1_cokernel = if cok.dim() == 0 { 0 } else { ext_dim(&cok, m, 1) };
    let hom_prev = hom_space(c.term(k - 1), m)?;
    let hom_here = hom_space(c.term(k), m)?;
    let hom_next = hom_space(next, m)?;
    let out = precompose(c.diff(k - 1), &hom_here, &hom_prev)?;
    let inc = precompose(c.diff(k), &hom_next, &hom_here)?;
    let hom_complex_cohomology = hom_here.dim() - out.rank() - inc.rank();
    let h = c.cohomology(k)?;
    let hom_of_cohomology = hom_space(&h, m)?.dim();
    Ok(YoshinoReport { degree: k, ext1_cokernel, hom_complex_cohomology, hom_of_cohomology })
}

/// Indecomposable projective-injective modules.
pub fn projective_injectives(alg: &std::sync::Arc<crate::algebra::Algebra>) -> Vec<Module> {
    indecomposable_projectives(alg).into_iter().filter(is_injective).collect()
}

/// `Hom(H^k(c), Z) = 0` for interior `k >= 0` and every projective-injective
/// indecomposable `Z`.
pub fn perp_check(c: &ComplexWindow) -> Result<bool> {
    let alg = c.terms[0].algebra().clone();
    let zs = projective_injectives(&alg);
    for k in (c.lo + 1).max(0)..c.hi() {
        let h = c.cohomology(k)?;
        if h.dim() == 0 {
            continue;
        }
        for z in &zs {
            if hom_space(&h, z)?.dim() != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dominant dimension at least one: the injective hull of `A_A` is
/// projective.
pub fn dominant_dimension_at_least_one(alg: &std::sync::Arc<crate::algebra::Algebra>) -> bool {
    injective_hull(&Module::regular(alg)).0.is_projective()
}

/// Whether `X` has no projective summand, as required of objects `F_X` with
/// `X` in the stable category.
pub fn stable_object(x: &Module) -> Result<bool> {
    Ok(!has_projective_summand(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn projective_gives_a_contractible_window() {
        let a = zoo::a2(3);
        let (p, _) = Module::vertex_projective(&a, 0);
        let k = kato_complex(&p, -2, 2).unwrap();
        assert_eq!(k.window.term(0).dim(), p.dim());
        assert_eq!(k.window.term(1).dim(), p.dim());
        assert!(k.window.diff(0).inverse().is_some());
        assert_eq!(k.window.term(-1).dim(), 0);
        assert!(totally_acyclic_window(&k.window));
    }

    #[test]
    fn simple_over_dual_numbers_is_two_sided_periodic() {
        let a = zoo::dual_numbers(2);
        let s = Module::vertex_top(&a, 0);
        let k = kato_complex(&s, -3, 3).unwrap();
        for deg in -3..=3 {
            assert_eq!(k.window.term(deg).dim(), 2, "degree {deg}");
        }
        // Every differential is multiplication by x: rank one, square zero.
        for deg in -3..3 {
            assert_eq!(k.window.diff(deg).rank(), 1);
        }
        assert!(totally_acyclic_window(&k.window));
    }

    #[test]
    fn kronecker_injective_simple_has_no_dual() {
        let a = zoo::kronecker(2);
        let s = Module::vertex_top(&a, 0);
        let k = kato_complex(&s, -2, 2).unwrap();
        assert_eq!(k.module_star.dim(), 0);
        assert_eq!(k.window.term(1).dim(), 0);
        assert_eq!(k.window.term(-1).dim_vector(), vec![0, 2]);
        assert!(in_l_window(&k.window).ok());
        let shifted = in_l_window(&k.window.shift(1));
        assert_eq!(shifted.violations, vec![(-1, Side::Cohomology)]);
        assert!(!shift_in_l(&s, 1).unwrap());
    }

    #[test]
    fn kronecker_projective_simple_dual_is_nonzero() {
        let a = zoo::kronecker(2);
        let s = Module::vertex_top(&a, 1);
        let k = kato_complex(&s, -1, 2).unwrap();
        assert!(k.module_star.dim() > 0);
        assert!(k.window.term(1).dim() > 0);
    }

    #[test]
    fn zero_window_is_in_l() {
        let a = zoo::a2(2);
        let z = ComplexWindow::zero(&a, -2, 2);
        assert!(in_l_window(&z).ok());
        assert!(totally_acyclic_window(&z));
        assert!(perp_check(&z).unwrap());
    }

    #[test]
    fn gorenstein_over_a2_and_dual_numbers() {
        let a = zoo::a2(3);
        let s = Module::vertex_top(&a, 0);
        assert!(is_gorenstein_projective(&s, 4).unwrap().is_no());
        let (p, _) = Module::vertex_projective(&a, 1);
        assert_eq!(is_gorenstein_projective(&p, 4).unwrap(), GprojVerdict::Yes(GprojCertificate::Projective));
        let d = zoo::dual_numbers(3);
        let sd = Module::vertex_top(&d, 0);
        assert_eq!(is_gorenstein_projective(&sd, 4).unwrap(), GprojVerdict::Yes(GprojCertificate::SyzygyCycle(0, 1)));
    }

    #[test]
    fn yoshino_on_a_contractible_window() {
        let a = zoo::a2(2);
        let (p, _) = Module::vertex_projective(&a, 0);
        let k = kato_complex(&p, -1, 2).unwrap();
        let r = yoshino_consequences(&k.window, &Module::vertex_top(&a, 1), 0).unwrap();
        assert_eq!((r.ext1_cokernel, r.hom_complex_cohomology, r.hom_of_cohomology), (0, 0, 0));
        assert!(yoshino_consequences(&k.window, &p, -1).is_err());
    }

    #[test]
    fn corrupted_window_fails_perp_check() {
        // P_2 -> P_1 -> P_1 for A3 with rad^2 = 0 (domdim >= 1): H^0 is
        // the projective-injective top part.
        let a = zoo::a3_rad_square_zero(2);
        assert!(dominant_dimension_at_least_one(&a));
        let (p1, _) = Module::vertex_projective(&a, 0);
        let z = Module::zero(&a);
        let c = ComplexWindow::new(-1, vec![z.clone(), p1.clone(), z], vec![Mat::zeros(2, 0, p1.dim()), Mat::zeros(2, p1.dim(), 0)]).unwrap();
        assert!(!perp_check(&c).unwrap());
    }
}
