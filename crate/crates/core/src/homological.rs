//! Projective covers, syzygies, duals, transpose, the AR translate and Ext.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::decompose::{decompose, indecomposable_iso};
use crate::error::Result;
use crate::linalg::{rowspace, Mat};
use crate::module::{factor_through, hom_basis, HomSpace, Module};

/// `(P, epi)` with `P -> X` a minimal projective cover.
pub fn projective_cover(x: &Module) -> (Module, Mat) {
    let c = x.cover();
    (c.projective.clone(), c.epi.clone())
}

/// `Omega(X)` with its inclusion (reduced rows) into the projective cover.
pub fn syzygy(x: &Module) -> (Module, Mat) {
    let c = x.cover();
    let k = c.epi.left_kernel().row_basis();
    (c.projective.submodule_unchecked(&k), k)
}

/// `Omega^n(X)`.
pub fn syzygy_power(x: &Module, n: usize) -> Module {
    let mut m = x.clone();
    for _ in 0..n {
        m = syzygy(&m).0;
    }
    m
}

/// The vector-space dual with the transposed action, a module over the
/// opposite algebra.
pub fn dual_d(x: &Module) -> Module {
    let op = x.algebra().opposite();
    let action = x.actions().iter().map(|m| m.transpose()).collect();
    Module::new_unchecked(&op, x.dim(), action)
}

/// `X^* = Hom_A(X, A)` as a module over the opposite algebra, with the
/// basis of homomorphisms used for its coordinates.
pub struct Star {
    pub module: Module,
    pub basis: HomSpace,
}

pub fn star(x: &Module) -> Star {
    let alg = x.algebra().clone();
    let p = alg.p();
    let reg = Module::regular(&alg);
    let basis = HomSpace::from_matrices(p, x.dim(), alg.dim(), &hom_basis(x, &reg));
    let elems = basis.elements();
    let action = (0..alg.dim())
        .map(|b| {
            let rows: Vec<Vec<u32>> = elems
                .iter()
                .map(|f| basis.coords(&f.mul(alg.left_mult(b))).expect("left multiplication preserves Hom"))
                .collect();
            Mat::from_rows_shaped(p, basis.dim(), &rows)
        })
        .collect();
    Star { module: Module::new_unchecked(&alg.opposite(), basis.dim(), action), basis }
}

/// `f^*: Y^* -> X^*` for `f: X -> Y`.
pub fn star_map(sx: &Star, sy: &Star, f: &Mat) -> Mat {
    let p = f.p();
    let rows: Vec<Vec<u32>> = sy
        .basis
        .elements()
        .iter()
        .map(|psi| sx.basis.coords(&f.mul(psi)).expect("composite is a homomorphism"))
        .collect();
    Mat::from_rows_shaped(p, sx.basis.dim(), &rows)
}

/// Nakayama functor `D Hom_A(-, A)`.
pub fn nakayama(x: &Module) -> Module {
    dual_d(&star(x).module)
}

pub fn nakayama_map(x: &Module, y: &Module, f: &Mat) -> (Module, Module, Mat) {
    let sx = star(x);
    let sy = star(y);
    let fs = star_map(&sx, &sy, f);
    (dual_d(&sx.module), dual_d(&sy.module), fs.transpose())
}

/// `(I, mono)` with `X -> I` an injective hull.
pub fn injective_hull(x: &Module) -> (Module, Mat) {
    let dx = dual_d(x);
    let (p, epi) = projective_cover(&dx);
    (dual_d(&p), epi.transpose())
}

pub fn is_injective(x: &Module) -> bool {
    dual_d(x).is_projective()
}

/// Minimal projective presentation `P1 -> P0 -> X`: returns `(P1, P0, d)`
/// with `d: P1 -> P0`.
pub fn presentation(x: &Module) -> (Module, Module, Mat) {
    let c = x.cover();
    let (omega, incl) = syzygy(x);
    let oc = omega.cover();
    let d = oc.epi.mul(&incl);
    (oc.projective.clone(), c.projective.clone(), d)
}

/// Auslander-Bridger transpose, a module over the opposite algebra.
pub fn transpose(x: &Module) -> Module {
    let (p1, p0, d) = presentation(x);
    let s1 = star(&p1);
    let s0 = star(&p0);
    let ds = star_map(&s1, &s0, &d);
    s1.module.hom_cokernel(&ds).0
}

/// `tau = D Tr`.
pub fn tau(x: &Module) -> Module {
    dual_d(&transpose(x))
}

/// `tau^{-1} = Tr D`.
pub fn tau_inv(x: &Module) -> Module {
    transpose(&dual_d(x))
}

/// Minimal projective resolution `P_n -> ... -> P_0 -> X`: entry `i` is
/// `(P_i, d_i)` where `d_0: P_0 -> X` and `d_i: P_i -> P_{i-1}`.
pub fn projective_resolution(x: &Module, length: usize) -> Vec<(Module, Mat)> {
    let mut out = Vec::new();
    let c = x.cover();
    out.push((c.projective.clone(), c.epi.clone()));
    let mut current = x.clone();
    for _ in 0..length {
        let (omega, incl) = syzygy(&current);
        if omega.dim() == 0 {
            break;
        }
        let oc = omega.cover();
        out.push((oc.projective.clone(), oc.epi.mul(&incl)));
        current = omega;
    }
    out
}

/// `Ext^1(Z, X)` presented as `Hom(Omega Z, X)` modulo restrictions.
pub struct Extensions {
    pub z: Module,
    pub x: Module,
    pub cover: Module,
    /// `P -> Z`.
    pub epi: Mat,
    pub omega: Module,
    /// `Omega -> P` (reduced rows).
    pub incl: Mat,
    pub hom_omega: HomSpace,
    /// Coordinates (in `hom_omega`) of restrictions of maps `P -> X`.
    pub restricted: Mat,
    /// Quotient coordinates: `hom_omega` coords -> Ext coords.
    proj: Mat,
    /// Ext coords -> `hom_omega` coords.
    section: Mat,
}

impl Extensions {
    pub fn new(z: &Module, x: &Module) -> Extensions {
        let p = z.p();
        let c = z.cover();
        let (omega, incl) = syzygy(z);
        let hom_omega = HomSpace::from_matrices(p, omega.dim(), x.dim(), &hom_basis(&omega, x));
        let d = hom_omega.dim();
        let rows: Vec<Vec<u32>> = hom_basis(&c.projective, x)
            .iter()
            .map(|h| hom_omega.coords(&incl.mul(h)).expect("restriction is a homomorphism"))
            .collect();
        let restricted = Mat::from_rows_shaped(p, d, &rows).row_basis();
        let (r, piv) = restricted.rref();
        let keep: Vec<usize> = (0..d).filter(|c| !piv.contains(c)).collect();
        let mut proj = Mat::zeros(p, d, keep.len());
        for (t, &j) in keep.iter().enumerate() {
            proj.set(j, t, 1);
        }
        for (i, &pc) in piv.iter().enumerate() {
            for (t, &j) in keep.iter().enumerate() {
                let v = r.get(i, j);
                if v != 0 {
                    proj.set(pc, t, p - v);
                }
            }
        }
        let section = Mat::identity(p, d).select_rows(&keep);
        Extensions {
            z: z.clone(),
            x: x.clone(),
            cover: c.projective.clone(),
            epi: c.epi.clone(),
            omega,
            incl,
            hom_omega,
            restricted,
            proj,
            section,
        }
    }

    pub fn dim(&self) -> usize {
        self.proj.cols()
    }

    /// Representative `Omega -> X` of a class given in Ext coordinates.
    pub fn representative(&self, class: &[u32]) -> Mat {
        let c = Mat::row_vector(self.z.p(), class).mul(&self.section);
        self.hom_omega.combine(c.row(0))
    }

    /// Ext coordinates of a map `Omega -> X`.
    pub fn class_of(&self, phi: &Mat) -> Vec<u32> {
        let c = self.hom_omega.coords(phi).expect("a homomorphism out of the syzygy");
        Mat::row_vector(self.z.p(), &c).mul(&self.proj).row(0).to_vec()
    }

    /// Realize a class as `0 -> X -> E -> Z -> 0` by pushout along the
    /// syzygy inclusion. Returns `(E, f, g)`.
    pub fn realize(&self, class: &[u32]) -> (Module, Mat, Mat) {
        let p = self.z.p();
        let phi = self.representative(class);
        let sum = self.x.direct_sum2(&self.cover).without_parts();
        let rel = phi.hstack(&self.incl.neg());
        let (e, q, section) = sum.quotient(&rel.row_basis());
        let f = q.block(0, self.x.dim(), 0, e.dim());
        let lift_g = Mat::zeros(p, self.x.dim(), self.z.dim()).vstack(&self.epi);
        let g = section.mul(&lift_g);
        (e, f, g)
    }

    /// Lift of an endomorphism `h` of `Z` to the syzygy: `h_Omega` with
    /// `incl * hat(h) = h_Omega * incl`.
    pub fn lift_to_syzygy(&self, h: &Mat) -> Mat {
        let hat = factor_through(&self.cover, &self.cover, &self.epi, &self.epi.mul(h))
            .expect("projective covers lift");
        let moved = self.incl.mul(&hat);
        let (_, piv) = self.incl.rref();
        moved.select_cols(&piv)
    }

    /// Matrix (on Ext coordinates) of pulling back along `h: Z -> Z`.
    pub fn pullback_matrix(&self, h: &Mat) -> Mat {
        let p = self.z.p();
        let lift = self.lift_to_syzygy(h);
        let rows: Vec<Vec<u32>> = (0..self.dim())
            .map(|i| {
                let mut e = vec![0u32; self.dim()];
                e[i] = 1;
                let phi = self.representative(&e);
                self.class_of(&lift.mul(&phi))
            })
            .collect();
        Mat::from_rows_shaped(p, self.dim(), &rows)
    }
}

pub fn ext1_dim(z: &Module, x: &Module) -> usize {
    Extensions::new(z, x).dim()
}

/// `dim Ext^i(X, Y)` for `i >= 1`.
pub fn ext_dim(x: &Module, y: &Module, i: usize) -> usize {
    assert!(i >= 1, "Ext degree starts at 1");
    let z = syzygy_power(x, i - 1);
    if z.dim() == 0 {
        return 0;
    }
    ext1_dim(&z, y)
}

/// Indecomposable projectives `e_v A`, one per iso class.
pub fn indecomposable_projectives(alg: &Arc<Algebra>) -> Vec<Module> {
    let mut out: Vec<Module> = Vec::new();
    for v in 0..alg.vertex_count() {
        let (pv, _) = Module::vertex_projective(alg, v);
        if !out.iter().any(|q| indecomposable_iso(&pv, q).is_some()) {
            out.push(pv);
        }
    }
    out
}

/// Simple modules, one per iso class, in vertex order.
pub fn simple_modules(alg: &Arc<Algebra>) -> Vec<Module> {
    let mut out: Vec<Module> = Vec::new();
    for v in 0..alg.vertex_count() {
        let s = Module::vertex_top(alg, v);
        if !out.iter().any(|q| indecomposable_iso(&s, q).is_some()) {
            out.push(s);
        }
    }
    out
}

/// Indecomposable injectives `D(A e_v)`, one per iso class.
pub fn indecomposable_injectives(alg: &Arc<Algebra>) -> Vec<Module> {
    indecomposable_projectives(&alg.opposite()).iter().map(dual_d).collect()
}

/// Whether `X` has a nonzero projective direct summand.
pub fn has_projective_summand(x: &Module) -> Result<bool> {
    Ok(decompose(x)?.summands.iter().any(|s| s.module.is_projective()))
}

/// Whether `X` has a nonzero injective direct summand.
pub fn has_injective_summand(x: &Module) -> Result<bool> {
    Ok(decompose(x)?.summands.iter().any(|s| is_injective(&s.module)))
}

/// `X` with its projective summands removed.
pub fn strip_projectives(x: &Module) -> Result<Module> {
    let d = decompose(x)?;
    let keep: Vec<Module> = d
        .summands
        .iter()
        .filter(|s| !s.module.is_projective())
        .map(|s| s.module.clone())
        .collect();
    Ok(if keep.is_empty() { Module::zero(x.algebra()) } else { Module::direct_sum(&keep) })
}

/// Whether the rows of `sub` lie in `X * rad A` (superfluity of a kernel
/// inside a projective cover).
pub fn inside_radical(x: &Module, sub: &Mat) -> bool {
    rowspace::contains(&x.radical_submodule(), sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::isomorphic;
    use crate::zoo;

    #[test]
    fn cover_of_projective_is_identity() {
        let a = zoo::a3(3);
        let (p, _) = Module::vertex_projective(&a, 0);
        let (c, epi) = projective_cover(&p);
        assert_eq!(c.dim(), p.dim());
        assert!(epi.is_invertible());
    }

    #[test]
    fn injective_hull_of_socle_of_dual_numbers() {
        let a = zoo::dual_numbers(3);
        let s = Module::vertex_top(&a, 0);
        let (i, mono) = injective_hull(&s);
        assert_eq!(i.dim(), 2);
        assert!(isomorphic(&i, &Module::regular(&a)).unwrap());
        assert_eq!(mono.rank(), 1);
    }

    #[test]
    fn star_of_regular_module_is_regular_over_opposite() {
        let a = zoo::a3(2);
        let s = star(&Module::regular(&a));
        assert!(isomorphic(&s.module, &Module::regular(&a.opposite())).unwrap());
    }

    #[test]
    fn transpose_of_projective_vanishes() {
        let a = zoo::kronecker(2);
        assert_eq!(transpose(&Module::regular(&a)).dim(), 0);
    }

    #[test]
    fn transpose_of_injective_simple_of_kronecker() {
        let a = zoo::kronecker(2);
        let s = Module::vertex_top(&a, 0);
        // Presentation (0,1)^2 -> (1,2) -> S. Dualizing: each (0,1)^* = A e_2
        // is 3-dimensional and (1,2)^* = A e_1 is 1-dimensional, so Tr S has
        // dimension 2*3 - 1 = 5 and D Tr S is the preinjective (3,2).
        let (p1, p0, _) = presentation(&s);
        assert_eq!(p1.dim_vector(), vec![0, 2]);
        assert_eq!(p0.dim_vector(), vec![1, 2]);
        let t = transpose(&s);
        assert_eq!(t.dim(), 5);
        assert_eq!(dual_d(&t).dim_vector(), vec![3, 2]);
        assert!(isomorphic(&transpose(&t), &s).unwrap());
    }

    #[test]
    fn kronecker_ext_between_simples() {
        let a = zoo::kronecker(2);
        let s1 = Module::vertex_top(&a, 0);
        let s2 = Module::vertex_top(&a, 1);
        assert_eq!(ext_dim(&s1, &s2, 1), 2);
        assert_eq!(ext_dim(&s2, &s1, 1), 0);
        assert_eq!(ext_dim(&Module::regular(&a), &s1, 1), 0);
    }

    #[test]
    fn tau_inverse_on_kronecker_preprojectives() {
        let a = zoo::kronecker(2);
        for n in 0..4 {
            let x = zoo::kronecker_preprojective(&a, n);
            assert_eq!(tau_inv(&x).dim_vector(), vec![n + 2, n + 3]);
        }
    }

    #[test]
    fn realized_extension_is_exact() {
        let a = zoo::a2(5);
        let s1 = Module::vertex_top(&a, 0);
        let s2 = Module::vertex_top(&a, 1);
        let ext = Extensions::new(&s1, &s2);
        assert_eq!(ext.dim(), 1);
        let (e, f, g) = ext.realize(&[1]);
        assert_eq!(e.dim_vector(), vec![1, 1]);
        assert!(s2.is_hom_to(&e, &f));
        assert!(e.is_hom_to(&s1, &g));
        assert!(f.mul(&g).is_zero());
        assert!(e.is_projective());
    }
}
