//! A small collection of algebras and modules used by tests, examples and
//! the command line.

use std::sync::Arc;

use crate::algebra::{Algebra, Quiver};
use crate::linalg::Mat;
use crate::decompose::is_indecomposable;
use crate::error::{invariant, Result};
use crate::homological::Extensions;
use crate::module::{hom_basis, Module};
use crate::seq::ShortExactSeq;

fn build(name: &str, p: u32, q: Quiver) -> Arc<Algebra> {
    Algebra::from_quiver(name, p, &q).expect("zoo algebra")
}

/// The field itself.
pub fn field(p: u32) -> Arc<Algebra> {
    build("k", p, Quiver::new(&["1"], &[]))
}

/// `1 -> 2`.
pub fn a2(p: u32) -> Arc<Algebra> {
    build("A2", p, Quiver::new(&["1", "2"], &[("a", "1", "2")]))
}

/// `1 -> 2 -> 3`.
pub fn a3(p: u32) -> Arc<Algebra> {
    build("A3", p, Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]))
}

/// `1 -> 2 -> 3` with the composite set to zero.
pub fn a3_rad_square_zero(p: u32) -> Arc<Algebra> {
    build(
        "A3rss",
        p,
        Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).relation(&[(1, &["a", "b"])]),
    )
}

/// `F_p[x]/(x^n)`.
pub fn truncated(p: u32, n: usize) -> Arc<Algebra> {
    let path: Vec<&str> = vec!["x"; n];
    build(&format!("k[x]/x^{n}"), p, Quiver::new(&["1"], &[("x", "1", "1")]).relation(&[(1, &path)]))
}

pub fn dual_numbers(p: u32) -> Arc<Algebra> {
    truncated(p, 2)
}

/// Two-vertex cyclic quiver with radical square zero.
pub fn nakayama2(p: u32) -> Arc<Algebra> {
    build(
        "Nak2",
        p,
        Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")])
            .relation(&[(1, &["a", "b"])])
            .relation(&[(1, &["b", "a"])]),
    )
}

/// `1 => 2`.
pub fn kronecker(p: u32) -> Arc<Algebra> {
    build("Kronecker", p, Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]))
}

/// The finite-type test algebras, paired with short names.
pub fn finite_type(p: u32) -> Vec<(&'static str, Arc<Algebra>)> {
    vec![
        ("A2", a2(p)),
        ("A3", a3(p)),
        ("A3rss", a3_rad_square_zero(p)),
        ("k[x]/x^2", dual_numbers(p)),
        ("k[x]/x^3", truncated(p, 3)),
        ("Nak2", nakayama2(p)),
    ]
}

/// Look up a zoo algebra by its short name: `k`, `a2`, `a3`, `a3rss`,
/// `dual`, `truncated<n>`, `nak2` or `kronecker`.
pub fn by_name(name: &str, p: u32) -> Option<Arc<Algebra>> {
    let alg = match name {
        "k" | "field" => field(p),
        "a2" => a2(p),
        "a3" => a3(p),
        "a3rss" => a3_rad_square_zero(p),
        "dual" => dual_numbers(p),
        "nak2" => nakayama2(p),
        "kronecker" => kronecker(p),
        _ => {
            let n: usize = name.strip_prefix("truncated")?.parse().ok()?;
            if n < 1 {
                return None;
            }
            truncated(p, n)
        }
    };
    Some(alg)
}

/// Kronecker representation from two `d1 x d2` matrices.
pub fn kronecker_rep(alg: &Arc<Algebra>, a: Mat, b: Mat) -> Module {
    let dims = [a.rows(), a.cols()];
    Module::from_representation(alg, &dims, &[a, b]).expect("Kronecker representation")
}

/// The preprojective with dimension vector `(n, n+1)`.
pub fn kronecker_preprojective(alg: &Arc<Algebra>, n: usize) -> Module {
    let p = alg.p();
    let mut a = Mat::zeros(p, n, n + 1);
    let mut b = Mat::zeros(p, n, n + 1);
    for i in 0..n {
        a.set(i, i, 1);
        b.set(i, i + 1, 1);
    }
    kronecker_rep(alg, a, b)
}

/// The preinjective with dimension vector `(n+1, n)`.
pub fn kronecker_preinjective(alg: &Arc<Algebra>, n: usize) -> Module {
    let p = alg.p();
    let mut a = Mat::zeros(p, n + 1, n);
    let mut b = Mat::zeros(p, n + 1, n);
    for i in 0..n {
        a.set(i, i, 1);
        b.set(i + 1, i, 1);
    }
    kronecker_rep(alg, a, b)
}

/// Regular module `(n, n)`: first arrow the identity, second a Jordan
/// block with eigenvalue `lambda`.
pub fn kronecker_regular(alg: &Arc<Algebra>, n: usize, lambda: u32) -> Module {
    let p = alg.p();
    let a = Mat::identity(p, n);
    let mut b = Mat::identity(p, n).scale(lambda);
    for i in 0..n.saturating_sub(1) {
        b.set(i, i + 1, 1);
    }
    kronecker_rep(alg, a, b)
}

/// `F_p[x]/(x^n)` acting on `F_p[x]/(x^m)`, `m <= n`: a Jordan block.
pub fn truncated_module(alg: &Arc<Algebra>, m: usize) -> Module {
    let p = alg.p();
    let mut x = Mat::zeros(p, m, m);
    for i in 0..m.saturating_sub(1) {
        x.set(i, i + 1, 1);
    }
    let dims = [m];
    Module::from_representation(alg, &dims, &[x]).expect("Jordan block")
}

/// Nonzero coefficient vectors of length `n` over `F_p`, in lexicographic
/// order of the base-`p` counter.
fn coefficient_vectors(p: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).saturating_pow(n as u32);
    (1..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let v = (idx % p as u64) as u32;
                idx /= p as u64;
                v
            })
            .collect()
    })
}

/// `0 -> (2,3) -> (3,3) -> (1,0) -> 0` over the Kronecker algebra: the
/// first extension class (in counter order) with indecomposable middle.
pub fn kronecker_chain_start(alg: &Arc<Algebra>) -> Result<ShortExactSeq> {
    let x = kronecker_preprojective(alg, 2);
    let z = Module::vertex_top(alg, 0);
    let ext = Extensions::new(&z, &x);
    for class in coefficient_vectors(alg.p(), ext.dim()) {
        let (e, f, g) = ext.realize(&class);
        if is_indecomposable(&e)? {
            return ShortExactSeq::new(x, e, z, f, g);
        }
    }
    invariant("no extension of (1,0) by (2,3) has an indecomposable middle term")
}

/// `0 -> (2,3) -> (3,4) -> (1,1) -> 0` over the Kronecker algebra: the
/// first injective map (in counter order over a Hom basis) whose cokernel
/// is indecomposable.
pub fn kronecker_second_chain_start(alg: &Arc<Algebra>) -> Result<ShortExactSeq> {
    let x = kronecker_preprojective(alg, 2);
    let y = kronecker_preprojective(alg, 3);
    let basis = hom_basis(&x, &y);
    let p = alg.p();
    for c in coefficient_vectors(p, basis.len()) {
        let mut f = Mat::zeros(p, x.dim(), y.dim());
        for (m, &k) in basis.iter().zip(&c) {
            f.add_scaled(m, k);
        }
        if f.rank() != x.dim() {
            continue;
        }
        let (z, g, _) = y.hom_cokernel(&f);
        if is_indecomposable(&z)? {
            return ShortExactSeq::new(x, y, z, f, g);
        }
    }
    invariant("no injective map (2,3) -> (3,4) has an indecomposable cokernel")
}
