//! Iterating a perfect sequence towards a direct sum of almost split
//! sequences, and carrying the result along a tensor functor.

use serde::Serialize;

use crate::ar::{depth, is_node, sum_almost_split, Depth};
use crate::bimodule::{tensor_map, tensor_right, tensor_sequence, Bimodule, Tensor};
use crate::decompose::{canonical_label, canonicalize, decompose, normalize};
use crate::error::{invariant, precondition, Error, Result};
use crate::linalg::Mat;
use crate::module::{factor_from, stably_zero, Module};
use crate::seq::{merge_left, remove_split_summands, splice_snake_1, split_module, ShortExactSeq, SplitRemoval, SplitSide};

/// `eta~` together with the data used to build it.
#[derive(Clone, Debug)]
pub struct EtaTilde {
    /// `0 -> E_X -(v t)-> Y + T(X) -(g; w)-> Z -> 0`.
    pub seq: ShortExactSeq,
    /// `0 -> X -s-> E_X -t-> T(X) -> 0`.
    pub ar_sum: ShortExactSeq,
    /// `v: E_X -> Y` with `f = s v`.
    pub v: Mat,
    /// `w: T(X) -> Z`.
    pub w: Mat,
}

fn build_tilde(eta: &ShortExactSeq, ar_sum: ShortExactSeq, v: Mat) -> Result<EtaTilde> {
    let seq = merge_left(eta, &ar_sum, &v)?;
    let w = seq.g.block(eta.y.dim(), ar_sum.z.dim(), 0, eta.z.dim());
    Ok(EtaTilde { seq, ar_sum, v, w })
}

fn factor_first_map(eta: &ShortExactSeq, ar_sum: &ShortExactSeq) -> Result<Mat> {
    match factor_from(&ar_sum.y, &eta.y, &ar_sum.f, &eta.f) {
        Some(v) => Ok(v),
        None => invariant("f does not factor through the left almost split map"),
    }
}

/// Merge `eta` with the almost split sequences starting in the summands of
/// its first term. Requires `eta` perfect without split summands.
pub fn eta_tilde(eta: &ShortExactSeq) -> Result<EtaTilde> {
    eta.certify()?;
    if !remove_split_summands(eta)?.pieces.is_empty() {
        return precondition("sequence has a split summand");
    }
    if !eta.is_perfect()? {
        return precondition("sequence is not perfect");
    }
    let ar_sum = sum_almost_split(&eta.x)?;
    let v = factor_first_map(eta, &ar_sum)?;
    build_tilde(eta, ar_sum, v)
}

/// If `eta` is isomorphic to the sum of almost split sequences `ar_sum`
/// (same first term, `f = s v`), return the isomorphism
/// `(id, v, u): ar_sum -> eta`.
fn iso_from_ar_sum(eta: &ShortExactSeq, ar_sum: &ShortExactSeq, v: &Mat) -> Option<[Mat; 3]> {
    if v.rows() != v.cols() || v.inverse().is_none() {
        return None;
    }
    let u = factor_from(&ar_sum.z, &eta.z, &ar_sum.g, &v.mul(&eta.g))?;
    u.inverse()?;
    let maps = [Mat::identity(eta.x.p(), eta.x.dim()), v.clone(), u];
    ar_sum.is_morphism_to(eta, &maps).then_some(maps)
}

/// Whether `eta` is isomorphic, as a sequence, to the sum of the almost
/// split sequences starting in the summands of its first term; returns the
/// isomorphism `sum_almost_split(X) -> eta`.
pub fn almost_split_iso(eta: &ShortExactSeq) -> Result<Option<[Mat; 3]>> {
    let ar_sum = sum_almost_split(&eta.x)?;
    Ok(factor_from(&ar_sum.y, &eta.y, &ar_sum.f, &eta.f).and_then(|v| iso_from_ar_sum(eta, &ar_sum, &v)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ChainStatus {
    /// `eta_l` is a direct sum of almost split sequences.
    TerminatedAlmostSplit(usize),
    BoundExceeded(usize),
    SplitInput,
}

/// One step `eta_k -> eta~_k -> eta_(k+1)`.
#[derive(Clone, Debug)]
pub struct EtaStep {
    pub eta: ShortExactSeq,
    pub tilde: EtaTilde,
    /// Projections and sections between `eta~_k` and `eta_(k+1)`; the
    /// projection on the last term is `pi_k`.
    pub removal: SplitRemoval,
}

#[derive(Clone, Debug)]
pub struct EtaChain {
    pub steps: Vec<EtaStep>,
    /// `eta_l` when terminated, `eta_bound` when the bound was hit.
    pub last: ShortExactSeq,
    pub status: ChainStatus,
    /// `sum_almost_split(X_l) -> eta_l` when terminated.
    pub terminal_iso: Option<[Mat; 3]>,
}

impl EtaChain {
    /// The zero-step chain of a sequence isomorphic to a sum of almost split
    /// sequences. Unlike [`run_chain`] this does not reject nodes.
    pub fn from_almost_split(eta: &ShortExactSeq) -> Result<EtaChain> {
        eta.certify()?;
        match almost_split_iso(eta)? {
            Some(iso) => Ok(EtaChain {
                steps: vec![],
                last: eta.clone(),
                status: ChainStatus::TerminatedAlmostSplit(0),
                terminal_iso: Some(iso),
            }),
            None => precondition("sequence is not a sum of almost split sequences"),
        }
    }

    /// `eta_0, ..., eta_last`.
    pub fn sequences(&self) -> Vec<&ShortExactSeq> {
        let mut out: Vec<&ShortExactSeq> = self.steps.iter().map(|s| &s.eta).collect();
        out.push(&self.last);
        out
    }
}

/// Reject a first term with a node summand, naming the node.
fn check_no_node_summand(x: &Module) -> Result<()> {
    if x.dim() == 0 {
        return Ok(());
    }
    for s in decompose(x)?.summands {
        let m = &s.module;
        if m.radical_submodule().rows() == 0 && is_node(m)? {
            let (id, _) = canonicalize(m)?;
            return precondition(format!("first term has the node {} as a summand", canonical_label(x.algebra(), id)));
        }
    }
    Ok(())
}

/// Run the construction from `eta_0` until `eta_l` is a direct sum of
/// almost split sequences, or `bound` steps were taken.
pub fn run_chain(eta0: &ShortExactSeq, bound: usize) -> Result<EtaChain> {
    eta0.certify()?;
    if eta0.is_split() {
        return Ok(EtaChain { steps: vec![], last: eta0.clone(), status: ChainStatus::SplitInput, terminal_iso: None });
    }
    if !remove_split_summands(eta0)?.pieces.is_empty() {
        return precondition("sequence has a split summand");
    }
    if !eta0.is_perfect()? {
        return precondition("sequence is not perfect");
    }
    check_no_node_summand(&eta0.x)?;
    let mut steps = Vec::new();
    let mut cur = eta0.clone();
    for k in 0.. {
        let ar_sum = sum_almost_split(&cur.x)?;
        let v = factor_first_map(&cur, &ar_sum)?;
        if let Some(iso) = iso_from_ar_sum(&cur, &ar_sum, &v) {
            return Ok(EtaChain {
                steps,
                last: cur,
                status: ChainStatus::TerminatedAlmostSplit(k),
                terminal_iso: Some(iso),
            });
        }
        if k == bound {
            return Ok(EtaChain { steps, last: cur, status: ChainStatus::BoundExceeded(bound), terminal_iso: None });
        }
        let tilde = build_tilde(&cur, ar_sum, v)?;
        let removal = remove_split_summands(&tilde.seq)?;
        let next = removal.seq.clone();
        if next.is_zero() {
            return invariant(format!("step {k} removed everything without an almost split sequence"));
        }
        if !next.is_perfect()? {
            return invariant(format!("eta_{} is not perfect", k + 1));
        }
        steps.push(EtaStep { eta: cur, tilde, removal });
        cur = next;
    }
    unreachable!()
}

/// Depth of `f p` and `g pi` for the projections `p`, `pi` onto the
/// indecomposable summands of the middle and last terms.
#[derive(Clone, Debug, Serialize)]
pub struct DepthReport {
    pub first: Vec<(String, Depth)>,
    pub second: Vec<(String, Depth)>,
}

impl DepthReport {
    pub fn all_finite(&self) -> bool {
        self.first.iter().chain(&self.second).all(|(_, d)| d.is_finite())
    }
}

fn component_depths(src: &Module, tgt: &Module, map: &Mat, bound: usize) -> Result<Vec<(String, Depth)>> {
    let alg = tgt.algebra();
    let nt = normalize(tgt)?;
    let moved = map.mul(&nt.iso);
    let mut out = Vec::new();
    for (blk, (off, size)) in nt.module.block_modules().into_iter().zip(nt.module.block_ranges()) {
        let label = match nt.module.parts().and_then(|ps| ps.get(out.len())).and_then(|pt| pt.canon) {
            Some(id) => canonical_label(alg, id),
            None => format!("{:?}", blk.dim_vector()),
        };
        let comp = moved.block(0, src.dim(), off, size);
        out.push((label, depth(src, &blk, &comp, bound)?));
    }
    Ok(out)
}

/// Depths of the components of `f` and `g`, examined up to `rad^bound`.
pub fn depth_hypothesis(eta: &ShortExactSeq, bound: usize) -> Result<DepthReport> {
    Ok(DepthReport {
        first: component_depths(&eta.x, &eta.y, &eta.f, bound)?,
        second: component_depths(&eta.y, &eta.z, &eta.g, bound)?,
    })
}

/// A perfect sequence over `B` carried along `- (x)_A M` by rebuilding the
/// chain on the `B` side.
#[derive(Clone, Debug)]
pub struct Transported {
    /// `eta^_0: 0 -> X (x) M -> (Y (x) M) + P -> Z (x) M -> 0`.
    pub seq: ShortExactSeq,
    /// Dimension of the projective block `P` at the end of the middle term.
    pub projective_dim: usize,
    /// `eta^_l, ..., eta^_0`.
    pub rebuilt: Vec<ShortExactSeq>,
}

fn transport_error(k: usize, msg: &str) -> Error {
    Error::Invariant(format!("transport at degree {k}: {msg}"))
}

/// The almost split sum over `B` starting in the first term of `image`,
/// with its isomorphism `(id, v, u)` onto `image`.
fn native_almost_split(image: &ShortExactSeq, k: usize) -> Result<(ShortExactSeq, [Mat; 3])> {
    let native = sum_almost_split(&image.x)?;
    let v = factor_from(&native.y, &image.y, &native.f, &image.f)
        .ok_or_else(|| transport_error(k, "image of the almost split sum is not almost split"))?;
    let iso = iso_from_ar_sum(image, &native, &v)
        .ok_or_else(|| transport_error(k, "image of the almost split sum is not almost split"))?;
    Ok((native, iso))
}

/// Rows of `h: W -> Y + T` pushed through the functor into
/// `(Y (x) M) + (T (x) M)`.
fn tensor_split_columns(tw: &Tensor, ty: &Tensor, tt: &Tensor, h: &Mat, dy: usize, m: &Bimodule) -> Mat {
    let left = tensor_map(tw, ty, &h.block(0, h.rows(), 0, dy), m);
    let right = tensor_map(tw, tt, &h.block(0, h.rows(), dy, h.cols() - dy), m);
    left.hstack(&right)
}

fn inverse(m: &Mat, k: usize, what: &str) -> Result<Mat> {
    m.inverse().ok_or_else(|| transport_error(k, &format!("{what} is not invertible")))
}

/// One step down: from `eta^_(k+1)` to `eta^_k`.
fn transport_step(step: &EtaStep, next: &ShortExactSeq, next_pdim: usize, m: &Bimodule, k: usize) -> Result<ShortExactSeq> {
    let p = step.eta.x.p();
    let alg_b = m.right_algebra();
    let ar = &step.tilde.ar_sum;
    let (tx, te, tt) = (tensor_right(&ar.x, m)?, tensor_right(&ar.y, m)?, tensor_right(&ar.z, m)?);
    let (ty, tz) = (tensor_right(&step.eta.y, m)?, tensor_right(&step.eta.z, m)?);
    let image = ShortExactSeq::new(
        tx.module.clone(),
        te.module.clone(),
        tt.module.clone(),
        tensor_map(&tx, &te, &ar.f, m),
        tensor_map(&te, &tt, &ar.g, m),
    )?;
    let (native, [_, vn, un]) = native_almost_split(&image, k)?;

    // Phi(split pieces) + eta^_(k+1), in the order used by `reassemble`.
    let zero = Module::zero(alg_b);
    let dy = step.eta.y.dim();
    let mut parts = Vec::new();
    let (mut rx, mut ry, mut rz) = (Vec::new(), Vec::new(), Vec::new());
    for pc in &step.removal.pieces {
        let tw = tensor_right(&pc.module, m)?;
        match pc.side {
            SplitSide::Left => {
                parts.push(ShortExactSeq::split(&tw.module, &zero));
                rx.push(tensor_map(&tw, &te, &pc.first, m));
                ry.push(tensor_split_columns(&tw, &ty, &tt, &pc.second, dy, m));
            }
            SplitSide::Right => {
                parts.push(ShortExactSeq::split(&zero, &tw.module));
                ry.push(tensor_split_columns(&tw, &ty, &tt, &pc.first, dy, m));
                rz.push(tensor_map(&tw, &tz, &pc.second, m));
            }
        }
    }
    let rest = &step.removal.seq;
    let (rx_t, ry_t, rz_t) = (tensor_right(&rest.x, m)?, tensor_right(&rest.y, m)?, tensor_right(&rest.z, m)?);
    if next.x.dim() != rx_t.module.dim() || next.z.dim() != rz_t.module.dim() || next.y.dim() != ry_t.module.dim() + next_pdim {
        return Err(transport_error(k, "rebuilt sequence does not match the image of the next step"));
    }
    parts.push(next.clone());
    rx.push(tensor_map(&rx_t, &te, &step.removal.sx, m));
    ry.push(tensor_split_columns(&ry_t, &ty, &tt, &step.removal.sy, dy, m));
    rz.push(tensor_map(&rz_t, &tz, &step.removal.sz, m));
    let rho = ShortExactSeq::direct_sum(&parts);
    let (dty, dtt) = (ty.module.dim(), tt.module.dim());

    // X: rho.x -> E (x) M -> E^.
    let psi_x = Mat::vstack_all(p, te.module.dim(), &rx).mul(&inverse(&vn, k, "v")?);
    // Y: rho.y -> ((Y (x) M) + P) + T^, with P passed through unchanged.
    let phi_rows = Mat::vstack_all(p, dty + dtt, &ry);
    let n_phi = phi_rows.rows();
    let mut psi_y = Mat::zeros(p, n_phi + next_pdim, dty + next_pdim + dtt);
    psi_y.set_block(0, 0, &phi_rows.block(0, n_phi, 0, dty));
    psi_y.set_block(0, dty + next_pdim, &phi_rows.block(0, n_phi, dty, dtt).mul(&inverse(&un, k, "u")?));
    // The P block of `next` sits at the end of its middle term, which is
    // the end of rho.y as well.
    psi_y.set_block(n_phi, dty, &Mat::identity(p, next_pdim));
    let psi_z = Mat::vstack_all(p, tz.module.dim(), &rz);

    let (psi_x_inv, psi_y_inv) = (inverse(&psi_x, k, "first-term map")?, inverse(&psi_y, k, "middle-term map")?);
    inverse(&psi_z, k, "last-term map")?;
    let y_left = if next_pdim == 0 {
        ty.module.clone()
    } else {
        ty.module.direct_sum2(&split_module(&next.y, next.y.dim() - next_pdim)?.1)
    };
    let s2 = ShortExactSeq::new(
        native.y.clone(),
        y_left.direct_sum2(&native.z),
        tz.module.clone(),
        psi_x_inv.mul(&rho.f).mul(&psi_y),
        psi_y_inv.mul(&rho.g).mul(&psi_z),
    )
    .map_err(|e| transport_error(k, &format!("conjugated sequence is not exact: {e}")))?;
    splice_snake_1(&native, &s2).map_err(|e| transport_error(k, &format!("splice failed: {e}")))
}

/// Carry a terminated chain along `- (x)_A M`. The last sequence is mapped
/// to an almost split sum over `B`, then every step is rebuilt on the `B`
/// side with the first snake splice. Requires `M` projective on both sides,
/// so the functor is exact.
pub fn transport(chain: &EtaChain, m: &Bimodule) -> Result<Transported> {
    let l = match chain.status {
        ChainStatus::TerminatedAlmostSplit(l) => l,
        _ => return precondition("transport needs a chain that terminated in almost split sequences"),
    };
    if !m.as_left_module().is_projective() || !m.as_right_module().is_projective() {
        return precondition("the bimodule must be projective on both sides");
    }
    let mut hat = tensor_sequence(&chain.last, m)?;
    if !hat.is_zero() {
        let trimmed = remove_split_summands(&hat)?.seq;
        if !trimmed.is_zero() && almost_split_iso(&trimmed)?.is_none() {
            return Err(transport_error(l, "image of the last sequence is not almost split"));
        }
    }
    let mut rebuilt = vec![hat.clone()];
    let mut pdim = 0;
    for k in (0..l).rev() {
        hat = transport_step(&chain.steps[k], &hat, pdim, m, k)?;
        pdim = hat.y.dim() - tensor_right(&chain.steps[k].eta.y, m)?.module.dim();
        rebuilt.push(hat.clone());
    }
    // Compare with the direct image of eta_0.
    let eta0 = chain.sequences()[0].clone();
    let direct = tensor_sequence(&eta0, m)?;
    let dy = direct.y.dim();
    let f_diff = hat.f.block(0, hat.x.dim(), 0, dy).sub(&direct.f);
    let g_diff = hat.g.block(0, dy, 0, hat.z.dim()).sub(&direct.g);
    if !stably_zero(&direct.x, &direct.y, &f_diff) || !stably_zero(&direct.y, &direct.z, &g_diff) {
        return Err(transport_error(0, "rebuilt maps differ stably from the image of eta_0"));
    }
    if pdim > 0 && !split_module(&hat.y, dy)?.1.is_projective() {
        return Err(transport_error(0, "extra middle summand is not projective"));
    }
    Ok(Transported { seq: hat, projective_dim: pdim, rebuilt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ar::almost_split_starting;
    use crate::zoo;

    #[test]
    fn almost_split_input_terminates_at_once() {
        let a = zoo::kronecker(2);
        let s = almost_split_starting(&zoo::kronecker_preprojective(&a, 2)).unwrap().seq;
        let chain = run_chain(&s, 5).unwrap();
        assert_eq!(chain.status, ChainStatus::TerminatedAlmostSplit(0));
        let t = eta_tilde(&s).unwrap();
        assert!(t.v.inverse().is_some());
        assert!(t.seq.is_split());
    }

    #[test]
    fn kronecker_first_chain_start() {
        let a = zoo::kronecker(2);
        let eta = zoo::kronecker_chain_start(&a).unwrap();
        assert_eq!(eta.dim_vectors(), [vec![2, 3], vec![3, 3], vec![1, 0]]);
        let t = eta_tilde(&eta).unwrap();
        assert_eq!(t.ar_sum.y.dim_vector(), vec![6, 8]);
        assert_eq!(t.seq.y.dim_vector(), vec![7, 8]);
        let chain = run_chain(&eta, 2).unwrap();
        assert_eq!(chain.status, ChainStatus::BoundExceeded(2));
        let dims: Vec<_> = chain.sequences().iter().map(|s| s.dim_vectors()).collect();
        assert_eq!(dims[1], [vec![6, 8], vec![7, 8], vec![1, 0]]);
        assert_eq!(dims[2], [vec![12, 15], vec![13, 15], vec![1, 0]]);
    }

    #[test]
    fn depths_of_an_almost_split_sequence_are_one() {
        let a = zoo::a3(3);
        let s = almost_split_starting(&Module::vertex_top(&a, 1)).unwrap().seq;
        let r = depth_hypothesis(&s, 6).unwrap();
        assert!(r.first.iter().chain(&r.second).all(|(_, d)| *d == Depth::Finite(1)));
    }

    #[test]
    fn transport_along_the_identity_recovers_the_chain() {
        let a = zoo::a3(2);
        let reg = Bimodule::regular(&a).unwrap();
        let s = Module::vertex_top(&a, 1);
        let ar = almost_split_starting(&s).unwrap().seq;
        let chain = run_chain(&ar, 4).unwrap();
        let t = transport(&chain, &reg).unwrap();
        assert_eq!(t.projective_dim, 0);
        assert_eq!(t.seq.dim_vectors(), ar.dim_vectors());
        assert!(t.seq.is_perfect().unwrap());
    }

    #[test]
    fn transport_over_the_dual_numbers_keeps_the_almost_split_sequence() {
        let a = zoo::dual_numbers(3);
        let reg = Bimodule::regular(&a).unwrap();
        let ar = almost_split_starting(&Module::vertex_top(&a, 0)).unwrap().seq;
        let t = transport(&EtaChain::from_almost_split(&ar).unwrap(), &reg).unwrap();
        assert_eq!(t.seq.dim_vectors(), [vec![1], vec![2], vec![1]]);
        assert!(almost_split_iso(&t.seq).unwrap().is_some());
    }

    #[test]
    fn node_in_first_term_is_rejected() {
        let a = zoo::a3_rad_square_zero(2);
        let s2 = Module::vertex_top(&a, 1);
        let ar = almost_split_starting(&s2).unwrap().seq;
        let err = run_chain(&ar, 3).unwrap_err();
        assert!(err.to_string().contains("node"));
    }
}
