//! Finite-dimensional algebras over `F_p` given by structure constants.
//!
//! Multiplication is stored as right-multiplication matrices: row `i` of
//! `right[j]` holds the coordinates of `b_i * b_j`. Left-multiplication
//! matrices (`left[i]`, row `j` = `b_i * b_j`) are kept alongside, so the
//! opposite algebra is obtained by swapping the two lists.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock, Weak};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_char, rowspace, Mat};

/// Default degree at which quiver quotients are declared infinite.
pub const DEFAULT_DEGREE_LIMIT: usize = 64;
const PATH_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTerm {
    pub coeff: i64,
    pub path: Vec<String>,
}

/// A quiver with relations. Arrows compose left to right: `a` then `b` is
/// the path `["a", "b"]`, defined when `tgt(a) = src(b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub relations: Vec<Vec<RelationTerm>>,
}

impl Quiver {
    pub fn new(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Quiver {
        Quiver {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|&(n, s, t)| ArrowSpec { name: n.into(), src: s.into(), tgt: t.into() })
                .collect(),
            relations: Vec::new(),
        }
    }

    pub fn relation(mut self, terms: &[(i64, &[&str])]) -> Quiver {
        self.relations.push(
            terms
                .iter()
                .map(|(c, p)| RelationTerm { coeff: *c, path: p.iter().map(|s| s.to_string()).collect() })
                .collect(),
        );
        self
    }

    /// Same vertices, every arrow reversed, relation paths read backwards.
    pub fn reversed(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowSpec { name: a.name.clone(), src: a.tgt.clone(), tgt: a.src.clone() })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|t| RelationTerm {
                            coeff: t.coeff,
                            path: t.path.iter().rev().cloned().collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// A path in a quiver: start vertex plus arrow indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

/// Bookkeeping kept for quiver-built algebras: which basis element is which
/// vertex or arrow.
#[derive(Clone, Debug)]
pub struct QuiverData {
    pub quiver: Quiver,
    pub paths: Vec<Path>,
    pub arrow_basis: Vec<usize>,
    pub vertex_basis: Vec<usize>,
}

/// Per-algebra caches used by the module layer (canonical indecomposables,
/// almost split sequences). Entries store raw matrices, never modules, so
/// that no reference cycle to the algebra is formed.
#[derive(Default)]
pub(crate) struct Caches {
    pub canon: Vec<crate::module::CanonEntry>,
    pub ar: HashMap<usize, crate::ar::ArRecord>,
    pub hom: HashMap<(usize, usize), Arc<Vec<Mat>>>,
    /// Canonical ids of the summands of `A_A`.
    pub regular: Option<Vec<usize>>,
    /// `A^op (x) B` per right factor `B`.
    pub envelopes: Vec<(Weak<Algebra>, Arc<Algebra>)>,
}

pub struct Algebra {
    p: u32,
    dim: usize,
    labels: Vec<String>,
    right: Vec<Mat>,
    left: Vec<Mat>,
    unit: Vec<u32>,
    idempotents: Vec<Vec<u32>>,
    vertex_labels: Vec<String>,
    radical: Mat,
    generators: Vec<usize>,
    quiver: Option<QuiverData>,
    name: String,
    fingerprint: u64,
    op_forward: OnceLock<Arc<Algebra>>,
    op_back: Weak<Algebra>,
    pub(crate) caches: Mutex<Caches>,
    pub(crate) registry_gate: Mutex<()>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra({}, F_{}, dim {})", self.name, self.p, self.dim)
    }
}

/// Raw data accepted by `Algebra::from_structure`.
#[derive(Clone, Debug)]
pub struct StructureData {
    pub p: u32,
    pub labels: Vec<String>,
    /// `constants[i][j]` = coordinates of `b_i * b_j`.
    pub constants: Vec<Vec<Vec<u32>>>,
    pub unit: Vec<u32>,
    pub idempotents: Vec<Vec<u32>>,
    pub vertex_labels: Vec<String>,
    /// Rows span the Jacobson radical.
    pub radical: Vec<Vec<u32>>,
}

fn fingerprint(p: u32, right: &[Mat]) -> u64 {
    let mut h = DefaultHasher::new();
    p.hash(&mut h);
    right.len().hash(&mut h);
    for m in right {
        m.data().hash(&mut h);
    }
    h.finish()
}

impl Algebra {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }
    pub fn idempotents(&self) -> &[Vec<u32>] {
        &self.idempotents
    }
    pub fn vertex_count(&self) -> usize {
        self.idempotents.len()
    }
    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }
    pub fn radical(&self) -> &Mat {
        &self.radical
    }
    /// Basis indices whose elements generate the algebra.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }
    pub fn quiver(&self) -> Option<&QuiverData> {
        self.quiver.as_ref()
    }
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
    /// Matrix of `x -> x * b_j` in row convention.
    pub fn right_mult(&self, j: usize) -> &Mat {
        &self.right[j]
    }
    /// Matrix of `y -> b_i * y` in row convention.
    pub fn left_mult(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    /// Structural equality: same field and identical structure constants.
    pub fn same_as(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other)
            || (self.fingerprint == other.fingerprint
                && self.p == other.p
                && self.right == other.right
                && self.idempotents == other.idempotents)
    }

    /// Matrix of right multiplication by an arbitrary element.
    pub fn right_mult_by(&self, a: &[u32]) -> Mat {
        combine(self.p, self.dim, &self.right, a)
    }

    pub fn left_mult_by(&self, a: &[u32]) -> Mat {
        combine(self.p, self.dim, &self.left, a)
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        Mat::row_vector(self.p, a).mul(&self.right_mult_by(b)).row(0).to_vec()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    fn build(
        name: String,
        p: u32,
        labels: Vec<String>,
        right: Vec<Mat>,
        unit: Vec<u32>,
        idempotents: Vec<Vec<u32>>,
        vertex_labels: Vec<String>,
        radical: Mat,
        generators: Vec<usize>,
        quiver: Option<QuiverData>,
        op_back: Weak<Algebra>,
    ) -> Algebra {
        let dim = right.len();
        let mut left = vec![Mat::zeros(p, dim, dim); dim];
        for (j, r) in right.iter().enumerate() {
            for i in 0..dim {
                for k in 0..dim {
                    let v = r.get(i, k);
                    if v != 0 {
                        left[i].set(j, k, v);
                    }
                }
            }
        }
        let fingerprint = fingerprint(p, &right);
        Algebra {
            p,
            dim,
            labels,
            right,
            left,
            unit,
            idempotents,
            vertex_labels,
            radical,
            generators,
            quiver,
            name,
            fingerprint,
            op_forward: OnceLock::new(),
            op_back,
            caches: Mutex::new(Caches::default()),
            registry_gate: Mutex::new(()),
        }
    }

    /// Build from raw structure constants, validating every axiom.
    pub fn from_structure(name: &str, data: StructureData) -> Result<Arc<Algebra>> {
        check_char(data.p)?;
        let p = data.p;
        let dim = data.constants.len();
        if dim == 0 {
            return Err(Error::Input("algebra of dimension zero".into()));
        }
        let mut right = vec![Mat::zeros(p, dim, dim); dim];
        for (i, row) in data.constants.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Input(format!("structure constants row {i} has wrong length")));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::Input(format!("product b_{i} b_{j} has wrong length")));
                }
                for (k, &c) in v.iter().enumerate() {
                    right[j].set(i, k, c % p);
                }
            }
        }
        let check_vec = |v: &Vec<u32>, what: &str| -> Result<Vec<u32>> {
            if v.len() != dim {
                return Err(Error::Input(format!("{what} has length {} instead of {dim}", v.len())));
            }
            Ok(v.iter().map(|&x| x % p).collect())
        };
        let unit = check_vec(&data.unit, "unit")?;
        let idempotents = data
            .idempotents
            .iter()
            .map(|e| check_vec(e, "idempotent"))
            .collect::<Result<Vec<_>>>()?;
        let rad_rows = data
            .radical
            .iter()
            .map(|r| check_vec(r, "radical vector"))
            .collect::<Result<Vec<_>>>()?;
        let radical = Mat::from_rows_shaped(p, dim, &rad_rows).row_basis();
        let vertex_labels = if data.vertex_labels.len() == idempotents.len() {
            data.vertex_labels
        } else {
            (1..=idempotents.len()).map(|i| i.to_string()).collect()
        };
        let labels = if data.labels.len() == dim {
            data.labels
        } else {
            (0..dim).map(|i| format!("b{i}")).collect()
        };
        let alg = Algebra::build(
            name.to_string(),
            p,
            labels,
            right,
            unit,
            idempotents,
            vertex_labels,
            radical,
            (0..dim).collect(),
            None,
            Weak::new(),
        );
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    /// Check associativity, unit, idempotents and the radical.
    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        let dim = self.dim;
        // (b_i b_j) b_k = b_i (b_j b_k)  <=>  R_j R_k = sum_l c_{jkl} R_l
        for j in 0..dim {
            for k in 0..dim {
                let lhs = self.right[j].mul(&self.right[k]);
                let prod = self.right[k].row(j).to_vec();
                let rhs = combine(p, dim, &self.right, &prod);
                if lhs != rhs {
                    return Err(Error::Input(format!("multiplication is not associative at ({j},{k})")));
                }
            }
        }
        let r1 = self.right_mult_by(&self.unit);
        let l1 = self.left_mult_by(&self.unit);
        if r1 != Mat::identity(p, dim) || l1 != Mat::identity(p, dim) {
            return Err(Error::Input("unit law fails".into()));
        }
        let mut sum = vec![0u32; dim];
        for (i, e) in self.idempotents.iter().enumerate() {
            for (j, f) in self.idempotents.iter().enumerate() {
                let ef = self.mul(e, f);
                let expect = if i == j { e.clone() } else { vec![0; dim] };
                if ef != expect {
                    return Err(Error::Input(format!("idempotents {i},{j} are not orthogonal idempotents")));
                }
            }
            for (s, &x) in sum.iter_mut().zip(e) {
                *s = (*s + x) % p;
            }
        }
        if sum != self.unit {
            return Err(Error::Input("idempotents do not sum to the unit".into()));
        }
        // Two-sided ideal.
        let rad = &self.radical;
        for b in 0..dim {
            let rr = rad.mul(&self.right[b]);
            let lr = rad.mul(&self.left[b]);
            if !rowspace::contains(rad, &rr) || !rowspace::contains(rad, &lr) {
                return Err(Error::Input("radical is not a two-sided ideal".into()));
            }
        }
        // Nilpotent: rad^k shrinks to zero.
        let mut power = rad.clone();
        let mut steps = 0;
        while power.rows() > 0 {
            let mut next = Mat::zeros(p, 0, dim);
            for r in 0..rad.rows() {
                let m = self.right_mult_by(rad.row(r));
                next = next.vstack(&power.mul(&m));
            }
            power = next.row_basis();
            steps += 1;
            if steps > dim + 1 {
                return Err(Error::Input("radical is not nilpotent".into()));
            }
        }
        // Each e A e / e rad e must be a division ring; for a local corner the
        // radical part has codimension equal to the corner's top. We check
        // that e is not in the radical and that e A e / e rad e has no
        // nonzero nilpotent coming from outside the radical (spot check:
        // e itself is not nilpotent).
        for e in &self.idempotents {
            if rowspace::contains(rad, &Mat::row_vector(p, e)) {
                return Err(Error::Input("an idempotent lies in the radical".into()));
            }
        }
        Ok(())
    }

    /// Path algebra of a quiver modulo an admissible ideal, computed degree
    /// by degree.
    pub fn from_quiver(name: &str, p: u32, q: &Quiver) -> Result<Arc<Algebra>> {
        Algebra::from_quiver_with_limit(name, p, q, DEFAULT_DEGREE_LIMIT)
    }

    pub fn from_quiver_with_limit(
        name: &str,
        p: u32,
        q: &Quiver,
        degree_limit: usize,
    ) -> Result<Arc<Algebra>> {
        check_char(p)?;
        let nv = q.vertices.len();
        if nv == 0 {
            return Err(Error::Input("quiver without vertices".into()));
        }
        let vindex: HashMap<&str, usize> =
            q.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if vindex.len() != nv {
            return Err(Error::Input("duplicate vertex label".into()));
        }
        let mut arrows = Vec::new();
        let mut aindex = HashMap::new();
        for (i, a) in q.arrows.iter().enumerate() {
            let s = *vindex
                .get(a.src.as_str())
                .ok_or_else(|| Error::Input(format!("arrow {} has unknown source {}", a.name, a.src)))?;
            let t = *vindex
                .get(a.tgt.as_str())
                .ok_or_else(|| Error::Input(format!("arrow {} has unknown target {}", a.name, a.tgt)))?;
            if aindex.insert(a.name.as_str(), i).is_some() {
                return Err(Error::Input(format!("duplicate arrow name {}", a.name)));
            }
            arrows.push((s, t));
        }
        let end_of = |path: &Path| path.arrows.last().map_or(path.start, |&a| arrows[a].1);

        // Relations as lists of (coeff, path).
        let mut relations: Vec<Vec<(u32, Path)>> = Vec::new();
        let mut max_rel = 0;
        for rel in &q.relations {
            let mut terms = Vec::new();
            let mut ends: Option<(usize, usize)> = None;
            for t in rel {
                if t.path.len() < 2 {
                    return Err(Error::Input("relation terms must be paths of length at least 2".into()));
                }
                let mut idx = Vec::new();
                for name in &t.path {
                    idx.push(
                        *aindex
                            .get(name.as_str())
                            .ok_or_else(|| Error::Input(format!("unknown arrow {name} in relation")))?,
                    );
                }
                for w in idx.windows(2) {
                    if arrows[w[0]].1 != arrows[w[1]].0 {
                        return Err(Error::Input(format!("relation path {:?} is not composable", t.path)));
                    }
                }
                let path = Path { start: arrows[idx[0]].0, arrows: idx };
                let se = (path.start, end_of(&path));
                match ends {
                    None => ends = Some(se),
                    Some(x) if x != se => {
                        return Err(Error::Input("relation mixes non-parallel paths".into()));
                    }
                    _ => {}
                }
                max_rel = max_rel.max(path.arrows.len());
                terms.push((crate::linalg::reduce(t.coeff, p), path));
            }
            relations.push(terms);
        }

        // paths[d] = all paths of length d
        let mut by_len: Vec<Vec<Path>> = vec![(0..nv).map(|v| Path { start: v, arrows: vec![] }).collect()];
        let mut prev_dim: Option<usize> = None;
        let mut result: Option<(Vec<Path>, Mat, Vec<usize>)> = None;
        for d in 1..=degree_limit {
            let mut next = Vec::new();
            for path in &by_len[d - 1] {
                let e = end_of(path);
                for (ai, &(s, _)) in arrows.iter().enumerate() {
                    if s == e {
                        let mut a = path.arrows.clone();
                        a.push(ai);
                        next.push(Path { start: path.start, arrows: a });
                    }
                }
            }
            by_len.push(next);
            let all: Vec<Path> = by_len.iter().flatten().cloned().collect();
            if all.len() > PATH_LIMIT {
                return Err(Error::Input(format!(
                    "quotient does not stabilize before {PATH_LIMIT} paths (degree {d})"
                )));
            }
            // Column order: longest paths first so that pivots land on them.
            let mut order: Vec<usize> = (0..all.len()).collect();
            order.sort_by(|&x, &y| all[y].arrows.len().cmp(&all[x].arrows.len()).then(x.cmp(&y)));
            let col_of: HashMap<&Path, usize> =
                order.iter().enumerate().map(|(c, &i)| (&all[i], c)).collect();
            let mut rows: Vec<Vec<u32>> = Vec::new();
            for rel in &relations {
                let rs = rel[0].1.start;
                let re = end_of(&rel[0].1);
                let minlen = rel.iter().map(|t| t.1.arrows.len()).min().unwrap();
                if minlen > d {
                    continue;
                }
                for lu in 0..=(d - minlen) {
                    for u in by_len[lu].iter().filter(|u| end_of(u) == rs) {
                        for lw in 0..=(d - minlen - lu) {
                            for w in by_len[lw].iter().filter(|w| w.start == re) {
                                let mut row = vec![0u32; all.len()];
                                let mut any = false;
                                for (c, t) in rel {
                                    let len = lu + t.arrows.len() + lw;
                                    if len > d {
                                        continue;
                                    }
                                    let mut a = u.arrows.clone();
                                    a.extend(&t.arrows);
                                    a.extend(&w.arrows);
                                    let full = Path { start: u.start, arrows: a };
                                    let col = col_of[&full];
                                    row[col] = (row[col] + c) % p;
                                    any = true;
                                }
                                if any {
                                    rows.push(row);
                                }
                            }
                        }
                    }
                }
            }
            let t = Mat::from_rows_shaped(p, all.len(), &rows);
            let (r, piv) = t.rref();
            let dim = all.len() - piv.len();
            if d > max_rel && prev_dim == Some(dim) {
                let reduced = r.block(0, piv.len(), 0, all.len());
                let ordered_paths: Vec<Path> = order.iter().map(|&i| all[i].clone()).collect();
                result = Some((ordered_paths, reduced, piv));
                break;
            }
            prev_dim = Some(dim);
        }
        let Some((cols, reduced, piv)) = result else {
            return Err(Error::Input(format!(
                "path quotient did not stabilize by degree {degree_limit}; relations not admissible?"
            )));
        };
        let max_len = cols.iter().map(|c| c.arrows.len()).max().unwrap_or(0);
        // Basis: non-pivot columns, ordered by length then enumeration.
        let mut basis_cols: Vec<usize> = (0..cols.len()).filter(|c| !piv.contains(c)).collect();
        basis_cols.sort_by(|&x, &y| {
            cols[x].arrows.len().cmp(&cols[y].arrows.len()).then(cols[x].cmp(&cols[y]))
        });
        // Vertices in quiver order, arrows in quiver order, then the rest.
        basis_cols.sort_by_key(|&c| {
            let path = &cols[c];
            match path.arrows.len() {
                0 => (0, path.start, Vec::new()),
                1 => (1, path.arrows[0], Vec::new()),
                l => (l, 0, path.arrows.clone()),
            }
        });
        let dim = basis_cols.len();
        let basis_pos: HashMap<usize, usize> =
            basis_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let pivot_row: HashMap<usize, usize> = piv.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let col_of: HashMap<&Path, usize> = cols.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // Normal form of a path as coordinates in the chosen basis.
        let normal_form = |path: &Path| -> Vec<u32> {
            let mut v = vec![0u32; dim];
            if path.arrows.len() > max_len {
                return v;
            }
            let c = col_of[path];
            if let Some(&b) = basis_pos.get(&c) {
                v[b] = 1;
            } else {
                let r = pivot_row[&c];
                for (&bc, &b) in &basis_pos {
                    let x = reduced.get(r, bc);
                    if x != 0 {
                        v[b] = (p - x) % p;
                    }
                }
            }
            v
        };
        let paths: Vec<Path> = basis_cols.iter().map(|&c| cols[c].clone()).collect();
        let mut right = vec![Mat::zeros(p, dim, dim); dim];
        for (i, pi) in paths.iter().enumerate() {
            for (j, pj) in paths.iter().enumerate() {
                let prod = if end_of(pi) != pj.start {
                    None
                } else if pj.arrows.is_empty() {
                    Some(pi.clone())
                } else if pi.arrows.is_empty() {
                    Some(pj.clone())
                } else {
                    let mut a = pi.arrows.clone();
                    a.extend(&pj.arrows);
                    Some(Path { start: pi.start, arrows: a })
                };
                if let Some(prod) = prod {
                    let v = normal_form(&prod);
                    for (k, &x) in v.iter().enumerate() {
                        if x != 0 {
                            right[j].set(i, k, x);
                        }
                    }
                }
            }
        }
        let vertex_basis: Vec<usize> = (0..nv)
            .map(|v| paths.iter().position(|pp| pp.arrows.is_empty() && pp.start == v).unwrap())
            .collect();
        let arrow_basis: Vec<usize> = (0..arrows.len())
            .map(|a| {
                paths
                    .iter()
                    .position(|pp| pp.arrows == [a])
                    .ok_or_else(|| Error::Input("an arrow vanishes in the quotient".into()))
            })
            .collect::<Result<_>>()?;
        let mut unit = vec![0u32; dim];
        let idempotents: Vec<Vec<u32>> = vertex_basis
            .iter()
            .map(|&b| {
                unit[b] = 1;
                let mut e = vec![0; dim];
                e[b] = 1;
                e
            })
            .collect();
        let rad_rows: Vec<Vec<u32>> = paths
            .iter()
            .enumerate()
            .filter(|(_, pp)| !pp.arrows.is_empty())
            .map(|(i, _)| {
                let mut v = vec![0; dim];
                v[i] = 1;
                v
            })
            .collect();
        let radical = Mat::from_rows_shaped(p, dim, &rad_rows);
        let labels: Vec<String> = paths
            .iter()
            .map(|pp| {
                if pp.arrows.is_empty() {
                    format!("e{}", q.vertices[pp.start])
                } else {
                    pp.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        let mut generators = vertex_basis.clone();
        generators.extend(&arrow_basis);
        let alg = Algebra::build(
            name.to_string(),
            p,
            labels,
            right,
            unit,
            idempotents,
            q.vertices.clone(),
            radical,
            generators,
            Some(QuiverData { quiver: q.clone(), paths, arrow_basis, vertex_basis }),
            Weak::new(),
        );
        alg.validate().map_err(|e| Error::Invariant(format!("quiver algebra failed validation: {e}")))?;
        Ok(Arc::new(alg))
    }

    /// The opposite algebra, with `c'_{ijk} = c_{jik}`. Cached, and
    /// `a.opposite().opposite()` returns `a` itself while `a` is alive.
    pub fn opposite(self: &Arc<Self>) -> Arc<Algebra> {
        if let Some(orig) = self.op_back.upgrade() {
            return orig;
        }
        self.op_forward
            .get_or_init(|| {
                let quiver = self.quiver.as_ref().map(|qd| QuiverData {
                    quiver: qd.quiver.reversed(),
                    paths: qd
                        .paths
                        .iter()
                        .map(|pp| Path { start: pp.start, arrows: pp.arrows.iter().rev().cloned().collect() })
                        .collect(),
                    arrow_basis: qd.arrow_basis.clone(),
                    vertex_basis: qd.vertex_basis.clone(),
                });
                let mut op = Algebra::build(
                    format!("{}^op", self.name),
                    self.p,
                    self.labels.clone(),
                    self.left.clone(),
                    self.unit.clone(),
                    self.idempotents.clone(),
                    self.vertex_labels.clone(),
                    self.radical.clone(),
                    self.generators.clone(),
                    quiver,
                    Arc::downgrade(self),
                );
                // Starting points of reversed paths moved; fix them up.
                if let (Some(qd), Some(orig)) = (op.quiver.as_mut(), self.quiver.as_ref()) {
                    for (pp, o) in qd.paths.iter_mut().zip(&orig.paths) {
                        if let Some(&last) = o.arrows.last() {
                            let tgt = &orig.quiver.arrows[last].tgt;
                            pp.start = orig.quiver.vertices.iter().position(|v| v == tgt).unwrap();
                        }
                    }
                }
                Arc::new(op)
            })
            .clone()
    }

    /// `A^op (x) B`; basis element `(i, j)` has index `i * dim(B) + j`.
    pub fn envelope(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        if a.p != b.p {
            return Err(Error::CharMismatch(a.p, b.p));
        }
        let p = a.p;
        let (da, db) = (a.dim, b.dim);
        let mut right = Vec::with_capacity(da * db);
        for i in 0..da {
            for j in 0..db {
                // Right multiplication by b_i^op in A^op is left multiplication by b_i in A.
                right.push(a.left[i].kron(&b.right[j]));
            }
        }
        let kron_vec = |u: &[u32], v: &[u32]| -> Vec<u32> {
            Mat::row_vector(p, u).kron(&Mat::row_vector(p, v)).row(0).to_vec()
        };
        let unit = kron_vec(&a.unit, &b.unit);
        let mut idempotents = Vec::new();
        let mut vertex_labels = Vec::new();
        for (ei, la) in a.idempotents.iter().zip(&a.vertex_labels) {
            for (fj, lb) in b.idempotents.iter().zip(&b.vertex_labels) {
                idempotents.push(kron_vec(ei, fj));
                vertex_labels.push(format!("{la}|{lb}"));
            }
        }
        let ra = a.radical.kron(&Mat::identity(p, db));
        let rb = Mat::identity(p, da).kron(&b.radical);
        let radical = ra.vstack(&rb).row_basis();
        let mut labels = Vec::new();
        for la in &a.labels {
            for lb in &b.labels {
                labels.push(format!("{la}(x){lb}"));
            }
        }
        let mut generators = Vec::new();
        for &i in &a.generators {
            generators.push(i * db + b.unit_index().unwrap_or(0));
        }
        for &j in &b.generators {
            generators.push(a.unit_index().unwrap_or(0) * db + j);
        }
        // Generators above are only valid when the units are basis elements;
        // otherwise fall back to the full basis.
        if a.unit_index().is_none() || b.unit_index().is_none() {
            generators = (0..da * db).collect();
        }
        generators.sort();
        generators.dedup();
        let alg = Algebra::build(
            format!("{}^op(x){}", a.name, b.name),
            p,
            labels,
            right,
            unit,
            idempotents,
            vertex_labels,
            radical,
            generators,
            None,
            Weak::new(),
        );
        Ok(Arc::new(alg))
    }

    /// [`Algebra::envelope`], built once per pair so that modules over it
    /// share one registry of indecomposables.
    pub fn shared_envelope(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        {
            let mut caches = a.caches.lock().unwrap();
            caches.envelopes.retain(|(w, _)| w.strong_count() > 0);
            let hit = caches.envelopes.iter().find(|(w, _)| w.upgrade().is_some_and(|bb| Arc::ptr_eq(&bb, b)));
            if let Some((_, e)) = hit {
                return Ok(e.clone());
            }
        }
        let e = Algebra::envelope(a, b)?;
        a.caches.lock().unwrap().envelopes.push((Arc::downgrade(b), e.clone()));
        Ok(e)
    }

    /// Index of the unit if it is a single basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.dim).filter(|&i| self.unit[i] != 0).collect();
        (nz.len() == 1 && self.unit[nz[0]] == 1).then(|| nz[0])
    }

    /// Dimension vector of `e_v A` for every vertex.
    pub fn projective_dimension_vectors(&self) -> Vec<Vec<usize>> {
        self.idempotents
            .iter()
            .map(|e| {
                let ev_a = self.left_mult_by(e);
                self.idempotents
                    .iter()
                    .map(|f| ev_a.mul(&self.right_mult_by(f)).rank())
                    .collect()
            })
            .collect()
    }

    /// Export structure constants as `c[i][j]` vectors.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.right[j].row(i).to_vec()).collect())
            .collect()
    }

    pub fn structure_data(&self) -> StructureData {
        StructureData {
            p: self.p,
            labels: self.labels.clone(),
            constants: self.structure_constants(),
            unit: self.unit.clone(),
            idempotents: self.idempotents.clone(),
            vertex_labels: self.vertex_labels.clone(),
            radical: self.radical.to_rows(),
        }
    }

    /// The algebra of 2x2 (or n x n) matrices over this algebra, with
    /// matrix-unit idempotents `E_ii * e_v`.
    pub fn matrix_algebra(self: &Arc<Self>, n: usize) -> Result<Arc<Algebra>> {
        let p = self.p;
        let d = self.dim;
        let dim = n * n * d;
        // index of E_{rs} (x) b_k = (r * n + s) * d + k
        let idx = |r: usize, s: usize, k: usize| (r * n + s) * d + k;
        let mut constants = vec![vec![vec![0u32; dim]; dim]; dim];
        for r in 0..n {
            for s in 0..n {
                for k in 0..d {
                    for t in 0..n {
                        for l in 0..d {
                            let prod = self.right[l].row(k);
                            constants[idx(r, s, k)][idx(s, t, l)]
                                .iter_mut()
                                .skip(idx(r, t, 0))
                                .take(d)
                                .zip(prod)
                                .for_each(|(c, &v)| *c = v);
                        }
                    }
                }
            }
        }
        let embed = |r: usize, s: usize, v: &[u32]| {
            let mut out = vec![0u32; dim];
            out[idx(r, s, 0)..idx(r, s, 0) + d].copy_from_slice(v);
            out
        };
        let mut unit = vec![0u32; dim];
        for r in 0..n {
            for (u, &x) in unit[idx(r, r, 0)..idx(r, r, 0) + d].iter_mut().zip(&self.unit) {
                *u = x;
            }
        }
        let mut idempotents = Vec::new();
        let mut vertex_labels = Vec::new();
        for r in 0..n {
            for (e, lab) in self.idempotents.iter().zip(&self.vertex_labels) {
                idempotents.push(embed(r, r, e));
                vertex_labels.push(format!("{}{}", r + 1, lab));
            }
        }
        let mut radical = Vec::new();
        for r in 0..n {
            for s in 0..n {
                for row in self.radical.to_rows() {
                    radical.push(embed(r, s, &row));
                }
            }
        }
        let mut labels = Vec::new();
        for r in 0..n {
            for s in 0..n {
                for l in &self.labels {
                    labels.push(format!("E{}{}{}", r + 1, s + 1, l));
                }
            }
        }
        Algebra::from_structure(
            &format!("M{}({})", n, self.name),
            StructureData { p, labels, constants, unit, idempotents, vertex_labels, radical },
        )
    }
}

fn combine(p: u32, dim: usize, mats: &[Mat], a: &[u32]) -> Mat {
    let mut out = Mat::zeros(p, dim, dim);
    for (m, &c) in mats.iter().zip(a) {
        if c != 0 {
            out.add_scaled(m, c);
        }
    }
    out
}
