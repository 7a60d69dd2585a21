//! JSON file formats. Matrices are row-major arrays of integers in
//! `0..p`, stored with their shape so that empty matrices survive.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Quiver, StructureData};
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::kato::ComplexWindow;
use crate::linalg::Mat;
use crate::module::Module;
use crate::seq::ShortExactSeq;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u32>>,
}

impl MatrixJson {
    pub fn from_mat(m: &Mat) -> MatrixJson {
        MatrixJson { rows: m.rows(), cols: m.cols(), entries: m.to_rows() }
    }

    pub fn to_mat(&self, p: u32) -> Result<Mat> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Input(format!("matrix entries do not have shape {}x{}", self.rows, self.cols)));
        }
        if let Some(&x) = self.entries.iter().flatten().find(|&&x| x >= p) {
            return Err(Error::Input(format!("matrix entry {x} is not reduced mod {p}")));
        }
        Ok(Mat::from_rows_shaped(p, self.cols, &self.entries))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraFile {
    Quiver {
        #[serde(rename = "char")]
        p: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        quiver: Quiver,
    },
    Structure {
        #[serde(rename = "char")]
        p: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        dim: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        labels: Vec<String>,
        structure_constants: Vec<Vec<Vec<u32>>>,
        unit: Vec<u32>,
        idempotents: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        vertex_labels: Vec<String>,
        radical: Vec<Vec<u32>>,
    },
}

impl AlgebraFile {
    pub fn from_algebra(a: &Algebra) -> AlgebraFile {
        let name = Some(a.name().to_string());
        match a.quiver() {
            Some(qd) => AlgebraFile::Quiver { p: a.p(), name, quiver: qd.quiver.clone() },
            None => {
                let d = a.structure_data();
                AlgebraFile::Structure {
                    p: d.p,
                    name,
                    dim: a.dim(),
                    labels: d.labels,
                    structure_constants: d.constants,
                    unit: d.unit,
                    idempotents: d.idempotents,
                    vertex_labels: d.vertex_labels,
                    radical: d.radical,
                }
            }
        }
    }

    pub fn build(&self) -> Result<Arc<Algebra>> {
        match self {
            AlgebraFile::Quiver { p, name, quiver } => {
                Algebra::from_quiver(name.as_deref().unwrap_or("A"), *p, quiver)
            }
            AlgebraFile::Structure {
                p,
                name,
                dim,
                labels,
                structure_constants,
                unit,
                idempotents,
                vertex_labels,
                radical,
            } => {
                if structure_constants.len() != *dim {
                    return Err(Error::Input(format!(
                        "dim is {dim} but {} rows of structure constants were given",
                        structure_constants.len()
                    )));
                }
                let data = StructureData {
                    p: *p,
                    labels: labels.clone(),
                    constants: structure_constants.clone(),
                    unit: unit.clone(),
                    idempotents: idempotents.clone(),
                    vertex_labels: vertex_labels.clone(),
                    radical: radical.clone(),
                };
                Algebra::from_structure(name.as_deref().unwrap_or("A"), data)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleFile {
    /// One space per vertex and one matrix per arrow.
    Representation {
        #[serde(rename = "char")]
        p: u32,
        dims: Vec<usize>,
        arrows: BTreeMap<String, MatrixJson>,
    },
    /// One matrix per algebra basis element.
    Action {
        #[serde(rename = "char")]
        p: u32,
        dim: usize,
        action: Vec<MatrixJson>,
    },
}

/// Dimensions per vertex if every vertex idempotent acts as the identity
/// on a contiguous block, in vertex order.
fn adapted_dims(m: &Module) -> Option<Vec<usize>> {
    let alg = m.algebra();
    let qd = alg.quiver()?;
    let mut dims = Vec::new();
    let mut off = 0;
    for &e in &qd.vertex_basis {
        let act = m.action(e);
        let d = act.rank();
        let mut expected = Mat::zeros(m.p(), m.dim(), m.dim());
        expected.set_block(off, off, &Mat::identity(m.p(), d));
        if act != &expected {
            return None;
        }
        dims.push(d);
        off += d;
    }
    Some(dims)
}

impl ModuleFile {
    /// Representation form when the basis is adapted to the vertices,
    /// action form otherwise. Either way `to_module` gives back the same
    /// action matrices.
    pub fn from_module(m: &Module) -> ModuleFile {
        let p = m.p();
        if let (Some(dims), Some(qd)) = (adapted_dims(m), m.algebra().quiver()) {
            let offs: Vec<usize> = dims.iter().scan(0, |s, &d| { let o = *s; *s += d; Some(o) }).collect();
            let vidx = |name: &str| qd.quiver.vertices.iter().position(|v| v == name).unwrap();
            let arrows = qd
                .quiver
                .arrows
                .iter()
                .zip(&qd.arrow_basis)
                .map(|(a, &b)| {
                    let (s, t) = (vidx(&a.src), vidx(&a.tgt));
                    let block = m.action(b).block(offs[s], dims[s], offs[t], dims[t]);
                    (a.name.clone(), MatrixJson::from_mat(&block))
                })
                .collect();
            return ModuleFile::Representation { p, dims, arrows };
        }
        ModuleFile::Action { p, dim: m.dim(), action: m.actions().iter().map(MatrixJson::from_mat).collect() }
    }

    pub fn p(&self) -> u32 {
        match self {
            ModuleFile::Representation { p, .. } | ModuleFile::Action { p, .. } => *p,
        }
    }

    pub fn to_module(&self, alg: &Arc<Algebra>) -> Result<Module> {
        if self.p() != alg.p() {
            return Err(Error::CharMismatch(self.p(), alg.p()));
        }
        match self {
            ModuleFile::Representation { p, dims, arrows } => {
                let qd = alg
                    .quiver()
                    .ok_or_else(|| Error::Input("representation given for an algebra without a quiver".into()))?;
                if let Some(extra) = arrows.keys().find(|k| !qd.quiver.arrows.iter().any(|a| &&a.name == k)) {
                    return Err(Error::Input(format!("unknown arrow {extra}")));
                }
                let mats = qd
                    .quiver
                    .arrows
                    .iter()
                    .map(|a| {
                        arrows
                            .get(&a.name)
                            .ok_or_else(|| Error::Input(format!("missing matrix for arrow {}", a.name)))?
                            .to_mat(*p)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Module::from_representation(alg, dims, &mats)
            }
            ModuleFile::Action { p, dim, action } => {
                if action.len() != alg.dim() {
                    return Err(Error::Input(format!(
                        "{} action matrices for an algebra of dimension {}",
                        action.len(),
                        alg.dim()
                    )));
                }
                let mats = action.iter().map(|m| m.to_mat(*p)).collect::<Result<Vec<_>>>()?;
                if mats.iter().any(|m| m.shape() != (*dim, *dim)) {
                    return Err(Error::Input(format!("action matrices must be {dim}x{dim}")));
                }
                if *dim == 0 {
                    return Ok(Module::zero(alg));
                }
                Module::new(alg, mats)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    #[serde(rename = "char")]
    pub p: u32,
    pub x: ModuleFile,
    pub y: ModuleFile,
    pub z: ModuleFile,
    pub f: MatrixJson,
    pub g: MatrixJson,
}

impl SequenceFile {
    pub fn from_seq(s: &ShortExactSeq) -> SequenceFile {
        SequenceFile {
            p: s.algebra().p(),
            x: ModuleFile::from_module(&s.x),
            y: ModuleFile::from_module(&s.y),
            z: ModuleFile::from_module(&s.z),
            f: MatrixJson::from_mat(&s.f),
            g: MatrixJson::from_mat(&s.g),
        }
    }

    pub fn to_seq(&self, alg: &Arc<Algebra>) -> Result<ShortExactSeq> {
        if self.p != alg.p() {
            return Err(Error::CharMismatch(self.p, alg.p()));
        }
        ShortExactSeq::new(
            self.x.to_module(alg)?,
            self.y.to_module(alg)?,
            self.z.to_module(alg)?,
            self.f.to_mat(self.p)?,
            self.g.to_mat(self.p)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowFile {
    #[serde(rename = "char")]
    pub p: u32,
    pub lo: i64,
    #[serde(default)]
    pub dim_vectors: Vec<Vec<usize>>,
    pub terms: Vec<ModuleFile>,
    pub diffs: Vec<MatrixJson>,
}

impl WindowFile {
    pub fn from_window(c: &ComplexWindow) -> WindowFile {
        WindowFile {
            p: c.terms.first().map_or(2, |t| t.p()),
            lo: c.lo,
            dim_vectors: c.terms.iter().map(|t| t.dim_vector()).collect(),
            terms: c.terms.iter().map(ModuleFile::from_module).collect(),
            diffs: c.diffs.iter().map(MatrixJson::from_mat).collect(),
        }
    }

    pub fn to_window(&self, alg: &Arc<Algebra>) -> Result<ComplexWindow> {
        if self.terms.is_empty() || self.diffs.len() + 1 != self.terms.len() {
            return Err(Error::Input("a window needs n terms and n-1 differentials, n >= 1".into()));
        }
        let terms = self.terms.iter().map(|t| t.to_module(alg)).collect::<Result<Vec<_>>>()?;
        let diffs = self.diffs.iter().map(|d| d.to_mat(alg.p())).collect::<Result<Vec<_>>>()?;
        ComplexWindow::new(self.lo, terms, diffs)
    }
}

/// A bimodule: the two algebras by reference and either a module over
/// `A^op (x) B` or one of the built-in constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleFile {
    pub left: String,
    pub right: String,
    #[serde(flatten)]
    pub body: BimoduleBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BimoduleBody {
    Module { module: ModuleFile },
    /// `regular`, `free` or `matrix-row`.
    Named { kind: String },
}

impl BimoduleFile {
    pub fn from_bimodule(m: &Bimodule, left: &str, right: &str) -> BimoduleFile {
        BimoduleFile {
            left: left.to_string(),
            right: right.to_string(),
            body: BimoduleBody::Module { module: ModuleFile::from_module(m.module()) },
        }
    }

    pub fn build(&self, a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Bimodule> {
        match &self.body {
            BimoduleBody::Named { kind } => match kind.as_str() {
                "regular" => {
                    if !a.same_as(b) {
                        return Err(Error::Input("the regular bimodule needs equal algebras".into()));
                    }
                    Bimodule::regular(a)
                }
                "free" => Bimodule::free(a, b),
                "matrix-row" => {
                    let n = (1..=4)
                        .find(|n| n * n * a.dim() == b.dim())
                        .ok_or_else(|| Error::Input("right algebra is not a matrix algebra over the left".into()))?;
                    Bimodule::matrix_row(a, b, n)
                }
                other => Err(Error::Input(format!("unknown bimodule kind {other}"))),
            },
            BimoduleBody::Module { module } => {
                let env = Algebra::shared_envelope(a, b)?;
                let m = module.to_module(&env)?;
                let (da, db) = (a.dim(), b.dim());
                let lefts = (0..da)
                    .map(|i| {
                        let mut v = vec![0; da * db];
                        v[i * db..(i + 1) * db].copy_from_slice(b.unit());
                        m.act(&v)
                    })
                    .collect();
                let rights = (0..db)
                    .map(|j| {
                        let mut v = vec![0; da * db];
                        for (i, &c) in a.unit().iter().enumerate() {
                            v[i * db + j] = c;
                        }
                        m.act(&v)
                    })
                    .collect();
                let built = Bimodule::from_actions(a, b, lefts, rights)?;
                if built.module().actions() != m.actions() {
                    return Err(Error::Input("module is not a bimodule over the given algebras".into()));
                }
                Ok(built)
            }
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ar::knit;
    use crate::zoo;

    #[test]
    fn quiver_algebra_round_trips_bit_exactly() {
        for (_, a) in zoo::finite_type(3) {
            let text = to_json(&AlgebraFile::from_algebra(&a));
            let b = from_json::<AlgebraFile>(&text).unwrap().build().unwrap();
            assert_eq!(a.structure_constants(), b.structure_constants());
            assert_eq!(text, to_json(&AlgebraFile::from_algebra(&b)));
        }
    }

    #[test]
    fn structure_algebra_round_trips_bit_exactly() {
        let a = zoo::kronecker(5).matrix_algebra(2).unwrap();
        let text = to_json(&AlgebraFile::from_algebra(&a));
        assert!(text.contains("structure_constants"));
        let b = from_json::<AlgebraFile>(&text).unwrap().build().unwrap();
        assert_eq!(a.structure_constants(), b.structure_constants());
        assert_eq!(a.idempotents(), b.idempotents());
        assert_eq!(text, to_json(&AlgebraFile::from_algebra(&b)));
    }

    #[test]
    fn modules_round_trip_with_identical_actions() {
        let a = zoo::kronecker(3);
        let mut mods = knit(&a, 8).unwrap().modules(&a);
        mods.push(Module::regular(&a));
        for m in mods {
            let text = to_json(&ModuleFile::from_module(&m));
            let back = from_json::<ModuleFile>(&text).unwrap().to_module(&a).unwrap();
            assert_eq!(m.actions(), back.actions());
        }
    }

    #[test]
    fn representation_file_reads_arrow_matrices() {
        let a = zoo::a2(2);
        let text = r#"{"char": 2, "dims": [1, 1], "arrows": {"a": {"rows": 1, "cols": 1, "entries": [[1]]}}}"#;
        let m = from_json::<ModuleFile>(text).unwrap().to_module(&a).unwrap();
        assert_eq!(m.dim_vector(), vec![1, 1]);
        assert!(m.is_projective());
        let bad = r#"{"char": 2, "dims": [1, 1], "arrows": {"c": {"rows": 1, "cols": 1, "entries": [[1]]}}}"#;
        assert!(from_json::<ModuleFile>(bad).unwrap().to_module(&a).is_err());
    }

    #[test]
    fn sequences_and_bimodules_round_trip() {
        let a = zoo::kronecker(2);
        let s = zoo::kronecker_chain_start(&a).unwrap();
        let text = to_json(&SequenceFile::from_seq(&s));
        let t = from_json::<SequenceFile>(&text).unwrap().to_seq(&a).unwrap();
        assert_eq!((s.f.clone(), s.g.clone()), (t.f, t.g));

        let d = zoo::dual_numbers(2);
        let m = d.matrix_algebra(2).unwrap();
        let bm = Bimodule::matrix_row(&d, &m, 2).unwrap();
        let text = to_json(&BimoduleFile::from_bimodule(&bm, "zoo:dual", "matrix:2:zoo:dual"));
        let back = from_json::<BimoduleFile>(&text).unwrap().build(&d, &m).unwrap();
        assert_eq!(back.module().actions(), bm.module().actions());
    }
}
