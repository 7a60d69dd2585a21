use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use fdrep_core::ar::{almost_split_starting, knit};
use fdrep_core::bimodule::Bimodule;
use fdrep_core::homological::indecomposable_injectives;
use fdrep_core::io::{from_json, AlgebraFile, BimoduleFile, MatrixJson, ModuleFile, SequenceFile};
use fdrep_core::module::hom_basis;
use fdrep_core::seq::{cover_sequence, ShortExactSeq};
use fdrep_core::{zoo, Algebra, Mat, Module};

/// Objects loaded during one invocation. Algebras are cached by reference
/// so that every object named through the same reference shares one
/// algebra.
#[derive(Default)]
pub struct Workspace {
    algebras: HashMap<String, Arc<Algebra>>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn vertex_index(alg: &Algebra, label: &str) -> Result<usize> {
    alg.vertex_labels()
        .iter()
        .position(|v| v == label)
        .ok_or_else(|| anyhow!("{} has no vertex {label}", alg.name()))
}

impl Workspace {
    /// `zoo:NAME[:P]`, `matrix:N:REF`, `opposite:REF` or a JSON file.
    pub fn algebra(&mut self, r: &str) -> Result<Arc<Algebra>> {
        self.algebra_in(r, Path::new("."))
    }

    fn algebra_in(&mut self, r: &str, dir: &Path) -> Result<Arc<Algebra>> {
        let key = if r.contains(':') { r.to_string() } else { dir.join(r).to_string_lossy().into_owned() };
        if let Some(a) = self.algebras.get(&key) {
            return Ok(a.clone());
        }
        let alg = if let Some(rest) = r.strip_prefix("zoo:") {
            let (name, p) = match rest.split_once(':') {
                Some((n, p)) => (n, p.parse().with_context(|| format!("bad characteristic in {r}"))?),
                None => (rest, 2),
            };
            if !(2..65536).contains(&p) || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                bail!("characteristic {p} is not a prime below 65536");
            }
            zoo::by_name(name, p).ok_or_else(|| anyhow!("unknown zoo algebra {name}"))?
        } else if let Some(rest) = r.strip_prefix("matrix:") {
            let (n, inner) = rest.split_once(':').ok_or_else(|| anyhow!("expected matrix:N:REF"))?;
            let n: usize = n.parse().with_context(|| format!("bad size in {r}"))?;
            self.algebra_in(inner, dir)?.matrix_algebra(n)?
        } else if let Some(inner) = r.strip_prefix("opposite:") {
            self.algebra_in(inner, dir)?.opposite()
        } else {
            from_json::<AlgebraFile>(&read(&dir.join(r))?)?.build()?
        };
        self.algebras.insert(key, alg.clone());
        Ok(alg)
    }

    /// `regular`, `P:v`, `S:v`, `I:v`, `knit:i` or a JSON file.
    pub fn module(&mut self, alg: &Arc<Algebra>, r: &str) -> Result<Module> {
        if r == "regular" {
            return Ok(Module::regular(alg));
        }
        if let Some((kind, arg)) = r.split_once(':') {
            match kind {
                "P" => return Ok(Module::vertex_projective(alg, vertex_index(alg, arg)?).0),
                "S" => return Ok(Module::vertex_top(alg, vertex_index(alg, arg)?)),
                "I" => {
                    let s = Module::vertex_top(alg, vertex_index(alg, arg)?);
                    return indecomposable_injectives(alg)
                        .into_iter()
                        .find(|i| !hom_basis(&s, i).is_empty())
                        .ok_or_else(|| anyhow!("no injective hull for vertex {arg}"));
                }
                "knit" => {
                    let i: usize = arg.parse().with_context(|| format!("bad index in {r}"))?;
                    let mods = knit(alg, 64)?.modules(alg);
                    return mods
                        .get(i)
                        .cloned()
                        .ok_or_else(|| anyhow!("only {} indecomposables were knitted", mods.len()));
                }
                _ => {}
            }
        }
        Ok(from_json::<ModuleFile>(&read(Path::new(r))?)?.to_module(alg)?)
    }

    /// `kronecker:1`, `kronecker:2`, `ar:MODULE`, `cover:MODULE` or a JSON file.
    pub fn sequence(&mut self, alg: &Arc<Algebra>, r: &str) -> Result<ShortExactSeq> {
        match r.split_once(':') {
            Some(("kronecker", "1")) => Ok(zoo::kronecker_chain_start(alg)?),
            Some(("kronecker", "2")) => Ok(zoo::kronecker_second_chain_start(alg)?),
            Some(("ar", m)) => Ok(almost_split_starting(&self.module(alg, m)?)?.seq),
            Some(("cover", m)) => Ok(cover_sequence(&self.module(alg, m)?)?),
            _ => Ok(from_json::<SequenceFile>(&read(Path::new(r))?)?.to_seq(alg)?),
        }
    }

    /// A bimodule file; algebra file references inside it are resolved
    /// relative to its directory.
    pub fn bimodule(&mut self, r: &str) -> Result<Bimodule> {
        let path = PathBuf::from(r);
        let file: BimoduleFile = from_json(&read(&path)?)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let a = self.algebra_in(&file.left, &dir)?;
        let b = self.algebra_in(&file.right, &dir)?;
        Ok(file.build(&a, &b)?)
    }

    /// `basis:i` (the i-th basis element of Hom), `zero`, or a JSON matrix file.
    pub fn map(&self, r: &str, src: &Module, tgt: &Module) -> Result<Mat> {
        if r == "zero" {
            return Ok(Mat::zeros(src.p(), src.dim(), tgt.dim()));
        }
        if let Some(i) = r.strip_prefix("basis:") {
            let i: usize = i.parse().with_context(|| format!("bad index in {r}"))?;
            let basis = hom_basis(src, tgt);
            return basis.get(i).cloned().ok_or_else(|| anyhow!("Hom has dimension {}", basis.len()));
        }
        let m = from_json::<MatrixJson>(&read(Path::new(r))?)?.to_mat(src.p())?;
        if m.shape() != (src.dim(), tgt.dim()) || !src.is_hom_to(tgt, &m) {
            bail!("{r} is not a homomorphism between the given modules");
        }
        Ok(m)
    }
}
