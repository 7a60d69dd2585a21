use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Subcommand};
use fdrep_core::ar::{almost_split_starting, depth, knit, nodes};
use fdrep_core::bimodule::{
    condition_report, hom_right_dual, morita_type_check, simple_image_analysis, ConditionOptions,
};
use fdrep_core::decompose::{canonical_label, decompose};
use fdrep_core::eta::{run_chain, transport, ChainStatus, EtaChain};
use fdrep_core::homological::{
    indecomposable_injectives, indecomposable_projectives, is_injective, simple_modules, star,
};
use fdrep_core::io::{from_json, AlgebraFile, MatrixJson, ModuleFile, SequenceFile, WindowFile};
use fdrep_core::kato::{
    dominant_dimension_at_least_one, in_l_window, is_gorenstein_projective, kato_complex, shift_in_l,
    ComplexWindow,
};
use fdrep_core::module::{factor_from, factor_through, hom_basis, stable_hom_dim};
use fdrep_core::seq::{merge_left, merge_right, splice_snake_1, splice_snake_2, ShortExactSeq};
use fdrep_core::{Algebra, Module};
use serde_json::{json, Value};

use crate::refs::Workspace;

/// A computed result and the exit code it carries: 1 for a mathematical
/// "no" or a violated property.
pub struct Report {
    pub value: Value,
    pub code: i32,
}

impl Report {
    fn ok(value: Value) -> Report {
        Report { value, code: 0 }
    }

    fn verdict(value: Value, holds: bool) -> Report {
        Report { value, code: if holds { 0 } else { 1 } }
    }
}

#[derive(Args, Debug)]
pub struct AlgebraArg {
    /// Algebra file, or zoo:NAME[:P], matrix:N:REF, opposite:REF.
    #[arg(long)]
    pub algebra: String,
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub alg: AlgebraArg,
    /// Module file, or regular, P:v, S:v, I:v, knit:i.
    #[arg(long)]
    pub module: String,
}

#[derive(Args, Debug)]
pub struct SeqArgs {
    #[command(flatten)]
    pub alg: AlgebraArg,
    /// Sequence file, or kronecker:1, kronecker:2, ar:MODULE, cover:MODULE.
    #[arg(long)]
    pub seq: String,
}

#[derive(Args, Debug)]
pub struct DepthArgs {
    #[command(flatten)]
    pub alg: AlgebraArg,
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    /// Matrix file, basis:i or zero.
    #[arg(long, default_value = "basis:0")]
    pub map: String,
    #[arg(long, default_value_t = 16)]
    pub bound: usize,
}

#[derive(Args, Debug)]
pub struct MergeArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// The second sequence.
    #[arg(long)]
    pub with: String,
    /// Connecting map as a matrix file or basis:i; found by factorization
    /// when omitted.
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Dimensions, vertices and distinguished modules.
    Info(AlgebraArg),
    /// Print the algebra in file format.
    Export(AlgebraArg),
}

#[derive(Subcommand, Debug)]
pub enum ModuleCmd {
    /// Dimension vector, top and decomposition.
    Info(ModuleArgs),
    /// Print the module in file format.
    Export(ModuleArgs),
}

#[derive(Subcommand, Debug)]
pub enum ArCmd {
    /// The almost split sequence starting in an indecomposable.
    Seq(ModuleArgs),
    /// Knit the Auslander-Reiten quiver.
    Knit {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, default_value_t = 64)]
        bound: usize,
    },
    /// Radical depth of a homomorphism.
    Depth(DepthArgs),
    /// Simple modules that are nodes.
    Nodes(AlgebraArg),
}

#[derive(Subcommand, Debug)]
pub enum PerfectCmd {
    /// Whether Hom(-, A) keeps the sequence exact.
    Check(SeqArgs),
    /// Pushout merge of a sequence with one sharing its first term.
    MergeLeft(MergeArgs),
    /// Pullback merge of a sequence with one sharing its last term.
    MergeRight(MergeArgs),
    /// Splice two sequences sharing a map.
    Splice {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        /// 1 when the shared map is the last one of the first sequence,
        /// 2 when it is the first one.
        #[arg(long, default_value_t = 1)]
        snake: u8,
    },
}

#[derive(Subcommand, Debug)]
pub enum EtaCmd {
    /// Run the chain until it reaches a sum of almost split sequences.
    Run {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 10)]
        bound: usize,
    },
    /// Run the chain, then carry it along tensoring with a bimodule.
    Transport {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 10)]
        bound: usize,
        #[arg(long)]
        bimodule: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum KatoCmd {
    /// The complex built from the projective resolutions of a module and its dual.
    Window {
        #[command(flatten)]
        m: ModuleArgs,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 2)]
        hi: i64,
    },
    /// Membership of a window (or a shifted module complex) in L.
    #[command(name = "check-L")]
    CheckL {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, conflicts_with = "module")]
        window: Option<String>,
        #[arg(long)]
        module: Option<String>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 3)]
        hi: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum MoritaCmd {
    /// Projectivity on both sides and the error terms of both composites.
    Check {
        #[arg(long)]
        m: String,
        /// Defaults to Hom_B(M, B).
        #[arg(long)]
        n: Option<String>,
    },
    /// The conditions relating tensoring with M to perfect sequences.
    Report {
        #[arg(long)]
        m: String,
        /// Test modules (defaults to simples and indecomposable projectives).
        #[arg(long, num_args = 1..)]
        modules: Vec<String>,
    },
    /// Images of the simple modules.
    SimpleImages {
        #[arg(long)]
        m: String,
    },
}

fn label(m: &Module) -> Result<String> {
    if m.dim() == 0 {
        return Ok("0".into());
    }
    let parts: Vec<String> = decompose(m)?
        .summands
        .iter()
        .map(|s| canonical_label(m.algebra(), s.canon))
        .collect();
    Ok(parts.join(" + "))
}

fn simple_name(s: &Module) -> String {
    let v = s.dim_vector().iter().position(|&d| d == 1).unwrap_or(0);
    format!("S_{}", s.algebra().vertex_labels()[v])
}

fn mat(m: &fdrep_core::Mat) -> Value {
    json!(MatrixJson::from_mat(m))
}

fn seq_value(s: &ShortExactSeq) -> Result<Value> {
    Ok(json!({
        "dim_vectors": s.dim_vectors(),
        "terms": [label(&s.x)?, label(&s.y)?, label(&s.z)?],
        "perfect": s.is_perfect()?,
        "split": s.is_split(),
        "sequence": SequenceFile::from_seq(s),
    }))
}

fn algebra_info(a: &Arc<Algebra>) -> Value {
    json!({
        "name": a.name(),
        "char": a.p(),
        "dim": a.dim(),
        "vertices": a.vertex_labels(),
        "radical_dim": a.radical().rows(),
        "projectives": indecomposable_projectives(a).iter().map(Module::dim_vector).collect::<Vec<_>>(),
        "injectives": indecomposable_injectives(a).iter().map(Module::dim_vector).collect::<Vec<_>>(),
        "dominant_dimension_at_least_one": dominant_dimension_at_least_one(a),
    })
}

pub fn algebra(ws: &mut Workspace, cmd: &AlgebraCmd) -> Result<Report> {
    Ok(match cmd {
        AlgebraCmd::Info(a) => Report::ok(algebra_info(&ws.algebra(&a.algebra)?)),
        AlgebraCmd::Export(a) => {
            let alg = ws.algebra(&a.algebra)?;
            Report::ok(json!(AlgebraFile::from_algebra(&alg)))
        }
    })
}

pub fn module(ws: &mut Workspace, cmd: &ModuleCmd) -> Result<Report> {
    let args = match cmd {
        ModuleCmd::Info(m) | ModuleCmd::Export(m) => m,
    };
    let a = ws.algebra(&args.alg.algebra)?;
    let m = ws.module(&a, &args.module)?;
    if let ModuleCmd::Export(_) = cmd {
        return Ok(Report::ok(json!(ModuleFile::from_module(&m))));
    }
    let summands: Vec<Value> = if m.dim() == 0 {
        vec![]
    } else {
        decompose(&m)?
            .summands
            .iter()
            .map(|s| {
                json!({
                    "label": canonical_label(&a, s.canon),
                    "dim_vector": s.module.dim_vector(),
                    "projective": s.module.is_projective(),
                    "injective": is_injective(&s.module),
                })
            })
            .collect()
    };
    Ok(Report::ok(json!({
        "char": a.p(),
        "dim": m.dim(),
        "dim_vector": m.dim_vector(),
        "top": m.top_vector(),
        "projective": m.is_projective(),
        "injective": is_injective(&m),
        "star_dim": star(&m).module.dim(),
        "summands": summands,
    })))
}

pub fn hom(ws: &mut Workspace, alg: &AlgebraArg, from: &str, to: &str) -> Result<Report> {
    let a = ws.algebra(&alg.algebra)?;
    let x = ws.module(&a, from)?;
    let y = ws.module(&a, to)?;
    let basis = hom_basis(&x, &y);
    Ok(Report::ok(json!({
        "char": a.p(),
        "dim": basis.len(),
        "stable_dim": stable_hom_dim(&x, &y)?,
        "basis": basis.iter().map(mat).collect::<Vec<_>>(),
    })))
}

pub fn depth_of(ws: &mut Workspace, d: &DepthArgs) -> Result<Report> {
    let a = ws.algebra(&d.alg.algebra)?;
    let x = ws.module(&a, &d.from)?;
    let y = ws.module(&a, &d.to)?;
    let f = ws.map(&d.map, &x, &y)?;
    let dp = depth(&x, &y, &f, d.bound)?;
    Ok(Report::ok(json!({ "depth": dp, "bound": d.bound, "map": mat(&f) })))
}

pub fn ar(ws: &mut Workspace, cmd: &ArCmd) -> Result<Report> {
    match cmd {
        ArCmd::Seq(m) => {
            let a = ws.algebra(&m.alg.algebra)?;
            let x = ws.module(&a, &m.module)?;
            let s = almost_split_starting(&x)?;
            Ok(Report::ok(seq_value(&s.seq)?))
        }
        ArCmd::Knit { alg, bound } => {
            let a = ws.algebra(&alg.algebra)?;
            let q = knit(&a, *bound)?;
            let vertices: Vec<Value> = (0..q.vertices.len())
                .map(|i| {
                    json!({
                        "label": q.labels[i],
                        "dim_vector": q.dim_vectors[i],
                        "projective": q.projective[i],
                        "injective": q.injective[i],
                    })
                })
                .collect();
            Ok(Report::ok(json!({
                "complete": q.complete,
                "bound": q.bound,
                "vertices": vertices,
                "arrows": q.arrows,
                "tau": q.tau,
            })))
        }
        ArCmd::Depth(d) => depth_of(ws, d),
        ArCmd::Nodes(alg) => {
            let a = ws.algebra(&alg.algebra)?;
            let names: Vec<String> = nodes(&a)?.iter().map(simple_name).collect();
            Ok(Report::ok(json!({ "nodes": names })))
        }
    }
}

fn merge(ws: &mut Workspace, m: &MergeArgs, left: bool) -> Result<Report> {
    let a = ws.algebra(&m.seq.alg.algebra)?;
    let s = ws.sequence(&a, &m.seq.seq)?;
    let t = ws.sequence(&a, &m.with)?;
    let alpha = match (&m.map, left) {
        (Some(r), true) => ws.map(r, &t.y, &s.y)?,
        (Some(r), false) => ws.map(r, &s.y, &t.y)?,
        (None, true) => factor_from(&t.y, &s.y, &t.f, &s.f)
            .ok_or_else(|| anyhow!("the first map does not factor through the second sequence"))?,
        (None, false) => factor_through(&s.y, &t.y, &t.g, &s.g)
            .ok_or_else(|| anyhow!("the last map does not factor through the second sequence"))?,
    };
    let out = if left { merge_left(&s, &t, &alpha)? } else { merge_right(&s, &t, &alpha)? };
    Ok(Report::ok(json!({ "map": mat(&alpha), "result": seq_value(&out)? })))
}

pub fn perfect(ws: &mut Workspace, cmd: &PerfectCmd) -> Result<Report> {
    match cmd {
        PerfectCmd::Check(sa) => {
            let a = ws.algebra(&sa.alg.algebra)?;
            let s = ws.sequence(&a, &sa.seq)?;
            let dims = [star(&s.x).module.dim(), star(&s.y).module.dim(), star(&s.z).module.dim()];
            let perfect = s.is_perfect()?;
            Ok(Report::verdict(
                json!({
                    "perfect": perfect,
                    "dim_vectors": s.dim_vectors(),
                    "star_dims": dims,
                    "dual_exact": s.dual_is_exact(),
                }),
                perfect,
            ))
        }
        PerfectCmd::MergeLeft(m) => merge(ws, m, true),
        PerfectCmd::MergeRight(m) => merge(ws, m, false),
        PerfectCmd::Splice { alg, first, second, snake } => {
            let a = ws.algebra(&alg.algebra)?;
            let s1 = ws.sequence(&a, first)?;
            let s2 = ws.sequence(&a, second)?;
            let out = match snake {
                1 => splice_snake_1(&s1, &s2)?,
                2 => splice_snake_2(&s1, &s2)?,
                other => bail!("--snake must be 1 or 2, not {other}"),
            };
            Ok(Report::ok(seq_value(&out)?))
        }
    }
}

fn chain_value(chain: &EtaChain) -> Result<Value> {
    let mut steps = Vec::new();
    for (n, st) in chain.steps.iter().enumerate() {
        let removed: Vec<Value> = st
            .removal
            .pieces
            .iter()
            .map(|pc| json!({ "side": format!("{:?}", pc.side), "dim_vector": pc.module.dim_vector() }))
            .collect();
        steps.push(json!({
            "n": n,
            "dim_vectors": st.eta.dim_vectors(),
            "eta": SequenceFile::from_seq(&st.eta),
            "tilde": SequenceFile::from_seq(&st.tilde.seq),
            "almost_split_sum": SequenceFile::from_seq(&st.tilde.ar_sum),
            "v": mat(&st.tilde.v),
            "w": mat(&st.tilde.w),
            "removed": removed,
            "projections": [mat(&st.removal.px), mat(&st.removal.py), mat(&st.removal.pz)],
        }));
    }
    Ok(json!({
        "status": chain.status,
        "length": chain.steps.len(),
        "table": chain.sequences().iter().map(|s| s.dim_vectors()).collect::<Vec<_>>(),
        "steps": steps,
        "last": SequenceFile::from_seq(&chain.last),
        "terminal_iso": chain.terminal_iso.as_ref().map(|t| t.iter().map(mat).collect::<Vec<_>>()),
    }))
}

pub fn eta(ws: &mut Workspace, cmd: &EtaCmd) -> Result<Report> {
    match cmd {
        EtaCmd::Run { seq, bound } => {
            let a = ws.algebra(&seq.alg.algebra)?;
            let s = ws.sequence(&a, &seq.seq)?;
            let chain = run_chain(&s, *bound)?;
            Ok(Report::ok(chain_value(&chain)?))
        }
        EtaCmd::Transport { seq, bound, bimodule } => {
            let m = ws.bimodule(bimodule)?;
            let a = ws.algebra(&seq.alg.algebra)?;
            if !a.same_as(m.left_algebra()) {
                bail!("the bimodule's left algebra differs from --algebra");
            }
            let s = ws.sequence(m.left_algebra(), &seq.seq)?;
            let chain = run_chain(&s, *bound)?;
            if !matches!(chain.status, ChainStatus::TerminatedAlmostSplit(_)) {
                return Ok(Report::verdict(json!({ "status": chain.status, "transported": null }), false));
            }
            let t = transport(&chain, &m)?;
            Ok(Report::ok(json!({
                "status": chain.status,
                "projective_dim": t.projective_dim,
                "rebuilt": t.rebuilt.iter().map(|s| s.dim_vectors()).collect::<Vec<_>>(),
                "transported": seq_value(&t.seq)?,
            })))
        }
    }
}

fn window_value(c: &ComplexWindow) -> Value {
    let degrees: Vec<i64> = (c.lo..=c.hi()).collect();
    json!({
        "window": WindowFile::from_window(c),
        "cohomology": degrees.iter().filter(|&&k| c.is_interior(k)).map(|&k| (k, c.cohomology_dim(k))).collect::<Vec<_>>(),
        "dual_homology": degrees.iter().filter(|&&k| c.is_interior(k)).map(|&k| (k, c.dual_homology_dim(k))).collect::<Vec<_>>(),
    })
}

pub fn kato(ws: &mut Workspace, cmd: &KatoCmd) -> Result<Report> {
    match cmd {
        KatoCmd::Window { m, lo, hi } => {
            let a = ws.algebra(&m.alg.algebra)?;
            let x = ws.module(&a, &m.module)?;
            let c = kato_complex(&x, *lo, *hi)?.window;
            let mut v = window_value(&c);
            v["in_l"] = json!(in_l_window(&c));
            Ok(Report::ok(v))
        }
        KatoCmd::CheckL { alg, window, module, shift, lo, hi } => {
            let a = ws.algebra(&alg.algebra)?;
            let (c, shifted) = match (window, module) {
                (Some(w), _) => {
                    let text = std::fs::read_to_string(w).map_err(|e| anyhow!("cannot read {w}: {e}"))?;
                    (from_json::<WindowFile>(&text)?.to_window(&a)?.shift(*shift), None)
                }
                (None, Some(m)) => {
                    let x = ws.module(&a, m)?;
                    let c = kato_complex(&x, *lo, *hi)?.window.shift(*shift);
                    let exact = if shift.abs() == 1 { Some(shift_in_l(&x, *shift)?) } else { None };
                    (c, exact)
                }
                (None, None) => bail!("give --window or --module"),
            };
            let report = in_l_window(&c);
            let holds = report.ok() && shifted.unwrap_or(true);
            Ok(Report::verdict(json!({ "in_l": report, "shift_criterion": shifted, "lo": c.lo, "hi": c.hi() }), holds))
        }
    }
}

pub fn gproj(ws: &mut Workspace, m: &ModuleArgs, bound: usize) -> Result<Report> {
    let a = ws.algebra(&m.alg.algebra)?;
    let x = ws.module(&a, &m.module)?;
    let v = is_gorenstein_projective(&x, bound)?;
    Ok(Report::verdict(json!({ "verdict": v, "bound": bound }), !v.is_no()))
}

pub fn morita(ws: &mut Workspace, cmd: &MoritaCmd) -> Result<Report> {
    match cmd {
        MoritaCmd::Check { m, n } => {
            let mb = ws.bimodule(m)?;
            let nb = match n {
                Some(n) => ws.bimodule(n)?,
                None => hom_right_dual(&mb)?,
            };
            let r = morita_type_check(&mb, &nb)?;
            let value = json!({
                "passes": r.passes(),
                "error_terms_zero": r.p.is_zero() && r.q.is_zero(),
                "report": r,
            });
            Ok(Report::verdict(value, r.passes()))
        }
        MoritaCmd::Report { m, modules } => {
            let mb = ws.bimodule(m)?;
            let a = mb.left_algebra().clone();
            let mut options = ConditionOptions::defaults(&a);
            if !modules.is_empty() {
                options.test_modules = modules.iter().map(|r| ws.module(&a, r)).collect::<Result<_>>()?;
            }
            Ok(Report::ok(json!(condition_report(&mb, &options)?)))
        }
        MoritaCmd::SimpleImages { m } => {
            let mb = ws.bimodule(m)?;
            let images = simple_modules(mb.left_algebra())
                .iter()
                .map(|s| simple_image_analysis(s, &mb).map(|r| json!({ "simple": simple_name(s), "image": r })))
                .collect::<fdrep_core::Result<Vec<_>>>()?;
            Ok(Report::ok(json!({ "images": images })))
        }
    }
}
