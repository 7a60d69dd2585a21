//! Acceptance suite. Each criterion runs under its time limit and prints one
//! PASS/FAIL line; the process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use fdrep_core::ar::{almost_split_starting, is_node, sum_almost_split};
use fdrep_core::bimodule::{
    condition_report, hom_right_dual, l_equivalence_probe, morita_type_check, natiso_check, simple_image_analysis,
    tensor_sequence, Bimodule, ConditionOptions, ProbeStatus,
};
use fdrep_core::decompose::{decompose, isomorphic};
use fdrep_core::eta::{almost_split_iso, run_chain, transport, ChainStatus};
use fdrep_core::homological::{simple_modules, strip_projectives, syzygy};
use fdrep_core::kato::{is_gorenstein_projective, kato_complex, totally_acyclic_window, yoshino_consequences};
use fdrep_core::seq::{
    ext1_classes, ext1_vanishing_equiv, merge_left, merge_right, remove_split_summands, splice_snake_1,
    splice_snake_2, ShortExactSeq,
};
use fdrep_core::{zoo, Algebra, Module};
use fdrep_core::fuzz::Fuzzer;
use fdrep_validation::{indecomposables, Universe};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Dimension vectors of the indecomposable summands, sorted.
fn summands(m: &Module) -> Result<Vec<Vec<usize>>, String> {
    if m.dim() == 0 {
        return Ok(vec![]);
    }
    let mut dv = decompose(m).map_err(err)?.dim_vectors();
    dv.sort();
    Ok(dv)
}

fn sorted(mut v: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    v.sort();
    v
}

fn is_simple(m: &Module) -> bool {
    m.dim() > 0 && m.radical_submodule().rows() == 0 && m.top_vector().iter().sum::<usize>() == 1
}

fn has_node_summand(x: &Module) -> Result<bool, String> {
    if x.dim() == 0 {
        return Ok(false);
    }
    for s in decompose(x).map_err(err)?.summands {
        if is_simple(&s.module) && is_node(&s.module).map_err(err)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn kronecker_chain_1() -> Outcome {
    let alg = zoo::kronecker(2);
    let eta0 = zoo::kronecker_chain_start(&alg).map_err(err)?;
    let chain = run_chain(&eta0, 8).map_err(err)?;
    ensure(chain.status == ChainStatus::BoundExceeded(8), || format!("status {:?}", chain.status))?;
    let seqs = chain.sequences();
    ensure(seqs.len() == 9, || format!("{} sequences", seqs.len()))?;
    for (n, s) in seqs.iter().enumerate() {
        let x = vec![vec![n + 2, n + 3]; n + 1];
        let mut y = vec![vec![n + 3, n + 4]; n];
        y.push(vec![3, 3]);
        let z = vec![vec![1, 0]];
        let got = [summands(&s.x)?, summands(&s.y)?, summands(&s.z)?];
        ensure(got == [x.clone(), sorted(y.clone()), z.clone()], || {
            format!("eta_{n}: got {got:?}, expected {:?}", [x, sorted(y), z])
        })?;
        ensure(almost_split_iso(s).map_err(err)?.is_none(), || format!("eta_{n} is almost split"))?;
    }
    Ok("eta_0..eta_8 match, BoundExceeded(8), none almost split".into())
}

fn kronecker_chain_2() -> Outcome {
    let alg = zoo::kronecker(2);
    let eta0 = zoo::kronecker_second_chain_start(&alg).map_err(err)?;
    let chain = run_chain(&eta0, 8).map_err(err)?;
    let seqs = chain.sequences();
    ensure(seqs.len() == 9, || format!("{} sequences, status {:?}", seqs.len(), chain.status))?;
    for (n, s) in seqs.iter().enumerate() {
        let want = [vec![vec![n + 2, n + 3]], vec![vec![n + 3, n + 4]], vec![vec![1, 1]]];
        let got = [summands(&s.x)?, summands(&s.y)?, summands(&s.z)?];
        ensure(got == want, || format!("eta_{n}: got {got:?}, expected {want:?}"))?;
    }
    Ok(format!("eta_0..eta_8 match, status {:?}", chain.status))
}

fn kronecker_ar_sequences() -> Outcome {
    let alg = zoo::kronecker(2);
    let mut not_perfect = Vec::new();
    for n in 0..=4 {
        let x = zoo::kronecker_preprojective(&alg, n);
        let s = almost_split_starting(&x).map_err(err)?.seq;
        let want = [vec![vec![n, n + 1]], vec![vec![n + 1, n + 2]; 2], vec![vec![n + 2, n + 3]]];
        let got = [summands(&s.x)?, summands(&s.y)?, summands(&s.z)?];
        ensure(got == want, || format!("n={n}: got {got:?}, expected {want:?}"))?;
        if !s.is_perfect().map_err(err)? {
            not_perfect.push(n);
        }
    }
    ensure(not_perfect.is_empty(), || {
        format!("dimension vectors match for n<=4; not perfect for n in {not_perfect:?}")
    })?;
    Ok("dimension vectors match and every sequence is perfect for n<=4".into())
}

fn ar_and_ext_properties(universes: &[Universe]) -> Result<(usize, usize), String> {
    let (mut ar_checked, mut ext_checked) = (0, 0);
    for u in universes {
        for x in &u.mods {
            if !fdrep_core::homological::is_injective(x) {
                let s = almost_split_starting(x).map_err(err)?.seq;
                ensure(s.is_perfect().map_err(err)? == !x.is_projective(), || {
                    format!("{}: AR sequence from {:?} has wrong perfectness", u.name, x.dim_vector())
                })?;
                ensure(!has_node_summand(&s.y)?, || {
                    format!("{}: AR middle term from {:?} has a node summand", u.name, x.dim_vector())
                })?;
                ar_checked += 1;
            }
            let r = ext1_vanishing_equiv(x).map_err(err)?;
            ensure(r.consistent(), || format!("{}: {:?} inconsistent {r:?}", u.name, x.dim_vector()))?;
            ext_checked += 1;
        }
    }
    Ok((ar_checked, ext_checked))
}

#[derive(Default)]
struct FuzzTally {
    attempts: usize,
    built: [usize; 4],
    hypotheses: [usize; 4],
}

fn perfect(s: &ShortExactSeq) -> Result<bool, String> {
    s.is_perfect().map_err(err)
}

fn fuzz_merge_splice(universes: &[Universe], per_op: usize) -> Result<FuzzTally, String> {
    let mut fz = Fuzzer::new(0x5eed_0004);
    let mut t = FuzzTally::default();
    while t.hypotheses.iter().any(|&h| h < per_op) {
        t.attempts += 1;
        if t.attempts > 400 * per_op {
            return Err(format!("only {:?} instances with perfect inputs", t.hypotheses));
        }
        let u = fz.pick(universes);
        let op = t.attempts % 4;
        let (inputs_perfect, out) = match op {
            0 => match fz.merge_left_input(&u.mods).map_err(err)? {
                Some((s, tt, a)) => (perfect(&s)? && perfect(&tt)?, merge_left(&s, &tt, &a).map_err(err)?),
                None => continue,
            },
            1 => match fz.merge_right_input(&u.mods).map_err(err)? {
                Some((s, tt, a)) => (perfect(&s)? && perfect(&tt)?, merge_right(&s, &tt, &a).map_err(err)?),
                None => continue,
            },
            2 => match fz.snake_1_input(&u.mods).map_err(err)? {
                Some((s1, s2)) => (perfect(&s1)? && perfect(&s2)?, splice_snake_1(&s1, &s2).map_err(err)?),
                None => continue,
            },
            _ => match fz.snake_2_input(&u.mods).map_err(err)? {
                Some((s1, s2)) => (perfect(&s1)? && perfect(&s2)?, splice_snake_2(&s1, &s2).map_err(err)?),
                None => continue,
            },
        };
        out.certify().map_err(err)?;
        t.built[op] += 1;
        if inputs_perfect {
            t.hypotheses[op] += 1;
            ensure(perfect(&out)?, || format!("{}: operation {op} lost perfectness", u.name))?;
        }
    }
    Ok(t)
}

fn perfect_sequence_suite() -> Outcome {
    let universes = Universe::zoo(16).map_err(err)?;
    let (ar, ext) = ar_and_ext_properties(&universes)?;
    let t = fuzz_merge_splice(&universes, 100)?;
    let total: usize = t.hypotheses.iter().sum();
    ensure(total >= 200, || format!("only {total} fuzzed instances"))?;
    Ok(format!(
        "{ar} AR sequences, {ext} Ext checks, {total} perfect-input merge/splice instances {:?} of {} built",
        t.hypotheses,
        t.built.iter().sum::<usize>()
    ))
}

/// Every nonzero class when there are at most `cap` of them, else the basis
/// classes plus random ones.
fn classes(z: &Module, x: &Module, fz: &mut Fuzzer, cap: u64) -> Result<Vec<ShortExactSeq>, String> {
    let ext = fdrep_core::homological::Extensions::new(z, x);
    let (d, p) = (ext.dim(), x.p() as u64);
    let mut out = Vec::new();
    let mut push = |class: Vec<u32>| -> Result<(), String> {
        if class.iter().all(|&c| c == 0) {
            return Ok(());
        }
        let (e, f, g) = ext.realize(&class);
        out.push(ShortExactSeq::new(x.clone(), e, z.clone(), f, g).map_err(err)?);
        Ok(())
    };
    if p.checked_pow(d as u32).is_some_and(|n| n <= cap) {
        let total = p.pow(d as u32);
        for mut k in 0..total {
            let mut class = Vec::with_capacity(d);
            for _ in 0..d {
                class.push((k % p) as u32);
                k /= p;
            }
            push(class)?;
        }
    } else {
        for i in 0..d {
            let mut class = vec![0; d];
            class[i] = 1;
            push(class)?;
        }
        for _ in 0..8 {
            push(fz.coefficients(x.p(), d))?;
        }
    }
    Ok(out)
}

fn chain_termination() -> Outcome {
    let universes: Vec<Universe> =
        Universe::zoo(16).map_err(err)?.into_iter().filter(|u| u.name != "Kronecker").collect();
    let mut fz = Fuzzer::new(0x5eed_0005);
    let mut runs = 0;
    let mut steps = 0;
    for u in &universes {
        let bound = u.mods.len() * u.mods.len();
        let mut ends: Vec<Module> = u.mods.clone();
        for i in 0..u.mods.len() {
            for j in i..u.mods.len() {
                ends.push(u.mods[i].direct_sum2(&u.mods[j]));
            }
        }
        for z in &ends {
            for x in &ends {
                if has_node_summand(x)? {
                    continue;
                }
                for s in classes(z, x, &mut fz, 64)? {
                    if !perfect(&s)? || !remove_split_summands(&s).map_err(err)?.pieces.is_empty() {
                        continue;
                    }
                    let chain = run_chain(&s, bound).map_err(err)?;
                    let ChainStatus::TerminatedAlmostSplit(l) = chain.status else {
                        return Err(format!("{}: chain from {:?} ended {:?}", u.name, s.dim_vectors(), chain.status));
                    };
                    let ar = sum_almost_split(&chain.last.x).map_err(err)?;
                    let iso = chain.terminal_iso.as_ref().ok_or("no terminal isomorphism")?;
                    ensure(ar.is_morphism_to(&chain.last, iso) && iso.iter().all(|m| m.is_invertible()), || {
                        format!("{}: terminal isomorphism fails for {:?}", u.name, s.dim_vectors())
                    })?;
                    runs += 1;
                    steps += l;
                }
            }
        }
    }
    ensure(runs > 0, || "no admissible sequences".into())?;
    Ok(format!("{runs} chains terminated ({steps} steps in total), none exceeded the bound"))
}

fn gorenstein_suite() -> Outcome {
    let bound = 8;
    let mut yes_count = 0;
    let self_injective = [zoo::dual_numbers(2), zoo::truncated(3, 3)];
    let hereditary = [zoo::a2(2), zoo::kronecker(2)];
    let check_yes = |alg: &Arc<Algebra>, x: &Module| -> Result<(), String> {
        let omega = syzygy(x).0;
        if omega.dim() > 0 {
            for s in decompose(&omega).map_err(err)?.summands {
                ensure(is_gorenstein_projective(&s.module, bound).map_err(err)?.is_yes(), || {
                    format!("syzygy of {:?} over {} is not Gorenstein projective", x.dim_vector(), alg.name())
                })?;
            }
        }
        let c = kato_complex(x, -4, 4).map_err(err)?.window;
        ensure(totally_acyclic_window(&c), || {
            format!("window of {:?} over {} is not totally acyclic", x.dim_vector(), alg.name())
        })
    };
    for alg in &self_injective {
        for x in indecomposables(alg, 32).map_err(err)? {
            ensure(is_gorenstein_projective(&x, bound).map_err(err)?.is_yes(), || {
                format!("{:?} over {} is not Yes", x.dim_vector(), alg.name())
            })?;
            check_yes(alg, &x)?;
            yes_count += 1;
        }
    }
    let mut no_count = 0;
    for alg in &hereditary {
        for x in indecomposables(alg, 12).map_err(err)? {
            let v = is_gorenstein_projective(&x, bound).map_err(err)?;
            if x.is_projective() {
                ensure(v.is_yes(), || format!("projective {:?} over {} is not Yes", x.dim_vector(), alg.name()))?;
                check_yes(alg, &x)?;
                yes_count += 1;
            } else {
                ensure(v.is_no(), || format!("{:?} over {} gave {v:?}", x.dim_vector(), alg.name()))?;
                no_count += 1;
            }
        }
    }
    Ok(format!("{yes_count} Yes, {no_count} No, all as expected"))
}

struct MoritaCase {
    name: &'static str,
    m: Bimodule,
    tests: Vec<Module>,
}

fn morita_cases() -> Result<(Vec<MoritaCase>, MoritaCase), String> {
    let a = zoo::dual_numbers(2);
    let b = a.matrix_algebra(2).map_err(err)?;
    let c = zoo::truncated(2, 3);
    let d = c.matrix_algebra(2).map_err(err)?;
    let a2 = zoo::a2(2);
    let good = vec![
        MoritaCase {
            name: "identity over A2",
            m: Bimodule::regular(&a2).map_err(err)?,
            tests: indecomposables(&a2, 8).map_err(err)?,
        },
        MoritaCase {
            name: "identity over F2[x]/x^2",
            m: Bimodule::regular(&a).map_err(err)?,
            tests: indecomposables(&a, 8).map_err(err)?,
        },
        MoritaCase {
            name: "rows F2[x]/x^2 -> M2",
            m: Bimodule::matrix_row(&a, &b, 2).map_err(err)?,
            tests: indecomposables(&a, 8).map_err(err)?,
        },
        MoritaCase {
            name: "identity over F2[x]/x^3",
            m: Bimodule::regular(&c).map_err(err)?,
            tests: indecomposables(&c, 8).map_err(err)?,
        },
        MoritaCase {
            name: "rows F2[x]/x^3 -> M2",
            m: Bimodule::matrix_row(&c, &d, 2).map_err(err)?,
            tests: indecomposables(&c, 8).map_err(err)?,
        },
    ];
    let bad = MoritaCase {
        name: "free A2 (x) A2",
        m: Bimodule::free(&a2, &a2).map_err(err)?,
        tests: indecomposables(&a2, 8).map_err(err)?,
    };
    Ok((good, bad))
}

fn transport_agrees(m: &Bimodule) -> Result<usize, String> {
    let a = m.left_algebra().clone();
    let mods = indecomposables(&a, 20).map_err(err)?;
    let mut count = 0;
    for z in &mods {
        for x in &mods {
            for s in ext1_classes(z, x).map_err(err)? {
                if !perfect(&s)? || !remove_split_summands(&s).map_err(err)?.pieces.is_empty() {
                    continue;
                }
                let Ok(chain) = run_chain(&s, 20) else { continue };
                let t = transport(&chain, m).map_err(err)?;
                let direct = tensor_sequence(&s, m).map_err(err)?;
                let stable = |p: &Module, q: &Module| -> Result<bool, String> {
                    isomorphic(&strip_projectives(p).map_err(err)?, &strip_projectives(q).map_err(err)?).map_err(err)
                };
                ensure(perfect(&t.seq)?, || "transported sequence is not perfect".into())?;
                ensure(
                    stable(&t.seq.x, &direct.x)? && stable(&t.seq.y, &direct.y)? && stable(&t.seq.z, &direct.z)?,
                    || format!("transport of {:?} differs from direct tensoring", s.dim_vectors()),
                )?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn morita_suite() -> Outcome {
    let (good, bad) = morita_cases()?;
    let mut notes = Vec::new();
    let mut transported = 0;
    for c in &good {
        let m = &c.m;
        let n = hom_right_dual(m).map_err(err)?;
        let r = morita_type_check(m, &n).map_err(err)?;
        ensure(r.passes_without_error_terms(), || format!("{}: {r:?}", c.name))?;
        ensure(natiso_check(m).map_err(err)?.all_isomorphic(), || format!("{}: natiso fails", c.name))?;
        let opts = ConditionOptions::defaults(m.left_algebra());
        let cr = condition_report(m, &opts).map_err(err)?;
        ensure(cr.nakayama_holds(), || format!("{}: condition (iii) fails", c.name))?;
        ensure(cr.dual_commutation_holds(), || format!("{}: condition (iv) fails", c.name))?;
        ensure(cr.dual_homology_vanishes.iter().all(|v| v.1), || format!("{}: dual homology", c.name))?;
        for s in simple_modules(m.left_algebra()) {
            let si = simple_image_analysis(&s, m).map_err(err)?;
            ensure(si.indecomposable && si.simple_plus_projective, || format!("{}: {si:?}", c.name))?;
        }
        let probe = l_equivalence_probe(m, &c.tests, -3, 3).map_err(err)?;
        ensure(probe.status == ProbeStatus::Consistent, || format!("{}: probe {:?}", c.name, probe.status))?;
        let moved = transport_agrees(m)?;
        transported += moved;
        notes.push(format!("{}: {moved} transported", c.name));
    }
    ensure(transported > 0, || "no perfect sequence was transported".into())?;
    let m = &bad.m;
    let cr = condition_report(m, &ConditionOptions::defaults(m.left_algebra())).map_err(err)?;
    ensure(!cr.nakayama_holds() && !cr.dual_commutation_holds(), || {
        format!("{}: (iii)={} (iv)={}", bad.name, cr.nakayama_holds(), cr.dual_commutation_holds())
    })?;
    let r = morita_type_check(m, &hom_right_dual(m).map_err(err)?).map_err(err)?;
    ensure(!r.passes(), || format!("{}: Morita-type check passes", bad.name))?;
    let probe = l_equivalence_probe(m, &bad.tests, -3, 3).map_err(err)?;
    notes.push(format!("{}: (iii) and (iv) fail, probe {:?}", bad.name, probe.status));
    Ok(notes.join("; "))
}

fn yoshino_suite() -> Outcome {
    let universes = Universe::zoo(12).map_err(err)?;
    let mut fz = Fuzzer::new(0x5eed_0008);
    let mut equality_cases = 0;
    for i in 0..100 {
        let u = &universes[i % universes.len()];
        let c = fz.window(&u.alg, &u.mods).map_err(err)?;
        let m = fz.module(&u.mods);
        let k = c.lo + 1 + fz.below((c.hi() - c.lo - 1) as usize) as i64;
        let r = yoshino_consequences(&c, &m, k).map_err(err)?;
        ensure(r.inequality_holds() && r.equality_holds(), || format!("window {i} over {}: {r:?}", u.name))?;
        if r.hom_of_cohomology == 0 {
            equality_cases += 1;
        }
    }
    Ok(format!("100 windows, {equality_cases} with Hom(H^k(F), M) = 0"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "Kronecker chain 1", limit: Duration::from_secs(30), run: kronecker_chain_1 },
        Criterion { id: 2, name: "Kronecker chain 2", limit: Duration::from_secs(30), run: kronecker_chain_2 },
        Criterion { id: 3, name: "Kronecker AR sequences", limit: Duration::from_secs(10), run: kronecker_ar_sequences },
        Criterion { id: 4, name: "perfect-sequence suite", limit: Duration::from_secs(120), run: perfect_sequence_suite },
        Criterion { id: 5, name: "chain termination", limit: Duration::from_secs(120), run: chain_termination },
        Criterion { id: 6, name: "Gorenstein suite", limit: Duration::from_secs(60), run: gorenstein_suite },
        Criterion { id: 7, name: "Morita-type suite", limit: Duration::from_secs(120), run: morita_suite },
        Criterion { id: 8, name: "Yoshino consequences", limit: Duration::from_secs(60), run: yoshino_suite },
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_none_or(|o| o == c.id)) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("over time limit; {detail}")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!(
            "criterion {} [{tag}] {} ({:.2}s, limit {}s): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
        if outcome.is_err() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
