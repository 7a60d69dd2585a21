use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use anyhow::{Context, Result};
use clap::{ArgMatches, CommandFactory, FromArgMatches};
use fdrep_core::decompose::{default_seed, set_default_seed};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commands::{self, Report};
use crate::refs::Workspace;
use crate::{Cli, Cmd};

pub struct Outcome {
    /// The rendered output, whether printed or written to `--out`.
    pub document: String,
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Serialize, Deserialize)]
struct LogEntry {
    args: Vec<String>,
    code: i32,
    output: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    error: String,
}

fn startup_seed() -> u64 {
    static SEED: OnceLock<u64> = OnceLock::new();
    *SEED.get_or_init(default_seed)
}

/// Subcommand path, e.g. `ar nodes`.
fn command_name(m: &ArgMatches) -> String {
    let mut parts = Vec::new();
    let mut cur = m;
    while let Some((name, sub)) = cur.subcommand() {
        parts.push(name.to_string());
        cur = sub;
    }
    parts.join(" ")
}

/// Short stand-in for matrices, modules and sequences in table output.
fn abbreviate(v: &Value) -> Option<String> {
    let map = v.as_object()?;
    let has = |keys: &[&str]| keys.iter().all(|k| map.contains_key(*k));
    if has(&["rows", "cols", "entries"]) {
        Some(format!("<{}x{} matrix>", map["rows"], map["cols"]))
    } else if has(&["dims", "arrows"]) {
        Some(format!("<module {}>", map["dims"]))
    } else if has(&["dim", "action"]) {
        Some(format!("<module of dimension {}>", map["dim"]))
    } else if has(&["x", "y", "z", "f", "g"]) {
        Some("<sequence>".into())
    } else if has(&["lo", "terms", "diffs"]) {
        Some(format!("<window from degree {}>", map["lo"]))
    } else {
        None
    }
}

fn render_table(v: &Value, out: &mut String, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if let Some(short) = abbreviate(x) {
                    out.push_str(&format!("{pad}{k}: {short}\n"));
                    continue;
                }
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_table(x, out, indent + 2);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for item in items {
                            match abbreviate(item) {
                                Some(short) => out.push_str(&format!("{pad}  - {short}\n")),
                                None if item.is_object() => {
                                    out.push_str(&format!("{pad}  -\n"));
                                    render_table(item, out, indent + 4);
                                }
                                None => out.push_str(&format!("{pad}  - {item}\n")),
                            }
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {x}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let mut ws = Workspace::default();
    match &cli.cmd {
        Cmd::Algebra(c) => commands::algebra(&mut ws, c),
        Cmd::Module(c) => commands::module(&mut ws, c),
        Cmd::Hom { alg, from, to } => commands::hom(&mut ws, alg, from, to),
        Cmd::Ar(c) => commands::ar(&mut ws, c),
        Cmd::Perfect(c) => commands::perfect(&mut ws, c),
        Cmd::Eta(c) => commands::eta(&mut ws, c),
        Cmd::Kato(c) => commands::kato(&mut ws, c),
        Cmd::Gproj { m, bound } => commands::gproj(&mut ws, m, *bound),
        Cmd::Morita(c) => commands::morita(&mut ws, c),
        Cmd::Depth(d) => commands::depth_of(&mut ws, d),
        Cmd::Replay { log } => replay(log),
    }
}

fn error_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<fdrep_core::Error>() {
        Some(fdrep_core::Error::Invariant(_)) => 1,
        _ => 2,
    }
}

/// Parse and execute one invocation without touching the session log.
pub fn run(args: &[String]) -> Outcome {
    let failed = |stderr: String, code: i32| Outcome { document: String::new(), stdout: String::new(), stderr, code };
    let parsed = Cli::command().try_get_matches_from(args).and_then(|m| Ok((Cli::from_arg_matches(&m)?, m)));
    let (cli, matches) = match parsed {
        Ok(c) => c,
        Err(e) if e.use_stderr() => return failed(e.render().to_string(), 2),
        Err(e) => {
            let text = e.render().to_string();
            return Outcome { document: text.clone(), stdout: text, stderr: String::new(), code: 0 };
        }
    };
    let seed = cli.seed.unwrap_or_else(startup_seed);
    set_default_seed(seed);
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => return failed(format!("error: {e:#}\n"), error_code(&e)),
    };
    let doc = json!({ "command": command_name(&matches), "seed": seed, "result": report.value });
    let document = if cli.table {
        let mut s = String::new();
        render_table(&doc, &mut s, 0);
        s
    } else {
        fdrep_core::io::to_json(&doc)
    };
    let stdout = match &cli.out {
        Some(path) => match std::fs::write(path, &document) {
            Ok(()) => String::new(),
            Err(e) => return failed(format!("error: cannot write {}: {e}\n", path.display()), 2),
        },
        None => document.clone(),
    };
    Outcome { document, stdout, stderr: String::new(), code: report.code }
}

/// Arguments with any `--log` option removed.
fn without_log(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--log" {
            it.next();
        } else if !a.starts_with("--log=") {
            out.push(a.clone());
        }
    }
    out
}

fn log_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--log" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--log=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Run, then append the invocation to the session log if `--log` was given.
pub fn run_logged(args: &[String]) -> Outcome {
    let mut outcome = run(args);
    if let Some(path) = log_path(args) {
        let entry = LogEntry {
            args: without_log(args).into_iter().skip(1).collect(),
            code: outcome.code,
            output: outcome.document.clone(),
            error: outcome.stderr.clone(),
        };
        let line = serde_json::to_string(&entry).expect("serializable") + "\n";
        let written = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .and_then(|mut f| f.write_all(line.as_bytes()));
        if let Err(e) = written {
            outcome.stderr.push_str(&format!("error: cannot append to {path}: {e}\n"));
            outcome.code = 2;
        }
    }
    outcome
}

fn replay(log: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(log).with_context(|| format!("cannot read {}", log.display()))?;
    let mut steps = 0;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let entry: LogEntry =
            serde_json::from_str(line).with_context(|| format!("line {} of the log is malformed", i + 1))?;
        let mut args = vec!["fdrep".to_string()];
        args.extend(entry.args.iter().cloned());
        let again = run(&args);
        steps += 1;
        if again.document != entry.output || again.stderr != entry.error || again.code != entry.code {
            let first_line = entry
                .output
                .lines()
                .zip(again.document.lines())
                .position(|(a, b)| a != b)
                .unwrap_or_else(|| entry.output.lines().count().min(again.document.lines().count()));
            return Ok(Report {
                value: json!({
                    "status": "diverged",
                    "step": steps,
                    "args": entry.args,
                    "first_differing_line": first_line + 1,
                    "expected_code": entry.code,
                    "actual_code": again.code,
                }),
                code: 1,
            });
        }
    }
    Ok(Report { value: json!({ "status": "identical", "steps": steps }), code: 0 })
}
