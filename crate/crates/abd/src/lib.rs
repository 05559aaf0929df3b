//! Command-line surface for the abduction engine.
//!
//! Four subcommands over `.abd` files:
//!
//! * `solve`  - answer a decision query or enumerate minimal explanations;
//! * `oracle` - same queries, answered by the brute-force oracle;
//! * `reduce` - apply a named transformation and write the result;
//! * `check`  - run a solution-correspondence check.
//!
//! Exit codes: 10 yes, 20 no, 0 success (enumerate / reduce / check pass),
//! 3 check failed, 2 parse error, 1 usage error, 4 cap exceeded.

pub mod format;

use std::collections::BTreeMap;
use std::io::Write;

use abduction::checks;
use abduction::instance::{Instance, VarId, VarSet};
use abduction::oracle::{Oracle, OracleError};
use abduction::order::{self, PreferenceOrder};
use abduction::reduce::{self, ReduceError, TransformOptions};
use abduction::solve::{QueryKind, SolveError, Solver, Stats};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_CHECK_FAIL: u8 = 3;
pub const EXIT_CAP: u8 = 4;
pub const EXIT_YES: u8 = 10;
pub const EXIT_NO: u8 = 20;

const USAGE: &str = "\
usage:
  abd solve FILE --ordering {none|subset|card|prio-subset|prio-card|penalty}
            --query {exists|verify|relevant|necessary|dispensable|enumerate}
            [--set v1,v2 | --set -] [--var v] [--json]
  abd oracle FILE --ordering ... --query ... [--set ...] [--var v] [--json]
  abd reduce FILE --transform {f|gc|i|first-of-first|dh-replicate}
            [--c N] [--var v] -o OUT
  abd check FILE --lemma {basic|add-assumptions|basic-order|first-of-first|dh-replicate|repr-equivalence}

exit codes: 10 yes, 20 no, 0 success, 3 check failed, 2 parse error,
            1 usage error, 4 cap exceeded";

struct Args {
    positional: Vec<String>,
    values: BTreeMap<String, String>,
    json: bool,
}

fn parse_args(args: &[String]) -> Result<Args, String> {
    let mut positional = Vec::new();
    let mut values = BTreeMap::new();
    let mut json = false;
    let value_flags =
        ["--ordering", "--query", "--set", "--var", "--transform", "--c", "--lemma", "-o"];
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if arg == "--json" {
            json = true;
        } else if value_flags.contains(&arg.as_str()) {
            match it.next() {
                Some(v) => {
                    values.insert(arg.clone(), v.clone());
                }
                None => return Err(format!("flag {arg} needs a value")),
            }
        } else if arg.starts_with('-') && arg.len() > 1 && !arg[1..].starts_with(|c: char| c.is_ascii_digit()) {
            return Err(format!("unknown flag {arg}"));
        } else {
            positional.push(arg.clone());
        }
    }
    Ok(Args { positional, values, json })
}

enum Query {
    Exists,
    Verify,
    Var(QueryKind),
    Enumerate,
}

fn parse_query(name: &str) -> Option<Query> {
    Some(match name {
        "exists" => Query::Exists,
        "verify" => Query::Verify,
        "relevant" => Query::Var(QueryKind::Relevant),
        "necessary" => Query::Var(QueryKind::Necessary),
        "dispensable" => Query::Var(QueryKind::Dispensable),
        "enumerate" => Query::Enumerate,
        _ => return None,
    })
}

fn resolve_set(inst: &Instance, spec: &str) -> Result<VarSet, String> {
    if spec == "-" {
        return Ok(VarSet::new());
    }
    let mut set = VarSet::new();
    for token in spec.split(',').filter(|t| !t.is_empty()) {
        match inst.resolve(token) {
            Some(v) => set.insert(v),
            None => return Err(format!("unknown variable `{token}`")),
        }
    }
    Ok(set)
}

fn label_json(inst: &Instance, v: VarId) -> serde_json::Value {
    match inst.name(v) {
        Some(n) => serde_json::Value::String(n.to_string()),
        None => serde_json::Value::Number(v.into()),
    }
}

fn witness_json(inst: &Instance, witness: Option<&VarSet>) -> serde_json::Value {
    match witness {
        Some(w) => serde_json::Value::Array(w.iter().map(|v| label_json(inst, v)).collect()),
        None => serde_json::Value::Null,
    }
}

fn stats_json(stats: Stats) -> serde_json::Value {
    serde_json::json!({
        "engine_calls": stats.engine_calls,
        "subsets": stats.subsets_examined,
    })
}

fn write_witness_line(out: &mut dyn Write, inst: &Instance, w: &VarSet) {
    let labels: Vec<String> = w.iter().map(|v| inst.label(v)).collect();
    if labels.is_empty() {
        let _ = writeln!(out, "v 0");
    } else {
        let _ = writeln!(out, "v {} 0", labels.join(" "));
    }
}

/// One answer in both output styles, with the matching exit code.
fn emit_answer(
    out: &mut dyn Write,
    inst: &Instance,
    json: bool,
    answer: bool,
    witness: Option<&VarSet>,
    stats: Stats,
) -> u8 {
    if json {
        let doc = serde_json::json!({
            "answer": answer,
            "witness": witness_json(inst, witness),
            "stats": stats_json(stats),
        });
        let _ = writeln!(out, "{doc}");
    } else {
        let _ = writeln!(out, "s {}", if answer { "YES" } else { "NO" });
        if let Some(w) = witness {
            write_witness_line(out, inst, w);
        }
    }
    if answer {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn usage(out: &mut dyn Write, message: &str) -> u8 {
    let _ = writeln!(out, "error: {message}");
    let _ = writeln!(out, "{USAGE}");
    EXIT_USAGE
}

/// Run one command line. Returns the process exit code.
pub fn run_command(args: &[String], out: &mut dyn Write) -> u8 {
    let parsed = match parse_args(args) {
        Ok(p) => p,
        Err(e) => return usage(out, &e),
    };
    let Some(command) = parsed.positional.first().cloned() else {
        return usage(out, "missing subcommand");
    };
    let Some(file) = parsed.positional.get(1).cloned() else {
        return usage(out, "missing FILE");
    };
    if parsed.positional.len() > 2 {
        return usage(out, "unexpected extra arguments");
    }
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(out, "error: cannot read {file}: {e}");
            return EXIT_PARSE;
        }
    };
    let inst = match format::parse_instance(&text) {
        Ok(i) => i,
        Err(e) => {
            let _ = writeln!(out, "error: {file}: {e}");
            return EXIT_PARSE;
        }
    };
    match command.as_str() {
        "solve" => run_query(&parsed, &inst, out, Backend::Solver),
        "oracle" => run_query(&parsed, &inst, out, Backend::Oracle),
        "reduce" => run_reduce(&parsed, &inst, out),
        "check" => run_check(&parsed, &inst, out),
        other => usage(out, &format!("unknown subcommand `{other}`")),
    }
}

enum Backend {
    Solver,
    Oracle,
}

fn run_query(args: &Args, inst: &Instance, out: &mut dyn Write, backend: Backend) -> u8 {
    let ordering_name = args.values.get("--ordering").map(String::as_str).unwrap_or("none");
    let kind = match order::by_name(ordering_name) {
        Ok(k) => k,
        Err(e) => return usage(out, &e.to_string()),
    };
    let order = match order::bind(kind, inst) {
        Ok(o) => o,
        Err(e) => return usage(out, &e.to_string()),
    };
    let Some(query_name) = args.values.get("--query") else {
        return usage(out, "missing --query");
    };
    let Some(query) = parse_query(query_name) else {
        return usage(out, &format!("unknown query `{query_name}`"));
    };
    let var = match args.values.get("--var") {
        Some(token) => match inst.resolve(token) {
            Some(v) => Some(v),
            None => return usage(out, &format!("unknown variable `{token}`")),
        },
        None => None,
    };
    let set = match args.values.get("--set") {
        Some(spec) => match resolve_set(inst, spec) {
            Ok(s) => Some(s),
            Err(e) => return usage(out, &e),
        },
        None => None,
    };
    match backend {
        Backend::Solver => solve_query(inst, order.as_ref(), query, var, set, args.json, out),
        Backend::Oracle => oracle_query(inst, order.as_ref(), query, var, set, args.json, out),
    }
}

fn solve_error(out: &mut dyn Write, e: SolveError) -> u8 {
    let _ = writeln!(out, "error: {e}");
    match e {
        SolveError::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn solve_query(
    inst: &Instance,
    order: &dyn PreferenceOrder,
    query: Query,
    var: Option<VarId>,
    set: Option<VarSet>,
    json: bool,
    out: &mut dyn Write,
) -> u8 {
    let mut solver = Solver::new(inst);
    match query {
        Query::Exists => match solver.exists() {
            Ok(r) => emit_answer(out, inst, json, r.answer, r.witness.as_ref(), r.stats),
            Err(e) => solve_error(out, e),
        },
        Query::Verify => {
            let Some(candidate) = set else {
                return usage(out, "verify needs --set (use `--set -` for the empty set)");
            };
            match solver.verify_minimal(order, &candidate) {
                Ok(r) => emit_answer(out, inst, json, r.answer, r.witness.as_ref(), r.stats),
                Err(e) => solve_error(out, e),
            }
        }
        Query::Var(kind) => {
            let Some(h) = var else {
                return usage(out, "this query needs --var");
            };
            match solver.query_variable(order, kind, h) {
                Ok(r) => emit_answer(out, inst, json, r.answer, r.witness.as_ref(), r.stats),
                Err(e) => solve_error(out, e),
            }
        }
        Query::Enumerate => match solver.enumerate_minimal(order) {
            Ok(e) => {
                if json {
                    let expl: Vec<serde_json::Value> = e
                        .explanations
                        .iter()
                        .map(|s| witness_json(inst, Some(s)))
                        .collect();
                    let doc = serde_json::json!({
                        "answer": !e.explanations.is_empty(),
                        "witness": witness_json(inst, e.explanations.first()),
                        "explanations": expl,
                        "complete": e.complete,
                        "stats": stats_json(e.stats),
                    });
                    let _ = writeln!(out, "{doc}");
                } else {
                    for s in &e.explanations {
                        write_witness_line(out, inst, s);
                    }
                    let _ = writeln!(
                        out,
                        "c {} minimal explanation(s){}",
                        e.explanations.len(),
                        if e.complete { "" } else { ", incomplete" }
                    );
                }
                if e.complete {
                    EXIT_OK
                } else {
                    EXIT_CAP
                }
            }
            Err(e) => solve_error(out, e),
        },
    }
}

fn oracle_error(out: &mut dyn Write, e: OracleError) -> u8 {
    let _ = writeln!(out, "error: {e}");
    EXIT_CAP
}

fn oracle_query(
    inst: &Instance,
    order: &dyn PreferenceOrder,
    query: Query,
    var: Option<VarId>,
    set: Option<VarSet>,
    json: bool,
    out: &mut dyn Write,
) -> u8 {
    let oracle = match Oracle::new(inst) {
        Ok(o) => o,
        Err(e) => return oracle_error(out, e),
    };
    let stats = Stats { engine_calls: 0, subsets_examined: oracle.subsets_examined() };
    match query {
        Query::Exists => {
            let answer = oracle.exists();
            emit_answer(out, inst, json, answer, oracle.solutions().first(), stats)
        }
        Query::Verify => {
            let Some(candidate) = set else {
                return usage(out, "verify needs --set (use `--set -` for the empty set)");
            };
            let answer = oracle.verify_minimal(order, &candidate);
            emit_answer(out, inst, json, answer, answer.then_some(&candidate), stats)
        }
        Query::Var(kind) => {
            let Some(h) = var else {
                return usage(out, "this query needs --var");
            };
            if !inst.hypotheses().contains(h) {
                return usage(out, &format!("variable {h} is not a hypothesis"));
            }
            let minimal = oracle.minimal(order);
            let (answer, witness) = match kind {
                QueryKind::Relevant => {
                    let w = minimal.iter().find(|s| s.contains(h)).cloned();
                    (w.is_some(), w)
                }
                QueryKind::Necessary => {
                    let counter = minimal.iter().find(|s| !s.contains(h)).cloned();
                    (!minimal.is_empty() && counter.is_none(), counter)
                }
                QueryKind::Dispensable => {
                    let counter = minimal.iter().find(|s| !s.contains(h)).cloned();
                    (minimal.is_empty() || counter.is_some(), counter)
                }
            };
            emit_answer(out, inst, json, answer, witness.as_ref(), stats)
        }
        Query::Enumerate => {
            let minimal = oracle.minimal(order);
            if json {
                let expl: Vec<serde_json::Value> =
                    minimal.iter().map(|s| witness_json(inst, Some(s))).collect();
                let doc = serde_json::json!({
                    "answer": !minimal.is_empty(),
                    "witness": witness_json(inst, minimal.first()),
                    "explanations": expl,
                    "complete": true,
                    "stats": stats_json(stats),
                });
                let _ = writeln!(out, "{doc}");
            } else {
                for s in &minimal {
                    write_witness_line(out, inst, s);
                }
                let _ = writeln!(out, "c {} minimal explanation(s)", minimal.len());
            }
            EXIT_OK
        }
    }
}

fn run_reduce(args: &Args, inst: &Instance, out: &mut dyn Write) -> u8 {
    let Some(name) = args.values.get("--transform") else {
        return usage(out, "missing --transform");
    };
    let Some(transform) = reduce::transform_by_name(name) else {
        return usage(out, &format!("unknown transform `{name}`"));
    };
    let Some(out_path) = args.values.get("-o") else {
        return usage(out, "missing -o OUT");
    };
    let mut opts = TransformOptions::default();
    if let Some(c) = args.values.get("--c") {
        match c.parse::<u32>() {
            Ok(v) => opts.c = Some(v),
            Err(_) => return usage(out, &format!("bad --c value `{c}`")),
        }
    }
    if let Some(token) = args.values.get("--var") {
        match inst.resolve(token) {
            Some(v) => opts.target = Some(v),
            None => return usage(out, &format!("unknown variable `{token}`")),
        }
    }
    let record = match transform.apply(inst, &opts) {
        Ok(r) => r,
        Err(ReduceError::MissingOption { option }) => {
            return usage(out, &format!("transform `{name}` needs {option}"));
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return EXIT_USAGE;
        }
    };

    let mut doc = String::new();
    doc.push_str(&format!("c reduced with transform {name}\n"));
    for (input, output) in &record.var_map {
        if input != output || inst.name(*input).is_some() {
            doc.push_str(&format!(
                "c map var {} -> {output}\n",
                inst.label(*input)
            ));
        }
    }
    for (i, c) in record.c_index.iter().enumerate() {
        doc.push_str(&format!("c map clause {} c {c} d {}\n", i + 1, record.d_index[i]));
    }
    for (i, row) in record.replicas.iter().enumerate() {
        let ids: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        doc.push_str(&format!("c map clause {} replicas {}\n", i + 1, ids.join(" ")));
    }
    if !record.forced.is_empty() {
        let ids: Vec<String> = record.forced.iter().map(|v| v.to_string()).collect();
        doc.push_str(&format!("c map forced {}\n", ids.join(" ")));
    }
    for (role, v) in &record.roles {
        doc.push_str(&format!("c map role {role} -> {v}\n"));
    }
    doc.push_str(&format::serialize_instance(&record.output));

    if let Err(e) = std::fs::write(out_path, &doc) {
        let _ = writeln!(out, "error: cannot write {out_path}: {e}");
        return EXIT_USAGE;
    }
    let _ = writeln!(
        out,
        "c wrote {out_path}: {} variables, {} clauses",
        record.output.num_vars(),
        record.output.theory().len()
    );
    EXIT_OK
}

fn run_check(args: &Args, inst: &Instance, out: &mut dyn Write) -> u8 {
    let Some(name) = args.values.get("--lemma") else {
        return usage(out, "missing --lemma");
    };
    let Some(check) = checks::by_name(name) else {
        return usage(out, &format!("unknown lemma `{name}`"));
    };
    match check.run(inst) {
        Ok(report) => {
            for line in &report.lines {
                let _ = writeln!(out, "c {line}");
            }
            let _ = writeln!(out, "s {}", if report.pass { "PASS" } else { "FAIL" });
            if report.pass {
                EXIT_OK
            } else {
                EXIT_CHECK_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            if e.is_cap() {
                EXIT_CAP
            } else {
                EXIT_USAGE
            }
        }
    }
}
