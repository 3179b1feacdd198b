use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use schurlab::coloring::{BlockAudit, CertificateError};
use schurlab::manybody::{
    algebra_report, basis_json, ground_state, ground_state_json, hamiltonian, matrix_text, Basis, ManybodyError,
};
use schurlab::sequence::{fractal_check, generate, genfun_check, occupancy};
use schurlab::solver::{
    collect_colorings, export_cnf, import_sat_assignment, solve, Budget, CnfDocument, Mode, SearchParams, SearchResult,
    SolveError,
};
use schurlab::transform::{build_rset, check_group, render_table, RsetOptions, TransformError};
use schurlab::{Certificate, Coloring, Constraint, Violation};

use crate::args::*;
use crate::{CliError, Report};

/// Largest set whose Cayley table is printed.
const MAX_TABLE: usize = 64;

pub fn format_of(command: &Command) -> Format {
    match command {
        Command::Verify(a) => a.common.format,
        Command::Solve(a) => a.common.format,
        Command::Enumerate(a) => a.common.format,
        Command::Rset(a) => a.common.format,
        Command::Seq(a) => a.common.format,
        Command::Cnf(a) => a.common.format,
        Command::Decode(a) => a.common.format,
        Command::Manybody(a) => a.common.format,
    }
}

pub fn run(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Verify(a) => verify(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Rset(a) => rset(a),
        Command::Seq(a) => seq(a),
        Command::Cnf(a) => cnf(a),
        Command::Decode(a) => decode(a),
        Command::Manybody(a) => manybody(a),
    }
}

fn constraint(rule: &RuleArgs) -> Constraint {
    match (rule.kind, rule.modulus) {
        (Kind::Classic, None) => Constraint::Classic,
        (Kind::Weak, None) => Constraint::Weak,
        (Kind::Classic, Some(m)) => Constraint::Modular(m),
        (Kind::Weak, Some(m)) => Constraint::WeakModular(m),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn render_violation(v: &Violation) -> String {
    let t = v.triple;
    format!("S{}: {} + {} = {}", v.block + 1, t.x, t.y, t.z)
}

fn coloring_line(c: &Coloring) -> String {
    c.blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let values: Vec<String> = b.values().iter().map(u32::to_string).collect();
            format!("S{}={{{}}}", i + 1, values.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn verify(a: VerifyArgs) -> Result<Report, CliError> {
    let text = read(&a.cert)?;
    let started = Instant::now();
    match Certificate::from_json(&text) {
        Ok(cert) => {
            let report = cert.verify();
            let elapsed = started.elapsed();
            let json = json!({
                "valid": report.valid,
                "kind": cert.constraint.kind(),
                "modulus": cert.constraint.modulus(),
                "K": cert.coloring.k(),
                "n": cert.coloring.n(),
                "violations": report.violations,
            });
            let mut out = String::new();
            writeln!(
                out,
                "{}: {} coloring of 1..={} into {} blocks ({:.3} ms)",
                if report.valid { "valid" } else { "INVALID" },
                cert.constraint,
                cert.coloring.n(),
                cert.coloring.k(),
                elapsed.as_secs_f64() * 1e3
            )
            .unwrap();
            for v in &report.violations {
                writeln!(out, "  violation {}", render_violation(v)).unwrap();
            }
            Ok(if report.valid { Report::ok(json, out) } else { Report::failed(json, out) })
        }
        Err(CertificateError::Coloring(err)) => {
            // Not a partition: audit the listing as given.
            let (constraint, k, audit) = Certificate::audit_json(&text).map_err(|e| CliError::Failed(e.to_string()))?;
            Ok(Report::failed(
                audit_json(&err.to_string(), constraint, k, &audit),
                audit_text(&err.to_string(), constraint, &audit),
            ))
        }
        Err(e) => Err(CliError::Failed(format!("{}: {e}", a.cert.display()))),
    }
}

fn audit_json(error: &str, constraint: Constraint, k: usize, audit: &BlockAudit) -> Value {
    let admissible: Vec<Value> = audit
        .admissible
        .iter()
        .map(|(v, blocks)| json!({ "value": v, "blocks": blocks.iter().map(|b| b + 1).collect::<Vec<_>>() }))
        .collect();
    json!({
        "valid": false,
        "error": error,
        "kind": constraint.kind(),
        "modulus": constraint.modulus(),
        "K": k,
        "n": audit.n,
        "missing": audit.missing,
        "duplicates": audit.duplicates,
        "out_of_range": audit.out_of_range,
        "violations": audit.violations,
        "admissible": admissible,
    })
}

fn audit_text(error: &str, constraint: Constraint, audit: &BlockAudit) -> String {
    let list = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
    let mut out = format!("INVALID: not a partition of 1..={} ({error})\n", audit.n);
    if !audit.missing.is_empty() {
        writeln!(out, "  missing values: {}", list(&audit.missing)).unwrap();
    }
    if !audit.duplicates.is_empty() {
        writeln!(out, "  repeated values: {}", list(&audit.duplicates)).unwrap();
    }
    if !audit.out_of_range.is_empty() {
        writeln!(out, "  values outside 1..={}: {}", audit.n, list(&audit.out_of_range)).unwrap();
    }
    if audit.violations.is_empty() {
        writeln!(out, "  listed blocks are {constraint}-sum-free").unwrap();
    }
    for v in &audit.violations {
        writeln!(out, "  violation {}", render_violation(v)).unwrap();
    }
    for (v, blocks) in &audit.admissible {
        let names: Vec<String> = blocks.iter().map(|b| format!("S{}", b + 1)).collect();
        let fits = if names.is_empty() { "no block".to_string() } else { names.join(", ") };
        writeln!(out, "  {v} fits {fits}").unwrap();
    }
    out
}

fn result_json(r: &SearchResult, k: u32, c: Constraint, mode: Mode) -> Value {
    json!({
        "kind": c.kind(),
        "modulus": c.modulus(),
        "K": k,
        "mode": mode,
        "value": r.value,
        "proven_maximal": r.proven_maximal,
        "certificate": Certificate::new(c, r.certificate.clone()).to_json_value(),
    })
}

fn result_text(r: &SearchResult, c: Constraint) -> String {
    let status = if r.proven_maximal { "proven maximal" } else { "lower bound" };
    let mut out =
        format!("{c}: value {} ({status}), {} nodes, {:.3} s\n", r.value, r.stats.nodes, r.stats.elapsed.as_secs_f64());
    out.push_str(&r.certificate.canonical().to_string());
    out
}

fn solve_cmd(a: SolveArgs) -> Result<Report, CliError> {
    let c = constraint(&a.rule);
    let mode = if a.lower_bound { Mode::LowerBound } else { Mode::Prove };
    let mut params = SearchParams::new(a.k as usize, c, mode).with_threads(a.common.threads as usize);
    params.allow_long = a.allow_long;
    if let Some(seconds) = a.budget {
        if !(seconds.is_finite() && seconds > 0.0) {
            return Err(CliError::Usage(format!("--budget must be a positive number of seconds, got {seconds}")));
        }
        params = params.with_budget(Budget::wall(Duration::from_secs_f64(seconds)));
    }
    if let Some(t) = a.target {
        params = params.with_target(t);
    }
    if let Some(path) = &a.hint {
        let cert = Certificate::from_json(&read(path)?)
            .map_err(|e| CliError::Usage(format!("hint {}: {e}", path.display())))?;
        params = params.with_hint(cert.coloring);
    }
    match solve(&params) {
        Ok(r) => Ok(Report::ok(result_json(&r, a.k, c, mode), result_text(&r, c))),
        Err(SolveError::BudgetExhausted(r)) => {
            let mut text = result_text(&r, c);
            text.push_str("budget exhausted: maximality not proven\n");
            Ok(Report::failed(result_json(&r, a.k, c, mode), text))
        }
        Err(SolveError::ScaleRefused(msg)) => Err(CliError::Usage(msg)),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

fn enumerate(a: EnumerateArgs) -> Result<Report, CliError> {
    let c = constraint(&a.rule);
    let colorings = collect_colorings(a.k as usize, a.n, c, a.canonical, a.common.threads as usize)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let json = Value::Array(
        colorings.iter().map(|col| Certificate::new(c, col.clone()).to_json_value()["blocks"].clone()).collect(),
    );
    let mut text = String::new();
    for col in &colorings {
        writeln!(text, "{}", coloring_line(col)).unwrap();
    }
    writeln!(text, "{} colorings", colorings.len()).unwrap();
    Ok(Report::ok(json, text))
}

fn rset(a: RsetArgs) -> Result<Report, CliError> {
    let c = constraint(&a.rule);
    let options = RsetOptions { max_elements: a.max_elements, threads: a.common.threads as usize };
    let rset = build_rset(a.k as usize, c, options).map_err(|e| match e {
        TransformError::ScaleRefused(msg) => CliError::Usage(msg),
        TransformError::Solve(e) => CliError::Usage(e.to_string()),
    })?;
    let report = check_group(&rset);
    let small = rset.cardinality() <= MAX_TABLE;
    let mut json = rset.to_json_value();
    json["group"] = json!({
        "is_group": report.is_group,
        "structure": report.identified_structure,
        "associative": report.associative,
        "closure_failures": report.closure_failures.len(),
        "first_closure_failure": report.closure_failures.first(),
        "missing_inverses": report.missing_inverses,
        "table": if small { json!(report.table) } else { Value::Null },
    });

    let mut text =
        format!("{} transformations of the reference partition at n = {}\n", rset.cardinality(), rset.reference.n());
    text.push_str(&rset.reference.to_string());
    for (i, e) in rset.elements.iter().enumerate() {
        writeln!(text, "e{i}: {e}").unwrap();
    }
    let verdict = match (&report.identified_structure, report.is_group) {
        (Some(s), true) => format!("group: {}", structure_name(s)),
        _ => format!(
            "not a group: {} of {} composites invalid, {} elements without inverse, associative: {}",
            report.closure_failures.len(),
            rset.cardinality() * rset.cardinality(),
            report.missing_inverses.len(),
            report.associative
        ),
    };
    writeln!(text, "{verdict}").unwrap();
    if let Some(f) = report.closure_failures.first() {
        writeln!(text, "first failure: e{} then e{} gives {}", f.left, f.right, render_violation(&f.violation))
            .unwrap();
    }
    if small {
        text.push_str(&render_table(&report));
    }
    Ok(Report::ok(json, text))
}

fn structure_name(s: &schurlab::transform::Structure) -> String {
    use schurlab::transform::Structure::*;
    match s {
        Trivial => "trivial".into(),
        Cyclic { order } => format!("cyclic of order {order}"),
        Abelian { order } => format!("abelian, non-cyclic, of order {order}"),
        NonAbelian { order } => format!("non-abelian of order {order}"),
    }
}

fn seq(a: SeqArgs) -> Result<Report, CliError> {
    if a.terms == 0 {
        return Err(CliError::Usage("--terms must be positive".into()));
    }
    let state = generate(a.terms);
    let shown = if a.all { state.len() } else { state.len().min(100) };
    let head = &state.terms()[..shown];
    let mut json = json!({ "count": state.len(), "last": state.last(), "terms": head });
    let mut text = head.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    if shown < state.len() {
        write!(text, " ... ({} terms, last {})", state.len(), state.last()).unwrap();
    }
    text.push('\n');
    let mut passed = true;
    if a.check_fractal {
        let r = fractal_check(&state).map_err(|e| CliError::Usage(e.to_string()))?;
        passed &= r.passed;
        writeln!(
            text,
            "fractal over 1..={}: odd terms complete {}, evens divisible by 4 {}, quartered evens = first {} terms {}: {}",
            r.range,
            r.odd_complete,
            r.evens_divisible_by_4,
            r.prefix_len,
            r.quarter_is_prefix,
            if r.passed { "PASS" } else { "FAIL" }
        )
        .unwrap();
        json["fractal"] = json!(r);
    }
    if let Some(e) = a.check_genfun {
        let r = genfun_check(&state, e).map_err(|e| CliError::Usage(e.to_string()))?;
        passed &= r.mismatches.is_empty();
        writeln!(
            text,
            "generating function with exponents {:?}: {} mismatches over orders 0..{}",
            r.exponents,
            r.mismatches.len(),
            r.valid_orders
        )
        .unwrap();
        for m in r.mismatches.iter().take(10) {
            writeln!(text, "  order {}: term {} vs coefficient {}", m.order, m.term, m.coefficient).unwrap();
        }
        json["genfun"] = json!(r);
    }
    if let Some(sites) = a.occupancy {
        let s = occupancy(&state, sites).map_err(|e| CliError::Usage(e.to_string()))?;
        writeln!(text, "{s}").unwrap();
        json["occupancy"] = json!(s);
    }
    Ok(if passed { Report::ok(json, text) } else { Report::failed(json, text) })
}

fn cnf(a: CnfArgs) -> Result<Report, CliError> {
    let c = constraint(&a.rule);
    let doc = export_cnf(a.k as usize, a.n, c);
    let dimacs = doc.to_dimacs();
    let json = json!({
        "K": a.k,
        "n": a.n,
        "kind": c.kind(),
        "modulus": c.modulus(),
        "variables": doc.num_vars(),
        "clauses": doc.clauses.len(),
        "dimacs": dimacs,
    });
    Ok(Report::ok(json, dimacs))
}

fn decode(a: DecodeArgs) -> Result<Report, CliError> {
    let doc =
        CnfDocument::from_dimacs(&read(&a.cnf)?).map_err(|e| CliError::Usage(format!("{}: {e}", a.cnf.display())))?;
    let model = read(&a.model)?;
    match import_sat_assignment(&doc, &model) {
        Ok(coloring) => {
            let cert = Certificate::new(doc.constraint, coloring);
            let text = format!("{}: valid coloring of 1..={}\n{}", doc.constraint, doc.n, cert.coloring.canonical());
            Ok(Report::ok(cert.to_json_value(), text))
        }
        Err(e) => Err(CliError::Failed(format!("{}: {e}", a.model.display()))),
    }
}

fn manybody(a: ManybodyArgs) -> Result<Report, CliError> {
    let c = constraint(&a.rule);
    let k = a.levels as usize;
    let usage = |e: ManybodyError| CliError::Usage(e.to_string());
    let absent = a.absent || a.report == ManybodyReport::Algebra;
    let basis = Basis::build(k, a.values, c, absent).map_err(usage)?;
    let energies = a.energies.clone().unwrap_or_else(|| (1..=k).map(|e| e as f64).collect());
    match a.report {
        ManybodyReport::Basis => {
            let mut text = format!("{} states\n", basis.dim());
            for (i, s) in basis.states().iter().enumerate() {
                writeln!(text, "{i}: {}", basis.label(s)).unwrap();
            }
            Ok(Report::ok(basis_json(&basis), text))
        }
        ManybodyReport::Hamiltonian => {
            let h = hamiltonian(&basis, &energies, a.hop, a.interaction).map_err(usage)?;
            let total = h.total();
            let rows: Vec<Vec<f64>> =
                (0..total.nrows()).map(|r| (0..total.ncols()).map(|c| total[(r, c)]).collect()).collect();
            Ok(Report::ok(json!({ "dim": basis.dim(), "matrix": rows }), matrix_text("H = H0 + He + Hi", &total)))
        }
        ManybodyReport::Ground => {
            let h = hamiltonian(&basis, &energies, a.hop, a.interaction).map_err(usage)?;
            let g = ground_state(&h.total(), a.tolerance).map_err(|e| match e {
                ManybodyError::NumericalFailure { .. } => CliError::Failed(e.to_string()),
                e => CliError::Usage(e.to_string()),
            })?;
            let mut json = ground_state_json(&basis, &g);
            json["dim"] = json!(basis.dim());
            let mut text =
                format!("{} states, ground energy {} (degeneracy {})\n", basis.dim(), g.energy, g.degeneracy);
            for (i, v) in g.eigenvectors.iter().enumerate() {
                writeln!(text, "ground state {i}:").unwrap();
                for (r, amp) in v.iter().enumerate() {
                    if amp.abs() > 1e-12 {
                        writeln!(text, "  {amp:+.6} {}", basis.label(basis.state(r))).unwrap();
                    }
                }
            }
            Ok(Report::ok(json, text))
        }
        ManybodyReport::Algebra => {
            let r = algebra_report(&basis).map_err(usage)?;
            let mut text = format!("{} states, {} modes\n", r.dim, r.modes);
            let checks = [
                ("B = (B+)^T", r.adjoint),
                ("B |vacuum> = 0", r.vacuum_annihilated),
                ("N = B+ B", r.number_is_bdagger_b),
                ("N^2 = N", r.number_idempotent),
                ("(B+)^2 = 0", r.creation_squared_zero),
                ("[B_a, B_b] = 0", r.annihilators_commute),
                ("{B, B+} = 1 where unconstrained", r.anticommutator_unit_on_unconstrained),
            ];
            for (name, ok) in checks {
                writeln!(text, "  {name}: {}", if ok { "holds" } else { "FAILS" }).unwrap();
            }
            writeln!(
                text,
                "deviations from [B, B+] = 1 - 2N and [B_a, B+_b] = 0: {} sum-free blocked, {} single occupancy, {} unexplained",
                r.sum_free_blocked, r.single_occupancy, r.unexplained
            )
            .unwrap();
            for d in r.deviations.iter().take(20) {
                let witness = d.witness.map(|t| format!(" ({} + {} = {})", t.x, t.y, t.z)).unwrap_or_default();
                writeln!(
                    text,
                    "  {:?} ({},{}) vs ({},{}) on {}: {} instead of {}{}",
                    d.kind,
                    d.mode.value,
                    d.mode.level,
                    d.other.value,
                    d.other.level,
                    d.state,
                    d.measured,
                    d.expected,
                    witness
                )
                .unwrap();
            }
            if r.deviations.len() > 20 {
                writeln!(text, "  ... {} more", r.deviations.len() - 20).unwrap();
            }
            let holds = r.holds;
            let json = json!(r);
            Ok(if holds { Report::ok(json, text) } else { Report::failed(json, text) })
        }
    }
}
