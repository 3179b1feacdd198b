//! DIMACS CNF encoding of "1..=n has a valid K-coloring", and decoding of
//! SAT models back into colorings.
//!
//! Variable `(v - 1) * K + b` (with `b` in `1..=K`) is true when value `v`
//! sits in block `b`. Each value gets an at-least-one clause and pairwise
//! at-most-one clauses; each in-block violating triple gets one negative
//! clause per block. The first comment line records the instance so a
//! DIMACS file can be decoded on its own.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::coloring::{verify_coloring, Coloring, VerifyReport};
use crate::constraint::{residue, Constraint, ConstraintKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfDocument {
    pub k: usize,
    pub n: u32,
    pub constraint: Constraint,
    pub clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("missing `c schurlab` instance line")]
    MissingInstance,
    #[error("bad instance line: {0}")]
    BadInstance(String),
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("header declares {declared} {what} but the document has {actual}")]
    CountMismatch { what: &'static str, declared: usize, actual: usize },
    #[error("malformed clause line {line}: {text}")]
    BadClause { line: usize, text: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("malformed assignment: {0}")]
    MalformedAssignment(String),
    #[error("value {value} is true in {count} blocks")]
    InconsistentAssignment { value: u32, count: usize },
    #[error("decoded coloring violates the constraint")]
    InvalidColoring(VerifyReport),
}

impl CnfDocument {
    pub fn num_vars(&self) -> usize {
        self.n as usize * self.k
    }

    /// Variable index (1-based) for value `v` in zero-based block `b`.
    pub fn var(&self, v: u32, b: usize) -> i32 {
        ((v as usize - 1) * self.k + b + 1) as i32
    }

    /// Inverse of [`CnfDocument::var`].
    pub fn value_block(&self, var: i32) -> (u32, usize) {
        let i = var as usize - 1;
        ((i / self.k) as u32 + 1, i % self.k)
    }

    /// True when `assignment` (indexed by variable, entry 0 unused) satisfies
    /// every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| clause.iter().any(|&lit| assignment[lit.unsigned_abs() as usize] == (lit > 0)))
    }

    /// Truth assignment encoding `coloring`, entry 0 unused.
    pub fn encode(&self, coloring: &Coloring) -> Vec<bool> {
        let mut out = vec![false; self.num_vars() + 1];
        for v in 1..=coloring.n() {
            out[self.var(v, coloring.block_of(v)) as usize] = true;
        }
        out
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let modulus = self.constraint.modulus().map_or("none".to_string(), |m| m.to_string());
        writeln!(
            out,
            "c schurlab kind={} modulus={} K={} n={}",
            self.constraint.kind().as_str(),
            modulus,
            self.k,
            self.n
        )
        .unwrap();
        writeln!(out, "c var = (value - 1) * K + block, block in 1..K").unwrap();
        writeln!(out, "p cnf {} {}", self.num_vars(), self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Self, CnfError> {
        let mut instance = None;
        let mut header = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("c schurlab ") {
                instance = Some(parse_instance(rest)?);
            } else if line.starts_with('c') || line.is_empty() {
                continue;
            } else if let Some(rest) = line.strip_prefix("p cnf") {
                let nums: Vec<usize> = rest
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| CnfError::BadClause { line: i + 1, text: line.into() })?;
                if nums.len() != 2 {
                    return Err(CnfError::BadClause { line: i + 1, text: line.into() });
                }
                header = Some((nums[0], nums[1]));
            } else {
                for tok in line.split_whitespace() {
                    let lit: i32 = tok.parse().map_err(|_| CnfError::BadClause { line: i + 1, text: line.into() })?;
                    if lit == 0 {
                        clauses.push(std::mem::take(&mut current));
                    } else {
                        current.push(lit);
                    }
                }
            }
        }
        let (k, n, constraint) = instance.ok_or(CnfError::MissingInstance)?;
        let (vars, count) = header.ok_or(CnfError::MissingHeader)?;
        let doc = CnfDocument { k, n, constraint, clauses };
        if vars != doc.num_vars() {
            return Err(CnfError::CountMismatch { what: "variables", declared: vars, actual: doc.num_vars() });
        }
        if count != doc.clauses.len() {
            return Err(CnfError::CountMismatch { what: "clauses", declared: count, actual: doc.clauses.len() });
        }
        Ok(doc)
    }
}

fn parse_instance(rest: &str) -> Result<(usize, u32, Constraint), CnfError> {
    let bad = || CnfError::BadInstance(rest.to_string());
    let mut kind = None;
    let mut modulus = None;
    let mut k = None;
    let mut n = None;
    for field in rest.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(bad)?;
        match key {
            "kind" => kind = Some(value.parse::<ConstraintKind>().map_err(|_| bad())?),
            "modulus" if value == "none" => {}
            "modulus" => modulus = Some(value.parse().map_err(|_| bad())?),
            "K" => k = Some(value.parse().map_err(|_| bad())?),
            "n" => n = Some(value.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    let constraint = Constraint::new(kind.ok_or_else(bad)?, modulus).map_err(|_| bad())?;
    Ok((k.ok_or_else(bad)?, n.ok_or_else(bad)?, constraint))
}

/// Every violating triple `(x, y, z)` with `x <= y` inside `1..=n`.
fn violating_triples(n: u32, constraint: Constraint) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for x in 1..=n {
        for y in x..=n {
            match constraint.modulus() {
                None => {
                    let z = x + y;
                    if z <= n && constraint.forbids(x, y, z) {
                        out.push((x, y, z));
                    }
                }
                Some(m) => {
                    let mut z = residue(x + y, m);
                    while z <= n {
                        if constraint.forbids(x, y, z) {
                            out.push((x, y, z));
                        }
                        z += m;
                    }
                }
            }
        }
    }
    out
}

pub fn export_cnf(k: usize, n: u32, constraint: Constraint) -> CnfDocument {
    let mut doc = CnfDocument { k, n, constraint, clauses: Vec::new() };
    let mut clauses = Vec::new();
    for v in 1..=n {
        clauses.push((0..k).map(|b| doc.var(v, b)).collect::<Vec<_>>());
        for a in 0..k {
            for b in a + 1..k {
                clauses.push(vec![-doc.var(v, a), -doc.var(v, b)]);
            }
        }
    }
    let mut seen = BTreeSet::new();
    for (x, y, z) in violating_triples(n, constraint) {
        let mut values = vec![x, y, z];
        values.sort_unstable();
        values.dedup();
        if !seen.insert(values.clone()) {
            continue;
        }
        for b in 0..k {
            clauses.push(values.iter().map(|&v| -doc.var(v, b)).collect());
        }
    }
    doc.clauses = clauses;
    doc
}

/// Decodes a SAT model given either as DIMACS `v` lines (an `s` status line
/// is tolerated) or as a bare list of signed literals.
pub fn import_sat_assignment(doc: &CnfDocument, text: &str) -> Result<Coloring, DecodeError> {
    let vars = doc.num_vars();
    let mut value: Vec<Option<bool>> = vec![None; vars + 1];
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(status) = line.strip_prefix('s') {
            if status.trim() == "UNSATISFIABLE" {
                return Err(DecodeError::MalformedAssignment("solver reported UNSATISFIABLE".into()));
            }
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| DecodeError::MalformedAssignment(format!("bad literal `{tok}`")))?;
            if lit == 0 {
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > vars {
                return Err(DecodeError::MalformedAssignment(format!(
                    "literal {lit} exceeds the {vars} variables of the document"
                )));
            }
            let truth = lit > 0;
            match value[var] {
                Some(prev) if prev != truth => {
                    return Err(DecodeError::MalformedAssignment(format!("variable {var} assigned both ways")))
                }
                _ => value[var] = Some(truth),
            }
        }
    }
    if let Some(var) = (1..=vars).find(|&v| value[v].is_none()) {
        return Err(DecodeError::MalformedAssignment(format!("variable {var} is unassigned")));
    }
    let mut assignment = Vec::with_capacity(doc.n as usize);
    for v in 1..=doc.n {
        let blocks: Vec<usize> = (0..doc.k).filter(|&b| value[doc.var(v, b) as usize] == Some(true)).collect();
        if blocks.len() != 1 {
            return Err(DecodeError::InconsistentAssignment { value: v, count: blocks.len() });
        }
        assignment.push(blocks[0] as u8);
    }
    let coloring = Coloring::new(doc.k, assignment).expect("blocks in range");
    let report = verify_coloring(&coloring, doc.constraint);
    if !report.valid {
        return Err(DecodeError::InvalidColoring(report));
    }
    Ok(coloring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model_text(doc: &CnfDocument, coloring: &Coloring) -> String {
        let truth = doc.encode(coloring);
        let lits: Vec<String> =
            (1..truth.len()).map(|v| if truth[v] { v.to_string() } else { format!("-{v}") }).collect();
        format!("s SATISFIABLE\nv {} 0\n", lits.join(" "))
    }

    #[test]
    fn two_block_four_values() {
        let doc = export_cnf(2, 4, Constraint::Classic);
        assert_eq!(doc.num_vars(), 8);
        let c = Coloring::from_blocks(2, &[&[1, 4][..], &[2, 3]]).unwrap();
        assert!(doc.is_satisfied_by(&doc.encode(&c)));
        assert_eq!(import_sat_assignment(&doc, &model_text(&doc, &c)).unwrap(), c);
    }

    #[test]
    fn dimacs_round_trip() {
        for c in [Constraint::Classic, Constraint::Weak, Constraint::Modular(3), Constraint::WeakModular(2)] {
            let doc = export_cnf(3, 9, c);
            let text = doc.to_dimacs();
            assert!(text.contains(&format!("p cnf {} {}", doc.num_vars(), doc.clauses.len())));
            assert_eq!(CnfDocument::from_dimacs(&text).unwrap(), doc);
        }
    }

    #[test]
    fn decode_errors() {
        let doc = export_cnf(2, 4, Constraint::Classic);
        let double = "1 2 -3 4 -5 6 7 -8";
        assert_eq!(
            import_sat_assignment(&doc, double),
            Err(DecodeError::InconsistentAssignment { value: 1, count: 2 })
        );
        // Value 3 in both blocks.
        let three_twice = "1 -2 -3 4 5 6 7 -8";
        assert_eq!(
            import_sat_assignment(&doc, three_twice),
            Err(DecodeError::InconsistentAssignment { value: 3, count: 2 })
        );
        assert!(matches!(import_sat_assignment(&doc, "v 1 -2 -3"), Err(DecodeError::MalformedAssignment(_))));
        assert!(matches!(import_sat_assignment(&doc, "1 -2 x"), Err(DecodeError::MalformedAssignment(_))));
        assert!(matches!(
            import_sat_assignment(&doc, "1 -2 -3 4 5 -6 -7 8 9"),
            Err(DecodeError::MalformedAssignment(_))
        ));
        // 1 and 2 in block 1: violates 1 + 1 = 2.
        assert!(matches!(import_sat_assignment(&doc, "1 -2 3 -4 -5 6 -7 8"), Err(DecodeError::InvalidColoring(_))));
    }

    #[test]
    fn modular_self_violation_is_a_unit_clause() {
        let doc = export_cnf(2, 3, Constraint::Modular(3));
        assert!(doc.clauses.contains(&vec![-doc.var(3, 0)]));
        assert!(doc.clauses.contains(&vec![-doc.var(3, 1)]));
    }
}
