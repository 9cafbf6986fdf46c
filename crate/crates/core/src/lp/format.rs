//! CPLEX-style LP text (`Maximize` / `Subject To` / `Bounds` / `End`).
//!
//! Coefficients are written as decimals. A coefficient without a finite
//! decimal expansion is rounded and its exact `p/q` value is recorded in a
//! `\` comment next to the row.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::{LinearExpr, LinearProgram, Relation, VarId};
use crate::rational::Rational;

const DIGITS: usize = 15;
const TERMS_PER_LINE: usize = 6;

/// Renders `p` (plus optional binary variables and leading comment lines).
pub fn write_lp(p: &LinearProgram, binaries: &[VarId], comments: &[String]) -> String {
    let mut names = Names::default();
    for v in p.variables() {
        names.var(&v.id);
    }
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "\\ {line}");
        }
    }
    out.push_str("Maximize\n");
    let mut notes = Vec::new();
    let obj = expr_text(p.objective(), &names, "obj", &mut notes);
    let _ = writeln!(out, " obj: {}", if obj.is_empty() { "0 dummy_zero".to_string() } else { obj });
    flush_notes(&mut out, &mut notes);

    out.push_str("Subject To\n");
    let mut row_names = Names::default();
    for (i, c) in p.constraints().iter().enumerate() {
        let label = if c.name.is_empty() { format!("c{i}") } else { c.name.clone() };
        let name = row_names.sanitize(&label);
        let lhs = expr_text(&c.expr, &names, &name, &mut notes);
        let lhs = if lhs.is_empty() { "0 dummy_zero".to_string() } else { lhs };
        let op = match c.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let rhs = number(&c.rhs, &name, "rhs", &mut notes);
        let _ = writeln!(out, " {name}: {lhs} {op} {rhs}");
        flush_notes(&mut out, &mut notes);
    }

    out.push_str("Bounds\n");
    let binary: BTreeSet<&VarId> = binaries.iter().collect();
    for v in p.variables().iter().filter(|v| !binary.contains(&v.id)) {
        let n = names.var(&v.id);
        let line = match (&v.lower, &v.upper) {
            (None, None) => format!(" {n} free"),
            (Some(l), None) if l.is_zero() => continue,
            (Some(l), None) => format!(" {n} >= {}", number(l, &n, "lower", &mut notes)),
            (None, Some(u)) => format!(" -inf <= {n} <= {}", number(u, &n, "upper", &mut notes)),
            (Some(l), Some(u)) if l == u => format!(" {n} = {}", number(l, &n, "fixed", &mut notes)),
            (Some(l), Some(u)) => {
                format!(" {} <= {n} <= {}", number(l, &n, "lower", &mut notes), number(u, &n, "upper", &mut notes))
            }
        };
        out.push_str(&line);
        out.push('\n');
        flush_notes(&mut out, &mut notes);
    }
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for b in binaries {
            let _ = writeln!(out, " {}", names.var(b));
        }
    }
    out.push_str("End\n");
    out
}

fn flush_notes(out: &mut String, notes: &mut Vec<String>) {
    for n in notes.drain(..) {
        let _ = writeln!(out, "\\ {n}");
    }
}

fn number(x: &Rational, row: &str, what: &str, notes: &mut Vec<String>) -> String {
    match x.to_exact_decimal() {
        Some(s) => s,
        None => {
            notes.push(format!("{row}: {what} is exactly {x}"));
            x.to_decimal_string(DIGITS).trim_start_matches('~').to_string()
        }
    }
}

fn expr_text(e: &LinearExpr, names: &Names, row: &str, notes: &mut Vec<String>) -> String {
    let mut out = String::new();
    for (i, (v, c)) in e.terms().enumerate() {
        let name = names.get(v);
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = number(&c.abs(), row, &format!("coefficient of {name}"), notes);
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        if i == 0 {
            if c.is_negative() {
                out.push_str("- ");
            }
        } else {
            out.push(' ');
            out.push_str(sign);
            out.push(' ');
        }
        let _ = write!(out, "{mag} {name}");
    }
    out
}

/// Maps arbitrary identifiers to unique names legal in the LP format.
#[derive(Default)]
struct Names {
    map: BTreeMap<VarId, String>,
    used: BTreeSet<String>,
}

impl Names {
    fn var(&mut self, id: &VarId) -> String {
        if let Some(n) = self.map.get(id) {
            return n.clone();
        }
        let n = self.sanitize(id.as_str());
        self.map.insert(id.clone(), n.clone());
        n
    }

    fn get(&self, id: &VarId) -> String {
        self.map.get(id).cloned().unwrap_or_else(|| id.as_str().to_string())
    }

    fn sanitize(&mut self, raw: &str) -> String {
        let mut s: String =
            raw.chars().map(|ch| if ch.is_ascii_alphanumeric() || ch == '_' || ch == '.' { ch } else { '_' }).collect();
        if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
            s.insert(0, '_');
        }
        let mut candidate = s.clone();
        let mut k = 1;
        while !self.used.insert(candidate.clone()) {
            candidate = format!("{s}_{k}");
            k += 1;
        }
        candidate
    }
}
