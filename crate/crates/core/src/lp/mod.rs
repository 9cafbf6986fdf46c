//! Exact rational linear programming.
//!
//! [`LinearProgram`] is a maximisation over named variables with optional
//! bounds and `<=`/`=`/`>=` rows. [`solve_lp`] runs a two-phase dense-tableau
//! simplex with Bland's rule, so it terminates on degenerate programs and
//! every number stays exact.

mod format;
mod simplex;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use format::write_lp;
pub use simplex::solve_lp;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(String);

impl VarId {
    pub fn new(name: impl Into<String>) -> Self {
        VarId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VarId {
    fn from(s: &str) -> Self {
        VarId(s.to_string())
    }
}

/// Sparse linear combination of variables. Repeated variables accumulate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearExpr {
    terms: BTreeMap<VarId, Rational>,
}

impl LinearExpr {
    pub fn new() -> Self {
        LinearExpr::default()
    }

    pub fn term(mut self, var: impl Into<VarId>, coef: Rational) -> Self {
        self.add_term(var, coef);
        self
    }

    pub fn add_term(&mut self, var: impl Into<VarId>, coef: Rational) {
        let var = var.into();
        let slot = self.terms.entry(var.clone()).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&var);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VarId, &Rational)> {
        self.terms.iter()
    }

    pub fn coef(&self, var: &VarId) -> Rational {
        self.terms.get(var).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, assignment: &BTreeMap<VarId, Rational>) -> Rational {
        self.terms.iter().map(|(v, c)| c * assignment.get(v).cloned().unwrap_or_default()).sum()
    }

    pub fn negated(&self) -> LinearExpr {
        LinearExpr { terms: self.terms.iter().map(|(v, c)| (v.clone(), -c)).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub expr: LinearExpr,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub id: VarId,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

/// `maximize objective` subject to the constraints and variable bounds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearProgram {
    variables: Vec<Variable>,
    index: BTreeMap<VarId, usize>,
    constraints: Vec<Constraint>,
    objective: LinearExpr,
}

impl LinearProgram {
    pub fn new() -> Self {
        LinearProgram::default()
    }

    /// Declares a variable; re-declaring replaces its bounds.
    pub fn add_var(&mut self, id: impl Into<VarId>, lower: Option<Rational>, upper: Option<Rational>) -> VarId {
        let id = id.into();
        match self.index.get(&id) {
            Some(&i) => {
                self.variables[i].lower = lower;
                self.variables[i].upper = upper;
            }
            None => {
                self.index.insert(id.clone(), self.variables.len());
                self.variables.push(Variable { id: id.clone(), lower, upper });
            }
        }
        id
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, expr: LinearExpr, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { name: name.into(), expr, relation, rhs });
    }

    pub fn set_objective(&mut self, objective: LinearExpr) {
        self.objective = objective;
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: &VarId) -> Option<&Variable> {
        self.index.get(id).map(|&i| &self.variables[i])
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &LinearExpr {
        &self.objective
    }

    pub(crate) fn var_index(&self, id: &VarId) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Rejects undeclared variables and inverted bounds.
    pub fn check(&self) -> Result<()> {
        for v in &self.variables {
            if let (Some(l), Some(u)) = (&v.lower, &v.upper) {
                if l > u {
                    return Err(Error::MalformedProgram(format!("variable {} has bounds [{l}, {u}]", v.id)));
                }
            }
        }
        let undeclared = |e: &LinearExpr| e.terms().map(|(v, _)| v).find(|v| !self.index.contains_key(*v)).cloned();
        if let Some(v) = undeclared(&self.objective) {
            return Err(Error::MalformedProgram(format!("objective uses undeclared variable {v}")));
        }
        for c in &self.constraints {
            if let Some(v) = undeclared(&c.expr) {
                return Err(Error::MalformedProgram(format!("constraint {} uses undeclared variable {v}", c.name)));
            }
        }
        Ok(())
    }

    /// True when `assignment` meets every bound and constraint exactly.
    pub fn is_feasible(&self, assignment: &BTreeMap<VarId, Rational>) -> bool {
        let zero = Rational::zero();
        let bounds_ok = self.variables.iter().all(|v| {
            let x = assignment.get(&v.id).unwrap_or(&zero);
            v.lower.as_ref().is_none_or(|l| x >= l) && v.upper.as_ref().is_none_or(|u| x <= u)
        });
        bounds_ok && self.constraints.iter().all(|c| c.relation.holds(&c.expr.eval(assignment), &c.rhs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Rational, assignment: BTreeMap<VarId, Rational> },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal { .. } => LpStatus::Optimal,
            LpResult::Infeasible => LpStatus::Infeasible,
            LpResult::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn assignment(&self) -> Option<&BTreeMap<VarId, Rational>> {
        match self {
            LpResult::Optimal { assignment, .. } => Some(assignment),
            _ => None,
        }
    }
}
