//! Maximum potential flow of a fixed-susceptance network.
//!
//! The LP has one free angle per node (one node per connected component is
//! pinned to zero), a nonnegative generation per generator and load per
//! load, Kirchhoff's law per node with flows written as
//! `s * (angle(b) - angle(a))`, and `-cap <= flow <= cap` per edge.

use std::collections::BTreeMap;

use crate::classify::is_tree;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearExpr, LinearProgram, LpResult, Relation, VarId};
use crate::maxflow::max_flow_with_edges;
use crate::network::{components_of, EdgeKey, Network, NodeId, NodeRole};
use crate::rational::Rational;
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpfOutcome {
    pub value: Rational,
    pub solution: Solution,
}

pub fn angle_var(id: &NodeId) -> VarId {
    VarId::new(format!("theta[{id}]"))
}

pub fn gen_var(id: &NodeId) -> VarId {
    VarId::new(format!("gen[{id}]"))
}

pub fn load_var(id: &NodeId) -> VarId {
    VarId::new(format!("load[{id}]"))
}

pub fn flow_var(key: &EdgeKey) -> VarId {
    VarId::new(format!("flow[{},{}]", key.a(), key.b()))
}

/// How an edge enters the program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EdgeMode {
    /// Flow tied to the angles by the power law.
    PowerLaw,
    /// Flow is its own variable, only bounded by the capacity.
    Free,
}

/// Linear expression for the canonical-orientation flow on a power-law edge.
pub fn power_flow_expr(key: &EdgeKey, s: &Rational) -> LinearExpr {
    LinearExpr::new().term(angle_var(key.b()), s.clone()).term(angle_var(key.a()), -s)
}

/// The MPF linear program of an LDC network.
pub fn formulate_mpf(n: &Network) -> Result<LinearProgram> {
    n.ensure_valid()?;
    n.ensure_ldc()?;
    Ok(formulate_with_modes(n, |_| EdgeMode::PowerLaw))
}

/// Builds the program with a per-edge choice of [`EdgeMode`]. Assumes `n`
/// is valid and fixed-susceptance.
pub(crate) fn formulate_with_modes(n: &Network, mode: impl Fn(&EdgeKey) -> EdgeMode) -> LinearProgram {
    let mut p = LinearProgram::new();
    let coupled: Vec<&EdgeKey> = n.edges().iter().map(|e| e.key()).filter(|k| mode(k) == EdgeMode::PowerLaw).collect();
    let pinned: Vec<NodeId> =
        components_of(n.node_ids(), coupled.iter().copied()).into_iter().map(|c| c[0].clone()).collect();

    for node in n.nodes() {
        if pinned.binary_search(&node.id).is_ok() {
            p.add_var(angle_var(&node.id), Some(Rational::zero()), Some(Rational::zero()));
        } else {
            p.add_var(angle_var(&node.id), None, None);
        }
    }
    let mut objective = LinearExpr::new();
    for node in n.nodes() {
        match node.role {
            NodeRole::Generator => {
                let v = p.add_var(gen_var(&node.id), Some(Rational::zero()), None);
                objective.add_term(v, Rational::one());
            }
            NodeRole::Load => {
                p.add_var(load_var(&node.id), Some(Rational::zero()), None);
            }
            NodeRole::Plain => {}
        }
    }

    let mut kirchhoff: BTreeMap<&NodeId, LinearExpr> = n.node_ids().map(|id| (id, LinearExpr::new())).collect();
    for e in n.edges() {
        let flow = match mode(e.key()) {
            EdgeMode::PowerLaw => {
                let s = e.susceptance().expect("fixed susceptance");
                let f = power_flow_expr(e.key(), s);
                p.add_constraint(format!("cap+[{}]", e.key()), f.clone(), Relation::Le, e.cap.clone());
                p.add_constraint(format!("cap-[{}]", e.key()), f.clone(), Relation::Ge, -&e.cap);
                f
            }
            EdgeMode::Free => {
                let v = p.add_var(flow_var(e.key()), Some(-&e.cap), Some(e.cap.clone()));
                LinearExpr::new().term(v, Rational::one())
            }
        };
        for (var, c) in flow.terms() {
            kirchhoff.get_mut(e.a()).unwrap().add_term(var.clone(), c.clone());
            kirchhoff.get_mut(e.b()).unwrap().add_term(var.clone(), -c);
        }
    }
    for node in n.nodes() {
        let mut row = kirchhoff.remove(&node.id).unwrap_or_default();
        match node.role {
            NodeRole::Generator => row.add_term(gen_var(&node.id), -Rational::one()),
            NodeRole::Load => row.add_term(load_var(&node.id), Rational::one()),
            NodeRole::Plain => {}
        }
        p.add_constraint(format!("kcl[{}]", node.id), row, Relation::Eq, Rational::zero());
    }
    p.set_objective(objective);
    p
}

/// Solves an MPF-shaped program; the zero solution is always feasible and
/// capacities bound every flow, so anything but an optimum is a bug.
pub(crate) fn solve_mpf_program(p: &LinearProgram) -> (Rational, BTreeMap<VarId, Rational>) {
    match solve_lp(p).expect("well-formed program") {
        LpResult::Optimal { value, assignment } => (value, assignment),
        other => panic!("flow program must have an optimum, got {:?}", other.status()),
    }
}

pub(crate) fn solution_from_assignment(n: &Network, assignment: &BTreeMap<VarId, Rational>) -> Solution {
    let zero = Rational::zero();
    let mut sol = Solution::default();
    for node in n.nodes() {
        sol.angle.insert(node.id.clone(), assignment.get(&angle_var(&node.id)).cloned().unwrap_or_default());
        let g = match node.role {
            NodeRole::Generator => assignment.get(&gen_var(&node.id)).unwrap_or(&zero).clone(),
            _ => Rational::zero(),
        };
        let l = match node.role {
            NodeRole::Load => assignment.get(&load_var(&node.id)).unwrap_or(&zero).clone(),
            _ => Rational::zero(),
        };
        sol.gen.insert(node.id.clone(), g);
        sol.load.insert(node.id.clone(), l);
    }
    for e in n.edges() {
        let s = e.susceptance().expect("fixed susceptance").clone();
        let f = &s * (&sol.angle[e.b()] - &sol.angle[e.a()]);
        sol.flow.insert(e.key().clone(), f);
        sol.susceptance.insert(e.key().clone(), s);
    }
    sol
}

/// Exact MPF value and an optimal solution.
pub fn solve_mpf(n: &Network) -> Result<MpfOutcome> {
    let p = formulate_mpf(n)?;
    let (value, assignment) = solve_mpf_program(&p);
    Ok(MpfOutcome { value, solution: solution_from_assignment(n, &assignment) })
}

/// MPF of a tree without the LP: the classical max flow is realisable
/// because angles can be laid out edge by edge from any root.
pub fn solve_tree(n: &Network) -> Result<MpfOutcome> {
    n.ensure_valid()?;
    n.ensure_ldc()?;
    if !is_tree(n) {
        return Err(Error::NotATree);
    }
    let mf = max_flow_with_edges(n);
    let adjacency = n.adjacency();
    let mut angle: BTreeMap<NodeId, Rational> = BTreeMap::new();
    if let Some(root) = n.node_ids().next() {
        angle.insert(root.clone(), Rational::zero());
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let theta_u = angle[u].clone();
            for e in &adjacency[u] {
                let v = e.key().other(u).expect("incident");
                if angle.contains_key(v) {
                    continue;
                }
                // flow(a->b) = s * (theta_b - theta_a)
                let s = e.susceptance().expect("fixed susceptance");
                let f = &mf.flow[e.key()];
                let dir = e.key().orientation(u, v).expect("incident");
                let theta_v = if dir == 1 { &theta_u + f / s } else { &theta_u - f / s };
                angle.insert(v.clone(), theta_v);
                stack.push(v);
            }
        }
    }
    let susceptance = n.edges().iter().map(|e| (e.key().clone(), e.s_min.clone())).collect();
    let solution = Solution::from_angles(n, &susceptance, &angle);
    Ok(MpfOutcome { value: mf.value, solution })
}

/// A quantity of a solution whose range over the optimal face can be asked
/// for with [`optimal_range`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantity {
    /// Signed flow travelling from the first node to the second.
    Flow(NodeId, NodeId),
    Gen(NodeId),
    Load(NodeId),
}

impl Quantity {
    pub(crate) fn expr(&self, n: &Network) -> Result<LinearExpr> {
        match self {
            Quantity::Flow(from, to) => {
                let key = EdgeKey::new(from.clone(), to.clone());
                let e = n.edge(&key).ok_or_else(|| Error::UnknownEdge(key.clone()))?;
                let f = power_flow_expr(&key, e.susceptance().expect("fixed susceptance"));
                Ok(if key.orientation(from, to) == Some(1) { f } else { f.negated() })
            }
            Quantity::Gen(id) => match n.role(id) {
                Some(NodeRole::Generator) => Ok(LinearExpr::new().term(gen_var(id), Rational::one())),
                Some(_) => Ok(LinearExpr::new()),
                None => Err(Error::InvalidInstance(format!("unknown node {id}"))),
            },
            Quantity::Load(id) => match n.role(id) {
                Some(NodeRole::Load) => Ok(LinearExpr::new().term(load_var(id), Rational::one())),
                Some(_) => Ok(LinearExpr::new()),
                None => Err(Error::InvalidInstance(format!("unknown node {id}"))),
            },
        }
    }
}

/// `(min, max)` of `q` over all MPF-optimal solutions of `n`.
pub fn optimal_range(n: &Network, q: &Quantity) -> Result<(Rational, Rational)> {
    let mut p = formulate_mpf(n)?;
    let (value, _) = solve_mpf_program(&p);
    let expr = q.expr(n)?;
    let total = p.objective().clone();
    p.add_constraint("optimal", total, Relation::Ge, value);
    p.set_objective(expr.clone());
    let (hi, _) = solve_mpf_program(&p);
    p.set_objective(expr.negated());
    let (neg_lo, _) = solve_mpf_program(&p);
    Ok((-neg_lo, hi))
}
