//! Maximum switching flow: the best MPF over all sub-networks.
//!
//! Ties between optimal switch sets are broken towards the lexicographically
//! smallest set, comparing sets as sorted sequences of canonical edge keys
//! (so the empty set is smallest and `{e1} < {e1, e2} < {e2}`).

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{write_lp, LinearExpr, LinearProgram, Relation, VarId};
use crate::maxflow::classical_max_flow;
use crate::mpf::{
    angle_var, flow_var, formulate_with_modes, gen_var, load_var, solution_from_assignment, solve_mpf_program, EdgeMode,
};
use crate::network::{Edge, EdgeKey, Network, NodeRole, SwitchSet};
use crate::rational::Rational;
use crate::solution::Solution;

pub const DEFAULT_EDGE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsfOutcome {
    pub value: Rational,
    pub switched: SwitchSet,
    /// Optimal solution on `subnetwork(n, switched)`.
    pub solution: Solution,
}

fn ensure_ldc(n: &Network) -> Result<()> {
    n.ensure_valid()?;
    n.ensure_ldc()
}

/// MPF of `n` without `removed`; `n` must already be valid and LDC.
fn mpf_without(n: &Network, removed: &SwitchSet) -> (Rational, Solution) {
    let sub = Network::new(n.nodes().to_vec(), n.edges_without(removed));
    let p = formulate_with_modes(&sub, |_| EdgeMode::PowerLaw);
    let (value, assignment) = solve_mpf_program(&p);
    let solution = solution_from_assignment(&sub, &assignment);
    (value, solution)
}

fn set_from_mask(edges: &[Edge], mask: u64) -> SwitchSet {
    edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.key().clone()).collect()
}

/// `(a better than b)` under the value-then-smallest-set rule.
fn better(a: &(Rational, SwitchSet), b: &(Rational, SwitchSet)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// MPF of every sub-network, in mask order (bit `i` = `i`-th canonical
/// edge removed).
pub fn switch_set_values(n: &Network, limit: usize) -> Result<Vec<(SwitchSet, Rational)>> {
    ensure_ldc(n)?;
    let count = n.edge_count();
    if count > limit || count >= 64 {
        return Err(Error::TooLarge { edges: count, limit });
    }
    Ok((0..1u64 << count)
        .into_par_iter()
        .map(|mask| {
            let s = set_from_mask(n.edges(), mask);
            let (v, _) = mpf_without(n, &s);
            (s, v)
        })
        .collect())
}

/// The MSF value together with every switch set attaining it, sorted.
pub fn optimal_switch_sets(n: &Network, limit: usize) -> Result<(Rational, Vec<SwitchSet>)> {
    let all = switch_set_values(n, limit)?;
    let best = all.iter().map(|(_, v)| v).max().cloned().unwrap_or_default();
    let mut sets: Vec<SwitchSet> = all.into_iter().filter(|(_, v)| *v == best).map(|(s, _)| s).collect();
    sets.sort();
    Ok((best, sets))
}

pub fn solve_msf_exhaustive(n: &Network) -> Result<MsfOutcome> {
    solve_msf_exhaustive_with_limit(n, DEFAULT_EDGE_LIMIT)
}

/// Evaluates all `2^|E|` switch sets.
pub fn solve_msf_exhaustive_with_limit(n: &Network, limit: usize) -> Result<MsfOutcome> {
    let all = switch_set_values(n, limit)?;
    let (switched, value) = all
        .into_par_iter()
        .map(|(s, v)| (v, s))
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })
        .map(|(v, s)| (s, v))
        .expect("at least the empty switch set");
    let (check, solution) = mpf_without(n, &switched);
    debug_assert_eq!(check, value);
    Ok(MsfOutcome { value, switched, solution })
}

/// Counters from a branch-and-bound run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BnbStats {
    pub nodes: usize,
    pub lp_solves: usize,
    pub pruned_by_max_flow: usize,
    pub pruned_by_relaxation: usize,
}

/// What the bounds say about a search node.
enum Probe {
    Pruned,
    /// Keeping every open edge attains the relaxation bound.
    Exact(Rational),
    Open,
}

struct Bnb<'a> {
    n: &'a Network,
    edges: &'a [Edge],
    stats: BnbStats,
}

impl Bnb<'_> {
    /// Bounds the node whose decided edges are those `< depth` (removed iff
    /// in `removed`). `keep_going(bound)` says whether a subtree with that
    /// upper bound is still of interest.
    fn probe(&mut self, depth: usize, removed: &SwitchSet, keep_going: impl Fn(&Rational) -> bool) -> Probe {
        self.stats.nodes += 1;
        let kept = Network::new(self.n.nodes().to_vec(), self.n.edges_without(removed));
        if !keep_going(&classical_max_flow(&kept)) {
            self.stats.pruned_by_max_flow += 1;
            return Probe::Pruned;
        }
        // relaxation: decided edges obey the power law, open edges only
        // their capacity
        let open: BTreeMap<&EdgeKey, &Edge> = self.edges[depth..].iter().map(|e| (e.key(), e)).collect();
        let p = formulate_with_modes(&kept, |k| if open.contains_key(k) { EdgeMode::Free } else { EdgeMode::PowerLaw });
        let (bound, assignment) = solve_mpf_program(&p);
        self.stats.lp_solves += 1;
        if !keep_going(&bound) {
            self.stats.pruned_by_relaxation += 1;
            return Probe::Pruned;
        }
        let zero = Rational::zero();
        let consistent = open.iter().all(|(k, e)| {
            let f = assignment.get(&flow_var(k)).unwrap_or(&zero);
            let ta = assignment.get(&angle_var(k.a())).unwrap_or(&zero);
            let tb = assignment.get(&angle_var(k.b())).unwrap_or(&zero);
            *f == &e.s_min * (tb - ta)
        });
        if consistent {
            Probe::Exact(bound)
        } else {
            debug_assert!(depth < self.edges.len());
            Probe::Open
        }
    }

    /// Finds the optimal value, or any value reaching `goal`. Keep-first
    /// order tends to find strong incumbents early.
    fn best_value(
        &mut self,
        depth: usize,
        removed: &mut SwitchSet,
        best: &mut Option<(Rational, SwitchSet)>,
        goal: Option<&Rational>,
    ) {
        if goal.is_some_and(|g| best.as_ref().is_some_and(|(v, _)| v >= g)) {
            return;
        }
        let probe = self.probe(depth, removed, |bound| {
            goal.is_none_or(|g| bound >= g) && best.as_ref().is_none_or(|(v, _)| bound > v)
        });
        match probe {
            Probe::Pruned => {}
            Probe::Exact(value) => *best = Some((value, removed.clone())),
            Probe::Open => {
                let key = self.edges[depth].key().clone();
                self.best_value(depth + 1, removed, best, goal);
                removed.insert(key.clone());
                self.best_value(depth + 1, removed, best, goal);
                removed.remove(&key);
            }
        }
    }

    /// Walks switch sets in increasing order (a node's own set, then the
    /// subtree removing the next edge, then the one keeping it) and returns
    /// the first one worth `target`, giving up once sets reach `limit`.
    fn first_reaching(
        &mut self,
        depth: usize,
        removed: &mut SwitchSet,
        fresh: bool,
        target: &Rational,
        limit: &SwitchSet,
    ) -> Option<SwitchSet> {
        if &*removed >= limit {
            return Some(limit.clone());
        }
        let probe = self.probe(depth, removed, |bound| bound >= target);
        match probe {
            Probe::Pruned => return None,
            Probe::Exact(value) => return (&value == target).then(|| removed.clone()),
            Probe::Open if fresh => {
                self.stats.lp_solves += 1;
                if &mpf_without(self.n, removed).0 == target {
                    return Some(removed.clone());
                }
            }
            Probe::Open => {}
        }
        let key = self.edges[depth].key().clone();
        removed.insert(key.clone());
        let found = self.first_reaching(depth + 1, removed, true, target, limit);
        removed.remove(&key);
        found.or_else(|| self.first_reaching(depth + 1, removed, false, target, limit))
    }
}

/// Branch and bound over keep/remove decisions in canonical edge order.
/// Prunes on the classical max flow of the still-possible edges and on an
/// LP relaxation in which undecided edges carry capacity-bounded flow that
/// ignores the power law. A second pass walks switch sets in increasing
/// order to pick the smallest optimal one, so the outcome equals
/// [`solve_msf_exhaustive`].
pub fn solve_msf_bnb(n: &Network) -> Result<MsfOutcome> {
    solve_msf_bnb_with_stats(n).map(|(o, _)| o)
}

pub fn solve_msf_bnb_with_stats(n: &Network) -> Result<(MsfOutcome, BnbStats)> {
    ensure_ldc(n)?;
    let mut search = Bnb { n, edges: n.edges(), stats: BnbStats::default() };
    let mut best = None;
    search.best_value(0, &mut SwitchSet::new(), &mut best, None);
    let (value, incumbent) = best.expect("the root is never pruned without an incumbent");
    let switched = search
        .first_reaching(0, &mut SwitchSet::new(), true, &value, &incumbent)
        .expect("the incumbent bounds the walk");
    let (check, solution) = mpf_without(n, &switched);
    debug_assert_eq!(check, value);
    Ok((MsfOutcome { value, switched, solution }, search.stats))
}

/// Whether MSF(n) >= x. Stops at the first switch set reaching `x`.
pub fn decide_msf(n: &Network, x: &Rational) -> Result<bool> {
    ensure_ldc(n)?;
    if !x.is_positive() {
        return Ok(true);
    }
    let mut search = Bnb { n, edges: n.edges(), stats: BnbStats::default() };
    let mut best = None;
    search.best_value(0, &mut SwitchSet::new(), &mut best, Some(x));
    Ok(best.is_some_and(|(v, _)| &v >= x))
}

/// Mixed-integer program for MSF with one binary per edge.
#[derive(Debug, Clone)]
pub struct MilpModel {
    pub program: LinearProgram,
    pub binaries: Vec<VarId>,
    /// Angle-spread bound `Σ cap/s`; the big-M of edge `e` is `s_e` times it.
    pub angle_spread: Rational,
}

pub fn switch_var(key: &EdgeKey) -> VarId {
    VarId::new(format!("z[{},{}]", key.a(), key.b()))
}

/// Big-M switching formulation: `|f_e| <= cap_e z_e` and
/// `|f_e - s_e (theta_b - theta_a)| <= M_e (1 - z_e)` with `M_e = s_e Θ`,
/// `Θ = Σ_e cap_e / s_e`. Every connected piece of a switched network has an
/// angle spread of at most the sum of `cap/s` over a spanning tree, and the
/// pieces can be shifted to overlap zero, so no optimal solution is cut off.
pub fn formulate_milp(n: &Network) -> Result<MilpModel> {
    ensure_ldc(n)?;
    let spread: Rational = n.edges().iter().map(|e| &e.cap / e.susceptance().unwrap()).sum();
    let mut p = LinearProgram::new();
    let pinned: Vec<_> = n.components().into_iter().map(|c| c[0].clone()).collect();
    for node in n.nodes() {
        if pinned.contains(&node.id) {
            p.add_var(angle_var(&node.id), Some(Rational::zero()), Some(Rational::zero()));
        } else {
            p.add_var(angle_var(&node.id), None, None);
        }
    }
    let mut objective = LinearExpr::new();
    let mut kirchhoff: BTreeMap<_, LinearExpr> = n.node_ids().map(|id| (id.clone(), LinearExpr::new())).collect();
    for node in n.nodes() {
        match node.role {
            NodeRole::Generator => {
                let g = p.add_var(gen_var(&node.id), Some(Rational::zero()), None);
                objective.add_term(g.clone(), Rational::one());
                kirchhoff.get_mut(&node.id).unwrap().add_term(g, -Rational::one());
            }
            NodeRole::Load => {
                let l = p.add_var(load_var(&node.id), Some(Rational::zero()), None);
                kirchhoff.get_mut(&node.id).unwrap().add_term(l, Rational::one());
            }
            NodeRole::Plain => {}
        }
    }
    let mut binaries = Vec::new();
    for e in n.edges() {
        let k = e.key();
        let s = e.susceptance().unwrap();
        let big_m = s * &spread;
        let f = p.add_var(flow_var(k), Some(-&e.cap), Some(e.cap.clone()));
        let z = p.add_var(switch_var(k), Some(Rational::zero()), Some(Rational::one()));
        binaries.push(z.clone());
        kirchhoff.get_mut(k.a()).unwrap().add_term(f.clone(), Rational::one());
        kirchhoff.get_mut(k.b()).unwrap().add_term(f.clone(), -Rational::one());

        let fz = |sign: i64| {
            LinearExpr::new().term(f.clone(), Rational::one()).term(z.clone(), &e.cap * Rational::from_integer(sign))
        };
        p.add_constraint(format!("on+[{k}]"), fz(-1), Relation::Le, Rational::zero());
        p.add_constraint(format!("on-[{k}]"), fz(1), Relation::Ge, Rational::zero());

        let law = |mz: Rational| {
            LinearExpr::new()
                .term(f.clone(), Rational::one())
                .term(angle_var(k.b()), -s)
                .term(angle_var(k.a()), s.clone())
                .term(z.clone(), mz)
        };
        p.add_constraint(format!("law+[{k}]"), law(big_m.clone()), Relation::Le, big_m.clone());
        p.add_constraint(format!("law-[{k}]"), law(-&big_m), Relation::Ge, -&big_m);
    }
    for (id, row) in kirchhoff {
        p.add_constraint(format!("kcl[{id}]"), row, Relation::Eq, Rational::zero());
    }
    p.set_objective(objective);
    Ok(MilpModel { program: p, binaries, angle_spread: spread })
}

/// The MILP in LP text form, with the big-M derivation in the header.
pub fn export_milp(n: &Network) -> Result<String> {
    let model = formulate_milp(n)?;
    let header = vec![
        "Maximum switching flow, big-M transmission switching model.".to_string(),
        "z[e] = 1 keeps edge e; |flow[e]| <= cap_e * z[e].".to_string(),
        "|flow[e] - s_e * (theta[b] - theta[a])| <= M_e * (1 - z[e]), M_e = s_e * Theta.".to_string(),
        format!("Theta = sum over edges of cap/s = {} (bounds every angle spread).", model.angle_spread),
        "One angle per connected component is pinned to 0.".to_string(),
    ];
    Ok(write_lp(&model.program, &model.binaries, &header))
}
