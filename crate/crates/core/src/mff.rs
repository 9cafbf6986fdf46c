//! Maximum FACTS flow: the best MPF over susceptance choices on adjustable
//! edges.
//!
//! The search is an enumeration over finitely many susceptance vectors, so
//! with FACTS edges present its value is a lower bound on the true optimum.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mpf::{formulate_with_modes, solution_from_assignment, solve_mpf_program, EdgeMode};
use crate::network::{EdgeKey, Network};
use crate::rational::Rational;
use crate::solution::Solution;

pub const DEFAULT_FACTS_LIMIT: usize = 12;

/// Chosen susceptance of each FACTS edge. Ordered as the vector of values in
/// canonical edge order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SusAssignment(pub BTreeMap<EdgeKey, Rational>);

impl SusAssignment {
    pub fn get(&self, key: &EdgeKey) -> Option<&Rational> {
        self.0.get(key)
    }

    pub fn as_map(&self) -> &BTreeMap<EdgeKey, Rational> {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MffOutcome {
    pub value: Rational,
    pub assignment: SusAssignment,
    /// Optimal MPF solution with the susceptances of `assignment`.
    pub solution: Solution,
    /// True only without FACTS edges, where the search is exact.
    pub certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MffDecision {
    Yes,
    Unknown,
}

/// MPF of `n` with the FACTS edges pinned to `assignment`.
pub fn evaluate(n: &Network, assignment: &SusAssignment) -> (Rational, Solution) {
    let pinned = n.with_susceptances(assignment.as_map());
    let p = formulate_with_modes(&pinned, |_| EdgeMode::PowerLaw);
    let (value, vars) = solve_mpf_program(&p);
    (value, solution_from_assignment(&pinned, &vars))
}

/// The candidate values of each FACTS edge, in canonical edge order.
fn candidates(n: &Network, limit: usize, k: usize) -> Result<Vec<(EdgeKey, Vec<Rational>)>> {
    n.ensure_valid()?;
    let count = n.facts_edges().count();
    if count > limit {
        return Err(Error::TooManyFactsEdges { count, limit });
    }
    let steps = Rational::from_integer(k.max(1) as i64);
    Ok(n.facts_edges()
        .map(|e| {
            let width = &e.s_max - &e.s_min;
            let points =
                (0..=k.max(1)).map(|j| &e.s_min + &width * Rational::from_integer(j as i64) / &steps).collect();
            (e.key().clone(), points)
        })
        .collect())
}

fn search(n: &Network, grid: Vec<(EdgeKey, Vec<Rational>)>) -> MffOutcome {
    let total: usize = grid.iter().map(|(_, pts)| pts.len()).product();
    let assignment_of = |mut index: usize| {
        let mut map = BTreeMap::new();
        for (key, pts) in &grid {
            map.insert(key.clone(), pts[index % pts.len()].clone());
            index /= pts.len();
        }
        SusAssignment(map)
    };
    let (value, assignment) = (0..total)
        .into_par_iter()
        .map(|i| {
            let a = assignment_of(i);
            (evaluate(n, &a).0, a)
        })
        .reduce_with(|x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x })
        .expect("at least one assignment");
    let (check, solution) = evaluate(n, &assignment);
    debug_assert_eq!(check, value);
    MffOutcome { value, assignment, solution, certified: grid.is_empty() }
}

/// Every combination of interval endpoints.
pub fn solve_mff_endpoints(n: &Network) -> Result<MffOutcome> {
    solve_mff_endpoints_with_limit(n, DEFAULT_FACTS_LIMIT)
}

pub fn solve_mff_endpoints_with_limit(n: &Network, limit: usize) -> Result<MffOutcome> {
    Ok(search(n, candidates(n, limit, 1)?))
}

/// `k + 1` evenly spaced points per interval, endpoints included.
pub fn solve_mff_grid(n: &Network, k: usize) -> Result<MffOutcome> {
    solve_mff_grid_with_limit(n, k, DEFAULT_FACTS_LIMIT)
}

pub fn solve_mff_grid_with_limit(n: &Network, k: usize, limit: usize) -> Result<MffOutcome> {
    if k == 0 {
        return Err(Error::InvalidInstance("grid resolution must be positive".into()));
    }
    Ok(search(n, candidates(n, limit, k)?))
}

/// `Yes` if the endpoint search reaches `x`; otherwise the question stays
/// open unless the network has no FACTS edges.
pub fn decide_mff(n: &Network, x: &Rational) -> Result<MffDecision> {
    let out = solve_mff_endpoints(n)?;
    Ok(if &out.value >= x { MffDecision::Yes } else { MffDecision::Unknown })
}
