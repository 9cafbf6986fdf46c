//! Random instances and brute-force oracles shared by the integration tests.
//! Nothing here calls into the solvers under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ldc_core::lp::{LinearExpr, LinearProgram, Relation, VarId};
use ldc_core::{rat, Edge, Network, Node, NodeRole, Rational};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub const SUSCEPTANCES: [(i64, i64); 4] = [(1, 2), (1, 1), (2, 1), (3, 1)];

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn node_name(i: usize) -> String {
    format!("n{i}")
}

/// Raw description of a network: node roles and `(i, j, s_min, s_max, cap)`
/// edges. Self-loops and repeated pairs are dropped on [`build`].
#[derive(Debug, Clone)]
pub struct Shape {
    pub roles: Vec<NodeRole>,
    pub edges: Vec<(usize, usize, Rational, Rational, Rational)>,
}

pub fn build(shape: &Shape) -> Network {
    let nodes = shape.roles.iter().enumerate().map(|(i, &role)| Node::new(node_name(i), role)).collect();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (i, j, lo, hi, cap) in &shape.edges {
        if i == j || !seen.insert((*i.min(j), *i.max(j))) {
            continue;
        }
        edges.push(Edge::new(node_name(*i), node_name(*j), lo.clone(), hi.clone(), cap.clone()));
    }
    Network::try_new(nodes, edges).expect("generated networks are valid")
}

fn role_of(k: u8) -> NodeRole {
    match k % 3 {
        0 => NodeRole::Generator,
        1 => NodeRole::Load,
        _ => NodeRole::Plain,
    }
}

/// Node 0 is always a generator and node 1 a load.
fn roles_from(codes: &[u8]) -> Vec<NodeRole> {
    codes
        .iter()
        .enumerate()
        .map(|(i, &k)| match i {
            0 => NodeRole::Generator,
            1 => NodeRole::Load,
            _ => role_of(k),
        })
        .collect()
}

pub fn susceptance(k: usize) -> Rational {
    let (p, q) = SUSCEPTANCES[k % SUSCEPTANCES.len()];
    rat(p, q)
}

/// LDC networks with up to `max_nodes` nodes and `max_edges` edges.
pub fn arb_ldc(max_nodes: usize, max_edges: usize) -> impl Strategy<Value = Network> {
    (2..=max_nodes)
        .prop_flat_map(move |n| {
            (
                proptest::collection::vec(any::<u8>(), n),
                proptest::collection::vec((0..n, 0..n, 0..SUSCEPTANCES.len(), 1..=8i64), 1..=max_edges),
            )
        })
        .prop_map(|(codes, raw)| {
            let edges =
                raw.into_iter().map(|(i, j, s, cap)| (i, j, susceptance(s), susceptance(s), rat(cap, 2))).collect();
            build(&Shape { roles: roles_from(&codes), edges })
        })
}

/// Networks where some edges have a susceptance interval.
pub fn arb_facts(max_nodes: usize, max_edges: usize) -> impl Strategy<Value = Network> {
    (2..=max_nodes)
        .prop_flat_map(move |n| {
            (
                proptest::collection::vec(any::<u8>(), n),
                proptest::collection::vec((0..n, 0..n, 0..SUSCEPTANCES.len(), 0..3i64, 1..=8i64), 1..=max_edges),
            )
        })
        .prop_map(|(codes, raw)| {
            let edges = raw
                .into_iter()
                .map(|(i, j, s, widen, cap)| {
                    let lo = susceptance(s);
                    let hi = &lo + &rat(widen, 2);
                    (i, j, lo, hi, rat(cap, 2))
                })
                .collect();
            build(&Shape { roles: roles_from(&codes), edges })
        })
}

/// Trees on `2..=max_nodes` nodes: node `i` hangs off a random earlier node.
pub fn arb_tree(max_nodes: usize) -> impl Strategy<Value = Network> {
    (2..=max_nodes)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<u8>(), n),
                proptest::collection::vec((any::<prop::sample::Index>(), 0..SUSCEPTANCES.len(), 1..=8i64), n - 1),
            )
        })
        .prop_map(|(codes, raw)| tree_from(&codes, raw.iter().map(|(p, s, c)| (*p, *s, *c))))
}

fn tree_from(codes: &[u8], raw: impl Iterator<Item = (prop::sample::Index, usize, i64)>) -> Network {
    let edges = raw
        .enumerate()
        .map(|(k, (parent, s, cap))| {
            let child = k + 1;
            (parent.index(child), child, susceptance(s), susceptance(s), rat(cap, 2))
        })
        .collect();
    build(&Shape { roles: roles_from(codes), edges })
}

/// Up to `max_edges` distinct node pairs, so small node counts still give
/// dense networks.
pub fn random_ldc(rng: &mut impl Rng, max_nodes: usize, max_edges: usize) -> Network {
    let n = rng.gen_range(2..=max_nodes);
    let codes: Vec<u8> = (0..n).map(|_| rng.gen()).collect();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(1..=max_edges.min(pairs.len()));
    let edges = pairs[..m]
        .iter()
        .map(|&(i, j)| {
            let s = susceptance(rng.gen_range(0..SUSCEPTANCES.len()));
            (i, j, s.clone(), s, rat(rng.gen_range(1..=8), 2))
        })
        .collect();
    build(&Shape { roles: roles_from(&codes), edges })
}

pub fn random_tree(rng: &mut impl Rng, max_nodes: usize) -> Network {
    let n = rng.gen_range(2..=max_nodes);
    let codes: Vec<u8> = (0..n).map(|_| rng.gen()).collect();
    let edges = (1..n)
        .map(|child| {
            let s = susceptance(rng.gen_range(0..SUSCEPTANCES.len()));
            (rng.gen_range(0..child), child, s.clone(), s, rat(rng.gen_range(1..=8), 2))
        })
        .collect();
    build(&Shape { roles: roles_from(&codes), edges })
}

/// Renames every node through `f`, keeping roles and edge data.
pub fn renamed(n: &Network, f: impl Fn(&str) -> String) -> Network {
    let nodes = n.nodes().iter().map(|x| Node::new(f(x.id.as_str()), x.role)).collect();
    let edges = n
        .edges()
        .iter()
        .map(|e| Edge::new(f(e.b().as_str()), f(e.a().as_str()), e.s_min.clone(), e.s_max.clone(), e.cap.clone()))
        .collect();
    Network::try_new(nodes, edges).unwrap()
}

pub fn subset_sum_solvable(elements: &[u64], w: u64) -> bool {
    (0u32..1 << elements.len())
        .any(|mask| elements.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x).sum::<u64>() == w)
}

pub fn exact_cover_exists(universe: &[String], sets: &[[String; 3]]) -> bool {
    (0u32..1 << sets.len()).any(|mask| {
        let mut count: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, set) in sets.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for x in set {
                    *count.entry(x.as_str()).or_default() += 1;
                }
            }
        }
        universe.iter().all(|x| count.get(x.as_str()) == Some(&1)) && count.len() == universe.len()
    })
}

/// Tries every ordering of the nodes.
pub fn hamiltonian_path_exists(nodes: &[String], edges: &[(String, String)], a: &str, b: &str) -> bool {
    let adjacent: BTreeSet<(&str, &str)> =
        edges.iter().flat_map(|(x, y)| [(x.as_str(), y.as_str()), (y.as_str(), x.as_str())]).collect();
    let mut order: Vec<&str> = nodes.iter().map(String::as_str).collect();
    permutations(&mut order, 0, &mut |p| {
        p.first() == Some(&a) && p.last() == Some(&b) && p.windows(2).all(|w| adjacent.contains(&(w[0], w[1])))
    })
}

fn permutations<'a>(items: &mut Vec<&'a str>, k: usize, found: &mut impl FnMut(&[&'a str]) -> bool) -> bool {
    if k == items.len() {
        return found(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permutations(items, k + 1, found) {
            items.swap(k, i);
            return true;
        }
        items.swap(k, i);
    }
    false
}

/// Small random LPs in which every variable is boxed, so the optimum (if any)
/// sits at a vertex.
pub fn arb_boxed_lp() -> impl Strategy<Value = LinearProgram> {
    (1..=3usize)
        .prop_flat_map(|nv| {
            (
                proptest::collection::vec((-3..=0i64, 0..=4i64), nv),
                proptest::collection::vec(-3..=3i64, nv),
                proptest::collection::vec((proptest::collection::vec(-3..=3i64, nv), 0..3u8, -4..=6i64), 0..=4),
            )
        })
        .prop_map(|(bounds, objective, rows)| {
            let mut p = LinearProgram::new();
            let vars: Vec<VarId> = bounds
                .iter()
                .enumerate()
                .map(|(i, (lo, hi))| p.add_var(VarId::new(format!("x{i}")), Some(r(*lo)), Some(r(*hi))))
                .collect();
            let expr = |coefs: &[i64]| {
                let mut e = LinearExpr::new();
                for (v, c) in vars.iter().zip(coefs) {
                    if *c != 0 {
                        e.add_term(v.clone(), r(*c));
                    }
                }
                e
            };
            p.set_objective(expr(&objective));
            for (k, (coefs, rel, rhs)) in rows.iter().enumerate() {
                let relation = [Relation::Le, Relation::Ge, Relation::Eq][*rel as usize];
                p.add_constraint(format!("c{k}"), expr(coefs), relation, r(*rhs));
            }
            p
        })
}

/// Optimum of a boxed LP by trying every basis: each choice of as many
/// tight rows (constraints or bounds) as there are variables is solved
/// exactly, and the best feasible point wins. `None` if infeasible.
pub fn lp_vertex_optimum(p: &LinearProgram) -> Option<Rational> {
    let vars: Vec<&VarId> = p.variables().iter().map(|v| &v.id).collect();
    let nv = vars.len();
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for c in p.constraints() {
        rows.push((vars.iter().map(|v| c.expr.coef(v)).collect(), c.rhs.clone()));
    }
    for (i, v) in p.variables().iter().enumerate() {
        let unit: Vec<Rational> = (0..nv).map(|j| if i == j { r(1) } else { r(0) }).collect();
        for bound in [&v.lower, &v.upper] {
            rows.push((unit.clone(), bound.clone().expect("boxed")));
        }
    }
    let mut best: Option<Rational> = None;
    for_each_subset(rows.len(), nv, &mut |pick| {
        let a: Vec<Vec<Rational>> = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Rational> = pick.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            let point: BTreeMap<VarId, Rational> = vars.iter().map(|v| (*v).clone()).zip(x).collect();
            if p.is_feasible(&point) {
                let value = p.objective().eval(&point);
                if best.as_ref().is_none_or(|b| value > *b) {
                    best = Some(value);
                }
            }
        }
    });
    best
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// Gaussian elimination; `None` if the matrix is singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..n {
            if row != col && !a[row][col].is_zero() {
                let factor = &a[row][col] / &a[col][col];
                for k in col..n {
                    let delta = &factor * &a[col][k];
                    a[row][k] = &a[row][k] - &delta;
                }
                let delta = &factor * &b[col];
                b[row] = &b[row] - &delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}
