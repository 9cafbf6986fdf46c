//! Graph-theoretic max flow that ignores the power law: an upper bound on the
//! potential flow of every sub-network.

use std::collections::{BTreeMap, VecDeque};

use crate::network::{EdgeKey, Network, NodeRole};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: Rational,
    /// Net flow per edge, signed along the canonical orientation.
    pub flow: BTreeMap<EdgeKey, Rational>,
}

struct Arc {
    to: usize,
    residual: Rational,
}

/// Value of the max flow from a super-source feeding every generator to a
/// super-sink draining every load.
pub fn classical_max_flow(n: &Network) -> Rational {
    max_flow_with_edges(n).value
}

/// Edmonds–Karp over exact rationals. Each undirected edge becomes a pair of
/// opposite arcs sharing one residual budget.
pub fn max_flow_with_edges(n: &Network) -> MaxFlow {
    let index: BTreeMap<_, usize> = n.node_ids().enumerate().map(|(i, id)| (id, i)).collect();
    let source = index.len();
    let sink = source + 1;
    let mut arcs: Vec<Arc> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); index.len() + 2];
    let mut add_pair = |adj: &mut Vec<Vec<usize>>, u: usize, v: usize, fwd: Rational, back: Rational| {
        adj[u].push(arcs.len());
        arcs.push(Arc { to: v, residual: fwd });
        adj[v].push(arcs.len());
        arcs.push(Arc { to: u, residual: back });
    };

    let unbounded: Rational = n.edges().iter().map(|e| &e.cap).sum::<Rational>() + Rational::one();
    let mut edge_arcs = Vec::new();
    for e in n.edges() {
        let (Some(&u), Some(&v)) = (index.get(e.a()), index.get(e.b())) else { continue };
        if u == v {
            continue;
        }
        edge_arcs.push((e.key().clone(), e.cap.clone(), adj[u].len(), u));
        add_pair(&mut adj, u, v, e.cap.clone(), e.cap.clone());
    }
    for node in n.nodes() {
        let i = index[&node.id];
        match node.role {
            NodeRole::Generator => add_pair(&mut adj, source, i, unbounded.clone(), Rational::zero()),
            NodeRole::Load => add_pair(&mut adj, i, sink, unbounded.clone(), Rational::zero()),
            NodeRole::Plain => {}
        }
    }

    let mut value = Rational::zero();
    loop {
        // BFS for a shortest augmenting path
        let mut pred: Vec<Option<usize>> = vec![None; adj.len()];
        let mut queue = VecDeque::from([source]);
        let mut reached = false;
        while let Some(u) = queue.pop_front() {
            for &a in &adj[u] {
                let to = arcs[a].to;
                if to != source && pred[to].is_none() && arcs[a].residual.is_positive() {
                    pred[to] = Some(a);
                    if to == sink {
                        reached = true;
                        break;
                    }
                    queue.push_back(to);
                }
            }
            if reached {
                break;
            }
        }
        if !reached {
            break;
        }
        let mut path = Vec::new();
        let mut v = sink;
        while let Some(a) = pred[v] {
            path.push(a);
            v = arcs[a ^ 1].to;
        }
        let bottleneck = path.iter().map(|&a| &arcs[a].residual).min().cloned().unwrap();
        for &a in &path {
            arcs[a].residual -= &bottleneck;
            arcs[a ^ 1].residual += &bottleneck;
        }
        value += bottleneck;
    }

    let flow = edge_arcs
        .into_iter()
        .map(|(key, cap, slot, u)| {
            let a = adj[u][slot];
            (key, cap - &arcs[a].residual)
        })
        .collect();
    MaxFlow { value, flow }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Edge, Node};

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn single_edge() {
        let n = Network::new(
            vec![Node::new("g", NodeRole::Generator), Node::new("l", NodeRole::Load)],
            vec![Edge::fixed("g", "l", r(1), r(4))],
        );
        assert_eq!(classical_max_flow(&n), r(4));
    }

    #[test]
    fn gsch_triangle_by_hand() {
        // paths g-l (2) and g-v-l (1)
        let n = Network::new(
            vec![Node::new("g", NodeRole::Generator), Node::new("l", NodeRole::Load), Node::new("v", NodeRole::Plain)],
            vec![
                Edge::fixed("g", "v", r(1), r(1)),
                Edge::fixed("g", "l", r(1), r(2)),
                Edge::fixed("v", "l", r(1), r(1)),
            ],
        );
        let mf = max_flow_with_edges(&n);
        assert_eq!(mf.value, r(3));
        assert_eq!(mf.flow[&EdgeKey::new("l", "v")], r(-1));
    }

    #[test]
    fn edgeless_and_roleless() {
        let n = Network::new(vec![Node::new("g", NodeRole::Generator), Node::new("l", NodeRole::Load)], vec![]);
        assert_eq!(classical_max_flow(&n), r(0));
        let n = Network::new(
            vec![Node::new("a", NodeRole::Plain), Node::new("b", NodeRole::Load)],
            vec![Edge::fixed("a", "b", r(1), r(3))],
        );
        assert_eq!(classical_max_flow(&n), r(0));
    }

    #[test]
    fn undirected_edges_carry_flow_both_ways() {
        // g2 reaches l only through the b-a direction of the edge a-b
        let n = Network::new(
            vec![Node::new("b", NodeRole::Generator), Node::new("a", NodeRole::Plain), Node::new("l", NodeRole::Load)],
            vec![Edge::fixed("a", "b", r(1), r(3)), Edge::fixed("a", "l", r(1), r(2))],
        );
        let mf = max_flow_with_edges(&n);
        assert_eq!(mf.value, r(2));
        assert_eq!(mf.flow[&EdgeKey::new("a", "b")], r(-2));
    }
}
