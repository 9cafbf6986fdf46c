//! Graph-class predicates: trees, cacti, connectivity, degree.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::network::{Network, NodeId};

pub fn is_connected(n: &Network) -> bool {
    n.components().len() <= 1
}

/// Connected and acyclic. The empty network counts as a tree.
pub fn is_tree(n: &Network) -> bool {
    n.node_count() == 0 || (is_connected(n) && n.edge_count() + 1 == n.node_count())
}

/// Connected, and every edge lies on at most one simple cycle (every
/// biconnected component is a bridge or a simple cycle).
///
/// Works on a DFS tree: each back edge closes one cycle made of itself and a
/// tree path; the graph is a cactus iff no tree edge is claimed by two back
/// edges.
pub fn is_cactus(n: &Network) -> bool {
    if !is_connected(n) {
        return false;
    }
    let index: BTreeMap<&NodeId, usize> = n.node_ids().enumerate().map(|(i, id)| (id, i)).collect();
    let count = index.len();
    if count == 0 {
        return true;
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    for (ei, e) in n.edges().iter().enumerate() {
        let (u, v) = (index[e.a()], index[e.b()]);
        adj[u].push((v, ei));
        adj[v].push((u, ei));
    }

    // iterative DFS recording parents and depths
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; count];
    let mut depth: Vec<Option<usize>> = vec![None; count];
    let mut back_edges = Vec::new();
    depth[0] = Some(0);
    let mut stack = vec![(0usize, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (u, next) = *top;
        if next == adj[u].len() {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let (v, ei) = adj[u][next];
        if parent[u].is_some_and(|(_, pe)| pe == ei) {
            continue;
        }
        match depth[v] {
            None => {
                depth[v] = Some(depth[u].unwrap() + 1);
                parent[v] = Some((u, ei));
                stack.push((v, 0));
            }
            Some(dv) if dv < depth[u].unwrap() => back_edges.push((u, v)),
            Some(_) => {}
        }
    }

    // claim[x] marks the tree edge from x to its parent
    let mut claimed = vec![false; count];
    for (low, high) in back_edges {
        let mut x = low;
        while x != high {
            if claimed[x] {
                return false;
            }
            claimed[x] = true;
            x = parent[x].expect("ancestor chain").0;
        }
    }
    true
}

pub fn max_degree(n: &Network) -> usize {
    let mut deg: BTreeMap<&NodeId, usize> = BTreeMap::new();
    for e in n.edges() {
        *deg.entry(e.a()).or_default() += 1;
        *deg.entry(e.b()).or_default() += 1;
    }
    deg.into_values().max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub tree: bool,
    pub cactus: bool,
    pub max_degree: usize,
    pub connected: bool,
}

pub fn classify(n: &Network) -> Classification {
    Classification { tree: is_tree(n), cactus: is_cactus(n), max_degree: max_degree(n), connected: is_connected(n) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Edge, Node, NodeRole};
    use crate::rational::Rational;

    fn graph(nodes: &[&str], edges: &[(&str, &str)]) -> Network {
        Network::new(
            nodes.iter().map(|n| Node::new(*n, NodeRole::Plain)).collect(),
            edges.iter().map(|(a, b)| Edge::fixed(*a, *b, Rational::one(), Rational::one())).collect(),
        )
    }

    #[test]
    fn trees() {
        assert!(is_tree(&graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")])));
        assert!(!is_tree(&graph(&["g", "l", "v"], &[("g", "v"), ("g", "l"), ("v", "l")])));
        assert!(is_tree(&Network::empty()));
        assert!(is_tree(&graph(&["a"], &[])));
        assert!(!is_tree(&graph(&["a", "b"], &[])));
    }

    #[test]
    fn cacti() {
        let k4 =
            graph(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]);
        assert!(!is_cactus(&k4));
        assert!(is_cactus(&graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")])));
        // two triangles sharing a vertex
        let bowtie = graph(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "e"), ("e", "c")],
        );
        assert!(is_cactus(&bowtie));
        // two triangles sharing an edge
        let diamond = graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "a"), ("b", "d"), ("d", "c")]);
        assert!(!is_cactus(&diamond));
        assert!(!is_cactus(&graph(&["a", "b"], &[])));
        assert!(is_cactus(&Network::empty()));
    }

    #[test]
    fn degrees() {
        assert_eq!(max_degree(&graph(&["g", "l", "v"], &[("g", "v"), ("g", "l"), ("v", "l")])), 2);
        assert_eq!(max_degree(&graph(&["a", "b"], &[])), 0);
        assert_eq!(max_degree(&graph(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("a", "d")])), 3);
    }
}
