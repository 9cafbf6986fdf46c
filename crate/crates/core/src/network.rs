//! Network model: nodes with roles, undirected edges with a susceptance
//! interval and a capacity, plus the sub-network and sum constructions.
//!
//! A [`Network`] may hold structurally invalid data (duplicate pairs,
//! self-loops, dangling endpoints); [`validate_network`] reports every such
//! problem instead of refusing to build it. Solvers check validity up front.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::solution::{Location, ValidationReport, Violation, ViolationKind};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Self {
        NodeId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    Generator,
    Load,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub id: NodeId,
    pub role: NodeRole,
}

impl Node {
    pub fn new(id: impl Into<NodeId>, role: NodeRole) -> Self {
        Node { id: id.into(), role }
    }
}

/// Unordered node pair in canonical orientation (`a <= b`). Flow on the
/// edge is positive when it goes from `a` to `b`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    a: NodeId,
    b: NodeId,
}

impl EdgeKey {
    pub fn new(x: impl Into<NodeId>, y: impl Into<NodeId>) -> Self {
        let (x, y) = (x.into(), y.into());
        if x <= y {
            EdgeKey { a: x, b: y }
        } else {
            EdgeKey { a: y, b: x }
        }
    }

    pub fn a(&self) -> &NodeId {
        &self.a
    }

    pub fn b(&self) -> &NodeId {
        &self.b
    }

    pub fn touches(&self, node: &NodeId) -> bool {
        &self.a == node || &self.b == node
    }

    /// The endpoint opposite to `node`, if `node` is an endpoint.
    pub fn other(&self, node: &NodeId) -> Option<&NodeId> {
        if &self.a == node {
            Some(&self.b)
        } else if &self.b == node {
            Some(&self.a)
        } else {
            None
        }
    }

    /// +1 if travelling `from -> to` matches the canonical orientation, -1 if
    /// it is reversed, `None` if the pair is not this edge.
    pub fn orientation(&self, from: &NodeId, to: &NodeId) -> Option<i8> {
        if &self.a == from && &self.b == to {
            Some(1)
        } else if &self.b == from && &self.a == to {
            Some(-1)
        } else {
            None
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl fmt::Debug for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    key: EdgeKey,
    pub s_min: Rational,
    pub s_max: Rational,
    pub cap: Rational,
}

impl Edge {
    pub fn new(a: impl Into<NodeId>, b: impl Into<NodeId>, s_min: Rational, s_max: Rational, cap: Rational) -> Self {
        Edge { key: EdgeKey::new(a, b), s_min, s_max, cap }
    }

    /// Edge with a fixed susceptance.
    pub fn fixed(a: impl Into<NodeId>, b: impl Into<NodeId>, s: Rational, cap: Rational) -> Self {
        Edge::new(a, b, s.clone(), s, cap)
    }

    pub fn key(&self) -> &EdgeKey {
        &self.key
    }

    pub fn a(&self) -> &NodeId {
        &self.key.a
    }

    pub fn b(&self) -> &NodeId {
        &self.key.b
    }

    /// True when the susceptance is adjustable (a FACTS device sits on it).
    pub fn is_facts(&self) -> bool {
        self.s_min != self.s_max
    }

    /// The susceptance if it is fixed.
    pub fn susceptance(&self) -> Option<&Rational> {
        (!self.is_facts()).then_some(&self.s_min)
    }

    pub fn with_susceptance(&self, s: Rational) -> Edge {
        Edge { key: self.key.clone(), s_min: s.clone(), s_max: s, cap: self.cap.clone() }
    }
}

/// Subset of a network's edges designated as switched off.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwitchSet(BTreeSet<EdgeKey>);

impl SwitchSet {
    pub fn new() -> Self {
        SwitchSet::default()
    }

    pub fn insert(&mut self, key: EdgeKey) -> bool {
        self.0.insert(key)
    }

    pub fn remove(&mut self, key: &EdgeKey) -> bool {
        self.0.remove(key)
    }

    pub fn contains(&self, key: &EdgeKey) -> bool {
        self.0.contains(key)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EdgeKey> {
        self.0.iter()
    }
}

impl FromIterator<EdgeKey> for SwitchSet {
    fn from_iter<I: IntoIterator<Item = EdgeKey>>(iter: I) -> Self {
        SwitchSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a SwitchSet {
    type Item = &'a EdgeKey;
    type IntoIter = std::collections::btree_set::Iter<'a, EdgeKey>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl Network {
    /// Builds a network without validating it; nodes and edges are stored in
    /// canonical order.
    pub fn new(mut nodes: Vec<Node>, mut edges: Vec<Edge>) -> Self {
        nodes.sort();
        edges.sort();
        Network { nodes, edges }
    }

    /// Builds a network and rejects it unless [`validate_network`] passes.
    pub fn try_new(nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self> {
        let n = Network::new(nodes, edges);
        n.ensure_valid()?;
        Ok(n)
    }

    pub fn empty() -> Self {
        Network::default()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_network(self);
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(report))
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn role(&self, id: &NodeId) -> Option<NodeRole> {
        self.nodes.binary_search_by(|n| n.id.cmp(id)).ok().map(|i| self.nodes[i].role)
    }

    pub fn contains_node(&self, id: &NodeId) -> bool {
        self.role(id).is_some()
    }

    pub fn edge(&self, key: &EdgeKey) -> Option<&Edge> {
        self.edges.binary_search_by(|e| e.key.cmp(key)).ok().map(|i| &self.edges[i])
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter().map(|n| &n.id)
    }

    pub fn generators(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter().filter(|n| n.role == NodeRole::Generator).map(|n| &n.id)
    }

    pub fn loads(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter().filter(|n| n.role == NodeRole::Load).map(|n| &n.id)
    }

    /// An LDC network has a fixed susceptance on every edge.
    pub fn is_ldc(&self) -> bool {
        self.edges.iter().all(|e| !e.is_facts())
    }

    pub fn facts_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.is_facts())
    }

    pub fn ensure_ldc(&self) -> Result<()> {
        match self.facts_edges().next() {
            Some(e) => Err(Error::NotFixedSusceptance(e.key().clone())),
            None => Ok(()),
        }
    }

    pub fn degree(&self, id: &NodeId) -> usize {
        self.edges.iter().filter(|e| e.key.touches(id)).count()
    }

    /// Incident edges per node, including isolated nodes.
    pub fn adjacency(&self) -> BTreeMap<&NodeId, Vec<&Edge>> {
        let mut adj: BTreeMap<&NodeId, Vec<&Edge>> = self.nodes.iter().map(|n| (&n.id, Vec::new())).collect();
        for e in &self.edges {
            adj.entry(e.a()).or_default().push(e);
            if e.a() != e.b() {
                adj.entry(e.b()).or_default().push(e);
            }
        }
        adj
    }

    /// Connected components, each sorted, ordered by their smallest node.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        components_of(self.node_ids(), self.edges.iter().map(|e| e.key()))
    }

    /// Same network with the given susceptances pinned (both interval ends set
    /// to the value). Edges missing from `assignment` are left untouched.
    pub fn with_susceptances(&self, assignment: &BTreeMap<EdgeKey, Rational>) -> Network {
        let edges = self
            .edges
            .iter()
            .map(|e| match assignment.get(e.key()) {
                Some(s) => e.with_susceptance(s.clone()),
                None => e.clone(),
            })
            .collect();
        Network { nodes: self.nodes.clone(), edges }
    }

    /// Same network with node roles replaced.
    pub fn with_role(&self, id: &NodeId, role: NodeRole) -> Network {
        let nodes =
            self.nodes.iter().map(|n| if &n.id == id { Node { id: n.id.clone(), role } } else { n.clone() }).collect();
        Network { nodes, edges: self.edges.clone() }
    }

    /// Same network with every capacity multiplied by `factor`.
    pub fn scale_capacities(&self, factor: &Rational) -> Network {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { key: e.key.clone(), s_min: e.s_min.clone(), s_max: e.s_max.clone(), cap: &e.cap * factor })
            .collect();
        Network { nodes: self.nodes.clone(), edges }
    }

    pub fn edges_without(&self, removed: &SwitchSet) -> Vec<Edge> {
        self.edges.iter().filter(|e| !removed.contains(e.key())).cloned().collect()
    }
}

/// Connected components of the graph on `nodes` with the given edges.
pub(crate) fn components_of<'a>(
    nodes: impl Iterator<Item = &'a NodeId>,
    edges: impl Iterator<Item = &'a EdgeKey>,
) -> Vec<Vec<NodeId>> {
    let mut adj: BTreeMap<&NodeId, Vec<&NodeId>> = nodes.map(|n| (n, Vec::new())).collect();
    for k in edges {
        adj.entry(k.a()).or_default().push(k.b());
        adj.entry(k.b()).or_default().push(k.a());
    }
    let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in adj.keys() {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if seen.insert(v) {
                    comp.push(v.clone());
                    queue.push_back(v);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// Reports every structural problem of `n`: duplicate or conflicting nodes,
/// self-loops, dangling endpoints, parallel edges, and non-positive or
/// inverted parameters.
pub fn validate_network(n: &Network) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |location: Location, detail: String| {
        violations.push(Violation { kind: ViolationKind::Structural, location, detail });
    };

    for pair in n.nodes.windows(2) {
        if pair[0].id == pair[1].id {
            let detail = if pair[0].role != pair[1].role {
                format!("node declared with conflicting roles {:?} and {:?}", pair[0].role, pair[1].role)
            } else {
                "node declared twice".to_string()
            };
            push(Location::Node(pair[0].id.clone()), detail);
        }
    }
    for node in &n.nodes {
        if node.id.as_str().is_empty() {
            push(Location::Node(node.id.clone()), "empty node name".to_string());
        }
    }
    for e in &n.edges {
        let loc = || Location::Edge(e.key.clone());
        if e.a() == e.b() {
            push(loc(), "self-loop".to_string());
        }
        for end in [e.a(), e.b()] {
            if !n.contains_node(end) {
                push(loc(), format!("endpoint {end} is not a declared node"));
            }
        }
        if !e.s_min.is_positive() {
            push(loc(), format!("susceptance lower bound {} is not positive", e.s_min));
        }
        if e.s_min > e.s_max {
            push(loc(), format!("susceptance interval [{}, {}] is inverted", e.s_min, e.s_max));
        }
        if !e.cap.is_positive() {
            push(loc(), format!("capacity {} is not positive", e.cap));
        }
    }
    for pair in n.edges.windows(2) {
        if pair[0].key == pair[1].key {
            push(Location::Edge(pair[0].key.clone()), "two edges connect the same pair of nodes".to_string());
        }
    }
    ValidationReport::from_violations(violations)
}

/// The network with the edges of `s` removed; nodes and roles are unchanged.
pub fn subnetwork(n: &Network, s: &SwitchSet) -> Result<Network> {
    if let Some(k) = s.iter().find(|k| n.edge(k).is_none()) {
        return Err(Error::UnknownEdge(k.clone()));
    }
    Ok(Network { nodes: n.nodes.clone(), edges: n.edges_without(s) })
}

/// Componentwise union. Shared node ids merge; the generator and load sets
/// are united and must stay disjoint.
pub fn sum(n1: &Network, n2: &Network) -> Result<Network> {
    let mut roles: BTreeMap<NodeId, NodeRole> = BTreeMap::new();
    for node in n1.nodes.iter().chain(&n2.nodes) {
        let merged = match roles.get(&node.id) {
            None => node.role,
            Some(&prev) => merge_roles(prev, node.role).ok_or_else(|| Error::RoleConflict(node.id.clone()))?,
        };
        roles.insert(node.id.clone(), merged);
    }
    for e in &n2.edges {
        if n1.edge(e.key()).is_some() {
            return Err(Error::EdgeOverlap(e.key().clone()));
        }
    }
    let nodes = roles.into_iter().map(|(id, role)| Node { id, role }).collect();
    let edges = n1.edges.iter().chain(&n2.edges).cloned().collect();
    Ok(Network::new(nodes, edges))
}

fn merge_roles(a: NodeRole, b: NodeRole) -> Option<NodeRole> {
    use NodeRole::*;
    match (a, b) {
        (Generator, Load) | (Load, Generator) => None,
        (Plain, r) | (r, Plain) => Some(r),
        (r, _) => Some(r),
    }
}
