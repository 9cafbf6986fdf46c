use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{EncodedInstance, EncodingKind};
use crate::error::{Error, Result};
use crate::network::{Edge, Network, Node, NodeId, NodeRole};
use crate::rational::{rat, Rational};

/// Simple undirected graph with two distinct endpoints `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianInstance {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub a: String,
    pub b: String,
}

impl HamiltonianInstance {
    pub fn new(nodes: &[&str], edges: &[(&str, &str)], a: &str, b: &str) -> Result<Self> {
        let inst = HamiltonianInstance {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            edges: edges.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect(),
            a: a.into(),
            b: b.into(),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        let names: BTreeSet<&str> = self.nodes.iter().map(String::as_str).collect();
        if names.len() != self.nodes.len() || names.contains("") {
            return bad("node names must be distinct and non-empty".into());
        }
        if self.a == self.b {
            return bad("a and b must differ".into());
        }
        for end in [&self.a, &self.b] {
            if !names.contains(end.as_str()) {
                return bad(format!("{end:?} is not a node of the graph"));
            }
        }
        let mut pairs = BTreeSet::new();
        for (x, y) in &self.edges {
            if x == y {
                return bad(format!("self-loop at {x:?}"));
            }
            if !names.contains(x.as_str()) || !names.contains(y.as_str()) {
                return bad(format!("edge {x:?}-{y:?} leaves the graph"));
            }
            if !pairs.insert(if x < y { (x, y) } else { (y, x) }) {
                return bad(format!("edge {x:?}-{y:?} listed twice"));
            }
        }
        Ok(())
    }

    /// Whether `order` visits every node once, starts at `a`, ends at `b`
    /// and only steps along edges.
    pub fn is_hamiltonian_path(&self, order: &[&str]) -> bool {
        let edges: BTreeSet<(&str, &str)> =
            self.edges.iter().flat_map(|(x, y)| [(x.as_str(), y.as_str()), (y.as_str(), x.as_str())]).collect();
        order.len() == self.nodes.len()
            && order.iter().collect::<BTreeSet<_>>().len() == order.len()
            && order.first() == Some(&self.a.as_str())
            && order.last() == Some(&self.b.as_str())
            && order.windows(2).all(|w| edges.contains(&(w[0], w[1])))
    }
}

fn graph_node(name: &str) -> NodeId {
    NodeId::new(format!("h.{name}"))
}

/// Every graph edge becomes a unit edge; a generator `s` feeds `a`, `b`
/// feeds a load `t`, and a bypass chain `s - c1 - ... - cn - t` of `n + 1`
/// unit edges runs alongside. Optimum 2 iff a Hamiltonian `a`-`b` path
/// exists: the chain carries 1 only if `θ(t) - θ(s) = n + 1`, which forces
/// the path through the graph to be `n - 1` edges long.
pub fn encode_hamiltonian(inst: &HamiltonianInstance) -> Result<EncodedInstance> {
    inst.validate()?;
    let one = Rational::one();
    let unit = |x: NodeId, y: NodeId| Edge::fixed(x, y, one.clone(), one.clone());
    let (s, t) = (NodeId::new("s"), NodeId::new("t"));
    let chain = |i: usize| NodeId::new(format!("c{i}"));
    let n = inst.nodes.len();

    let mut nodes = vec![Node::new(s.clone(), NodeRole::Generator), Node::new(t.clone(), NodeRole::Load)];
    nodes.extend(inst.nodes.iter().map(|v| Node::new(graph_node(v), NodeRole::Plain)));
    nodes.extend((1..=n).map(|i| Node::new(chain(i), NodeRole::Plain)));

    let mut edges: Vec<Edge> = inst.edges.iter().map(|(x, y)| unit(graph_node(x), graph_node(y))).collect();
    edges.push(unit(s.clone(), graph_node(&inst.a)));
    edges.push(unit(graph_node(&inst.b), t.clone()));
    let stops: Vec<NodeId> = std::iter::once(s).chain((1..=n).map(chain)).chain(std::iter::once(t)).collect();
    edges.extend(stops.windows(2).map(|w| unit(w[0].clone(), w[1].clone())));

    let network = Network::try_new(nodes, edges)?;
    Ok(EncodedInstance { network, predicted_value: rat(2, 1), kind: EncodingKind::Hamiltonian })
}
