//! JSON forms of networks, solutions and encoded instances.
//!
//! Numbers are exact: rationals are written as strings (`"61/10"`, `"3"`)
//! and read from strings (`"p/q"`, integers, finite decimals) or JSON
//! integers.
//!
//! ```json
//! {"nodes": [{"id": "g", "role": "generator"}, {"id": "l", "role": "load"}],
//!  "edges": [{"a": "g", "b": "l", "s_min": "1", "s_max": "2", "cap": "5"}]}
//! ```
//!
//! An edge may give a single `"s"` instead of `s_min`/`s_max`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Edge, EdgeKey, Network, Node, NodeId, NodeRole};
use crate::rational::Rational;
use crate::reductions::EncodedInstance;
use crate::solution::Solution;

#[derive(Serialize, Deserialize)]
struct NetworkJson {
    nodes: Vec<NodeJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: NodeId,
    role: NodeRole,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    a: NodeId,
    b: NodeId,
    #[serde(default, skip_serializing)]
    s: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s_min: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s_max: Option<Rational>,
    cap: Rational,
}

#[derive(Serialize, Deserialize)]
struct EdgeValue {
    a: NodeId,
    b: NodeId,
    value: Rational,
}

#[derive(Serialize, Deserialize)]
struct SolutionJson {
    #[serde(default)]
    susceptance: Vec<EdgeValue>,
    #[serde(default)]
    flow: Vec<EdgeValue>,
    #[serde(default)]
    angle: BTreeMap<NodeId, Rational>,
    #[serde(default)]
    gen: BTreeMap<NodeId, Rational>,
    #[serde(default)]
    load: BTreeMap<NodeId, Rational>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn network_json(n: &Network) -> NetworkJson {
    NetworkJson {
        nodes: n.nodes().iter().map(|node| NodeJson { id: node.id.clone(), role: node.role }).collect(),
        edges: n
            .edges()
            .iter()
            .map(|e| EdgeJson {
                a: e.a().clone(),
                b: e.b().clone(),
                s: None,
                s_min: Some(e.s_min.clone()),
                s_max: Some(e.s_max.clone()),
                cap: e.cap.clone(),
            })
            .collect(),
    }
}

fn network_from(raw: NetworkJson) -> Result<Network> {
    let nodes = raw.nodes.into_iter().map(|n| Node { id: n.id, role: n.role }).collect();
    let edges = raw
        .edges
        .into_iter()
        .map(|e| {
            let (lo, hi) = match (e.s, e.s_min, e.s_max) {
                (Some(s), None, None) => (s.clone(), s),
                (None, Some(lo), Some(hi)) => (lo, hi),
                _ => {
                    return Err(Error::Parse(format!(
                        "edge {}-{}: give either \"s\" or both \"s_min\" and \"s_max\"",
                        e.a, e.b
                    )))
                }
            };
            Ok(Edge::new(e.a, e.b, lo, hi, e.cap))
        })
        .collect::<Result<Vec<_>>>()?;
    Network::try_new(nodes, edges)
}

/// Parses and validates a network.
pub fn network_from_json(text: &str) -> Result<Network> {
    network_from(serde_json::from_str(text).map_err(parse_err)?)
}

pub fn network_to_json(n: &Network) -> String {
    serde_json::to_string_pretty(&network_json(n)).expect("serializable")
}

pub fn network_to_value(n: &Network) -> serde_json::Value {
    serde_json::to_value(network_json(n)).expect("serializable")
}

/// Reads a solution. Edge entries may name their endpoints in either order;
/// a flow listed as `b -> a` is negated into the canonical direction.
pub fn solution_from_json(text: &str) -> Result<Solution> {
    let raw: SolutionJson = serde_json::from_str(text).map_err(parse_err)?;
    let mut sol = Solution { angle: raw.angle, gen: raw.gen, load: raw.load, ..Solution::default() };
    for e in raw.susceptance {
        let key = EdgeKey::new(e.a, e.b);
        if sol.susceptance.insert(key.clone(), e.value).is_some() {
            return Err(Error::Parse(format!("susceptance of {key} given twice")));
        }
    }
    for e in raw.flow {
        let key = EdgeKey::new(e.a.clone(), e.b.clone());
        let value = if key.a() == &e.a { e.value } else { -e.value };
        if sol.flow.insert(key.clone(), value).is_some() {
            return Err(Error::Parse(format!("flow on {key} given twice")));
        }
    }
    Ok(sol)
}

fn solution_json(sol: &Solution) -> SolutionJson {
    let entries = |m: &BTreeMap<EdgeKey, Rational>| {
        m.iter().map(|(k, v)| EdgeValue { a: k.a().clone(), b: k.b().clone(), value: v.clone() }).collect()
    };
    SolutionJson {
        susceptance: entries(&sol.susceptance),
        flow: entries(&sol.flow),
        angle: sol.angle.clone(),
        gen: sol.gen.clone(),
        load: sol.load.clone(),
    }
}

pub fn solution_to_json(sol: &Solution) -> String {
    serde_json::to_string_pretty(&solution_json(sol)).expect("serializable")
}

pub fn solution_to_value(sol: &Solution) -> serde_json::Value {
    serde_json::to_value(solution_json(sol)).expect("serializable")
}

/// `{"kind", "predicted_value", "network"}`.
pub fn encoded_to_value(enc: &EncodedInstance) -> serde_json::Value {
    serde_json::json!({
        "kind": enc.kind,
        "predicted_value": enc.predicted_value,
        "network": network_to_value(&enc.network),
    })
}
