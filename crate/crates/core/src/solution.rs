//! Power-flow solutions and the certificate checker for them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::network::{EdgeKey, Network, NodeId, NodeRole, SwitchSet};
use crate::rational::Rational;

/// Per-edge susceptance and flow, per-node angle, generation and load.
///
/// Flows are signed with respect to the canonical edge orientation:
/// positive means `a -> b`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Solution {
    pub susceptance: BTreeMap<EdgeKey, Rational>,
    pub angle: BTreeMap<NodeId, Rational>,
    pub flow: BTreeMap<EdgeKey, Rational>,
    pub gen: BTreeMap<NodeId, Rational>,
    pub load: BTreeMap<NodeId, Rational>,
}

impl Solution {
    /// All angles, flows, generation and load zero; susceptances at `s_min`.
    pub fn zero(n: &Network) -> Self {
        let angles = n.node_ids().map(|id| (id.clone(), Rational::zero())).collect();
        Solution::from_angles(n, &BTreeMap::new(), &angles)
    }

    /// Derives flows from angles through the power law and sets generation
    /// and load to the resulting nodal imbalances: the positive part of the
    /// net outflow at generators, of the net inflow at loads. Susceptances
    /// not given in `susceptance` default to `s_min`.
    ///
    /// The result validates iff every capacity holds and every node's
    /// imbalance has a sign its role can absorb.
    pub fn from_angles(
        n: &Network,
        susceptance: &BTreeMap<EdgeKey, Rational>,
        angle: &BTreeMap<NodeId, Rational>,
    ) -> Self {
        let mut sol = Solution { angle: angle.clone(), ..Solution::default() };
        let zero = Rational::zero();
        for e in n.edges() {
            let s = susceptance.get(e.key()).unwrap_or(&e.s_min).clone();
            let da = angle.get(e.b()).unwrap_or(&zero) - angle.get(e.a()).unwrap_or(&zero);
            sol.flow.insert(e.key().clone(), &s * da);
            sol.susceptance.insert(e.key().clone(), s);
        }
        let out = sol.net_outflow(n);
        for node in n.nodes() {
            let net = out.get(&node.id).cloned().unwrap_or_default();
            let (g, l) = match node.role {
                NodeRole::Generator => (net.positive_part(), Rational::zero()),
                NodeRole::Load => (Rational::zero(), (-net).positive_part()),
                NodeRole::Plain => (Rational::zero(), Rational::zero()),
            };
            sol.gen.insert(node.id.clone(), g);
            sol.load.insert(node.id.clone(), l);
        }
        sol
    }

    /// Signed flow travelling `from -> to`, if that pair is an edge.
    pub fn flow_between(&self, from: &NodeId, to: &NodeId) -> Option<Rational> {
        let key = EdgeKey::new(from.clone(), to.clone());
        let f = self.flow.get(&key)?;
        match key.orientation(from, to)? {
            1 => Some(f.clone()),
            _ => Some(-f),
        }
    }

    /// Σ outgoing flow − Σ incoming flow per node of `n`.
    pub fn net_outflow(&self, n: &Network) -> BTreeMap<NodeId, Rational> {
        let mut out: BTreeMap<NodeId, Rational> = n.node_ids().map(|id| (id.clone(), Rational::zero())).collect();
        for e in n.edges() {
            if let Some(f) = self.flow.get(e.key()) {
                if let Some(x) = out.get_mut(e.a()) {
                    *x += f;
                }
                if let Some(x) = out.get_mut(e.b()) {
                    *x -= f;
                }
            }
        }
        out
    }

    pub fn gen_of(&self, id: &NodeId) -> Rational {
        self.gen.get(id).cloned().unwrap_or_default()
    }

    pub fn load_of(&self, id: &NodeId) -> Rational {
        self.load.get(id).cloned().unwrap_or_default()
    }

    /// Drops entries for nodes and edges that `n` does not have.
    pub fn restricted_to(&self, n: &Network) -> Solution {
        let keys: BTreeSet<&EdgeKey> = n.edges().iter().map(|e| e.key()).collect();
        let ids: BTreeSet<&NodeId> = n.node_ids().collect();
        Solution {
            susceptance: self
                .susceptance
                .iter()
                .filter(|(k, _)| keys.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            flow: self.flow.iter().filter(|(k, _)| keys.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
            angle: self.angle.iter().filter(|(k, _)| ids.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
            gen: self.gen.iter().filter(|(k, _)| ids.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
            load: self.load.iter().filter(|(k, _)| ids.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }
}

/// Σ generation over all nodes.
pub fn total_generation(sol: &Solution) -> Rational {
    sol.gen.values().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ViolationKind {
    Kirchhoff,
    PowerLaw,
    SusceptanceBound,
    CapacityBound,
    RoleBound,
    Structural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Node(NodeId),
    #[serde(serialize_with = "serialize_edge_key")]
    Edge(EdgeKey),
}

fn serialize_edge_key<S: serde::Serializer>(k: &EdgeKey, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(k)
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Node(id) => write!(f, "node {id}"),
            Location::Edge(k) => write!(f, "edge {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {}: {}", self.kind, self.location, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    ok: bool,
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return f.write_str("OK");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks `sol` against `n` with exact arithmetic: Kirchhoff's law at every
/// node, the power law on every edge, susceptance and capacity bounds, and
/// the sign/role constraints on generation and load. Every violation is
/// reported; nothing is thrown.
pub fn validate_solution(n: &Network, sol: &Solution) -> ValidationReport {
    let mut v = Vec::new();
    let mut report = |kind, location, detail: String| v.push(Violation { kind, location, detail });
    let zero = Rational::zero();

    // domains
    let edge_keys: BTreeSet<&EdgeKey> = n.edges().iter().map(|e| e.key()).collect();
    let node_ids: BTreeSet<&NodeId> = n.node_ids().collect();
    for (what, map) in [("susceptance", &sol.susceptance), ("flow", &sol.flow)] {
        for k in &edge_keys {
            if !map.contains_key(*k) {
                report(ViolationKind::Structural, Location::Edge((*k).clone()), format!("missing {what}"));
            }
        }
        for k in map.keys().filter(|k| !edge_keys.contains(k)) {
            report(
                ViolationKind::Structural,
                Location::Edge(k.clone()),
                format!("{what} given for an edge not in the network"),
            );
        }
    }
    for (what, map) in [("angle", &sol.angle), ("generation", &sol.gen), ("load", &sol.load)] {
        for id in &node_ids {
            if !map.contains_key(*id) {
                report(ViolationKind::Structural, Location::Node((*id).clone()), format!("missing {what}"));
            }
        }
        for id in map.keys().filter(|id| !node_ids.contains(id)) {
            report(
                ViolationKind::Structural,
                Location::Node(id.clone()),
                format!("{what} given for a node not in the network"),
            );
        }
    }

    // Kirchhoff
    let out = sol.net_outflow(n);
    for node in n.nodes() {
        let g = sol.gen.get(&node.id).unwrap_or(&zero);
        let l = sol.load.get(&node.id).unwrap_or(&zero);
        let net = &out[&node.id];
        if *net != g - l {
            report(
                ViolationKind::Kirchhoff,
                Location::Node(node.id.clone()),
                format!("net outflow {net} differs from generation {g} minus load {l}"),
            );
        }
        if g.is_negative() {
            report(ViolationKind::RoleBound, Location::Node(node.id.clone()), format!("negative generation {g}"));
        }
        if l.is_negative() {
            report(ViolationKind::RoleBound, Location::Node(node.id.clone()), format!("negative load {l}"));
        }
        if node.role != NodeRole::Generator && !g.is_zero() {
            report(
                ViolationKind::RoleBound,
                Location::Node(node.id.clone()),
                format!("generation {g} at a non-generator"),
            );
        }
        if node.role != NodeRole::Load && !l.is_zero() {
            report(ViolationKind::RoleBound, Location::Node(node.id.clone()), format!("load {l} at a non-load"));
        }
    }

    // edges
    for e in n.edges() {
        let loc = || Location::Edge(e.key().clone());
        let s = sol.susceptance.get(e.key()).unwrap_or(&zero);
        let f = sol.flow.get(e.key()).unwrap_or(&zero);
        let ta = sol.angle.get(e.a()).unwrap_or(&zero);
        let tb = sol.angle.get(e.b()).unwrap_or(&zero);
        let expected = s * (tb - ta);
        if *f != expected {
            report(
                ViolationKind::PowerLaw,
                loc(),
                format!("flow {f} but susceptance times angle difference is {expected}"),
            );
        }
        if *s < e.s_min || *s > e.s_max {
            report(
                ViolationKind::SusceptanceBound,
                loc(),
                format!("susceptance {s} outside [{}, {}]", e.s_min, e.s_max),
            );
        }
        if f.abs() > e.cap {
            report(ViolationKind::CapacityBound, loc(), format!("|flow| {} exceeds capacity {}", f.abs(), e.cap));
        }
    }
    ValidationReport::from_violations(v)
}

/// Like [`validate_solution`], but edges the solution says nothing about
/// (neither flow nor susceptance) count as switched off: the solution is
/// checked against the remaining sub-network. Returns the switched edges
/// with the report.
pub fn validate_with_switching(n: &Network, sol: &Solution) -> (SwitchSet, ValidationReport) {
    let switched: SwitchSet = n
        .edges()
        .iter()
        .map(|e| e.key())
        .filter(|k| !sol.flow.contains_key(*k) && !sol.susceptance.contains_key(*k))
        .cloned()
        .collect();
    let sub = Network::new(n.nodes().to_vec(), n.edges_without(&switched));
    (switched, validate_solution(&sub, sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Edge, Node};
    use crate::rational::rat;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn gsch1_minus() -> Network {
        Network::new(
            vec![Node::new("g", NodeRole::Generator), Node::new("l", NodeRole::Load), Node::new("v", NodeRole::Load)],
            vec![
                Edge::fixed("g", "v", r(1), r(1)),
                Edge::fixed("g", "l", r(1), r(2)),
                Edge::fixed("v", "l", r(1), r(1)),
            ],
        )
    }

    fn table_row_solution() -> Solution {
        // angles g=0, v=1, l=2; every flow is one unit per unit of angle
        let angles = [("g", 0), ("v", 1), ("l", 2)].into_iter().map(|(k, a)| (NodeId::from(k), r(a))).collect();
        let sol = Solution::from_angles(&gsch1_minus(), &BTreeMap::new(), &angles);
        assert_eq!(sol.flow_between(&"g".into(), &"v".into()), Some(r(1)));
        assert_eq!(sol.flow_between(&"g".into(), &"l".into()), Some(r(2)));
        assert_eq!(sol.flow_between(&"v".into(), &"l".into()), Some(r(1)));
        sol
    }

    #[test]
    fn hand_checked_solution_is_valid() {
        let sol = table_row_solution();
        assert_eq!(sol.gen_of(&"g".into()), r(3));
        assert_eq!(sol.load_of(&"l".into()), r(3));
        assert_eq!(sol.load_of(&"v".into()), r(0));
        let report = validate_solution(&gsch1_minus(), &sol);
        assert!(report.is_ok(), "{report}");
        assert_eq!(total_generation(&sol), r(3));
    }

    #[test]
    fn overdrawn_edge_breaks_power_law_and_capacity() {
        let mut sol = table_row_solution();
        // canonical orientation of v-l is l -> v
        sol.flow.insert(EdgeKey::new("v", "l"), r(-2));
        let report = validate_solution(&gsch1_minus(), &sol);
        assert!(report.has(ViolationKind::PowerLaw));
        assert!(report.has(ViolationKind::CapacityBound));
    }

    #[test]
    fn zero_solution_is_valid() {
        let n = gsch1_minus();
        let sol = Solution::zero(&n);
        assert!(validate_solution(&n, &sol).is_ok());
        assert_eq!(total_generation(&sol), r(0));
    }

    #[test]
    fn structural_and_role_problems() {
        let n = gsch1_minus();
        let mut sol = Solution::zero(&n);
        sol.gen.insert("v".into(), rat(1, 2));
        sol.angle.remove(&NodeId::from("l"));
        sol.flow.insert(EdgeKey::new("g", "x"), r(0));
        let report = validate_solution(&n, &sol);
        assert!(report.has(ViolationKind::RoleBound));
        assert!(report.has(ViolationKind::Structural));
        assert!(report.has(ViolationKind::Kirchhoff));
    }

    #[test]
    fn susceptance_outside_interval() {
        let n = Network::new(
            vec![Node::new("a", NodeRole::Generator), Node::new("b", NodeRole::Load)],
            vec![Edge::new("a", "b", rat(2, 5), rat(8, 5), r(1))],
        );
        let mut s = BTreeMap::new();
        s.insert(EdgeKey::new("a", "b"), r(2));
        let sol = Solution::from_angles(&n, &s, &BTreeMap::new());
        assert!(validate_solution(&n, &sol).has(ViolationKind::SusceptanceBound));
    }
}
