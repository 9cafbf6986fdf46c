use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{check_optimal, EncodedInstance, EncodingKind};
use crate::error::{Error, Result};
use crate::gadgets::{gfch, gsch, Polarity};
use crate::network::{sum, Edge, Network, Node, NodeId, NodeRole};
use crate::rational::{rat, Rational};
use crate::solution::Solution;

/// Universe `M` and a family `S` of 3-element subsets of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCover3Instance {
    #[serde(rename = "M")]
    pub universe: Vec<String>,
    #[serde(rename = "S")]
    pub sets: Vec<[String; 3]>,
}

impl ExactCover3Instance {
    pub fn new<S: Into<String>>(universe: impl IntoIterator<Item = S>, sets: Vec<[&str; 3]>) -> Result<Self> {
        let inst = ExactCover3Instance {
            universe: universe.into_iter().map(Into::into).collect(),
            sets: sets.into_iter().map(|s| s.map(String::from)).collect(),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        let mut seen = BTreeSet::new();
        for x in &self.universe {
            if x.is_empty() {
                return bad("empty element name".into());
            }
            if !seen.insert(x.as_str()) {
                return bad(format!("element {x:?} listed twice"));
            }
        }
        let mut family = BTreeSet::new();
        for set in &self.sets {
            let members: BTreeSet<&str> = set.iter().map(String::as_str).collect();
            if members.len() != 3 {
                return bad(format!("set {set:?} does not have three distinct elements"));
            }
            if let Some(x) = members.iter().find(|x| !seen.contains(*x)) {
                return bad(format!("set {set:?} uses {x:?}, which is not in the universe"));
            }
            if !family.insert(members) {
                return bad(format!("set {set:?} listed twice"));
            }
        }
        Ok(())
    }

    /// Whether `chosen` (indices into `sets`) covers every element exactly
    /// once.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = BTreeSet::new();
        for &i in chosen {
            for x in &self.sets[i] {
                if !covered.insert(x.as_str()) {
                    return false;
                }
            }
        }
        covered.len() == self.universe.len()
    }
}

fn element(x: &str) -> NodeId {
    NodeId::new(format!("m.{x}"))
}

fn gadget_prefix(i: usize) -> String {
    format!("X{}.", i + 1)
}

fn port(i: usize) -> NodeId {
    NodeId::new(format!("{}v", gadget_prefix(i)))
}

fn encode(inst: &ExactCover3Instance, kind: EncodingKind) -> Result<EncodedInstance> {
    inst.validate()?;
    let one = Rational::one();
    let (g, l) = (NodeId::new("g"), NodeId::new("l"));
    let mut nodes = vec![Node::new(g.clone(), NodeRole::Generator), Node::new(l.clone(), NodeRole::Load)];
    let mut edges = vec![Edge::fixed(g.clone(), l.clone(), one.clone(), rat(3, 1))];
    for x in &inst.universe {
        nodes.push(Node::new(element(x), NodeRole::Plain));
        edges.push(Edge::fixed(g.clone(), element(x), one.clone(), one.clone()));
        edges.push(Edge::fixed(element(x), l.clone(), one.clone(), rat(2, 1)));
    }
    for (i, set) in inst.sets.iter().enumerate() {
        nodes.push(Node::new(port(i), NodeRole::Plain));
        for x in set {
            edges.push(Edge::fixed(port(i), element(x), one.clone(), one.clone()));
        }
    }
    let mut network = Network::try_new(nodes, edges)?;
    let three = rat(3, 1);
    for i in 0..inst.sets.len() {
        let gadget = match kind {
            EncodingKind::ExactCoverMff => gfch(&three, &port(i), Polarity::Port, &gadget_prefix(i))?,
            _ => gsch(&three, &port(i), Polarity::Port, &gadget_prefix(i))?,
        };
        network = sum(&network, &gadget)?;
    }
    let per_gadget = match kind {
        EncodingKind::ExactCoverMff => rat(183, 10),
        _ => rat(9, 1),
    };
    let predicted_value = rat(3, 1)
        + per_gadget * Rational::from_integer(inst.sets.len() as i64)
        + Rational::from_integer(inst.universe.len() as i64);
    Ok(EncodedInstance { network, predicted_value, kind })
}

/// Glue network plus one FACTS gadget of size 3 per set. Optimum
/// `3 + 18.3|S| + |M|` iff an exact cover exists.
pub fn encode_exact_cover_mff(inst: &ExactCover3Instance) -> Result<EncodedInstance> {
    encode(inst, EncodingKind::ExactCoverMff)
}

/// As [`encode_exact_cover_mff`] with switching gadgets; threshold
/// `3 + 9|S| + |M|`.
pub fn encode_exact_cover_msf(inst: &ExactCover3Instance) -> Result<EncodedInstance> {
    encode(inst, EncodingKind::ExactCoverMsf)
}

/// Indices of the sets whose gadget is active (sends exactly 1 to each of
/// its elements) in an optimal solution. The result is an exact cover.
pub fn decode_exact_cover(inst: &ExactCover3Instance, kind: EncodingKind, sol: &Solution) -> Result<Vec<usize>> {
    if !matches!(kind, EncodingKind::ExactCoverMff | EncodingKind::ExactCoverMsf) {
        return Err(Error::InvalidInstance(format!("{kind} is not an exact cover encoding")));
    }
    let enc = encode(inst, kind)?;
    check_optimal(&enc, sol)?;
    let one = Rational::one();
    let chosen: Vec<usize> = (0..inst.sets.len())
        .filter(|&i| inst.sets[i].iter().all(|x| sol.flow_between(&port(i), &element(x)).is_some_and(|f| f == one)))
        .collect();
    if !inst.is_exact_cover(&chosen) {
        return Err(Error::DecodingFailed(format!("active sets {chosen:?} do not form an exact cover")));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_connected;

    fn figure_instance() -> ExactCover3Instance {
        ExactCover3Instance::new(
            ["a", "b", "c", "d", "e", "f"],
            vec![["a", "b", "c"], ["b", "c", "d"], ["d", "e", "f"]],
        )
        .unwrap()
    }

    #[test]
    fn sizes_and_thresholds() {
        let inst = figure_instance();
        let mff = encode_exact_cover_mff(&inst).unwrap();
        // glue: g, l, 6 elements, 3 ports; 5 more nodes per gadget
        assert_eq!(mff.network.node_count(), 11 + 3 * 5);
        assert_eq!(mff.network.edge_count(), 1 + 12 + 9 + 3 * 7);
        assert_eq!(mff.predicted_value, rat(639, 10));
        assert_eq!(mff.network.facts_edges().count(), 3);
        assert!(is_connected(&mff.network));

        let msf = encode_exact_cover_msf(&inst).unwrap();
        assert_eq!(msf.network.node_count(), 11 + 3 * 2);
        assert_eq!(msf.network.edge_count(), 1 + 12 + 9 + 3 * 3);
        assert_eq!(msf.predicted_value, rat(36, 1));
        assert!(msf.network.is_ldc());
    }

    #[test]
    fn empty_instance() {
        let inst = ExactCover3Instance::new(Vec::<String>::new(), vec![]).unwrap();
        let enc = encode_exact_cover_mff(&inst).unwrap();
        assert_eq!(enc.network.node_count(), 2);
        assert_eq!(enc.network.edge_count(), 1);
        assert_eq!(enc.predicted_value, rat(3, 1));
    }

    #[test]
    fn rejects_malformed_instances() {
        assert!(ExactCover3Instance::new(["a", "b", "c"], vec![["a", "b", "b"]]).is_err());
        assert!(ExactCover3Instance::new(["a", "b", "c"], vec![["a", "b", "z"]]).is_err());
        assert!(ExactCover3Instance::new(["a", "a", "c"], vec![]).is_err());
        assert!(ExactCover3Instance::new(["a", "b", "c"], vec![["a", "b", "c"], ["c", "b", "a"]]).is_err());
    }

    #[test]
    fn cover_check() {
        let inst = figure_instance();
        assert!(inst.is_exact_cover(&[0, 2]));
        assert!(!inst.is_exact_cover(&[0, 1, 2]));
        assert!(!inst.is_exact_cover(&[0]));
    }
}
