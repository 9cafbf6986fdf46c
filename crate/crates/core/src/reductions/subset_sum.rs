use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{check_optimal, switched_edges, EncodedInstance, EncodingKind};
use crate::error::{Error, Result};
use crate::gadgets::{gfch, gsch, Polarity};
use crate::network::{sum, Edge, EdgeKey, Network, Node, NodeId, NodeRole, SwitchSet};
use crate::rational::{rat, Rational};
use crate::solution::Solution;

/// Distinct positive integers `M` and a target `w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetSumInstance {
    #[serde(rename = "M")]
    pub elements: Vec<u64>,
    pub w: u64,
}

impl SubsetSumInstance {
    pub fn new(elements: Vec<u64>, w: u64) -> Result<Self> {
        let inst = SubsetSumInstance { elements, w };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInstance(msg.to_string()));
        if self.elements.is_empty() {
            return bad("M must not be empty");
        }
        if self.w == 0 || self.elements.contains(&0) {
            return bad("w and the elements of M must be positive");
        }
        if self.elements.iter().collect::<BTreeSet<_>>().len() != self.elements.len() {
            return bad("elements of M must be distinct");
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.elements.iter().sum()
    }

    fn r(v: u64) -> Rational {
        Rational::from(v)
    }
}

fn v(i: usize) -> NodeId {
    NodeId::new(format!("v{}", i + 1))
}

fn gadget_prefix(i: usize) -> String {
    format!("X{}.", i + 1)
}

fn encode_cactus(inst: &SubsetSumInstance, kind: EncodingKind) -> Result<EncodedInstance> {
    inst.validate()?;
    let one = Rational::one();
    let w = SubsetSumInstance::r(inst.w);
    let (g, l) = (NodeId::new("g"), NodeId::new("l"));
    let mut nodes = vec![Node::new(g.clone(), NodeRole::Generator), Node::new(l.clone(), NodeRole::Load)];
    nodes.extend((0..inst.elements.len()).map(|i| Node::new(v(i), NodeRole::Plain)));
    let mut edges = vec![
        Edge::fixed(g.clone(), l.clone(), one.clone(), &w + rat(2, 1)),
        Edge::fixed(g, v(0), one.clone(), one.clone()),
        Edge::fixed(v(0), l, one.clone(), &w + &one),
    ];
    edges.extend((1..inst.elements.len()).map(|i| Edge::fixed(v(i - 1), v(i), one.clone(), w.clone())));
    let mut network = Network::try_new(nodes, edges)?;
    for (i, &x) in inst.elements.iter().enumerate() {
        let x = SubsetSumInstance::r(x);
        let gadget = match kind {
            EncodingKind::SubsetSumCactusMff => gfch(&x, &v(i), Polarity::Port, &gadget_prefix(i))?,
            _ => gsch(&x, &v(i), Polarity::Port, &gadget_prefix(i))?,
        };
        network = sum(&network, &gadget)?;
    }
    let per_unit = match kind {
        EncodingKind::SubsetSumCactusMff => rat(61, 10),
        _ => rat(3, 1),
    };
    let predicted_value = rat(3, 1) + w + per_unit * SubsetSumInstance::r(inst.total());
    Ok(EncodedInstance { network, predicted_value, kind })
}

/// Path of glue nodes `v1..vn` between `g` and `l`, one switching gadget of
/// size `x_i` at each `v_i`. The result is a cactus; optimum `3 + w + 3m`
/// (`m = Σ M`) iff some subset sums to `w`.
pub fn encode_subset_sum_cactus_msf(inst: &SubsetSumInstance) -> Result<EncodedInstance> {
    encode_cactus(inst, EncodingKind::SubsetSumCactusMsf)
}

/// As [`encode_subset_sum_cactus_msf`] with FACTS gadgets; threshold
/// `3 + w + 6.1m`.
pub fn encode_subset_sum_cactus_mff(inst: &SubsetSumInstance) -> Result<EncodedInstance> {
    encode_cactus(inst, EncodingKind::SubsetSumCactusMff)
}

/// Names used by the tree encoding. Elements of `M` sit at `a2..an` in the
/// order given, with `n = |M| + 1`.
struct Tree {
    n: usize,
    /// `Σ M - 1`
    m: Rational,
}

impl Tree {
    fn new(inst: &SubsetSumInstance) -> Self {
        Tree { n: inst.elements.len() + 1, m: SubsetSumInstance::r(inst.total()) - Rational::one() }
    }

    fn a(i: usize) -> NodeId {
        NodeId::new(format!("a{i}"))
    }

    fn l(i: usize) -> NodeId {
        NodeId::new(format!("l{i}"))
    }

    fn g(i: usize) -> NodeId {
        NodeId::new(format!("g{i}"))
    }

    fn spoke(i: usize) -> EdgeKey {
        EdgeKey::new("p", Tree::a(i))
    }
}

/// Two-level tree network: generator `g` feeds `p`, which feeds one branch
/// `a_i` per element; a chain `a1 - a2 - ... - a(n+1)` of weight `m` joins the
/// branches. Optimum `m + 2 + w` (with `m + 1 = Σ M`) iff some subset sums
/// to `w`.
///
/// The spoke `p - a_i` has susceptance `a_i / (i - 1)`: at the optimum the
/// angles are `θ(p) = 1` and `θ(a_i) = i`, and the spoke must carry exactly
/// `a_i`. When `m = 0` the chain has no capacity and is left out.
pub fn encode_subset_sum_tree(inst: &SubsetSumInstance) -> Result<EncodedInstance> {
    inst.validate()?;
    let t = Tree::new(inst);
    let n = t.n;
    let m = &t.m;
    let one = Rational::one();
    let two = rat(2, 1);
    let w = SubsetSumInstance::r(inst.w);
    let (g, p) = (NodeId::new("g"), NodeId::new("p"));

    let mut nodes = vec![
        Node::new(g.clone(), NodeRole::Generator),
        Node::new(Tree::g(1), NodeRole::Plain),
        Node::new(Tree::g(n + 1), NodeRole::Plain),
        Node::new(p.clone(), NodeRole::Plain),
    ];
    for i in 1..=n + 1 {
        nodes.push(Node::new(Tree::a(i), NodeRole::Plain));
        nodes.push(Node::new(Tree::l(i), NodeRole::Load));
    }
    let far = two.clone() / Rational::from(n as u64 + 1);
    let mut edges = vec![
        Edge::fixed(g.clone(), Tree::g(1), m * &two + &two, m + &one),
        Edge::fixed(Tree::g(1), Tree::a(1), m * &two + &two, m + &one),
        Edge::fixed(Tree::a(1), Tree::l(1), one.clone(), one.clone()),
        Edge::fixed(g.clone(), p.clone(), w.clone(), w),
        Edge::fixed(g, Tree::g(n + 1), far.clone(), one.clone()),
        Edge::fixed(Tree::g(n + 1), Tree::a(n + 1), far, one.clone()),
        Edge::fixed(Tree::a(n + 1), Tree::l(n + 1), one.clone(), m + &one),
    ];
    for (idx, &x) in inst.elements.iter().enumerate() {
        let i = idx + 2;
        let x = SubsetSumInstance::r(x);
        edges.push(Edge::fixed(p.clone(), Tree::a(i), &x / Rational::from(i as u64 - 1), x.clone()));
        edges.push(Edge::fixed(Tree::a(i), Tree::l(i), one.clone(), x));
    }
    if m.is_positive() {
        edges.extend((1..=n).map(|i| Edge::fixed(Tree::a(i), Tree::a(i + 1), m.clone(), m.clone())));
    }
    let network = Network::try_new(nodes, edges)?;
    let predicted_value = m + two + SubsetSumInstance::r(inst.w);
    Ok(EncodedInstance { network, predicted_value, kind: EncodingKind::SubsetSumTree })
}

/// The explicit optimal configuration of the tree encoding for a subset
/// `chosen` (indices into `M`) summing to `w`: switch off the spokes of the
/// unchosen elements and use the angles
/// `θ(g) = 0, θ(g1) = 1/2, θ(p) = 1, θ(g(n+1)) = (n+1)/2, θ(a_i) = i,
/// θ(l1) = 2, θ(l_i) = i + a_i` (chosen) or `i` (not chosen),
/// `θ(l(n+1)) = n + 2 + m`.
pub fn witness_tree(inst: &SubsetSumInstance, chosen: &[usize]) -> Result<(SwitchSet, Solution)> {
    let enc = encode_subset_sum_tree(inst)?;
    let chosen: BTreeSet<usize> = chosen.iter().copied().collect();
    if let Some(i) = chosen.iter().find(|&&i| i >= inst.elements.len()) {
        return Err(Error::NotACertificate(format!("index {i} is out of range")));
    }
    let total: u64 = chosen.iter().map(|&i| inst.elements[i]).sum();
    if total != inst.w {
        return Err(Error::NotACertificate(format!("chosen elements sum to {total}, not {}", inst.w)));
    }
    let t = Tree::new(inst);
    let n = t.n;
    let int = |k: usize| Rational::from(k as u64);
    let mut angle = BTreeMap::new();
    angle.insert(NodeId::new("g"), Rational::zero());
    angle.insert(Tree::g(1), rat(1, 2));
    angle.insert(NodeId::new("p"), Rational::one());
    angle.insert(Tree::g(n + 1), int(n + 1) / rat(2, 1));
    for i in 1..=n + 1 {
        angle.insert(Tree::a(i), int(i));
    }
    angle.insert(Tree::l(1), rat(2, 1));
    for (idx, &x) in inst.elements.iter().enumerate() {
        let i = idx + 2;
        let lift = if chosen.contains(&idx) { SubsetSumInstance::r(x) } else { Rational::zero() };
        angle.insert(Tree::l(i), int(i) + lift);
    }
    angle.insert(Tree::l(n + 1), int(n + 2) + &t.m);

    let switched: SwitchSet =
        (0..inst.elements.len()).filter(|idx| !chosen.contains(idx)).map(|idx| Tree::spoke(idx + 2)).collect();
    let sub = crate::network::subnetwork(&enc.network, &switched)?;
    let susceptance = sub.edges().iter().map(|e| (e.key().clone(), e.s_min.clone())).collect();
    Ok((switched, Solution::from_angles(&sub, &susceptance, &angle)))
}

/// Reads the chosen subset (indices into `M`) out of an optimal solution.
/// Cactus encodings: elements whose gadget pushes exactly `x_i` into the
/// glue. Tree encoding: elements whose spoke `p - a_i` is kept.
pub fn decode_subset_sum(inst: &SubsetSumInstance, kind: EncodingKind, sol: &Solution) -> Result<Vec<usize>> {
    let enc = match kind {
        EncodingKind::SubsetSumCactusMsf | EncodingKind::SubsetSumCactusMff => encode_cactus(inst, kind)?,
        EncodingKind::SubsetSumTree => encode_subset_sum_tree(inst)?,
        _ => return Err(Error::InvalidInstance(format!("{kind} is not a subset sum encoding"))),
    };
    check_optimal(&enc, sol)?;
    let chosen: Vec<usize> = match kind {
        EncodingKind::SubsetSumTree => {
            let switched = switched_edges(&enc.network, sol);
            (0..inst.elements.len()).filter(|&idx| !switched.contains(&Tree::spoke(idx + 2))).collect()
        }
        _ => (0..inst.elements.len())
            .filter(|&i| {
                let prefix = gadget_prefix(i);
                let port = v(i);
                let inflow: Rational = enc
                    .network
                    .edges()
                    .iter()
                    .filter_map(|e| e.key().other(&port).filter(|o| o.as_str().starts_with(&prefix)))
                    .filter_map(|o| sol.flow_between(o, &port))
                    .sum();
                inflow == SubsetSumInstance::r(inst.elements[i])
            })
            .collect(),
    };
    let total: u64 = chosen.iter().map(|&i| inst.elements[i]).sum();
    if total != inst.w {
        return Err(Error::DecodingFailed(format!("decoded elements {chosen:?} sum to {total}, not {}", inst.w)));
    }
    Ok(chosen)
}
