//! Generator-choice networks. Each gadget hangs off a single port node `v`;
//! at optimum the port supplies either nothing or exactly `x` to the rest of
//! the network.
//!
//! Gadget-local nodes are named `<prefix>g`, `<prefix>l`, ... so several
//! gadgets can be summed without clashing; only the port is shared.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::{Edge, Network, Node, NodeId, NodeRole};
use crate::rational::{rat, Rational};

/// Role of the port node inside the gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Port is a load.
    Minus,
    /// Port is a generator.
    Plus,
    /// Port is a plain node, used when the gadget is glued into a network.
    Port,
}

impl Polarity {
    pub fn role(self) -> NodeRole {
        match self {
            Polarity::Minus => NodeRole::Load,
            Polarity::Plus => NodeRole::Generator,
            Polarity::Port => NodeRole::Plain,
        }
    }
}

impl FromStr for Polarity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(Polarity::Minus),
            "plus" => Ok(Polarity::Plus),
            "port" => Ok(Polarity::Port),
            _ => Err(Error::Parse(format!("unknown polarity {s:?}"))),
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Minus => "minus",
            Polarity::Plus => "plus",
            Polarity::Port => "port",
        })
    }
}

fn local(prefix: &str, name: &str) -> NodeId {
    NodeId::new(format!("{prefix}{name}"))
}

fn check_args(x: &Rational, port: &NodeId, locals: &[&NodeId]) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::NonpositiveX(x.clone()));
    }
    if locals.contains(&port) {
        return Err(Error::InvalidInstance(format!("port name {port} clashes with a gadget-internal node")));
    }
    Ok(())
}

/// Switching gadget: generator `g`, load `l`, port `v` with edges
/// `g–v (1, x)`, `g–l (1, 2x)`, `v–l (1, x)`.
pub fn gsch(x: &Rational, port: &NodeId, polarity: Polarity, prefix: &str) -> Result<Network> {
    let (g, l) = (local(prefix, "g"), local(prefix, "l"));
    check_args(x, port, &[&g, &l])?;
    let one = Rational::one();
    Network::try_new(
        vec![
            Node::new(g.clone(), NodeRole::Generator),
            Node::new(l.clone(), NodeRole::Load),
            Node::new(port.clone(), polarity.role()),
        ],
        vec![
            Edge::fixed(g.clone(), port.clone(), one.clone(), x.clone()),
            Edge::fixed(g, l.clone(), one.clone(), x * rat(2, 1)),
            Edge::fixed(port.clone(), l, one, x.clone()),
        ],
    )
}

/// FACTS gadget: generators `g, e, t`, load `l`, inner node `c`, port `v`.
/// The only adjustable edge is `e–v` with susceptance in `[0.4, 1.6]`.
pub fn gfch(x: &Rational, port: &NodeId, polarity: Polarity, prefix: &str) -> Result<Network> {
    let [g, e, t, l, c] = ["g", "e", "t", "l", "c"].map(|s| local(prefix, s));
    check_args(x, port, &[&g, &e, &t, &l, &c])?;
    let one = Rational::one();
    let fixed = |a: &NodeId, b: &NodeId, cap: Rational| Edge::fixed(a.clone(), b.clone(), one.clone(), x * cap);
    let v = port;
    Network::try_new(
        vec![
            Node::new(g.clone(), NodeRole::Generator),
            Node::new(e.clone(), NodeRole::Generator),
            Node::new(t.clone(), NodeRole::Generator),
            Node::new(l.clone(), NodeRole::Load),
            Node::new(c.clone(), NodeRole::Plain),
            Node::new(v.clone(), polarity.role()),
        ],
        vec![
            fixed(&g, v, rat(1, 1)),
            Edge::new(e.clone(), v.clone(), rat(2, 5), rat(8, 5), x * rat(2, 5)),
            fixed(&e, &c, rat(13, 20)),
            fixed(v, &c, rat(9, 10)),
            fixed(&t, &c, rat(1, 1)),
            fixed(&t, &l, rat(71, 20)),
            fixed(&c, &l, rat(51, 20)),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_cactus, max_degree};
    use crate::network::EdgeKey;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn cap(n: &Network, a: &str, b: &str) -> Rational {
        n.edge(&EdgeKey::new(a, b)).unwrap().cap.clone()
    }

    #[test]
    fn gsch_shape() {
        let n = gsch(&r(1), &"v".into(), Polarity::Minus, "").unwrap();
        assert_eq!(n.node_count(), 3);
        assert_eq!(n.edge_count(), 3);
        assert_eq!((cap(&n, "g", "v"), cap(&n, "g", "l"), cap(&n, "v", "l")), (r(1), r(2), r(1)));
        assert_eq!(n.role(&"v".into()), Some(NodeRole::Load));

        let n = gsch(&r(3), &"v".into(), Polarity::Port, "").unwrap();
        assert_eq!((cap(&n, "g", "v"), cap(&n, "g", "l"), cap(&n, "v", "l")), (r(3), r(6), r(3)));
        assert_eq!(n.role(&"v".into()), Some(NodeRole::Plain));
        assert!(n.is_ldc());
        assert_eq!(max_degree(&n), 2);
        assert!(is_cactus(&n));
    }

    #[test]
    fn gfch_shape() {
        let n = gfch(&r(1), &"v".into(), Polarity::Minus, "").unwrap();
        assert_eq!(n.node_count(), 6);
        assert_eq!(n.edge_count(), 7);
        assert_eq!(n.facts_edges().count(), 1);
        assert_eq!(n.generators().count(), 3);
        assert_eq!(max_degree(&n), 4);
        assert_eq!(n.degree(&"c".into()), 4);
        assert!(is_cactus(&n));

        let n = gfch(&r(3), &"v".into(), Polarity::Port, "").unwrap();
        let caps: Vec<Rational> = [("g", "v"), ("e", "v"), ("e", "c"), ("v", "c"), ("t", "c"), ("t", "l"), ("c", "l")]
            .iter()
            .map(|(a, b)| cap(&n, a, b))
            .collect();
        assert_eq!(caps, vec![r(3), rat(6, 5), rat(39, 20), rat(27, 10), r(3), rat(213, 20), rat(153, 20)]);
        let ev = n.edge(&EdgeKey::new("e", "v")).unwrap();
        assert_eq!((ev.s_min.clone(), ev.s_max.clone()), (rat(2, 5), rat(8, 5)));
    }

    #[test]
    fn prefixes_keep_gadgets_apart() {
        let a = gfch(&r(1), &"p".into(), Polarity::Port, "X0.").unwrap();
        let b = gfch(&r(2), &"q".into(), Polarity::Port, "X1.").unwrap();
        let s = crate::network::sum(&a, &b).unwrap();
        assert_eq!(s.node_count(), 12);
        assert!(s.contains_node(&"X1.c".into()));
    }

    #[test]
    fn bad_arguments() {
        assert!(matches!(gsch(&r(0), &"v".into(), Polarity::Minus, ""), Err(Error::NonpositiveX(_))));
        assert!(matches!(gfch(&r(-1), &"v".into(), Polarity::Minus, ""), Err(Error::NonpositiveX(_))));
        assert!(matches!(gsch(&r(1), &"g".into(), Polarity::Minus, ""), Err(Error::InvalidInstance(_))));
        assert!("sideways".parse::<Polarity>().is_err());
    }
}
