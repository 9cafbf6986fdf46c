use thiserror::Error;

use crate::network::{EdgeKey, NodeId};
use crate::rational::Rational;
use crate::solution::ValidationReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid network:\n{0}")]
    InvalidNetwork(ValidationReport),
    #[error("edge {0} is not part of the network")]
    UnknownEdge(EdgeKey),
    #[error("both networks carry an edge on {0}")]
    EdgeOverlap(EdgeKey),
    #[error("node {0} would be both a generator and a load")]
    RoleConflict(NodeId),
    #[error("edge {0} has an adjustable susceptance; a fixed-susceptance network is required")]
    NotFixedSusceptance(EdgeKey),
    #[error("network is not a tree")]
    NotATree,
    #[error("network has {edges} edges, more than the exhaustive limit of {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error("network has {count} FACTS edges, more than the limit of {limit}")]
    TooManyFactsEdges { count: usize, limit: usize },
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("gadget size must be positive, got {0}")]
    NonpositiveX(Rational),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("not a certificate: {0}")]
    NotACertificate(String),
    #[error("outcome value {value} is below the predicted value {predicted}")]
    NotOptimal { value: Rational, predicted: Rational },
    #[error("decoding failed: {0}")]
    DecodingFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
