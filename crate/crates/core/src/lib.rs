//! Maximum potential, switching and FACTS flow of linear DC power networks.
//!
//! All arithmetic is exact ([`Rational`]). The crate provides the network
//! model and certificate checker, an exact simplex, the three flow solvers,
//! the generator-choice gadgets, and encoders/decoders that map subset sum,
//! exact cover by 3-sets and Hamiltonian path instances onto networks.

pub mod classify;
pub mod error;
pub mod gadgets;
pub mod io;
pub mod lp;
pub mod maxflow;
pub mod mff;
pub mod mpf;
pub mod msf;
pub mod network;
pub mod rational;
pub mod reductions;
pub mod solution;

pub use error::{Error, Result};
pub use maxflow::classical_max_flow;
pub use network::{subnetwork, sum, validate_network, Edge, EdgeKey, Network, Node, NodeId, NodeRole, SwitchSet};
pub use rational::{rat, Rational};
pub use solution::{
    total_generation, validate_solution, validate_with_switching, Solution, ValidationReport, Violation, ViolationKind,
};
