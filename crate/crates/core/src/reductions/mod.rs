//! Encodings of combinatorial problems as flow networks, and decoders that
//! read a certificate back out of an optimal solution.
//!
//! Each encoder returns the network together with its threshold: the
//! optimum reaches `predicted_value` exactly when the instance is solvable.

mod exact_cover;
mod hamiltonian;
mod subset_sum;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{Network, SwitchSet};
use crate::rational::Rational;
use crate::solution::{total_generation, validate_with_switching, Solution};

pub use exact_cover::{decode_exact_cover, encode_exact_cover_mff, encode_exact_cover_msf, ExactCover3Instance};
pub use hamiltonian::{encode_hamiltonian, HamiltonianInstance};
pub use subset_sum::{
    decode_subset_sum, encode_subset_sum_cactus_mff, encode_subset_sum_cactus_msf, encode_subset_sum_tree,
    witness_tree, SubsetSumInstance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingKind {
    ExactCoverMff,
    ExactCoverMsf,
    Hamiltonian,
    SubsetSumCactusMsf,
    SubsetSumCactusMff,
    SubsetSumTree,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 6] = [
        EncodingKind::ExactCoverMff,
        EncodingKind::ExactCoverMsf,
        EncodingKind::Hamiltonian,
        EncodingKind::SubsetSumCactusMsf,
        EncodingKind::SubsetSumCactusMff,
        EncodingKind::SubsetSumTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::ExactCoverMff => "exact-cover-mff",
            EncodingKind::ExactCoverMsf => "exact-cover-msf",
            EncodingKind::Hamiltonian => "hamiltonian",
            EncodingKind::SubsetSumCactusMsf => "subset-sum-cactus-msf",
            EncodingKind::SubsetSumCactusMff => "subset-sum-cactus-mff",
            EncodingKind::SubsetSumTree => "subset-sum-tree",
        }
    }

    /// Whether the threshold refers to MFF (adjustable susceptances) rather
    /// than MSF.
    pub fn uses_facts(self) -> bool {
        matches!(self, EncodingKind::ExactCoverMff | EncodingKind::SubsetSumCactusMff)
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EncodingKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown encoding {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedInstance {
    pub network: Network,
    pub predicted_value: Rational,
    pub kind: EncodingKind,
}

/// Edges of `n` that `sol` says nothing about.
pub fn switched_edges(n: &Network, sol: &Solution) -> SwitchSet {
    validate_with_switching(n, sol).0
}

/// Checks that `sol` is a valid solution of `enc` (on the sub-network of the
/// edges it mentions) whose generation is exactly the predicted value.
pub(crate) fn check_optimal(enc: &EncodedInstance, sol: &Solution) -> Result<()> {
    let (switched, report) = validate_with_switching(&enc.network, sol);
    if enc.kind.uses_facts() && !switched.is_empty() {
        return Err(Error::DecodingFailed("edges cannot be switched off in a FACTS encoding".into()));
    }
    if !report.is_ok() {
        return Err(Error::DecodingFailed(format!("solution is not valid:\n{report}")));
    }
    let value = total_generation(sol);
    if value < enc.predicted_value {
        return Err(Error::NotOptimal { value, predicted: enc.predicted_value.clone() });
    }
    if value > enc.predicted_value {
        return Err(Error::DecodingFailed(format!(
            "generation {value} exceeds the predicted optimum {}",
            enc.predicted_value
        )));
    }
    Ok(())
}
