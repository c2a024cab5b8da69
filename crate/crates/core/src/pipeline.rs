//! End-to-end analysis of a commuting operator set.

use thiserror::Error;

use crate::diagonalize::{simultaneous_diagonalize, DiagonalizeError, DiagonalizedSet};
use crate::distribution::{DistributionError, KDistribution, MomentReport};
use crate::pauli::PauliString;
use crate::tableau::{StabilizerTableau, SupportDescriptor, TableauError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Diagonalize(#[from] DiagonalizeError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

/// Every intermediate of the analysis, kept so that each stage can be checked
/// independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub ops: Vec<PauliString>,
    pub diagonalized: DiagonalizedSet,
    pub tableau: StabilizerTableau,
    pub support: SupportDescriptor,
    pub distribution: KDistribution,
    pub moments: MomentReport,
}

impl Analysis {
    /// Diagonalizes `ops`, simulates `W|0…0⟩` on a tableau, and assembles the
    /// law of `K` with its moments.
    pub fn run(ops: &[PauliString]) -> Result<Self, PipelineError> {
        let diagonalized = simultaneous_diagonalize(ops)?;
        let tableau = StabilizerTableau::from_circuit(&diagonalized.circuit)?;
        let support = tableau.extract_support();
        let distribution = KDistribution::new(diagonalized.a.clone(), diagonalized.signs.clone(), support.clone())?;
        let moments = distribution.moments();
        Ok(Self { ops: ops.to_vec(), diagonalized, tableau, support, distribution, moments })
    }

    pub fn n(&self) -> usize {
        self.distribution.n()
    }

    pub fn num_ops(&self) -> usize {
        self.ops.len()
    }
}
