//! Exact law of the spectral random vector of a parametric circuit built
//! from commuting Pauli rotations, and the frame potential derived from it.
//!
//! The pipeline is:
//!
//! 1. [`diagonalize`] finds a Clifford `W` with every `W H_j W†` diagonal and
//!    encodes the images as a binary matrix `A` plus signs.
//! 2. [`tableau`] simulates `W|0…0⟩` and extracts its support coset
//!    `{R z ⊕ t}`.
//! 3. [`distribution`] combines both into the law of `K` and its moments.
//! 4. [`lattice`] computes the increment-lattice covolume, the central-limit
//!    frame potential and the exact one by quadrature.
//!
//! [`oracle`] re-derives every stage with dense state vectors for small `n`.

pub mod diagonalize;
pub mod distribution;
pub mod gf2;
pub mod input;
pub mod lattice;
pub mod oracle;
pub mod pauli;
pub mod pipeline;
pub mod tableau;

pub use diagonalize::{simultaneous_diagonalize, verify_diagonalization, DiagonalizedSet};
pub use distribution::{build_distribution, KDistribution, MomentReport};
pub use gf2::{BitMatrix, BitVec};
pub use lattice::{FrameReport, LatticeVolume};
pub use pauli::{check_commuting_set, CliffordCircuit, CliffordGate, PauliString};
pub use pipeline::{Analysis, PipelineError};
pub use tableau::{StabilizerTableau, SupportDescriptor};
