//! First-quantized simulation of multiparticle interference on symmetric
//! multiports.
//!
//! The crate works in the mode-assignment basis: a ket `|k_1 … k_n⟩` records
//! which of the `d` modes each labeled particle occupies. On top of that it
//! provides
//!
//! - pure states and convex mixtures ([`PureState`], [`Ensemble`]), including
//!   the cyclic eigenstate families and the parastatistics representatives,
//! - permutations of particle labels and the indistinguishability measures
//!   built from their expectation values ([`perm`]),
//! - single-particle unitaries applied identically to every particle, with a
//!   brute-force evolution oracle, a grouped fast path, and particle-count
//!   statistics ([`multiport`]),
//! - the generalized suppression law on Fourier multiports: class partition of
//!   output count configurations and the operational indistinguishability
//!   measure recovered from class probabilities ([`suppression`]).
//!
//! The crate is `no_std` (alloc required); all types are immutable after
//! construction and all operations are pure functions, so values can be shared
//! freely across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod multiport;
pub mod perm;
pub mod states;
pub mod suppression;

pub use error::{Error, Result};
pub use multiport::{CountConfiguration, OutcomeDistribution, UnitaryMatrix};
pub use perm::Permutation;
pub use states::{Ensemble, ModeAssignment, PureState, State};
pub use suppression::{Classification, ClassProbabilities};

/// Complex amplitude type used throughout.
pub type Complex = num_complex::Complex64;
