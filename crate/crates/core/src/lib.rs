//! Logarithmic time crystal in a two-mode boson system.
//!
//! The crate computes the exact spectrum of `H' = -S_x + (2 gamma / N) S_x^2`,
//! builds superpositions of quasi-degenerate ground levels whose overlap
//! oscillates with period `(pi / gamma) ln N`, relates the spectrum to the
//! mean-field phase space, and simulates the Hong-Ou-Mandel swap measurement
//! that reads `|<Psi(0)|Psi(t)>|^2` out of particle-number parities.

pub mod dynamics;
pub mod error;
pub mod hom;
mod linalg;
pub mod meanfield;
pub mod phasespace;
pub mod spectrum;
pub mod states;

pub use dynamics::{
    evolve_phase, extract_period, overlap_closed_form, overlap_exact, sz_correlation_brute,
    sz_correlation_closed_form, EnvelopeParams, OverlapSeries, SzCorrelator,
};
pub use error::{Error, Result};
pub use hom::{
    apply_hom, beamsplitter_table, compose, parity_distribution, sample_shots,
    swap_expectation_exact, BeamSplitterTable, CompositeState, EstimatorResult, MixedState,
    OutcomeTable, ParityShot,
};
pub use meanfield::{classical_energy, landscape_grid, minimum_locus, LandscapeGrid, PhasePoint};
pub use phasespace::{coherent_state, husimi, HusimiGrid};
pub use spectrum::{
    energy_level, floor_ground_index, gap_to_ground, ground_index, m1_index, m1_offset,
    neighbor_gap, quasi_ground_set, LevelIndex, LogBase, ModelParams, Spectrum,
};
pub use states::{
    double_gaussian_state, sx_eigenbasis, to_fock, to_sx, two_level_state, BasisTransform,
    FockBasisState, SxBasisState,
};
