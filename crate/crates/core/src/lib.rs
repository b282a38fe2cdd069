//! Spectral solver for the one-electron atom between two concentric
//! impenetrable walls, with the derived spectroscopic and information measures.

pub mod degeneracy;
pub mod eigen;
pub mod error;
pub mod hydrogen;
pub mod information;
pub mod metallicity;
pub mod parallel;
pub mod potentials;
pub mod quadrature;
pub mod response;
pub mod solver;
pub mod transitions;

pub use error::{Error, Result};
pub use potentials::{classify, ConfinementGeometry, OuterRadius, PotentialKind, PotentialModel, Regime};
pub use solver::{build_grid, solve_full, solve_radial, GridSpec, RadialSolution, Spectrum};
