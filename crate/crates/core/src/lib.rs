//! Weak and modular value measurements with bosonic pointer states.
//!
//! A spin-1/2 system couples to a truncated Fock-space pointer through
//! `e^{−igσx⊗|m⟩⟨m|}`, is post-selected, and the pointer's photon statistics,
//! quadratures and signal-to-noise ratio are read off the final state.

pub mod error;
pub mod measurement;
pub mod numerics;
pub mod observables;
pub mod pointer;
pub mod qubit;
pub mod sweep;

pub use error::{Error, Result};
pub use measurement::{final_pointer_analytic, final_pointer_oracle, MeasurementConfig, PostSelectedPointer};
pub use numerics::{ComplexMatrix, ComplexScalar, ComplexVector};
pub use observables::{PsConvention, QuadratureSpec, SnrMode};
pub use pointer::{PointerSpec, PointerState};
pub use qubit::SelectionConfig;
pub use sweep::{Observable, Param, Params, ResultRow, SweepAxis, SweepSpec};
