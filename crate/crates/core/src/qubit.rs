//! The measured spin-1/2 system.
//!
//! The system is pre-selected in `cos θ₁|↑⟩ + e^{iφ₁} sin θ₁|↓⟩`, coupled
//! through `σx` and post-selected on `|↑⟩`. Weak and modular values are
//! computed from the 2×2 matrices; [`modular_from_weak`] gives the closed-form
//! relation between the two for idempotent and involutory observables.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{mat_exp, ComplexMatrix, ComplexScalar, ComplexVector, DEFAULT_EXP_TOL};

/// Overlaps smaller than this are treated as orthogonal pre/post selection.
pub const OVERLAP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub up: ComplexScalar,
    pub down: ComplexScalar,
}

impl QubitState {
    pub fn up() -> Self {
        Self {
            up: Complex64::new(1.0, 0.0),
            down: Complex64::new(0.0, 0.0),
        }
    }

    /// `cos θ₁|↑⟩ + e^{iφ₁} sin θ₁|↓⟩`.
    pub fn pre_selected(theta1: f64, phi1: f64) -> Self {
        Self {
            up: Complex64::new(theta1.cos(), 0.0),
            down: Complex64::from_polar(theta1.sin(), phi1),
        }
    }

    pub fn to_vector(self) -> ComplexVector {
        ComplexVector::new(vec![self.up, self.down])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> ComplexScalar {
        self.up.conj() * other.up + self.down.conj() * other.down
    }
}

/// Observable classes for which the modular value has a closed form in the
/// weak value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    /// `A² = A`
    Idempotent,
    /// `A² = I`
    Involutory,
}

/// Pre-selection angles and coupling strength. Post-selection is always `|↑⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionConfig {
    pub theta1: f64,
    pub phi1: f64,
    pub g: f64,
}

impl SelectionConfig {
    pub fn new(theta1: f64, phi1: f64, g: f64) -> Self {
        Self { theta1, phi1, g }
    }

    /// Configuration with `g = φ₁ = π/2` whose modular value equals the
    /// requested real number: there `(σx)_mod = tan θ₁`.
    pub fn for_modular_value(modval: f64) -> Self {
        Self {
            theta1: modval.atan(),
            phi1: FRAC_PI_2,
            g: FRAC_PI_2,
        }
    }

    pub fn pre_state(&self) -> QubitState {
        QubitState::pre_selected(self.theta1, self.phi1)
    }

    pub fn post_state(&self) -> QubitState {
        QubitState::up()
    }

    /// `⟨ψ_f|ψ_i⟩`, which is `cos θ₁`.
    pub fn overlap(&self) -> ComplexScalar {
        self.post_state().overlap(&self.pre_state())
    }

    fn checked_overlap(&self) -> Result<ComplexScalar> {
        let overlap = self.overlap();
        if overlap.norm() < OVERLAP_FLOOR {
            return Err(Error::OrthogonalSelection {
                overlap: overlap.norm(),
            });
        }
        Ok(overlap)
    }

    /// Post-selection probability `|⟨ψ_f|ψ_i⟩|² = cos²θ₁`, ignoring the pointer.
    pub fn ps_paper(&self) -> f64 {
        self.overlap().norm_sqr()
    }
}

pub fn sigma_x() -> ComplexMatrix {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    ComplexMatrix::from_rows(2, 2, vec![zero, one, one, zero]).expect("2x2")
}

/// `⟨ψ_f|op|ψ_i⟩ / ⟨ψ_f|ψ_i⟩`.
fn ratio(sel: &SelectionConfig, op: &ComplexMatrix) -> Result<ComplexScalar> {
    let overlap = sel.checked_overlap()?;
    let image = op.apply(&sel.pre_state().to_vector())?;
    let post = sel.post_state().to_vector();
    Ok(post.inner(&image)? / overlap)
}

/// Weak value of `σx`; analytically `e^{iφ₁} tan θ₁`.
pub fn weak_value(sel: &SelectionConfig) -> Result<ComplexScalar> {
    ratio(sel, &sigma_x())
}

/// `exp(−i g σx)` by the general matrix exponential.
pub fn coupling_unitary(g: f64) -> Result<ComplexMatrix> {
    mat_exp(&sigma_x().scale(Complex64::new(0.0, -g)), DEFAULT_EXP_TOL)
}

/// Modular value `⟨ψ_f|e^{−igσx}|ψ_i⟩/⟨ψ_f|ψ_i⟩`.
pub fn modular_value(sel: &SelectionConfig) -> Result<ComplexScalar> {
    ratio(sel, &coupling_unitary(sel.g)?)
}

pub fn modular_from_weak(weak: ComplexScalar, g: f64, kind: ObservableKind) -> ComplexScalar {
    match kind {
        ObservableKind::Idempotent => 1.0 - weak + Complex64::from_polar(1.0, -g) * weak,
        ObservableKind::Involutory => Complex64::new(g.cos(), 0.0) - Complex64::new(0.0, g.sin()) * weak,
    }
}

/// Per-level factor applied to pointer amplitude `n` when the coupling acts
/// through `|m⟩⟨m|`: the modular value on level `m`, one elsewhere.
pub fn generalized_modular_factor(n: usize, m: usize, modval: ComplexScalar) -> ComplexScalar {
    if n == m {
        modval
    } else {
        Complex64::new(1.0, 0.0)
    }
}
