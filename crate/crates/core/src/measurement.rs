//! Post-selected von Neumann measurement with a projector-coupled pointer.
//!
//! The system couples to the pointer through `e^{−ig σx ⊗ |m⟩⟨m|}`. After
//! post-selection the pointer amplitude on level `m` is multiplied by the
//! modular value and every other level is untouched, up to an overall
//! normalization `δ`. [`final_pointer_analytic`] applies that rule directly;
//! [`final_pointer_oracle`] evolves the joint system–pointer state and
//! projects it, which is how the analytic rule is checked.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{kron, kron_vec, mat_exp, ComplexMatrix, ComplexScalar, ComplexVector, DEFAULT_EXP_TOL};
use crate::pointer::{PointerSpec, PointerState, DEFAULT_DIM, DEFAULT_LEAK_TOL};
use crate::qubit::{coupling_unitary, generalized_modular_factor, modular_value, sigma_x, SelectionConfig};

/// Post-selection probabilities below this are reported as failures.
pub const DEFAULT_PS_FLOOR: f64 = 1e-12;

/// Allowed disagreement between the closed-form joint unitary and its matrix
/// exponential.
pub const UNITARY_CROSS_CHECK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementConfig {
    pub sel: SelectionConfig,
    pub pointer: PointerSpec,
    /// Projector level.
    pub m: usize,
    pub dim: usize,
    pub leak_tol: f64,
    pub ps_floor: f64,
}

impl MeasurementConfig {
    pub fn new(sel: SelectionConfig, pointer: PointerSpec, m: usize, dim: usize) -> Self {
        Self {
            sel,
            pointer,
            m,
            dim,
            leak_tol: DEFAULT_LEAK_TOL,
            ps_floor: DEFAULT_PS_FLOOR,
        }
    }

    pub fn with_default_dim(sel: SelectionConfig, pointer: PointerSpec, m: usize) -> Self {
        Self::new(sel, pointer, m, DEFAULT_DIM)
    }

    pub fn with_leak_tol(mut self, leak_tol: f64) -> Self {
        self.leak_tol = leak_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m >= self.dim {
            return Err(Error::LevelOutOfRange {
                m: self.m,
                dim: self.dim,
            });
        }
        Ok(())
    }

    pub fn initial_pointer(&self) -> Result<PointerState> {
        self.validate()?;
        self.pointer.build(self.dim, self.leak_tol)
    }
}

/// Normalized pointer after a successful post-selection.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectedPointer {
    amplitudes: ComplexVector,
    delta: f64,
    ps_exact: f64,
    ps_paper: f64,
    modval: ComplexScalar,
    m: usize,
    truncation_leak: f64,
}

impl PostSelectedPointer {
    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `δ = [1 − |c_m|² + |c_m|²|(A)_mod|²]^{1/2}` for the untruncated pointer.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Probability of the post-selection succeeding for the full scheme,
    /// `cos²θ₁·δ²`.
    pub fn ps_exact(&self) -> f64 {
        self.ps_exact
    }

    /// `cos²θ₁`, the overlap of the system states alone.
    pub fn ps_paper(&self) -> f64 {
        self.ps_paper
    }

    pub fn modular_value(&self) -> ComplexScalar {
        self.modval
    }

    pub fn level(&self) -> usize {
        self.m
    }

    /// Leak of the initial pointer this state was built from.
    pub fn truncation_leak(&self) -> f64 {
        self.truncation_leak
    }
}

/// `δ` from the projector-level amplitude alone.
pub fn normalization_delta(c_m: ComplexScalar, modval: ComplexScalar) -> f64 {
    let p = c_m.norm_sqr();
    (1.0 - p + p * modval.norm_sqr()).sqrt()
}

/// Scale level `m` by the modular value and renormalize.
pub fn final_pointer_analytic(cfg: &MeasurementConfig) -> Result<PostSelectedPointer> {
    let initial = cfg.initial_pointer()?;
    let modval = modular_value(&cfg.sel)?;
    let scaled: ComplexVector = initial
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, &c)| c * generalized_modular_factor(n, cfg.m, modval))
        .collect();
    let truncated_norm = scaled.norm();
    if truncated_norm * truncated_norm < cfg.ps_floor {
        return Err(Error::DegeneratePostSelection);
    }
    let delta = normalization_delta(initial.amplitudes()[cfg.m], modval);
    let ps_paper = cfg.sel.ps_paper();
    Ok(PostSelectedPointer {
        amplitudes: scaled.scale(Complex64::new(truncated_norm.recip(), 0.0)),
        delta,
        ps_exact: ps_paper * truncated_norm * truncated_norm,
        ps_paper,
        modval,
        m: cfg.m,
        truncation_leak: initial.truncation_leak(),
    })
}

/// `I⊗I + (e^{−igσx} − I)⊗|m⟩⟨m|`, exact because `(σx⊗P)^k = σx^k⊗P`.
pub fn joint_unitary(g: f64, m: usize, dim: usize) -> Result<ComplexMatrix> {
    if m >= dim {
        return Err(Error::LevelOutOfRange { m, dim });
    }
    let projector = ComplexMatrix::outer(&ComplexVector::basis(dim, m), &ComplexVector::basis(dim, m));
    let rotation = &coupling_unitary(g)? - &ComplexMatrix::identity(2);
    Ok(&ComplexMatrix::identity(2 * dim) + &kron(&rotation, &projector))
}

/// `exp(−ig σx⊗|m⟩⟨m|)` by the general matrix exponential.
pub fn joint_unitary_by_exponential(g: f64, m: usize, dim: usize) -> Result<ComplexMatrix> {
    if m >= dim {
        return Err(Error::LevelOutOfRange { m, dim });
    }
    let projector = ComplexMatrix::outer(&ComplexVector::basis(dim, m), &ComplexVector::basis(dim, m));
    let generator = kron(&sigma_x(), &projector).scale(Complex64::new(0.0, -g));
    mat_exp(&generator, DEFAULT_EXP_TOL)
}

/// Evolve `|ψ_i⟩⊗|φ⟩` under the joint unitary and project onto `⟨ψ_f|`.
pub fn final_pointer_oracle(cfg: &MeasurementConfig) -> Result<PostSelectedPointer> {
    let initial = cfg.initial_pointer()?;
    let dim = cfg.dim;
    let unitary = joint_unitary(cfg.sel.g, cfg.m, dim)?;
    let by_exp = joint_unitary_by_exponential(cfg.sel.g, cfg.m, dim)?;
    let deviation = unitary.max_abs_diff(&by_exp);
    if deviation > UNITARY_CROSS_CHECK_TOL {
        return Err(Error::EvolutionMismatch { deviation });
    }

    let joint = kron_vec(&cfg.sel.pre_state().to_vector(), initial.amplitudes());
    let evolved = unitary.apply(&joint)?;

    // ⟨ψ_f| ⊗ I with ψ_f = (f_up, f_down)
    let post = cfg.sel.post_state();
    let projected: ComplexVector = (0..dim)
        .map(|n| post.up.conj() * evolved[n] + post.down.conj() * evolved[dim + n])
        .collect();
    let ps_exact = projected.norm_sqr();
    if ps_exact < cfg.ps_floor {
        return Err(Error::PostSelectionFailed {
            ps: ps_exact,
            floor: cfg.ps_floor,
        });
    }
    let modval = modular_value(&cfg.sel)?;
    Ok(PostSelectedPointer {
        amplitudes: projected.scale(Complex64::new(ps_exact.sqrt().recip(), 0.0)),
        delta: normalization_delta(initial.amplitudes()[cfg.m], modval),
        ps_exact,
        ps_paper: cfg.sel.ps_paper(),
        modval,
        m: cfg.m,
        truncation_leak: initial.truncation_leak(),
    })
}

/// `(ps_exact, ps_paper)` from the joint evolution.
pub fn post_selection_probability(cfg: &MeasurementConfig) -> Result<(f64, f64)> {
    let fin = final_pointer_oracle(cfg)?;
    Ok((fin.ps_exact, fin.ps_paper))
}

/// Largest amplitude difference after both vectors are phase-aligned.
pub fn phase_aligned_deviation(a: &ComplexVector, b: &ComplexVector) -> f64 {
    a.align_global_phase().max_abs_diff(&b.align_global_phase())
}
