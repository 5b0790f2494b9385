//! Pointer states of a single bosonic mode in a truncated Fock basis.
//!
//! Three families are supported: coherent, displaced squeezed and two-component
//! cat states, plus arbitrary user-supplied amplitudes. Coefficients are built
//! from ratio recurrences so no factorial is ever formed. Nothing is
//! renormalized after truncation: the probability mass that falls above the
//! cutoff is reported as `truncation_leak` and checked against a tolerance.
//!
//! The ladder-operator helpers ([`displacement_op`], [`squeeze_op`]) build the
//! same states from their operator definitions and serve as an independent
//! cross-check of the closed-form coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{mat_exp, ComplexMatrix, ComplexScalar, ComplexVector, DEFAULT_EXP_TOL};

/// Default Fock cutoff.
pub const DEFAULT_DIM: usize = 64;

/// Largest probability mass allowed above the cutoff by default.
pub const DEFAULT_LEAK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum PointerSpec {
    /// Coherent state with amplitude `gamma·e^{i·phi}`.
    Coherent {
        gamma: f64,
        phi: f64,
    },
    /// `D(alpha)·S(r·e^{i·theta_sq})|0⟩`.
    Squeezed {
        alpha: ComplexScalar,
        r: f64,
        theta_sq: f64,
    },
    /// Normalized `|alpha⟩ + e^{i·phi_cat}|−alpha⟩`.
    Cat {
        alpha: ComplexScalar,
        phi_cat: f64,
    },
    Custom(ComplexVector),
}

impl PointerSpec {
    /// Short family name used in reports and CSV output.
    pub fn family(&self) -> &'static str {
        match self {
            PointerSpec::Coherent { .. } => "coherent",
            PointerSpec::Squeezed { .. } => "squeezed",
            PointerSpec::Cat { .. } => "cat",
            PointerSpec::Custom(_) => "custom",
        }
    }

    pub fn build(&self, dim: usize, leak_tol: f64) -> Result<PointerState> {
        match self {
            PointerSpec::Coherent { gamma, phi } => coherent_state_with_tol(*gamma, *phi, dim, leak_tol),
            PointerSpec::Squeezed { alpha, r, theta_sq } => {
                squeezed_state_with_tol(*alpha, *r, *theta_sq, dim, leak_tol)
            }
            PointerSpec::Cat { alpha, phi_cat } => cat_state_with_tol(*alpha, *phi_cat, dim, leak_tol),
            PointerSpec::Custom(amps) => custom_state(amps.clone(), dim, leak_tol),
        }
    }
}

/// Truncated amplitude vector together with the recipe that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerState {
    amplitudes: ComplexVector,
    spec: PointerSpec,
    truncation_leak: f64,
}

impl PointerState {
    fn from_amplitudes(amplitudes: ComplexVector, spec: PointerSpec, leak_tol: f64) -> Result<Self> {
        let norm = amplitudes.norm_sqr();
        let leak = 1.0 - norm;
        let dim = amplitudes.dim();
        if leak > leak_tol || !leak.is_finite() {
            return Err(Error::TruncationLeak {
                leak,
                tol: leak_tol,
                dim,
            });
        }
        if norm > 1.0 + leak_tol {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("squared norm {norm} exceeds one"),
            });
        }
        Ok(Self {
            amplitudes,
            spec,
            truncation_leak: leak.max(0.0),
        })
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn spec(&self) -> &PointerSpec {
        &self.spec
    }

    /// Probability mass of the ideal state above the cutoff.
    pub fn truncation_leak(&self) -> f64 {
        self.truncation_leak
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: "must be at least 1".into(),
        });
    }
    Ok(())
}

fn check_finite(name: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite, got {x}"),
        });
    }
    Ok(())
}

/// `e^{-|α|²/2} αⁿ/√(n!)` for `n < dim`, by `cₙ = c_{n-1}·α/√n`.
fn coherent_amplitudes(alpha: ComplexScalar, dim: usize) -> ComplexVector {
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    ComplexVector::new(amps)
}

pub fn coherent_state(gamma: f64, phi: f64, dim: usize) -> Result<PointerState> {
    coherent_state_with_tol(gamma, phi, dim, DEFAULT_LEAK_TOL)
}

pub fn coherent_state_with_tol(gamma: f64, phi: f64, dim: usize, leak_tol: f64) -> Result<PointerState> {
    check_dim(dim)?;
    check_finite("phi", phi)?;
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: format!("must be a finite non-negative number, got {gamma}"),
        });
    }
    let alpha = Complex64::from_polar(gamma, phi);
    PointerState::from_amplitudes(
        coherent_amplitudes(alpha, dim),
        PointerSpec::Coherent { gamma, phi },
        leak_tol,
    )
}

pub fn squeezed_state(alpha: ComplexScalar, r: f64, theta_sq: f64, dim: usize) -> Result<PointerState> {
    squeezed_state_with_tol(alpha, r, theta_sq, dim, DEFAULT_LEAK_TOL)
}

/// Displaced squeezed state `D(α)S(ξ)|0⟩`, `ξ = r·e^{iθ}`.
///
/// The Hermite form
///
/// ```text
/// βₙ = (cosh r)^{-1/2} exp[-|α|²/2 - α*² e^{iθ} tanh r / 2]
///      · (e^{iθ} tanh r / 2)^{n/2} / √(n!) · Hₙ(γ (e^{iθ} sinh 2r)^{-1/2}),
/// γ  = α cosh r + α* e^{iθ} sinh r
/// ```
///
/// is evaluated through the scaled sequence `hₙ = uⁿ Hₙ(z)/√(n!)`, whose
/// Hermite recurrence reduces to
/// `h_{n+1} = (γ/cosh r · hₙ − √n e^{iθ} tanh r · h_{n−1}) / √(n+1)`.
/// `r = 0` is delegated to the coherent constructor.
pub fn squeezed_state_with_tol(
    alpha: ComplexScalar,
    r: f64,
    theta_sq: f64,
    dim: usize,
    leak_tol: f64,
) -> Result<PointerState> {
    check_dim(dim)?;
    check_finite("theta_sq", theta_sq)?;
    check_finite("alpha", alpha.re)?;
    check_finite("alpha", alpha.im)?;
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("must be a finite non-negative number, got {r}"),
        });
    }
    let spec = PointerSpec::Squeezed { alpha, r, theta_sq };
    if r == 0.0 {
        let coherent = coherent_state_with_tol(alpha.norm(), alpha.arg(), dim, leak_tol)?;
        return Ok(PointerState { spec, ..coherent });
    }

    let phase = Complex64::from_polar(1.0, theta_sq);
    let (ch, th) = (r.cosh(), r.tanh());
    let gamma = alpha * ch + alpha.conj() * phase * r.sinh();
    let lead = gamma / ch;
    let lag = phase * th;

    let prefactor = (-0.5 * alpha.norm_sqr() - 0.5 * alpha.conj() * alpha.conj() * phase * th).exp() / ch.sqrt();
    let mut amps = Vec::with_capacity(dim);
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for n in 0..dim {
        amps.push(prefactor * cur);
        let nf = n as f64;
        let next = (lead * cur - lag * nf.sqrt() * prev) / (nf + 1.0).sqrt();
        prev = cur;
        cur = next;
    }
    PointerState::from_amplitudes(ComplexVector::new(amps), spec, leak_tol)
}

// below this the two cat components cancel to rounding noise
const CAT_NORM_FLOOR: f64 = 1e-24;

pub fn cat_state(alpha: ComplexScalar, phi_cat: f64, dim: usize) -> Result<PointerState> {
    cat_state_with_tol(alpha, phi_cat, dim, DEFAULT_LEAK_TOL)
}

/// Cat normalization `2 + 2e^{-2|α|²} cos φ`, rearranged to stay accurate
/// near the odd cat with small `|α|`.
pub fn cat_normalization(alpha: ComplexScalar, phi_cat: f64) -> f64 {
    let half = 0.5 * phi_cat;
    4.0 * half.cos().powi(2) + 2.0 * phi_cat.cos() * (-2.0 * alpha.norm_sqr()).exp_m1()
}

/// Unnormalized cat coefficients `e^{-|α|²/2} αⁿ/√(n!) (1 + e^{iφ}(−1)ⁿ)`.
pub fn cat_coefficients(alpha: ComplexScalar, phi_cat: f64, dim: usize) -> ComplexVector {
    // 1 ± e^{iφ} in half-angle form
    let half = Complex64::from_polar(2.0, 0.5 * phi_cat);
    let even = half * (0.5 * phi_cat).cos();
    let odd = half * Complex64::new(0.0, -(0.5 * phi_cat).sin());
    coherent_amplitudes(alpha, dim)
        .iter()
        .enumerate()
        .map(|(n, &c)| c * if n % 2 == 0 { even } else { odd })
        .collect()
}

pub fn cat_state_with_tol(alpha: ComplexScalar, phi_cat: f64, dim: usize, leak_tol: f64) -> Result<PointerState> {
    check_dim(dim)?;
    check_finite("phi_cat", phi_cat)?;
    check_finite("alpha", alpha.re)?;
    check_finite("alpha", alpha.im)?;
    let norm = cat_normalization(alpha, phi_cat);
    if norm.is_nan() || norm <= CAT_NORM_FLOOR {
        return Err(Error::DegenerateCat);
    }
    let amps = cat_coefficients(alpha, phi_cat, dim).scale(Complex64::new(norm.sqrt().recip(), 0.0));
    PointerState::from_amplitudes(amps, PointerSpec::Cat { alpha, phi_cat }, leak_tol)
}

/// Fock state `|k⟩` truncated at `dim`.
pub fn fock_state(k: usize, dim: usize) -> Result<PointerState> {
    if k >= dim {
        return Err(Error::LevelOutOfRange { m: k, dim });
    }
    custom_state(ComplexVector::basis(dim, k), dim, DEFAULT_LEAK_TOL)
}

/// Wrap caller-supplied amplitudes, zero-padding them up to `dim`.
pub fn custom_state(amplitudes: ComplexVector, dim: usize, leak_tol: f64) -> Result<PointerState> {
    check_dim(dim)?;
    if amplitudes.dim() > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: amplitudes.dim(),
        });
    }
    let mut padded = amplitudes.clone().into_inner();
    padded.resize(dim, Complex64::new(0.0, 0.0));
    PointerState::from_amplitudes(ComplexVector::new(padded), PointerSpec::Custom(amplitudes), leak_tol)
}

/// Annihilation operator `a` with `a|n⟩ = √n |n−1⟩`.
pub fn annihilation_op(dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn creation_op(dim: usize) -> ComplexMatrix {
    annihilation_op(dim).adjoint()
}

/// `D(α) = exp(α a† − α* a)` at cutoff `dim`.
pub fn displacement_op(alpha: ComplexScalar, dim: usize) -> Result<ComplexMatrix> {
    let a = annihilation_op(dim);
    let generator = &creation_op(dim).scale(alpha) - &a.scale(alpha.conj());
    mat_exp(&generator, DEFAULT_EXP_TOL)
}

/// `S(ξ) = exp((ξ* a² − ξ a†²)/2)`, `ξ = r·e^{iθ}`, at cutoff `dim`.
pub fn squeeze_op(r: f64, theta_sq: f64, dim: usize) -> Result<ComplexMatrix> {
    let xi = Complex64::from_polar(r, theta_sq);
    let a = annihilation_op(dim);
    let ad = creation_op(dim);
    let a2 = a.matmul(&a)?;
    let ad2 = ad.matmul(&ad)?;
    let generator = (&a2.scale(xi.conj()) - &ad2.scale(xi)).scale(Complex64::new(0.5, 0.0));
    mat_exp(&generator, DEFAULT_EXP_TOL)
}

/// `D(α)S(ξ)|0⟩` from the operator definitions, restricted to the first
/// `dim` levels.
///
/// The operators are exponentiated at twice the requested cutoff; exponentials
/// of truncated generators are only accurate well below their own cutoff.
pub fn displaced_squeezed_vacuum(alpha: ComplexScalar, r: f64, theta_sq: f64, dim: usize) -> Result<ComplexVector> {
    let padded = 2 * dim.max(1);
    let d = displacement_op(alpha, padded)?;
    let s = squeeze_op(r, theta_sq, padded)?;
    let full = d.apply(&s.column(0))?;
    Ok(full.iter().take(dim).copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_coherent_state() {
        let s = coherent_state(0.0, 0.3, 8).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes().iter().skip(1).all(|a| *a == c(0.0, 0.0)));
        assert_eq!(s.truncation_leak(), 0.0);
    }

    #[test]
    fn coherent_ground_amplitude_and_norm() {
        let s = coherent_state(2.0, 0.0, 64).unwrap();
        assert!((s.amplitudes()[0].re - (-2.0f64).exp()).abs() < 1e-15);
        assert!((s.amplitudes()[0].re - 0.135335).abs() < 1e-6);
        assert!((s.amplitudes().norm_sqr() - 1.0).abs() < 1e-10);
        assert!((s.truncation_leak() - (1.0 - s.amplitudes().norm_sqr())).abs() < 1e-12);
    }

    #[test]
    fn coherent_rejects_small_cutoff_and_negative_gamma() {
        assert!(matches!(coherent_state(3.0, 0.0, 8), Err(Error::TruncationLeak { .. })));
        assert!(coherent_state(-1.0, 0.0, 8).is_err());
        assert!(coherent_state(1.0, 0.0, 0).is_err());
    }

    #[test]
    fn coherent_photon_statistics_are_poisson() {
        let gamma = 1.7f64;
        let s = coherent_state(gamma, 0.4, 64).unwrap();
        let mean = gamma * gamma;
        let mut log_fact = 0.0;
        for n in 0..40 {
            if n > 0 {
                log_fact += (n as f64).ln();
            }
            let poisson = (-mean + n as f64 * mean.ln() - log_fact).exp();
            let p = s.amplitudes()[n].norm_sqr();
            assert!((p - poisson).abs() <= 1e-10 * poisson, "n={n}: {p} vs {poisson}");
        }
    }

    #[test]
    fn zero_squeezing_is_coherent() {
        let alpha = c(0.8, -0.6);
        let sq = squeezed_state(alpha, 0.0, 0.7, 32).unwrap();
        let coh = coherent_state(alpha.norm(), alpha.arg(), 32).unwrap();
        assert!(sq.amplitudes().max_abs_diff(coh.amplitudes()) < 1e-10);
        assert!(matches!(sq.spec(), PointerSpec::Squeezed { .. }));
    }

    #[test]
    fn squeezed_vacuum_has_even_support() {
        let s = squeezed_state(c(0.0, 0.0), 0.5, 0.0, 64).unwrap();
        for k in 0..32 {
            assert_eq!(s.amplitudes()[2 * k + 1], c(0.0, 0.0));
        }
        assert!((s.amplitudes()[0].re - 0.5f64.cosh().powf(-0.5)).abs() < 1e-15);
    }

    /// Direct transcription of the Hermite expression with explicit powers,
    /// square roots and factorials; fine for small n.
    fn squeezed_by_hermite(alpha: Complex64, r: f64, theta: f64, n: usize) -> Complex64 {
        let e = Complex64::from_polar(1.0, theta);
        let gamma = alpha * r.cosh() + alpha.conj() * e * r.sinh();
        let pre = (-0.5 * alpha.norm_sqr() - 0.5 * alpha.conj().powu(2) * e * r.tanh()).exp() / r.cosh().sqrt();
        let root = e.sqrt();
        let u = root * (0.5 * r.tanh()).sqrt();
        let z = gamma / (root * (2.0 * r).sinh().sqrt());
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        pre * u.powu(n as u32) / fact.sqrt() * crate::numerics::hermite(n, z)
    }

    #[test]
    fn squeezed_recurrence_matches_hermite_expression() {
        for &(alpha, r, theta) in &[
            (c(1.0, 0.0), 0.5, 0.0),
            (c(0.3, -1.1), 0.9, 2.0),
            (c(-0.7, 0.2), 0.2, -2.5),
            (c(0.0, 1.0), 1.0, 4.0),
        ] {
            let s = squeezed_state_with_tol(alpha, r, theta, 64, 1e-7).unwrap();
            for n in 0..25 {
                let direct = squeezed_by_hermite(alpha, r, theta, n);
                let diff = (s.amplitudes()[n] - direct).norm();
                assert!(diff < 1e-12, "alpha={alpha} r={r} theta={theta} n={n}: {diff}");
            }
        }
    }

    #[test]
    fn squeezed_matches_operator_construction() {
        let dim = 64;
        let alpha = c(1.0, 0.0);
        let s = squeezed_state(alpha, 0.5, 0.0, dim).unwrap();
        let d = displacement_op(alpha, dim).unwrap();
        let sq = squeeze_op(0.5, 0.0, dim).unwrap();
        let direct = d.matmul(&sq).unwrap().column(0);
        assert!(s.amplitudes().max_abs_diff(&direct) < 1e-8);
        let padded = displaced_squeezed_vacuum(alpha, 0.5, 0.0, dim).unwrap();
        assert!(s.amplitudes().max_abs_diff(&padded) < 1e-12);
    }

    #[test]
    fn cat_parity() {
        let odd = cat_state(c(1.2, 0.3), PI, 64).unwrap();
        let even = cat_state(c(1.2, 0.3), 0.0, 64).unwrap();
        for n in 0..32 {
            assert!(odd.amplitudes()[2 * n].norm() < 1e-14);
            assert!(even.amplitudes()[2 * n + 1].norm() < 1e-14);
        }
    }

    #[test]
    fn cat_limits_and_normalization() {
        let vac = cat_state(c(0.0, 0.0), 0.0, 8).unwrap();
        assert!((vac.amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(cat_state(c(0.0, 0.0), PI, 8), Err(Error::DegenerateCat)));

        let s = cat_state(c(1.0, 0.0), FRAC_PI_3, 64).unwrap();
        assert!((s.amplitudes().norm_sqr() - 1.0).abs() < 1e-10);

        // a tiny odd cat is essentially |1⟩
        let tiny = cat_state(c(1e-6, 0.0), PI, 8).unwrap();
        assert!((tiny.amplitudes()[1].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cat_normalization_matches_textbook_form() {
        for &(a, phi) in &[(0.2, 0.0), (1.0, FRAC_PI_3), (2.0, 2.0), (0.5, PI)] {
            let alpha = c(a, 0.0);
            let naive = 2.0 + 2.0 * (-2.0 * a * a).exp() * f64::cos(phi);
            assert!((cat_normalization(alpha, phi) - naive).abs() < 1e-14);
        }
    }

    #[test]
    fn operators_at_zero_are_identity() {
        assert!(
            displacement_op(c(0.0, 0.0), 6)
                .unwrap()
                .max_abs_diff(&ComplexMatrix::identity(6))
                == 0.0
        );
        assert!(
            squeeze_op(0.0, 0.0, 6)
                .unwrap()
                .max_abs_diff(&ComplexMatrix::identity(6))
                == 0.0
        );
    }

    #[test]
    fn displacement_reproduces_coherent_state() {
        let d = displacement_op(c(2.0, 0.0), 64).unwrap();
        let s = coherent_state(2.0, 0.0, 64).unwrap();
        assert!(d.column(0).max_abs_diff(s.amplitudes()) < 1e-8);
    }

    #[test]
    fn custom_state_pads_and_validates() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = custom_state(ComplexVector::from_real(&[h, h]), 4, DEFAULT_LEAK_TOL).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(custom_state(ComplexVector::from_real(&[1.0, 1.0]), 4, DEFAULT_LEAK_TOL).is_err());
        assert!(custom_state(ComplexVector::from_real(&[0.5]), 4, DEFAULT_LEAK_TOL).is_err());
        assert!(custom_state(ComplexVector::from_real(&[1.0, 0.0, 0.0]), 2, DEFAULT_LEAK_TOL).is_err());
        assert!(fock_state(3, 3).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn squeezed_agrees_with_displaced_squeezed_vacuum(
            mag in 0.0..1.5f64, arg in -PI..PI, r in 0.0..1.0f64, theta in -PI..PI,
        ) {
            // r = 1 needs more than 64 levels to keep the leak below 1e-10
            let dim = 96;
            let alpha = Complex64::from_polar(mag, arg);
            let s = squeezed_state(alpha, r, theta, dim).unwrap();
            let oracle = displaced_squeezed_vacuum(alpha, r, theta, dim).unwrap();
            let dev = s.amplitudes().max_abs_diff(&oracle);
            prop_assert!(dev < 1e-8, "deviation {dev}");
        }

        #[test]
        fn cat_phase_zero_is_even_phase_pi_is_odd(mag in 0.05..2.0f64, arg in -PI..PI) {
            let alpha = Complex64::from_polar(mag, arg);
            let even = cat_state(alpha, 0.0, 64).unwrap();
            let odd = cat_state(alpha, PI, 64).unwrap();
            for n in 0..32 {
                prop_assert!(even.amplitudes()[2 * n + 1].norm() < 1e-15);
                prop_assert!(odd.amplitudes()[2 * n].norm() < 1e-14);
            }
        }
    }
}
