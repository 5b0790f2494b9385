//! Photon-number statistics, quadrature moments and signal-to-noise ratio.
//!
//! All quantities are computed from Fock amplitudes through ladder-operator
//! matrix elements; nothing here assumes a particular pointer family.

pub mod closed_forms;

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measurement::PostSelectedPointer;
use crate::numerics::{ComplexMatrix, ComplexVector};
use crate::pointer::{annihilation_op, creation_op, PointerState};

/// Mean photon numbers at or below this are treated as vacuum.
const VACUUM_MEAN_FLOOR: f64 = 1e-14;

/// Anything that can be read as amplitudes on `|0⟩, |1⟩, …`.
pub trait FockAmplitudes {
    fn fock_amplitudes(&self) -> &[Complex64];
}

impl FockAmplitudes for ComplexVector {
    fn fock_amplitudes(&self) -> &[Complex64] {
        self.as_slice()
    }
}

impl FockAmplitudes for PointerState {
    fn fock_amplitudes(&self) -> &[Complex64] {
        self.amplitudes().as_slice()
    }
}

impl FockAmplitudes for PostSelectedPointer {
    fn fock_amplitudes(&self) -> &[Complex64] {
        self.amplitudes().as_slice()
    }
}

/// Quadrature `X_θ = (a e^{−iθ} + a† e^{iθ})/√2`; `θ = 0` is the x direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub theta: f64,
}

impl QuadratureSpec {
    pub fn new(theta: f64) -> Self {
        Self { theta }
    }

    pub fn x() -> Self {
        Self { theta: 0.0 }
    }
}

/// What the SNR numerator measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrMode {
    /// `⟨X⟩_f`
    FinalMean,
    /// `⟨X⟩_f − ⟨X⟩_i`
    #[default]
    ShiftFromInitial,
}

impl SnrMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SnrMode::FinalMean => "final",
            SnrMode::ShiftFromInitial => "shift",
        }
    }
}

impl fmt::Display for SnrMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SnrMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "final" => Ok(SnrMode::FinalMean),
            "shift" => Ok(SnrMode::ShiftFromInitial),
            other => Err(Error::InvalidParameter {
                name: "snr_mode",
                reason: format!("expected `final` or `shift`, got `{other}`"),
            }),
        }
    }
}

/// Which post-selection probability enters the SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsConvention {
    /// `cos²θ₁·δ²`, the success probability of the full scheme.
    Exact,
    /// `cos²θ₁`.
    #[default]
    Paper,
}

impl PsConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            PsConvention::Exact => "exact",
            PsConvention::Paper => "paper",
        }
    }

    pub fn select(self, fin: &PostSelectedPointer) -> f64 {
        match self {
            PsConvention::Exact => fin.ps_exact(),
            PsConvention::Paper => fin.ps_paper(),
        }
    }
}

impl fmt::Display for PsConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PsConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PsConvention::Exact),
            "paper" => Ok(PsConvention::Paper),
            other => Err(Error::InvalidParameter {
                name: "ps",
                reason: format!("expected `exact` or `paper`, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrInput {
    /// Total number of measurement runs.
    pub n_total: u64,
    /// Post-selection probability.
    pub ps: f64,
    pub signal_mode: SnrMode,
}

/// `p(n) = |cₙ|²`.
pub fn number_distribution<S: FockAmplitudes + ?Sized>(state: &S) -> Vec<f64> {
    state.fock_amplitudes().iter().map(|c| c.norm_sqr()).collect()
}

/// `⟨a†a⟩`.
pub fn mean_photon_number<S: FockAmplitudes + ?Sized>(state: &S) -> f64 {
    state
        .fock_amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| n as f64 * c.norm_sqr())
        .sum()
}

/// `⟨a†²a²⟩ = Σ n(n−1) p(n)`.
pub fn second_factorial_moment<S: FockAmplitudes + ?Sized>(state: &S) -> f64 {
    state
        .fock_amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let n = n as f64;
            n * (n - 1.0) * c.norm_sqr()
        })
        .sum()
}

/// Mandel `Q = (⟨a†²a²⟩ − ⟨a†a⟩²)/⟨a†a⟩`.
pub fn mandel_q<S: FockAmplitudes + ?Sized>(state: &S) -> Result<f64> {
    let mean = mean_photon_number(state);
    if mean <= VACUUM_MEAN_FLOOR {
        return Err(Error::UndefinedMandelQ);
    }
    Ok((second_factorial_moment(state) - mean * mean) / mean)
}

/// `⟨a†^k⟩ = Σₙ c*_{n+k} cₙ √((n+1)…(n+k))` for `k` = 1 or 2.
fn raising_expectation(amps: &[Complex64], k: usize) -> Complex64 {
    (0..amps.len().saturating_sub(k))
        .map(|n| {
            let weight: f64 = (1..=k).map(|j| (n + j) as f64).product::<f64>().sqrt();
            amps[n + k].conj() * amps[n] * weight
        })
        .sum()
}

pub fn quadrature_mean<S: FockAmplitudes + ?Sized>(state: &S, q: QuadratureSpec) -> f64 {
    let phase = Complex64::from_polar(1.0, q.theta);
    SQRT_2 * (phase * raising_expectation(state.fock_amplitudes(), 1)).re
}

pub fn quadrature_second_moment<S: FockAmplitudes + ?Sized>(state: &S, q: QuadratureSpec) -> f64 {
    let phase = Complex64::from_polar(1.0, 2.0 * q.theta);
    mean_photon_number(state) + 0.5 + (phase * raising_expectation(state.fock_amplitudes(), 2)).re
}

pub fn quadrature_variance<S: FockAmplitudes + ?Sized>(state: &S, q: QuadratureSpec) -> f64 {
    let mean = quadrature_mean(state, q);
    quadrature_second_moment(state, q) - mean * mean
}

/// Matrix of `X_θ` at cutoff `dim`.
pub fn quadrature_op(q: QuadratureSpec, dim: usize) -> ComplexMatrix {
    let lower = annihilation_op(dim).scale(Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -q.theta));
    let raise = creation_op(dim).scale(Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, q.theta));
    &lower + &raise
}

/// `√(N·P_s)·|signal| / √(⟨X²⟩_f − ⟨X⟩_f²)`.
pub fn snr<F, I>(final_state: &F, initial: &I, q: QuadratureSpec, inp: SnrInput) -> Result<f64>
where
    F: FockAmplitudes + ?Sized,
    I: FockAmplitudes + ?Sized,
{
    let variance = quadrature_variance(final_state, q);
    if variance.is_nan() || variance <= 0.0 {
        return Err(Error::NonPositiveVariance { variance });
    }
    let final_mean = quadrature_mean(final_state, q);
    let signal = match inp.signal_mode {
        SnrMode::FinalMean => final_mean,
        SnrMode::ShiftFromInitial => final_mean - quadrature_mean(initial, q),
    };
    Ok((inp.n_total as f64 * inp.ps).sqrt() * signal.abs() / variance.sqrt())
}
