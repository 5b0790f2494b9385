//! Published closed-form moments, evaluated exactly as printed.
//!
//! Each expression is compared against the numeric pipeline (amplitudes of the
//! post-selected pointer fed through the ladder-operator sums). The numeric
//! value is always the reference; a disagreement is reported, not repaired.
//!
//! Reading conventions where the printed text is ambiguous:
//! * `c_k` inside the squeezed-state expressions means `β_k`.
//! * The phase written `e^{−iφ}` in the squeezed second moment is the
//!   squeezing phase `θ_sq`.
//! * In the cat expressions `c_k` are the unnormalized cat coefficients (with
//!   `√(k!)`) and the normalization written `δ` is the cat `w`.
//! * `x^k/k!` with `k < 0` is zero.

use std::f64::consts::SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measurement::{final_pointer_analytic, normalization_delta, MeasurementConfig};
use crate::numerics::ComplexScalar;
use crate::observables::{
    mean_photon_number, number_distribution, quadrature_mean, quadrature_second_moment, second_factorial_moment,
    QuadratureSpec,
};
use crate::pointer::{cat_coefficients, cat_normalization, PointerSpec};
use crate::qubit::{modular_value, SelectionConfig};

/// Discrepancies above this are reported.
pub const DISCREPANCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Coherent,
    Squeezed,
    Cat,
}

impl Family {
    pub fn of(spec: &PointerSpec) -> Result<Self> {
        match spec {
            PointerSpec::Coherent { .. } => Ok(Family::Coherent),
            PointerSpec::Squeezed { .. } => Ok(Family::Squeezed),
            PointerSpec::Cat { .. } => Ok(Family::Cat),
            PointerSpec::Custom(_) => Err(Error::InvalidParameter {
                name: "pointer",
                reason: "no closed forms exist for custom pointers".into(),
            }),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Coherent => "coherent",
            Family::Squeezed => "squeezed",
            Family::Cat => "cat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `⟨a†a⟩`
    MeanN,
    /// `⟨a†²a²⟩`
    MeanN2,
    /// `⟨X_θ⟩`
    QuadMean,
    /// `⟨X_θ²⟩`
    QuadSecond,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [
        Quantity::MeanN,
        Quantity::MeanN2,
        Quantity::QuadMean,
        Quantity::QuadSecond,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::MeanN => "mean_n",
            Quantity::MeanN2 => "mean_n2",
            Quantity::QuadMean => "quad_mean",
            Quantity::QuadSecond => "quad_second",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrintedValue {
    Value(f64),
    /// The printed expression is truncated and cannot be evaluated.
    IncompleteInPaper,
    /// No closed form is given for this family and quantity.
    NotInPaper,
}

impl fmt::Display for PrintedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrintedValue::Value(v) => write!(f, "{v:.16e}"),
            PrintedValue::IncompleteInPaper => f.write_str("incomplete in print"),
            PrintedValue::NotInPaper => f.write_str("not given"),
        }
    }
}

/// Parameter point at which a printed expression is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormPoint {
    pub pointer: PointerSpec,
    pub sel: SelectionConfig,
    pub m: usize,
    pub quad: QuadratureSpec,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckReport {
    pub family: Family,
    pub quantity: Quantity,
    pub numeric: f64,
    pub printed: PrintedValue,
    /// `|numeric − printed|` when the printed value exists.
    pub abs_discrepancy: Option<f64>,
}

impl CrossCheckReport {
    pub fn agrees(&self) -> bool {
        matches!(self.abs_discrepancy, Some(d) if d <= DISCREPANCY_TOL)
    }
}

/// `x^k / k!`, zero for negative `k`.
fn power_over_factorial(x: f64, k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    (1..=k).fold(1.0, |acc, j| acc * x / j as f64)
}

/// Evaluate the printed closed form for `quantity` and compare it with the
/// numeric pipeline at the same point.
pub fn printed_closed_form(point: &ClosedFormPoint, quantity: Quantity) -> Result<CrossCheckReport> {
    let family = Family::of(&point.pointer)?;
    let cfg = MeasurementConfig::new(point.sel, point.pointer.clone(), point.m, point.dim);
    let fin = final_pointer_analytic(&cfg)?;
    let numeric = match quantity {
        Quantity::MeanN => mean_photon_number(&fin),
        Quantity::MeanN2 => second_factorial_moment(&fin),
        Quantity::QuadMean => quadrature_mean(&fin, point.quad),
        Quantity::QuadSecond => quadrature_second_moment(&fin, point.quad),
    };
    let modval = modular_value(&point.sel)?;
    let printed = match family {
        Family::Coherent => coherent_printed(point, modval, quantity),
        Family::Squeezed => squeezed_printed(&cfg, point, modval, quantity)?,
        Family::Cat => cat_printed(point, modval, quantity),
    };
    let abs_discrepancy = match printed {
        PrintedValue::Value(v) => Some((numeric - v).abs()),
        _ => None,
    };
    Ok(CrossCheckReport {
        family,
        quantity,
        numeric,
        printed,
        abs_discrepancy,
    })
}

fn coherent_printed(point: &ClosedFormPoint, a: ComplexScalar, quantity: Quantity) -> PrintedValue {
    let PointerSpec::Coherent { gamma, phi } = point.pointer else {
        unreachable!("family checked by caller")
    };
    let alpha = Complex64::from_polar(gamma, phi);
    let n2 = gamma * gamma;
    let m = point.m as i64;
    let mf = m as f64;
    let a2 = a.norm_sqr();
    let c_m2 = (-n2).exp() * power_over_factorial(n2, m);
    let delta2 = normalization_delta(Complex64::new(c_m2.sqrt(), 0.0), a).powi(2);
    let damp = (-n2).exp();
    let e1 = Complex64::from_polar(1.0, point.quad.theta);
    let e2 = Complex64::from_polar(1.0, 2.0 * point.quad.theta);
    let one = Complex64::new(1.0, 0.0);

    let value = match quantity {
        Quantity::MeanN => damp / delta2 * (n2 * n2.exp() - power_over_factorial(n2, m) * mf * (1.0 - a2)),
        Quantity::MeanN2 => {
            damp / delta2 * (n2 * n2 * n2.exp() - power_over_factorial(n2, m) * mf * (mf - 1.0) * (1.0 - a2))
        }
        Quantity::QuadMean => {
            let braces = (a - one) * power_over_factorial(n2, m) + (a.conj() - one) * power_over_factorial(n2, m - 1);
            let bracket = alpha.conj() * braces * e1 + n2.exp();
            SQRT_2 * damp / delta2 * bracket.re
        }
        Quantity::QuadSecond => {
            let first = (n2 + c_m2 * (a2 - 1.0) * mf) / delta2 + 0.5;
            let inner =
                n2.exp() + (a - one) * power_over_factorial(n2, m) + (a.conj() - one) * power_over_factorial(n2, m - 2);
            let second = (alpha.conj() * alpha.conj() * damp * e2 * inner).re / delta2;
            first + second
        }
    };
    PrintedValue::Value(value)
}

fn squeezed_printed(
    cfg: &MeasurementConfig,
    point: &ClosedFormPoint,
    a: ComplexScalar,
    quantity: Quantity,
) -> Result<PrintedValue> {
    let PointerSpec::Squeezed { alpha, r, theta_sq } = point.pointer else {
        unreachable!("family checked by caller")
    };
    let initial = cfg.initial_pointer()?;
    let beta = initial.amplitudes();
    let m = point.m;
    let mf = m as f64;
    let at = |k: i64| -> Complex64 {
        if k < 0 || k as usize >= beta.dim() {
            Complex64::new(0.0, 0.0)
        } else {
            beta[k as usize]
        }
    };
    let mi = m as i64;
    let (sh, ch) = (r.sinh(), r.cosh());
    let n0 = alpha.norm_sqr() + sh * sh;
    let a2 = a.norm_sqr();
    let b_m2 = at(mi).norm_sqr();
    let eta2 = normalization_delta(at(mi), a).powi(2);
    let one = Complex64::new(1.0, 0.0);
    let e1 = Complex64::from_polar(1.0, point.quad.theta);
    let e2 = Complex64::from_polar(1.0, 2.0 * point.quad.theta);
    let sq_phase = Complex64::from_polar(1.0, theta_sq);

    let value = match quantity {
        Quantity::MeanN => n0 - b_m2 * mf * (1.0 - a2),
        Quantity::MeanN2 => {
            (alpha * ch - alpha.conj() * sq_phase * sh).norm_sqr() + 2.0 * sh * sh * ch * ch + n0 * (1.0 + n0)
                - b_m2 * (1.0 - a2) * mf * (mf - 1.0)
        }
        Quantity::QuadMean => {
            let bracket = alpha.conj()
                + (a - one) * at(mi + 1).conj() * at(mi) * (mf + 1.0).sqrt()
                + (a.conj() - one) * at(mi).conj() * at(mi - 1) * mf.sqrt();
            SQRT_2 / eta2 * (bracket * e1).re
        }
        Quantity::QuadSecond => {
            let first = (n0 + b_m2 * (a2 - 1.0) * mf) / eta2 + 0.5;
            let lower =
                ((a.conj() - one) * at(mi).conj() * at(mi - 2) * (mf * (mf - 1.0)).max(0.0).sqrt() * e2).re / eta2;
            let upper = ((alpha.conj() * alpha.conj() - sq_phase.conj() * sh * ch
                + (a - one) * at(mi + 2).conj() * at(mi) * ((mf + 1.0) * (mf + 2.0)).sqrt())
                * e2)
                .re
                / eta2;
            first + lower + upper
        }
    };
    Ok(PrintedValue::Value(value))
}

fn cat_printed(point: &ClosedFormPoint, a: ComplexScalar, quantity: Quantity) -> PrintedValue {
    let PointerSpec::Cat { alpha, phi_cat } = point.pointer else {
        unreachable!("family checked by caller")
    };
    match quantity {
        Quantity::MeanN | Quantity::MeanN2 => return PrintedValue::NotInPaper,
        Quantity::QuadSecond => return PrintedValue::IncompleteInPaper,
        Quantity::QuadMean => {}
    }
    let m = point.m;
    let mf = m as f64;
    let coeffs = cat_coefficients(alpha, phi_cat, m + 2);
    let at = |k: i64| -> Complex64 {
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            coeffs[k as usize]
        }
    };
    let mi = m as i64;
    let one = Complex64::new(1.0, 0.0);
    let w2 = cat_normalization(alpha, phi_cat) + at(mi).norm_sqr() * (a.norm_sqr() - 1.0);
    let e1 = Complex64::from_polar(1.0, point.quad.theta);
    let overlap = 2.0 * (-2.0 * alpha.norm_sqr()).exp() * phi_cat.sin();
    let bracket = (a - one) * at(mi + 1).conj() * at(mi) * (mf + 1.0).sqrt()
        + (a.conj() - one) * at(mi).conj() * at(mi - 1) * mf.sqrt()
        + alpha.conj() * Complex64::new(2.0, overlap);
    PrintedValue::Value(2.0 / (SQRT_2 * w2) * (bracket * e1).re)
}

/// Conditional photon distribution as printed, where the off-level branch
/// carries `|c_m|²` in the numerator and `|c_n|²` in the normalization.
pub fn printed_conditional_probability(c: &[Complex64], n: usize, m: usize, modval: ComplexScalar) -> f64 {
    let c_n2 = c[n].norm_sqr();
    let denom = 1.0 - c_n2 + c_n2 * modval.norm_sqr();
    if n == m {
        c_n2 * modval.norm_sqr() / denom
    } else {
        c[m].norm_sqr() / denom
    }
}

/// Largest gap between the printed conditional distribution and the one read
/// off the post-selected pointer.
pub fn conditional_probability_discrepancy(cfg: &MeasurementConfig) -> Result<f64> {
    let initial = cfg.initial_pointer()?;
    let fin = final_pointer_analytic(cfg)?;
    let p = number_distribution(&fin);
    let modval = fin.modular_value();
    Ok((0..cfg.dim)
        .map(|n| (p[n] - printed_conditional_probability(initial.amplitudes().as_slice(), n, cfg.m, modval)).abs())
        .fold(0.0, f64::max))
}

/// Norm of the cat state when the coefficients use `αⁿ/n!` instead of
/// `αⁿ/√(n!)`, divided by the stated normalization.
pub fn factorial_cat_norm(alpha: ComplexScalar, phi_cat: f64, dim: usize) -> f64 {
    let rel = Complex64::from_polar(1.0, phi_cat);
    let mut term = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    let mut total = 0.0;
    for n in 0..dim {
        if n > 0 {
            term = term * alpha / n as f64;
        }
        let parity = if n % 2 == 0 { rel } else { -rel };
        total += (term * (1.0 + parity)).norm_sqr();
    }
    total / cat_normalization(alpha, phi_cat)
}
