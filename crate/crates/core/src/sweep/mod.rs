//! Parameter sweeps over the measurement pipeline with long-format CSV output.
//!
//! Every [`ResultRow`] echoes the full parameter set it was computed from, so a
//! single line of output can be re-evaluated without any other context.

pub mod check;
pub mod errata;
pub mod figures;

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measurement::{final_pointer_analytic, MeasurementConfig};
use crate::numerics::ComplexScalar;
use crate::observables::closed_forms::Family;
use crate::observables::{
    mandel_q, mean_photon_number, quadrature_mean, quadrature_second_moment, snr, PsConvention, QuadratureSpec,
    SnrInput, SnrMode,
};
use crate::pointer::{PointerSpec, DEFAULT_DIM};
use crate::qubit::SelectionConfig;

pub use figures::{figure_ids, run_figure, write_figure, FigurePanel, Overrides};

/// Column names, in output order.
pub const CSV_HEADER: [&str; 25] = [
    "quantity",
    "family",
    "n",
    "alpha_re",
    "alpha_im",
    "gamma",
    "phi",
    "r",
    "theta_sq",
    "phi_cat",
    "g",
    "theta1",
    "phi1",
    "modval_re",
    "modval_im",
    "m",
    "dim",
    "quad_theta",
    "n_total",
    "snr_mode",
    "ps_convention",
    "ps_exact",
    "ps_paper",
    "truncation_leak",
    "value",
];

/// Extra Fock levels required above the largest projector level.
pub const LEVEL_HEADROOM: usize = 3;

/// Names accepted by overrides and `--sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Gamma,
    Phi,
    AlphaRe,
    AlphaIm,
    /// Pointer amplitude regardless of family: `gamma` for coherent pointers,
    /// a real `alpha` otherwise.
    Alpha,
    R,
    ThetaSq,
    PhiCat,
    G,
    Theta1,
    Phi1,
    /// Sets `θ₁ = atan(value)` with `g = φ₁ = π/2`.
    Modval,
    M,
    Dim,
    QuadTheta,
    NTotal,
    N,
}

impl Param {
    pub const ALL: [Param; 17] = [
        Param::Gamma,
        Param::Phi,
        Param::AlphaRe,
        Param::AlphaIm,
        Param::Alpha,
        Param::R,
        Param::ThetaSq,
        Param::PhiCat,
        Param::G,
        Param::Theta1,
        Param::Phi1,
        Param::Modval,
        Param::M,
        Param::Dim,
        Param::QuadTheta,
        Param::NTotal,
        Param::N,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Param::Gamma => "gamma",
            Param::Phi => "phi",
            Param::AlphaRe => "alpha_re",
            Param::AlphaIm => "alpha_im",
            Param::Alpha => "alpha",
            Param::R => "r",
            Param::ThetaSq => "theta_sq",
            Param::PhiCat => "phi_cat",
            Param::G => "g",
            Param::Theta1 => "theta1",
            Param::Phi1 => "phi1",
            Param::Modval => "modval",
            Param::M => "m",
            Param::Dim => "dim",
            Param::QuadTheta => "quad_theta",
            Param::NTotal => "n_total",
            Param::N => "n",
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, Param::M | Param::Dim | Param::NTotal | Param::N)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        Param::ALL
            .into_iter()
            .find(|p| p.as_str() == key)
            .ok_or_else(|| Error::UnknownParameter(s.to_string()))
    }
}

/// Scalar emitted by a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Observable {
    /// Conditional photon-number probability `p(n)`.
    #[default]
    PN,
    QMandel,
    Snr,
    MeanN,
    QuadMean,
    QuadSecond,
}

impl Observable {
    pub const ALL: [Observable; 6] = [
        Observable::PN,
        Observable::QMandel,
        Observable::Snr,
        Observable::MeanN,
        Observable::QuadMean,
        Observable::QuadSecond,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Observable::PN => "p_n",
            Observable::QMandel => "q_mandel",
            Observable::Snr => "snr",
            Observable::MeanN => "mean_n",
            Observable::QuadMean => "quad_mean",
            Observable::QuadSecond => "quad_second",
        }
    }

    fn uses_quadrature(self) -> bool {
        matches!(self, Observable::Snr | Observable::QuadMean | Observable::QuadSecond)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidParameter {
                name: "quantity",
                reason: format!("expected one of p_n, q_mandel, snr, mean_n, quad_mean, quad_second; got `{s}`"),
            })
    }
}

pub fn parse_family(s: &str) -> Result<Family> {
    match s.trim() {
        "coherent" => Ok(Family::Coherent),
        "squeezed" => Ok(Family::Squeezed),
        "cat" => Ok(Family::Cat),
        other => Err(Error::InvalidParameter {
            name: "pointer",
            reason: format!("expected coherent, squeezed or cat; got `{other}`"),
        }),
    }
}

/// One fully specified evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub family: Family,
    pub gamma: f64,
    pub phi: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub r: f64,
    pub theta_sq: f64,
    pub phi_cat: f64,
    pub g: f64,
    pub theta1: f64,
    pub phi1: f64,
    pub m: usize,
    pub dim: usize,
    pub quad_theta: f64,
    pub n_total: u64,
    pub n: usize,
    pub snr_mode: SnrMode,
    pub ps_convention: PsConvention,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            family: Family::Coherent,
            gamma: 2.0,
            phi: 0.0,
            alpha_re: 1.0,
            alpha_im: 0.0,
            r: 0.5,
            theta_sq: 0.0,
            phi_cat: 0.0,
            g: FRAC_PI_2,
            theta1: 1f64.atan(),
            phi1: FRAC_PI_2,
            m: 2,
            dim: DEFAULT_DIM,
            quad_theta: 0.0,
            n_total: 1,
            n: 2,
            snr_mode: SnrMode::default(),
            ps_convention: PsConvention::default(),
        }
    }
}

fn to_count(param: Param, value: f64) -> Result<u64> {
    if value.is_nan() || value < 0.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
        return Err(Error::InvalidSweep(format!(
            "`{param}` must be a non-negative integer, got {value}"
        )));
    }
    Ok(value as u64)
}

impl Params {
    pub fn with_family(family: Family) -> Self {
        Self {
            family,
            ..Self::default()
        }
    }

    pub fn set(&mut self, param: Param, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidSweep(format!("`{param}` must be finite, got {value}")));
        }
        if param.is_integer() {
            let k = to_count(param, value)?;
            match param {
                Param::M => self.m = k as usize,
                Param::Dim => self.dim = k as usize,
                Param::NTotal => self.n_total = k,
                Param::N => self.n = k as usize,
                _ => unreachable!(),
            }
            return Ok(());
        }
        match param {
            Param::Gamma => self.gamma = value,
            Param::Phi => self.phi = value,
            Param::AlphaRe => self.alpha_re = value,
            Param::AlphaIm => self.alpha_im = value,
            Param::Alpha => match self.family {
                Family::Coherent => self.gamma = value,
                _ => {
                    self.alpha_re = value;
                    self.alpha_im = 0.0;
                }
            },
            Param::R => self.r = value,
            Param::ThetaSq => self.theta_sq = value,
            Param::PhiCat => self.phi_cat = value,
            Param::G => self.g = value,
            Param::Theta1 => self.theta1 = value,
            Param::Phi1 => self.phi1 = value,
            Param::Modval => {
                let sel = SelectionConfig::for_modular_value(value);
                self.theta1 = sel.theta1;
                self.phi1 = sel.phi1;
                self.g = sel.g;
            }
            Param::QuadTheta => self.quad_theta = value,
            Param::M | Param::Dim | Param::NTotal | Param::N => unreachable!(),
        }
        Ok(())
    }

    pub fn alpha(&self) -> ComplexScalar {
        Complex64::new(self.alpha_re, self.alpha_im)
    }

    pub fn pointer_spec(&self) -> PointerSpec {
        match self.family {
            Family::Coherent => PointerSpec::Coherent {
                gamma: self.gamma,
                phi: self.phi,
            },
            Family::Squeezed => PointerSpec::Squeezed {
                alpha: self.alpha(),
                r: self.r,
                theta_sq: self.theta_sq,
            },
            Family::Cat => PointerSpec::Cat {
                alpha: self.alpha(),
                phi_cat: self.phi_cat,
            },
        }
    }

    pub fn selection(&self) -> SelectionConfig {
        SelectionConfig::new(self.theta1, self.phi1, self.g)
    }

    pub fn measurement_config(&self) -> MeasurementConfig {
        MeasurementConfig::new(self.selection(), self.pointer_spec(), self.m, self.dim)
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec::new(self.quad_theta)
    }

    /// Checks the sizing rules: `dim ≥ m + 3` and `n < dim`.
    pub fn validate(&self, quantity: Observable) -> Result<()> {
        if self.dim < self.m + LEVEL_HEADROOM {
            return Err(Error::InvalidSweep(format!(
                "dim = {} is too small for m = {}; need dim >= {}",
                self.dim,
                self.m,
                self.m + LEVEL_HEADROOM
            )));
        }
        if quantity == Observable::PN && self.n >= self.dim {
            return Err(Error::InvalidSweep(format!(
                "photon number n = {} is outside the truncation dim = {}",
                self.n, self.dim
            )));
        }
        Ok(())
    }
}

/// Output of one evaluation with its full parameter echo.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub quantity: Observable,
    pub params: Params,
    pub modval: ComplexScalar,
    pub ps_exact: f64,
    pub ps_paper: f64,
    pub truncation_leak: f64,
    pub value: f64,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl ResultRow {
    /// CSV cells in [`CSV_HEADER`] order; columns that do not apply are empty.
    pub fn cells(&self) -> Vec<String> {
        let p = &self.params;
        let q = self.quantity;
        let opt = |on: bool, v: f64| if on { fmt_f64(v) } else { String::new() };
        let coherent = p.family == Family::Coherent;
        let squeezed = p.family == Family::Squeezed;
        let cat = p.family == Family::Cat;
        let is_snr = q == Observable::Snr;
        vec![
            q.as_str().to_string(),
            p.family.as_str().to_string(),
            if q == Observable::PN {
                p.n.to_string()
            } else {
                String::new()
            },
            opt(!coherent, p.alpha_re),
            opt(!coherent, p.alpha_im),
            opt(coherent, p.gamma),
            opt(coherent, p.phi),
            opt(squeezed, p.r),
            opt(squeezed, p.theta_sq),
            opt(cat, p.phi_cat),
            fmt_f64(p.g),
            fmt_f64(p.theta1),
            fmt_f64(p.phi1),
            fmt_f64(self.modval.re),
            fmt_f64(self.modval.im),
            p.m.to_string(),
            p.dim.to_string(),
            opt(q.uses_quadrature(), p.quad_theta),
            if is_snr { p.n_total.to_string() } else { String::new() },
            if is_snr {
                p.snr_mode.as_str().to_string()
            } else {
                String::new()
            },
            if is_snr {
                p.ps_convention.as_str().to_string()
            } else {
                String::new()
            },
            fmt_f64(self.ps_exact),
            fmt_f64(self.ps_paper),
            fmt_f64(self.truncation_leak),
            fmt_f64(self.value),
        ]
    }

    /// Recovers the quantity and inputs from a record written by [`write_csv`].
    pub fn parse_inputs(record: &csv::StringRecord) -> Result<(Observable, Params)> {
        if record.len() != CSV_HEADER.len() {
            return Err(Error::Csv(format!(
                "expected {} fields, got {}",
                CSV_HEADER.len(),
                record.len()
            )));
        }
        let field = |name: &str| {
            let idx = CSV_HEADER.iter().position(|h| *h == name).expect("known column");
            record[idx].trim()
        };
        let quantity: Observable = field("quantity").parse()?;
        let mut p = Params::with_family(parse_family(field("family"))?);
        for param in Param::ALL {
            if matches!(param, Param::Alpha | Param::Modval) {
                continue;
            }
            let text = field(param.as_str());
            if text.is_empty() {
                continue;
            }
            let value: f64 = text
                .parse()
                .map_err(|_| Error::Csv(format!("column `{param}` holds `{text}`")))?;
            p.set(param, value)?;
        }
        if !field("snr_mode").is_empty() {
            p.snr_mode = field("snr_mode").parse()?;
        }
        if !field("ps_convention").is_empty() {
            p.ps_convention = field("ps_convention").parse()?;
        }
        Ok((quantity, p))
    }
}

/// Runs the full pipeline for one point.
pub fn evaluate(params: &Params, quantity: Observable) -> Result<ResultRow> {
    params.validate(quantity)?;
    let cfg = params.measurement_config();
    let initial = cfg.initial_pointer()?;
    let fin = final_pointer_analytic(&cfg)?;
    let value = match quantity {
        Observable::PN => fin.amplitudes()[params.n].norm_sqr(),
        Observable::QMandel => mandel_q(&fin)?,
        Observable::MeanN => mean_photon_number(&fin),
        Observable::QuadMean => quadrature_mean(&fin, params.quadrature()),
        Observable::QuadSecond => quadrature_second_moment(&fin, params.quadrature()),
        Observable::Snr => snr(
            &fin,
            &initial,
            params.quadrature(),
            SnrInput {
                n_total: params.n_total,
                ps: params.ps_convention.select(&fin),
                signal_mode: params.snr_mode,
            },
        )?,
    };
    Ok(ResultRow {
        quantity,
        params: *params,
        modval: fin.modular_value(),
        ps_exact: fin.ps_exact(),
        ps_paper: fin.ps_paper(),
        truncation_leak: fin.truncation_leak(),
        value,
    })
}

/// A swept parameter and the values it takes, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: Param,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(param: Param, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSweep(format!("`{param}` has no values")));
        }
        Ok(Self { param, values })
    }

    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(param: Param, start: f64, stop: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidSweep(format!("`{param}` needs count >= 1")));
        }
        let values = if count == 1 {
            vec![start]
        } else {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                .collect()
        };
        Self::new(param, values)
    }
}

/// Parses `param=start:stop:count` or `param=v1,v2,...`.
impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| Error::InvalidSweep(format!("expected `param=start:stop:count`, got `{s}`")))?;
        let param: Param = name.parse()?;
        let number = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSweep(format!("`{t}` is not a number in `{s}`")))
        };
        let parts: Vec<&str> = range.split(':').collect();
        match parts.as_slice() {
            [start, stop, count] => {
                let count = count
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSweep(format!("count `{count}` is not a positive integer")))?;
                Self::linspace(param, number(start)?, number(stop)?, count)
            }
            [list] => {
                let values = list.split(',').map(number).collect::<Result<Vec<_>>>()?;
                Self::new(param, values)
            }
            _ => Err(Error::InvalidSweep(format!("cannot parse range in `{s}`"))),
        }
    }
}

/// Base point, swept axes (first axis varies slowest) and output quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Params,
    pub axes: Vec<SweepAxis>,
    pub quantity: Observable,
}

impl SweepSpec {
    pub fn new(base: Params, quantity: Observable) -> Self {
        Self {
            base,
            axes: Vec::new(),
            quantity,
        }
    }

    pub fn with_axis(mut self, axis: SweepAxis) -> Self {
        self.axes.push(axis);
        self
    }

    /// All grid points in row-major input order.
    pub fn points(&self) -> Result<Vec<Params>> {
        let mut points = vec![self.base];
        for axis in &self.axes {
            let mut next = Vec::with_capacity(points.len() * axis.values.len());
            for p in &points {
                for &v in &axis.values {
                    let mut q = *p;
                    q.set(axis.param, v)?;
                    next.push(q);
                }
            }
            points = next;
        }
        Ok(points)
    }
}

/// Evaluates every grid point; rows come back in input order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    let points = spec.points()?;
    for p in &points {
        p.validate(spec.quantity)?;
    }
    points.par_iter().map(|p| evaluate(p, spec.quantity)).collect()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Csv(e.to_string()))
}
