//! Built-in parameter tables for the nine figures.
//!
//! Each figure is a family, an output quantity, a set of fixed values, an
//! optional panel selector and the swept axes. Panels become separate CSV files.

use std::f64::consts::{FRAC_PI_3, PI};
use std::fs;
use std::path::{Path, PathBuf};

use super::{run_sweep, write_csv, Observable, Param, Params, ResultRow, SweepAxis, SweepSpec};
use crate::error::{Error, Result};
use crate::observables::closed_forms::Family;
use crate::observables::{PsConvention, SnrMode};

/// The modular values shown as separate curves.
const MODVAL_CURVES: [f64; 4] = [1.0, 5.0, 10.0, 20.0];

#[derive(Debug, Clone, Copy)]
enum Axis {
    List(Param, &'static [f64]),
    Range(Param, f64, f64, usize),
}

impl Axis {
    fn param(self) -> Param {
        match self {
            Axis::List(p, _) | Axis::Range(p, ..) => p,
        }
    }

    fn build(self) -> Result<SweepAxis> {
        match self {
            Axis::List(p, values) => SweepAxis::new(p, values.to_vec()),
            Axis::Range(p, start, stop, count) => SweepAxis::linspace(p, start, stop, count),
        }
    }
}

struct FigureDef {
    id: &'static str,
    family: Family,
    quantity: Observable,
    fixed: &'static [(Param, f64)],
    panels: Option<(Param, &'static [(&'static str, f64)])>,
    axes: &'static [Axis],
}

const N_LEVELS: Axis = Axis::Range(Param::N, 0.0, 15.0, 16);
const MODVALS: Axis = Axis::List(Param::Modval, &MODVAL_CURVES);
const MODVAL_GRID: Axis = Axis::Range(Param::Modval, 1.0, 20.0, 20);
const ALPHA_GRID: Axis = Axis::Range(Param::Alpha, 0.1, 3.0, 30);

const FIGURES: [FigureDef; 9] = [
    FigureDef {
        id: "fig1",
        family: Family::Coherent,
        quantity: Observable::PN,
        fixed: &[
            (Param::Gamma, 2.0),
            (Param::Phi, 0.0),
            (Param::M, 2.0),
            (Param::Dim, 64.0),
        ],
        panels: None,
        axes: &[MODVALS, N_LEVELS],
    },
    FigureDef {
        id: "fig2",
        family: Family::Coherent,
        quantity: Observable::QMandel,
        fixed: &[(Param::Phi, 0.0), (Param::M, 2.0), (Param::Dim, 64.0)],
        panels: None,
        axes: &[MODVALS, Axis::Range(Param::Alpha, 0.05, 4.0, 80)],
    },
    FigureDef {
        id: "fig3",
        family: Family::Coherent,
        quantity: Observable::Snr,
        fixed: &[
            (Param::Phi, 0.0),
            (Param::QuadTheta, 0.0),
            (Param::NTotal, 1.0),
            (Param::Dim, 64.0),
        ],
        panels: Some((Param::M, &[("fig3a", 2.0), ("fig3b", 5.0), ("fig3c", 10.0)])),
        axes: &[MODVAL_GRID, ALPHA_GRID],
    },
    FigureDef {
        id: "fig4",
        family: Family::Squeezed,
        quantity: Observable::PN,
        fixed: &[
            (Param::Alpha, 1.0),
            (Param::R, 0.5),
            (Param::ThetaSq, 0.0),
            (Param::M, 2.0),
            (Param::Dim, 64.0),
        ],
        panels: None,
        axes: &[MODVALS, N_LEVELS],
    },
    FigureDef {
        id: "fig5",
        family: Family::Squeezed,
        quantity: Observable::QMandel,
        fixed: &[(Param::ThetaSq, 0.0), (Param::M, 2.0), (Param::Dim, 128.0)],
        panels: Some((Param::R, &[("fig5a", 0.5), ("fig5b", 1.0)])),
        axes: &[MODVALS, Axis::Range(Param::Alpha, 0.05, 3.0, 60)],
    },
    FigureDef {
        id: "fig6",
        family: Family::Squeezed,
        quantity: Observable::Snr,
        fixed: &[
            (Param::Alpha, 0.5),
            (Param::ThetaSq, 0.0),
            (Param::QuadTheta, 0.0),
            (Param::NTotal, 1.0),
            (Param::Dim, 128.0),
        ],
        panels: Some((Param::M, &[("fig6a", 2.0), ("fig6b", 5.0)])),
        axes: &[MODVAL_GRID, Axis::Range(Param::R, 0.0, 1.0, 21)],
    },
    FigureDef {
        id: "fig7",
        family: Family::Cat,
        quantity: Observable::PN,
        fixed: &[(Param::PhiCat, FRAC_PI_3), (Param::M, 2.0), (Param::Dim, 64.0)],
        panels: Some((Param::Alpha, &[("fig7a", 1.0), ("fig7b", 2.0)])),
        axes: &[MODVALS, N_LEVELS],
    },
    FigureDef {
        id: "fig8",
        family: Family::Cat,
        quantity: Observable::QMandel,
        fixed: &[(Param::Alpha, 0.2), (Param::M, 2.0), (Param::Dim, 64.0)],
        panels: None,
        axes: &[MODVALS, Axis::Range(Param::PhiCat, 0.0, 2.0 * PI, 181)],
    },
    FigureDef {
        id: "fig9",
        family: Family::Cat,
        quantity: Observable::Snr,
        fixed: &[
            (Param::PhiCat, 0.0),
            (Param::QuadTheta, 0.0),
            (Param::NTotal, 1.0),
            (Param::Dim, 64.0),
        ],
        panels: Some((Param::M, &[("fig9a", 2.0), ("fig9b", 5.0), ("fig9c", 10.0)])),
        axes: &[MODVAL_GRID, ALPHA_GRID],
    },
];

pub fn figure_ids() -> impl Iterator<Item = &'static str> {
    FIGURES.iter().map(|f| f.id)
}

/// Parameter changes applied on top of a figure's built-in table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub params: Vec<(Param, f64)>,
    pub snr_mode: Option<SnrMode>,
    pub ps_convention: Option<PsConvention>,
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        self.params.is_empty() && self.snr_mode.is_none() && self.ps_convention.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePanel {
    /// File stem, e.g. `fig3a`.
    pub name: String,
    pub rows: Vec<ResultRow>,
}

fn family_params(family: Family) -> &'static [Param] {
    match family {
        Family::Coherent => &[Param::Gamma, Param::Phi, Param::Alpha],
        Family::Squeezed => &[Param::AlphaRe, Param::AlphaIm, Param::Alpha, Param::R, Param::ThetaSq],
        Family::Cat => &[Param::AlphaRe, Param::AlphaIm, Param::Alpha, Param::PhiCat],
    }
}

impl FigureDef {
    fn declares(&self, p: Param) -> bool {
        let common = [
            Param::G,
            Param::Theta1,
            Param::Phi1,
            Param::Modval,
            Param::M,
            Param::Dim,
        ];
        let quantity_specific: &[Param] = match self.quantity {
            Observable::PN => &[Param::N],
            Observable::Snr => &[Param::QuadTheta, Param::NTotal],
            Observable::QuadMean | Observable::QuadSecond => &[Param::QuadTheta],
            Observable::QMandel | Observable::MeanN => &[],
        };
        common.contains(&p) || quantity_specific.contains(&p) || family_params(self.family).contains(&p)
    }

    fn check(&self, ov: &Overrides) -> Result<()> {
        for &(p, _) in &ov.params {
            if !self.declares(p) {
                return Err(Error::InvalidSweep(format!(
                    "`{p}` is not a parameter of {} ({} pointer, {})",
                    self.id,
                    self.family.as_str(),
                    self.quantity
                )));
            }
            let swept_modval = self.axes.iter().any(|a| a.param() == Param::Modval)
                && !ov.params.iter().any(|&(q, _)| q == Param::Modval);
            if swept_modval && matches!(p, Param::G | Param::Theta1 | Param::Phi1) {
                return Err(Error::InvalidSweep(format!(
                    "`{p}` is fixed by the swept modval in {}; override modval instead",
                    self.id
                )));
            }
        }
        if self.quantity != Observable::Snr && (ov.snr_mode.is_some() || ov.ps_convention.is_some()) {
            return Err(Error::InvalidSweep(format!(
                "{} does not plot an SNR; snr-mode and ps do not apply",
                self.id
            )));
        }
        Ok(())
    }

    fn spec(&self, panel_value: Option<(Param, f64)>, ov: &Overrides) -> Result<SweepSpec> {
        let mut base = Params::with_family(self.family);
        for &(p, v) in self.fixed {
            base.set(p, v)?;
        }
        if let Some((p, v)) = panel_value {
            base.set(p, v)?;
        }
        let mut axes = Vec::new();
        for axis in self.axes {
            if !ov.params.iter().any(|&(p, _)| p == axis.param()) {
                axes.push(axis.build()?);
            }
        }
        for &(p, v) in &ov.params {
            base.set(p, v)?;
        }
        if let Some(mode) = ov.snr_mode {
            base.snr_mode = mode;
        }
        if let Some(ps) = ov.ps_convention {
            base.ps_convention = ps;
        }
        Ok(SweepSpec {
            base,
            axes,
            quantity: self.quantity,
        })
    }
}

fn lookup(id: &str) -> Result<&'static FigureDef> {
    FIGURES
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownFigure(id.to_string()))
}

/// Evaluates a figure, one panel per entry. Overriding the panel parameter
/// keeps a single panel, named after the matching caption panel if any.
pub fn run_figure(id: &str, overrides: &Overrides) -> Result<Vec<FigurePanel>> {
    let def = lookup(id)?;
    def.check(overrides)?;
    let panel_override = def
        .panels
        .and_then(|(param, _)| overrides.params.iter().rev().find(|(p, _)| *p == param).copied());

    let mut jobs: Vec<(String, Option<(Param, f64)>)> = Vec::new();
    match (def.panels, panel_override) {
        (None, _) => jobs.push((def.id.to_string(), None)),
        (Some((_, panels)), Some((_, value))) => {
            let name = panels
                .iter()
                .find(|(_, v)| *v == value)
                .map_or(def.id, |(name, _)| *name);
            jobs.push((name.to_string(), None));
        }
        (Some((param, panels)), None) => {
            for &(name, value) in panels {
                jobs.push((name.to_string(), Some((param, value))));
            }
        }
    }

    jobs.into_iter()
        .map(|(name, panel)| {
            let rows = run_sweep(&def.spec(panel, overrides)?)?;
            Ok(FigurePanel { name, rows })
        })
        .collect()
}

/// Writes `<dir>/<panel>.csv` for every panel and returns the paths.
pub fn write_figure(id: &str, overrides: &Overrides, dir: &Path) -> Result<Vec<PathBuf>> {
    let panels = run_figure(id, overrides)?;
    fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(panels.len());
    for panel in panels {
        let path = dir.join(format!("{}.csv", panel.name));
        write_csv(&panel.rows, fs::File::create(&path)?)?;
        paths.push(path);
    }
    Ok(paths)
}
