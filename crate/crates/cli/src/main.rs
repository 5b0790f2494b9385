use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use modval_core::sweep::{check, errata, parse_family, run_sweep, write_csv, write_figure, Overrides};
use modval_core::{Observable, Param, Params, PsConvention, SnrMode, SweepAxis, SweepSpec};

#[derive(Parser)]
#[command(
    name = "modval",
    version,
    about = "Modular-value pointer simulations: figures, sweeps, errata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regenerate the data behind one figure, one CSV per panel.
    Figure {
        /// fig1 .. fig9
        id: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate one quantity over a Cartesian grid of parameters.
    Sweep {
        #[arg(long, default_value = "coherent")]
        pointer: String,
        #[arg(long, default_value = "p_n")]
        quantity: String,
        /// `param=start:stop:count` or `param=v1,v2,...`; repeatable, first varies slowest.
        #[arg(long = "sweep", value_name = "SPEC")]
        sweeps: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
        /// Output CSV file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the list of printed-formula discrepancies.
    Errata {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the closed-form pointer update with full unitary evolution.
    Check {
        #[arg(long, default_value_t = check::DEFAULT_CONFIGS)]
        configs: usize,
        #[arg(long, default_value_t = check::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Default)]
struct ParamArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_sq: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_cat: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi1: Option<f64>,
    /// Sets theta1 = atan(value) with g = phi1 = pi/2.
    #[arg(long, allow_hyphen_values = true)]
    modval: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    dim: Option<u32>,
    /// Photon number for p_n.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    quad_theta: Option<f64>,
    #[arg(long)]
    n_total: Option<u64>,
    #[arg(long, value_parser = ["final", "shift"])]
    snr_mode: Option<String>,
    #[arg(long, value_parser = ["exact", "paper"])]
    ps: Option<String>,
}

impl ParamArgs {
    fn overrides(&self) -> Result<Overrides> {
        let pairs = [
            (Param::Gamma, self.gamma),
            (Param::Phi, self.phi),
            (Param::AlphaRe, self.alpha_re),
            (Param::AlphaIm, self.alpha_im),
            (Param::R, self.r),
            (Param::ThetaSq, self.theta_sq),
            (Param::PhiCat, self.phi_cat),
            (Param::G, self.g),
            (Param::Theta1, self.theta1),
            (Param::Phi1, self.phi1),
            (Param::Modval, self.modval),
            (Param::M, self.m.map(f64::from)),
            (Param::Dim, self.dim.map(f64::from)),
            (Param::N, self.n.map(f64::from)),
            (Param::QuadTheta, self.quad_theta),
            (Param::NTotal, self.n_total.map(|v| v as f64)),
        ];
        let params: Vec<(Param, f64)> = pairs.into_iter().filter_map(|(p, v)| v.map(|v| (p, v))).collect();
        if self.modval.is_some() && (self.g.is_some() || self.theta1.is_some() || self.phi1.is_some()) {
            bail!("--modval fixes g, theta1 and phi1; pass either --modval or the angles");
        }
        Ok(Overrides {
            params,
            snr_mode: self.snr_mode.as_deref().map(str::parse::<SnrMode>).transpose()?,
            ps_convention: self.ps.as_deref().map(str::parse::<PsConvention>).transpose()?,
        })
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn sweep(pointer: &str, quantity: &str, sweeps: &[String], params: &ParamArgs, out: Option<&PathBuf>) -> Result<()> {
    let ov = params.overrides()?;
    let mut base = Params::with_family(parse_family(pointer)?);
    for &(p, v) in &ov.params {
        base.set(p, v)?;
    }
    if let Some(mode) = ov.snr_mode {
        base.snr_mode = mode;
    }
    if let Some(ps) = ov.ps_convention {
        base.ps_convention = ps;
    }
    let mut spec = SweepSpec::new(base, quantity.parse::<Observable>()?);
    for s in sweeps {
        spec = spec.with_axis(s.parse::<SweepAxis>()?);
    }
    let rows = run_sweep(&spec)?;
    write_csv(&rows, output(out)?)?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Figure { id, params, out } => {
            let paths = write_figure(&id, &params.overrides()?, &out).with_context(|| format!("figure {id}"))?;
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
        Command::Sweep {
            pointer,
            quantity,
            sweeps,
            params,
            out,
        } => sweep(&pointer, &quantity, &sweeps, &params, out.as_ref())?,
        Command::Errata { out } => output(out.as_ref())?.write_all(errata::errata_report().as_bytes())?,
        Command::Check { configs, seed } => {
            let summary = check::oracle_equivalence(configs, seed)?;
            let [c, s, k] = summary.families;
            println!(
                "oracle equivalence: {} configs (coherent {c}, squeezed {s}, cat {k}), max deviation {:.3e}, tolerance {:.0e}",
                summary.cases.len(),
                summary.max_deviation(),
                check::ORACLE_TOL
            );
            if !summary.passed() {
                if let Some(worst) = summary.worst() {
                    println!("worst case: {:?}", worst.config);
                }
                println!("FAIL");
                return Ok(false);
            }
            println!("PASS");
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
