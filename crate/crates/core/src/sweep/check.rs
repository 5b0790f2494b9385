//! Randomized comparison of the closed-form pointer update against full
//! unitary evolution.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::Result;
use crate::measurement::{final_pointer_analytic, final_pointer_oracle, phase_aligned_deviation, MeasurementConfig};
use crate::pointer::{PointerSpec, DEFAULT_DIM};
use crate::qubit::SelectionConfig;

pub const ORACLE_TOL: f64 = 1e-9;
pub const DEFAULT_CONFIGS: usize = 200;
pub const DEFAULT_SEED: u64 = 0x5eed_2017;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub config: MeasurementConfig,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub cases: Vec<OracleCase>,
    pub families: [usize; 3],
}

impl OracleSummary {
    pub fn max_deviation(&self) -> f64 {
        self.cases.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> Option<&OracleCase> {
        self.cases.iter().max_by(|a, b| a.deviation.total_cmp(&b.deviation))
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= ORACLE_TOL
    }
}

/// Draws a configuration whose pointer fits comfortably in `dim = 64`.
pub fn random_config(rng: &mut impl Rng, family: usize) -> MeasurementConfig {
    let polar = |rng: &mut dyn rand::RngCore, lo: f64, hi: f64| {
        Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..2.0 * PI))
    };
    let pointer = match family {
        0 => PointerSpec::Coherent {
            gamma: rng.gen_range(0.0..2.0),
            phi: rng.gen_range(0.0..2.0 * PI),
        },
        1 => PointerSpec::Squeezed {
            alpha: polar(rng, 0.0, 1.5),
            r: rng.gen_range(0.0..0.7),
            theta_sq: rng.gen_range(0.0..2.0 * PI),
        },
        _ => PointerSpec::Cat {
            alpha: polar(rng, 0.1, 2.0),
            phi_cat: rng.gen_range(0.0..2.0 * PI),
        },
    };
    let sel = SelectionConfig::new(
        rng.gen_range(0.0..1.4),
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.0..PI),
    );
    MeasurementConfig::new(sel, pointer, rng.gen_range(0..=10), DEFAULT_DIM)
}

/// Evaluates `count` seeded configurations, cycling through the families.
pub fn oracle_equivalence(count: usize, seed: u64) -> Result<OracleSummary> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    let mut families = [0; 3];
    for i in 0..count {
        let family = i % 3;
        families[family] += 1;
        let config = random_config(&mut rng, family);
        let analytic = final_pointer_analytic(&config)?;
        let oracle = final_pointer_oracle(&config)?;
        let deviation = phase_aligned_deviation(analytic.amplitudes(), oracle.amplitudes());
        cases.push(OracleCase { config, deviation });
    }
    Ok(OracleSummary { cases, families })
}
