//! Closed form vs. oracle over seeded random frames.

use serde::{Deserialize, Serialize};

use crate::correlators::{closed_form, SystemKind};
use crate::error::Result;
use crate::geometry::{invariants_of, RealizedFrame};
use crate::oracle::correlation_contractions;
use crate::par;
use crate::sampling::{random_frame, rng};
use crate::spin_ops::OperatorKind;

pub const CHECK_XS: [f64; 5] = [0.0, 0.1, 1.0, 5.0, 25.0];
pub const CHECK_TOL: f64 = 1e-10;

/// Every (system, operator) pair that has a closed form.
pub const CLOSED_FORM_PAIRS: [(SystemKind, OperatorKind); 5] = [
    (SystemKind::FermionVector, OperatorKind::NewtonWigner),
    (SystemKind::FermionVector, OperatorKind::CenterOfMass),
    (SystemKind::BosonTensorBeta, OperatorKind::NewtonWigner),
    (SystemKind::BosonTensorBeta, OperatorKind::CenterOfMass),
    (SystemKind::BosonTensorGeneral, OperatorKind::NewtonWigner),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDeviation {
    pub system: SystemKind,
    pub operator: OperatorKind,
    pub max_deviation: f64,
    pub worst_x: f64,
    pub worst_frame: RealizedFrame,
    /// Largest |alice_at_k − alice_at_p| seen; zero up to rounding except for
    /// general tensor states.
    pub max_exchange_asymmetry: f64,
    pub max_imag_residue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheckReport {
    pub seed: u64,
    pub trials: usize,
    pub xs: Vec<f64>,
    pub tolerance: f64,
    pub pairs: Vec<PairDeviation>,
}

impl OracleCheckReport {
    pub fn success(&self) -> bool {
        self.pairs.iter().all(|p| p.max_deviation < self.tolerance)
    }

    pub fn worst(&self) -> Option<&PairDeviation> {
        self.pairs
            .iter()
            .max_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation))
    }
}

struct Sample {
    deviation: f64,
    x: f64,
    asymmetry: f64,
    imag: f64,
}

fn check_frame(
    system: SystemKind,
    operator: OperatorKind,
    frame: &RealizedFrame,
    xs: &[f64],
) -> Result<Sample> {
    let inv = invariants_of(frame);
    let mut worst = Sample {
        deviation: 0.0,
        x: xs[0],
        asymmetry: 0.0,
        imag: 0.0,
    };
    for &x in xs {
        let closed = closed_form(system, operator, x, &inv)?;
        let oracle = correlation_contractions(system, frame, x, operator)?;
        let dev = (closed - oracle.alice_at_k).abs();
        if dev > worst.deviation || dev.is_nan() {
            worst.deviation = if dev.is_nan() { f64::INFINITY } else { dev };
            worst.x = x;
        }
        worst.asymmetry = worst.asymmetry.max(oracle.asymmetry());
        worst.imag = worst.imag.max(oracle.imag_residue);
    }
    Ok(worst)
}

/// Draws `trials` frames per system from `seed` and compares every closed
/// form with the oracle on `xs`.
pub fn oracle_check(seed: u64, trials: usize, xs: &[f64]) -> Result<OracleCheckReport> {
    let mut rng = rng(seed);
    let mut pairs = Vec::new();
    for (system, operator) in CLOSED_FORM_PAIRS {
        let frames: Vec<RealizedFrame> =
            (0..trials).map(|_| random_frame(&mut rng, system)).collect();
        let samples = par::try_map_collect(&frames, |f| check_frame(system, operator, f, xs))?;
        let (idx, worst) = samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.deviation.total_cmp(&b.1.deviation))
            .expect("at least one trial");
        pairs.push(PairDeviation {
            system,
            operator,
            max_deviation: worst.deviation,
            worst_x: worst.x,
            worst_frame: frames[idx].clone(),
            max_exchange_asymmetry: samples.iter().map(|s| s.asymmetry).fold(0.0, f64::max),
            max_imag_residue: samples.iter().map(|s| s.imag).fold(0.0, f64::max),
        });
    }
    Ok(OracleCheckReport {
        seed,
        trials,
        xs: xs.to_vec(),
        tolerance: CHECK_TOL,
        pairs,
    })
}
