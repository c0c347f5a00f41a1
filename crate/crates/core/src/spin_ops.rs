//! Single-particle spin observables at fixed momentum.
//!
//! On a momentum eigenspace the Newton-Wigner operator acts as the ordinary
//! spin-s matrices on the σ index. The center-of-mass projection follows from
//!
//! ```text
//! S_cm(ω) = [m (ω·S_NW) + W⁰ (ω·q)/(m + q⁰)] / √(m² + (ω·q)²),   W⁰ = q·S_NW,
//! ```
//!
//! where the last identity combines the definition of S_NW with transversality
//! of the Pauli-Lubanski vector, q⁰W⁰ = q·W.

use std::fmt;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{Kinematics, Particle};

const AXIS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinRep {
    Half,
    One,
}

impl SpinRep {
    pub fn from_twice_spin(two_s: u32) -> Result<Self> {
        match two_s {
            1 => Ok(Self::Half),
            2 => Ok(Self::One),
            other => Err(Error::UnsupportedSpin(other)),
        }
    }

    pub fn spin(self) -> f64 {
        match self {
            Self::Half => 0.5,
            Self::One => 1.0,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Self::Half => 2,
            Self::One => 3,
        }
    }

    /// Projections σ in basis order, highest first.
    pub fn projections(self) -> Vec<f64> {
        match self {
            Self::Half => vec![0.5, -0.5],
            Self::One => vec![1.0, 0.0, -1.0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    /// Newton-Wigner spin projection.
    #[serde(rename = "nw")]
    NewtonWigner,
    /// Normalized center-of-mass projection ω·W / √(m² + (ω·P)²).
    #[serde(rename = "cm")]
    CenterOfMass,
}

impl OperatorKind {
    pub fn tag(self) -> &'static str {
        match self {
            Self::NewtonWigner => "nw",
            Self::CenterOfMass => "cm",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NewtonWigner => f.write_str("Newton-Wigner operator"),
            Self::CenterOfMass => f.write_str("center-of-mass operator"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DMatrix<Complex64>,
    pub kind: OperatorKind,
    pub axis: Vector3<f64>,
    /// Spatial momentum of the particle the operator acts on (zero for NW).
    pub momentum: Vector3<f64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest |A − A†| entry.
    pub fn hermiticity_defect(&self) -> f64 {
        let diff = &self.entries - self.entries.adjoint();
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = nalgebra::SymmetricEigen::new(self.entries.clone());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Standard spin matrices (S_x, S_y, S_z) in the S_z eigenbasis, highest
/// projection first.
pub fn spin_matrices(rep: SpinRep) -> [DMatrix<Complex64>; 3] {
    let zero = c(0.0, 0.0);
    match rep {
        SpinRep::Half => {
            let h = 0.5;
            [
                DMatrix::from_row_slice(2, 2, &[zero, c(h, 0.0), c(h, 0.0), zero]),
                DMatrix::from_row_slice(2, 2, &[zero, c(0.0, -h), c(0.0, h), zero]),
                DMatrix::from_row_slice(2, 2, &[c(h, 0.0), zero, zero, c(-h, 0.0)]),
            ]
        }
        SpinRep::One => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            [
                DMatrix::from_row_slice(
                    3,
                    3,
                    &[zero, c(r, 0.0), zero, c(r, 0.0), zero, c(r, 0.0), zero, c(r, 0.0), zero],
                ),
                DMatrix::from_row_slice(
                    3,
                    3,
                    &[zero, c(0.0, -r), zero, c(0.0, r), zero, c(0.0, -r), zero, c(0.0, r), zero],
                ),
                DMatrix::from_row_slice(
                    3,
                    3,
                    &[c(1.0, 0.0), zero, zero, zero, zero, zero, zero, zero, c(-1.0, 0.0)],
                ),
            ]
        }
    }
}

/// v·S for a real 3-vector v.
fn project(v: &Vector3<f64>, rep: SpinRep) -> DMatrix<Complex64> {
    let [sx, sy, sz] = spin_matrices(rep);
    sx * c(v.x, 0.0) + sy * c(v.y, 0.0) + sz * c(v.z, 0.0)
}

fn check_axis(axis: &Vector3<f64>) -> Result<()> {
    let len = axis.norm();
    if !len.is_finite() || (len - 1.0).abs() > AXIS_TOL {
        return Err(Error::NonUnitAxis(len));
    }
    Ok(())
}

pub fn nw_projection(axis: &Vector3<f64>, rep: SpinRep) -> Result<OperatorMatrix> {
    check_axis(axis)?;
    Ok(OperatorMatrix {
        entries: project(axis, rep),
        kind: OperatorKind::NewtonWigner,
        axis: *axis,
        momentum: Vector3::zeros(),
    })
}

pub fn cm_projection(
    axis: &Vector3<f64>,
    kin: &Kinematics,
    particle: Particle,
    rep: SpinRep,
) -> Result<OperatorMatrix> {
    check_axis(axis)?;
    let q = kin.momentum_of(particle);
    let m = kin.mass;
    let wq = axis.dot(&q.space);
    let w0 = project(&q.space, rep);
    let entries = (project(axis, rep) * c(m, 0.0) + w0 * c(wq / (m + q.energy), 0.0))
        / c((m * m + wq * wq).sqrt(), 0.0);
    Ok(OperatorMatrix {
        entries,
        kind: OperatorKind::CenterOfMass,
        axis: *axis,
        momentum: q.space,
    })
}

/// Dispatches on the operator kind.
pub fn projection(
    kind: OperatorKind,
    axis: &Vector3<f64>,
    kin: &Kinematics,
    particle: Particle,
    rep: SpinRep,
) -> Result<OperatorMatrix> {
    match kind {
        OperatorKind::NewtonWigner => nw_projection(axis, rep),
        OperatorKind::CenterOfMass => cm_projection(axis, kin, particle, rep),
    }
}
