//! Brute-force normalized correlation: build the bipartite state and the
//! single-particle operator matrices, contract, divide by s²⟨ψ|ψ⟩.
//!
//! For identical particles the product observable can be read two ways:
//! Alice measures the particle carrying k (and Bob the one carrying p), or the
//! reverse. Both contractions are returned. They coincide for vector states
//! and β-only tensor states; for general (α, β) tensor states the α–β
//! interference enters with opposite signs, and the closed form corresponds
//! to Alice at k.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlators::SystemKind;
use crate::error::{Error, Result};
use crate::geometry::RealizedFrame;
use crate::kinematics::{Kinematics, Particle};
use crate::spin_ops::{projection, OperatorKind, OperatorMatrix, SpinRep};
use crate::states::{
    boson_tensor_coeffs, fermion_vector_coeffs, BipartiteSpinState, TensorPolarization,
    VectorPolarization,
};

/// Alice's and Bob's operators, each evaluated at both momentum labels.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservablePair {
    pub a_at_k: OperatorMatrix,
    pub a_at_p: OperatorMatrix,
    pub b_at_k: OperatorMatrix,
    pub b_at_p: OperatorMatrix,
}

impl ObservablePair {
    pub fn build(
        kind: OperatorKind,
        a: &Vector3<f64>,
        b: &Vector3<f64>,
        kin: &Kinematics,
        rep: SpinRep,
    ) -> Result<Self> {
        let op = |axis, particle| projection(kind, axis, kin, particle, rep);
        Ok(Self {
            a_at_k: op(a, Particle::First)?,
            a_at_p: op(a, Particle::Second)?,
            b_at_k: op(b, Particle::First)?,
            b_at_p: op(b, Particle::Second)?,
        })
    }
}

/// The two exchange readings of a product observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contractions {
    /// Alice's operator on the k particle, Bob's on the p particle.
    pub alice_at_k: f64,
    /// Alice's operator on the p particle, Bob's on the k particle.
    pub alice_at_p: f64,
    /// Largest imaginary residue of the two raw contractions.
    pub imag_residue: f64,
}

impl Contractions {
    pub fn averaged(&self) -> f64 {
        0.5 * (self.alice_at_k + self.alice_at_p)
    }

    pub fn asymmetry(&self) -> f64 {
        (self.alice_at_k - self.alice_at_p).abs()
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            alice_at_k: self.alice_at_k * factor,
            alice_at_p: self.alice_at_p * factor,
            imag_residue: self.imag_residue * factor.abs(),
        }
    }
}

/// Σ c*_{σ'λ'} L[σ'σ] R[λ'λ] c_{σλ}.
pub fn contraction(c: &DMatrix<Complex64>, on_k: &DMatrix<Complex64>, on_p: &DMatrix<Complex64>) -> Complex64 {
    let moved = on_k * c * on_p.transpose();
    c.iter().zip(moved.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// ⟨ψ|A⊗B|ψ⟩ / ⟨ψ|ψ⟩ for both exchange readings.
pub fn expectation(state: &BipartiteSpinState, obs: &ObservablePair) -> Result<Contractions> {
    let dim = state.dim();
    for op in [&obs.a_at_k, &obs.a_at_p, &obs.b_at_k, &obs.b_at_p] {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch {
                operator: op.dim(),
                state: dim,
            });
        }
    }
    let norm = state.norm_sq();
    if norm < 1e-28 {
        return Err(Error::ZeroNorm);
    }
    let direct = contraction(&state.coeffs, &obs.a_at_k.entries, &obs.b_at_p.entries) / norm;
    let swapped = contraction(&state.coeffs, &obs.b_at_k.entries, &obs.a_at_p.entries) / norm;
    Ok(Contractions {
        alice_at_k: direct.re,
        alice_at_p: swapped.re,
        imag_residue: direct.im.abs().max(swapped.im.abs()),
    })
}

fn system_state(
    system: SystemKind,
    frame: &RealizedFrame,
    kin: &Kinematics,
    phi_time: Complex64,
) -> Result<(BipartiteSpinState, SpinRep)> {
    match system {
        SystemKind::FermionVector => {
            let phi = VectorPolarization {
                time: phi_time,
                space: frame.pol,
            };
            Ok((fermion_vector_coeffs(&phi, kin)?, SpinRep::Half))
        }
        SystemKind::BosonTensorBeta => {
            let pol = TensorPolarization::beta_only(frame.pol)?;
            Ok((boson_tensor_coeffs(&pol, kin)?, SpinRep::One))
        }
        SystemKind::BosonTensorGeneral => {
            let pol = TensorPolarization::new(frame.alpha.unwrap_or_default(), frame.pol)?;
            Ok((boson_tensor_coeffs(&pol, kin)?, SpinRep::One))
        }
    }
}

/// Both exchange readings of the normalized correlation, with φ⁰ exposed for
/// the fermion state.
pub fn correlation_contractions_with(
    system: SystemKind,
    frame: &RealizedFrame,
    x: f64,
    operator: OperatorKind,
    phi_time: Complex64,
) -> Result<Contractions> {
    let kin = Kinematics::unit_mass(x, frame.n)?;
    let (state, rep) = system_state(system, frame, &kin, phi_time)?;
    let obs = ObservablePair::build(operator, &frame.a, &frame.b, &kin, rep)?;
    let s = rep.spin();
    Ok(expectation(&state, &obs)?.scaled(1.0 / (s * s)))
}

pub fn correlation_contractions(
    system: SystemKind,
    frame: &RealizedFrame,
    x: f64,
    operator: OperatorKind,
) -> Result<Contractions> {
    correlation_contractions_with(system, frame, x, operator, Complex64::default())
}

/// Normalized correlation with Alice measuring the particle carrying k.
pub fn correlation_oracle(
    system: SystemKind,
    frame: &RealizedFrame,
    x: f64,
    operator: OperatorKind,
) -> Result<f64> {
    Ok(correlation_contractions(system, frame, x, operator)?.alice_at_k)
}
