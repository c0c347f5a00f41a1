//! Seeded random measurement frames for oracle cross-checks.

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::correlators::SystemKind;
use crate::geometry::RealizedFrame;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let len = v.norm();
        if len > 1e-3 {
            return v / len;
        }
    }
}

/// Gaussian complex vector, not normalized.
pub fn complex_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<Complex64> {
    Vector3::from_fn(|_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn real_unit_pol<R: Rng + ?Sized>(rng: &mut R) -> Vector3<Complex64> {
    unit_vector(rng).map(Complex64::from)
}

/// Random frame with the polarization content each system's closed form
/// accepts: complex φ for fermions, real unit β for β-only tensor states,
/// complex (α, β) for general tensor states.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, system: SystemKind) -> RealizedFrame {
    let a = unit_vector(rng);
    let b = unit_vector(rng);
    let n = unit_vector(rng);
    let (pol, alpha) = match system {
        SystemKind::FermionVector => (complex_vector(rng), None),
        SystemKind::BosonTensorBeta => (real_unit_pol(rng), None),
        SystemKind::BosonTensorGeneral => (complex_vector(rng), Some(complex_vector(rng))),
    };
    RealizedFrame { a, b, n, pol, alpha }
}
