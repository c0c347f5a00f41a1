//! Center-of-mass kinematics: two particles of equal mass with momenta k and
//! p = k^π = (k⁰, −k).

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    pub energy: f64,
    pub space: Vector3<f64>,
}

impl FourMomentum {
    pub fn new(energy: f64, space: Vector3<f64>) -> Self {
        Self { energy, space }
    }

    /// On-shell momentum of a particle of mass `mass` with spatial part `space`.
    pub fn on_shell(mass: f64, space: Vector3<f64>) -> Self {
        Self {
            energy: (mass * mass + space.norm_squared()).sqrt(),
            space,
        }
    }

    /// q^π = (q⁰, −q).
    pub fn parity(&self) -> Self {
        Self {
            energy: self.energy,
            space: -self.space,
        }
    }

    pub fn check_on_shell(&self, mass: f64) -> Result<()> {
        let expected = (mass * mass + self.space.norm_squared()).sqrt();
        if !(mass > 0.0) || (self.energy - expected).abs() > 1e-9 * expected {
            return Err(Error::OffShell {
                e: self.energy,
                q: self.space.norm(),
                mass,
            });
        }
        Ok(())
    }
}

/// Which of the two particles an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Particle {
    /// Carries momentum k = |k| n.
    First,
    /// Carries momentum p = k^π.
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    pub mass: f64,
    /// (|k| / m)²
    pub x: f64,
    /// Direction of k.
    pub n: Vector3<f64>,
}

impl Kinematics {
    pub fn new(mass: f64, x: f64, n: Vector3<f64>) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidKinematics(format!("mass must be positive, got {mass}")));
        }
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidKinematics(format!("x must be finite and >= 0, got {x}")));
        }
        let len = n.norm();
        if (len - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidKinematics(format!("|n| = {len}, expected 1")));
        }
        Ok(Self { mass, x, n })
    }

    /// Unit-mass kinematics, the convention used throughout.
    pub fn unit_mass(x: f64, n: Vector3<f64>) -> Result<Self> {
        Self::new(1.0, x, n)
    }

    pub fn momentum_magnitude(&self) -> f64 {
        self.mass * self.x.sqrt()
    }

    pub fn energy(&self) -> f64 {
        self.mass * (self.x + 1.0).sqrt()
    }

    pub fn k(&self) -> FourMomentum {
        FourMomentum::new(self.energy(), self.n * self.momentum_magnitude())
    }

    pub fn p(&self) -> FourMomentum {
        self.k().parity()
    }

    pub fn momentum_of(&self, particle: Particle) -> FourMomentum {
        match particle {
            Particle::First => self.k(),
            Particle::Second => self.p(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let kin = Kinematics::new(2.0, 3.0, Vector3::z()).unwrap();
        assert!((kin.momentum_magnitude() - 2.0 * 3f64.sqrt()).abs() < 1e-15);
        assert!((kin.energy() - 4.0).abs() < 1e-15);
        assert_eq!(kin.p().space, -kin.k().space);
        assert!(kin.k().check_on_shell(2.0).is_ok());
        assert!(kin.p().energy >= kin.mass);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Kinematics::unit_mass(-0.1, Vector3::z()).is_err());
        assert!(Kinematics::unit_mass(f64::NAN, Vector3::z()).is_err());
        assert!(Kinematics::unit_mass(1.0, Vector3::new(0.0, 0.0, 2.0)).is_err());
        assert!(Kinematics::new(0.0, 1.0, Vector3::z()).is_err());
    }

    #[test]
    fn off_shell_detected() {
        let q = FourMomentum::new(1.5, Vector3::new(0.0, 0.0, 1.0));
        assert!(matches!(q.check_on_shell(1.0), Err(Error::OffShell { .. })));
    }
}
