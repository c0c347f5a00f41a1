//! Bipartite spin-coefficient matrices c_{σλ} for the fermion vector state and
//! the boson antisymmetric tensor state.
//!
//! Dirac matrices use the chiral representation with metric (+,−,−,−):
//! γ⁰ = offdiag(𝟙, 𝟙), γⁱ = offdiag(σᵢ, −σᵢ), γ_μ = (γ⁰, −γⁱ).
//!
//! Momentum-label normalization factors are identical in every expectation
//! value and norm at fixed (k, p), so states are stored as bare coefficient
//! matrices.

use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix4, SMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{FourMomentum, Kinematics};

type C = Complex64;

const ZERO_STATE: f64 = 1e-14;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub mod gamma {
    use super::*;

    pub fn pauli(i: usize) -> Matrix2<C> {
        let z = c(0.0, 0.0);
        match i {
            0 => Matrix2::identity(),
            1 => Matrix2::new(z, c(1.0, 0.0), c(1.0, 0.0), z),
            2 => Matrix2::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
            3 => Matrix2::new(c(1.0, 0.0), z, z, c(-1.0, 0.0)),
            _ => panic!("Pauli index {i} out of range"),
        }
    }

    fn blocks(tl: Matrix2<C>, tr: Matrix2<C>, bl: Matrix2<C>, br: Matrix2<C>) -> Matrix4<C> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&tl);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&tr);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&bl);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&br);
        m
    }

    /// γ^μ, upper index.
    pub fn upper(mu: usize) -> Matrix4<C> {
        let z = Matrix2::zeros();
        match mu {
            0 => blocks(z, Matrix2::identity(), Matrix2::identity(), z),
            1..=3 => blocks(z, pauli(mu), -pauli(mu), z),
            _ => panic!("Lorentz index {mu} out of range"),
        }
    }

    /// γ_μ = g_{μν} γ^ν.
    pub fn lower(mu: usize) -> Matrix4<C> {
        if mu == 0 {
            upper(0)
        } else {
            -upper(mu)
        }
    }
}

/// Dirac field amplitude v(q), stored 4×2 with the spin index σ on columns.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracAmplitude {
    pub v: SMatrix<C, 4, 2>,
}

pub fn dirac_amplitude(q: &FourMomentum, mass: f64) -> Result<DiracAmplitude> {
    q.check_on_shell(mass)?;
    let qs = |sign: f64| -> Matrix2<C> {
        let mut m = gamma::pauli(0) * c(q.energy, 0.0);
        for i in 0..3 {
            m += gamma::pauli(i + 1) * c(sign * q.space[i], 0.0);
        }
        m
    };
    let id = Matrix2::<C>::identity();
    let s2 = gamma::pauli(2);
    let top = (id + qs(1.0) / c(mass, 0.0)) * s2;
    let bottom = (id + qs(-1.0) / c(mass, 0.0)) * s2;
    let pref = 1.0 / (2.0 * (1.0 + q.energy / mass).sqrt());
    let mut v = SMatrix::<C, 4, 2>::zeros();
    v.fixed_view_mut::<2, 2>(0, 0).copy_from(&top);
    v.fixed_view_mut::<2, 2>(2, 0).copy_from(&bottom);
    Ok(DiracAmplitude { v: v * c(pref, 0.0) })
}

/// Fixed unitary relating Cartesian components to the λ = +1, 0, −1 basis.
pub fn polarization_basis() -> Matrix3<C> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Matrix3::new(
        c(-r, 0.0), c(0.0, r), c(0.0, 0.0),
        c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0),
        c(r, 0.0), c(0.0, r), c(0.0, 0.0),
    )
}

/// Vector-boson amplitude e^μ_λ(q), 4×3 with λ on columns.
#[derive(Clone, Debug, PartialEq)]
pub struct BosonAmplitude {
    pub e: SMatrix<C, 4, 3>,
}

pub fn boson_amplitude(q: &FourMomentum, mass: f64) -> Result<BosonAmplitude> {
    q.check_on_shell(mass)?;
    let qv = q.space.map(|x| c(x, 0.0));
    let boost = Matrix3::<C>::identity()
        + qv * qv.transpose() / c(mass * (mass + q.energy), 0.0);
    let mut raw = SMatrix::<C, 4, 3>::zeros();
    raw.fixed_view_mut::<1, 3>(0, 0)
        .copy_from(&(qv.transpose() / c(mass, 0.0)));
    raw.fixed_view_mut::<3, 3>(1, 0).copy_from(&boost);
    Ok(BosonAmplitude {
        e: raw * polarization_basis().transpose(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistics {
    Fermion,
    Boson,
}

impl Statistics {
    /// Sign picked up under exchange of the two particles.
    pub fn exchange_sign(self) -> f64 {
        match self {
            Self::Fermion => -1.0,
            Self::Boson => 1.0,
        }
    }
}

/// Σ c_{σλ} |(k,σ),(p,λ)⟩ with the (anti)symmetrized two-particle kets.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteSpinState {
    pub coeffs: DMatrix<C>,
    pub statistics: Statistics,
    pub k: FourMomentum,
    pub p: FourMomentum,
}

impl BipartiteSpinState {
    pub fn new(coeffs: DMatrix<C>, statistics: Statistics, k: FourMomentum, p: FourMomentum) -> Result<Self> {
        let state = Self {
            coeffs,
            statistics,
            k,
            p,
        };
        if state.coeffs.iter().all(|z| z.norm() < ZERO_STATE) {
            return Err(Error::ZeroState);
        }
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Amplitude of the full two-slot state on |ℓ₁,σ₁⟩ ⊗ |ℓ₂,σ₂⟩, where the
    /// labels are `false` for k and `true` for p.
    pub fn slot_amplitude(&self, first: (bool, usize), second: (bool, usize)) -> C {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match (first.0, second.0) {
            (false, true) => self.coeffs[(first.1, second.1)] * r,
            (true, false) => {
                self.coeffs[(second.1, first.1)] * (r * self.statistics.exchange_sign())
            }
            _ => c(0.0, 0.0),
        }
    }
}

/// Polarization four-vector φ^μ of the fermion vector state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VectorPolarization {
    pub time: C,
    pub space: Vector3<C>,
}

impl From<Vector3<C>> for VectorPolarization {
    fn from(space: Vector3<C>) -> Self {
        Self {
            time: c(0.0, 0.0),
            space,
        }
    }
}

/// c_{σλ} = −i φ^μ (vᵀ(k) γ²γ⁰γ_μ v(p))_{σλ}.
pub fn fermion_vector_coeffs(phi: &VectorPolarization, kin: &Kinematics) -> Result<BipartiteSpinState> {
    let (k, p) = (kin.k(), kin.p());
    let vk = dirac_amplitude(&k, kin.mass)?;
    let vp = dirac_amplitude(&p, kin.mass)?;
    let mut slashed = gamma::lower(0) * phi.time;
    for i in 0..3 {
        slashed += gamma::lower(i + 1) * phi.space[i];
    }
    let core = gamma::upper(2) * gamma::upper(0) * slashed;
    let m = vk.v.transpose() * core * vp.v * c(0.0, -1.0);
    let coeffs = DMatrix::from_iterator(2, 2, m.iter().copied());
    BipartiteSpinState::new(coeffs, Statistics::Fermion, k, p)
}

/// (α, β) parametrizing the antisymmetric tensor
/// T_{0j} = αʲ, T_{i0} = −αⁱ, T_{ij} = ε_{ijk}βᵏ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TensorPolarization {
    pub alpha: Vector3<C>,
    pub beta: Vector3<C>,
}

impl TensorPolarization {
    pub fn new(alpha: Vector3<C>, beta: Vector3<C>) -> Result<Self> {
        if alpha.iter().chain(beta.iter()).all(|z| z.norm() == 0.0) {
            return Err(Error::ZeroState);
        }
        Ok(Self { alpha, beta })
    }

    pub fn beta_only(beta: Vector3<C>) -> Result<Self> {
        Self::new(Vector3::zeros(), beta)
    }

    pub fn tensor(&self) -> Matrix4<C> {
        let mut t = Matrix4::zeros();
        let b = &self.beta;
        for j in 0..3 {
            t[(0, j + 1)] = self.alpha[j];
            t[(j + 1, 0)] = -self.alpha[j];
        }
        t[(1, 2)] = b[2];
        t[(2, 1)] = -b[2];
        t[(2, 3)] = b[0];
        t[(3, 2)] = -b[0];
        t[(3, 1)] = b[1];
        t[(1, 3)] = -b[1];
        t
    }
}

/// c_{σλ} = T_{μν} e^μ_σ(k) e^ν_λ(p).
pub fn boson_tensor_coeffs(pol: &TensorPolarization, kin: &Kinematics) -> Result<BipartiteSpinState> {
    let (k, p) = (kin.k(), kin.p());
    let ek = boson_amplitude(&k, kin.mass)?;
    let ep = boson_amplitude(&p, kin.mass)?;
    let m = ek.e.transpose() * pol.tensor() * ep.e;
    let coeffs = DMatrix::from_iterator(3, 3, m.iter().copied());
    BipartiteSpinState::new(coeffs, Statistics::Boson, k, p)
}
