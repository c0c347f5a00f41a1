//! Closed-form center-of-mass correlation functions, evaluated directly on an
//! [`InvariantSet`] and x = (|k|/m)².
//!
//! The β-only tensor forms assume a real polarization vector β (their
//! products carry no conjugates); only the real parts of the β products are
//! read. The general tensor form accepts complex α and β.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AlphaSector, InvariantSet};
use crate::spin_ops::OperatorKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    /// Spin-1/2 pair in the vector state built from φ.
    FermionVector,
    /// Spin-1 pair in the antisymmetric tensor state with arbitrary (α, β).
    BosonTensorGeneral,
    /// Spin-1 pair in the tensor state with α = 0.
    BosonTensorBeta,
}

impl SystemKind {
    pub fn tag(self) -> &'static str {
        match self {
            Self::FermionVector => "fermion_vector",
            Self::BosonTensorGeneral => "boson_tensor_general",
            Self::BosonTensorBeta => "boson_tensor_beta",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [Self::FermionVector, Self::BosonTensorGeneral, Self::BosonTensorBeta]
            .into_iter()
            .find(|k| k.tag() == tag)
    }

    pub fn has_closed_form(self, operator: OperatorKind) -> bool {
        !matches!(
            (self, operator),
            (Self::BosonTensorGeneral, OperatorKind::CenterOfMass)
        )
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Fermion vector state, Newton-Wigner operator.
pub fn c_nw_fermion(x: f64, inv: &InvariantSet) -> f64 {
    let p = &inv.pol;
    let u = (x + 1.0).sqrt();
    let n_pol_sq = p.n.norm_sqr();
    let denom = (x + 1.0) * p.norm_sq - x * n_pol_sq;
    let sym = |l: Complex64, r: Complex64| 2.0 * (l * r.conj()).re;
    let boost = x * u / (u + 1.0);

    inv.ab - (x + 1.0) * sym(p.a, p.b) / denom
        - 2.0 * x * x * inv.an * inv.bn * n_pol_sq / ((u + 1.0).powi(2) * denom)
        + boost * inv.an * sym(p.b, p.n) / denom
        + boost * inv.bn * sym(p.a, p.n) / denom
}

/// Fermion vector state, center-of-mass operator.
pub fn c_cm_fermion(x: f64, inv: &InvariantSet) -> f64 {
    let p = &inv.pol;
    let denom = (x + 1.0) * p.norm_sq - x * p.n.norm_sqr();
    let scale = (1.0 + x * inv.an * inv.an).sqrt() * (1.0 + x * inv.bn * inv.bn).sqrt();
    (inv.ab + x * inv.an * inv.bn) / scale
        - (x + 1.0) * 2.0 * (p.a * p.b.conj()).re / (scale * denom)
}

/// Tensor state with α = 0, Newton-Wigner operator.
pub fn c_nw_boson_beta(x: f64, inv: &InvariantSet) -> f64 {
    let (a_beta, b_beta, n_beta) = (inv.pol.a.re, inv.pol.b.re, inv.pol.n.re);
    let u = (x + 1.0).sqrt();
    let numer = (x + 1.0) * a_beta * b_beta
        + (u - 1.0).powi(2) * inv.an * inv.bn * n_beta * n_beta
        - (x + 1.0 - u) * n_beta * (inv.an * b_beta + a_beta * inv.bn);
    numer / beta_denominator(x, inv)
}

/// Tensor state with α = 0, center-of-mass operator.
pub fn c_cm_boson_beta(x: f64, inv: &InvariantSet) -> f64 {
    let scale = (1.0 + x * inv.an * inv.an).sqrt() * (1.0 + x * inv.bn * inv.bn).sqrt();
    (x + 1.0) * inv.pol.a.re * inv.pol.b.re / (scale * beta_denominator(x, inv))
}

/// x(β·n)² − (x+1)|β|², which is x|β·n|² − x − 1 for a unit β.
fn beta_denominator(x: f64, inv: &InvariantSet) -> f64 {
    let n_beta = inv.pol.n.re;
    x * n_beta * n_beta - (x + 1.0) * inv.pol.norm_sq
}

/// General antisymmetric tensor state, Newton-Wigner operator, for Alice
/// measuring the particle with momentum k and Bob the one with k^π.
///
/// The explicitly real term 2(√(x+1)−1)²(a·n)(b·n)|β·n|² enters once; the
/// complex conjugate is added for the remaining terms only.
pub fn c_nw_boson_general(x: f64, inv: &InvariantSet) -> Result<f64> {
    let zero = AlphaSector {
        products: crate::geometry::PolProducts::zero(),
        alpha_beta_conj: Complex64::default(),
        alpha_ab: Complex64::default(),
        a_alpha_n: Complex64::default(),
        b_alpha_n: Complex64::default(),
    };
    let al = inv.alpha.as_ref().unwrap_or(&zero);
    let beta = &inv.pol;
    let alpha = &al.products;

    let (an, bn, n_ab) = (inv.an, inv.bn, inv.n_ab);
    let sx = x.sqrt();
    let u = (x + 1.0).sqrt();

    let beta_n = beta.n;
    let beta_n_sq = beta_n.norm_sqr();
    let alpha_n_sq = alpha.n.norm_sqr();
    let denom = x * beta_n_sq
        - x * (2.0 * x + 1.0) * alpha_n_sq
        - (x + 1.0) * beta.norm_sq
        - x * alpha.norm_sq;
    let size = beta.norm_sq + alpha.norm_sq;
    if !(denom < -1e-14 * (1.0 + size)) {
        return Err(Error::DegenerateState { x });
    }

    let bcn = beta_n.conj(); // β*·n
    let a_bc = beta.a.conj(); // a·β*
    let b_bc = beta.b.conj(); // b·β*
    let a_alc_n = al.a_alpha_n.conj(); // a·(α*×n)
    let b_al_n = al.b_alpha_n;
    let a_al_n = al.a_alpha_n;

    let mut rest = (al.alpha_beta_conj * n_ab + bcn * al.alpha_ab) * sx;
    rest += beta.a * b_bc * (x + 1.0);
    rest -= a_alc_n * b_al_n * x;
    rest += (alpha.n * bcn * (2.0 * n_ab) + bcn * b_al_n * an) * (sx * (u - 1.0));
    rest -= (a_bc * b_al_n + bcn * a_al_n * bn - b_bc * a_al_n) * (sx * (u - 1.0));
    rest -= (beta.a * bn * bcn + beta.b * an * bcn) * (u * (u - 1.0));

    let real_term = 2.0 * (u - 1.0).powi(2) * an * bn * beta_n_sq;
    Ok((real_term + 2.0 * rest.re) / (2.0 * denom))
}

/// Evaluates the closed form for a (system, operator) pair.
pub fn closed_form(
    system: SystemKind,
    operator: OperatorKind,
    x: f64,
    inv: &InvariantSet,
) -> Result<f64> {
    use OperatorKind::*;
    use SystemKind::*;
    match (system, operator) {
        (FermionVector, NewtonWigner) => Ok(c_nw_fermion(x, inv)),
        (FermionVector, CenterOfMass) => Ok(c_cm_fermion(x, inv)),
        (BosonTensorBeta, NewtonWigner) => Ok(c_nw_boson_beta(x, inv)),
        (BosonTensorBeta, CenterOfMass) => Ok(c_cm_boson_beta(x, inv)),
        (BosonTensorGeneral, NewtonWigner) => c_nw_boson_general(x, inv),
        (BosonTensorGeneral, CenterOfMass) => Err(Error::Unsupported { system, operator }),
    }
}
