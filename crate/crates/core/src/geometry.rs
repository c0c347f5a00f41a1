//! Measurement geometry: the scalar products the closed-form correlators
//! consume, and concrete vectors realizing them for the oracle.
//!
//! Canonical orientation for realized frames: `n` along +z, `a` in the
//! xz-plane with `a_x >= 0`, and `b` with the sign of `b_y` chosen to match
//! the stored `n·(a×b)`.

use nalgebra::{Matrix3, Matrix4, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square-root arguments down to this value are clamped to zero.
const SQRT_TOL: f64 = 1e-12;
/// Below this a basis component is treated as absent.
const DEGENERATE: f64 = 1e-9;
/// Allowed mismatch between requested and realized invariants.
const REALIZE_TOL: f64 = 1e-9;

/// Products of one polarization vector `v` (φ or β, or α) with `a`, `b`, `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolProducts {
    pub a: Complex64,
    pub b: Complex64,
    pub n: Complex64,
    /// v·v*
    pub norm_sq: f64,
}

impl PolProducts {
    pub fn real(a: f64, b: f64, n: f64, norm_sq: f64) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            n: n.into(),
            norm_sq,
        }
    }

    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.a.im == 0.0 && self.b.im == 0.0 && self.n.im == 0.0
    }

    fn of(v: &Vector3<Complex64>, a: &Vector3<f64>, b: &Vector3<f64>, n: &Vector3<f64>) -> Self {
        Self {
            a: real_dot(a, v),
            b: real_dot(b, v),
            n: real_dot(n, v),
            norm_sq: v.iter().map(|z| z.norm_sqr()).sum(),
        }
    }
}

/// Extra invariants of the α-sector of an antisymmetric tensor state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSector {
    pub products: PolProducts,
    /// α·β*
    pub alpha_beta_conj: Complex64,
    /// α·(a×b)
    pub alpha_ab: Complex64,
    /// a·(α×n)
    pub a_alpha_n: Complex64,
    /// b·(α×n)
    pub b_alpha_n: Complex64,
}

/// Scalar products parametrizing every closed-form correlation function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub ab: f64,
    pub an: f64,
    pub bn: f64,
    /// n·(a×b). Its magnitude is fixed by the three cosines; the sign picks
    /// the handedness of the triad.
    pub n_ab: f64,
    /// Products with the polarization vector φ (fermions) or β (bosons).
    pub pol: PolProducts,
    /// Present only for general tensor states.
    pub alpha: Option<AlphaSector>,
}

/// det of the Gram matrix of {a, b, n} from its three cosines.
pub fn abn_gram_det(ab: f64, an: f64, bn: f64) -> f64 {
    1.0 + 2.0 * ab * an * bn - ab * ab - an * an - bn * bn
}

/// Right-handed triple product n·(a×b) implied by the cosines. Determinants
/// at rounding level are treated as coplanar.
pub fn triple_product(ab: f64, an: f64, bn: f64) -> f64 {
    let det = abn_gram_det(ab, an, bn);
    if det < 1e-14 {
        0.0
    } else {
        det.sqrt()
    }
}

impl InvariantSet {
    /// Builds a set with a real polarization vector of squared norm
    /// `norm_sq`, choosing the right-handed orientation `n·(a×b) >= 0`.
    pub fn real_pol(ab: f64, an: f64, bn: f64, pol: [f64; 3], norm_sq: f64) -> Result<Self> {
        let inv = Self {
            ab,
            an,
            bn,
            n_ab: triple_product(ab, an, bn),
            pol: PolProducts::real(pol[0], pol[1], pol[2], norm_sq),
            alpha: None,
        };
        inv.check_ranges()?;
        Ok(inv)
    }

    /// Real unit polarization vector, the reading used for figure presets.
    pub fn real_unit(ab: f64, an: f64, bn: f64, a_pol: f64, b_pol: f64, n_pol: f64) -> Result<Self> {
        Self::real_pol(ab, an, bn, [a_pol, b_pol, n_pol], 1.0)
    }

    /// Rejects non-finite values, cosines outside [-1, 1] and empty states.
    pub fn check_ranges(&self) -> Result<()> {
        for (field, v) in [("ab", self.ab), ("an", self.an), ("bn", self.bn)] {
            if !v.is_finite() {
                return Err(invalid(field, format!("{v} is not finite")));
            }
            if v.abs() > 1.0 + 1e-12 {
                return Err(invalid(field, format!("cosine {v} lies outside [-1, 1]")));
            }
        }
        if !self.n_ab.is_finite() {
            return Err(invalid("n_ab", "not finite".into()));
        }
        check_pol("pol", &self.pol)?;
        let alpha_norm = match &self.alpha {
            Some(al) => {
                check_pol("alpha", &al.products)?;
                for (field, z) in [
                    ("alpha_beta_conj", al.alpha_beta_conj),
                    ("alpha_ab", al.alpha_ab),
                    ("a_alpha_n", al.a_alpha_n),
                    ("b_alpha_n", al.b_alpha_n),
                ] {
                    if !z.re.is_finite() || !z.im.is_finite() {
                        return Err(invalid(field, "not finite".into()));
                    }
                }
                al.products.norm_sq
            }
            None => 0.0,
        };
        if self.pol.norm_sq <= 0.0 && alpha_norm <= 0.0 {
            return Err(invalid(
                "pol_norm_sq",
                "polarization vector must be non-zero".into(),
            ));
        }
        Ok(())
    }
}

fn check_pol(prefix: &'static str, p: &PolProducts) -> Result<()> {
    for z in [p.a, p.b, p.n] {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(invalid(prefix, "polarization product not finite".into()));
        }
    }
    if !p.norm_sq.is_finite() || p.norm_sq < 0.0 {
        return Err(invalid(prefix, format!("norm squared {} must be >= 0", p.norm_sq)));
    }
    // Cauchy-Schwarz against unit a, b, n.
    let bound = p.norm_sq.sqrt() * (1.0 + 1e-9) + 1e-12;
    for (z, which) in [(p.a, "a"), (p.b, "b"), (p.n, "n")] {
        if z.norm() > bound {
            return Err(invalid(
                prefix,
                format!("|{which}·v| = {} exceeds |v| = {}", z.norm(), p.norm_sq.sqrt()),
            ));
        }
    }
    Ok(())
}

fn invalid(field: &'static str, reason: String) -> Error {
    Error::InvalidInvariant { field, reason }
}

/// Concrete vectors realizing an [`InvariantSet`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizedFrame {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub n: Vector3<f64>,
    /// φ for fermion states, β for tensor states.
    pub pol: Vector3<Complex64>,
    pub alpha: Option<Vector3<Complex64>>,
}

impl RealizedFrame {
    pub fn new(
        a: Vector3<f64>,
        b: Vector3<f64>,
        n: Vector3<f64>,
        pol: Vector3<Complex64>,
        alpha: Option<Vector3<Complex64>>,
    ) -> Result<Self> {
        for (field, v) in [("a", &a), ("b", &b), ("n", &n)] {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(invalid(field, "vector has non-finite components".into()));
            }
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(invalid(field, format!("|{field}| = {} is not 1", v.norm())));
            }
        }
        Ok(Self { a, b, n, pol, alpha })
    }
}

fn real_dot(r: &Vector3<f64>, v: &Vector3<Complex64>) -> Complex64 {
    r.iter().zip(v.iter()).map(|(x, z)| z * *x).sum()
}

fn real_cross(r: &Vector3<f64>, v: &Vector3<Complex64>) -> Vector3<Complex64> {
    let r = r.map(Complex64::from);
    r.cross(v)
}

/// Exact scalar and triple products of the stored vectors.
pub fn invariants_of(frame: &RealizedFrame) -> InvariantSet {
    let RealizedFrame { a, b, n, pol, alpha } = frame;
    let alpha = alpha.as_ref().map(|al| {
        let alpha_n = -real_cross(n, al); // α×n = −(n×α)
        AlphaSector {
            products: PolProducts::of(al, a, b, n),
            alpha_beta_conj: al.iter().zip(pol.iter()).map(|(x, y)| x * y.conj()).sum(),
            alpha_ab: real_dot(&a.cross(b), al),
            a_alpha_n: real_dot(a, &alpha_n),
            b_alpha_n: real_dot(b, &alpha_n),
        }
    });
    InvariantSet {
        ab: a.dot(b),
        an: a.dot(n),
        bn: b.dot(n),
        n_ab: n.dot(&a.cross(b)),
        pol: PolProducts::of(pol, a, b, n),
        alpha,
    }
}

/// Outcome of the consistency gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Smallest eigenvalue of the Gram matrix of {a, b, n}.
    pub abn_min_eigenvalue: f64,
    pub abn_psd: bool,
    /// |n·(a×b)|² agrees with det Gram(a, b, n).
    pub orientation_consistent: bool,
    /// Smallest eigenvalue of the 4×4 Gram matrix of {a, b, n, pol} for a
    /// real polarization vector; `None` when the products are complex.
    pub full_min_eigenvalue: Option<f64>,
    /// The whole configuration fits in three real dimensions with a real
    /// polarization vector (PSD and rank <= 3).
    pub full_realizable: Option<bool>,
}

impl ValidationReport {
    /// The measurement triad is geometrically consistent.
    pub fn passes(&self) -> bool {
        self.abn_psd && self.orientation_consistent
    }
}

pub fn abn_gram(ab: f64, an: f64, bn: f64) -> Matrix3<f64> {
    Matrix3::new(1.0, ab, an, ab, 1.0, bn, an, bn, 1.0)
}

/// Gram matrix of {a, b, n, pol} in that order, when the products are real.
pub fn full_gram(inv: &InvariantSet) -> Option<Matrix4<f64>> {
    if !inv.pol.is_real() {
        return None;
    }
    let p = &inv.pol;
    Some(Matrix4::new(
        1.0, inv.ab, inv.an, p.a.re,
        inv.ab, 1.0, inv.bn, p.b.re,
        inv.an, inv.bn, 1.0, p.n.re,
        p.a.re, p.b.re, p.n.re, p.norm_sq,
    ))
}

pub fn gram_validate(inv: &InvariantSet) -> ValidationReport {
    let g = abn_gram(inv.ab, inv.an, inv.bn);
    let abn_min = g.symmetric_eigenvalues().min();
    let det = abn_gram_det(inv.ab, inv.an, inv.bn);
    let orientation_consistent = (inv.n_ab * inv.n_ab - det.max(0.0)).abs() <= 1e-9;
    let full_min = full_gram(inv).map(|m| m.symmetric_eigenvalues().min());
    let scale = 1.0 + inv.pol.norm_sq;
    ValidationReport {
        abn_min_eigenvalue: abn_min,
        abn_psd: abn_min >= -SQRT_TOL,
        orientation_consistent,
        full_min_eigenvalue: full_min,
        full_realizable: full_min.map(|m| m.abs() <= REALIZE_TOL * scale),
    }
}

fn checked_sqrt(arg: f64, what: &str) -> Result<f64> {
    if arg < -SQRT_TOL {
        return Err(Error::NotRealizable(format!(
            "{what}: square-root argument {arg:e} is negative"
        )));
    }
    Ok(arg.max(0.0).sqrt())
}

/// Builds concrete vectors with the requested products.
///
/// Deterministic: `n = ẑ`, `a = (√(1−an²), 0, an)`, then `b` and the
/// polarization vectors by sequential elimination. Components that the
/// products leave undetermined receive the remaining norm, real and
/// non-negative, on the first free axis (x before y).
pub fn realize(inv: &InvariantSet) -> Result<RealizedFrame> {
    inv.check_ranges()?;
    let report = gram_validate(inv);
    if !report.abn_psd {
        return Err(Error::NotRealizable(format!(
            "Gram matrix of a, b, n has eigenvalue {:e}",
            report.abn_min_eigenvalue
        )));
    }

    let n = Vector3::z();
    let ax = checked_sqrt(1.0 - inv.an * inv.an, "a")?;
    let a = Vector3::new(ax, 0.0, inv.an);

    let (bx, by) = if ax > DEGENERATE {
        let bx = (inv.ab - inv.an * inv.bn) / ax;
        let by = checked_sqrt(1.0 - inv.bn * inv.bn - bx * bx, "b")?;
        (bx, if inv.n_ab < 0.0 { -by } else { by })
    } else {
        // a = ±n: b can be rotated into the xz-plane.
        (checked_sqrt(1.0 - inv.bn * inv.bn, "b")?, 0.0)
    };
    let b = Vector3::new(bx, by, inv.bn);

    let pol = realize_pol(&inv.pol, &a, &b, "pol")?;
    let alpha = inv
        .alpha
        .as_ref()
        .map(|al| realize_pol(&al.products, &a, &b, "alpha"))
        .transpose()?;

    let frame = RealizedFrame { a, b, n, pol, alpha };
    verify_round_trip(inv, &invariants_of(&frame))?;
    Ok(frame)
}

fn realize_pol(
    p: &PolProducts,
    a: &Vector3<f64>,
    b: &Vector3<f64>,
    what: &str,
) -> Result<Vector3<Complex64>> {
    let (ax, az) = (a.x, a.z);
    let (bx, by, bz) = (b.x, b.y, b.z);
    let vz = p.n;
    let mut vx = None;
    let mut vy = None;
    if ax > DEGENERATE {
        let x = (p.a - vz * az) / ax;
        vx = Some(x);
        if by.abs() > DEGENERATE {
            vy = Some((p.b - x * bx - vz * bz) / by);
        }
    } else if bx > DEGENERATE {
        vx = Some((p.b - vz * bz) / bx);
    }

    let fixed: f64 = [Some(vz), vx, vy].iter().flatten().map(|z| z.norm_sqr()).sum();
    let rest = p.norm_sq - fixed;
    let scale = 1.0 + p.norm_sq;
    let mut v = Vector3::new(vx.unwrap_or_default(), vy.unwrap_or_default(), vz);
    match (vx, vy) {
        (Some(_), Some(_)) => {
            if rest.abs() > REALIZE_TOL * scale {
                return Err(Error::NotRealizable(format!(
                    "{what}: products require squared norm {fixed}, requested {}",
                    p.norm_sq
                )));
            }
        }
        (None, _) => v.x = leftover_norm(rest, scale, what)?.into(),
        (Some(_), None) => v.y = leftover_norm(rest, scale, what)?.into(),
    }
    Ok(v)
}

fn leftover_norm(rest: f64, scale: f64, what: &str) -> Result<f64> {
    if rest < -REALIZE_TOL * scale {
        return Err(Error::NotRealizable(format!(
            "{what}: products exceed the requested norm by {:e}",
            -rest
        )));
    }
    Ok(rest.max(0.0).sqrt())
}

fn verify_round_trip(want: &InvariantSet, got: &InvariantSet) -> Result<()> {
    let mut pairs: Vec<(&str, Complex64, Complex64)> = vec![
        ("ab", want.ab.into(), got.ab.into()),
        ("an", want.an.into(), got.an.into()),
        ("bn", want.bn.into(), got.bn.into()),
        ("n_ab", want.n_ab.into(), got.n_ab.into()),
        ("a_pol", want.pol.a, got.pol.a),
        ("b_pol", want.pol.b, got.pol.b),
        ("n_pol", want.pol.n, got.pol.n),
        ("pol_norm_sq", want.pol.norm_sq.into(), got.pol.norm_sq.into()),
    ];
    if let (Some(w), Some(g)) = (&want.alpha, &got.alpha) {
        pairs.extend([
            ("a_alpha", w.products.a, g.products.a),
            ("b_alpha", w.products.b, g.products.b),
            ("n_alpha", w.products.n, g.products.n),
            ("alpha_norm_sq", w.products.norm_sq.into(), g.products.norm_sq.into()),
            ("alpha_beta_conj", w.alpha_beta_conj, g.alpha_beta_conj),
            ("alpha_ab", w.alpha_ab, g.alpha_ab),
            ("a_alpha_n", w.a_alpha_n, g.a_alpha_n),
            ("b_alpha_n", w.b_alpha_n, g.b_alpha_n),
        ]);
    }
    let scale = 1.0
        + want.pol.norm_sq
        + want.alpha.map_or(0.0, |al| al.products.norm_sq);
    for (field, w, g) in pairs {
        if (w - g).norm() > REALIZE_TOL * scale {
            return Err(Error::NotRealizable(format!(
                "`{field}`: requested {w}, best realization gives {g}"
            )));
        }
    }
    Ok(())
}
