//! Curve sweeps over x, local extremum localization, and x → ∞ limits.

use serde::{Deserialize, Serialize};

use crate::par;

/// Golden-section brackets are refined until narrower than this.
pub const BRACKET_TOL: f64 = 1e-8;
/// Total variation below which a curve counts as constant.
pub const CONSTANT_TOL: f64 = 1e-10;
/// Number of log-spaced points in the extremum search grid.
pub const SEARCH_POINTS: usize = 1001;
/// Lower end of the log-spaced search grid when the range starts at 0.
pub const LOG_FLOOR: f64 = 1e-6;
/// Far point at which the ultra-relativistic limit is read off.
pub const ASYMPTOTE_X: f64 = 1e12;
/// Reference point for the convergence check.
pub const ASYMPTOTE_CHECK_X: f64 = 1e10;
pub const ASYMPTOTE_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub steps: usize,
    pub scale: GridScale,
}

impl Default for GridSpec {
    /// x ∈ [0, 10], 1001 linear points.
    fn default() -> Self {
        Self {
            x_min: 0.0,
            x_max: 10.0,
            steps: 1001,
            scale: GridScale::Linear,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid needs x_min >= 0, x_max > x_min and steps >= 2 (got [{x_min}, {x_max}], {steps} steps)")]
    Invalid { x_min: f64, x_max: f64, steps: usize },
    #[error("evaluation failed at x = {x}: {message}")]
    Evaluation { x: f64, message: String },
    #[error("non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },
}

impl GridSpec {
    /// Grid abscissae. A log grid starting at 0 places x = 0 first and spreads
    /// the remaining points geometrically from [`LOG_FLOOR`].
    pub fn points(&self) -> Result<Vec<f64>, GridError> {
        let GridSpec { x_min, x_max, steps, scale } = *self;
        if !(x_min >= 0.0) || !(x_max > x_min) || !x_max.is_finite() || steps < 2 {
            return Err(GridError::Invalid { x_min, x_max, steps });
        }
        Ok(match scale {
            GridScale::Linear => linspace(x_min, x_max, steps),
            GridScale::Log if x_min == 0.0 => {
                let mut xs = vec![0.0];
                xs.extend(logspace(LOG_FLOOR.min(x_max / 10.0), x_max, steps - 1));
                xs
            }
            GridScale::Log => logspace(x_min, x_max, steps),
        })
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    let (l, h) = (lo.ln(), hi.ln());
    let step = (h - l) / (n - 1) as f64;
    (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => (l + step * i as f64).exp(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub grid: GridSpec,
    /// (x, value), x strictly increasing.
    pub samples: Vec<(f64, f64)>,
}

impl CorrelationCurve {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .values()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    }
}

/// Evaluates `f` on the grid, in parallel when enabled.
pub fn sweep<F, E>(f: F, grid: &GridSpec) -> Result<CorrelationCurve, GridError>
where
    F: Fn(f64) -> Result<f64, E> + Sync + Send,
    E: std::fmt::Display,
{
    let xs = grid.points()?;
    let values = par::try_map_collect(&xs, |&x| match f(x) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(value) => Err(GridError::NonFinite { x, value }),
        Err(e) => Err(GridError::Evaluation {
            x,
            message: e.to_string(),
        }),
    })?;
    Ok(CorrelationCurve {
        grid: *grid,
        samples: xs.into_iter().zip(values).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
    Monotonic,
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremumReport {
    pub kind: ExtremumKind,
    pub x_star: f64,
    pub value: f64,
    /// Width of the golden-section bracket at termination.
    pub bracket_width: f64,
    /// x → ∞ estimate of the same function.
    pub asymptote: f64,
}

/// Maximizes `f` on [lo, hi]; returns (x*, f(x*), final bracket width).
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x), hi - lo)
}

/// Search grid: x_min itself (when 0) plus [`SEARCH_POINTS`] log-spaced
/// points on [max(x_min, 1e-6), x_max].
fn search_grid(x_min: f64, x_max: f64) -> Vec<f64> {
    let lo = x_min.max(LOG_FLOOR);
    let mut xs = Vec::with_capacity(SEARCH_POINTS + 1);
    if x_min < lo {
        xs.push(x_min);
    }
    xs.extend(logspace(lo, x_max, SEARCH_POINTS));
    xs
}

/// Interior local extrema of `f` on [x_min, x_max]. An empty result means the
/// function is monotonic (or constant) there.
pub fn find_extrema<F>(f: F, x_min: f64, x_max: f64) -> Vec<ExtremumReport>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let xs = search_grid(x_min, x_max);
    let ys = par::map_collect(&xs, |&x| f(x));
    let variation: f64 = ys.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    if variation < CONSTANT_TOL {
        return Vec::new();
    }
    let limit = asymptote(&f).value;
    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let flat = 1e-14 * (1.0 + scale);

    let mut reports = Vec::new();
    // Index and sign of the last slope that was not numerically flat.
    let mut last: Option<(usize, f64)> = None;
    for i in 0..ys.len() - 1 {
        let d = ys[i + 1] - ys[i];
        if d.abs() <= flat {
            continue;
        }
        let sign = d.signum();
        if let Some((j, prev)) = last {
            if prev != sign {
                let (lo, hi) = (xs[j], xs[i + 1]);
                let kind = if prev > 0.0 { ExtremumKind::Max } else { ExtremumKind::Min };
                let flip = if kind == ExtremumKind::Max { 1.0 } else { -1.0 };
                let (x_star, _, width) = golden_section_max(|x| flip * f(x), lo, hi, BRACKET_TOL);
                reports.push(ExtremumReport {
                    kind,
                    x_star,
                    value: f(x_star),
                    bracket_width: width,
                    asymptote: limit,
                });
            }
        }
        last = Some((i, sign));
    }
    reports
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Asymptote {
    pub value: f64,
    pub reference: f64,
    pub converged: bool,
}

/// Reads the x → ∞ limit at [`ASYMPTOTE_X`] and checks it against
/// [`ASYMPTOTE_CHECK_X`].
pub fn asymptote<F: Fn(f64) -> f64>(f: F) -> Asymptote {
    let value = f(ASYMPTOTE_X);
    let reference = f(ASYMPTOTE_CHECK_X);
    let converged = value.is_finite()
        && reference.is_finite()
        && (value - reference).abs() < ASYMPTOTE_TOL * (1.0 + value.abs());
    Asymptote {
        value,
        reference,
        converged,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Constant,
    Increasing,
    Decreasing,
    Extremal,
}

/// Qualitative summary of a curve on a range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveProfile {
    pub shape: Shape,
    pub start: f64,
    pub end: f64,
    pub extrema: Vec<ExtremumReport>,
    pub asymptote: Asymptote,
}

impl CurveProfile {
    /// One report per extremum, or a single constant/monotonic entry.
    pub fn reports(&self) -> Vec<ExtremumReport> {
        if !self.extrema.is_empty() {
            return self.extrema.clone();
        }
        let kind = if self.shape == Shape::Constant {
            ExtremumKind::Constant
        } else {
            ExtremumKind::Monotonic
        };
        vec![ExtremumReport {
            kind,
            x_star: f64::NAN,
            value: self.start,
            bracket_width: 0.0,
            asymptote: self.asymptote.value,
        }]
    }

    pub fn maxima(&self) -> impl Iterator<Item = &ExtremumReport> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Max)
    }
}

pub fn profile<F>(f: F, x_min: f64, x_max: f64) -> CurveProfile
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let extrema = find_extrema(&f, x_min, x_max);
    let xs = search_grid(x_min, x_max);
    let ys = par::map_collect(&xs, |&x| f(x));
    let variation: f64 = ys.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let (start, end) = (ys[0], ys[ys.len() - 1]);
    let shape = if variation < CONSTANT_TOL {
        Shape::Constant
    } else if !extrema.is_empty() {
        Shape::Extremal
    } else if end > start {
        Shape::Increasing
    } else {
        Shape::Decreasing
    };
    CurveProfile {
        shape,
        start,
        end,
        extrema,
        asymptote: asymptote(&f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_grid_endpoints() {
        let xs = GridSpec::default().points().unwrap();
        assert_eq!(xs.len(), 1001);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[1000], 10.0);
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn log_grid_includes_zero() {
        let g = GridSpec {
            scale: GridScale::Log,
            steps: 50,
            ..GridSpec::default()
        };
        let xs = g.points().unwrap();
        assert_eq!(xs.len(), 50);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[49], 10.0);
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bad_grid() {
        let g = GridSpec { steps: 1, ..GridSpec::default() };
        assert!(g.points().is_err());
        let g = GridSpec { x_min: -1.0, ..GridSpec::default() };
        assert!(g.points().is_err());
    }

    #[test]
    fn sweep_constant() {
        let curve = sweep(|_| Ok::<_, String>(0.25), &GridSpec::default()).unwrap();
        assert_eq!(curve.spread(), 0.0);
    }

    #[test]
    fn sweep_reports_failing_x() {
        let err = sweep(
            |x| if x > 5.0 { Err("boom") } else { Ok(x) },
            &GridSpec::default(),
        )
        .unwrap_err();
        assert!(matches!(err, GridError::Evaluation { x, .. } if x > 5.0));
    }

    #[test]
    fn golden_section_quadratic() {
        let (x, v, w) = golden_section_max(|x| -(x - 1.3).powi(2) + 2.0, 0.0, 4.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
        assert!(w <= 1e-10);
    }

    #[test]
    fn monotonic_rational_has_no_extrema() {
        let f = |x: f64| (x - 2.0) / (x + 4.0);
        assert!(find_extrema(f, 0.0, 10.0).is_empty());
        let p = profile(f, 0.0, 10.0);
        assert_eq!(p.shape, Shape::Increasing);
        assert!((p.asymptote.value - 1.0).abs() < 1e-9);
        assert!(p.asymptote.converged);
        assert_eq!(p.reports()[0].kind, ExtremumKind::Monotonic);
    }

    #[test]
    fn finds_max_and_min() {
        let f = |x: f64| (x * 0.9).sin() / (1.0 + 0.01 * x);
        let ex = find_extrema(f, 0.0, 6.0);
        assert_eq!(ex.len(), 2);
        assert_eq!(ex[0].kind, ExtremumKind::Max);
        assert_eq!(ex[1].kind, ExtremumKind::Min);
        for e in &ex {
            let flip = if e.kind == ExtremumKind::Max { 1.0 } else { -1.0 };
            assert!(flip * (e.value - f(e.x_star + 1e-4)) >= 0.0);
            assert!(flip * (e.value - f(e.x_star - 1e-4)) >= 0.0);
            assert!(e.bracket_width < BRACKET_TOL);
        }
    }

    #[test]
    fn constant_detected() {
        let p = profile(|_| -0.5, 0.0, 10.0);
        assert_eq!(p.shape, Shape::Constant);
        assert!(p.extrema.is_empty());
        assert_eq!(p.reports()[0].kind, ExtremumKind::Constant);
    }

    #[test]
    fn nonconvergent_asymptote_flagged() {
        assert!(!asymptote(|x: f64| x.ln()).converged);
        assert!(asymptote(|x: f64| 1.0 / (1.0 + x)).converged);
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| x * (-x / 3.0).exp();
        assert_eq!(find_extrema(f, 0.0, 10.0), find_extrema(f, 0.0, 10.0));
    }
}
