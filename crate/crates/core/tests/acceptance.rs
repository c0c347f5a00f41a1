//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use std::time::Instant;

use nalgebra::Vector3;
use rand::Rng;

use relcorr::analysis::{asymptote, profile, CurveProfile, ExtremumReport, Shape};
use relcorr::correlators::{closed_form, SystemKind};
use relcorr::crosscheck::{oracle_check, CHECK_XS};
use relcorr::geometry::{invariants_of, InvariantSet, RealizedFrame};
use relcorr::kinematics::{Kinematics, Particle};
use relcorr::sampling::{random_frame, rng, unit_vector};
use relcorr::scenario::preset;
use relcorr::spin_ops::{cm_projection, nw_projection, OperatorKind, SpinRep};

const NW: OperatorKind = OperatorKind::NewtonWigner;
const CM: OperatorKind = OperatorKind::CenterOfMass;
const EXACT: f64 = 1e-12;
const LIMIT: f64 = 1e-3;

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: String) {
        self.pass &= ok;
        self.details.push(format!("{}{}", if ok { "" } else { "!! " }, what));
    }

    fn near(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        let text = if want == 0.0 {
            format!("{label} = {got:.2e} (want 0 ± {tol:e})")
        } else {
            format!("{label} = {got:.6} (want {want:.6} ± {tol:e})")
        };
        self.check(ok, text);
    }
}

fn preset_fn(name: &str, op: OperatorKind) -> impl Fn(f64) -> f64 + Sync + Send {
    let s = preset(name).expect("preset exists");
    move |x| closed_form(s.system, op, x, &s.invariants).expect("closed form")
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn max_pointwise(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, xs: &[f64]) -> f64 {
    xs.iter().map(|&x| (f(x) - g(x)).abs()).fold(0.0, f64::max)
}

fn single_max(p: &CurveProfile) -> Option<ExtremumReport> {
    let maxima: Vec<_> = p.maxima().copied().collect();
    (maxima.len() == 1).then(|| maxima[0])
}

fn check_peak(out: &mut Outcome, label: &str, p: &CurveProfile, value: f64, x: f64, vtol: f64, xtol: f64) {
    match single_max(p) {
        Some(m) => {
            out.near(&format!("{label} max value"), m.value, value, vtol);
            out.near(&format!("{label} max position"), m.x_star, x, xtol);
        }
        None => out.check(false, format!("{label}: expected one interior maximum, found shape {:?}", p.shape)),
    }
}

fn c1_oracle_equivalence() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let report = oracle_check(2024, 1000, &CHECK_XS).expect("oracle check runs");
    let elapsed = start.elapsed().as_secs_f64();
    for p in &report.pairs {
        out.check(
            p.max_deviation < 1e-10,
            format!("{} {}: max dev {:.2e}", p.system.tag(), p.operator.tag(), p.max_deviation),
        );
    }
    out.check(elapsed < 60.0, format!("runtime {elapsed:.2}s"));
    out
}

fn c2_fig3() -> Outcome {
    let mut out = Outcome::new();
    let xs = grid(0.0, 10.0, 1001);
    let nw = preset_fn("fig3", NW);
    let cm = preset_fn("fig3", CM);
    out.near("max |NW + 0.5|", max_pointwise(&nw, |_| -0.5, &xs), 0.0, EXACT);
    out.near("max |CM − (x−2)/(x+4)|", max_pointwise(&cm, |x| (x - 2.0) / (x + 4.0), &xs), 0.0, EXACT);
    out.near("CM asymptote", asymptote(&cm).value, 1.0, LIMIT);
    out
}

fn c3_fig6() -> Outcome {
    let mut out = Outcome::new();
    let xs = grid(0.0, 10.0, 1001);
    let r3 = 3f64.sqrt();
    let nw = preset_fn("fig6", NW);
    let cm = preset_fn("fig6", CM);
    out.near("max |NW + √3/8|", max_pointwise(&nw, |_| -r3 / 8.0, &xs), 0.0, EXACT);
    out.near(
        "max |CM − closed curve|",
        max_pointwise(&cm, |x| -r3 / (8.0 * (1.0 + x / 4.0).sqrt()), &xs),
        0.0,
        EXACT,
    );
    out.near("CM asymptote", asymptote(&cm).value, 0.0, LIMIT);
    out
}

fn c4_fig1() -> Outcome {
    let mut out = Outcome::new();
    let nw = profile(preset_fn("fig1", NW), 0.0, 10.0);
    check_peak(&mut out, "NW", &nw, 0.89, 2.30, 0.005, 0.01);
    let cm = profile(preset_fn("fig1", CM), 0.0, 1e3);
    out.check(
        matches!(cm.shape, Shape::Increasing | Shape::Decreasing),
        format!("CM shape on [0, 1e3] = {:?}", cm.shape),
    );
    out.near("CM asymptote", cm.asymptote.value, 1.0, LIMIT);
    out
}

fn c5_fig2() -> Outcome {
    let mut out = Outcome::new();
    let cm = profile(preset_fn("fig2", CM), 0.0, 10.0);
    check_peak(&mut out, "CM", &cm, 0.47, 1.03, 0.005, 0.01);
    out.near("CM asymptote", cm.asymptote.value, -1.0, LIMIT);
    let nw = profile(preset_fn("fig2", NW), 0.0, 10.0);
    out.check(nw.shape == Shape::Decreasing, format!("NW shape = {:?}", nw.shape));
    out.near("NW asymptote", nw.asymptote.value, -0.5, LIMIT);
    out
}

fn c6_fig4() -> Outcome {
    let mut out = Outcome::new();
    let nw = profile(preset_fn("fig4", NW), 0.0, 10.0);
    check_peak(&mut out, "NW", &nw, 0.79, 0.81, 0.01, 0.01);
    let cm = profile(preset_fn("fig4", CM), 0.0, 10.0);
    check_peak(&mut out, "CM", &cm, 1.10, 0.73, 0.01, 0.01);
    out.near("NW asymptote", nw.asymptote.value, 3.0 / (4.0 * 2f64.sqrt()), LIMIT);
    out.near("CM asymptote", cm.asymptote.value, 0.0, LIMIT);
    out
}

fn c7_fig5() -> Outcome {
    let mut out = Outcome::new();
    let nw = preset_fn("fig5", NW);
    let cm = preset_fn("fig5", CM);
    out.near("NW(0)", nw(0.0), 0.0, EXACT);
    out.near("NW asymptote", asymptote(&nw).value, 3f64.sqrt() / 4.0, LIMIT);
    out.near("max |CM|", max_pointwise(&cm, |_| 0.0, &grid(0.0, 10.0, 1001)), 0.0, EXACT);
    out
}

fn c8_fig7() -> Outcome {
    let mut out = Outcome::new();
    let nw = preset_fn("fig7", NW);
    let cm = preset_fn("fig7", CM);
    out.near("NW(0)", nw(0.0), 0.5, EXACT);
    out.near("NW asymptote", asymptote(&nw).value, 0.75, LIMIT);
    out.near(
        "max |CM − closed curve|",
        max_pointwise(&cm, |x| 8.0 * (x + 1.0) / ((x + 4.0) * (3.0 * x + 4.0)), &grid(0.0, 10.0, 1001)),
        0.0,
        EXACT,
    );
    out
}

fn c9_operator_properties() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng(9);
    let (mut herm, mut spec, mut at_rest, mut transverse) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for rep in [SpinRep::Half, SpinRep::One] {
        let mut want = rep.projections();
        want.sort_by(f64::total_cmp);
        for _ in 0..100 {
            let axis = unit_vector(&mut r);
            let n = unit_vector(&mut r);
            let x = 10f64.powf(r.gen_range(-3.0..3.0));
            let particle = if r.gen_bool(0.5) { Particle::First } else { Particle::Second };
            let kin = Kinematics::unit_mass(x, n).unwrap();
            let op = cm_projection(&axis, &kin, particle, rep).unwrap();
            herm = herm.max(op.hermiticity_defect());
            let mut ev = op.eigenvalues();
            ev.sort_by(f64::total_cmp);
            for (got, want) in ev.iter().zip(&want) {
                spec = spec.max((got - want).abs());
            }

            let rest = Kinematics::unit_mass(0.0, n).unwrap();
            let diff = |a: &relcorr::spin_ops::OperatorMatrix, b: &relcorr::spin_ops::OperatorMatrix| {
                (&a.entries - &b.entries).iter().map(|z| z.norm()).fold(0.0, f64::max)
            };
            let nw = nw_projection(&axis, rep).unwrap();
            at_rest = at_rest.max(diff(&cm_projection(&axis, &rest, particle, rep).unwrap(), &nw));
            let perp = (axis - n * axis.dot(&n)).normalize();
            let op_perp = cm_projection(&perp, &kin, particle, rep).unwrap();
            transverse = transverse.max(diff(&op_perp, &nw_projection(&perp, rep).unwrap()));
        }
    }
    out.near("hermiticity defect", herm, 0.0, EXACT);
    out.near("spectrum deviation", spec, 0.0, 1e-10);
    out.near("|CM − NW| at x = 0", at_rest, 0.0, EXACT);
    out.near("|CM − NW| for axis ⊥ n", transverse, 0.0, EXACT);
    out
}

fn transverse_invariants(frame: &RealizedFrame) -> InvariantSet {
    let n = frame.n;
    let perp = |v: Vector3<f64>| (v - n * v.dot(&n)).normalize();
    let f = RealizedFrame::new(perp(frame.a), perp(frame.b), n, frame.pol, frame.alpha).unwrap();
    invariants_of(&f)
}

fn c10_nonrelativistic_transverse() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng(10);
    for system in [SystemKind::FermionVector, SystemKind::BosonTensorBeta] {
        let (mut rest, mut trans) = (0.0f64, 0.0f64);
        for _ in 0..1000 {
            let frame = random_frame(&mut r, system);
            let inv = invariants_of(&frame);
            let nw0 = closed_form(system, NW, 0.0, &inv).unwrap();
            let cm0 = closed_form(system, CM, 0.0, &inv).unwrap();
            rest = rest.max((nw0 - cm0).abs());
            let t = transverse_invariants(&frame);
            for x in CHECK_XS {
                let d = closed_form(system, NW, x, &t).unwrap() - closed_form(system, CM, x, &t).unwrap();
                trans = trans.max(d.abs());
            }
        }
        out.near(&format!("{} max |NW − CM| at x = 0", system.tag()), rest, 0.0, EXACT);
        out.near(&format!("{} max |NW − CM| with a·n = b·n = 0", system.tag()), trans, 0.0, EXACT);
    }
    out
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", c1_oracle_equivalence),
        ("fig3 exact constants", c2_fig3),
        ("fig6 exact constants", c3_fig6),
        ("fig1 NW peak and CM limit", c4_fig1),
        ("fig2 CM peak and limits", c5_fig2),
        ("fig4 peaks and limits", c6_fig4),
        ("fig5 NW rise and vanishing CM", c7_fig5),
        ("fig7 limits and CM curve", c8_fig7),
        ("cm operator properties", c9_operator_properties),
        ("nonrelativistic and transverse agreement", c10_nonrelativistic_transverse),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<42} {}  [{}]",
            i + 1,
            name,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.details.join("; ")
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
