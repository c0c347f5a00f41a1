use nalgebra::Vector3;
use proptest::prelude::*;

use relcorr::analysis::{sweep, GridScale, GridSpec};
use relcorr::correlators::{closed_form, SystemKind};
use relcorr::geometry::{gram_validate, invariants_of, realize};
use relcorr::kinematics::{Kinematics, Particle};
use relcorr::par;
use relcorr::sampling::{random_frame, rng};
use relcorr::scenario::{parse, preset, PRESET_NAMES};
use relcorr::spin_ops::{cm_projection, nw_projection, OperatorKind, SpinRep};

fn unit(v: [f64; 3]) -> Option<Vector3<f64>> {
    let v = Vector3::from(v);
    (v.norm() > 1e-3).then(|| v.normalize())
}

fn component() -> impl Strategy<Value = [f64; 3]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn realize_round_trips(seed in any::<u64>(), sys in 0usize..3) {
        let system = [SystemKind::FermionVector, SystemKind::BosonTensorBeta, SystemKind::BosonTensorGeneral][sys];
        let inv = invariants_of(&random_frame(&mut rng(seed), system));
        prop_assert!(gram_validate(&inv).passes());
        let frame = realize(&inv).unwrap();
        let back = invariants_of(&frame);
        prop_assert!((back.ab - inv.ab).abs() < 1e-9);
        prop_assert!((back.n_ab - inv.n_ab).abs() < 1e-9);
        prop_assert!((back.pol.a - inv.pol.a).norm() < 1e-9);
        prop_assert!((back.pol.n - inv.pol.n).norm() < 1e-9);
        for x in [0.0, 1.0, 30.0] {
            for op in [OperatorKind::NewtonWigner, OperatorKind::CenterOfMass] {
                if system.has_closed_form(op) {
                    let c1 = closed_form(system, op, x, &inv).unwrap();
                    let c2 = closed_form(system, op, x, &back).unwrap();
                    prop_assert!((c1 - c2).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn cm_operator_is_unit_projection(axis in component(), n in component(), x in 0.0f64..1e3, second in any::<bool>(), half in any::<bool>()) {
        let (Some(axis), Some(n)) = (unit(axis), unit(n)) else { return Ok(()) };
        let rep = if half { SpinRep::Half } else { SpinRep::One };
        let particle = if second { Particle::Second } else { Particle::First };
        let kin = Kinematics::unit_mass(x, n).unwrap();
        let op = cm_projection(&axis, &kin, particle, rep).unwrap();
        prop_assert!(op.hermiticity_defect() < 1e-12);
        let mut ev = op.eigenvalues();
        ev.sort_by(f64::total_cmp);
        let mut want = rep.projections();
        want.sort_by(f64::total_cmp);
        for (g, w) in ev.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn cm_equals_nw_along_momentum(n in component(), x in 0.0f64..1e3, half in any::<bool>()) {
        let Some(n) = unit(n) else { return Ok(()) };
        let rep = if half { SpinRep::Half } else { SpinRep::One };
        let kin = Kinematics::unit_mass(x, n).unwrap();
        let cm = cm_projection(&n, &kin, Particle::First, rep).unwrap();
        let nw = nw_projection(&n, rep).unwrap();
        prop_assert!((&cm.entries - &nw.entries).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn nw_and_cm_agree_at_rest(seed in any::<u64>(), boson in any::<bool>()) {
        let system = if boson { SystemKind::BosonTensorBeta } else { SystemKind::FermionVector };
        let inv = invariants_of(&random_frame(&mut rng(seed), system));
        let nw = closed_form(system, OperatorKind::NewtonWigner, 0.0, &inv).unwrap();
        let cm = closed_form(system, OperatorKind::CenterOfMass, 0.0, &inv).unwrap();
        prop_assert!((nw - cm).abs() < 1e-12);
    }
}

#[test]
fn sequential_and_default_backends_agree() {
    let s = preset("fig1").unwrap();
    let xs: Vec<f64> = (0..2000).map(|i| i as f64 * 0.01).collect();
    let f = |x: &f64| closed_form(s.system, OperatorKind::CenterOfMass, *x, &s.invariants).unwrap();
    assert_eq!(par::sequential::map_collect(&xs, f), par::map_collect(&xs, f));
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let s = preset("fig4").unwrap();
    let grid = GridSpec {
        x_min: 0.0,
        x_max: 100.0,
        steps: 257,
        scale: GridScale::Log,
    };
    let f = |x| closed_form(s.system, OperatorKind::NewtonWigner, x, &s.invariants);
    let c1 = sweep(f, &grid).unwrap();
    let c2 = sweep(f, &grid).unwrap();
    assert_eq!(c1, c2);
    assert_eq!(c1.samples.len(), 257);
    assert!(c1.samples.windows(2).all(|w| w[0].0 < w[1].0));
}

#[test]
fn preset_text_round_trips_through_parser() {
    for name in PRESET_NAMES {
        let s = preset(name).unwrap();
        let text = relcorr::scenario::preset_text(name).unwrap();
        assert_eq!(parse(text).unwrap(), s);
    }
}
