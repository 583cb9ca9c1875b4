mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::Rng;
use slag::calibration::{build_integrand, AxisSamples, CurveMeta};
use slag::registry::sphere_action;
use slag::{ActionCatalog, Calibration, CalibrationSpec, ProfileCurve, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn named(name: &str, theta: f64) -> Calibration {
    Calibration::from_action(ActionCatalog::builtin().lookup(name).unwrap(), theta).unwrap()
}

fn sphere(n: u32, p: u32, theta: f64) -> Calibration {
    Calibration::from_action(&sphere_action(n, p).unwrap(), theta).unwrap()
}

fn coeff_l1(p: &slag::ExpPoly) -> f64 {
    p.terms().iter().map(|t| t.coeff.norm()).sum()
}

fn line_curve(axes: Vec<AxisSamples>) -> ProfileCurve {
    ProfileCurve {
        axes,
        meta: CurveMeta::default(),
    }
}

#[test]
fn cp2_isotropy_integrand_closed_form() {
    let cal = named("CPm isotropy, m=2", 0.0);
    let spec = ActionCatalog::builtin()
        .lookup("CPm isotropy, m=2")
        .unwrap()
        .clone();
    let mut rng = common::rng(5);
    for _ in 0..50 {
        let tau = common::random_tau(&mut rng, 1);
        let t = tau[0];
        let closed = (2.0 * t).sin() * 0.5 - (4.0 * t).sin() * 0.25;
        let direct = common::trig_product(&spec, 0.0, &tau);
        assert!(common::rel_err(cal.f(&tau), direct) < 1e-12, "{t}");
        assert!(common::rel_err(closed, direct) < 1e-12, "{t}");
    }
}

#[test]
fn cp2_isotropy_primitive_closed_form() {
    let cal = named("CPm isotropy, m=2", 0.0);
    let mut rng = common::rng(6);
    for _ in 0..50 {
        let t = common::random_tau(&mut rng, 1)[0];
        let closed = -(2.0 * t).cos() * 0.25 + (4.0 * t).cos() / 16.0;
        assert!((cal.f_hat(&[t]) - closed).norm() < 1e-13, "{t}");
    }
}

#[test]
fn sphere_integrand_and_primitive() {
    let cal = sphere(2, 2, 0.0);
    let quarter = sphere(2, 2, FRAC_PI_2);
    let mut rng = common::rng(7);
    for _ in 0..20 {
        let t = common::random_tau(&mut rng, 1)[0];
        assert!((cal.f(&[t]) - t.cos()).norm() < 1e-14);
        assert!((cal.f_hat(&[t]) - t.sin()).norm() < 1e-14);
        assert!((quarter.f(&[t]) - C64::i() * t.cos()).norm() < 1e-14);
        let x = t.re;
        assert!((quarter.f(&[c(x, 0.0)]).im - x.cos()).abs() < 1e-15);
    }
}

#[test]
fn rank_two_primitive_differentiates_back() {
    let cal = named("SO(6) on SU(6)/Sp(3)", 0.3);
    let back = cal
        .primitive()
        .derivative(0)
        .unwrap()
        .derivative(1)
        .unwrap();
    assert!(back.max_coeff_diff(cal.integrand()).unwrap() < 1e-14);
}

#[test]
fn antiderivative_order_commutes() {
    let cal = named("SO(6) on SU(6)/Sp(3)", 0.0);
    let swapped = cal
        .integrand()
        .antiderivative(1)
        .unwrap()
        .antiderivative(0)
        .unwrap();
    assert!(swapped.max_coeff_diff(cal.primitive()).unwrap() < 1e-15);
}

#[test]
fn residual_vanishes_for_real_data_at_phase_zero() {
    let mut rng = common::rng(8);
    for spec in ActionCatalog::builtin().iter() {
        let cal = Calibration::from_action(spec, 0.0).unwrap();
        let r = cal.rank();
        let tau: Vec<C64> = (0..r)
            .map(|_| c(rng.random_range(-3.0..3.0), 0.0))
            .collect();
        let tp: Vec<C64> = (0..r)
            .map(|_| c(rng.random_range(-2.0..2.0), 0.0))
            .collect();
        let res = cal.residual(&tau, &tp).unwrap();
        // Rounding in the expanded sum is bounded by eps times its absolute sum.
        let floor = coeff_l1(cal.integrand()) * tp.iter().map(|z| z.norm()).product::<f64>();
        assert!(res.raw.abs() <= 1e-13 * floor, "{}: {}", spec.name, res.raw);
    }
}

#[test]
fn vertical_line_solves_at_quarter_phase() {
    let cal = sphere(2, 1, FRAC_PI_2);
    let tau = c(FRAC_PI_2, 0.3);
    let res = cal.residual(&[tau], &[C64::i()]).unwrap();
    // i · sin(π/2 + 0.3i) · i = −cosh 0.3
    let direct = C64::i() * tau.sin() * C64::i();
    assert!((direct.re + 0.3f64.cosh()).abs() < 1e-15);
    assert!(res.raw.abs() <= 1e-12);
}

#[test]
fn generic_residual_matches_direct_product() {
    let mut rng = common::rng(9);
    let cat = ActionCatalog::builtin();
    for name in [
        "rho1(SO(3)) on SU(3)/SO(3)",
        "CPm isotropy, m=2",
        "SU(2)^4 on (G2 x G2)/G2",
    ] {
        let spec = cat.lookup(name).unwrap();
        let cal = Calibration::from_action(spec, FRAC_PI_4).unwrap();
        for _ in 0..20 {
            let tau = common::random_tau(&mut rng, cal.rank());
            let tp = common::random_tau(&mut rng, cal.rank());
            let prod: C64 = tp.iter().product();
            let want = (common::trig_product(spec, FRAC_PI_4, &tau) * prod).im;
            let got = cal.residual(&tau, &tp).unwrap().raw;
            assert!(got != 0.0);
            assert_eq!(got.signum(), want.signum(), "{name}");
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{name}");
        }
    }
}

#[test]
fn residual_is_the_derivative_of_the_level() {
    let cal = named("CPm isotropy, m=2", 0.4);
    let origin = c(0.3, 0.2);
    let dir = c(1.0, 0.5);
    let h = 1e-4;
    for k in 0..20 {
        let s = 0.05 * k as f64;
        let level = |s: f64| cal.f_hat(&[origin + dir * s]).im;
        let fd = (level(s + h) - level(s - h)) / (2.0 * h);
        let res = cal.residual(&[origin + dir * s], &[dir]).unwrap().raw;
        assert!(
            (fd - res).abs() <= 1e-6 * res.abs().max(1e-3),
            "s={s}: {fd} vs {res}"
        );
    }
}

#[test]
fn phase_zero_integrand_is_conjugate_symmetric() {
    for spec in ActionCatalog::builtin().iter() {
        let f = build_integrand(&CalibrationSpec::new(spec.clone(), 0.0)).unwrap();
        for t in f.terms() {
            let neg: Vec<i64> = t.lattice.iter().map(|l| -l).collect();
            let partner = f
                .terms()
                .iter()
                .find(|u| u.lattice == neg && u.powers == t.powers)
                .unwrap_or_else(|| panic!("{}: no partner for {:?}", spec.name, t.lattice));
            assert!(
                (partner.coeff - t.coeff.conj()).norm() < 1e-14,
                "{}",
                spec.name
            );
        }
    }
}

#[test]
fn phase_is_a_global_factor() {
    for spec in ActionCatalog::builtin().iter() {
        let zero = build_integrand(&CalibrationSpec::new(spec.clone(), 0.0)).unwrap();
        let theta = 1.1;
        let rotated = build_integrand(&CalibrationSpec::new(spec.clone(), theta)).unwrap();
        let want = zero.scale(C64::from_polar(-1.0, theta));
        let diff = rotated.add(&want).unwrap();
        let worst = diff
            .terms()
            .iter()
            .map(|t| t.coeff.norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-14, "{}: {worst:e}", spec.name);
    }
}

#[test]
fn rank_one_linear_curve_mixed_partial() {
    let cal = sphere(2, 2, 0.0);
    let curve = line_curve(vec![AxisSamples::line(
        c(0.0, 0.0),
        c(1.0, 0.0),
        0.0,
        1e-3,
        1001,
    )]);
    let rep = cal.mixed_partial_check(&curve, 1e-3).unwrap();
    assert!(rep.max_rel_error <= 1e-8, "{rep:?}");
    assert!(rep.checked > 0);
}

#[test]
fn rank_two_line_family_mixed_partial() {
    let cal = named("SO(6) on SU(6)/Sp(3)", 0.0);
    let curve = line_curve(vec![
        AxisSamples::line(c(0.0, 0.0), c(1.0, 0.0), 0.1, 1e-3, 1001),
        AxisSamples::line(c(0.0, 0.0), c(0.2, 0.1), 0.1, 1e-3, 1001),
    ]);
    let rep = cal.mixed_partial_check(&curve, 1e-3).unwrap();
    assert!(rep.sup_rel_error <= 1e-5, "{rep:?}");
}

#[test]
fn degenerate_stencil_is_rejected() {
    let cal = sphere(2, 2, 0.0);
    let curve = line_curve(vec![AxisSamples::line(
        c(0.0, 0.0),
        c(1.0, 0.0),
        0.0,
        1e-3,
        101,
    )]);
    assert!(cal.mixed_partial_check(&curve, 0.0).is_err());
    assert!(cal.mixed_partial_check(&curve, 0.05).is_err());
}

#[test]
fn stored_derivative_is_consistent() {
    let ax = AxisSamples::line(c(0.1, 0.2), c(0.3, -0.4), 0.0, 1e-2, 50);
    assert!(ax.derivative_consistency() <= 10.0 * 1e-4);
}

#[test]
fn csv_round_trip_through_a_file() {
    let cal = sphere(2, 1, 0.0);
    let mut curve = line_curve(vec![AxisSamples::line(
        c(0.5, 0.1),
        c(1.0, 0.2),
        0.0,
        1e-2,
        30,
    )]);
    curve.meta = CurveMeta {
        action: "sphere-n2-p1".into(),
        theta: 0.0,
        seed: vec![c(0.5, 0.1)],
        step: 1e-2,
        level: cal.f_hat(&[c(0.5, 0.1)]).im,
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    curve.write_csv(&cal, &path).unwrap();
    let back = ProfileCurve::read_csv(&path).unwrap();
    assert_eq!(back, curve);
}
