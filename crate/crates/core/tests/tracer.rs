use std::f64::consts::{FRAC_PI_2, PI};

use slag::calibration::{AxisSamples, CurveMeta};
use slag::registry::sphere_action;
use slag::tracer::{scan_seeds, trace, trace_level_curve, verify_curve, TraceOptions, Window};
use slag::{ActionCatalog, Calibration, Error, ProfileCurve, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cp2(theta: f64) -> Calibration {
    Calibration::from_action(
        ActionCatalog::builtin()
            .lookup("CPm isotropy, m=2")
            .unwrap(),
        theta,
    )
    .unwrap()
}

fn sphere(n: u32, p: u32, theta: f64) -> Calibration {
    Calibration::from_action(&sphere_action(n, p).unwrap(), theta).unwrap()
}

#[test]
fn cp2_trace_conserves_level() {
    let cal = cp2(0.0);
    let curve = trace_level_curve(&cal, c(0.3, 0.2), &TraceOptions::default()).unwrap();
    let rep = verify_curve(&cal, &curve).unwrap();
    assert_eq!(rep.samples, 2001);
    assert!(rep.level_drift <= 1e-9, "{rep:?}");
    assert!(rep.max_normalized_residual <= 1e-8, "{rep:?}");
    assert_eq!(rep.singular_hits, 0);
}

#[test]
fn level_matches_closed_form_primitive() {
    let cal = cp2(0.0);
    let curve = trace_level_curve(&cal, c(0.3, 0.2), &TraceOptions::default()).unwrap();
    let closed = |t: C64| -(2.0 * t).cos() * 0.25 + (4.0 * t).cos() / 16.0;
    let level = closed(c(0.3, 0.2)).im;
    assert!((curve.meta.level - level).abs() < 1e-15);
    for &t in &curve.axes[0].tau {
        assert!((closed(t).im - level).abs() <= 1e-9);
    }
}

#[test]
fn corrupted_sample_is_detected() {
    let cal = cp2(0.0);
    let mut curve = trace_level_curve(&cal, c(0.3, 0.2), &TraceOptions::default()).unwrap();
    let k = 700;
    curve.axes[0].tau[k].im += 0.01;
    let ax = &curve.axes[0];
    let res = cal.residual(&[ax.tau[k]], &[ax.dtau[k]]).unwrap();
    assert!(res.normalized > 1e-4, "{res:?}");
    assert!(verify_curve(&cal, &curve).unwrap().max_normalized_residual > 1e-4);
}

#[test]
fn real_axis_trace_at_phase_zero() {
    let cal = sphere(2, 1, 0.0);
    let opts = TraceOptions {
        max_steps: 1000,
        ..Default::default()
    };
    let curve = trace_level_curve(&cal, c(0.5, 0.0), &opts).unwrap();
    assert_eq!(curve.axes[0].len(), 1001);
    assert!(curve.axes[0].tau.iter().all(|t| t.im.abs() <= 1e-12));
}

#[test]
fn vertical_line_trace_at_quarter_phase() {
    let cal = sphere(2, 1, FRAC_PI_2);
    let curve = trace_level_curve(&cal, c(FRAC_PI_2, 0.1), &TraceOptions::default()).unwrap();
    assert!(curve.axes[0]
        .tau
        .iter()
        .all(|t| (t.re - FRAC_PI_2).abs() <= 1e-10));
}

#[test]
fn rank_two_real_lines_have_zero_residual() {
    let cal = Calibration::from_action(
        ActionCatalog::builtin()
            .lookup("SO(6) on SU(6)/Sp(3)")
            .unwrap(),
        0.0,
    )
    .unwrap();
    let curve = ProfileCurve {
        axes: vec![
            AxisSamples::line(c(0.1, 0.0), c(1.0, 0.0), 0.0, 0.05, 30),
            AxisSamples::line(c(-0.4, 0.0), c(0.5, 0.0), 0.0, 0.05, 30),
        ],
        meta: CurveMeta::default(),
    };
    let rep = verify_curve(&cal, &curve).unwrap();
    assert_eq!(rep.samples, 900);
    assert!(rep.max_raw_residual <= 1e-15, "{rep:?}");
}

#[test]
fn reversed_trace_retraces_the_curve() {
    let cal = cp2(0.0);
    let opts = TraceOptions::default();
    let fwd = trace_level_curve(&cal, c(0.3, 0.2), &opts).unwrap();
    let end = *fwd.axes[0].tau.last().unwrap();
    let back = trace_level_curve(
        &cal,
        end,
        &TraceOptions {
            reverse: true,
            ..opts
        },
    )
    .unwrap();
    let a = &fwd.axes[0].tau;
    let b = &back.axes[0].tau;
    assert_eq!(a.len(), b.len());
    let worst = a
        .iter()
        .rev()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn quarter_phase_seeds_lie_on_the_window_edges() {
    // Im(i sin τ) = sin φ cosh ρ vanishes on φ ∈ {0, π} only.
    let cal = sphere(2, 2, FRAC_PI_2);
    let window = Window {
        phi: (0.0, PI),
        rho: (-1.0, 1.0),
    };
    let seeds = scan_seeds(&cal, window, (41, 21), 0.0, 1e-9).unwrap();
    assert!(!seeds.is_empty());
    for z in &seeds {
        assert!((z.re.sin() * z.im.cosh()).abs() <= 1e-10, "{z}");
        assert!(z.re.abs() <= 1e-10 || (z.re - PI).abs() <= 1e-10, "{z}");
    }
}

#[test]
fn phase_zero_seeds_cover_both_branches() {
    // Im sin τ = cos φ sinh ρ vanishes on ρ = 0 and on φ = π/2.
    let cal = sphere(2, 2, 0.0);
    let window = Window {
        phi: (0.0, PI),
        rho: (-1.0, 1.0),
    };
    let seeds = scan_seeds(&cal, window, (41, 21), 0.0, 1e-9).unwrap();
    let mut axis = 0;
    let mut vertical = 0;
    for z in &seeds {
        assert!((z.re.cos() * z.im.sinh()).abs() <= 1e-10, "{z}");
        if z.im.abs() <= 1e-10 {
            axis += 1;
        } else if (z.re - FRAC_PI_2).abs() <= 1e-10 {
            vertical += 1;
        } else {
            panic!("seed {z} off both branches");
        }
    }
    assert!(axis > 0 && vertical > 0, "{axis} {vertical}");
    assert!(seeds.iter().all(|z| (z - c(FRAC_PI_2, 0.0)).norm() > 1e-6));
}

#[test]
fn unreachable_level_gives_no_seeds() {
    let cal = sphere(2, 2, 0.0);
    let window = Window {
        phi: (0.0, PI),
        rho: (-1.0, 1.0),
    };
    assert!(scan_seeds(&cal, window, (41, 21), 10.0, 1e-9)
        .unwrap()
        .is_empty());
}

#[test]
fn singular_seed_and_rank_two_are_rejected() {
    let cal = sphere(2, 2, 0.0);
    assert!(matches!(
        trace(&cal, c(FRAC_PI_2, 0.0), &TraceOptions::default()),
        Err(Error::Seed(_))
    ));
    let rank2 = Calibration::from_action(
        ActionCatalog::builtin()
            .lookup("SO(6) on SU(6)/Sp(3)")
            .unwrap(),
        0.0,
    )
    .unwrap();
    assert!(matches!(
        trace(&rank2, c(0.3, 0.0), &TraceOptions::default()),
        Err(Error::Domain(_))
    ));
}
