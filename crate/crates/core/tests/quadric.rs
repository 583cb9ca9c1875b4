mod common;

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use slag::monge_ampere::ScalarProfile;
use slag::quadric::{
    block_generators, embed, first_generator, holomorphic_volume, holomorphic_volume_in_chart,
    kahler_form, lagrangian_frame, moment, section_point, tangent_basis, unembed, volume_ratio,
    volume_ratio_with_basis, LieGenerator, Potential, QuadricPoint, SphereTangent,
};
use slag::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn pot() -> Potential {
    Potential::new(ScalarProfile::new(1.0, 1.0, 1.0, 1).unwrap())
}

fn random_tangent(rng: &mut impl Rng, n: usize, len: f64) -> SphereTangent {
    let p = common::unit_vector(rng, n + 1);
    let v = common::normal_to(rng, &p, len);
    SphereTangent::new(p, v).unwrap()
}

fn random_tangent_upto(rng: &mut impl Rng, n: usize, max_len: f64) -> SphereTangent {
    let len = rng.random_range(0.0..max_len);
    random_tangent(rng, n, len)
}

/// A random complex combination of the quadric tangent basis.
fn random_tangent_vector(rng: &mut impl Rng, z: &QuadricPoint) -> Vec<C64> {
    let basis = tangent_basis(z);
    let mut u = vec![c(0.0, 0.0); z.dim() + 1];
    for b in &basis {
        let k = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        u.iter_mut().zip(b).for_each(|(x, y)| *x += k * y);
    }
    u
}

#[test]
fn zero_vector_embeds_to_its_base_point() {
    let t = SphereTangent::new(vec![0.0, 0.6, 0.8], vec![0.0; 3]).unwrap();
    assert_eq!(embed(&t).z(), &[c(0.0, 0.0), c(0.6, 0.0), c(0.8, 0.0)]);
    let back = unembed(&embed(&t)).unwrap();
    assert!(back.v().iter().all(|x| *x == 0.0));
}

#[test]
fn hyperbolic_pair() {
    let t = SphereTangent::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).unwrap();
    let z = embed(&t);
    let (ch, sh) = (1f64.cosh(), 1f64.sinh());
    assert!((z.z()[0] - c(ch, 0.0)).norm() < 1e-15);
    assert!((z.z()[1] - c(0.0, sh)).norm() < 1e-15);
    assert!(z.membership_defect() <= 1e-12);

    let q = QuadricPoint::new(vec![c(ch, 0.0), c(0.0, sh), c(0.0, 0.0)]).unwrap();
    let back = unembed(&q).unwrap();
    assert!((back.p()[0] - 1.0).abs() <= 1e-12 && back.p()[1].abs() <= 1e-12);
    assert!((back.v()[1] - 1.0).abs() <= 1e-12 && back.v()[0].abs() <= 1e-12);
}

#[test]
fn invalid_tangent_data_is_rejected() {
    assert!(SphereTangent::new(vec![1.0, 0.1, 0.0], vec![0.0; 3]).is_err());
    assert!(SphereTangent::new(vec![1.0, 0.0, 0.0], vec![0.5, 1.0, 0.0]).is_err());
    assert!(QuadricPoint::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
}

#[test]
fn embed_round_trip_in_dimension_three() {
    let mut rng = common::rng(31);
    for _ in 0..100 {
        let len = rng.random_range(0.0..2.5);
        let t = random_tangent(&mut rng, 3, len);
        let z = embed(&t);
        assert!(z.membership_defect() <= 1e-12);
        let back = unembed(&z).unwrap();
        for (a, b) in back.p().iter().zip(t.p()).chain(back.v().iter().zip(t.v())) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn tiny_vectors_use_the_series() {
    let t = SphereTangent::new(vec![0.0, 1.0, 0.0], vec![3e-6, 0.0, -4e-6]).unwrap();
    let back = unembed(&embed(&t)).unwrap();
    assert!((back.v()[0] - 3e-6).abs() <= 1e-18);
    assert!((back.v()[2] + 4e-6).abs() <= 1e-18);
}

#[test]
fn first_generator_recovers_the_radius() {
    let mut rng = common::rng(32);
    for _ in 0..100 {
        let t = random_tangent_upto(&mut rng, 2, 3.0);
        let z = embed(&t);
        let rho = common::dot(t.v(), t.v()) + 1.0;
        let via_norm = {
            let a = z.norm_sqr().acosh() / 2.0;
            a * a + 1.0
        };
        assert!((first_generator(z.norm_sqr()) - rho).abs() <= 1e-10 * rho);
        assert!((via_norm - rho).abs() <= 1e-8 * rho);
        assert!((t.rho1() - rho).abs() <= 1e-15 * rho);
    }
}

#[test]
fn potential_on_the_zero_section_and_unit_sphere_bundle() {
    let prof = ScalarProfile::new(2.0, 1.5, 0.7, 1).unwrap();
    let pot = Potential::new(prof);
    let real = embed(&SphereTangent::new(vec![0.0, 0.0, 1.0], vec![0.0; 3]).unwrap());
    assert!((pot.value(&real).unwrap() - 0.7).abs() <= 1e-14);
    let unit = embed(&SphereTangent::new(vec![0.0, 0.0, 1.0], vec![0.6, 0.8, 0.0]).unwrap());
    let want = prof.value(2.0).unwrap();
    assert!((pot.value(&unit).unwrap() - want).abs() <= 1e-10 * want);
}

#[test]
fn potential_is_rotation_invariant() {
    let mut rng = common::rng(33);
    let pot = pot();
    for _ in 0..30 {
        let z = embed(&random_tangent_upto(&mut rng, 3, 2.0));
        let rot = common::random_rotation(&mut rng, 4);
        let w = z.apply_orthogonal(&rot).unwrap();
        let (a, b) = (pot.value(&z).unwrap(), pot.value(&w).unwrap());
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn group_action_preserves_the_quadric() {
    let mut rng = common::rng(34);
    let gens = block_generators(3, 2).unwrap();
    for _ in 0..30 {
        let z = embed(&random_tangent(&mut rng, 3, 1.0));
        for g in &gens {
            let moved = z.act(g, rng.random_range(-3.0..3.0)).unwrap();
            assert!(moved.membership_defect() <= 1e-10);
            assert!((moved.norm_sqr() - z.norm_sqr()).abs() <= 1e-10);
        }
    }
}

#[test]
fn kahler_form_is_antisymmetric_and_positive() {
    let mut rng = common::rng(35);
    let pot = pot();
    for _ in 0..50 {
        let z = embed(&random_tangent_upto(&mut rng, 2, 1.5));
        let u = random_tangent_vector(&mut rng, &z);
        let w = random_tangent_vector(&mut rng, &z);
        let iu: Vec<C64> = u.iter().map(|x| x * C64::i()).collect();
        assert!(kahler_form(&z, &pot, &u, &u).unwrap().abs() <= 1e-10);
        let uw = kahler_form(&z, &pot, &u, &w).unwrap();
        let wu = kahler_form(&z, &pot, &w, &u).unwrap();
        assert!((uw + wu).abs() <= 1e-10);
        assert!(kahler_form(&z, &pot, &u, &iu).unwrap() > 0.0);
    }
}

#[test]
fn kahler_form_rejects_normal_vectors() {
    let z = embed(&SphereTangent::new(vec![1.0, 0.0, 0.0], vec![0.0, 0.3, 0.0]).unwrap());
    let normal: Vec<C64> = z.z().iter().map(|w| w.conj()).collect();
    let u = tangent_basis(&z).remove(0);
    assert!(kahler_form(&z, &pot(), &normal, &u).is_err());
}

#[test]
fn moment_vanishes_on_the_zero_section() {
    let mut rng = common::rng(36);
    let pot = pot();
    for (n, p) in [(2, 1), (3, 2)] {
        let gens = block_generators(n, p).unwrap();
        for _ in 0..10 {
            let z = embed(&random_tangent(&mut rng, n, 0.0));
            for g in &gens {
                assert!(moment(&z, g, &pot).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn moment_on_and_off_the_level_set() {
    let pot = pot();
    let x = LieGenerator::rotation(3, 1, 2);
    for phi in [0.3, 1.0, 2.2] {
        let (s, c) = f64::sin_cos(phi);
        let p = vec![c, s, 0.0];
        let normal = SphereTangent::new(p.clone(), vec![-0.7 * s, 0.7 * c, 0.0]).unwrap();
        assert!(moment(&embed(&normal), &x, &pot).abs() <= 1e-8);
        let tangent = SphereTangent::new(p, vec![0.0, 0.0, 0.5]).unwrap();
        assert!(moment(&embed(&tangent), &x, &pot).abs() >= 1e-3);
    }
}

#[test]
fn volume_form_normalization_at_the_base_point() {
    let z = QuadricPoint::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let frame = vec![
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
    ];
    assert!((holomorphic_volume(&z, &frame).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
}

#[test]
fn volume_form_charts_agree() {
    let mut rng = common::rng(37);
    let mut compared = 0;
    for _ in 0..50 {
        let z = embed(&random_tangent_upto(&mut rng, 2, 1.5));
        let frame = vec![
            random_tangent_vector(&mut rng, &z),
            random_tangent_vector(&mut rng, &z),
        ];
        let charts: Vec<usize> = (0..3).filter(|&k| z.z()[k].norm() > 0.2).collect();
        let values: Vec<C64> = charts
            .iter()
            .map(|&k| holomorphic_volume_in_chart(&z, &frame, k).unwrap())
            .collect();
        for v in &values[1..] {
            assert!((v - values[0]).norm() <= 1e-10 * values[0].norm().max(1.0));
            compared += 1;
        }
    }
    assert!(compared >= 50);
}

#[test]
fn repeated_frame_vector_has_zero_volume() {
    let mut rng = common::rng(38);
    let z = embed(&random_tangent(&mut rng, 2, 0.8));
    let u = random_tangent_vector(&mut rng, &z);
    assert!(holomorphic_volume(&z, &[u.clone(), u]).unwrap().norm() <= 1e-14);
}

#[test]
fn zero_section_frame_is_real() {
    let point = section_point(2, 1, c(0.4, 0.0)).unwrap();
    let frame = lagrangian_frame(&point, 1, c(1.0, 0.0)).unwrap();
    assert_eq!(frame.vectors.len(), 2);
    assert!(frame.vectors.iter().flatten().all(|w| w.im == 0.0));
    assert!(!frame.rank_deficient);
}

#[test]
fn vertical_line_frame_matches_its_factorization() {
    for rho in [-0.5, 0.1, 0.9] {
        let point = section_point(2, 1, c(FRAC_PI_2, rho)).unwrap();
        let frame = lagrangian_frame(&point, 1, C64::i()).unwrap();
        assert!(frame.factorization_defect <= 1e-8);
        assert!(!frame.rank_deficient);
    }
}

#[test]
fn vanishing_factor_drops_rank() {
    // p_split = 2: the block rotation picks up cos τ, zero at τ = π/2.
    let point = section_point(2, 2, c(FRAC_PI_2, 0.0)).unwrap();
    assert!(
        lagrangian_frame(&point, 2, c(1.0, 0.0))
            .unwrap()
            .rank_deficient
    );
    // p_split = 1: the factor is sin τ, zero at τ = 0.
    let point = section_point(2, 1, c(0.0, 0.0)).unwrap();
    assert!(
        lagrangian_frame(&point, 1, c(1.0, 0.0))
            .unwrap()
            .rank_deficient
    );
}

#[test]
fn volume_ratio_is_basis_and_rotation_invariant() {
    let mut rng = common::rng(39);
    let pot = pot();
    for _ in 0..20 {
        let z = embed(&random_tangent_upto(&mut rng, 2, 1.5));
        let base = volume_ratio(&z, &pot).unwrap();
        assert!(base > 0.0);
        let other = vec![
            random_tangent_vector(&mut rng, &z),
            random_tangent_vector(&mut rng, &z),
        ];
        let alt = volume_ratio_with_basis(&z, &pot, &other).unwrap();
        assert!((alt - base).abs() <= 1e-8 * base);
        let w = z
            .apply_orthogonal(&common::random_rotation(&mut rng, 3))
            .unwrap();
        assert!((volume_ratio(&w, &pot).unwrap() - base).abs() <= 1e-8 * base);
    }
}
