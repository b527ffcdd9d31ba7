//! Property tests over the public API: g functions, intrinsic volumes, Radon
//! geometry and Monte Carlo calibration.

use proptest::prelude::*;

use radon_core::geometry::{fixtures, PointConfig};
use radon_core::gfun::{binomial, GEvaluator};
use radon_core::montecarlo::{estimate_partition_probability, sample_gaussian_points, SimConfig};
use radon_core::partition::Partition;
use radon_core::volumes::{Method, VkRequest, VolumeEngine};

const TOL: f64 = 1e-9;

fn partitions(n: usize) -> impl Iterator<Item = Partition> {
    (0..3u32.pow(n as u32)).filter_map(move |mut code| {
        let (mut a, mut b) = (0u64, 0u64);
        for i in 0..n {
            match code % 3 {
                1 => a |= 1 << i,
                2 => b |= 1 << i,
                _ => {}
            }
            code /= 3;
        }
        (a != 0 && b != 0).then(|| Partition::from_masks(n, a, b).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_is_nondecreasing(ell in 1usize..=8, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let lo = -1.0 / ell as f64;
        let (r1, r2) = (lo + 3.0 * a.min(b), lo + 3.0 * a.max(b));
        let g = GEvaluator::shared();
        prop_assert!(g.g_eval(ell, r1, TOL).unwrap() <= g.g_eval(ell, r2, TOL).unwrap() + 2.0 * TOL);
        if ell >= 2 && r1 > lo {
            prop_assert!(g.g_derivative(ell, r1).unwrap() >= -TOL);
        }
    }

    #[test]
    fn volumes_are_nonnegative_and_supported(m in 1usize..=6, n in 1usize..=6, k in 0usize..=13) {
        let engine = VolumeEngine::default();
        let v = engine.v(k, m, n).unwrap();
        prop_assert!(v >= -TOL);
        if k >= m + n {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn engines_agree_where_both_apply((m, n) in (1usize..=3).prop_flat_map(|m| (Just(m), m..=7)), k in 1usize..=9) {
        prop_assume!(k < m + n);
        let engine = VolumeEngine::default();
        let closed_method = [Method::M1, Method::M2, Method::M3][m - 1];
        let closed = engine.vk(VkRequest::new(k, m, n).method(closed_method)).unwrap();
        let general = engine.vk(VkRequest::new(k, m, n).method(Method::General)).unwrap();
        prop_assert!((closed - general).abs() <= 10.0 * TOL);
        if k == m + n - 1 {
            let kmax = engine.vk(VkRequest::new(k, m, n).method(Method::Kmax)).unwrap();
            prop_assert!((closed - kmax).abs() <= 10.0 * TOL);
        }
    }

    #[test]
    fn probabilities_lie_in_unit_interval(d in 1usize..=5, m in 1usize..=6, n in 1usize..=6) {
        let p = VolumeEngine::default().radon_probability(d, m, n, TOL).unwrap();
        prop_assert!((-TOL..=1.0 + TOL).contains(&p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radon_iff_contains_a_vertex(n in 4usize..=7, d in 1usize..=3, seed in any::<u64>()) {
        prop_assume!(n >= d + 2);
        let cfg = PointConfig::new(sample_gaussian_points(n, d, seed, 0)).unwrap();
        let vertices: Vec<Partition> = cfg.minimal_partitions().unwrap().into_iter().map(|(p, _)| p).collect();
        for v in &vertices {
            prop_assert_eq!(v.support_size(), d + 2);
        }
        for p in partitions(n) {
            let by_vertex = vertices.iter().any(|v| p.contains(v));
            prop_assert_eq!(cfg.is_radon(&p).unwrap(), by_vertex, "partition {}", p.label());
        }
    }

    #[test]
    fn vertex_set_is_closed_under_reversal(n in 4usize..=8, d in 1usize..=3, seed in any::<u64>()) {
        prop_assume!(n >= d + 2);
        let cfg = PointConfig::new(sample_gaussian_points(n, d, seed, 0)).unwrap();
        let vertices = cfg.minimal_partitions().unwrap();
        for (p, v) in &vertices {
            let (_, w) = vertices.iter().find(|(q, _)| *q == p.reversed()).expect("reversed vertex");
            for (x, y) in v.coords().iter().zip(w.coords()) {
                prop_assert!((x + y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn facets_have_full_support(n in 4usize..=7, d in 1usize..=2, seed in any::<u64>()) {
        prop_assume!(n >= d + 2);
        let cfg = PointConfig::new(sample_gaussian_points(n, d, seed, 0)).unwrap();
        let lattice = cfg.face_lattice().unwrap();
        for f in lattice.facets() {
            prop_assert!(f.is_full());
        }
    }
}

#[test]
fn moment_curve_partitions_are_balanced() {
    for d in 1..=4 {
        for n in d + 2..=8 {
            let cfg = fixtures::moment_curve(n, d).unwrap();
            let bound = (d + 2) / 2;
            for p in partitions(n) {
                let small = p.a().len().min(p.b().len());
                if small < bound {
                    assert!(!cfg.is_radon(&p).unwrap(), "d={d} N={n} {}", p.label());
                }
            }
        }
    }
}

#[test]
fn quadrature_matches_closed_forms() {
    let g = GEvaluator::shared();
    for ell in [2usize, 3] {
        let lo = -1.0 / ell as f64;
        for i in 0..50 {
            let r = lo + (2.0 - lo) * i as f64 / 49.0;
            let closed = g.g_eval(ell, r, TOL).unwrap();
            let quad = g.g_quadrature(ell, r, TOL).unwrap().value;
            assert!((closed - quad).abs() <= 10.0 * TOL, "g_{ell}({r}): {closed} vs {quad}");
        }
    }
}

#[test]
fn boundary_values() {
    let g = GEvaluator::shared();
    for ell in 2..=8 {
        assert!(g.g_eval(ell, -1.0 / ell as f64, TOL).unwrap().abs() <= TOL);
        assert!((g.g_eval(ell, 0.0, TOL).unwrap() - 0.5f64.powi(ell as i32)).abs() <= TOL);
        assert!((g.g_eval(ell, 1.0, TOL).unwrap() - 1.0 / (ell as f64 + 1.0)).abs() <= TOL);
    }
}

#[test]
fn intervals_cover_the_exact_d1_value() {
    let want = 1.0 - 2.0 / binomial(4, 2);
    let covered = (0..200)
        .filter(|&seed| {
            estimate_partition_probability(1, 2, 2, SimConfig::new(10_000, seed))
                .unwrap()
                .covers(want)
        })
        .count();
    assert!(covered >= 198, "covered {covered} of 200");
}

#[test]
fn estimates_agree_with_analytic_probabilities() {
    let engine = VolumeEngine::default();
    for total in 3..=7 {
        for m in 1..total {
            let n = total - m;
            for d in 1..=total - 2 {
                let want = engine.radon_probability(d, m, n, TOL).unwrap();
                let e = estimate_partition_probability(d, m, n, SimConfig::new(100_000, 5)).unwrap();
                let sigma = e.std_error().max(1e-12);
                assert!(
                    (e.p_hat - want).abs() < 4.0 * sigma,
                    "d={d} m={m} n={n}: p_hat {} vs {want}",
                    e.p_hat
                );
            }
        }
    }
}
