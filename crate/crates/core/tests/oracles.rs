mod common;

use common::*;
use pssk::diagram::{PersistenceDiagram, PlanePoint};
use pssk::kernel::{feature_map_eval, pssk_distance, pssk_eval, KernelScale};
use pssk::landscape::{build_landscape, landscape_distance};
use pssk::matching::{bottleneck_distance, wasserstein_distance, Exponent};
use pssk::persistence::{
    build_cubical_filtration, build_path_filtration, compute_persistence, compute_persistence_dim0, GrayscaleImage,
    ScalarField1D,
};
use pssk::synthetic::low_persistence_quartet;
use rand::Rng;

fn scale(s: f64) -> KernelScale {
    KernelScale::new(s).unwrap()
}

#[test]
fn kernel_agrees_with_quadrature() {
    let mut r = rng(11);
    for sigma in [0.05, 0.5, 2.0] {
        for _ in 0..3 {
            let (f, g) = (random_pairs(&mut r, 1, 5, 0.0, 1.0), random_pairs(&mut r, 1, 5, 0.0, 1.0));
            let closed = pssk_eval(&diagram(&f), &diagram(&g), scale(sigma));
            let numeric = pssk_quadrature(&f, &g, sigma);
            assert!(rel_close(closed, numeric, 1e-6), "sigma {sigma}: {closed} vs {numeric}");
        }
    }
}

#[test]
fn single_point_kernel_value() {
    let a = diagram(&[(0.0, 1.0)]);
    let k = pssk_eval(&a, &a, scale(1.0));
    assert!(rel_close(k, pssk_quadrature(&[(0.0, 1.0)], &[(0.0, 1.0)], 1.0), 1e-8));
    assert!((k - 8.8013e-3).abs() < 1e-7);
}

#[test]
fn feature_map_solves_the_heat_equation() {
    // grid-aligned point (0, 1) at t = 0.25; Richardson over two meshes
    let pairs = [(0.0, 1.0)];
    let coarse = heat_fd(&pairs, 0.25, 0.05, -4.0, 5.0, 0.0, 1.0);
    let fine = heat_fd(&pairs, 0.25, 0.025, -4.0, 5.0, 0.0, 1.0);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    let exact = feature_map_eval(&diagram(&pairs), scale(0.25), PlanePoint::new(0.0, 1.0)).unwrap();
    assert!(rel_close(exact, extrapolated, 2e-4), "{exact} vs {extrapolated} (fine {fine})");
    assert!((exact - (1.0 - (-2.0f64).exp()) / std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn feature_map_matches_direct_formula() {
    let mut r = rng(3);
    for _ in 0..50 {
        let pairs = random_pairs(&mut r, 0, 6, 0.0, 1.0);
        let (x, y) = (r.gen_range(-0.5..1.5), r.gen_range(-0.5..1.5));
        let got = feature_map_eval(&diagram(&pairs), scale(0.3), PlanePoint::new(x, y));
        if y < x {
            assert!(got.is_err());
            continue;
        }
        let want = feature_map(&pairs, 0.3, x, y);
        assert!((got.unwrap() - want).abs() < 1e-12 * (1.0 + want.abs()));
    }
}

#[test]
fn matching_agrees_with_injection_oracle() {
    let mut r = rng(5);
    for _ in 0..200 {
        let (f, g) = (random_pairs(&mut r, 0, 4, 0.0, 1.0), random_pairs(&mut r, 0, 4, 0.0, 1.0));
        let (df, dg) = (diagram(&f), diagram(&g));
        for p in [1.0, 2.0, 3.5] {
            let got = wasserstein_distance(&df, &dg, Exponent::Finite(p));
            assert!((got - wasserstein_oracle(&f, &g, Some(p))).abs() < 1e-10);
        }
        let b = wasserstein_oracle(&f, &g, None);
        assert!((bottleneck_distance(&df, &dg) - b).abs() < 1e-10);
        assert!((wasserstein_distance(&df, &dg, Exponent::Infinity) - b).abs() < 1e-10);
    }
}

#[test]
fn dim0_matches_threshold_sweep() {
    let mut r = rng(9);
    for trial in 0..300 {
        let n = r.gen_range(1..25);
        let values: Vec<f64> = if trial % 2 == 0 {
            (0..n).map(|_| r.gen_range(0..6) as f64).collect()
        } else {
            (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
        };
        let complex = build_path_filtration(&ScalarField1D::new(values.clone()).unwrap());
        let mut got = pairs_of(&compute_persistence_dim0(&complex));
        got.retain(|p| p.0 < p.1);
        got.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        assert_eq!(got, sublevel_dim0(&values), "{values:?}");
        let mut reduced = pairs_of(&compute_persistence(&complex)[0]);
        reduced.retain(|p| p.0 < p.1);
        reduced.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        assert_eq!(reduced, got);
    }
}

#[test]
fn ring_image_has_one_loop() {
    let img = GrayscaleImage::new(3, 3, vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let d = compute_persistence(&build_cubical_filtration(&img));
    assert!(d[0].is_empty());
    assert_eq!(pairs_of(&d[1]), vec![(0.0, 1.0)]);
}

#[test]
fn landscape_layers_match_pointwise_maxima() {
    let mut r = rng(21);
    for _ in 0..100 {
        let pairs = random_pairs(&mut r, 0, 6, 0.0, 1.0);
        let l = build_landscape(&diagram(&pairs));
        for _ in 0..20 {
            let t = r.gen_range(-0.2..1.2);
            for k in 1..=pairs.len() + 1 {
                let got = if k <= l.layers().len() { l.layers()[k - 1].eval(t) } else { 0.0 };
                assert!((got - landscape_oracle(&pairs, k, t)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn landscape_distance_matches_quadrature() {
    let mut r = rng(23);
    for _ in 0..20 {
        let (f, g) = (random_pairs(&mut r, 0, 4, 0.0, 1.0), random_pairs(&mut r, 0, 4, 0.0, 1.0));
        // Simpson on a fine grid over the support
        let n = 20_000;
        let h = 1.0 / n as f64;
        let mut sum = 0.0;
        for i in 0..=n {
            let t = i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let depth = f.len().max(g.len());
            let s: f64 = (1..=depth).map(|k| (landscape_oracle(&f, k, t) - landscape_oracle(&g, k, t)).powi(2)).sum();
            sum += w * s;
        }
        let numeric = (sum * h / 3.0).sqrt();
        let exact = landscape_distance(&diagram(&f), &diagram(&g));
        assert!((exact - numeric).abs() < 1e-6, "{exact} vs {numeric}");
    }
}

#[test]
fn scale_space_separates_low_persistence_classes() {
    let q = low_persistence_quartet(1);
    let s = scale(0.01);
    let refs = [(&q.f, 'A'), (&q.f_prime, 'A'), (&q.g_prime, 'B')];
    let nearest = |dist: &dyn Fn(&PersistenceDiagram) -> f64| {
        refs.iter().min_by(|a, b| dist(a.0).total_cmp(&dist(b.0))).unwrap().1
    };
    assert_eq!(nearest(&|d| pssk_distance(&q.g, d, s)), 'B');
    assert_eq!(nearest(&|d| landscape_distance(&q.g, d)), 'A');
}
