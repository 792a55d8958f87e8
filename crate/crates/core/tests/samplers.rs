mod common;

use std::f64::consts::PI;

use difflab::geom::{point_density, restrict, window_volume, PointSet, Window};
use difflab::io::write_point_set;
use difflab::samplers::{
    ginibre_spectrum, mark_pm1, matern2_thin, sample_beta_bulk, sample_ginibre, sample_model, sample_poisson,
    sample_renewal, ModelSpec, Sample,
};
use difflab::seed::SeedSpec;
use difflab::specfun::{WaitingDistribution, WaitingSpec};
use proptest::prelude::*;

fn seed(master: u64, replica: u64) -> SeedSpec {
    SeedSpec::new(master, replica)
}

fn bytes(s: &Sample) -> Vec<u8> {
    let mut out = Vec::new();
    write_point_set(&mut out, s.points(), s.weights()).unwrap();
    out
}

#[test]
fn window_and_density_examples() {
    assert_eq!(window_volume(&Window::interval(10.0).unwrap()), 10.0);
    assert!((window_volume(&Window::disk(1.0).unwrap()) - PI).abs() < 1e-15);
    assert_eq!(window_volume(&Window::square(2.0).unwrap()), 4.0);
    let w = Window::interval(10.0).unwrap();
    let ten = PointSet::line(w, (0..10).map(|i| i as f64 - 4.5).collect()).unwrap();
    assert_eq!(point_density(&ten), 1.0);
    assert_eq!(point_density(&PointSet::empty(Window::interval(5.0).unwrap())), 0.0);
}

#[test]
fn restrict_examples() {
    let p = PointSet::line(Window::interval(10.0).unwrap(), vec![-3.0, 0.0, 3.0]).unwrap();
    let small = restrict(&p, Window::interval(4.0).unwrap()).unwrap();
    assert_eq!(small.xs().unwrap(), &[0.0]);
    assert_eq!(restrict(&p, *p.window()).unwrap(), p);
    let q = PointSet::plane(
        Window::disk(2.0).unwrap(),
        vec![[0.5, 0.5], [1.0, 0.0], [0.0, -0.99], [1.5, 0.2]],
    )
    .unwrap();
    let inner = restrict(&q, Window::disk(1.0).unwrap()).unwrap();
    assert_eq!(inner.points_2d().unwrap(), &[[0.5, 0.5], [0.0, -0.99]]);
    assert!(restrict(&p, Window::interval(20.0).unwrap()).is_err());
    assert!(restrict(&p, Window::disk(1.0).unwrap()).is_err());
}

#[test]
fn poisson_counts() {
    let w = Window::interval(1e4).unwrap();
    assert!(sample_poisson(0.0, &w, seed(1, 0)).unwrap().is_empty());
    let n = sample_poisson(1.0, &w, seed(1, 0)).unwrap().len() as f64;
    assert!((n - 1e4).abs() < 400.0, "{n}");
    let d = point_density(&sample_poisson(2.0, &w, seed(2, 0)).unwrap());
    assert!((d - 2.0).abs() < 3.0 * (2.0f64 / 1e4).sqrt(), "{d}");
    assert!(sample_poisson(-1.0, &w, seed(1, 0)).is_err());
}

#[test]
fn poisson_positions_are_uniform() {
    let p = sample_poisson(1.0, &Window::interval(5000.0).unwrap(), seed(3, 0)).unwrap();
    let xs = p.xs().unwrap();
    assert!(xs.windows(2).all(|w| w[0] <= w[1]));
    let u: Vec<f64> = xs.iter().map(|x| x / 5000.0 + 0.5).collect();
    assert!(common::ks_statistic(&u, |x| x) < common::ks_critical_1pct(u.len()));
    let disk = sample_poisson(1.0, &Window::disk(30.0).unwrap(), seed(3, 1)).unwrap();
    let r2: Vec<f64> = disk
        .points_2d()
        .unwrap()
        .iter()
        .map(|p| (p[0] * p[0] + p[1] * p[1]) / 900.0)
        .collect();
    assert!(common::ks_statistic(&r2, |x| x) < common::ks_critical_1pct(r2.len()));
}

#[test]
fn disjoint_windows_have_independent_counts() {
    // 3×3 contingency table of (left count, right count) classes
    let w = Window::interval(20.0).unwrap();
    let class = |c: usize| match c {
        0..=7 => 0,
        8..=11 => 1,
        _ => 2,
    };
    let mut table = [[0.0f64; 3]; 3];
    let reps = 2000;
    for r in 0..reps {
        let p = sample_poisson(1.0, &w, seed(4, r)).unwrap();
        let xs = p.xs().unwrap();
        let left = xs.iter().filter(|x| **x < 0.0).count();
        table[class(left)][class(xs.len() - left)] += 1.0;
    }
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..3).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let mut chi2 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let e = rows[i] * cols[j] / reps as f64;
            chi2 += (table[i][j] - e).powi(2) / e;
        }
    }
    // 1% critical value of χ² with 4 degrees of freedom
    assert!(chi2 < 13.277, "{chi2}");
}

#[test]
fn marks() {
    let w = Window::interval(1e4).unwrap();
    assert!(mark_pm1(&PointSet::empty(w), seed(5, 0)).is_empty());
    let xs: Vec<f64> = (0..10_000).map(|i| i as f64 - 4999.5).collect();
    let p = PointSet::line(w, xs).unwrap();
    let m = mark_pm1(&p, seed(5, 0));
    assert!(m.weights().iter().all(|w| *w == 1.0 || *w == -1.0));
    let mean = m.weights().iter().sum::<f64>() / 1e4;
    assert!(mean.abs() < 4.0 / 100.0);
    assert_eq!(mark_pm1(&p, seed(5, 0)), m);
}

#[test]
fn matern_examples() {
    let w = Window::interval(10.0).unwrap();
    assert!(matern2_thin(&PointSet::empty(w), 1.0, seed(6, 0)).unwrap().is_empty());
    for r in 0..20 {
        let pair = PointSet::line(w, vec![0.0, 0.5]).unwrap();
        assert_eq!(matern2_thin(&pair, 1.0, seed(6, r)).unwrap().len(), 1);
        let far = PointSet::line(w, vec![-2.0, 2.0]).unwrap();
        assert_eq!(matern2_thin(&far, 1.0, seed(6, r)).unwrap().len(), 2);
    }
}

#[test]
fn renewal_lattice_and_exponential() {
    let w = Window::interval(1000.0).unwrap();
    let delta = WaitingDistribution::discrete(&[(1.0, 1.0)]).unwrap();
    let p = sample_renewal(&delta, &w, seed(7, 0)).unwrap();
    let xs = p.xs().unwrap();
    assert!(xs.len() >= 999);
    assert!(xs.windows(2).all(|g| (g[1] - g[0] - 1.0).abs() < 1e-9));

    let exp = WaitingDistribution::exponential();
    let p = sample_renewal(&exp, &Window::interval(1e4).unwrap(), seed(7, 1)).unwrap();
    let gaps: Vec<f64> = p.xs().unwrap().windows(2).map(|g| g[1] - g[0]).collect();
    assert!(common::ks_statistic(&gaps, |x| 1.0 - (-x).exp()) < common::ks_critical_1pct(gaps.len()));
    assert!((p.density() - 1.0).abs() < 4.0 * 0.01, "{}", p.density());
}

#[test]
fn renewal_densities_are_one() {
    for mu in [
        WaitingDistribution::gamma(2.0).unwrap(),
        WaitingDistribution::uniform(0.5, 1.5).unwrap(),
        WaitingDistribution::discrete(&[(0.5, 0.5), (1.5, 0.5)]).unwrap(),
    ] {
        let p = sample_renewal(&mu, &Window::interval(1e4).unwrap(), seed(8, 0)).unwrap();
        // count variance of a renewal process is L σ²/m³
        let sd = (mu.variance() / 1e4).sqrt();
        assert!((p.density() - 1.0).abs() < 4.0 * sd + 1e-4, "{mu:?}: {}", p.density());
    }
}

#[test]
fn beta_bulk_is_sorted_simple_and_unit_density() {
    for beta in [1, 2, 4] {
        let mut points = 0;
        let mut length = 0.0;
        for r in 0..20 {
            let p = sample_beta_bulk(beta, 2048, 0.1, seed(9, r)).unwrap();
            let xs = p.xs().unwrap();
            assert!(xs.windows(2).all(|w| w[0] < w[1]));
            assert!(p.is_simple(1e-12));
            points += p.len();
            length += p.window().volume();
        }
        let density = points as f64 / length;
        assert!((density - 1.0).abs() < 0.05, "β = {beta}: {density}");
    }
    assert!(sample_beta_bulk(3, 64, 0.1, seed(9, 0)).is_err());
    assert!(sample_beta_bulk(2, 8, 0.1, seed(9, 0)).is_err());
}

#[test]
fn sine_process_is_rigid() {
    let count_var = |counts: &[f64]| {
        let m = counts.iter().sum::<f64>() / counts.len() as f64;
        counts.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (counts.len() - 1) as f64
    };
    let mut bulk = Vec::new();
    let mut poisson = Vec::new();
    for r in 0..20 {
        let p = sample_beta_bulk(2, 2048, 0.1, seed(10, r)).unwrap();
        let q = sample_poisson(1.0, p.window(), seed(10, r)).unwrap();
        for j in 0..4 {
            let lo = -128.0 + 64.0 * j as f64;
            let count = |s: &PointSet| s.xs().unwrap().iter().filter(|x| **x >= lo && **x < lo + 64.0).count() as f64;
            bulk.push(count(&p));
            poisson.push(count(&q));
        }
    }
    let (vb, vp) = (count_var(&bulk), count_var(&poisson));
    assert!(vb < 64.0 && vb < vp, "bulk {vb}, poisson {vp}");
}

#[test]
fn ginibre_density_and_single_entry() {
    let mut points = 0;
    let mut area = 0.0;
    for r in 0..40 {
        let p = sample_ginibre(128, 0.5, seed(11, r)).unwrap();
        assert!(p.is_simple(1e-12));
        points += p.len();
        area += p.window().volume();
    }
    assert!((points as f64 / area - 1.0).abs() < 0.05);
    // N = 1: the eigenvalue is the entry itself, with E|z|² = 1/π
    let mean_sq = (0..4000)
        .map(|r| ginibre_spectrum(1, seed(12, r)).unwrap()[0].norm_sqr())
        .sum::<f64>()
        / 4000.0;
    assert!((mean_sq - 1.0 / PI).abs() < 4.0 / PI / 4000f64.sqrt());
}

fn models() -> Vec<ModelSpec> {
    vec![
        ModelSpec::Poisson {
            rho: 1.0,
            window: Window::disk(10.0).unwrap(),
        },
        ModelSpec::MarkedPoisson {
            rho: 1.0,
            window: Window::interval(100.0).unwrap(),
        },
        ModelSpec::Matern {
            rho: 2.0,
            hard_core: 0.3,
            window: Window::square(10.0).unwrap(),
        },
        ModelSpec::Renewal {
            waiting: WaitingSpec::Gamma { shape: 2.0, rate: None },
            length: 100.0,
        },
        ModelSpec::BetaBulk {
            beta: 4,
            n: 128,
            keep: 0.5,
        },
        ModelSpec::Ginibre { n: 32, keep: 0.5 },
    ]
}

#[test]
fn every_sampler_is_deterministic_and_simple() {
    for spec in models() {
        for r in 0..3 {
            let a = sample_model(&spec, seed(13, r)).unwrap();
            let b = sample_model(&spec, seed(13, r)).unwrap();
            assert_eq!(bytes(&a), bytes(&b), "{}", spec.name());
            assert!(a.points().is_simple(1e-12));
            let other = sample_model(&spec, seed(13, r + 10)).unwrap();
            assert_ne!(bytes(&a), bytes(&other));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn restrict_is_idempotent(master in any::<u64>(), outer in 5.0f64..50.0, frac in 0.1f64..1.0) {
        let p = sample_poisson(1.0, &Window::square(outer).unwrap(), seed(master, 0)).unwrap();
        let w = Window::square(outer * frac).unwrap();
        let once = restrict(&p, w).unwrap();
        prop_assert_eq!(&restrict(&once, w).unwrap(), &once);
        prop_assert_eq!(point_density(&once), once.len() as f64 / w.volume());
    }

    #[test]
    fn matern_output_is_hard_core(master in any::<u64>(), d in 0.05f64..2.0, planar in any::<bool>()) {
        let w = if planar { Window::disk(8.0).unwrap() } else { Window::interval(100.0).unwrap() };
        let p = sample_poisson(2.0, &w, seed(master, 1)).unwrap();
        let thinned = matern2_thin(&p, d, seed(master, 1)).unwrap();
        prop_assert!(thinned.min_pair_distance().is_none_or(|m| m >= d));
        prop_assert!(thinned.len() <= p.len());
    }
}
