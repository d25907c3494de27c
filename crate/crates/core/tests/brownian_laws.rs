use cantor_zeros::brownian::{refine_bridge, rescale_markov, sample_path, TimeGrid};
use cantor_zeros::rng::Stream;
use cantor_zeros::special::norm_cdf;
use proptest::prelude::*;

/// Kolmogorov critical value `c(α)` for α = 1e-3.
const KS_CRIT_1E3: f64 = 1.949;

fn ks_statistic(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            let f = norm_cdf(*x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn standardized_increments_pass_ks() {
    let n = 100_000;
    let mut s = Stream::new(0xC0FFEE);
    let mut times = vec![0.0];
    for _ in 0..n {
        let dt = 1e-3 * (0.01 + s.next_open01());
        times.push(times.last().unwrap() + dt);
    }
    let path = sample_path(&TimeGrid::new(times.clone()).unwrap(), 42);
    let z: Vec<f64> = (0..n)
        .map(|i| (path.values[i + 1] - path.values[i]) / (times[i + 1] - times[i]).sqrt())
        .collect();
    let d = ks_statistic(z);
    assert!(
        d * (n as f64).sqrt() < KS_CRIT_1E3,
        "D√N = {}",
        d * (n as f64).sqrt()
    );
}

#[test]
fn disjoint_refinements_have_bridge_covariance() {
    let grid = TimeGrid::new(vec![0.0, 1.0, 2.0]).unwrap();
    let reps = 20_000;
    let (mut r1, mut r2) = (Vec::with_capacity(reps), Vec::with_capacity(reps));
    for seed in 0..reps as u64 {
        let p = sample_path(&grid, seed);
        let q = refine_bridge(&p, (0, 1), &[0.5], 1).unwrap();
        let q = refine_bridge(&q, (2, 3), &[1.5], 2).unwrap();
        assert_eq!(q.values[0], p.values[0]);
        assert_eq!(q.values[2], p.values[1]);
        assert_eq!(q.values[4], p.values[2]);
        r1.push(q.values[1] - (p.values[0] + p.values[1]) / 2.0);
        r2.push(q.values[3] - (p.values[1] + p.values[2]) / 2.0);
    }
    let m = reps as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / m;
    let (m1, m2) = (mean(&r1), mean(&r2));
    let var1 = r1.iter().map(|x| (x - m1).powi(2)).sum::<f64>() / m;
    let var2 = r2.iter().map(|x| (x - m2).powi(2)).sum::<f64>() / m;
    let cov = r1
        .iter()
        .zip(&r2)
        .map(|(a, b)| (a - m1) * (b - m2))
        .sum::<f64>()
        / m;
    // bridge variance at the midpoint of a unit step is 1/4
    let se_var = 0.25 * (2.0 / m).sqrt();
    let se_cov = 0.25 / m.sqrt();
    assert!((var1 - 0.25).abs() < 4.0 * se_var, "{var1}");
    assert!((var2 - 0.25).abs() < 4.0 * se_var, "{var2}");
    assert!(cov.abs() < 4.0 * se_cov, "{cov}");
}

#[test]
fn rescaled_endpoint_is_standard_normal() {
    let grid = TimeGrid::new(vec![0.0, 0.7, 1.3, 2.2]).unwrap();
    let reps = 100_000;
    let xs: Vec<f64> = (0..reps as u64)
        .map(|seed| {
            let p = sample_path(&grid, seed);
            *rescale_markov(&p, 0.7, 2.2).unwrap().values.last().unwrap()
        })
        .collect();
    let m = reps as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
    assert!(mean.abs() < 3.0 / m.sqrt(), "{mean}");
    assert!((var - 1.0).abs() < 3.0 * (2.0 / m).sqrt(), "{var}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn paths_are_pure_functions_of_grid_and_seed(
        steps in prop::collection::vec(1e-4f64..1.0, 1..50), seed in any::<u64>()
    ) {
        let mut t = vec![0.0];
        for s in steps {
            t.push(t.last().unwrap() + s);
        }
        let g = TimeGrid::new(t).unwrap();
        prop_assert_eq!(sample_path(&g, seed), sample_path(&g, seed));
    }

    #[test]
    fn refinement_keeps_existing_values(
        n_new in 1usize..20, seed in any::<u64>(), rseed in any::<u64>()
    ) {
        let g = TimeGrid::new(vec![0.0, 1.0, 3.0, 4.0]).unwrap();
        let p = sample_path(&g, seed);
        let new: Vec<f64> = (1..=n_new).map(|i| 1.0 + 2.0 * i as f64 / (n_new + 1) as f64).collect();
        let q = refine_bridge(&p, (1, 2), &new, rseed).unwrap();
        prop_assert_eq!(q.grid.len(), p.grid.len() + n_new);
        for (i, t) in p.grid.times().iter().enumerate() {
            prop_assert_eq!(q.value_at(*t), Some(p.values[i]));
        }
        prop_assert_eq!(refine_bridge(&p, (1, 2), &new, rseed).unwrap(), q);
    }
}
