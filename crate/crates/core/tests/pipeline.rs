//! Cross-module checks through the public API.

use affinewalk::exactdist::{evolve, WalkConfig};
use affinewalk::fourier::{bound_series, mixing_time, Budgets, MixingMethod};
use affinewalk::montecarlo::{empirical_tv, projected_walk_dist, projection_functional, simulate, tv_to_uniform_1d};
use affinewalk::spectral::classify;

#[test]
fn projection_bound_chain() {
    let cfg = WalkConfig::from_rows(&[[1, 1], [0, 2]], 7).unwrap();
    let m = classify(cfg.matrix(), 1e-9).unwrap().classification.root_of_unity_order().unwrap();
    let report = projection_functional(cfg.matrix(), 7, m).unwrap();
    let ns: Vec<u64> = (0..=12).collect();
    let series = bound_series(&cfg, &ns, &Budgets::default()).unwrap();
    let tv = series.tv_exact.unwrap();
    for (i, &n) in ns.iter().enumerate() {
        let projected = tv_to_uniform_1d(&projected_walk_dist(&report, n));
        assert!(projected <= tv[i] + 1e-12);
        assert!(tv[i] <= series.ub[i] + 1e-12);
    }
}

#[test]
fn exact_mixing_never_later_than_bound() {
    for rows in [[[2, 1], [1, 1]], [[1, 1], [0, 2]], [[3, 1], [2, 1]]] {
        for p in [5u64, 7, 11] {
            let cfg = WalkConfig::from_rows(&rows, p).unwrap();
            for eps in [0.5, 0.25, 0.05] {
                let b = Budgets::default();
                let exact = mixing_time(&cfg, eps, MixingMethod::Exact, 5000, &b).unwrap().steps().unwrap();
                let ub = mixing_time(&cfg, eps, MixingMethod::Ub, 5000, &b).unwrap().steps().unwrap();
                assert!(exact <= ub, "{rows:?} p={p} eps={eps}: {exact} > {ub}");
            }
        }
    }
}

#[test]
fn simulation_tracks_exact_distance() {
    let cfg = WalkConfig::from_rows(&[[2, 1], [1, 1]], 7).unwrap();
    for n in [0u64, 1, 2, 4] {
        let exact = evolve(&cfg, n).unwrap().tv_to_uniform();
        let est = empirical_tv(&simulate(&cfg, n, 200_000, 17 + n)).unwrap();
        // plug-in bias is at most about sqrt(49 / 200000) / 2
        assert!((est - exact).abs() < 0.02, "n={n}: {est} vs {exact}");
    }
}
