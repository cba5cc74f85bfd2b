use toric_qfi::disorder::{run_realization, sample_couplings, DisorderSpec};
use toric_qfi::uniform::{ground_contractions, ground_wd, ground_wd_curve, quench_contractions, quench_cxd_infty_exact};

#[test]
fn perimeter_plateau_is_converged() {
    let w = ground_wd(50, 0.5, 400).unwrap();
    assert!((0.92..=0.94).contains(&w), "{w}");
    assert!((w - ground_wd(50, 0.5, 800).unwrap()).abs() < 1e-10);
}

#[test]
fn area_law_decays() {
    let w = ground_wd_curve(1.5, 200, 30).unwrap();
    assert!(w.windows(2).all(|p| p[1] < p[0]));
    assert!(w[29] < 1e-2);
}

#[test]
fn wilson_loops_decrease_with_field() {
    let grid: Vec<f64> = (1..=15).map(|k| 0.1 * k as f64).collect();
    for d in [4, 10, 20] {
        let w: Vec<f64> = grid.iter().map(|&l| ground_wd(d, l, 200).unwrap()).collect();
        assert!(w.windows(2).all(|p| p[1] < p[0]), "D = {d}: {w:?}");
    }
}

#[test]
fn trivial_quench_is_stationary() {
    for lambda in [0.3, 0.5, 0.8] {
        let ground = ground_contractions(lambda, 60, 10).unwrap();
        for t in [0.0, 0.7, 25.0] {
            let q = quench_contractions(lambda, lambda, t, 60, 10).unwrap();
            for d in 1..=10 {
                let (a, b) = (q.xx_correlator(d).unwrap(), ground.xx_correlator(d).unwrap());
                assert!((a - b).abs() < 1e-12, "λ = {lambda}, t = {t}, d = {d}");
            }
        }
    }
}

#[test]
fn clean_ensemble_matches_momentum_engine() {
    let (l, n, lambda) = (8, 40, 0.5);
    let times = [0.0, 3.0, 50.0];
    let spec = DisorderSpec::new(0.0, lambda, l, 1, 9, times.to_vec()).unwrap().with_n_sites(n).unwrap();
    let (a, b) = sample_couplings(&spec, 0).unwrap();
    let r = run_realization(&a, &b, &times, &spec.d_values()).unwrap();
    for (ti, &t) in times.iter().enumerate() {
        let set = quench_contractions(0.0, lambda, t, n, l).unwrap();
        for (k, &d) in spec.d_values().iter().enumerate() {
            let m = set.xx_correlator(d).unwrap();
            assert!((r.wd[ti][k] - m).abs() < 1e-8, "t = {t}, D = {d}: {} vs {m}", r.wd[ti][k]);
        }
    }
}

#[test]
fn clean_window_average_approaches_closed_form() {
    // before finite-size revivals; at N = 200, t = 1000 the value sits ~30% higher
    let (n, d) = (1000, 20);
    let at = |t| quench_contractions(0.0, 0.5, t, n, d).unwrap().xx_correlator(d).unwrap();
    let avg = (0..40).map(|k| at(100.0 + 100.0 * k as f64 / 39.0)).sum::<f64>() / 40.0;
    let exact = quench_cxd_infty_exact(d, 0.5).unwrap();
    assert!((avg - exact).abs() <= 1e-3 * exact, "window average = {avg}, closed form = {exact}");
}
