//! Fast built-in consistency checks behind `toricqfi selftest`.

use toric_qfi::disorder::{run_realization, sample_couplings, DisorderSpec};
use toric_qfi::ffcore::{evolve_kernel, solve_chain, xx_correlator, ChainSpec};
use toric_qfi::pfaffian::{pfaffian, SkewMatrix, C64};
use toric_qfi::qfi::{fit_scaling, thermal_bound_fq, QfiCurve, Sector};
use toric_qfi::uniform::{ground_wd, quench_contractions, quench_cxd_infty_exact};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Deterministic dense skew matrix with O(1) entries.
fn test_matrix(n: usize) -> SkewMatrix {
    SkewMatrix::from_upper(n, |i, j| {
        let (a, b) = (i as f64, j as f64);
        C64::new((1.3 * a + 0.7 * b + 0.1).sin(), (0.4 * a - 1.1 * b).cos())
    })
    .expect("even dimension")
}

fn pfaffian_squares() -> Check {
    let mut worst = 0.0f64;
    for n in (2..=24).step_by(2) {
        let m = test_matrix(n);
        let pf = pfaffian(&m);
        let det = m.entries().clone().determinant();
        worst = worst.max((pf * pf - det).norm() / det.norm());
    }
    check("pfaffian squared equals determinant", worst <= 1e-9, format!("max relative error {worst:.2e}"))
}

fn engines_agree() -> Check {
    let (n, t) = (12, 1.3);
    let run = || -> toric_qfi::Result<f64> {
        let s0 = solve_chain(&ChainSpec::uniform(n, 1.0, 0.0)?)?;
        let s1 = solve_chain(&ChainSpec::uniform(n, 1.0, 0.5)?)?;
        let k = evolve_kernel(&s0, &s1, t)?;
        let set = quench_contractions(0.0, 0.5, t, n, 5)?;
        let mut worst = 0.0f64;
        for d in 1..=5 {
            worst = worst.max((set.xx_correlator(d)? - xx_correlator(&k, 3, d)?.value).abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(w) => check("momentum and real-space engines agree", w <= 1e-10, format!("max deviation {w:.2e}")),
        Err(e) => check("momentum and real-space engines agree", false, e.to_string()),
    }
}

fn closed_form() -> Check {
    let v = quench_cxd_infty_exact(2, 0.5).unwrap_or(f64::NAN);
    check("long-time correlator closed form", (v - 0.8125).abs() <= 1e-12, format!("C_2(∞) = {v}"))
}

fn plateau() -> Check {
    let w = ground_wd(50, 0.5, 400).unwrap_or(f64::NAN);
    check("perimeter-law plateau at λ = 0.5", (0.92..=0.94).contains(&w), format!("w_50 = {w}"))
}

fn thermal() -> Check {
    let b = thermal_bound_fq(1.0, 1.0, 10_000).unwrap_or(f64::NAN);
    let x = 1f64.tanh();
    let series = 1.0 + (1..50).map(|d| x.powi(d)).sum::<f64>();
    let closed = thermal_bound_fq(1.0, 1.0, 50).unwrap_or(f64::NAN);
    let ok = (b - 4.19454).abs() <= 1e-4 && (closed - series).abs() <= 1e-12 * series;
    check("thermal bound", ok, format!("bound(L = 10^4) = {b}"))
}

fn fit() -> Check {
    let samples = (8..=64).map(|l| (l, 1.0 + 0.5 * l as f64)).collect();
    let r = QfiCurve::new(Sector::Electric, samples).and_then(|c| fit_scaling(&c, (8, 64)));
    match r {
        Ok(f) => check(
            "power-law fit",
            (f.alpha - 0.5).abs() <= 1e-10 && (f.beta - 1.0).abs() <= 1e-10,
            format!("α = {}, β = {}", f.alpha, f.beta),
        ),
        Err(e) => check("power-law fit", false, e.to_string()),
    }
}

fn disorder_start() -> Check {
    let run = || -> toric_qfi::Result<f64> {
        let spec = DisorderSpec::new(0.5, 0.5, 5, 1, 17, vec![0.0])?;
        let (a, b) = sample_couplings(&spec, 0)?;
        let r = run_realization(&a, &b, &[0.0], &spec.d_values())?;
        Ok(r.wd[0].iter().map(|w| (w - 1.0).abs()).fold(0.0, f64::max))
    };
    match run() {
        Ok(w) => check("disordered code starts ordered", w <= 1e-9, format!("max |w_D(0) − 1| = {w:.2e}")),
        Err(e) => check("disordered code starts ordered", false, e.to_string()),
    }
}

pub fn run_all() -> Vec<Check> {
    vec![
        pfaffian_squares(),
        engines_agree(),
        closed_form(),
        plateau(),
        thermal(),
        fit(),
        disorder_start(),
    ]
}
