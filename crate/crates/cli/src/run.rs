//! Experiment pipelines. Each computes its tables in memory; [`execute`]
//! writes them next to the manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use toric_qfi::disorder::{average_ensemble, default_chain_length, DisorderSpec};
use toric_qfi::qfi::{fit_scaling, topological_index, QfiCurve, ScalingFit, Sector};
use toric_qfi::uniform::{
    ground_wd_curve, quench_contractions, quench_cxd_infty_exact, quench_wd_infty, ToricFieldPoint,
};
use toric_qfi::qfi::thermal_bound_fq;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;
use crate::manifest::Manifest;
use crate::plot::LineChart;
use crate::table::{Cell, Table};

/// In-memory result of one experiment.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub charts: Vec<(String, LineChart)>,
    pub notes: Vec<(&'static str, String)>,
    pub seeds: Vec<u64>,
}

impl RunOutput {
    fn new(seeds: Vec<u64>) -> Self {
        Self {
            tables: Vec::new(),
            charts: Vec::new(),
            notes: Vec::new(),
            seeds,
        }
    }

    pub fn table(&self, file_name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.file_name == file_name)
    }
}

pub fn compute(config: &ExperimentConfig) -> Result<RunOutput, CliError> {
    match config.experiment {
        Experiment::Ground => run_ground(config),
        Experiment::PhaseDiagram => run_phase_diagram(config),
        Experiment::QuenchUniform => run_quench_uniform(config),
        Experiment::QuenchDisorder => run_quench_disorder(config),
        Experiment::ThermalBound => run_thermal(config),
    }
}

/// Computes, then writes the manifest, every table and (if enabled) charts.
pub fn execute(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let output = compute(config)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let manifest = Manifest::new(config, &output.seeds, &output.notes);
    manifest.write(out_dir)?;
    let header = manifest.csv_header(config.experiment.name());
    let mut written = vec![out_dir.join(crate::manifest::MANIFEST_FILE)];
    for t in &output.tables {
        written.push(t.write(out_dir, &header)?);
    }
    if config.boolean("plots") {
        for (name, chart) in &output.charts {
            let path = out_dir.join(name);
            std::fs::write(&path, chart.to_svg()).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check_chain(n_sites: usize, l: usize) -> Result<(), CliError> {
    if l == 0 {
        return Err(config_err("region side L must be at least 1"));
    }
    if n_sites < 2 || n_sites % 2 != 0 {
        return Err(config_err(format!("chain length N must be even and ≥ 2, got {n_sites}")));
    }
    if n_sites < 2 * l {
        return Err(config_err(format!("need N ≥ 2L, got N = {n_sites}, L = {l}")));
    }
    Ok(())
}

fn check_fields(name: &str, xs: &[f64]) -> Result<(), CliError> {
    if xs.is_empty() {
        return Err(config_err(format!("`{name}` is empty")));
    }
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(config_err(format!("`{name}` has a non-finite entry {x}")));
    }
    Ok(())
}

/// `w_1 … w_{L−1}` of the uniform chain; empty for `L = 1`.
fn wilson_loops(lambda: f64, n_sites: usize, l: usize) -> Result<Vec<f64>, CliError> {
    if l < 2 {
        return Ok(Vec::new());
    }
    Ok(ground_wd_curve(lambda, n_sites, l - 1)?)
}

fn fit_columns() -> Vec<&'static str> {
    vec!["alpha", "beta", "residual", "l_min", "l_max", "n_points", "status"]
}

/// Fit cells; fits that cannot be formed are reported, not fatal.
fn fit_cells(fit: &Result<ScalingFit, toric_qfi::Error>) -> Vec<Cell> {
    match fit {
        Ok(f) => vec![
            f.alpha.into(),
            f.beta.into(),
            f.residual.into(),
            f.window.0.into(),
            f.window.1.into(),
            f.n_points.into(),
            if f.saturated { "saturated" } else { "ok" }.into(),
        ],
        Err(_) => vec![
            f64::NAN.into(),
            f64::NAN.into(),
            f64::NAN.into(),
            0usize.into(),
            0usize.into(),
            0usize.into(),
            "insufficient".into(),
        ],
    }
}

fn run_ground(c: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let lambdas = c.floats("lambdas");
    check_fields("lambdas", &lambdas)?;
    let l = c.uint("l_region")?;
    let n = c.opt_uint("n_sites")?.unwrap_or(default_chain_length(l));
    check_chain(n, l)?;

    let curves: Vec<Vec<f64>> = lambdas
        .par_iter()
        .map(|&lam| wilson_loops(lam, n, l))
        .collect::<Result<_, _>>()?;

    let mut wd_t = Table::new("wd_vs_D.csv", &["lambda", "D", "w_D"]);
    let mut fq_t = Table::new("fq_vs_L.csv", &["lambda", "L", "f_Q"]);
    let mut cols = vec!["lambda"];
    cols.extend(fit_columns());
    let mut fit_t = Table::new("fit.csv", &cols);
    let mut wd_chart = LineChart::new("reduced Wilson loop", "D", "w_D").log_y();
    let mut fq_chart = LineChart::new("QFI density", "L", "f_Q");
    let ls: Vec<usize> = (1..=l).collect();
    for (&lam, wd) in lambdas.iter().zip(&curves) {
        for (k, &w) in wd.iter().enumerate() {
            wd_t.push(vec![lam.into(), (k + 1).into(), w.into()]);
        }
        let curve = QfiCurve::from_wilson_loops(Sector::Electric, wd, &ls)?;
        for &(ll, f) in curve.samples() {
            fq_t.push(vec![lam.into(), ll.into(), f.into()]);
        }
        let window = curve.default_window().expect("L ≥ 1");
        let mut row = vec![lam.into()];
        row.extend(fit_cells(&fit_scaling(&curve, window)));
        fit_t.push(row);
        wd_chart.add(format!("λ = {lam}"), wd.iter().enumerate().map(|(k, &w)| ((k + 1) as f64, w)).collect());
        fq_chart.add(format!("λ = {lam}"), curve.samples().iter().map(|&(a, b)| (a as f64, b)).collect());
    }

    let mut out = RunOutput::new(vec![c.seed()]);
    out.notes.push(("n_sites", n.to_string()));
    out.notes.push(("fit_window", "upper half of L' = 1..=L".into()));
    out.tables = vec![wd_t, fq_t, fit_t];
    out.charts = vec![("wd_vs_D.svg".into(), wd_chart), ("fq_vs_L.svg".into(), fq_chart)];
    Ok(out)
}

fn run_phase_diagram(c: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let lx = c.floats("lambda_x");
    let lz = c.floats("lambda_z");
    check_fields("lambda_x", &lx)?;
    check_fields("lambda_z", &lz)?;
    let ls = c.uints("l_values")?.unwrap_or_default();
    if ls.is_empty() || ls.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config_err("`l_values` must be non-empty and strictly increasing"));
    }
    let per_l = c.uint("n_per_l")?;
    for &l in &ls {
        check_chain(per_l * l, l)?;
    }
    let (j_a, j_b) = (c.float("j_a"), c.float("j_b"));
    let points: Vec<ToricFieldPoint> = lx
        .iter()
        .flat_map(|&x| {
            lz.iter().map(move |&z| ToricFieldPoint {
                lambda_x: x,
                lambda_z: z,
                j_a,
                j_b,
            })
        })
        .collect();
    for p in &points {
        p.validate()?;
    }

    // f_Q(L) per distinct effective field; N = n_per_l · L for every L
    let mut fields: Vec<f64> = points
        .iter()
        .flat_map(|p| [p.electric_field(), p.magnetic_field()])
        .collect();
    fields.sort_by(f64::total_cmp);
    fields.dedup();
    let fq_rows: Vec<Vec<(usize, f64)>> = fields
        .par_iter()
        .map(|&lam| {
            ls.iter()
                .map(|&l| {
                    let wd = wilson_loops(lam, per_l * l, l)?;
                    Ok((l, toric_qfi::qfi::qfi_density(&wd)?))
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<_, _>>()?;
    let by_field: BTreeMap<u64, &Vec<(usize, f64)>> =
        fields.iter().map(|f| f.to_bits()).zip(fq_rows.iter()).collect();

    let curve = |sector: Sector, lam: f64| QfiCurve::new(sector, by_field[&lam.to_bits()].clone());
    let window = match c.window("fit_window")? {
        Some(w) => w,
        None => QfiCurve::new(Sector::Electric, fq_rows[0].clone())?
            .default_window()
            .expect("non-empty l_values"),
    };

    // one curve per effective chain field, shared by both sectors
    let mut fq_t = Table::new("fq_vs_L.csv", &["lambda", "L", "f_Q"]);
    for (&lam, rows) in fields.iter().zip(&fq_rows) {
        for &(l, f) in rows {
            fq_t.push(vec![lam.into(), l.into(), f.into()]);
        }
    }

    let mut idx_t = Table::new(
        "index.csv",
        &["lambda_x", "lambda_z", "beta_e", "beta_m", "index", "residual_e", "residual_m"],
    );
    let mut status_t = Table::new(
        "index_fits.csv",
        &["lambda_x", "lambda_z", "alpha_e", "alpha_m", "status_e", "status_m", "l_min", "l_max"],
    );
    let status = |f: &ScalingFit| if f.saturated { "saturated" } else { "ok" };
    for p in &points {
        let fe = fit_scaling(&curve(Sector::Electric, p.electric_field())?, window)?;
        let fm = fit_scaling(&curve(Sector::Magnetic, p.magnetic_field())?, window)?;
        let idx = topological_index(&fe, &fm)?;
        idx_t.push(vec![
            p.lambda_x.into(),
            p.lambda_z.into(),
            idx.beta_e.into(),
            idx.beta_m.into(),
            idx.index.into(),
            fe.residual.into(),
            fm.residual.into(),
        ]);
        status_t.push(vec![
            p.lambda_x.into(),
            p.lambda_z.into(),
            fe.alpha.into(),
            fm.alpha.into(),
            status(&fe).into(),
            status(&fm).into(),
            window.0.into(),
            window.1.into(),
        ]);
    }

    let mut chart = LineChart::new("QFI density by field", "L", "f_Q");
    for (&lam, rows) in fields.iter().zip(&fq_rows) {
        chart.add(format!("λ = {lam}"), rows.iter().map(|&(l, f)| (l as f64, f)).collect());
    }
    let mut out = RunOutput::new(vec![c.seed()]);
    out.notes.push(("fit_window", format!("[{}, {}]", window.0, window.1)));
    out.notes.push(("fields", "electric chains use λ^x/J^B, magnetic chains λ^z/J^A".into()));
    out.tables = vec![idx_t, status_t, fq_t];
    out.charts = vec![("fq_vs_L.svg".into(), chart)];
    Ok(out)
}

fn time_grid(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>, CliError> {
    if n == 0 || !t_min.is_finite() || !t_max.is_finite() || t_max < t_min {
        return Err(config_err(format!("bad time grid [{t_min}, {t_max}] with {n} points")));
    }
    if n == 1 {
        return Ok(vec![t_min]);
    }
    Ok((0..n).map(|k| t_min + (t_max - t_min) * k as f64 / (n - 1) as f64).collect())
}

fn run_quench_uniform(c: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let (l0, l1) = (c.float("lambda0"), c.float("lambda"));
    let n = c.uint("n_sites")?;
    let d_max = c.uint("d_max")?;
    if d_max == 0 {
        return Err(config_err("`d_max` must be at least 1"));
    }
    check_chain(n, d_max + 1)?;
    let times = time_grid(c.float("t_min"), c.float("t_max"), c.uint("n_times")?)?;

    let series: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            let set = quench_contractions(l0, l1, t, n, d_max)?;
            (1..=d_max).map(|d| set.xx_correlator(d)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, toric_qfi::Error>>()?;

    // long-time closed forms describe quenches out of the unperturbed code
    let closed = |d: usize| -> (f64, f64) {
        if l0 == 0.0 && l1 > 0.0 {
            (
                quench_cxd_infty_exact(d, l1).unwrap_or(f64::NAN),
                quench_wd_infty(d, l1).unwrap_or(f64::NAN),
            )
        } else {
            (f64::NAN, f64::NAN)
        }
    };

    let mut ts = Table::new("cxd_vs_t.csv", &["t", "d", "C_d", "C_d_inf_exact", "w_d_inf"]);
    for (&t, row) in times.iter().zip(&series) {
        for (k, &v) in row.iter().enumerate() {
            let (ex, wd) = closed(k + 1);
            ts.push(vec![t.into(), (k + 1).into(), v.into(), ex.into(), wd.into()]);
        }
    }
    let mut avg = Table::new("time_average.csv", &["d", "mean", "stderr", "C_d_inf_exact", "rel_dev"]);
    let mut chart = LineChart::new("string correlator after a quench", "t", "C_d(t)");
    for k in 0..d_max {
        let xs: Vec<f64> = series.iter().map(|r| r[k]).collect();
        let (m, s) = toric_qfi::disorder::mean_stderr(&xs);
        let (ex, _) = closed(k + 1);
        avg.push(vec![(k + 1).into(), m.into(), s.into(), ex.into(), ((m - ex).abs() / ex.abs()).into()]);
        chart.add(format!("d = {}", k + 1), times.iter().copied().zip(xs).collect());
    }
    let mut out = RunOutput::new(vec![c.seed()]);
    out.notes.push(("closed_forms", "filled only for quenches from λ₀ = 0".into()));
    out.tables = vec![ts, avg];
    out.charts = vec![("cxd_vs_t.svg".into(), chart)];
    Ok(out)
}

fn run_quench_disorder(c: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let deltas = c.floats("delta_j");
    check_fields("delta_j", &deltas)?;
    let l = c.uint("l_region")?;
    let n = c.opt_uint("n_sites")?.unwrap_or(default_chain_length(l));
    check_chain(n, l)?;
    let times = c.floats("times");
    check_fields("times", &times)?;
    let seed = c.seed();

    let mut wt = Table::new("wbar_vs_t.csv", &["delta_j", "t", "D", "wbar", "stderr"]);
    let mut wd = Table::new("wbar_vs_D.csv", &["delta_j", "D", "wbar", "stderr"]);
    let mut fq = Table::new("fqbar_vs_L.csv", &["delta_j", "L", "fqbar", "stderr"]);
    let mut cols = vec!["delta_j"];
    cols.extend(fit_columns());
    let mut fit_t = Table::new("fit.csv", &cols);
    let mut meta = Table::new(
        "ensemble.csv",
        &["delta_j", "n_realizations", "n_failed", "flagged_correlators", "master_seed"],
    );
    let mut wd_chart = LineChart::new("average reduced Wilson loop", "D", "w̄_D").log_y();
    let mut fq_chart = LineChart::new("average QFI density", "L", "f̄_Q");
    let mut starts = String::new();

    for &dj in &deltas {
        let mut spec = DisorderSpec::new(dj, c.float("lambda"), l, c.uint("n_realizations")?, seed, times.clone())?;
        spec.j_base = c.float("j");
        spec = spec.with_n_sites(n)?;
        spec.fit_window = c.window("fit_window")?;
        spec.inner_parallel = c.boolean("inner_parallel");
        let r = average_ensemble(&spec)?;
        let last = r.times.len() - 1;
        for (ti, &t) in r.times.iter().enumerate() {
            for (k, &d) in r.d_values.iter().enumerate() {
                wt.push(vec![dj.into(), t.into(), d.into(), r.mean_wd[ti][k].into(), r.stderr_wd[ti][k].into()]);
            }
        }
        for (k, &d) in r.d_values.iter().enumerate() {
            wd.push(vec![dj.into(), d.into(), r.mean_wd[last][k].into(), r.stderr_wd[last][k].into()]);
        }
        for (i, &ll) in r.l_values.iter().enumerate() {
            fq.push(vec![dj.into(), ll.into(), r.mean_fq[last][i].into(), r.stderr_fq[last][i].into()]);
        }
        let mut row = vec![dj.into()];
        row.extend(fit_cells(&r.fit));
        fit_t.push(row);
        meta.push(vec![
            dj.into(),
            r.n_realizations.into(),
            r.n_failed.into(),
            r.flagged_correlators.into(),
            r.master_seed.into(),
        ]);
        wd_chart.add(
            format!("δJ = {dj}"),
            r.d_values.iter().zip(&r.mean_wd[last]).map(|(&d, &w)| (d as f64, w)).collect(),
        );
        fq_chart.add(
            format!("δJ = {dj}"),
            r.l_values.iter().zip(&r.mean_fq[last]).map(|(&a, &b)| (a as f64, b)).collect(),
        );
        starts = format!("{:?}", r.start_sites);
    }

    let mut out = RunOutput::new(vec![seed]);
    out.notes.push(("n_sites", n.to_string()));
    out.notes.push(("start_sites", format!("w̄_D averages strings starting at sites {starts}")));
    out.notes.push((
        "streams",
        "realization i uses ChaCha8 stream i of the master seed for every δJ".into(),
    ));
    out.tables = vec![wt, wd, fq, fit_t, meta];
    out.charts = vec![("wbar_vs_D.svg".into(), wd_chart), ("fqbar_vs_L.svg".into(), fq_chart)];
    Ok(out)
}

fn run_thermal(c: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let j = c.float("j");
    let temps = c.floats("temperatures");
    check_fields("temperatures", &temps)?;
    let ls = c.uints("l_values")?.unwrap_or_default();
    if ls.is_empty() || ls.windows(2).any(|w| w[1] <= w[0]) || ls[0] == 0 {
        return Err(config_err("`l_values` must be positive and strictly increasing"));
    }
    let mut bound = Table::new("bound.csv", &["j", "T", "L", "bound"]);
    let mut slope = Table::new("bound_slope.csv", &["j", "T", "L_lo", "L_hi", "loglog_slope"]);
    let mut chart = LineChart::new("thermal bound on f_Q", "L", "bound");
    for &t in &temps {
        let vals = ls
            .iter()
            .map(|&l| thermal_bound_fq(j, t, l as u64))
            .collect::<Result<Vec<_>, _>>()?;
        for (&l, &b) in ls.iter().zip(&vals) {
            bound.push(vec![j.into(), t.into(), l.into(), b.into()]);
        }
        for k in 1..ls.len() {
            let s = ((vals[k] - 1.0) / (vals[k - 1] - 1.0)).ln() / (ls[k] as f64 / ls[k - 1] as f64).ln();
            slope.push(vec![j.into(), t.into(), ls[k - 1].into(), ls[k].into(), s.into()]);
        }
        chart.add(format!("T = {t}"), ls.iter().map(|&l| l as f64).zip(vals).collect());
    }
    let mut out = RunOutput::new(vec![c.seed()]);
    out.tables = vec![bound, slope];
    out.charts = vec![("bound.svg".into(), chart)];
    Ok(out)
}
