//! Quenches of the toric code with random stabilizer couplings.
//!
//! Each realization draws one chain of couplings `J_j ∈ [J − δJ, J + δJ]`,
//! starts in its `λ = 0` ground state and evolves under the same couplings
//! with a uniform field. Rows of the toric code are independent and identically
//! distributed, so one chain per realization covers the row average.
//!
//! Realization `i` draws from ChaCha8 stream `i` of the master seed, so an
//! ensemble does not depend on thread count or scheduling. Ensemble sums are
//! reduced pairwise in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffcore::{solve_chain, xx_correlator, ChainSpec, Quench};
use crate::qfi::{fit_scaling, QfiCurve, ScalingFit, Sector};

/// Largest fraction of failed realizations an ensemble tolerates.
pub const FAILURE_QUOTA: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct DisorderSpec {
    pub j_base: f64,
    pub delta_j: f64,
    pub lambda_quench: f64,
    pub n_sites: usize,
    pub l_region: usize,
    pub n_realizations: usize,
    pub master_seed: u64,
    pub times: Vec<f64>,
    /// Fit window on region sizes; `None` picks [`default_fit_window`].
    pub fit_window: Option<(usize, usize)>,
    /// Parallelize over start sites inside each realization instead of over
    /// realizations. Results are identical either way.
    pub inner_parallel: bool,
}

/// `N = 5L`, rounded up to even so the even-parity sector is well defined.
pub fn default_chain_length(l_region: usize) -> usize {
    let n = 5 * l_region;
    n + n % 2
}

impl DisorderSpec {
    /// Spec with `N = 5L` (see [`default_chain_length`]).
    pub fn new(
        delta_j: f64,
        lambda_quench: f64,
        l_region: usize,
        n_realizations: usize,
        master_seed: u64,
        times: Vec<f64>,
    ) -> Result<Self> {
        let spec = Self {
            j_base: 1.0,
            delta_j,
            lambda_quench,
            n_sites: default_chain_length(l_region),
            l_region,
            n_realizations,
            master_seed,
            times,
            fit_window: None,
            inner_parallel: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Overrides the `N = 5L` convention.
    pub fn with_n_sites(mut self, n_sites: usize) -> Result<Self> {
        self.n_sites = n_sites;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.j_base.is_finite() && self.delta_j.is_finite() && self.lambda_quench.is_finite()) {
            return Err(Error::NonFinite("disorder spec"));
        }
        if self.j_base <= 0.0 {
            return bad(format!("need J > 0, got {}", self.j_base));
        }
        if !(0.0..1.0).contains(&self.delta_j) || self.delta_j >= self.j_base {
            return bad(format!("need 0 ≤ δJ < min(1, J), got {}", self.delta_j));
        }
        if self.n_sites < 2 || self.n_sites % 2 != 0 {
            return Err(Error::InvalidSiteCount(self.n_sites));
        }
        if self.l_region < 2 || 2 * self.l_region > self.n_sites {
            return bad(format!(
                "need 2 ≤ L ≤ N/2, got L = {} with N = {}",
                self.l_region, self.n_sites
            ));
        }
        if self.n_realizations == 0 {
            return bad("need at least one realization".into());
        }
        if self.times.is_empty() || self.times.iter().any(|t| !t.is_finite()) {
            return bad("need a non-empty list of finite times".into());
        }
        Ok(())
    }

    /// `D = 1..L−1`.
    pub fn d_values(&self) -> Vec<usize> {
        (1..self.l_region).collect()
    }

    /// Evenly spaced string start sites, `⌊N/4⌋` of them.
    pub fn start_sites(&self) -> Vec<usize> {
        start_sites(self.n_sites)
    }
}

/// `⌊N/4⌋` (at least one) start sites `k N / n` spread around the ring.
pub fn start_sites(n_sites: usize) -> Vec<usize> {
    let n = (n_sites / 4).max(1);
    (0..n).map(|k| k * n_sites / n).collect()
}

/// The `(initial, quenched)` pair of realization `index`.
pub fn sample_couplings(spec: &DisorderSpec, index: usize) -> Result<(ChainSpec, ChainSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.master_seed);
    rng.set_stream(index as u64);
    let couplings: Vec<f64> = (0..spec.n_sites)
        .map(|_| {
            if spec.delta_j == 0.0 {
                spec.j_base
            } else {
                let u: f64 = rng.random();
                spec.j_base + spec.delta_j * (2.0 * u - 1.0)
            }
        })
        .collect();
    let initial = ChainSpec::new(couplings, vec![0.0; spec.n_sites])?;
    let quenched = initial.with_uniform_field(spec.lambda_quench)?;
    Ok((initial, quenched))
}

/// `w_D(t)` of one realization, averaged over [`start_sites`].
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationData {
    /// `wd[time][k]` for `d_values[k]`.
    pub wd: Vec<Vec<f64>>,
    /// Correlators whose Pfaffian had an imaginary part above tolerance.
    pub flagged: usize,
}

pub fn run_realization(
    initial: &ChainSpec,
    quenched: &ChainSpec,
    times: &[f64],
    d_values: &[usize],
) -> Result<RealizationData> {
    run_realization_with(initial, quenched, times, d_values, false)
}

fn run_realization_with(
    initial: &ChainSpec,
    quenched: &ChainSpec,
    times: &[f64],
    d_values: &[usize],
    parallel_starts: bool,
) -> Result<RealizationData> {
    let quench = Quench::new(&solve_chain(initial)?, &solve_chain(quenched)?)?;
    let starts = start_sites(initial.n_sites());
    let mut wd = Vec::with_capacity(times.len());
    let mut flagged = 0;
    for &t in times {
        let kernel = quench.kernel(t)?;
        let per_start = |s: usize| -> Result<(Vec<f64>, usize)> {
            let mut row = Vec::with_capacity(d_values.len());
            let mut bad = 0;
            for &d in d_values {
                let c = xx_correlator(&kernel, s, d)?;
                bad += c.is_flagged() as usize;
                row.push(c.value);
            }
            Ok((row, bad))
        };
        let rows: Vec<(Vec<f64>, usize)> = if parallel_starts {
            starts.par_iter().map(|&s| per_start(s)).collect::<Result<_>>()?
        } else {
            starts.iter().map(|&s| per_start(s)).collect::<Result<_>>()?
        };
        flagged += rows.iter().map(|r| r.1).sum::<usize>();
        let n = rows.len() as f64;
        let mean = (0..d_values.len())
            .map(|k| pairwise_sum(&rows.iter().map(|r| r.0[k]).collect::<Vec<_>>()) / n)
            .collect();
        wd.push(mean);
    }
    Ok(RealizationData { wd, flagged })
}

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Mean and standard error of the mean (`n − 1` in the variance; 0 for `n = 1`).
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisorderResult {
    pub times: Vec<f64>,
    pub d_values: Vec<usize>,
    /// `mean_wd[time][k]` is `w̄_D` at `D = d_values[k]`.
    pub mean_wd: Vec<Vec<f64>>,
    pub stderr_wd: Vec<Vec<f64>>,
    /// Region sizes `L' = 1..=L`.
    pub l_values: Vec<usize>,
    /// `mean_fq[time][i] = 1 + Σ_{D<L'} w̄_D` at `L' = l_values[i]`.
    pub mean_fq: Vec<Vec<f64>>,
    pub stderr_fq: Vec<Vec<f64>>,
    /// Power-law fit of `f̄_Q` at the final time.
    pub fit: Result<ScalingFit>,
    pub master_seed: u64,
    pub n_realizations: usize,
    pub n_failed: usize,
    pub start_sites: Vec<usize>,
    pub flagged_correlators: usize,
}

/// Runs all realizations and averages them.
///
/// Fails with [`Error::EnsembleFailure`] if more than 1% of realizations
/// fail; otherwise failed realizations are dropped and counted.
pub fn average_ensemble(spec: &DisorderSpec) -> Result<DisorderResult> {
    spec.validate()?;
    let d_values = spec.d_values();
    let run = |i: usize| -> Result<RealizationData> {
        let (initial, quenched) = sample_couplings(spec, i)?;
        run_realization_with(&initial, &quenched, &spec.times, &d_values, spec.inner_parallel)
    };
    let outcomes: Vec<Result<RealizationData>> = if spec.inner_parallel {
        (0..spec.n_realizations).map(run).collect()
    } else {
        (0..spec.n_realizations).into_par_iter().map(run).collect()
    };

    let total = outcomes.len();
    let mut ok = Vec::with_capacity(total);
    let mut first_error = None;
    for outcome in outcomes {
        match outcome {
            Ok(r) => ok.push(r),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    let failed = total - ok.len();
    if ok.is_empty() || failed as f64 > FAILURE_QUOTA * total as f64 {
        return Err(Error::EnsembleFailure {
            failed,
            total,
            first: Box::new(first_error.expect("a failed realization")),
        });
    }

    let l_values: Vec<usize> = (1..=spec.l_region).collect();
    let mut mean_wd = Vec::new();
    let mut stderr_wd = Vec::new();
    let mut mean_fq = Vec::new();
    let mut stderr_fq = Vec::new();
    for ti in 0..spec.times.len() {
        let (mut m_row, mut s_row) = (Vec::new(), Vec::new());
        for k in 0..d_values.len() {
            let xs: Vec<f64> = ok.iter().map(|r| r.wd[ti][k]).collect();
            let (m, s) = mean_stderr(&xs);
            m_row.push(m);
            s_row.push(s);
        }
        // f_Q per realization, so its error bar includes correlations in D
        let (mut fm_row, mut fs_row) = (Vec::new(), Vec::new());
        for &l in &l_values {
            let xs: Vec<f64> = ok.iter().map(|r| 1.0 + pairwise_sum(&r.wd[ti][..l - 1])).collect();
            let (m, s) = mean_stderr(&xs);
            fm_row.push(m);
            fs_row.push(s);
        }
        mean_wd.push(m_row);
        stderr_wd.push(s_row);
        mean_fq.push(fm_row);
        stderr_fq.push(fs_row);
    }

    let last = mean_fq.last().expect("at least one time");
    let fit = QfiCurve::new(
        Sector::Magnetic,
        l_values.iter().copied().zip(last.iter().map(|f| f.max(1.0))).collect(),
    )
    .and_then(|curve| {
        let window = spec.fit_window.unwrap_or_else(|| default_fit_window(spec.l_region));
        fit_scaling(&curve, window)
    });

    Ok(DisorderResult {
        times: spec.times.clone(),
        d_values,
        mean_wd,
        stderr_wd,
        l_values,
        mean_fq,
        stderr_fq,
        fit,
        master_seed: spec.master_seed,
        n_realizations: spec.n_realizations,
        n_failed: failed,
        start_sites: spec.start_sites(),
        flagged_correlators: ok.iter().map(|r| r.flagged).sum(),
    })
}

/// Upper half of the region sizes `1..=L`: `(⌈L/2⌉, L)`.
pub fn default_fit_window(l_region: usize) -> (usize, usize) {
    (l_region.div_ceil(2).max(1), l_region)
}
