//! Quantum Fisher information densities and their scaling with region size.
//!
//! For an `L × L` region the QFI density of the string generator is
//! `f_Q = 1 + Σ_{D=1}^{L−1} w_D`. A perimeter law (`w_D` → const) makes `f_Q`
//! grow linearly in `L`; an area law makes it saturate. The exponent `β` of
//! `f_Q = 1 + α L^β` in the electric and magnetic sectors gives the index
//! `I = β^e β^m`.

use crate::error::{Error, Result};

/// Tolerance on `|w_D| ≤ 1` and `f_Q ≥ 1` for roundoff.
pub const CORRELATOR_SLACK: f64 = 1e-9;

/// `f_Q − 1` at or below this counts as saturated in a fit.
pub const SATURATION_THRESHOLD: f64 = 1e-9;

/// Fewest unsaturated samples a power-law fit accepts.
pub const MIN_FIT_SAMPLES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    Electric,
    Magnetic,
}

impl Sector {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sector::Electric => "electric",
            Sector::Magnetic => "magnetic",
        }
    }
}

/// `1 + Σ w_D` for `wd = (w_1, …, w_{L−1})`; an empty slice (`L = 1`) gives 1.
pub fn qfi_density(wd: &[f64]) -> Result<f64> {
    for &w in wd {
        if !w.is_finite() {
            return Err(Error::NonFinite("w_D"));
        }
        if w.abs() > 1.0 + CORRELATOR_SLACK {
            return Err(Error::InvalidParameter(format!("w_D = {w} outside [-1, 1]")));
        }
    }
    Ok(1.0 + wd.iter().sum::<f64>())
}

/// `(L, f_Q)` samples of one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct QfiCurve {
    pub sector: Sector,
    samples: Vec<(usize, f64)>,
}

impl QfiCurve {
    pub fn new(sector: Sector, samples: Vec<(usize, f64)>) -> Result<Self> {
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidParameter(format!(
                    "region sizes must increase strictly, got {} after {}",
                    w[1].0, w[0].0
                )));
            }
        }
        for &(l, f) in &samples {
            if l == 0 {
                return Err(Error::InvalidParameter("region size 0".into()));
            }
            if !f.is_finite() {
                return Err(Error::NonFinite("f_Q"));
            }
            if f < 1.0 - CORRELATOR_SLACK {
                return Err(Error::InvalidParameter(format!("f_Q = {f} < 1 at L = {l}")));
            }
        }
        Ok(Self { sector, samples })
    }

    /// Builds the curve at the sizes `ls` from `wd[D − 1] = w_D`.
    pub fn from_wilson_loops(sector: Sector, wd: &[f64], ls: &[usize]) -> Result<Self> {
        let samples = ls
            .iter()
            .map(|&l| {
                if l == 0 || l - 1 > wd.len() {
                    return Err(Error::DistanceOutOfRange {
                        distance: l.saturating_sub(1),
                        max: wd.len(),
                    });
                }
                Ok((l, qfi_density(&wd[..l - 1])?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sector, samples)
    }

    pub fn samples(&self) -> &[(usize, f64)] {
        &self.samples
    }

    /// `f_Q` clamped to `≥ 1`, for reporting.
    pub fn reported(&self) -> Vec<(usize, f64)> {
        self.samples.iter().map(|&(l, f)| (l, f.max(1.0))).collect()
    }

    /// Upper half of the samples (at least [`MIN_FIT_SAMPLES`] when available).
    pub fn default_window(&self) -> Option<(usize, usize)> {
        let n = self.samples.len();
        if n == 0 {
            return None;
        }
        let take = (n - n / 2).max(MIN_FIT_SAMPLES).min(n);
        Some((self.samples[n - take].0, self.samples[n - 1].0))
    }
}

/// Result of fitting `f_Q = 1 + α L^β` on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub alpha: f64,
    pub beta: f64,
    /// RMS of the log residuals; for a saturated fit, RMS of `f_Q − 1 − α`.
    pub residual: f64,
    pub window: (usize, usize),
    /// Samples in the window that entered the fit.
    pub n_points: usize,
    /// Set when the curve is saturated and `β` was pinned to 0.
    pub saturated: bool,
}

impl ScalingFit {
    /// `β ∈ [−0.5, 1.5]`.
    pub fn in_sanity_band(&self) -> bool {
        (-0.5..=1.5).contains(&self.beta)
    }
}

/// Least-squares fit of `log(f_Q − 1)` against `log L` over the inclusive
/// window `(L_min, L_max)`.
///
/// If at least half the window has `f_Q − 1 ≤ 1e−9`, the curve is saturated:
/// `β = 0`, `α = mean(f_Q − 1)` clamped at 0, and `saturated` is set. Otherwise
/// samples with `f_Q − 1 ≤ 1e−9` are skipped and at least
/// [`MIN_FIT_SAMPLES`] must remain.
pub fn fit_scaling(curve: &QfiCurve, window: (usize, usize)) -> Result<ScalingFit> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty fit window ({lo}, {hi})")));
    }
    let in_window: Vec<(usize, f64)> = curve
        .samples
        .iter()
        .copied()
        .filter(|&(l, _)| (lo..=hi).contains(&l))
        .collect();
    if in_window.is_empty() {
        return Err(Error::TooFewSamples {
            needed: MIN_FIT_SAMPLES,
            got: 0,
        });
    }

    let excess: Vec<f64> = in_window.iter().map(|&(_, f)| f - 1.0).collect();
    let n_flat = excess.iter().filter(|&&e| e <= SATURATION_THRESHOLD).count();
    if 2 * n_flat >= in_window.len() {
        let mean = excess.iter().sum::<f64>() / excess.len() as f64;
        let alpha = mean.max(0.0);
        let rms = (excess.iter().map(|e| (e - alpha).powi(2)).sum::<f64>() / excess.len() as f64).sqrt();
        return Ok(ScalingFit {
            alpha,
            beta: 0.0,
            residual: rms,
            window,
            n_points: in_window.len(),
            saturated: true,
        });
    }

    let points: Vec<(f64, f64)> = in_window
        .iter()
        .filter(|&&(_, f)| f - 1.0 > SATURATION_THRESHOLD)
        .map(|&(l, f)| ((l as f64).ln(), (f - 1.0).ln()))
        .collect();
    if points.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_FIT_SAMPLES,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let residual = (points
        .iter()
        .map(|p| (p.1 - intercept - beta * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ScalingFit {
        alpha: intercept.exp(),
        beta,
        residual,
        window,
        n_points: points.len(),
        saturated: false,
    })
}

/// Fit on [`QfiCurve::default_window`].
pub fn fit_default(curve: &QfiCurve) -> Result<ScalingFit> {
    let window = curve.default_window().ok_or(Error::TooFewSamples {
        needed: MIN_FIT_SAMPLES,
        got: 0,
    })?;
    fit_scaling(curve, window)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TopoIndexResult {
    pub beta_e: f64,
    pub beta_m: f64,
    /// `β^e β^m` clamped at 0.
    pub index: f64,
    /// `β^e β^m` as computed.
    pub raw_product: f64,
}

/// `I = β^e β^m`. Both fits must share a window.
pub fn topological_index(fit_e: &ScalingFit, fit_m: &ScalingFit) -> Result<TopoIndexResult> {
    if fit_e.window != fit_m.window {
        return Err(Error::InvalidParameter(format!(
            "fits use different windows {:?} and {:?}",
            fit_e.window, fit_m.window
        )));
    }
    let raw = fit_e.beta * fit_m.beta;
    Ok(TopoIndexResult {
        beta_e: fit_e.beta,
        beta_m: fit_m.beta,
        index: raw.max(0.0),
        raw_product: raw,
    })
}

/// `κ + 1` for the largest integer `κ < f_Q`; 1 when `f_Q ≤ 1`.
pub fn entanglement_depth(f_q: f64) -> Result<u64> {
    if !(f_q.is_finite() && f_q >= 0.0) {
        return Err(Error::InvalidParameter(format!("f_Q = {f_q}")));
    }
    Ok((f_q.ceil() as u64).max(1))
}

/// Thermal upper bound `1 + Σ_{D=1}^{L−1} tanh(J/T)^D` in closed form.
pub fn thermal_bound_fq(j: f64, temperature: f64, l: u64) -> Result<f64> {
    if !(j.is_finite() && temperature.is_finite()) {
        return Err(Error::NonFinite("thermal bound parameters"));
    }
    if j <= 0.0 {
        return Err(Error::InvalidParameter(format!("need J > 0, got {j}")));
    }
    if temperature <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need T > 0, got {temperature}; the T = 0 limit is the λ = 0 ground state, f_Q = L"
        )));
    }
    if l == 0 {
        return Err(Error::InvalidParameter("need L ≥ 1".into()));
    }
    let a = j / temperature;
    let x = a.tanh();
    let terms = (l - 1) as f64;
    if x == 1.0 {
        return Ok(1.0 + terms);
    }
    // with e = e^{−2a}: 1 − tanh a = 2e/(1 + e), ln tanh a = ln(1 − e) − ln(1 + e)
    let e = (-2.0 * a).exp();
    let one_minus_x = 2.0 * e / (1.0 + e);
    let ln_x = (-e).ln_1p() - e.ln_1p();
    let one_minus_pow = -(terms * ln_x).exp_m1();
    Ok(1.0 + x * one_minus_pow / one_minus_x)
}
