//! Heaps' law estimation by ordinary least squares on log10-log10 points.
//!
//! For points `(N_i, V_i)` the fit regresses `y = log10 V` on `x = log10 N`:
//! the slope estimates `beta` and `10^intercept` estimates `alpha`.
//! Confidence half-widths use the Student-t quantile at two-sided 90% with
//! `n - 2` degrees of freedom; the half-width on `alpha` is propagated from
//! the intercept by the delta method, `alpha * ln(10) * h_intercept`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::growth::GrowthCurve;

/// Two-sided confidence level of the reported half-widths.
pub const CONFIDENCE_LEVEL: f64 = 0.90;

/// Fitted Heaps' law `V = alpha * N^beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeapsFit {
    pub beta: f64,
    pub beta_ci90: f64,
    pub alpha: f64,
    pub alpha_ci90: f64,
    /// Pearson correlation of the log10-transformed points.
    pub r: f64,
    pub n_points: usize,
}

/// Straight-line OLS fit of already-transformed coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_half_width: f64,
    pub intercept_half_width: f64,
    pub r: f64,
    pub n_points: usize,
}

struct Moments {
    n: usize,
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn moments(xs: &[f64], ys: &[f64]) -> Moments {
    let n = xs.len();
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Moments {
        n,
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    }
}

fn correlation(m: &Moments) -> f64 {
    (m.sxy / (m.sxx * m.syy).sqrt()).clamp(-1.0, 1.0)
}

/// Sample correlation coefficient of two equal-length series.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::MalformedCurve(format!(
            "series lengths differ: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints(xs.len()));
    }
    let m = moments(xs, ys);
    if m.sxx == 0.0 || m.syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(correlation(&m))
}

/// Two-sided Student-t quantile for [`CONFIDENCE_LEVEL`].
fn t_quantile(df: usize) -> f64 {
    let t = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    t.inverse_cdf(0.5 + CONFIDENCE_LEVEL / 2.0)
}

/// OLS of `ys` on `xs`.
///
/// When `ys` is constant the correlation is undefined and `r` is reported
/// as 0.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    let m = moments(xs, ys);
    if m.sxx == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let slope = m.sxy / m.sxx;
    let intercept = m.mean_y - slope * m.mean_x;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let sigma2 = rss / (n - 2) as f64;
    let se_slope = (sigma2 / m.sxx).sqrt();
    let se_intercept = (sigma2 * (1.0 / n as f64 + m.mean_x * m.mean_x / m.sxx)).sqrt();
    let t = t_quantile(n - 2);
    let r = if m.syy == 0.0 { 0.0 } else { correlation(&m) };
    Ok(LineFit {
        slope,
        intercept,
        slope_half_width: t * se_slope,
        intercept_half_width: t * se_intercept,
        r,
        n_points: m.n,
    })
}

/// OLS on `(log10 x, log10 y)`; every coordinate must be positive.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<LineFit> {
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for (index, &(x, y)) in points.iter().enumerate() {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::NonPositive { index, n: x, v: y });
        }
        xs.push(x.log10());
        ys.push(y.log10());
    }
    fit_line(&xs, &ys)
}

/// Fits Heaps' law to every point of the curve.
pub fn fit_heaps(curve: &GrowthCurve) -> Result<HeapsFit> {
    fit_heaps_skipping(curve, 0)
}

/// Fits Heaps' law after discarding the first `skip_first` points.
pub fn fit_heaps_skipping(curve: &GrowthCurve, skip_first: usize) -> Result<HeapsFit> {
    let points: Vec<(f64, f64)> = curve
        .points
        .iter()
        .skip(skip_first)
        .map(|p| (p.collection as f64, p.vocab as f64))
        .collect();
    let line = fit_loglog(&points).map_err(|e| match e {
        Error::NonPositive { index, n, v } => Error::NonPositive {
            index: index + skip_first,
            n,
            v,
        },
        e => e,
    })?;
    let alpha = 10f64.powf(line.intercept);
    Ok(HeapsFit {
        beta: line.slope,
        beta_ci90: line.slope_half_width,
        alpha,
        alpha_ci90: alpha * std::f64::consts::LN_10 * line.intercept_half_width,
        r: line.r,
        n_points: line.n_points,
    })
}

/// Vocabulary size predicted at collection size `n`: `alpha * n^beta`.
pub fn predict(fit: &HeapsFit, n: f64) -> f64 {
    fit.alpha * n.powf(fit.beta)
}
