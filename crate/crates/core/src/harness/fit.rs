//! Decay-exponent fitting: least squares on (log t, log norm).

use crate::error::{Error, Result};

/// Ordinary least-squares line through (ln t, ln norm).
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub n_points: usize,
}

/// Fit `norm ≈ C·t^slope` over the given samples.
///
/// Requires at least 8 strictly increasing times. Non-positive norms are
/// rejected with a dedicated error: they mean the residual sits at the
/// quadrature floor, which callers report as a pass rather than a fit.
pub fn fit_decay(times: &[f64], norms: &[f64]) -> Result<FitResult> {
    if times.len() != norms.len() {
        return Err(Error::InvalidArgument("times and norms must pair up".into()));
    }
    if times.len() < 8 {
        return Err(Error::FitRejected(format!("need >= 8 samples, got {}", times.len())));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::FitRejected("times must be strictly increasing".into()));
        }
    }
    if times[0] <= 0.0 {
        return Err(Error::FitRejected("times must be positive".into()));
    }
    if let Some(&bad) = norms.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::FitRejected(format!(
            "non-positive norm {bad:e}: residual at quadrature floor"
        )));
    }
    let n = times.len() as f64;
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs.iter().zip(ys.iter()).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ssr: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(FitResult { slope, intercept, stderr, n_points: times.len() })
}

/// True when the fit failed only because the data sat at the quadrature floor.
pub fn is_floor(err: &Error) -> bool {
    matches!(err, Error::FitRejected(msg) if msg.contains("non-positive"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn exact_power_law() {
        let ts = geometric(1.0, 100.0, 12);
        let ns: Vec<f64> = ts.iter().map(|t| t.powi(-1)).collect();
        let fit = fit_decay(&ts, &ns).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-12);
        assert!(fit.stderr < 1e-12);
    }

    #[test]
    fn log_contamination_biases_slope_upward() {
        // norms = t^{-1} log t over [10, 1000]: the fitted slope is -1 plus
        // the OLS slope of ln(ln t) against ln t, about +0.23 on this window.
        let ts = geometric(10.0, 1000.0, 24);
        let ns: Vec<f64> = ts.iter().map(|t| t.ln() / t).collect();
        let fit = fit_decay(&ts, &ns).unwrap();
        // independent closed-form OLS of the same data
        let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -x + x.ln()).collect();
        let n = xs.len() as f64;
        let xb = xs.iter().sum::<f64>() / n;
        let yb = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - xb) * (x - xb)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xb) * (y - yb)).sum();
        let want = sxy / sxx;
        assert!((fit.slope - want).abs() < 1e-12);
        assert!(fit.slope > -0.85 && fit.slope < -0.70, "slope {}", fit.slope);
    }

    #[test]
    fn rejects_floor_and_short_data() {
        let ts = geometric(1.0, 10.0, 8);
        let mut ns: Vec<f64> = ts.iter().map(|t| 1.0 / t).collect();
        ns[3] = 0.0;
        let err = fit_decay(&ts, &ns).unwrap_err();
        assert!(is_floor(&err));
        assert!(fit_decay(&ts[..5], &ns[..5]).is_err());
    }
}
