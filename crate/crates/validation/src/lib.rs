//! Statistics helpers shared by the acceptance checks.

/// Standard error of a difference of two independent estimates.
pub fn combined_stderr(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `samples` and an exponential law with the given rate.
pub fn ks_exponential(samples: &[f64], rate: f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = 1.0 - (-rate * x).exp();
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic critical value of the one-sample KS statistic at level 1%.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Whether consecutive values move in one direction by more than `k`
/// combined standard errors.
pub fn strictly_ordered(values: &[(f64, f64)], increasing: bool, k: f64) -> bool {
    values.windows(2).all(|w| {
        let step = if increasing { w[1].0 - w[0].0 } else { w[0].0 - w[1].0 };
        step > k * combined_stderr(w[0].1, w[1].1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        let n = 1000;
        let xs: Vec<f64> = (0..n).map(|i| -((1.0 - (i as f64 + 0.5) / n as f64).ln()) / 2.0).collect();
        assert!(ks_exponential(&xs, 2.0) <= 0.5 / n as f64 + 1e-12);
        assert!(ks_exponential(&xs, 1.0) > 0.2);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((loglog_slope(&xs, &ys) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn ordering_needs_clear_gaps() {
        assert!(strictly_ordered(&[(1.0, 0.01), (0.5, 0.01)], false, 3.0));
        assert!(!strictly_ordered(&[(1.0, 0.1), (0.9, 0.1)], false, 3.0));
        assert!(!strictly_ordered(&[(1.0, 0.01), (0.5, 0.01)], true, 3.0));
    }
}
