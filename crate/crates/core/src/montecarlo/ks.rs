use serde::Serialize;

use super::chi2::chi2_cdf;

/// Asymptotic two-sided 5% critical value coefficient.
pub const KS_CRITICAL_COEFF_05: f64 = 1.358;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsDecision {
    pub statistic: f64,
    pub critical: f64,
    /// `statistic > critical`.
    pub reject: bool,
}

/// One-sample Kolmogorov–Smirnov statistic of `sample` against `χ²_dof`.
pub fn ks_statistic(sample: &[f64], dof: usize) -> KsDecision {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = chi2_cdf(dof, x);
            let above = (i + 1) as f64 / m - f;
            let below = f - i as f64 / m;
            above.max(below)
        })
        .fold(0.0, f64::max);
    let critical = KS_CRITICAL_COEFF_05 / m.sqrt();
    KsDecision {
        statistic,
        critical,
        reject: statistic > critical,
    }
}
