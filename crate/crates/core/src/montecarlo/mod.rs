//! Replication harness and distributional diagnostics for the estimators.
//!
//! Each replication `m` draws its latent path, mixing matrix and noise from
//! counter-based streams keyed by `(master_seed, m)`, so the record set is a
//! pure function of the configuration regardless of worker count.

mod chi2;
mod ks;
mod mahalanobis;

pub use chi2::{chi2_cdf, chi2_quantile, gamma_p, ln_gamma};
pub use ks::{ks_statistic, KsDecision, KS_CRITICAL_COEFF_05};
pub use mahalanobis::{mahalanobis_sq, sample_moments, MAX_CONDITION};

use std::io::{BufWriter, Write};

use rand::seq::index;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::estimators::{kappa_sweep, KappaPoint};
use crate::fmtnum::Num;
use crate::matrix::Matrix;
use crate::par;
use crate::pipeline::{analyze, AnalysisSpec};
use crate::rng::{stream_rng, Stream};
use crate::sim::{
    CirculantEmbedding, MixingKind, NoiseSpec, ObservationModel, OfBmSpec, SynthesisReport,
};
use crate::stats;

/// How the ambient dimension `p` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmbientDim {
    Fixed(usize),
    /// `p = round(c · n / 2^{j2})`.
    Ratio(f64),
}

/// KS on the full sample, or decisions averaged over random subsets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum KsMode {
    Full,
    Subsets { count: usize, size: usize },
}

#[derive(Debug, Clone)]
pub struct McConfig {
    pub ofbm: OfBmSpec,
    pub mixing: MixingKind,
    pub noise: NoiseSpec,
    pub n: usize,
    pub ambient: AmbientDim,
    pub analysis: AnalysisSpec,
    pub replications: usize,
    pub master_seed: u64,
    pub kappa_grid: Vec<f64>,
    /// True latent dimension for scoring; also fixes the size of `ĥ` unless
    /// the analysis carries its own override.
    pub truth_r: Option<usize>,
    pub ks_mode: KsMode,
}

impl McConfig {
    pub fn p(&self) -> usize {
        match self.ambient {
            AmbientDim::Fixed(p) => p,
            AmbientDim::Ratio(c) => {
                (c * self.n as f64 / 2f64.powi(self.analysis.j2 as i32)).round() as usize
            }
        }
    }

    pub fn model(&self) -> ObservationModel {
        ObservationModel {
            ofbm: self.ofbm.clone(),
            mixing: self.mixing.clone(),
            noise: self.noise.clone(),
            n: self.n,
            p: self.p(),
        }
    }

    fn extraction_r(&self) -> Option<usize> {
        self.analysis.r.or(self.truth_r)
    }

    pub fn validate(&self) -> Result<()> {
        self.ofbm.validate()?;
        self.noise.validate()?;
        let r = self.ofbm.dim();
        let p = self.p();
        if p < r {
            return Err(Error::param(
                "model.mixing.p",
                format!("ambient dimension p = {p} is below r = {r}"),
            ));
        }
        if self.replications < 1 {
            return Err(Error::param(
                "mc.replications",
                "need at least one replication",
            ));
        }
        if let Some(q) = self.extraction_r() {
            if q > p {
                return Err(Error::param(
                    "analysis.r",
                    format!("r = {q} exceeds p = {p}"),
                ));
            }
        }
        if let KsMode::Subsets { count, size } = self.ks_mode {
            if count == 0 || size == 0 {
                return Err(Error::param(
                    "mc.ks",
                    "subset count and size must be positive",
                ));
            }
        }
        self.analysis.check_feasible(self.n)
    }
}

/// One replication. `flagged` records are kept for bookkeeping but excluded
/// from every summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    pub index: u64,
    pub master_seed: u64,
    pub h_hat: Vec<f64>,
    pub ell_hat: Vec<Option<f64>>,
    pub delta: Vec<f64>,
    pub r_hat: usize,
    pub flagged: bool,
    pub reason: Option<String>,
}

impl ReplicationRecord {
    /// JSON form; undefined `ℓ̂` and `Δ = −∞` become `null`.
    pub fn to_json(&self) -> Value {
        let finite = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
        json!({
            "index": self.index,
            "master_seed": self.master_seed,
            "flagged": self.flagged,
            "reason": self.reason,
            "r_hat": self.r_hat,
            "h_hat": self.h_hat,
            "ell_hat": self.ell_hat,
            "delta": self.delta.iter().map(|&d| finite(d)).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct McRun {
    pub p: usize,
    pub synthesis: SynthesisReport,
    pub records: Vec<ReplicationRecord>,
}

impl McRun {
    pub fn accepted(&self) -> impl Iterator<Item = &ReplicationRecord> {
        self.records.iter().filter(|r| !r.flagged)
    }

    pub fn flagged_count(&self) -> usize {
        self.records.iter().filter(|r| r.flagged).count()
    }
}

fn replicate(
    config: &McConfig,
    model: &ObservationModel,
    embedding: &CirculantEmbedding,
    analysis: &AnalysisSpec,
    index: u64,
) -> ReplicationRecord {
    let outcome = model
        .draw(embedding, config.master_seed, index)
        .and_then(|obs| analyze(&obs.y, analysis));
    match outcome {
        Ok(a) => ReplicationRecord {
            index,
            master_seed: config.master_seed,
            h_hat: a.estimate.h_hat,
            ell_hat: a.estimate.ell_hat,
            delta: a.estimate.delta,
            r_hat: a.estimate.r_hat,
            flagged: false,
            reason: None,
        },
        Err(e) => ReplicationRecord {
            index,
            master_seed: config.master_seed,
            h_hat: Vec::new(),
            ell_hat: Vec::new(),
            delta: Vec::new(),
            r_hat: 0,
            flagged: true,
            reason: Some(e.to_string()),
        },
    }
}

/// Runs all replications on at most `workers` threads. Records come back in
/// index order and do not depend on `workers`.
pub fn run_replications(config: &McConfig, workers: usize) -> Result<McRun> {
    config.validate()?;
    let model = config.model();
    let embedding = model.embedding()?;
    let mut analysis = config.analysis.clone();
    analysis.r = config.extraction_r();
    let records = par::with_workers(workers, || {
        par::map_range(config.replications, |m| {
            replicate(config, &model, &embedding, &analysis, m as u64)
        })
    });
    Ok(McRun {
        p: config.p(),
        synthesis: embedding.report(),
        records,
    })
}

/// `ĥ` samples of the accepted records as an `M x r` matrix.
pub fn h_hat_matrix(run: &McRun) -> Result<Matrix> {
    let rows: Vec<Vec<f64>> = run.accepted().map(|r| r.h_hat.clone()).collect();
    if rows.is_empty() {
        return Err(Error::Undefined("no accepted replications".into()));
    }
    let r = rows[0].len();
    if rows.iter().any(|row| row.len() != r) {
        return Err(Error::Undefined(
            "replications estimated different numbers of Hurst exponents; fix analysis.r".into(),
        ));
    }
    Matrix::from_rows(&rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaPlotData {
    pub dof: usize,
    pub d2: Vec<f64>,
    pub chi2_quantiles: Vec<f64>,
    pub ks: KsDecision,
}

/// Sorted squared Mahalanobis distances against `χ²_r` quantiles at the
/// plotting positions `(m − 0.5)/M`. Refused unless `M > 5 r`.
pub fn gamma_plot(samples: &Matrix) -> Result<GammaPlotData> {
    let (m, r) = (samples.rows(), samples.cols());
    if r == 0 || m <= 5 * r {
        return Err(Error::Undefined(format!(
            "Gamma plot needs more than 5 r samples (M = {m}, r = {r})"
        )));
    }
    let d2 = mahalanobis_sq(samples)?;
    let chi2_quantiles = (1..=m)
        .map(|k| chi2_quantile(r, (k as f64 - 0.5) / m as f64))
        .collect::<Result<Vec<_>>>()?;
    let ks = ks_statistic(&d2, r);
    Ok(GammaPlotData {
        dof: r,
        d2,
        chi2_quantiles,
        ks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetKs {
    pub count: usize,
    pub size: usize,
    pub mean_statistic: f64,
    pub critical: f64,
    pub rejection_rate: f64,
}

/// KS decisions averaged over `count` random subsets of `size` rows, with
/// distances recomputed inside each subset. Subset `s` is drawn from the
/// resampling stream `(master_seed, s)`.
pub fn subset_ks(
    samples: &Matrix,
    count: usize,
    size: usize,
    master_seed: u64,
) -> Result<SubsetKs> {
    let (m, r) = (samples.rows(), samples.cols());
    if size > m || size <= 5 * r {
        return Err(Error::Undefined(format!(
            "subset size {size} must lie in (5 r, M] with r = {r}, M = {m}"
        )));
    }
    let decisions = (0..count)
        .map(|s| {
            let mut rng = stream_rng(master_seed, s as u64, Stream::Resampling);
            let mut picks = index::sample(&mut rng, m, size).into_vec();
            picks.sort_unstable();
            let sub = Matrix::from_fn(size, r, |i, q| samples[(picks[i], q)]);
            Ok(ks_statistic(&mahalanobis_sq(&sub)?, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let stat: Vec<f64> = decisions.iter().map(|d| d.statistic).collect();
    Ok(SubsetKs {
        count,
        size,
        mean_statistic: stats::mean(&stat),
        critical: KS_CRITICAL_COEFF_05 / (size as f64).sqrt(),
        rejection_rate: decisions.iter().filter(|d| d.reject).count() as f64 / count as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSummary {
    pub q: usize,
    pub mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias: Option<f64>,
    pub std: f64,
    pub q05: f64,
    pub q95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub replications: usize,
    pub accepted: usize,
    pub flagged: usize,
    pub p: usize,
    pub h_hat: Vec<ComponentSummary>,
    pub rhat_sweep: Vec<KappaPoint>,
}

/// Per-component statistics of `ĥ` and the `r̂(κ)` sweep over the accepted
/// records. `truth` carries `(h_1..h_r, r)`.
pub fn summarize(run: &McRun, grid: &[f64], truth: Option<(&[f64], usize)>) -> Result<McSummary> {
    let accepted: Vec<&ReplicationRecord> = run.accepted().collect();
    if accepted.is_empty() {
        return Err(Error::Undefined(
            "no accepted replications to summarize".into(),
        ));
    }
    let width = accepted[0].h_hat.len();
    let h_hat = if accepted.iter().all(|r| r.h_hat.len() == width) {
        (0..width)
            .map(|q| {
                let mut xs: Vec<f64> = accepted.iter().map(|r| r.h_hat[q]).collect();
                xs.sort_by(f64::total_cmp);
                let mean = stats::mean(&xs);
                let t = truth.filter(|(h, _)| h.len() == width).map(|(h, _)| h[q]);
                ComponentSummary {
                    q: q + 1,
                    mean,
                    truth: t,
                    bias: t.map(|t| mean - t),
                    std: stats::std_dev(&xs),
                    q05: stats::quantile_sorted(&xs, 0.05),
                    q95: stats::quantile_sorted(&xs, 0.95),
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let deltas: Vec<Vec<f64>> = accepted.iter().map(|r| r.delta.clone()).collect();
    let rhat_sweep = kappa_sweep(&deltas, grid, truth.map(|(_, r)| r))?;
    Ok(McSummary {
        replications: run.records.len(),
        accepted: accepted.len(),
        flagged: run.flagged_count(),
        p: run.p,
        h_hat,
        rhat_sweep,
    })
}

pub fn write_gamma_plot_csv<W: Write>(data: &GammaPlotData, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "m,d2_empirical,chi2_quantile")?;
    for (m, (d, q)) in data.d2.iter().zip(&data.chi2_quantiles).enumerate() {
        writeln!(w, "{},{},{}", m + 1, Num(*d), Num(*q))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rhat_sweep_csv<W: Write>(sweep: &[KappaPoint], out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "kappa,mean,q05,q95,exact_match")?;
    for k in sweep {
        let exact = match k.exact_match {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        writeln!(
            w,
            "{},{},{},{},{exact}",
            Num(k.kappa),
            Num(k.mean),
            Num(k.q05),
            Num(k.q95)
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records_ndjson<W: Write>(records: &[ReplicationRecord], out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    for r in records {
        serde_json::to_writer(&mut w, &r.to_json()).map_err(|e| Error::Format(e.to_string()))?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Contents of `ks.json`: the full-sample decision, the subset variant when
/// requested, or the reason the Gamma plot was refused.
pub fn ks_report(gamma: &Result<GammaPlotData>, subsets: Option<&Result<SubsetKs>>) -> Value {
    let mut report = match gamma {
        Ok(g) => json!({
            "status": "ok",
            "dof": g.dof,
            "samples": g.d2.len(),
            "statistic": g.ks.statistic,
            "critical": g.ks.critical,
            "decision": if g.ks.reject { "reject" } else { "do_not_reject" },
        }),
        Err(e) => json!({
            "status": "refused",
            "reason": e.to_string(),
            "statistic": null,
            "critical": null,
            "decision": null,
        }),
    };
    if let Some(s) = subsets {
        report["subsets"] = match s {
            Ok(s) => json!(s),
            Err(e) => json!({ "status": "refused", "reason": e.to_string() }),
        };
    }
    report
}
