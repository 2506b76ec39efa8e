//! The three batch commands behind the CLI. Each takes a validated
//! [`RunConfig`], writes its files under `io.out_dir`, and returns a short
//! JSON report listing them.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{RunConfig, SeriesFormat};
use crate::error::{Error, Result};
use crate::fmtnum::Num;
use crate::matrix::Matrix;
use crate::montecarlo::{
    gamma_plot, h_hat_matrix, ks_report, run_replications, subset_ks, summarize,
    write_gamma_plot_csv, write_records_ndjson, write_rhat_sweep_csv, KsMode,
};
use crate::pipeline::analyze;
use crate::series::MultivariateSeries;
use crate::sim::{ObservationModel, Observations, SynthesisReport};

#[derive(Debug, Clone, PartialEq)]
pub struct CommandReport {
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

impl CommandReport {
    pub fn to_json(&self) -> Value {
        json!({
            "status": "ok",
            "files": self.files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
            "summary": self.summary,
        })
    }
}

struct OutDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutDir {
    fn create(path: &str) -> Result<Self> {
        let root = PathBuf::from(path);
        fs::create_dir_all(&root)?;
        Ok(OutDir {
            root,
            written: Vec::new(),
        })
    }

    fn write(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> Result<()>,
    ) -> Result<()> {
        let path = self.root.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        body(&mut w)?;
        w.flush()?;
        self.written.push(path);
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)
                .map_err(|e| Error::Format(e.to_string()))?;
            writeln!(w)?;
            Ok(())
        })
    }

    fn series(
        &mut self,
        stem: &str,
        format: SeriesFormat,
        series: &MultivariateSeries,
    ) -> Result<()> {
        let name = format!("{stem}.{}", format.extension());
        self.write(&name, |w| match format {
            SeriesFormat::Binary => series.write_binary(w),
            SeriesFormat::Csv => series.write_csv(w),
        })
    }

    fn finish(self, summary: Value) -> CommandReport {
        CommandReport {
            files: self.written,
            summary,
        }
    }
}

fn write_matrix_csv<W: Write>(m: &Matrix, w: &mut W) -> Result<()> {
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|x| Num(*x).to_string()).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

fn observation_model(config: &RunConfig) -> Result<ObservationModel> {
    Ok(ObservationModel {
        ofbm: config.ofbm_spec()?,
        mixing: config.mixing_kind()?,
        noise: config.noise_spec()?,
        n: config.model()?.n,
        p: config.p()?,
    })
}

/// The realization written by `simulate` and analysed by `estimate` when no
/// data file is given: index 0 under `mc.seed`.
fn simulate_observations(config: &RunConfig) -> Result<(Observations, SynthesisReport)> {
    let model = observation_model(config)?;
    let embedding = model.embedding()?;
    let obs = model.draw(&embedding, config.mc.seed, 0)?;
    Ok((obs, embedding.report()))
}

/// Writes `y` (and optionally `x`, `z`, `mixing.csv`), `synthesis.json` and
/// `effective_config.json`.
pub fn cmd_simulate(config: &RunConfig) -> Result<CommandReport> {
    config.validate()?;
    let effective = config.effective()?;
    let (obs, report) = simulate_observations(&effective)?;
    let io = &effective.io;
    let mut out = OutDir::create(&io.out_dir)?;
    out.series("y", io.format, &obs.y)?;
    if io.write_latent {
        out.series("x", io.format, &obs.x)?;
    }
    if io.write_noise {
        out.series("z", io.format, &obs.z)?;
    }
    if io.write_mixing {
        out.write("mixing.csv", |w| write_matrix_csv(&obs.mixing, w))?;
    }
    let synthesis = json!({
        "p": obs.y.dim(),
        "n": obs.y.len(),
        "r": obs.x.dim(),
        "seed": effective.mc.seed,
        "clipped_energy": report.clipped_energy,
        "approximate": report.approximate,
    });
    out.json("synthesis.json", &synthesis)?;
    out.json("effective_config.json", &effective)?;
    Ok(out.finish(synthesis))
}

/// Estimates from `io.data` when set, otherwise from the simulated
/// realization of `model`. Writes `estimate.csv`, `estimate.json`,
/// `spectrum.csv` and `effective_config.json`.
pub fn cmd_estimate(config: &RunConfig) -> Result<CommandReport> {
    config.validate()?;
    let effective = config.effective()?;
    let spec = effective.analysis_spec()?;
    let series = match &effective.io.data {
        Some(path) => MultivariateSeries::load(Path::new(path)).map_err(|e| match e {
            Error::Io(io) => Error::param("io.data", format!("cannot read {path}: {io}")),
            other => other,
        })?,
        None => simulate_observations(&effective)?.0.y,
    };
    if let Some(r) = spec.r {
        if r > series.dim() {
            return Err(Error::param(
                "analysis.r",
                format!("r = {r} exceeds p = {}", series.dim()),
            ));
        }
    }
    let analysis = analyze(&series, &spec)?;
    let mut out = OutDir::create(&effective.io.out_dir)?;
    out.write("estimate.csv", |w| analysis.estimate.write_csv(w))?;
    out.write("spectrum.csv", |w| analysis.spectrum.write_csv(w))?;
    let mut summary = serde_json::to_value(analysis.estimate.summary())
        .map_err(|e| Error::Format(e.to_string()))?;
    summary["p"] = json!(series.dim());
    summary["n"] = json!(series.len());
    out.json("estimate.json", &summary)?;
    out.json("effective_config.json", &effective)?;
    Ok(out.finish(summary))
}

/// Runs the Monte Carlo study with at most `workers` threads. Writes
/// `gamma_plot.csv`, `ks.json`, `rhat_sweep.csv`, `records.ndjson`,
/// `summary.json` and `effective_config.json`; none of them depends on
/// `workers`.
pub fn cmd_mc(config: &RunConfig, workers: usize) -> Result<CommandReport> {
    config.validate()?;
    let effective = config.effective()?;
    let mc = effective.mc_config()?;
    let run = run_replications(&mc, workers)?;
    let samples = h_hat_matrix(&run);
    let gamma = samples.as_ref().map_err(clone_err).and_then(gamma_plot);
    let subsets = match mc.ks_mode {
        KsMode::Full => None,
        KsMode::Subsets { count, size } => Some(
            samples
                .as_ref()
                .map_err(clone_err)
                .and_then(|s| subset_ks(s, count, size, mc.master_seed)),
        ),
    };
    let hurst = mc.ofbm.hurst.clone();
    let summary = summarize(&run, &mc.kappa_grid, Some((&hurst, mc.ofbm.dim())))?;

    let mut out = OutDir::create(&effective.io.out_dir)?;
    out.write("gamma_plot.csv", |w| match &gamma {
        Ok(g) => write_gamma_plot_csv(g, w),
        Err(_) => {
            writeln!(w, "m,d2_empirical,chi2_quantile")?;
            Ok(())
        }
    })?;
    out.json("ks.json", &ks_report(&gamma, subsets.as_ref()))?;
    out.write("rhat_sweep.csv", |w| {
        write_rhat_sweep_csv(&summary.rhat_sweep, w)
    })?;
    out.write("records.ndjson", |w| write_records_ndjson(&run.records, w))?;
    let mut summary_value =
        serde_json::to_value(&summary).map_err(|e| Error::Format(e.to_string()))?;
    summary_value["synthesis"] = json!(run.synthesis);
    out.json("summary.json", &summary_value)?;
    out.json("effective_config.json", &effective)?;
    let brief = json!({
        "replications": summary.replications,
        "accepted": summary.accepted,
        "flagged": summary.flagged,
        "p": summary.p,
    });
    Ok(out.finish(brief))
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::Undefined(s) => Error::Undefined(s.clone()),
        other => Error::Numerical(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;

    fn config(dir: &Path, extra: &str) -> RunConfig {
        let text = format!(
            r#"{{ "model": {{ "hurst": [0.7], "n": 1024, "mixing": {{ "p": 2 }} }},
                 "analysis": {{ "j1": 2, "j2": 5 }},
                 "mc": {{ "replications": 8, "seed": 3 }},
                 "io": {{ "out_dir": "{}" {extra} }} }}"#,
            dir.display()
        );
        RunConfig::from_json(&text).unwrap()
    }

    #[test]
    fn simulate_then_estimate_matches_direct_estimate() {
        let dir = tempfile::tempdir().unwrap();
        let sim_dir = dir.path().join("sim");
        let c = config(&sim_dir, r#", "write_latent": true, "write_mixing": true"#);
        let report = cmd_simulate(&c).unwrap();
        assert_eq!(report.files.len(), 5);
        let y = MultivariateSeries::load(&sim_dir.join("y.bin")).unwrap();
        assert_eq!((y.dim(), y.len()), (2, 1024));

        let mut from_file = config(&dir.path().join("a"), "");
        from_file.io.data = Some(sim_dir.join("y.bin").display().to_string());
        from_file.model = None;
        cmd_estimate(&from_file).unwrap();
        cmd_estimate(&config(&dir.path().join("b"), "")).unwrap();
        for f in ["estimate.csv", "spectrum.csv", "estimate.json"] {
            let a = fs::read(dir.path().join("a").join(f)).unwrap();
            let b = fs::read(dir.path().join("b").join(f)).unwrap();
            assert!(a == b, "{f} differs");
        }
    }

    #[test]
    fn mc_outputs_are_worker_independent() {
        let dir = tempfile::tempdir().unwrap();
        let one = dir.path().join("one");
        let four = dir.path().join("four");
        cmd_mc(&config(&one, ""), 1).unwrap();
        let report = cmd_mc(&config(&four, ""), 4).unwrap();
        assert_eq!(report.files.len(), 6);
        for f in &report.files {
            let name = f.file_name().unwrap();
            if name == "effective_config.json" {
                continue;
            }
            assert_eq!(
                fs::read_to_string(one.join(name)).unwrap(),
                fs::read_to_string(f).unwrap(),
                "{name:?}"
            );
        }
    }

    #[test]
    fn infeasible_octave_reports_last_feasible() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(dir.path(), "");
        c.analysis.j2 = Some(12);
        match cmd_estimate(&c) {
            Err(Error::InfeasibleOctave {
                requested,
                last_feasible,
                ..
            }) => {
                assert_eq!(requested, 12);
                assert_eq!(last_feasible, 8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
