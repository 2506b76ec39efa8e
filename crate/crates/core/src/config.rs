//! JSON run configuration with a strict schema, the built-in presets, and
//! resolution into the library types.
//!
//! ```json
//! {
//!   "model": {
//!     "hurst": [0.25, 0.5, 0.75],
//!     "n": 4096,
//!     "mixing": { "kind": "random_gaussian_unit_columns", "ratio": 0.5 },
//!     "noise": { "kind": "iid_gaussian", "variance": 1.0 }
//!   },
//!   "analysis": { "j1": 4, "j2": 6 },
//!   "mc": { "replications": 200, "seed": 1 }
//! }
//! ```
//!
//! Unknown keys are rejected at every level. [`RunConfig::effective`] fills
//! in every default so the echoed document reproduces a run exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{default_kappa_grid, WeightScheme, DEFAULT_KAPPA};
use crate::matrix::Matrix;
use crate::montecarlo::{AmbientDim, KsMode, McConfig};
use crate::pipeline::AnalysisSpec;
use crate::sim::{MixingKind, NoiseSpec, OfBmSpec};
use crate::spectrum::DEFAULT_EIGEN_FLOOR;
use crate::wavelet::{make_filter_bank, WaveletFamily, MAX_VANISHING};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Synthetic model; absent when estimating a series read from disk.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub mc: McSection,
    #[serde(default)]
    pub io: IoConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub hurst: Vec<f64>,
    /// `E B(1) B(1)ᵀ`; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_cov: Option<Vec<Vec<f64>>>,
    pub n: usize,
    #[serde(default)]
    pub mixing: MixingConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingKindConfig {
    #[default]
    Canonical,
    RandomGaussianUnitColumns,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixingConfig {
    #[serde(default)]
    pub kind: MixingKindConfig,
    /// Ambient dimension. Derived from `ratio` when absent; `r` when both
    /// are absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    /// Target `p / n_{j2}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    /// Rows of the `p x r` matrix for the `explicit` kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseConfig {
    IidGaussian {
        #[serde(default = "one")]
        variance: f64,
    },
    Arma {
        #[serde(default)]
        ar: Vec<f64>,
        #[serde(default)]
        ma: Vec<f64>,
        #[serde(default = "one")]
        variance: f64,
    },
    None,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig::IidGaussian { variance: 1.0 }
    }
}

fn one() -> f64 {
    1.0
}

fn two() -> usize {
    2
}

fn default_floor() -> f64 {
    DEFAULT_EIGEN_FLOOR
}

fn default_kappa() -> f64 {
    DEFAULT_KAPPA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_family")]
    pub wavelet: WaveletFamily,
    #[serde(default = "two")]
    pub n_vanishing: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j2: Option<u32>,
    #[serde(default)]
    pub weights: WeightScheme,
    #[serde(default = "default_floor")]
    pub eigen_floor: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_grid: Option<Vec<f64>>,
    /// Latent dimension for `ĥ`; `r̂` is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
}

fn default_family() -> WaveletFamily {
    WaveletFamily::Daubechies
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            wavelet: default_family(),
            n_vanishing: 2,
            j1: None,
            j2: None,
            weights: WeightScheme::default(),
            eigen_floor: DEFAULT_EIGEN_FLOOR,
            kappa: DEFAULT_KAPPA,
            kappa_grid: None,
            r: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum KsConfig {
    Full,
    /// Decisions averaged over random subsets; `size` defaults to `M / 4`.
    Subsets {
        #[serde(default = "hundred")]
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        size: Option<usize>,
    },
}

fn hundred() -> usize {
    100
}

fn default_reps() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    #[serde(default = "default_reps")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "full_ks")]
    pub ks: KsConfig,
}

fn full_ks() -> KsConfig {
    KsConfig::Full
}

impl Default for McSection {
    fn default() -> Self {
        McSection {
            replications: default_reps(),
            seed: 0,
            ks: KsConfig::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesFormat {
    #[default]
    Binary,
    Csv,
}

impl SeriesFormat {
    pub fn extension(self) -> &'static str {
        match self {
            SeriesFormat::Binary => "bin",
            SeriesFormat::Csv => "csv",
        }
    }
}

fn default_out() -> String {
    "out".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IoConfig {
    #[serde(default = "default_out")]
    pub out_dir: String,
    #[serde(default)]
    pub format: SeriesFormat,
    /// Also write the latent path `X`, the noise `Z` and the mixing matrix `P`.
    #[serde(default)]
    pub write_latent: bool,
    #[serde(default)]
    pub write_noise: bool,
    #[serde(default)]
    pub write_mixing: bool,
    /// Input series for `estimate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
}

impl Default for IoConfig {
    fn default() -> Self {
        IoConfig {
            out_dir: default_out(),
            format: SeriesFormat::Binary,
            write_latent: false,
            write_noise: false,
            write_mixing: false,
            data: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig3,
    Fig4,
}

impl Preset {
    pub const NAMES: [&'static str; 3] = ["fig1", "fig3", "fig4"];

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "fig1" => Ok(Preset::Fig1),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            other => Err(Error::param(
                "preset",
                format!("unknown preset `{other}`, expected one of fig1, fig3, fig4"),
            )),
        }
    }
}

/// Point covariance of the Gamma-plot study: symmetric Toeplitz with first
/// row `(1, 0.2, 0.2, 0.3, 0.2, 0.3)`.
pub fn fig3_point_cov() -> Vec<Vec<f64>> {
    let row = [1.0, 0.2, 0.2, 0.3, 0.2, 0.3];
    (0..6)
        .map(|a: usize| (0..6).map(|b: usize| row[a.abs_diff(b)]).collect())
        .collect()
}

const FIG_HURST: [f64; 6] = [0.1, 0.3, 0.5, 0.6, 0.8, 0.9];

/// The three Monte Carlo studies at desk scale.
pub fn preset(which: Preset) -> RunConfig {
    let (hurst, point_cov, n, kind, ratio, (j1, j2), replications) = match which {
        Preset::Fig1 => (
            FIG_HURST.to_vec(),
            None,
            1 << 16,
            MixingKindConfig::Canonical,
            0.25,
            (5, 8),
            50,
        ),
        Preset::Fig3 => (
            FIG_HURST.to_vec(),
            Some(fig3_point_cov()),
            1 << 14,
            MixingKindConfig::Canonical,
            0.5,
            (5, 7),
            500,
        ),
        Preset::Fig4 => {
            let r = 3;
            let h = (1..=r).map(|q| q as f64 / (r + 1) as f64).collect();
            (
                h,
                None,
                1 << 12,
                MixingKindConfig::RandomGaussianUnitColumns,
                0.5,
                (4, 6),
                200,
            )
        }
    };
    RunConfig {
        model: Some(ModelConfig {
            hurst,
            point_cov,
            n,
            mixing: MixingConfig {
                kind,
                p: None,
                ratio: Some(ratio),
                matrix: None,
            },
            noise: NoiseConfig::IidGaussian { variance: 1.0 },
        }),
        analysis: AnalysisConfig {
            j1: Some(j1),
            j2: Some(j2),
            ..AnalysisConfig::default()
        },
        mc: McSection {
            replications,
            seed: 1,
            ks: KsConfig::Full,
        },
        io: IoConfig::default(),
    }
}

/// Renames a library error to the configuration field it came from.
fn at(path: &str) -> impl FnOnce(Error) -> Error + '_ {
    move |e| match e {
        Error::InvalidParameter { reason, .. } => Error::param(path, reason),
        Error::Shape(reason) => Error::param(path, reason),
        other => other,
    }
}

impl RunConfig {
    /// Parses and validates a JSON document. Schema errors carry the path of
    /// the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            Error::param(
                if path == "." {
                    "config".to_string()
                } else {
                    path
                },
                e.into_inner().to_string(),
            )
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn model(&self) -> Result<&ModelConfig> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::param("model", "required"))
    }

    pub fn r(&self) -> Result<usize> {
        Ok(self.model()?.hurst.len())
    }

    /// Ambient dimension after resolving `mixing.p` / `mixing.ratio`.
    pub fn p(&self) -> Result<usize> {
        let model = self.model()?;
        let r = model.hurst.len();
        let mixing = &model.mixing;
        let from_ratio = match mixing.ratio {
            Some(c) => {
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::param("model.mixing.ratio", "must be positive"));
                }
                let j2 = self.analysis.j2.ok_or_else(|| {
                    Error::param("analysis.j2", "required when model.mixing.ratio is set")
                })?;
                let p = (c * model.n as f64 / 2f64.powi(j2 as i32)).round() as usize;
                Some(p)
            }
            None => None,
        };
        let p = match (mixing.p, from_ratio) {
            (Some(p), Some(q)) if p != q => {
                return Err(Error::param(
                    "model.mixing.p",
                    format!("p = {p} disagrees with ratio-derived p = {q}"),
                ))
            }
            (Some(p), _) | (None, Some(p)) => p,
            (None, None) => match &mixing.matrix {
                Some(rows) => rows.len(),
                None => r,
            },
        };
        if p < r {
            return Err(Error::param(
                "model.mixing.p",
                format!("ambient dimension p = {p} is below r = {r}"),
            ));
        }
        Ok(p)
    }

    pub fn ofbm_spec(&self) -> Result<OfBmSpec> {
        let model = self.model()?;
        let r = model.hurst.len();
        if r == 0 {
            return Err(Error::param(
                "model.hurst",
                "need at least one Hurst exponent",
            ));
        }
        let cov = match &model.point_cov {
            Some(rows) => Matrix::from_rows(rows).map_err(at("model.point_cov"))?,
            None => Matrix::identity(r),
        };
        if cov.rows() != r || cov.cols() != r {
            return Err(Error::param(
                "model.point_cov",
                format!("expected {r}x{r}, got {}x{}", cov.rows(), cov.cols()),
            ));
        }
        let spec = OfBmSpec {
            hurst: model.hurst.clone(),
            point_cov: cov,
        };
        spec.validate().map_err(|e| match &e {
            Error::InvalidParameter { name, .. } if name.contains("hurst") => at("model.hurst")(e),
            _ => at("model.point_cov")(e),
        })?;
        Ok(spec)
    }

    pub fn mixing_kind(&self) -> Result<MixingKind> {
        let mixing = &self.model()?.mixing;
        match mixing.kind {
            MixingKindConfig::Canonical => Ok(MixingKind::Canonical),
            MixingKindConfig::RandomGaussianUnitColumns => {
                Ok(MixingKind::RandomGaussianUnitColumns)
            }
            MixingKindConfig::Explicit => {
                let rows = mixing.matrix.as_ref().ok_or_else(|| {
                    Error::param("model.mixing.matrix", "required for the explicit kind")
                })?;
                let m = Matrix::from_rows(rows).map_err(at("model.mixing.matrix"))?;
                Ok(MixingKind::Explicit(m))
            }
        }
    }

    pub fn noise_spec(&self) -> Result<NoiseSpec> {
        let spec = match &self.model()?.noise {
            NoiseConfig::IidGaussian { variance } => NoiseSpec::IidGaussian {
                variance: *variance,
            },
            NoiseConfig::Arma { ar, ma, variance } => NoiseSpec::Arma {
                ar: ar.clone(),
                ma: ma.clone(),
                variance: *variance,
            },
            NoiseConfig::None => NoiseSpec::None,
        };
        spec.validate().map_err(at("model.noise"))?;
        Ok(spec)
    }

    pub fn analysis_spec(&self) -> Result<AnalysisSpec> {
        let a = &self.analysis;
        let j1 =
            a.j1.ok_or_else(|| Error::param("analysis.j1", "required"))?;
        let j2 =
            a.j2.ok_or_else(|| Error::param("analysis.j2", "required"))?;
        if j1 < 1 || j1 > j2 {
            return Err(Error::param(
                "analysis.j1",
                format!("need 1 <= j1 <= j2, got ({j1}, {j2})"),
            ));
        }
        if !(a.eigen_floor > 0.0) {
            return Err(Error::param("analysis.eigen_floor", "must be positive"));
        }
        if !(a.kappa > 0.0 && a.kappa.is_finite()) {
            return Err(Error::param("analysis.kappa", "must be positive"));
        }
        if a.r == Some(0) {
            return Err(Error::param("analysis.r", "must be at least 1"));
        }
        Ok(AnalysisSpec {
            filter: make_filter_bank(a.wavelet, a.n_vanishing)
                .map_err(at("analysis.n_vanishing"))?,
            j1,
            j2,
            scheme: a.weights,
            eigen_floor: a.eigen_floor,
            kappa: a.kappa,
            r: a.r,
        })
    }

    pub fn kappa_grid(&self) -> Result<Vec<f64>> {
        match &self.analysis.kappa_grid {
            Some(g) if g.is_empty() => Err(Error::param("analysis.kappa_grid", "must be nonempty")),
            Some(g) if g.iter().any(|k| !(*k > 0.0 && k.is_finite())) => Err(Error::param(
                "analysis.kappa_grid",
                "entries must be positive",
            )),
            Some(g) => Ok(g.clone()),
            None => Ok(default_kappa_grid()),
        }
    }

    fn ks_mode(&self) -> Result<KsMode> {
        match self.mc.ks {
            KsConfig::Full => Ok(KsMode::Full),
            KsConfig::Subsets { count, size } => {
                let size = size.unwrap_or(((self.mc.replications as f64) / 4.0).round() as usize);
                if count == 0 || size == 0 {
                    return Err(Error::param(
                        "mc.ks",
                        "subset count and size must be positive",
                    ));
                }
                if size > self.mc.replications {
                    return Err(Error::param(
                        "mc.ks.size",
                        "subset size exceeds mc.replications",
                    ));
                }
                Ok(KsMode::Subsets { count, size })
            }
        }
    }

    /// Checks everything that does not need the analysis octaves.
    fn validate_model(&self) -> Result<()> {
        let n = self.model()?.n;
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::param(
                "model.n",
                format!("must be a power of two >= 2, got {n}"),
            ));
        }
        self.ofbm_spec()?;
        self.noise_spec()?;
        let kind = self.mixing_kind()?;
        let p = self.p()?;
        if let MixingKind::Explicit(m) = &kind {
            let r = self.r()?;
            if m.rows() != p || m.cols() != r {
                return Err(Error::param(
                    "model.mixing.matrix",
                    format!("expected {p}x{r}, got {}x{}", m.rows(), m.cols()),
                ));
            }
        }
        Ok(())
    }

    /// Semantic validation run right after parsing.
    pub fn validate(&self) -> Result<()> {
        if let Some(model) = &self.model {
            if self.analysis.j1.is_some() && self.analysis.j2.is_some() && model.n >= 2 {
                self.analysis_spec()?.check_feasible(model.n)?;
            }
            self.validate_model()?;
        }
        let a = &self.analysis;
        if !(1..=MAX_VANISHING).contains(&a.n_vanishing) && a.wavelet == WaveletFamily::Daubechies {
            return Err(Error::param(
                "analysis.n_vanishing",
                format!(
                    "Daubechies filters support 1..={MAX_VANISHING} vanishing moments, got {}",
                    a.n_vanishing
                ),
            ));
        }
        if a.j1.is_some() && a.j2.is_some() {
            self.analysis_spec()?;
        }
        self.kappa_grid()?;
        if self.mc.replications < 1 {
            return Err(Error::param(
                "mc.replications",
                "need at least one replication",
            ));
        }
        self.ks_mode()?;
        Ok(())
    }

    pub fn mc_config(&self) -> Result<McConfig> {
        self.validate()?;
        Ok(McConfig {
            ofbm: self.ofbm_spec()?,
            mixing: self.mixing_kind()?,
            noise: self.noise_spec()?,
            n: self.model()?.n,
            ambient: AmbientDim::Fixed(self.p()?),
            analysis: self.analysis_spec()?,
            replications: self.mc.replications,
            master_seed: self.mc.seed,
            kappa_grid: self.kappa_grid()?,
            truth_r: Some(self.r()?),
            ks_mode: self.ks_mode()?,
        })
    }

    /// The same configuration with every default written out.
    pub fn effective(&self) -> Result<RunConfig> {
        let mut e = self.clone();
        if let Some(model) = &mut e.model {
            let r = model.hurst.len();
            if model.point_cov.is_none() {
                model.point_cov = Some(
                    (0..r)
                        .map(|a| (0..r).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
                        .collect(),
                );
            }
            model.mixing.p = Some(self.p()?);
        }
        if e.analysis.wavelet == WaveletFamily::Haar {
            e.analysis.n_vanishing = 1;
        }
        e.analysis.kappa_grid = Some(self.kappa_grid()?);
        if let KsMode::Subsets { count, size } = self.ks_mode()? {
            e.mc.ks = KsConfig::Subsets {
                count,
                size: Some(size),
            };
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{ "model": { "hurst": [0.5], "n": 1024, "mixing": { "p": 1 } } }"#;

    fn param_name(e: Error) -> String {
        match e {
            Error::InvalidParameter { name, .. } => name,
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn minimal_config_defaults() {
        let c = RunConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.p().unwrap(), 1);
        assert_eq!(
            c.model().unwrap().noise,
            NoiseConfig::IidGaussian { variance: 1.0 }
        );
        assert_eq!(c.analysis.n_vanishing, 2);
        assert_eq!(c.mc.replications, 100);
        let e = c.effective().unwrap();
        assert_eq!(e.model().unwrap().point_cov, Some(vec![vec![1.0]]));
        assert_eq!(e.analysis.kappa_grid.as_ref().unwrap().len(), 99);
        let again = RunConfig::from_json(&e.to_json_pretty()).unwrap();
        assert_eq!(again, e);
        assert_eq!(again.effective().unwrap(), e);
    }

    #[test]
    fn unknown_keys_name_their_path() {
        let e = RunConfig::from_json(r#"{ "model": { "hurst": [0.5], "n": 1024, "nn": 3 } }"#)
            .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("model") && msg.contains("nn"), "{msg}");
        let e =
            RunConfig::from_json(r#"{ "model": { "hurst": [0.5], "n": 1024 }, "anlysis": {} }"#)
                .unwrap_err();
        assert!(e.to_string().contains("anlysis"));
        let e = RunConfig::from_json(
            r#"{ "model": { "hurst": [0.5], "n": 1024, "noise": { "kind": "iid_gaussian", "var": 2 } } }"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("var"), "{e}");
        let e = RunConfig::from_json(r#"{ "model": { "hurst": "x", "n": 1024 } }"#).unwrap_err();
        assert_eq!(param_name(e), "model.hurst");
    }

    #[test]
    fn semantic_errors_name_their_field() {
        let e = RunConfig::from_json(
            r#"{ "model": { "hurst": [0.3, 0.6], "n": 1024, "mixing": { "p": 1 } } }"#,
        )
        .unwrap_err();
        assert_eq!(param_name(e), "model.mixing.p");
        let e = RunConfig::from_json(r#"{ "model": { "hurst": [0.5], "n": 1000 } }"#).unwrap_err();
        assert_eq!(param_name(e), "model.n");
        let e =
            RunConfig::from_json(r#"{ "model": { "hurst": [0.6, 0.3], "n": 1024 } }"#).unwrap_err();
        assert_eq!(param_name(e), "model.hurst");
        let e = RunConfig::from_json(
            r#"{ "model": { "hurst": [0.5, 0.5], "n": 1024, "point_cov": [[1, 2], [2, 1]] } }"#,
        )
        .unwrap_err();
        assert_eq!(param_name(e), "model.point_cov");
        let e = RunConfig::from_json(
            r#"{ "model": { "hurst": [0.5], "n": 1024, "noise": { "kind": "arma", "ar": [1.5] } } }"#,
        )
        .unwrap_err();
        assert_eq!(param_name(e), "model.noise");
        let e = RunConfig::from_json(
            r#"{ "model": { "hurst": [0.5], "n": 1024 }, "analysis": { "n_vanishing": 11 } }"#,
        )
        .unwrap_err();
        assert_eq!(param_name(e), "analysis.n_vanishing");
    }

    #[test]
    fn presets_resolve() {
        for (which, p, r) in [
            (Preset::Fig1, 64, 6),
            (Preset::Fig3, 64, 6),
            (Preset::Fig4, 32, 3),
        ] {
            let c = preset(which);
            c.validate().unwrap();
            assert_eq!(c.p().unwrap(), p);
            let mc = c.mc_config().unwrap();
            assert_eq!(mc.ofbm.dim(), r);
            assert_eq!(mc.truth_r, Some(r));
        }
        assert_eq!(
            preset(Preset::Fig4).model().unwrap().hurst,
            vec![0.25, 0.5, 0.75]
        );
        assert_eq!(fig3_point_cov()[0], vec![1.0, 0.2, 0.2, 0.3, 0.2, 0.3]);
        assert_eq!(fig3_point_cov()[5][0], 0.3);
        assert!(Preset::from_name("fig2").is_err());
    }

    #[test]
    fn analysis_only_config() {
        let c = RunConfig::from_json(
            r#"{ "analysis": { "j1": 2, "j2": 4 }, "io": { "data": "y.bin" } }"#,
        )
        .unwrap();
        assert!(c.model.is_none());
        assert_eq!(c.analysis_spec().unwrap().j2, 4);
        assert_eq!(param_name(c.mc_config().unwrap_err()), "model");
        let e = c.effective().unwrap();
        assert!(e.model.is_none());
    }

    #[test]
    fn infeasible_octave_is_reported_before_dimension() {
        let mut c = preset(Preset::Fig4);
        c.analysis.j2 = Some(30);
        assert!(matches!(
            c.validate(),
            Err(Error::InfeasibleOctave {
                last_feasible: 10,
                ..
            })
        ));
    }

    #[test]
    fn subset_size_defaults_to_a_quarter() {
        let mut c = preset(Preset::Fig3);
        c.mc.ks = KsConfig::Subsets {
            count: 100,
            size: None,
        };
        let e = c.effective().unwrap();
        assert_eq!(
            e.mc.ks,
            KsConfig::Subsets {
                count: 100,
                size: Some(125)
            }
        );
    }
}
