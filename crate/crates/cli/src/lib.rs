//! Experiment runner: parse a JSON config, dispatch to the estimators,
//! persist machine- and human-readable reports, and aggregate report
//! directories. The CLI layer contains no numerics beyond dispatch; every
//! number in a report comes from an estimator or a closed form.

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use varlab_core::estimators::{
    algebra_checks::{run_algebra_identities, EXACT_TOLERANCE},
    crofton::estimate_crofton_volume,
    matrix_checks::run_matrix_identities,
    quadric::estimate_quadric_euler,
    rice::estimate_rice_curvature,
    tube::estimate_tube_volume_subsphere,
    univariate::estimate_univariate_roots,
};
use varlab_core::mc::{EstimateRecord, McSettings, DEFAULT_SEED};
use varlab_core::PolynomialEnsemble;

/// Environment variable overriding the default output directory.
pub const OUT_ENV_VAR: &str = "LAB_OUT";

/// Default pass thresholds: |z| for sampled records, absolute tolerance for
/// exact records.
pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;
pub const DEFAULT_EXACT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    UnivariateRoots,
    CroftonVolume,
    QuadricEuler,
    RiceCurvature,
    TubeSubsphere,
    MatrixIdentities,
    AlgebraIdentities,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::UnivariateRoots => "univariate_roots",
            ExperimentKind::CroftonVolume => "crofton_volume",
            ExperimentKind::QuadricEuler => "quadric_euler",
            ExperimentKind::RiceCurvature => "rice_curvature",
            ExperimentKind::TubeSubsphere => "tube_subsphere",
            ExperimentKind::MatrixIdentities => "matrix_identities",
            ExperimentKind::AlgebraIdentities => "algebra_identities",
        }
    }

    pub fn all() -> [ExperimentKind; 7] {
        [
            ExperimentKind::UnivariateRoots,
            ExperimentKind::CroftonVolume,
            ExperimentKind::QuadricEuler,
            ExperimentKind::RiceCurvature,
            ExperimentKind::TubeSubsphere,
            ExperimentKind::MatrixIdentities,
            ExperimentKind::AlgebraIdentities,
        ]
    }

    /// What the experiment verifies, stated as the formula it reproduces.
    pub fn description(&self) -> &'static str {
        match self {
            ExperimentKind::UnivariateRoots => {
                "mean number of real projective zeros of a random invariant binary form; expectation sqrt(delta)"
            }
            ExperimentKind::CroftonVolume => {
                "mean section count of a random codimension-s variety by a coordinate s-plane; expectation prod_sigma sqrt(delta_sigma)"
            }
            ExperimentKind::QuadricEuler => {
                "mean Euler characteristic of a random projective quadric by signature census; expectation sqrt(delta) sum_k C_k^(1) (1-delta)^k over k <= (n-1)/2"
            }
            ExperimentKind::RiceCurvature => {
                "tube-expansion coefficients E K_{s+2j} of random zero sets; expectation O_{n-s-2j} O_{s+2j-1} x [T^{2j}] prod_sigma sqrt(delta_sigma)(1-(1-delta_sigma)T^2)^{-1/2}"
            }
            ExperimentKind::TubeSubsphere => {
                "Monte Carlo volume of the tube around a coordinate subsphere; expectation O_{n-k} O_{k-1} J_{n,k}(alpha)"
            }
            ExperimentKind::MatrixIdentities => {
                "invariant symmetric-matrix identities: E det(I+W) = sum binom(n,2j) gamma_{2j} delta^j, E det T = (-1)^m gamma_{2m}, Gaussian volume moments, pipeline equality, jet conditioning"
            }
            ExperimentKind::AlgebraIdentities => {
                "exact series and rescaling identities (no sampling): convolution, kinematic product, generating function, telescoping, Gauss-Bonnet"
            }
        }
    }
}

/// Mixture weights of one system factor, or the Kostlan shorthand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Named(String),
    Weights(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub d: u32,
    #[serde(default = "default_betas")]
    pub betas: BetaSpec,
}

fn default_betas() -> BetaSpec {
    BetaSpec::Named("kostlan".into())
}

impl FactorSpec {
    fn build(&self, n: u32) -> anyhow::Result<PolynomialEnsemble> {
        match &self.betas {
            BetaSpec::Named(name) if name == "kostlan" => {
                Ok(PolynomialEnsemble::kostlan(n, self.d)?)
            }
            BetaSpec::Named(name) => bail!("unknown ensemble name {name:?} (expected \"kostlan\")"),
            BetaSpec::Weights(w) => Ok(PolynomialEnsemble::mixture(n, self.d, w)?),
        }
    }
}

/// One experiment run: the experiment name plus its parameter subset.
/// Unknown fields are rejected to catch misspelled parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Full factor list; `d`/`betas` below are sugar for a single factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_tol: Option<f64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).context("config is not valid experiment JSON")?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text)
    }

    /// The factor list, folding in the single-factor sugar fields.
    fn factor_specs(&self) -> anyhow::Result<Vec<FactorSpec>> {
        match (&self.factors, self.d) {
            (Some(f), None) => Ok(f.clone()),
            (None, Some(d)) => Ok(vec![FactorSpec {
                d,
                betas: match &self.betas {
                    Some(w) => BetaSpec::Weights(w.clone()),
                    None => default_betas(),
                },
            }]),
            (Some(_), Some(_)) => bail!("field 'd' conflicts with 'factors'; use one of them"),
            (None, None) => bail!("experiment needs either 'factors' or 'd' (+ optional 'betas')"),
        }
    }

    fn default_samples(&self) -> u64 {
        match self.experiment {
            ExperimentKind::RiceCurvature => 200_000,
            ExperimentKind::AlgebraIdentities => 0,
            _ => 100_000,
        }
    }

    fn default_batches(&self) -> u32 {
        match self.experiment {
            ExperimentKind::RiceCurvature => 200,
            _ => 100,
        }
    }

    fn settings(&self) -> McSettings {
        McSettings {
            samples: self.samples.unwrap_or_else(|| self.default_samples()),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            batches: self.default_batches(),
            workers: self.workers,
        }
    }

    fn default_exact_tol(&self) -> f64 {
        match self.experiment {
            ExperimentKind::AlgebraIdentities => EXACT_TOLERANCE,
            _ => DEFAULT_EXACT_TOL,
        }
    }
}

/// Flag-level overrides applied on top of the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, mut config: ExperimentConfig) -> ExperimentConfig {
        if self.samples.is_some() {
            config.samples = self.samples;
        }
        if self.seed.is_some() {
            config.seed = self.seed;
        }
        if self.workers.is_some() {
            config.workers = self.workers;
        }
        config
    }
}

/// Finished run: config echo, records, and per-record verdicts. Curvature
/// experiments also echo the expected curvature polynomial `{n, s, mu}`
/// whose rescaled coefficients are the record targets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub z_threshold: f64,
    pub exact_tol: f64,
    pub records: Vec<EstimateRecord>,
    pub passes: Vec<bool>,
    pub all_pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_mu: Option<CurvaturePolynomial>,
    pub wall_seconds: f64,
}

impl RunReport {
    fn new(
        config: ExperimentConfig,
        records: Vec<EstimateRecord>,
        expected_mu: Option<CurvaturePolynomial>,
        wall_seconds: f64,
    ) -> Self {
        let z = config.z_threshold.unwrap_or(DEFAULT_Z_THRESHOLD);
        let tol = config.exact_tol.unwrap_or_else(|| config.default_exact_tol());
        let passes: Vec<bool> = records.iter().map(|r| r.passes(z, tol)).collect();
        let all_pass = passes.iter().all(|&p| p);
        RunReport {
            config,
            z_threshold: z,
            exact_tol: tol,
            records,
            passes,
            all_pass,
            expected_mu,
            wall_seconds,
        }
    }
}

/// Execute one experiment.
pub fn run(config: &ExperimentConfig) -> anyhow::Result<RunReport> {
    let start = std::time::Instant::now();
    let settings = config.settings();
    let (records, expected_mu) = dispatch(config, &settings)?;
    Ok(RunReport::new(config.clone(), records, expected_mu, start.elapsed().as_secs_f64()))
}

fn require_n(config: &ExperimentConfig) -> anyhow::Result<u32> {
    config.n.ok_or_else(|| anyhow!("experiment {} requires field 'n'", config.experiment.name()))
}

fn dispatch(config: &ExperimentConfig, settings: &McSettings) -> anyhow::Result<Vec<EstimateRecord>> {
    match config.experiment {
        ExperimentKind::UnivariateRoots => {
            let factors = config.factor_specs()?;
            if factors.len() != 1 {
                bail!("univariate_roots takes exactly one factor, got {}", factors.len());
            }
            let ensemble = factors[0].build(1)?;
            Ok(vec![estimate_univariate_roots(&ensemble, settings)?])
        }
        ExperimentKind::CroftonVolume => {
            let n = require_n(config)?;
            let ensembles: Vec<PolynomialEnsemble> = config
                .factor_specs()?
                .iter()
                .map(|f| f.build(n))
                .collect::<anyhow::Result<_>>()?;
            Ok(vec![estimate_crofton_volume(&ensembles, n, settings)?])
        }
        ExperimentKind::QuadricEuler => {
            let n = require_n(config)?;
            let factors = config.factor_specs()?;
            if factors.len() != 1 {
                bail!("quadric_euler takes exactly one factor, got {}", factors.len());
            }
            let ensemble = factors[0].build(n)?;
            Ok(vec![estimate_quadric_euler(&ensemble, settings)?])
        }
        ExperimentKind::RiceCurvature => {
            let n = require_n(config)?;
            let ensembles: Vec<PolynomialEnsemble> = config
                .factor_specs()?
                .iter()
                .map(|f| f.build(n))
                .collect::<anyhow::Result<_>>()?;
            Ok(estimate_rice_curvature(&ensembles, n, settings)?)
        }
        ExperimentKind::TubeSubsphere => {
            let n = require_n(config)?;
            let k = config.k.ok_or_else(|| anyhow!("tube_subsphere requires field 'k'"))?;
            let alpha =
                config.alpha.ok_or_else(|| anyhow!("tube_subsphere requires field 'alpha'"))?;
            Ok(vec![estimate_tube_volume_subsphere(n, k, alpha, settings)?])
        }
        ExperimentKind::MatrixIdentities => Ok(run_matrix_identities(settings)?),
        ExperimentKind::AlgebraIdentities => Ok(run_algebra_identities()?),
    }
}

/// Output directory: the --out flag, then $LAB_OUT, then the config's `out`
/// field, then ./lab_out.
pub fn resolve_out_dir(config: &ExperimentConfig, flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Ok(dir) = std::env::var(OUT_ENV_VAR) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    config.out.clone().unwrap_or_else(|| PathBuf::from("lab_out"))
}

/// Write `<experiment>.json` and `<experiment>.csv` into `dir`.
pub fn write_report(report: &RunReport, dir: &Path) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let json_path = dir.join(format!("{}.json", report.config.experiment.name()));
    std::fs::write(&json_path, serde_json::to_string_pretty(report)?)
        .with_context(|| format!("cannot write {}", json_path.display()))?;
    let csv_path = dir.join(format!("{}.csv", report.config.experiment.name()));
    let mut writer = csv::Writer::from_path(&csv_path)
        .with_context(|| format!("cannot write {}", csv_path.display()))?;
    writer.write_record([
        "experiment",
        "params",
        "samples",
        "mean",
        "std_error",
        "target",
        "z_score",
        "discarded",
        "seed",
        "no_error_bar",
        "pass",
    ])?;
    for (record, pass) in report.records.iter().zip(report.passes.iter()) {
        writer.write_record([
            record.experiment.clone(),
            record.params.clone(),
            record.samples.to_string(),
            format!("{:.12e}", record.mean),
            format!("{:.12e}", record.std_error),
            format!("{:.12e}", record.target),
            format!("{:.6}", record.z_score),
            record.discarded.to_string(),
            record.seed.to_string(),
            record.no_error_bar.to_string(),
            pass.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(json_path)
}

/// Aligned-column rendering of one report.
pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "experiment: {}   (|z| <= {}, exact tol {:.1e}, wall {:.2}s)",
        report.config.experiment.name(),
        report.z_threshold,
        report.exact_tol,
        report.wall_seconds
    );
    let widest = report.records.iter().map(|r| r.params.len()).max().unwrap_or(6).max(6);
    let _ = writeln!(
        out,
        "{:<width$} {:>12} {:>14} {:>14} {:>12} {:>8} {:>9} {:>5}",
        "params",
        "samples",
        "mean",
        "target",
        "std_error",
        "z",
        "discarded",
        "pass",
        width = widest
    );
    for (record, pass) in report.records.iter().zip(report.passes.iter()) {
        let z_text = if record.no_error_bar {
            "n/a".to_string()
        } else if record.std_error > 0.0 {
            format!("{:+.2}", record.z_score)
        } else {
            "exact".to_string()
        };
        let _ = writeln!(
            out,
            "{:<width$} {:>12} {:>14.6} {:>14.6} {:>12.2e} {:>8} {:>9} {:>5}",
            record.params,
            record.samples,
            record.mean,
            record.target,
            record.std_error,
            z_text,
            record.discarded,
            if *pass { "ok" } else { "FAIL" },
            width = widest
        );
    }
    let _ = writeln!(out, "overall: {}", if report.all_pass { "PASS" } else { "FAIL" });
    out
}

/// Aggregate summary of a directory of run reports.
#[derive(Debug)]
pub struct SuiteSummary {
    pub table: String,
    pub passed: usize,
    pub failed: usize,
    pub unreadable: Vec<(PathBuf, String)>,
}

impl SuiteSummary {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// Read every `*.json` report in a directory (unreadable files are listed,
/// not fatal) and produce one summary table.
pub fn report_suite(dir: &Path) -> anyhow::Result<SuiteSummary> {
    let mut rows = Vec::new();
    let mut unreadable = Vec::new();
    let entries = match std::fs::read_dir(dir) {
        Ok(entries) => entries.collect::<Vec<_>>(),
        Err(err) if err.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(err) => return Err(err).with_context(|| format!("cannot list {}", dir.display())),
    };
    let mut paths: Vec<PathBuf> = entries
        .into_iter()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let parsed: Result<RunReport, String> = std::fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|text| serde_json::from_str(&text).map_err(|e| e.to_string()));
        match parsed {
            Ok(report) => {
                for (record, pass) in report.records.iter().zip(report.passes.iter()) {
                    rows.push((
                        record.experiment.clone(),
                        record.params.clone(),
                        record.mean,
                        record.target,
                        record.z_score,
                        record.no_error_bar,
                        *pass,
                    ));
                }
            }
            Err(err) => unreadable.push((path, err)),
        }
    }
    let passed = rows.iter().filter(|r| r.6).count();
    let failed = rows.len() - passed;
    let widest = rows.iter().map(|r| r.1.len()).max().unwrap_or(6).max(6);
    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<18} {:<width$} {:>14} {:>14} {:>8} {:>5}",
        "experiment",
        "params",
        "mean",
        "target",
        "z",
        "pass",
        width = widest
    );
    for (experiment, params, mean, target, z, no_bar, pass) in &rows {
        let z_text = if *no_bar { "n/a".into() } else { format!("{z:+.2}") };
        let _ = writeln!(
            table,
            "{:<18} {:<width$} {:>14.6} {:>14.6} {:>8} {:>5}",
            experiment,
            params,
            mean,
            target,
            z_text,
            if *pass { "ok" } else { "FAIL" },
            width = widest
        );
    }
    let _ = writeln!(table, "total: {} records, {} pass, {} fail", rows.len(), passed, failed);
    for (path, err) in &unreadable {
        let _ = writeln!(table, "unreadable: {} ({err})", path.display());
    }
    Ok(SuiteSummary { table, passed, failed, unreadable })
}

/// The experiment catalog for `lab list`.
pub fn catalog() -> String {
    let mut out = String::new();
    for kind in ExperimentKind::all() {
        let _ = writeln!(out, "{:<18} {}", kind.name(), kind.description());
    }
    out
}
