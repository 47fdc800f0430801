//! Experiment configuration: a TOML file with one table per concern.
//! `ExperimentConfig` is the raw parsed form; [`Validated`] is the checked
//! form holding core types. Validation reports every violated field at once.

use anyhow::{anyhow, Result};
use serde::{Deserialize, Serialize};

use sdevo_core::grid::{infrared_horizon, GridSpec};
use sdevo_core::model::ModelParams;
use sdevo_core::norms::NormSpec;
use sdevo_core::rates::{Family, RateQuery, Term};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub grid: GridSection,
    pub data: DataSection,
    pub times: TimesSection,
    #[serde(default)]
    pub observables: Vec<ObservableSection>,
    #[serde(default)]
    pub rate_checks: Vec<RateCheckSection>,
    #[serde(default)]
    pub pitt_checks: Vec<PittCheckSection>,
    #[serde(default)]
    pub fit: FitSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSection {
    pub sigma: f64,
    pub delta: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSection {
    pub points_per_dim: usize,
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    Zero,
    Gaussian,
    GaussianMomentZero,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DataSection {
    pub u0: DataKind,
    #[serde(default = "default_width")]
    pub u0_width: f64,
    pub u1: DataKind,
    #[serde(default = "default_width")]
    pub u1_width: f64,
}

fn default_width() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimesSection {
    pub t_start: f64,
    pub t_end: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservableSection {
    pub i: u8,
    pub a: f64,
    pub norm: NormSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Pass when the fitted slope is at most the theoretical exponent plus
    /// the tolerance (the theory proves upper bounds: faster decay passes).
    UpperBound,
    /// Pass when |slope − exponent| ≤ tolerance; meaningful only in regimes
    /// where the low-frequency asymptotics force equality.
    Saturation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateCheckSection {
    /// Index into `observables`.
    pub observable: usize,
    pub family: Family,
    pub m: f64,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub j: u8,
    pub term: Term,
    pub kind: CheckKind,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorFamily {
    Gaussian,
    Bump,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PittCheckSection {
    pub r1: f64,
    pub r2: f64,
    pub s1: f64,
    pub s2: f64,
    #[serde(default = "default_generator")]
    pub generator: GeneratorFamily,
}

fn default_generator() -> GeneratorFamily {
    GeneratorFamily::Gaussian
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitSection {
    /// Lower edge of the fitting window; the upper edge is the (clamped)
    /// end of the schedule.
    pub t_lo: f64,
}

impl Default for FitSection {
    fn default() -> Self {
        FitSection { t_lo: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputSection {
    pub path: String,
    pub format: OutputFormat,
}

/// Checked configuration: core types plus the resolved time schedule.
#[derive(Debug)]
pub struct Validated {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub schedule: Vec<f64>,
    /// Requested t_end clamped to the infrared horizon of the grid.
    pub effective_t_end: f64,
    pub infrared_horizon: f64,
    pub fit_window: (f64, f64),
    pub rate_queries: Vec<RateQuery>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    /// Validates every section, reporting all violations together.
    pub fn validate(&self) -> Result<Validated> {
        let mut errors: Vec<String> = Vec::new();

        let params = ModelParams::new(self.model.sigma, self.model.delta, self.model.n)
            .map_err(|e| errors.push(format!("model: {e}")))
            .ok();
        let grid = GridSpec::new(self.model.n, self.grid.points_per_dim, self.grid.half_width)
            .map_err(|e| errors.push(format!("grid: {e}")))
            .ok();

        if !(self.times.t_start > 0.0) {
            errors.push(format!("times.t_start: must be > 0, got {}", self.times.t_start));
        }
        if !(self.times.t_end > self.times.t_start) {
            errors.push(format!(
                "times.t_end: must exceed t_start, got {} <= {}",
                self.times.t_end, self.times.t_start
            ));
        }
        if self.times.count < 8 {
            errors.push(format!("times.count: must be >= 8, got {}", self.times.count));
        }
        if !(self.data.u0_width > 0.0) {
            errors.push(format!("data.u0_width: must be > 0, got {}", self.data.u0_width));
        }
        if !(self.data.u1_width > 0.0) {
            errors.push(format!("data.u1_width: must be > 0, got {}", self.data.u1_width));
        }
        if self.observables.is_empty() {
            errors.push("observables: at least one observable is required".to_string());
        }
        for (idx, obs) in self.observables.iter().enumerate() {
            if obs.i > 1 {
                errors.push(format!("observables[{idx}].i: must be 0 or 1, got {}", obs.i));
            }
            if !(obs.a >= 0.0) {
                errors.push(format!("observables[{idx}].a: must be >= 0, got {}", obs.a));
            }
            let norm_ok = match obs.norm {
                NormSpec::Lm { m } => m >= 1.0,
                NormSpec::WeightedLm { rho, m } => m >= 1.0 && rho >= 0.0,
                NormSpec::Sobolev { s } => s >= 0.0,
                NormSpec::HomogeneousSobolev { a } => a >= 0.0,
            };
            if !norm_ok {
                errors.push(format!(
                    "observables[{idx}].norm: exponents out of range in {}",
                    obs.norm.label()
                ));
            }
        }
        for (idx, check) in self.rate_checks.iter().enumerate() {
            if check.observable >= self.observables.len() {
                errors.push(format!(
                    "rate_checks[{idx}].observable: index {} out of range ({} observables)",
                    check.observable,
                    self.observables.len()
                ));
            }
            if !(check.tolerance > 0.0) {
                errors.push(format!(
                    "rate_checks[{idx}].tolerance: must be > 0, got {}",
                    check.tolerance
                ));
            }
        }
        if !(self.fit.t_lo > 0.0) {
            errors.push(format!("fit.t_lo: must be > 0, got {}", self.fit.t_lo));
        }

        let (params, grid) = match (params, grid) {
            (Some(p), Some(g)) if errors.is_empty() => (p, g),
            _ => {
                return Err(anyhow!(
                    "config invalid:\n  - {}",
                    errors.join("\n  - ")
                ))
            }
        };

        // Rate queries must evaluate (range errors surface now; validity
        // violations are data and stay in the report).
        let mut rate_queries = Vec::new();
        for (idx, check) in self.rate_checks.iter().enumerate() {
            let query = RateQuery {
                params,
                m: check.m,
                a: check.a,
                j: check.j,
                family: check.family,
                term: check.term,
            };
            if let Err(e) = sdevo_core::rates::rate(&query) {
                errors.push(format!("rate_checks[{idx}]: {e}"));
            }
            rate_queries.push(query);
        }
        if !errors.is_empty() {
            return Err(anyhow!("config invalid:\n  - {}", errors.join("\n  - ")));
        }

        // Decay fits are only meaningful inside the infrared horizon; clamp.
        let t_ir = infrared_horizon(&params, &grid);
        let effective_t_end = self.times.t_end.min(t_ir);
        if effective_t_end <= self.times.t_start {
            return Err(anyhow!(
                "config invalid:\n  - times: infrared horizon {t_ir:.3} of this grid lies below t_start {}",
                self.times.t_start
            ));
        }
        let count = self.times.count;
        let ratio = effective_t_end / self.times.t_start;
        let schedule: Vec<f64> = (0..count)
            .map(|k| self.times.t_start * ratio.powf(k as f64 / (count - 1) as f64))
            .collect();

        Ok(Validated {
            params,
            grid,
            schedule,
            effective_t_end,
            infrared_horizon: t_ir,
            fit_window: (self.fit.t_lo, effective_t_end),
            rate_queries,
        })
    }
}
