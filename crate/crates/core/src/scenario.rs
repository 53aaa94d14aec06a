//! JSON scenario files driving the command-line tool.
//!
//! ```json
//! {"viscosity": {"kind": "linear", "mu0": 1, "slope": 9},
//!  "models": ["tfe", "koval:0.22", "tl:0.6667", "naive"],
//!  "slug_counts": [2, 3, 4, 5, 10]}
//! ```
//!
//! `models` and `slug_counts` may be omitted (the four presets and
//! `[2, 3, 4, 5, 10]` are used) but an explicitly empty list is an error.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluid::{FingeringModel, ViscosityKind, ViscosityModel};
use crate::interp::MonotoneCubic;
use crate::optimizer::OptimizerOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Linear,
    Exponential,
    PowerCubic,
    Tabulated,
}

/// Viscosity section of a scenario. Which parameters are required depends on
/// `kind`; parameters belonging to another kind are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscositySpec {
    pub kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    /// Natural-log growth rate: `μ = μ₀·exp(rate_ln·c)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_ln: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    /// Inline `[c, μ]` pairs for a tabulated curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
    /// CSV file (`c,mu`) for a tabulated curve, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permeability: Option<f64>,
}

impl ViscositySpec {
    pub fn linear(mu0: f64, slope: f64) -> Self {
        Self {
            mu0: Some(mu0),
            slope: Some(slope),
            ..Self::empty(CurveKind::Linear)
        }
    }

    pub fn exponential(mu0: f64, rate_ln: f64) -> Self {
        Self {
            mu0: Some(mu0),
            rate_ln: Some(rate_ln),
            ..Self::empty(CurveKind::Exponential)
        }
    }

    pub fn power_cubic(scale: f64, exponent: f64) -> Self {
        Self {
            scale: Some(scale),
            exponent: Some(exponent),
            ..Self::empty(CurveKind::PowerCubic)
        }
    }

    fn empty(kind: CurveKind) -> Self {
        Self {
            kind,
            mu0: None,
            slope: None,
            rate_ln: None,
            scale: None,
            exponent: None,
            samples: None,
            path: None,
            c_min: None,
            c_max: None,
            permeability: None,
        }
    }

    fn field(&self, name: &str) -> Option<bool> {
        Some(match name {
            "mu0" => self.mu0.is_some(),
            "slope" => self.slope.is_some(),
            "rate_ln" => self.rate_ln.is_some(),
            "scale" => self.scale.is_some(),
            "exponent" => self.exponent.is_some(),
            "samples" => self.samples.is_some(),
            "path" => self.path.is_some(),
            _ => return None,
        })
    }

    /// Builds and validates the viscosity model.
    pub fn build(&self) -> Result<ViscosityModel> {
        let allowed: &[&str] = match self.kind {
            CurveKind::Linear => &["mu0", "slope"],
            CurveKind::Exponential => &["mu0", "rate_ln"],
            CurveKind::PowerCubic => &["scale", "exponent"],
            CurveKind::Tabulated => &["samples", "path"],
        };
        for name in [
            "mu0", "slope", "rate_ln", "scale", "exponent", "samples", "path",
        ] {
            if self.field(name) == Some(true) && !allowed.contains(&name) {
                return Err(Error::Parse(format!(
                    "viscosity.{name} is not a parameter of kind {:?}",
                    self.kind
                )));
            }
        }
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Parse(format!("missing field viscosity.{name}")))
        };

        let kind = match self.kind {
            CurveKind::Linear => ViscosityKind::Linear {
                mu0: need(self.mu0, "mu0")?,
                slope: need(self.slope, "slope")?,
            },
            CurveKind::Exponential => ViscosityKind::Exponential {
                mu0: need(self.mu0, "mu0")?,
                rate: need(self.rate_ln, "rate_ln")?,
            },
            CurveKind::PowerCubic => ViscosityKind::PowerCubic {
                scale: need(self.scale, "scale")?,
                exponent: need(self.exponent, "exponent")?,
            },
            CurveKind::Tabulated => {
                let table = match (&self.samples, &self.path) {
                    (Some(samples), None) => {
                        let (cs, mus) = samples.iter().map(|p| (p[0], p[1])).unzip();
                        MonotoneCubic::new(cs, mus)?
                    }
                    (None, Some(path)) => match ViscosityModel::from_csv(path)?.kind() {
                        ViscosityKind::Tabulated(t) => t.clone(),
                        _ => unreachable!("from_csv builds a tabulated curve"),
                    },
                    _ => {
                        return Err(Error::Parse(
                            "tabulated viscosity needs exactly one of viscosity.samples or viscosity.path".into(),
                        ))
                    }
                };
                let (lo, hi) = table.domain();
                let model = ViscosityModel::new(
                    ViscosityKind::Tabulated(table),
                    self.c_min.unwrap_or(lo),
                    self.c_max.unwrap_or(hi),
                )?;
                return self.apply_permeability(model);
            }
        };
        let model =
            ViscosityModel::new(kind, self.c_min.unwrap_or(0.0), self.c_max.unwrap_or(1.0))?;
        self.apply_permeability(model)
    }

    fn apply_permeability(&self, model: ViscosityModel) -> Result<ViscosityModel> {
        match self.permeability {
            Some(k) => model.with_permeability(k),
            None => Ok(model),
        }
    }
}

fn default_models() -> Vec<FingeringModel> {
    ["tfe", "koval:0.22", "tl:0.6667", "naive"]
        .iter()
        .map(|s| s.parse().expect("preset parses"))
        .collect()
}

fn default_slug_counts() -> Vec<usize> {
    vec![2, 3, 4, 5, 10]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub viscosity: ViscositySpec,
    #[serde(default = "default_models")]
    pub models: Vec<FingeringModel>,
    #[serde(default = "default_slug_counts")]
    pub slug_counts: Vec<usize>,
    #[serde(default)]
    pub optimizer: OptimizerOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl Scenario {
    pub fn new(
        viscosity: ViscositySpec,
        models: Vec<FingeringModel>,
        slug_counts: Vec<usize>,
    ) -> Self {
        Self {
            viscosity,
            models,
            slug_counts,
            optimizer: OptimizerOptions::default(),
            output_dir: None,
        }
    }

    /// Checks the invariants that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::Validation(
                "scenario needs at least one model".into(),
            ));
        }
        if self.slug_counts.is_empty() {
            return Err(Error::Validation(
                "scenario needs at least one slug count".into(),
            ));
        }
        if let Some(&n) = self.slug_counts.iter().find(|&&n| n == 0) {
            return Err(Error::Validation(format!(
                "slug counts must be positive, got {n}"
            )));
        }
        self.optimizer.validate()?;
        self.viscosity.build()?;
        Ok(())
    }

    pub fn viscosity_model(&self) -> Result<ViscosityModel> {
        self.viscosity.build()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path.as_ref(), self.to_json() + "\n")?;
        Ok(())
    }
}

/// Reads and validates a scenario file. A relative `viscosity.path` is
/// resolved against the directory holding the scenario.
pub fn parse_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if let Some(table) = scenario.viscosity.path.as_mut() {
        if table.is_relative() {
            *table = path.parent().unwrap_or(Path::new(".")).join(&*table);
        }
    }
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_ONE: &str = r#"{"viscosity":{"kind":"linear","mu0":1,"slope":9},
        "models":["tfe","koval:0.22","tl:0.6667","naive"],"slug_counts":[2,3,4,5,10]}"#;

    #[test]
    fn parses_linear_scenario() {
        let s = Scenario::from_json(TABLE_ONE).unwrap();
        assert_eq!(s.models.len(), 4);
        assert_eq!(s.slug_counts, vec![2, 3, 4, 5, 10]);
        let m = s.viscosity_model().unwrap();
        assert_eq!(m.viscosity(1.0).unwrap(), 10.0);
        assert_eq!(s.optimizer, OptimizerOptions::default());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn exponential_uses_natural_log_rate() {
        let s = Scenario::from_json(
            r#"{"viscosity":{"kind":"exponential","mu0":1,"rate_ln":2.302585}}"#,
        )
        .unwrap();
        let m = s.viscosity_model().unwrap();
        assert!((m.viscosity(1.0).unwrap() - 2.302585f64.exp()).abs() < 1e-12);
        assert_eq!(s.models, default_models());
    }

    #[test]
    fn empty_model_list_is_rejected() {
        let err =
            Scenario::from_json(r#"{"viscosity":{"kind":"linear","mu0":1,"slope":9},"models":[]}"#);
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let top = Scenario::from_json(
            r#"{"viscosity":{"kind":"linear","mu0":1,"slope":9},"colour":"red"}"#,
        );
        assert!(matches!(top, Err(Error::Parse(m)) if m.contains("colour")));
        let nested =
            Scenario::from_json(r#"{"viscosity":{"kind":"linear","mu0":1,"slope":9,"rate":2}}"#);
        assert!(matches!(nested, Err(Error::Parse(m)) if m.contains("rate")));
        let foreign =
            Scenario::from_json(r#"{"viscosity":{"kind":"linear","mu0":1,"slope":9,"rate_ln":2}}"#);
        assert!(matches!(foreign, Err(Error::Parse(m)) if m.contains("rate_ln")));
    }

    #[test]
    fn missing_parameter_is_named() {
        let err = Scenario::from_json(r#"{"viscosity":{"kind":"linear","mu0":1}}"#).unwrap_err();
        assert!(err.to_string().contains("viscosity.slope"), "{err}");
    }

    #[test]
    fn decreasing_table_is_a_validation_error() {
        let err = Scenario::from_json(
            r#"{"viscosity":{"kind":"tabulated","samples":[[0,3],[0.5,2],[1,1]]}}"#,
        );
        assert!(matches!(err, Err(Error::Validation(_))), "{err:?}");
    }

    #[test]
    fn round_trip_is_identity() {
        let mut s = Scenario::from_json(TABLE_ONE).unwrap();
        s.optimizer.rng_seed = 7;
        s.viscosity.permeability = Some(250.0);
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }
}
