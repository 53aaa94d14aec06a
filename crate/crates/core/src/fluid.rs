//! Viscosity and mobility curves, flux factors and fingering models.
//!
//! Every velocity used downstream depends only on mobility *ratios*, so the
//! ratio helpers here are written in terms of `μ` alone and the permeability
//! cancels exactly. [`ViscosityModel::mobility`] and
//! [`ViscosityModel::mean_mobility`] keep the full `m = k/μ` form.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::quadrature;

/// Relative tolerance of the mean-mobility quadrature.
pub const MEAN_MOBILITY_TOL: f64 = 1e-12;

/// Grid used to certify that a viscosity curve is positive and strictly increasing.
const MONOTONICITY_GRID: usize = 1000;

/// Shape of the viscosity curve `μ(c)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ViscosityKind {
    /// `μ(c) = μ₀ + slope·c`
    Linear { mu0: f64, slope: f64 },
    /// `μ(c) = μ₀·exp(rate·c)`
    Exponential { mu0: f64, rate: f64 },
    /// `μ(c) = (1 + scale·c³)^exponent`
    PowerCubic { scale: f64, exponent: f64 },
    /// Monotone cubic through `(c, μ)` samples.
    Tabulated(MonotoneCubic),
}

/// Viscosity curve on `[c_min, c_max]` with the induced mobility `m = k/μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViscosityModel {
    kind: ViscosityKind,
    c_min: f64,
    c_max: f64,
    permeability: f64,
}

impl ViscosityModel {
    /// Validates the curve: `c_min < c_max`, `μ > 0` and strictly increasing on a
    /// 1000-point grid.
    pub fn new(kind: ViscosityKind, c_min: f64, c_max: f64) -> Result<Self> {
        if !(c_min.is_finite() && c_max.is_finite() && c_min < c_max) {
            return Err(Error::Validation(format!(
                "concentration range must satisfy c_min < c_max, got [{c_min}, {c_max}]"
            )));
        }
        if let ViscosityKind::Tabulated(table) = &kind {
            let (lo, hi) = table.domain();
            if c_min < lo || c_max > hi {
                return Err(Error::Validation(format!(
                    "tabulated viscosity covers [{lo}, {hi}] but [{c_min}, {c_max}] was requested"
                )));
            }
        }
        let model = Self {
            kind,
            c_min,
            c_max,
            permeability: 1.0,
        };
        model.check_monotone()?;
        Ok(model)
    }

    /// `μ(c) = μ₀ + slope·c` on `[0, 1]`.
    pub fn linear(mu0: f64, slope: f64) -> Result<Self> {
        Self::new(ViscosityKind::Linear { mu0, slope }, 0.0, 1.0)
    }

    /// `μ(c) = μ₀·exp(rate·c)` on `[0, 1]`.
    pub fn exponential(mu0: f64, rate: f64) -> Result<Self> {
        Self::new(ViscosityKind::Exponential { mu0, rate }, 0.0, 1.0)
    }

    /// `μ(c) = (1 + scale·c³)^exponent` on `[0, 1]`.
    pub fn power_cubic(scale: f64, exponent: f64) -> Result<Self> {
        Self::new(ViscosityKind::PowerCubic { scale, exponent }, 0.0, 1.0)
    }

    /// Tabulated curve over the full sample range.
    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        let (cs, mus): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        let table = MonotoneCubic::new(cs, mus)?;
        let (lo, hi) = table.domain();
        Self::new(ViscosityKind::Tabulated(table), lo, hi)
    }

    /// Reads a two-column CSV with header `c,mu`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .clone();
        let names: Vec<&str> = headers.iter().map(str::trim).collect();
        if names != ["c", "mu"] {
            return Err(Error::Parse(format!(
                "{}: expected header `c,mu`, found `{}`",
                path.display(),
                names.join(",")
            )));
        }
        let mut samples = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let parse = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::Parse(format!("{}: bad value in row {}", path.display(), row + 1))
                    })
            };
            samples.push((parse(0)?, parse(1)?));
        }
        Self::tabulated(&samples)
    }

    /// Replaces the permeability `k` (default 1).
    pub fn with_permeability(mut self, k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Validation(format!(
                "permeability must be positive, got {k}"
            )));
        }
        self.permeability = k;
        Ok(self)
    }

    pub fn kind(&self) -> &ViscosityKind {
        &self.kind
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn permeability(&self) -> f64 {
        self.permeability
    }

    fn check_monotone(&self) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=MONOTONICITY_GRID {
            let c = self.grid_point(i, MONOTONICITY_GRID);
            let mu = self.mu(c);
            if !(mu.is_finite() && mu > 0.0) {
                return Err(Error::Validation(format!(
                    "viscosity must be positive and finite, μ({c}) = {mu}"
                )));
            }
            if mu <= prev {
                return Err(Error::Validation(format!(
                    "viscosity must be strictly increasing; fails near c = {c}"
                )));
            }
            prev = mu;
        }
        Ok(())
    }

    fn grid_point(&self, i: usize, n: usize) -> f64 {
        if i == n {
            self.c_max
        } else {
            self.c_min + (self.c_max - self.c_min) * i as f64 / n as f64
        }
    }

    fn check_domain(&self, c: f64) -> Result<()> {
        if c >= self.c_min && c <= self.c_max {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "concentration {c} outside [{}, {}]",
                self.c_min, self.c_max
            )))
        }
    }

    /// Unchecked `μ(c)`.
    pub(crate) fn mu(&self, c: f64) -> f64 {
        match &self.kind {
            ViscosityKind::Linear { mu0, slope } => mu0 + slope * c,
            ViscosityKind::Exponential { mu0, rate } => mu0 * (rate * c).exp(),
            ViscosityKind::PowerCubic { scale, exponent } => {
                (1.0 + scale * c * c * c).powf(*exponent)
            }
            ViscosityKind::Tabulated(table) => table.eval(c),
        }
    }

    pub fn viscosity(&self, c: f64) -> Result<f64> {
        self.check_domain(c)?;
        Ok(self.mu(c))
    }

    pub fn mobility(&self, c: f64) -> Result<f64> {
        self.check_domain(c)?;
        Ok(self.permeability / self.mu(c))
    }

    /// Mean of `m` over the interval between `a` and `b` (order-insensitive).
    pub fn mean_mobility(&self, a: f64, b: f64) -> Result<f64> {
        self.check_domain(a)?;
        self.check_domain(b)?;
        if a == b {
            return Err(Error::DegenerateInterval { at: a });
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let k = self.permeability;
        let integral = quadrature::integrate(lo, hi, MEAN_MOBILITY_TOL, |c| k / self.mu(c));
        Ok(integral / (hi - lo))
    }

    /// `m(a)/m(b) = μ(b)/μ(a)`; permeability-free.
    pub fn mobility_ratio(&self, a: f64, b: f64) -> f64 {
        self.mu(b) / self.mu(a)
    }

    /// `m̄(lo, hi)/m(reference)` without forming `k`. Falls back to the point
    /// ratio when the interval has collapsed.
    pub(crate) fn relative_mean_mobility(&self, lo: f64, hi: f64, reference: f64) -> f64 {
        let mu_ref = self.mu(reference);
        if hi == lo {
            return mu_ref / self.mu(lo);
        }
        quadrature::integrate(lo, hi, MEAN_MOBILITY_TOL, |c| mu_ref / self.mu(c)) / (hi - lo)
    }

    /// `M = m(c_min)/m(c_max)`, the largest mobility ratio on the domain.
    pub fn max_mobility_ratio(&self) -> f64 {
        self.mobility_ratio(self.c_min, self.c_max)
    }
}

/// A closure-backed flux factor, evaluated only on `[1, M]`.
#[derive(Clone)]
pub struct CustomFlux {
    name: String,
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl CustomFlux {
    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomFlux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFlux")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CustomFlux {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && Arc::ptr_eq(&self.func, &other.func)
    }
}

/// Flux factor `f` of a generalized Koval model: `v_b = f(x)`, `v_f = 1/f(x)`
/// for the mobility ratio `x ≥ 1` across a mixing zone.
#[derive(Debug, Clone, PartialEq)]
pub enum FluxFactor {
    /// `f(x) = (α·x^{1/4} + 1 − α)^{−4}`
    Koval {
        alpha: f64,
    },
    /// `f(x) = x^{−ω}`
    ToddLongstaff {
        omega: f64,
    },
    /// Todd–Longstaff with `ω = 1`.
    NaiveKoval,
    Custom(CustomFlux),
}

impl FluxFactor {
    pub const DEFAULT_KOVAL_ALPHA: f64 = 0.22;
    pub const DEFAULT_TL_OMEGA: f64 = 2.0 / 3.0;

    pub fn koval(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Validation(format!(
                "Koval α must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(Self::Koval { alpha })
    }

    pub fn todd_longstaff(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega <= 1.0) {
            return Err(Error::Validation(format!(
                "Todd–Longstaff ω must lie in (0, 1], got {omega}"
            )));
        }
        Ok(Self::ToddLongstaff { omega })
    }

    /// Wraps an arbitrary `f`; only `f(1) = 1` is checked here; monotonicity
    /// and the remaining structure are left to `validate_conditions`.
    pub fn custom<F>(name: impl Into<String>, func: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let at_one = func(1.0);
        if !at_one.is_finite() || (at_one - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "custom flux factor must satisfy f(1) = 1, got {at_one}"
            )));
        }
        Ok(Self::Custom(CustomFlux {
            name: name.into(),
            func: Arc::new(func),
        }))
    }

    /// Unchecked evaluation.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Koval { alpha } => (alpha * x.powf(0.25) + (1.0 - alpha)).powi(-4),
            Self::ToddLongstaff { omega } => x.powf(-omega),
            Self::NaiveKoval => 1.0 / x,
            Self::Custom(c) => (c.func)(x),
        }
    }

    /// `f(x)` for a mobility ratio `x ≥ 1`.
    pub fn flux_value(&self, x: f64) -> Result<f64> {
        if !(x >= 1.0) {
            return Err(Error::Domain(format!(
                "flux factor needs a mobility ratio ≥ 1, got {x}"
            )));
        }
        let v = self.eval(x);
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("f({x}) = {v}")));
        }
        Ok(v)
    }

    /// `f′(1)`: analytic for the presets, a second-order one-sided difference
    /// with step `1e−6` for custom functions.
    pub fn flux_derivative_at_one(&self) -> Result<f64> {
        match self {
            Self::Koval { alpha } => Ok(-alpha),
            Self::ToddLongstaff { omega } => Ok(-omega),
            Self::NaiveKoval => Ok(-1.0),
            Self::Custom(c) => {
                const H: f64 = 1e-6;
                let f0 = (c.func)(1.0);
                let f1 = (c.func)(1.0 + H);
                let f2 = (c.func)(1.0 + 2.0 * H);
                if !(f0.is_finite() && f1.is_finite() && f2.is_finite()) {
                    return Err(Error::Evaluation(format!(
                        "custom flux factor `{}` is not finite near 1",
                        c.name
                    )));
                }
                Ok((-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * H))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Koval { alpha } => format!("Koval (α = {})", short(*alpha)),
            Self::ToddLongstaff { omega } => format!("Todd–Longstaff (ω = {})", short(*omega)),
            Self::NaiveKoval => "naive Koval".to_string(),
            Self::Custom(c) => format!("custom `{}`", c.name),
        }
    }
}

/// At most four decimals, trailing zeros dropped.
fn short(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Mixing-zone growth model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FingeringModel {
    /// Transverse flow equilibrium: edge speeds from the interval-mean mobility.
    Tfe,
    GeneralizedKoval(FluxFactor),
}

impl FingeringModel {
    pub fn koval(alpha: f64) -> Result<Self> {
        FluxFactor::koval(alpha).map(Self::GeneralizedKoval)
    }

    pub fn todd_longstaff(omega: f64) -> Result<Self> {
        FluxFactor::todd_longstaff(omega).map(Self::GeneralizedKoval)
    }

    pub fn naive_koval() -> Self {
        Self::GeneralizedKoval(FluxFactor::NaiveKoval)
    }

    pub fn flux(&self) -> Option<&FluxFactor> {
        match self {
            Self::Tfe => None,
            Self::GeneralizedKoval(f) => Some(f),
        }
    }

    /// Human-readable name, e.g. for table rows.
    pub fn label(&self) -> String {
        match self {
            Self::Tfe => "TFE".to_string(),
            Self::GeneralizedKoval(f) => f.label(),
        }
    }

    /// File-name friendly tag, e.g. `koval-0.22`.
    pub fn slug(&self) -> String {
        self.to_string().replace(':', "-")
    }
}

/// Model strings: `tfe`, `koval[:α]`, `tl[:ω]`, `naive`.
impl fmt::Display for FingeringModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tfe => write!(f, "tfe"),
            Self::GeneralizedKoval(FluxFactor::Koval { alpha }) => write!(f, "koval:{alpha}"),
            Self::GeneralizedKoval(FluxFactor::ToddLongstaff { omega }) => write!(f, "tl:{omega}"),
            Self::GeneralizedKoval(FluxFactor::NaiveKoval) => write!(f, "naive"),
            Self::GeneralizedKoval(FluxFactor::Custom(c)) => write!(f, "custom:{}", c.name),
        }
    }
}

/// Default `ω` when a `tl` model string omits it.
pub const PARSED_DEFAULT_TL_OMEGA: f64 = 0.6667;

fn parse_parameter(raw: &str) -> Result<f64> {
    let raw = raw.trim();
    let value = match raw.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{raw}`")))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{raw}`")))?;
            num / den
        }
        None => raw
            .parse()
            .map_err(|_| Error::Parse(format!("bad number `{raw}`")))?,
    };
    Ok(value)
}

impl FromStr for FingeringModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(parse_parameter(p)?)),
            None => (s, None),
        };
        match (name.to_ascii_lowercase().as_str(), param) {
            ("tfe", None) => Ok(Self::Tfe),
            ("naive", None) => Ok(Self::naive_koval()),
            ("koval", p) => Self::koval(p.unwrap_or(FluxFactor::DEFAULT_KOVAL_ALPHA)),
            ("tl", p) => Self::todd_longstaff(p.unwrap_or(PARSED_DEFAULT_TL_OMEGA)),
            _ => Err(Error::Parse(format!(
                "unknown model `{s}` (expected tfe, koval[:α], tl[:ω] or naive)"
            ))),
        }
    }
}

impl TryFrom<String> for FingeringModel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FingeringModel> for String {
    fn from(m: FingeringModel) -> Self {
        m.to_string()
    }
}
