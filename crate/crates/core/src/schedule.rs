//! Slug configurations and the no-breakthrough schedule.
//!
//! Time is measured in pore volumes (unit length, unit injection rate), so
//! `T_{n+1} = 1` is the moment the first slug reaches the producer. Zone `j`
//! sits between slugs `c_j` and `c_{j+1}`; its leading edge must not catch the
//! trailing edge of zone `j − 1` before `T = 1`:
//!
//! ```text
//! v_j^b (1 − T_j) ≥ v_{j+1}^f (1 − T_{j+1}),   j = 0..n−1,  v_0^b = 1, T_0 = 0
//! ```
//!
//! With equalities this telescopes to `T_j = 1 − Π_{k≤j} v_{k−1}^b / v_k^f`.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluid::{FingeringModel, FluxFactor, ViscosityModel};

/// Absolute tolerance on no-breakthrough residuals.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// Leading (`front`) and trailing (`back`) edge speeds of one mixing zone,
/// relative to the injection velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeVelocities {
    pub front: f64,
    pub back: f64,
}

/// Edge speeds of the mixing zone where the slug at `c_lo` displaces the slug
/// at `c_hi`.
///
/// * TFE: `v_f = m̄/m(c_hi)`, `v_b = m̄/m(c_lo)`, with `m̄` the interval mean.
/// * Generalized Koval: `x = m(c_lo)/m(c_hi)`, `v_f = 1/f(x)`, `v_b = f(x)`.
pub fn edge_velocities(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    c_hi: f64,
    c_lo: f64,
) -> Result<EdgeVelocities> {
    model.viscosity(c_hi)?;
    model.viscosity(c_lo)?;
    if !(c_lo < c_hi) {
        return Err(Error::Ordering(format!(
            "zone needs c_lo < c_hi, got c_lo = {c_lo}, c_hi = {c_hi}"
        )));
    }
    Ok(zone_unchecked(fingering, model, c_hi, c_lo))
}

fn zone_unchecked(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    c_hi: f64,
    c_lo: f64,
) -> EdgeVelocities {
    match fingering {
        FingeringModel::Tfe => EdgeVelocities {
            front: model.relative_mean_mobility(c_lo, c_hi, c_hi),
            back: model.relative_mean_mobility(c_lo, c_hi, c_lo),
        },
        FingeringModel::GeneralizedKoval(f) => {
            let fx = f.eval(model.mobility_ratio(c_lo, c_hi));
            EdgeVelocities {
                front: 1.0 / fx,
                back: fx,
            }
        }
    }
}

/// Checks that `c` is a strictly decreasing partition inside the model's range.
pub fn validate_partition(model: &ViscosityModel, c: &[f64]) -> Result<()> {
    if c.len() < 2 {
        return Err(Error::Domain(format!(
            "a partition needs at least two concentrations, got {}",
            c.len()
        )));
    }
    for &ci in c {
        model.viscosity(ci)?;
    }
    if let Some(j) = c.windows(2).position(|w| !(w[1] < w[0])) {
        return Err(Error::Ordering(format!(
            "concentrations must be strictly decreasing: c[{}] = {} ≤ c[{}] = {}",
            j,
            c[j],
            j + 1,
            c[j + 1]
        )));
    }
    Ok(())
}

/// Edge speeds for every zone of the partition `c` (length `n`).
pub fn zone_velocities(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    c: &[f64],
) -> Result<Vec<EdgeVelocities>> {
    validate_partition(model, c)?;
    Ok(c.windows(2)
        .map(|w| zone_unchecked(fingering, model, w[0], w[1]))
        .collect())
}

/// Switch times from the general product `T_j = 1 − Π v_{k−1}^b / v_k^f`,
/// followed by `T_{n+1} = 1`.
pub fn times_from_velocities(velocities: &[EdgeVelocities]) -> Vec<f64> {
    let mut times = Vec::with_capacity(velocities.len() + 1);
    let mut product = 1.0;
    let mut back = 1.0;
    for v in velocities {
        product *= back / v.front;
        times.push(1.0 - product);
        back = v.back;
    }
    times.push(1.0);
    times
}

/// General product form, evaluated zone by zone.
pub fn breakthrough_times_product(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    c: &[f64],
) -> Result<Vec<f64>> {
    Ok(times_from_velocities(&zone_velocities(
        fingering, model, c,
    )?))
}

/// Telescoped TFE form `T_j = 1 − m(c_1)/m̄(c_j, c_{j+1})`.
pub fn tfe_times(model: &ViscosityModel, c: &[f64]) -> Result<Vec<f64>> {
    validate_partition(model, c)?;
    let mut out = Vec::with_capacity(c.len());
    tfe_times_into(model, c, &mut out);
    Ok(out)
}

fn tfe_times_into(model: &ViscosityModel, c: &[f64], out: &mut Vec<f64>) {
    out.clear();
    let c1 = c[0];
    out.extend(
        c.windows(2)
            .map(|w| 1.0 - 1.0 / model.relative_mean_mobility(w[1], w[0], c1)),
    );
    out.push(1.0);
}

/// Product form for flux-factor models,
/// `T_j = 1 − f(x_j)·Π_{i<j} f(x_i)²`, `x_i = m(c_{i+1})/m(c_i)`.
pub fn koval_times(f: &FluxFactor, model: &ViscosityModel, c: &[f64]) -> Result<Vec<f64>> {
    validate_partition(model, c)?;
    let mut out = Vec::with_capacity(c.len());
    koval_times_into(f, model, c, &mut out);
    Ok(out)
}

fn koval_times_into(f: &FluxFactor, model: &ViscosityModel, c: &[f64], out: &mut Vec<f64>) {
    out.clear();
    let mut g = 1.0;
    for w in c.windows(2) {
        let fx = f.eval(model.mobility_ratio(w[1], w[0]));
        out.push(1.0 - fx * g);
        g *= fx * fx;
    }
    out.push(1.0);
}

/// Switch times that make every no-breakthrough constraint tight.
///
/// Uses the closed form of the model family; the general product form in
/// [`breakthrough_times_product`] agrees to rounding.
pub fn breakthrough_times(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    c: &[f64],
) -> Result<Vec<f64>> {
    validate_partition(model, c)?;
    let mut out = Vec::with_capacity(c.len());
    times_into(fingering, model, c, &mut out);
    Ok(out)
}

/// Unchecked closed-form times, written into `out`.
pub(crate) fn times_into(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    c: &[f64],
    out: &mut Vec<f64>,
) {
    match fingering {
        FingeringModel::Tfe => tfe_times_into(model, c, out),
        FingeringModel::GeneralizedKoval(f) => koval_times_into(f, model, c, out),
    }
}

/// Polymer volume `Σ_{j≤n} (c_j − c_{j+1}) T_j + c_{n+1} T_{n+1}`.
pub fn volume(c: &[f64], times: &[f64]) -> Result<f64> {
    if c.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: c.len(),
            found: times.len(),
        });
    }
    if c.is_empty() {
        return Err(Error::Domain("empty configuration".into()));
    }
    Ok(volume_unchecked(c, times))
}

pub(crate) fn volume_unchecked(c: &[f64], times: &[f64]) -> f64 {
    let n = c.len() - 1;
    let steps: f64 = (0..n).map(|j| (c[j] - c[j + 1]) * times[j]).sum();
    steps + c[n] * times[n]
}

/// `η = (V₁ − V_n)/V₁`.
pub fn gain(v_one: f64, v_n: f64) -> Result<f64> {
    if !(v_one > 0.0) {
        return Err(Error::DegenerateBaseline(v_one));
    }
    Ok((v_one - v_n) / v_one)
}

/// Rank of a partition: the widest concentration gap.
pub fn rank(c: &[f64]) -> f64 {
    c.windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .fold(0.0, f64::max)
}

/// An `n`-slug schedule: `n + 1` strictly decreasing concentrations and the
/// times `T_j` at which injection switches from `c_j` to `c_{j+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlugConfiguration {
    concentrations: Vec<f64>,
    switch_times: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfiguration {
    concentrations: Vec<f64>,
    switch_times: Vec<f64>,
}

impl<'de> Deserialize<'de> for SlugConfiguration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawConfiguration::deserialize(d)?;
        Self::new(raw.concentrations, raw.switch_times).map_err(serde::de::Error::custom)
    }
}

impl SlugConfiguration {
    pub fn new(concentrations: Vec<f64>, switch_times: Vec<f64>) -> Result<Self> {
        if concentrations.len() < 2 {
            return Err(Error::Domain(
                "a configuration needs at least one slug".into(),
            ));
        }
        if concentrations.len() != switch_times.len() {
            return Err(Error::DimensionMismatch {
                expected: concentrations.len(),
                found: switch_times.len(),
            });
        }
        if concentrations
            .iter()
            .chain(&switch_times)
            .any(|v| !v.is_finite())
        {
            return Err(Error::Validation(
                "configuration entries must be finite".into(),
            ));
        }
        if concentrations.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Ordering(
                "concentrations must be strictly decreasing".into(),
            ));
        }
        if *switch_times.last().unwrap() != 1.0 {
            return Err(Error::Validation(
                "the last switch time must equal 1".into(),
            ));
        }
        if switch_times[0] < 0.0 || switch_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Validation(
                "switch times must be non-decreasing and lie in [0, 1]".into(),
            ));
        }
        Ok(Self {
            concentrations,
            switch_times,
        })
    }

    /// Partition `c` (endpoints must be the model's `c_max`, `c_min`) with the
    /// tight no-breakthrough times.
    pub fn with_breakthrough_times(
        fingering: &FingeringModel,
        model: &ViscosityModel,
        c: Vec<f64>,
    ) -> Result<Self> {
        validate_partition(model, &c)?;
        if c[0] != model.c_max() || *c.last().unwrap() != model.c_min() {
            return Err(Error::Domain(format!(
                "partition must run from c_max = {} down to c_min = {}",
                model.c_max(),
                model.c_min()
            )));
        }
        let times = breakthrough_times(fingering, model, &c)?;
        Ok(Self {
            concentrations: c,
            switch_times: times,
        })
    }

    /// Number of slugs `n` (the final chase slug is not counted).
    pub fn slug_count(&self) -> usize {
        self.concentrations.len() - 1
    }

    pub fn concentrations(&self) -> &[f64] {
        &self.concentrations
    }

    pub fn switch_times(&self) -> &[f64] {
        &self.switch_times
    }

    /// Slug durations `t_j = T_j − T_{j−1}`, `T_0 = 0`.
    pub fn durations(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.switch_times
            .iter()
            .map(|&t| {
                let d = t - prev;
                prev = t;
                d
            })
            .collect()
    }

    pub fn rank(&self) -> f64 {
        rank(&self.concentrations)
    }

    pub fn volume(&self) -> f64 {
        volume_unchecked(&self.concentrations, &self.switch_times)
    }

    /// `Σ c_k t_k`.
    pub fn volume_from_durations(&self) -> f64 {
        self.concentrations
            .iter()
            .zip(self.durations())
            .map(|(c, t)| c * t)
            .sum()
    }

    pub fn profile(&self) -> InjectionProfile {
        profile_of(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }
}

/// Per-constraint residuals `v_j^b(1 − T_j) − v_{j+1}^f(1 − T_{j+1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub residuals: Vec<f64>,
    /// Every residual ≥ −tolerance.
    pub feasible: bool,
    /// Every residual within ±tolerance (all constraints active).
    pub tight: bool,
}

impl FeasibilityReport {
    /// First violated constraint index, if any.
    pub fn first_violation(&self) -> Option<usize> {
        self.residuals.iter().position(|&r| r < -FEASIBILITY_TOL)
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Evaluates the no-breakthrough inequalities of `config` under the zone
/// speeds `velocities` (one per zone).
pub fn check_no_breakthrough(
    config: &SlugConfiguration,
    velocities: &[EdgeVelocities],
) -> Result<FeasibilityReport> {
    let n = config.slug_count();
    if velocities.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: velocities.len(),
        });
    }
    let t = config.switch_times();
    let residuals: Vec<f64> = (0..n)
        .map(|j| {
            let (back, remaining) = if j == 0 {
                (1.0, 1.0)
            } else {
                (velocities[j - 1].back, 1.0 - t[j - 1])
            };
            back * remaining - velocities[j].front * (1.0 - t[j])
        })
        .collect();
    let feasible = residuals.iter().all(|&r| r >= -FEASIBILITY_TOL);
    let tight = residuals.iter().all(|&r| r.abs() < FEASIBILITY_TOL);
    Ok(FeasibilityReport {
        residuals,
        feasible,
        tight,
    })
}

/// A curve `c ↦ T(c)` over `[c_min, c_max]`.
pub trait ProfileCurve {
    fn eval(&self, c: f64) -> f64;
    fn domain(&self) -> (f64, f64);
}

/// Step injection profile: `T(c) = T_j` on the slab `[c_{j+1}, c_j)`, with
/// `T(c_max) = T_1`. Below `c_min` the profile is 1 (chase fluid) and above
/// `c_max` it is 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectionProfile {
    /// Breakpoints `c_1 > … > c_{n+1}`.
    breakpoints: Vec<f64>,
    /// Plateau `T_j` for slab `j`, `j = 1..n`.
    plateaus: Vec<f64>,
}

impl InjectionProfile {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn plateaus(&self) -> &[f64] {
        &self.plateaus
    }

    /// `(lower, upper, T_j)` for every slab.
    pub fn slabs(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.plateaus)
            .map(|(w, &t)| (w[1], w[0], t))
    }

    /// `∫_0^{c_max} T(c) dc`, summed slab by slab.
    pub fn integral(&self) -> f64 {
        let c_min = *self.breakpoints.last().unwrap();
        self.slabs().map(|(lo, hi, t)| (hi - lo) * t).sum::<f64>() + c_min
    }
}

impl ProfileCurve for InjectionProfile {
    fn eval(&self, c: f64) -> f64 {
        let c_max = self.breakpoints[0];
        let c_min = *self.breakpoints.last().unwrap();
        if c > c_max {
            return 0.0;
        }
        if c < c_min {
            return 1.0;
        }
        if c == c_max {
            return self.plateaus[0];
        }
        // First breakpoint ≤ c closes slab j = idx − 1 from below.
        let idx = self.breakpoints.partition_point(|&b| b > c);
        self.plateaus[(idx - 1).min(self.plateaus.len() - 1)]
    }

    fn domain(&self) -> (f64, f64) {
        (*self.breakpoints.last().unwrap(), self.breakpoints[0])
    }
}

pub fn profile_of(config: &SlugConfiguration) -> InjectionProfile {
    let n = config.slug_count();
    InjectionProfile {
        breakpoints: config.concentrations().to_vec(),
        plateaus: config.switch_times()[..n].to_vec(),
    }
}

/// Writes the breakpoints of a step profile as CSV (`c,T`), two rows per slab.
pub fn write_profile_csv<W: Write>(profile: &InjectionProfile, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["c", "T"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for (lo, hi, t) in profile.slabs() {
        for c in [hi, lo] {
            w.write_record([c.to_string(), t.to_string()])
                .map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn save_profile_csv(profile: &InjectionProfile, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path.as_ref())?;
    write_profile_csv(profile, file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn linear() -> ViscosityModel {
        ViscosityModel::linear(1.0, 9.0).unwrap()
    }

    const LN10_OVER_9: f64 = 0.255_842_788_110_341_1; // ln(10)/9

    #[test]
    fn tfe_edge_velocities_single_zone() {
        let v = edge_velocities(&FingeringModel::Tfe, &linear(), 1.0, 0.0).unwrap();
        assert_relative_eq!(v.front, LN10_OVER_9 / 0.1, max_relative = 1e-12);
        assert_relative_eq!(v.back, LN10_OVER_9, max_relative = 1e-12);
        assert_relative_eq!(v.front, 2.558428, epsilon = 1e-6);
    }

    #[test]
    fn naive_koval_edge_velocities_single_zone() {
        let v = edge_velocities(&FingeringModel::naive_koval(), &linear(), 1.0, 0.0).unwrap();
        assert_relative_eq!(v.front, 10.0, max_relative = 1e-14);
        assert_relative_eq!(v.back, 0.1, max_relative = 1e-14);
    }

    #[test]
    fn edge_velocities_approach_one_for_close_concentrations() {
        for fm in [FingeringModel::Tfe, FingeringModel::koval(0.22).unwrap()] {
            let v = edge_velocities(&fm, &linear(), 0.5, 0.5 - 1e-9).unwrap();
            assert!((v.front - 1.0).abs() < 1e-7 && (v.back - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn edge_velocities_reject_bad_ordering() {
        let err = edge_velocities(&FingeringModel::Tfe, &linear(), 0.2, 0.4).unwrap_err();
        assert!(matches!(err, Error::Ordering(_)));
        assert!(matches!(
            edge_velocities(&FingeringModel::Tfe, &linear(), 0.2, 0.2),
            Err(Error::Ordering(_))
        ));
    }

    #[test]
    fn single_slug_times() {
        let t = breakthrough_times(&FingeringModel::Tfe, &linear(), &[1.0, 0.0]).unwrap();
        assert_relative_eq!(t[0], 1.0 - 0.1 / LN10_OVER_9, max_relative = 1e-12);
        assert_relative_eq!(t[0], 0.6091350, epsilon = 1e-7);
        assert_eq!(t[1], 1.0);
        let t = breakthrough_times(&FingeringModel::naive_koval(), &linear(), &[1.0, 0.0]).unwrap();
        assert_relative_eq!(t[0], 0.9, max_relative = 1e-14);
    }

    #[test]
    fn first_time_vanishes_for_a_thin_first_slab() {
        let t = breakthrough_times(
            &FingeringModel::Tfe,
            &linear(),
            &[1.0, 1.0 - 1e-10, 0.5, 0.0],
        )
        .unwrap();
        assert!(t[0].abs() < 1e-9);
    }

    #[test]
    fn non_monotone_partition_is_rejected() {
        let err =
            breakthrough_times(&FingeringModel::Tfe, &linear(), &[1.0, 0.2, 0.4, 0.0]).unwrap_err();
        assert!(matches!(err, Error::Ordering(_)));
    }

    #[test]
    fn tight_schedule_has_zero_residuals() {
        let fm = FingeringModel::koval(0.22).unwrap();
        let c = vec![1.0, 0.7, 0.3, 0.1, 0.0];
        let cfg = SlugConfiguration::with_breakthrough_times(&fm, &linear(), c.clone()).unwrap();
        let vel = zone_velocities(&fm, &linear(), &c).unwrap();
        let report = check_no_breakthrough(&cfg, &vel).unwrap();
        assert!(report.tight && report.feasible);
        assert!(report.max_abs_residual() < 1e-10);
    }

    #[test]
    fn perturbed_first_switch_breaks_a_constraint() {
        let fm = FingeringModel::Tfe;
        let c = vec![1.0, 0.5, 0.0];
        let cfg = SlugConfiguration::with_breakthrough_times(&fm, &linear(), c.clone()).unwrap();
        let vel = zone_velocities(&fm, &linear(), &c).unwrap();
        let t = cfg.switch_times().to_vec();

        // Switching earlier lets zone 1 catch the slug front.
        let early = SlugConfiguration::new(c.clone(), vec![t[0] - 0.01, t[1], 1.0]).unwrap();
        let r = check_no_breakthrough(&early, &vel).unwrap();
        assert_eq!(r.first_violation(), Some(0));
        assert_relative_eq!(r.residuals[0], -0.01 * vel[0].front, max_relative = 1e-9);

        // Switching later starves the second slug: zone 2 catches zone 1.
        let late = SlugConfiguration::new(c, vec![t[0] + 0.01, t[1], 1.0]).unwrap();
        let r = check_no_breakthrough(&late, &vel).unwrap();
        assert!(r.residuals[0] > 0.0);
        assert_eq!(r.first_violation(), Some(1));
    }

    #[test]
    fn single_slug_constraint_is_tight_at_closed_form() {
        for fm in [
            FingeringModel::Tfe,
            FingeringModel::naive_koval(),
            FingeringModel::koval(0.22).unwrap(),
        ] {
            let vel = zone_velocities(&fm, &linear(), &[1.0, 0.0]).unwrap();
            let cfg = SlugConfiguration::new(vec![1.0, 0.0], vec![1.0 - 1.0 / vel[0].front, 1.0])
                .unwrap();
            let r = check_no_breakthrough(&cfg, &vel).unwrap();
            assert!(r.tight);
            assert_relative_eq!(cfg.volume(), 1.0 - 1.0 / vel[0].front, max_relative = 1e-15);
        }
    }

    #[test]
    fn volume_examples() {
        let v = volume(&[1.0, 0.0], &[0.609136, 1.0]).unwrap();
        assert_relative_eq!(v, 0.609136, max_relative = 1e-15);
        let t = breakthrough_times(&FingeringModel::naive_koval(), &linear(), &[1.0, 0.0]).unwrap();
        assert_relative_eq!(volume(&[1.0, 0.0], &t).unwrap(), 0.9, max_relative = 1e-14);
        assert_eq!(volume(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!(matches!(
            volume(&[1.0, 0.0], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn chase_fluid_with_polymer_counts_toward_volume() {
        let model = ViscosityModel::new(
            crate::fluid::ViscosityKind::Linear {
                mu0: 1.0,
                slope: 9.0,
            },
            0.1,
            1.0,
        )
        .unwrap();
        let cfg = SlugConfiguration::with_breakthrough_times(
            &FingeringModel::Tfe,
            &model,
            vec![1.0, 0.4, 0.1],
        )
        .unwrap();
        let t = cfg.switch_times();
        let expected = 0.6 * t[0] + 0.3 * t[1] + 0.1;
        assert_relative_eq!(cfg.volume(), expected, max_relative = 1e-15);
        assert_relative_eq!(cfg.volume_from_durations(), expected, max_relative = 1e-12);
        assert_relative_eq!(cfg.profile().integral(), expected, max_relative = 1e-12);
    }

    #[test]
    fn gain_examples() {
        assert_relative_eq!(gain(0.609136, 0.45).unwrap(), 0.2612, epsilon = 1e-4);
        assert_eq!(gain(0.7, 0.7).unwrap(), 0.0);
        assert_relative_eq!(gain(0.9, 0.63).unwrap(), 0.30, epsilon = 1e-12);
        assert_eq!(gain(0.0, 0.1), Err(Error::DegenerateBaseline(0.0)));
    }

    #[test]
    fn single_plateau_profile() {
        let cfg = SlugConfiguration::new(vec![1.0, 0.0], vec![0.6, 1.0]).unwrap();
        let p = profile_of(&cfg);
        for c in [0.0, 0.25, 0.5, 0.999, 1.0] {
            assert_eq!(p.eval(c), 0.6);
        }
        assert_relative_eq!(p.integral(), 0.6, max_relative = 1e-15);
    }

    #[test]
    fn profile_boundaries_take_the_lower_index_plateau() {
        let cfg =
            SlugConfiguration::new(vec![1.0, 0.6, 0.2, 0.0], vec![0.3, 0.5, 0.8, 1.0]).unwrap();
        let p = cfg.profile();
        assert_eq!(p.eval(1.0), 0.3);
        assert_eq!(p.eval(0.6), 0.3);
        assert_eq!(p.eval(0.59), 0.5);
        assert_eq!(p.eval(0.2), 0.5);
        assert_eq!(p.eval(0.1), 0.8);
        assert_eq!(p.eval(0.0), 0.8);
        assert_eq!(p.eval(-0.1), 1.0);
        assert_eq!(p.eval(1.1), 0.0);
    }

    #[test]
    fn configuration_rejects_bad_inputs() {
        assert!(SlugConfiguration::new(vec![1.0, 0.0], vec![0.5, 0.9]).is_err());
        assert!(SlugConfiguration::new(vec![0.0, 1.0], vec![0.5, 1.0]).is_err());
        assert!(SlugConfiguration::new(vec![1.0, 0.5, 0.0], vec![0.6, 0.5, 1.0]).is_err());
        assert!(SlugConfiguration::new(vec![1.0, 0.0], vec![-0.1, 1.0]).is_err());
        let err = SlugConfiguration::with_breakthrough_times(
            &FingeringModel::Tfe,
            &linear(),
            vec![0.9, 0.0],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn configuration_json_shape() {
        let cfg = SlugConfiguration::new(vec![1.0, 0.5, 0.0], vec![0.4, 0.7, 1.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(v["concentrations"], serde_json::json!([1.0, 0.5, 0.0]));
        assert_eq!(v["switch_times"], serde_json::json!([0.4, 0.7, 1.0]));
        let back: SlugConfiguration = serde_json::from_value(v).unwrap();
        assert_eq!(back, cfg);
        let bad = serde_json::json!({"concentrations": [0.0, 1.0], "switch_times": [0.5, 1.0]});
        assert!(serde_json::from_value::<SlugConfiguration>(bad).is_err());
    }

    #[test]
    fn profile_csv_lists_slab_edges() {
        let cfg = SlugConfiguration::new(vec![1.0, 0.5, 0.0], vec![0.4, 0.7, 1.0]).unwrap();
        let mut buf = Vec::new();
        write_profile_csv(&cfg.profile(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "c,T\n1,0.4\n0.5,0.4\n0.5,0.7\n0,0.7\n");
    }
}
