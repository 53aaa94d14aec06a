//! Volume-optimal slug partitions and the limiting injection profile.
//!
//! With tight no-breakthrough constraints the switch times are a function of
//! the concentration partition alone, so the polymer volume `V(c)` is
//! minimized over the `n − 1` interior concentrations. Interior points are
//! parameterized by softmax-normalized positive increments, which keeps every
//! candidate strictly decreasing with pinned endpoints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluid::{FingeringModel, ViscosityModel};
use crate::quadrature;
use crate::schedule::{self, EdgeVelocities, ProfileCurve, SlugConfiguration};
use crate::simplex::{self, SimplexOptions};

/// Relative tolerance for the limiting-volume quadrature.
const LIMIT_QUAD_TOL: f64 = 1e-12;
/// Tolerance (in concentration) of the golden-section insertion search.
const INSERTION_TOL: f64 = 1e-10;
/// Simplex runs per start; `max_iterations` bounds each run.
const MAX_RESTARTS: usize = 16;
/// Points of the grid on which profile distances are measured.
pub const PROFILE_GRID: usize = 10_000;

/// Tuning of [`optimize`] and [`brute_force`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerOptions {
    pub multi_starts: usize,
    /// Iteration budget of each simplex run (a start restarts a few times).
    pub max_iterations: usize,
    pub volume_tolerance: f64,
    /// Initial simplex scale in concentration units; `None` means
    /// `0.05·(c_max − c_min)`.
    pub initial_scale: Option<f64>,
    pub rng_seed: u64,
    pub oracle_grid_step: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            multi_starts: 8,
            max_iterations: 10_000,
            volume_tolerance: 1e-11,
            initial_scale: None,
            rng_seed: 20_211_117,
            oracle_grid_step: 1e-3,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self) -> Result<()> {
        if self.multi_starts == 0 || self.max_iterations == 0 {
            return Err(Error::Validation(
                "multi_starts and max_iterations must be positive".into(),
            ));
        }
        if !(self.volume_tolerance > 0.0 && self.volume_tolerance < 1e-6) {
            return Err(Error::Validation(format!(
                "volume_tolerance must lie in (0, 1e-6), got {}",
                self.volume_tolerance
            )));
        }
        if let Some(s) = self.initial_scale {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Validation(format!(
                    "initial_scale must be positive, got {s}"
                )));
            }
        }
        if !(self.oracle_grid_step > 0.0 && self.oracle_grid_step.is_finite()) {
            return Err(Error::Validation(format!(
                "oracle_grid_step must be positive, got {}",
                self.oracle_grid_step
            )));
        }
        Ok(())
    }
}

/// Best configuration found for a given slug count.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub configuration: SlugConfiguration,
    pub volume: f64,
    /// Volume of the optimal single slug, the gain baseline.
    pub single_slug_volume: f64,
    pub gain: f64,
    pub rank: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Starts whose volume is within `10·volume_tolerance` of the best.
    pub starts_agreeing: usize,
}

#[derive(Serialize)]
struct ResultRecord<'a> {
    n: usize,
    concentrations: &'a [f64],
    switch_times: &'a [f64],
    volume: f64,
    gain: f64,
    rank: f64,
    converged: bool,
}

impl OptimizationResult {
    pub fn slug_count(&self) -> usize {
        self.configuration.slug_count()
    }

    pub fn to_json(&self) -> String {
        let record = ResultRecord {
            n: self.slug_count(),
            concentrations: self.configuration.concentrations(),
            switch_times: self.configuration.switch_times(),
            volume: self.volume,
            gain: self.gain,
            rank: self.rank,
            converged: self.converged,
        };
        serde_json::to_string_pretty(&record).expect("result serializes")
    }
}

/// Edge speeds of the single zone between `c_max` and `c_min`.
fn single_zone(fingering: &FingeringModel, model: &ViscosityModel) -> EdgeVelocities {
    schedule::edge_velocities(fingering, model, model.c_max(), model.c_min())
        .expect("model range is a valid zone")
}

/// Optimal 1-configuration `(c_max, c_min)` with `T_1 = 1 − 1/v_1^f`.
pub fn single_slug(fingering: &FingeringModel, model: &ViscosityModel) -> SlugConfiguration {
    let t1 = 1.0 - 1.0 / single_zone(fingering, model).front;
    SlugConfiguration::new(vec![model.c_max(), model.c_min()], vec![t1, 1.0])
        .expect("single slug is valid")
}

/// `V_1`; equals `1 − 1/v_1^f` on `[0, 1]`.
pub fn single_slug_volume(fingering: &FingeringModel, model: &ViscosityModel) -> f64 {
    single_slug(fingering, model).volume()
}

/// Reduced objective `z ↦ V(c(z))`.
struct Objective<'a> {
    fingering: &'a FingeringModel,
    model: &'a ViscosityModel,
    slugs: usize,
}

impl Objective<'_> {
    /// Maps `n − 1` free log-increments (the last one is pinned to 0) to a
    /// partition. Returns `false` if rounding collapsed a slab.
    fn partition(&self, z: &[f64], out: &mut Vec<f64>) -> bool {
        let (c_max, c_min) = (self.model.c_max(), self.model.c_min());
        let range = c_max - c_min;
        let z_max = z.iter().copied().fold(0.0, f64::max);
        let total: f64 = z.iter().map(|v| (v - z_max).exp()).sum::<f64>() + (-z_max).exp();
        out.clear();
        out.push(c_max);
        let mut acc = 0.0;
        for v in z {
            acc += (v - z_max).exp() / total;
            let c = c_max - range * acc;
            if !(c < *out.last().unwrap() && c > c_min) {
                return false;
            }
            out.push(c);
        }
        out.push(c_min);
        true
    }

    fn volume(&self, z: &[f64], c: &mut Vec<f64>, t: &mut Vec<f64>) -> f64 {
        if !self.partition(z, c) {
            return f64::INFINITY;
        }
        schedule::times_into(self.fingering, self.model, c, t);
        schedule::volume_unchecked(c, t)
    }

    fn eval(&self, z: &[f64]) -> f64 {
        let mut c = Vec::with_capacity(self.slugs + 1);
        let mut t = Vec::with_capacity(self.slugs + 1);
        self.volume(z, &mut c, &mut t)
    }

    fn encode(&self, c: &[f64]) -> Vec<f64> {
        let last = (c[self.slugs - 1] - c[self.slugs]).ln();
        c.windows(2)
            .take(self.slugs - 1)
            .map(|w| (w[0] - w[1]).ln() - last)
            .collect()
    }
}

/// Uniform partition of `[c_min, c_max]` into `n` slabs.
pub fn uniform_partition(model: &ViscosityModel, n: usize) -> Vec<f64> {
    let (c_max, c_min) = (model.c_max(), model.c_min());
    (0..=n)
        .map(|j| match j {
            0 => c_max,
            j if j == n => c_min,
            j => c_max - (c_max - c_min) * j as f64 / n as f64,
        })
        .collect()
}

/// Partition whose mobilities form a geometric sequence from `m(c_max)` to `m(c_min)`.
pub fn mobility_geometric_partition(model: &ViscosityModel, n: usize) -> Vec<f64> {
    let (c_max, c_min) = (model.c_max(), model.c_min());
    let (log_hi, log_lo) = (model.mu(c_max).ln(), model.mu(c_min).ln());
    let mut c = vec![c_max];
    for j in 1..n {
        let target = log_hi + (log_lo - log_hi) * j as f64 / n as f64;
        let (mut lo, mut hi) = (c_min, *c.last().unwrap());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if model.mu(mid).ln() < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
                break;
            }
        }
        c.push(0.5 * (lo + hi));
    }
    c.push(c_min);
    c
}

struct StartOutcome {
    partition: Vec<f64>,
    volume: f64,
    iterations: usize,
}

fn run_start(
    objective: &Objective<'_>,
    seed: Vec<f64>,
    opts: &OptimizerOptions,
    base_step: f64,
) -> StartOutcome {
    let f = |z: &[f64]| objective.eval(z);
    let mut z = seed;
    let mut best = f(&z);
    let mut iterations = 0usize;
    let mut step = base_step;
    for _ in 0..MAX_RESTARTS {
        let simplex_opts = SimplexOptions {
            initial_step: step,
            f_tol: 0.01 * opts.volume_tolerance,
            x_tol: 1e-9,
            max_iterations: opts.max_iterations,
        };
        let r = simplex::minimize(f, &z, &simplex_opts);
        iterations += r.iterations;
        let improvement = best - r.value;
        if r.value < best {
            best = r.value;
            z = r.x;
        }
        // Restart around the incumbent until a fresh simplex stops paying off.
        if r.converged && improvement <= opts.volume_tolerance {
            break;
        }
        if r.converged {
            step = (0.25 * step).max(1e-3);
        }
    }
    let mut partition = Vec::new();
    objective.partition(&z, &mut partition);
    StartOutcome {
        partition,
        volume: best,
        iterations,
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Assembles a result from a partition; times come from the tight constraints.
fn finish(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    partition: Vec<f64>,
    iterations: usize,
    converged: bool,
    starts_agreeing: usize,
) -> Result<OptimizationResult> {
    let configuration = SlugConfiguration::with_breakthrough_times(fingering, model, partition)?;
    let volume = configuration.volume();
    let single_slug_volume = single_slug_volume(fingering, model);
    Ok(OptimizationResult {
        rank: configuration.rank(),
        gain: schedule::gain(single_slug_volume, volume)?,
        configuration,
        volume,
        single_slug_volume,
        iterations,
        converged,
        starts_agreeing,
    })
}

/// Minimizes the polymer volume over `n`-slug partitions.
///
/// Starts from the uniform partition, the mobility-geometric partition and
/// seeded perturbations of the uniform one; each start runs a restarted
/// Nelder–Mead search. Starts run in parallel and are reduced by
/// `(volume, partition)` so the outcome does not depend on thread count.
pub fn optimize(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    n: usize,
    opts: &OptimizerOptions,
) -> Result<OptimizationResult> {
    if n == 0 {
        return Err(Error::Domain("slug count must be at least 1".into()));
    }
    opts.validate()?;
    if n == 1 {
        let cfg = single_slug(fingering, model);
        return finish(
            fingering,
            model,
            cfg.concentrations().to_vec(),
            0,
            true,
            opts.multi_starts,
        );
    }

    let objective = Objective {
        fingering,
        model,
        slugs: n,
    };
    let range = model.c_max() - model.c_min();
    let scale = opts.initial_scale.unwrap_or(0.05 * range);
    // A concentration step `scale` on an average slab of width range/n.
    let base_step = (scale * n as f64 / range).clamp(0.05, 1.0);

    let uniform = objective.encode(&uniform_partition(model, n));
    let mut seeds = vec![
        uniform.clone(),
        objective.encode(&mobility_geometric_partition(model, n)),
    ];
    for s in seeds.len()..opts.multi_starts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed.wrapping_add(s as u64));
        seeds.push(
            uniform
                .iter()
                .map(|v| v + rng.gen_range(-0.5..0.5))
                .collect(),
        );
    }
    seeds.truncate(opts.multi_starts);

    let mut outcomes: Vec<StartOutcome> = seeds
        .into_par_iter()
        .map(|seed| run_start(&objective, seed, opts, base_step))
        .collect();
    outcomes.sort_by(|a, b| {
        a.volume
            .total_cmp(&b.volume)
            .then_with(|| lexicographic(&a.partition, &b.partition))
    });

    let agree_tol = 10.0 * opts.volume_tolerance;
    let best_volume = outcomes[0].volume;
    let starts_agreeing = outcomes
        .iter()
        .filter(|o| o.volume - best_volume <= agree_tol)
        .count();
    let converged = outcomes.len() == 1 || outcomes[1].volume - best_volume <= agree_tol;
    let iterations = outcomes.iter().map(|o| o.iterations).sum();
    let best = outcomes.swap_remove(0);
    finish(
        fingering,
        model,
        best.partition,
        iterations,
        converged,
        starts_agreeing,
    )
}

/// Exhaustive search over interior concentrations on a uniform grid of step
/// `grid_step` (endpoints excluded). Supports `n ∈ {2, 3}`.
pub fn brute_force(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    n: usize,
    grid_step: f64,
) -> Result<OptimizationResult> {
    if !(2..=3).contains(&n) {
        return Err(Error::Domain(format!(
            "brute force supports n = 2 or 3, got {n}"
        )));
    }
    let (c_max, c_min) = (model.c_max(), model.c_min());
    let range = c_max - c_min;
    if !(grid_step > 0.0 && grid_step < range) {
        return Err(Error::Domain(format!(
            "grid step must lie in (0, {range}), got {grid_step}"
        )));
    }
    let cells = (range / grid_step).round() as usize;
    let interior: Vec<f64> = (1..cells)
        .map(|i| c_min + range * i as f64 / cells as f64)
        .collect();
    if interior.len() < n - 1 {
        return Err(Error::Domain(
            "grid too coarse for the requested slug count".into(),
        ));
    }

    let eval = |c: &[f64], t: &mut Vec<f64>| {
        schedule::times_into(fingering, model, c, t);
        schedule::volume_unchecked(c, t)
    };

    // Interior points are scanned from high to low concentration; the first
    // minimum in scan order wins ties.
    let (best_volume, best_partition, evaluations) = match n {
        2 => {
            let mut t = Vec::with_capacity(3);
            let mut best = (f64::INFINITY, Vec::new());
            for &c2 in interior.iter().rev() {
                let c = [c_max, c2, c_min];
                let v = eval(&c, &mut t);
                if v < best.0 {
                    best = (v, c.to_vec());
                }
            }
            (best.0, best.1, interior.len())
        }
        _ => {
            let rows: Vec<(f64, Vec<f64>, usize)> = (1..interior.len())
                .into_par_iter()
                .rev()
                .map(|i| {
                    let mut t = Vec::with_capacity(4);
                    let mut best = (f64::INFINITY, Vec::new(), 0);
                    for j in (0..i).rev() {
                        let c = [c_max, interior[i], interior[j], c_min];
                        let v = eval(&c, &mut t);
                        best.2 += 1;
                        if v < best.0 {
                            best.0 = v;
                            best.1 = c.to_vec();
                        }
                    }
                    best
                })
                .collect();
            let evaluations = rows.iter().map(|r| r.2).sum();
            let best = rows
                .into_iter()
                .fold((f64::INFINITY, Vec::new()), |acc, r| {
                    if r.0 < acc.0 {
                        (r.0, r.1)
                    } else {
                        acc
                    }
                });
            (best.0, best.1, evaluations)
        }
    };
    debug_assert!(best_volume.is_finite());
    finish(fingering, model, best_partition, evaluations, true, 1)
}

/// Exponent of the limiting profile: 1 for TFE, `−2 f′(1)` otherwise.
pub fn limiting_beta(fingering: &FingeringModel) -> Result<f64> {
    match fingering {
        FingeringModel::Tfe => Ok(1.0),
        FingeringModel::GeneralizedKoval(f) => Ok(-2.0 * f.flux_derivative_at_one()?),
    }
}

/// Limiting injection profile `T∞(c) = 1 − (μ(c)/μ(c_max))^β`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitingProfile {
    pub beta: f64,
    /// `m(c_max)`.
    pub reference_mobility: f64,
    /// `∫_{c_min}^{c_max} T∞ dc + c_min`.
    pub volume: f64,
    pub gain: f64,
    model: ViscosityModel,
}

impl LimitingProfile {
    pub fn model(&self) -> &ViscosityModel {
        &self.model
    }
}

impl ProfileCurve for LimitingProfile {
    fn eval(&self, c: f64) -> f64 {
        let c = c.clamp(self.model.c_min(), self.model.c_max());
        1.0 - self
            .model
            .mobility_ratio(self.model.c_max(), c)
            .powf(self.beta)
    }

    fn domain(&self) -> (f64, f64) {
        (self.model.c_min(), self.model.c_max())
    }
}

pub fn limiting_profile(
    fingering: &FingeringModel,
    model: &ViscosityModel,
) -> Result<LimitingProfile> {
    let beta = limiting_beta(fingering)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Validation(format!(
            "limiting exponent must be positive, got {beta}"
        )));
    }
    let (c_min, c_max) = (model.c_min(), model.c_max());
    let mu_ref = model.mu(c_max);
    let integral = quadrature::integrate(c_min, c_max, LIMIT_QUAD_TOL, |c| {
        1.0 - (model.mu(c) / mu_ref).powf(beta)
    });
    let volume = integral + c_min;
    let gain = schedule::gain(single_slug_volume(fingering, model), volume)?;
    Ok(LimitingProfile {
        beta,
        reference_mobility: model.mobility(c_max)?,
        volume,
        gain,
        model: model.clone(),
    })
}

/// Outcome of inserting one intermediate concentration.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub configuration: SlugConfiguration,
    /// Index (0-based) of the widened slab that was split.
    pub slab: usize,
    pub inserted: f64,
    pub volume_before: f64,
    pub volume_after: f64,
    /// `volume_after < volume_before`.
    pub improved: bool,
}

/// Volume after inserting `c_tilde` into slab `slab` of `c`; an insertion at
/// a slab endpoint leaves the partition unchanged.
pub fn insertion_volume(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    c: &[f64],
    slab: usize,
    c_tilde: f64,
) -> Result<f64> {
    schedule::validate_partition(model, c)?;
    if slab + 1 >= c.len() {
        return Err(Error::Domain(format!("slab {slab} out of range")));
    }
    let (hi, lo) = (c[slab], c[slab + 1]);
    if !(c_tilde >= lo && c_tilde <= hi) {
        return Err(Error::Domain(format!(
            "inserted concentration {c_tilde} outside [{lo}, {hi}]"
        )));
    }
    let mut refined = c.to_vec();
    if c_tilde > lo && c_tilde < hi {
        refined.insert(slab + 1, c_tilde);
    }
    let t = schedule::breakthrough_times(fingering, model, &refined)?;
    schedule::volume(&refined, &t)
}

/// Splits the widest slab of `config` at the volume-minimizing concentration
/// (golden-section search, ties in width go to the first slab).
pub fn refine_partition(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    config: &SlugConfiguration,
) -> Result<Refinement> {
    let c = config.concentrations();
    schedule::validate_partition(model, c)?;
    let volume_before = schedule::volume(c, &schedule::breakthrough_times(fingering, model, c)?)?;
    let slab = c
        .windows(2)
        .map(|w| w[0] - w[1])
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, d)| {
            if d > best.1 {
                (k, d)
            } else {
                best
            }
        })
        .0;
    let (lo, hi) = (c[slab + 1], c[slab]);
    let vol = |x: f64| insertion_volume(fingering, model, c, slab, x).unwrap_or(f64::INFINITY);
    let inserted = golden_section_min(vol, lo, hi, INSERTION_TOL);

    let mut refined = c.to_vec();
    refined.insert(slab + 1, inserted);
    let times = schedule::breakthrough_times(fingering, model, &refined)?;
    let configuration = SlugConfiguration::new(refined, times)?;
    let volume_after = configuration.volume();
    Ok(Refinement {
        configuration,
        slab,
        inserted,
        volume_before,
        volume_after,
        improved: volume_after < volume_before,
    })
}

/// Golden-section minimizer on the open interval `(lo, hi)`; returns the
/// midpoint of the final bracket.
fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Volumes of every 2-configuration obtained by inserting a grid point into
/// the single slab `(c_max, c_min)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InsertionScan {
    pub single_slug_volume: f64,
    /// `(c̃, V₂(c̃))` for interior grid points.
    pub samples: Vec<(f64, f64)>,
    pub best_concentration: f64,
    pub best_volume: f64,
}

impl InsertionScan {
    /// Whether some 2-configuration beats the single slug.
    pub fn improves(&self) -> bool {
        self.best_volume < self.single_slug_volume
    }
}

/// Scans `points` interior concentrations (uniformly spaced, endpoints excluded).
pub fn insertion_scan(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    points: usize,
) -> Result<InsertionScan> {
    if points == 0 {
        return Err(Error::Domain(
            "insertion scan needs at least one point".into(),
        ));
    }
    let single = single_slug(fingering, model);
    let c = single.concentrations();
    let (c_min, c_max) = (model.c_min(), model.c_max());
    let samples = (1..=points)
        .map(|i| {
            let x = c_min + (c_max - c_min) * i as f64 / (points + 1) as f64;
            insertion_volume(fingering, model, c, 0, x).map(|v| (x, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let &(best_concentration, best_volume) = samples
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one sample");
    Ok(InsertionScan {
        single_slug_volume: single.volume(),
        samples,
        best_concentration,
        best_volume,
    })
}

/// `sup_c |T_n(c) − T∞(c)|` over a uniform grid of [`PROFILE_GRID`] points.
pub fn sup_distance(a: &impl ProfileCurve, b: &impl ProfileCurve) -> f64 {
    let (lo, hi) = a.domain();
    (0..PROFILE_GRID)
        .map(|i| {
            let c = if i + 1 == PROFILE_GRID {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (PROFILE_GRID - 1) as f64
            };
            (a.eval(c) - b.eval(c)).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub n: usize,
    pub volume: f64,
    pub gain: f64,
    pub rank: f64,
    /// Sup-distance between the optimal step profile and the limiting profile.
    pub sup_distance: f64,
    pub converged: bool,
    pub result: OptimizationResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub limit: LimitingProfile,
    pub points: Vec<ConvergencePoint>,
}

impl ConvergenceStudy {
    pub fn rank_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].rank < w[0].rank)
    }

    pub fn distance_decreasing(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].sup_distance < w[0].sup_distance)
    }

    pub fn gain_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].gain > w[0].gain)
    }

    pub fn all_converged(&self) -> bool {
        self.points.iter().all(|p| p.converged)
    }
}

/// Optimizes every `n` in `slug_counts` and compares against the limit.
pub fn convergence_study(
    fingering: &FingeringModel,
    model: &ViscosityModel,
    slug_counts: &[usize],
    opts: &OptimizerOptions,
) -> Result<ConvergenceStudy> {
    if slug_counts.is_empty() || slug_counts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "slug counts must be non-empty and strictly increasing".into(),
        ));
    }
    let limit = limiting_profile(fingering, model)?;
    let points = slug_counts
        .iter()
        .map(|&n| {
            let result = optimize(fingering, model, n, opts)?;
            let sup_distance = sup_distance(&result.configuration.profile(), &limit);
            Ok(ConvergencePoint {
                n,
                volume: result.volume,
                gain: result.gain,
                rank: result.rank,
                sup_distance,
                converged: result.converged,
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceStudy { limit, points })
}
