//! Grid certification of the structural conditions on a flux factor and a
//! mobility curve:
//!
//! * (A) `f` and `m` are finite (continuous) on their domains,
//! * (B) `f(1) = 1`, `f > 0`, `f` decreasing on `[1, M]`,
//! * (C) `f(ab) ≤ f(a)f(b)` whenever `a, b, ab ∈ [1, M]`,
//! * (D) `c ↦ f(m(c′)/m(c))` is convex for `c ≥ c′`.
//!
//! Violations are reported as data; nothing here fails for a "bad" model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fluid::{FluxFactor, ViscosityModel};

/// A condition counts as satisfied when its worst violation is at most this.
pub const CONDITION_TOL: f64 = 1e-9;

/// Outcome of one condition over the test grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub satisfied: bool,
    /// Largest violation found (0 when none).
    pub worst_violation: f64,
    /// Grid coordinates of the worst violation; empty if none was found.
    pub witness: Vec<f64>,
}

impl ConditionCheck {
    fn new() -> Self {
        Self {
            satisfied: true,
            worst_violation: 0.0,
            witness: Vec::new(),
        }
    }

    fn record(&mut self, violation: f64, witness: &[f64]) {
        let violation = if violation.is_nan() {
            f64::INFINITY
        } else {
            violation
        };
        if violation > self.worst_violation {
            self.worst_violation = violation;
            self.witness = witness.to_vec();
        }
    }

    fn finish(mut self) -> Self {
        self.satisfied = self.worst_violation <= CONDITION_TOL;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub smoothness: ConditionCheck,
    pub monotone: ConditionCheck,
    pub submultiplicative: ConditionCheck,
    pub convex: ConditionCheck,
    /// `M = m(c_min)/m(c_max)`.
    pub max_ratio: f64,
}

impl ConditionReport {
    pub fn all_satisfied(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.satisfied)
    }

    /// Labeled checks in order (A)–(D).
    pub fn checks(&self) -> [(&'static str, &ConditionCheck); 4] {
        [
            ("A", &self.smoothness),
            ("B", &self.monotone),
            ("C", &self.submultiplicative),
            ("D", &self.convex),
        ]
    }
}

/// Checks (A)–(D) for `f` against `model` on grids with `grid_size` nodes per axis.
pub fn validate_conditions(
    f: &FluxFactor,
    model: &ViscosityModel,
    grid_size: usize,
) -> Result<ConditionReport> {
    if grid_size < 64 {
        return Err(Error::Domain(format!(
            "condition grid needs at least 64 points, got {grid_size}"
        )));
    }
    let big_m = model.max_mobility_ratio();
    let ratio_at = |i: usize| {
        if i == grid_size {
            big_m
        } else {
            1.0 + (big_m - 1.0) * i as f64 / grid_size as f64
        }
    };
    let conc_at = |i: usize| {
        if i == grid_size {
            model.c_max()
        } else {
            model.c_min() + (model.c_max() - model.c_min()) * i as f64 / grid_size as f64
        }
    };

    let mut smooth = ConditionCheck::new();
    for i in 0..=grid_size {
        let x = ratio_at(i);
        if !f.eval(x).is_finite() {
            smooth.record(f64::INFINITY, &[x]);
        }
        let c = conc_at(i);
        let mu = model.mu(c);
        if !(mu.is_finite() && mu > 0.0) {
            smooth.record(f64::INFINITY, &[c]);
        }
    }

    let mut monotone = ConditionCheck::new();
    monotone.record((f.eval(1.0) - 1.0).abs(), &[1.0]);
    let mut prev = f.eval(1.0);
    for i in 1..=grid_size {
        let x = ratio_at(i);
        let v = f.eval(x);
        monotone.record(-v, &[x]);
        monotone.record(v - prev, &[ratio_at(i - 1), x]);
        prev = v;
    }

    // Log-spaced axes so that every pair with ab ≤ M lands on the grid.
    let mut submult = ConditionCheck::new();
    let log_m = big_m.ln();
    for i in 0..=grid_size {
        let a = (log_m * i as f64 / grid_size as f64).exp();
        for j in 0..=(grid_size - i) {
            let b = (log_m * j as f64 / grid_size as f64).exp();
            let ab = (a * b).min(big_m);
            submult.record(f.eval(ab) - f.eval(a) * f.eval(b), &[a, b]);
        }
    }

    let mut convex = ConditionCheck::new();
    for k in 0..=grid_size {
        let c_ref = conc_at(k);
        let g = |c: f64| f.eval(model.mobility_ratio(c_ref, c).max(1.0));
        for i in k..=grid_size {
            let x = conc_at(i);
            let gx = g(x);
            for j in (i + 1)..=grid_size {
                let y = conc_at(j);
                let mid = 0.5 * (x + y);
                convex.record(g(mid) - 0.5 * (gx + g(y)), &[c_ref, x, y]);
            }
        }
    }

    Ok(ConditionReport {
        smoothness: smooth.finish(),
        monotone: monotone.finish(),
        submultiplicative: submult.finish(),
        convex: convex.finish(),
        max_ratio: big_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tl() -> FluxFactor {
        FluxFactor::todd_longstaff(2.0 / 3.0).unwrap()
    }

    #[test]
    fn tl_with_linear_viscosity_passes_everything() {
        let r = validate_conditions(&tl(), &ViscosityModel::linear(1.0, 9.0).unwrap(), 64).unwrap();
        assert!(r.all_satisfied(), "{r:?}");
        assert!((r.max_ratio - 10.0).abs() < 1e-12);
    }

    #[test]
    fn tl_with_cubic_viscosity_violates_convexity() {
        let r = validate_conditions(&tl(), &ViscosityModel::power_cubic(1.0, 1.5).unwrap(), 64)
            .unwrap();
        assert!(r.monotone.satisfied && r.submultiplicative.satisfied);
        assert!(!r.convex.satisfied);
        assert!(r.convex.worst_violation > 1e-4);
        assert_eq!(r.convex.witness.len(), 3);
    }

    #[test]
    fn tl_submultiplicativity_holds_with_equality() {
        let model = ViscosityModel::exponential(1.0, 10f64.ln()).unwrap();
        for omega in [0.25, 0.5, 2.0 / 3.0, 1.0] {
            let f = FluxFactor::todd_longstaff(omega).unwrap();
            let r = validate_conditions(&f, &model, 64).unwrap();
            assert!(r.submultiplicative.satisfied);
            for i in 0..50 {
                let a = 1.0 + 9.0 * i as f64 / 49.0;
                for j in 0..50 {
                    let b = 1.0 + 9.0 * j as f64 / 49.0;
                    if a * b <= 10.0 {
                        let f_ab = f.flux_value(a * b).unwrap();
                        let prod = f.flux_value(a).unwrap() * f.flux_value(b).unwrap();
                        assert!((f_ab - prod).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn koval_with_linear_viscosity_passes_b_c_d() {
        let f = FluxFactor::koval(0.22).unwrap();
        let r = validate_conditions(&f, &ViscosityModel::linear(1.0, 9.0).unwrap(), 64).unwrap();
        assert!(
            r.monotone.satisfied && r.submultiplicative.satisfied && r.convex.satisfied,
            "{r:?}"
        );
    }

    #[test]
    fn increasing_custom_flux_fails_monotonicity() {
        let f = FluxFactor::custom("rising", |x: f64| x.sqrt()).unwrap();
        let r = validate_conditions(&f, &ViscosityModel::linear(1.0, 9.0).unwrap(), 64).unwrap();
        assert!(!r.monotone.satisfied);
        assert!(!r.all_satisfied());
    }

    #[test]
    fn small_grid_is_rejected() {
        assert!(
            validate_conditions(&tl(), &ViscosityModel::linear(1.0, 9.0).unwrap(), 10).is_err()
        );
    }
}
