//! Derivative-free Nelder–Mead minimization.
//!
//! Uses the dimension-adaptive coefficients of Gao & Han (2012), which keep
//! the method from stalling once the search space has more than a handful of
//! dimensions.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Edge length of the initial simplex along each axis.
    pub initial_step: f64,
    /// Stop once the spread of function values over the simplex is below this.
    pub f_tol: f64,
    /// ... and every vertex lies within this distance of the best (∞-norm),
    /// unless the values already agree to rounding.
    pub x_tol: f64,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            f_tol: 1e-12,
            x_tol: 1e-9,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0`. Non-finite values are treated as `+∞`, which lets
/// callers encode infeasible points.
pub fn minimize<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if dim == 0 {
        let value = eval(x0);
        return SimplexResult {
            x: Vec::new(),
            value,
            iterations: 0,
            evaluations,
            converged: true,
        };
    }

    let n = dim as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / n, 0.75 - 1.0 / (2.0 * n), 1.0 - 1.0 / n);

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    points.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| eval(p)).collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; dim];
    let mut trial = vec![0.0; dim];
    while iterations < opts.max_iterations {
        // Sort vertices by value; ties keep their index order.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        points = order
            .iter()
            .map(|&i| std::mem::take(&mut points[i]))
            .collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[dim] - values[0];
        let diameter = points[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&points[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        // A simplex whose values agree to rounding cannot make further progress.
        let flat = spread <= 4.0 * f64::EPSILON * values[0].abs();
        if spread <= opts.f_tol && (diameter <= opts.x_tol || flat) {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for p in &points[..dim] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n;
            }
        }
        let along = |t: f64, out: &mut Vec<f64>, worst: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst) {
                *o = c + t * (c - w);
            }
        };

        along(alpha, &mut trial, &points[dim]);
        let reflected = trial.clone();
        let f_r = eval(&reflected);

        if f_r < values[0] {
            along(alpha * beta, &mut trial, &points[dim]);
            let f_e = eval(&trial);
            if f_e < f_r {
                points[dim] = trial.clone();
                values[dim] = f_e;
            } else {
                points[dim] = reflected;
                values[dim] = f_r;
            }
            continue;
        }
        if f_r < values[dim - 1] {
            points[dim] = reflected;
            values[dim] = f_r;
            continue;
        }
        // Contraction: outside if the reflection beat the worst, else inside.
        let (t, bound) = if f_r < values[dim] {
            (alpha * gamma, f_r)
        } else {
            (-gamma, values[dim])
        };
        along(t, &mut trial, &points[dim]);
        let f_c = eval(&trial);
        if f_c <= bound {
            points[dim] = trial.clone();
            values[dim] = f_c;
            continue;
        }
        // Shrink toward the best vertex.
        let best = points[0].clone();
        for i in 1..=dim {
            for (x, b) in points[i].iter_mut().zip(&best) {
                *x = b + delta * (*x - b);
            }
            values[i] = eval(&points[i]);
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    SimplexResult {
        x: points[best].clone(),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}
