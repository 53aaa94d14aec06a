//! Cross-check of the simplex optimizer against an exhaustive grid search.

use std::time::Instant;

use tapering::optimizer::brute_force;
use tapering::{optimize, FingeringModel, OptimizerOptions, ViscosityModel};

fn main() -> tapering::Result<()> {
    let mu = ViscosityModel::exponential(1.0, 10f64.ln())?;
    let opts = OptimizerOptions::default();
    for fm in [FingeringModel::Tfe, FingeringModel::koval(0.22)?] {
        for n in [2, 3] {
            let start = Instant::now();
            let grid = brute_force(&fm, &mu, n, opts.oracle_grid_step)?;
            let elapsed = start.elapsed();
            let best = optimize(&fm, &mu, n, &opts)?;
            println!(
                "{:<18} n={n}  simplex V={:.8}  grid V={:.8}  diff={:.1e}  (grid took {:.2?})",
                fm.label(),
                best.volume,
                grid.volume,
                grid.volume - best.volume,
                elapsed
            );
        }
    }
    Ok(())
}
