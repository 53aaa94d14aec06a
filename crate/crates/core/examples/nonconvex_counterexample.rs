//! A viscosity curve for which grading the bank cannot save polymer.

use tapering::conditions::validate_conditions;
use tapering::optimizer::{insertion_scan, optimize, single_slug_volume};
use tapering::{FingeringModel, FluxFactor, OptimizerOptions, ViscosityModel};

fn main() -> tapering::Result<()> {
    let mu = ViscosityModel::power_cubic(1.0, 1.5)?;
    let flux = FluxFactor::todd_longstaff(2.0 / 3.0)?;
    let fm = FingeringModel::GeneralizedKoval(flux.clone());

    let report = validate_conditions(&flux, &mu, 128)?;
    for (name, check) in report.checks() {
        println!(
            "({name}) satisfied={} worst={:.3e} witness={:?}",
            check.satisfied, check.worst_violation, check.witness
        );
    }

    let scan = insertion_scan(&fm, &mu, 999)?;
    println!("one slug: V1 = {:.8}", scan.single_slug_volume);
    println!(
        "best split at c = {:.3}: V2 = {:.8} (improves: {})",
        scan.best_concentration,
        scan.best_volume,
        scan.improves()
    );
    let worst_margin = scan
        .samples
        .iter()
        .map(|(_, v)| v - scan.single_slug_volume)
        .fold(f64::INFINITY, f64::min);
    println!("smallest V2 - V1 over the grid: {worst_margin:.3e}");

    // The optimizer drifts toward a degenerate split and gains nothing.
    let r = optimize(&fm, &mu, 2, &OptimizerOptions::default())?;
    println!(
        "optimizer n=2: gain = {:.2e}, V1 = {:.8}",
        r.gain,
        single_slug_volume(&fm, &mu)
    );

    // The same flux factor on a linear curve satisfies every condition.
    let linear = validate_conditions(&flux, &ViscosityModel::linear(1.0, 9.0)?, 128)?;
    println!(
        "with mu = 1 + 9c all conditions hold: {}",
        linear.all_satisfied()
    );
    Ok(())
}
