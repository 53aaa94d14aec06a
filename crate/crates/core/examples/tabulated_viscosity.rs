//! Lab-measured viscosity points and a custom flux factor.

use tapering::optimizer::limiting_profile;
use tapering::{optimize, FingeringModel, FluxFactor, OptimizerOptions, ViscosityModel};

fn main() -> tapering::Result<()> {
    // Viscosity (cP) against normalized polymer concentration.
    let samples = [
        (0.0, 1.0),
        (0.2, 1.9),
        (0.4, 3.4),
        (0.6, 5.3),
        (0.8, 7.5),
        (1.0, 10.0),
    ];
    let mu = ViscosityModel::tabulated(&samples)?.with_permeability(250.0)?;
    println!(
        "mu(0.5) = {:.4}, M = {:.4}",
        mu.viscosity(0.5)?,
        mu.max_mobility_ratio()
    );

    let flux = FluxFactor::custom("x^-0.5", |x: f64| x.powf(-0.5))?;
    let fm = FingeringModel::GeneralizedKoval(flux);
    for n in [2, 4, 8] {
        let r = optimize(&fm, &mu, n, &OptimizerOptions::default())?;
        println!("n={n}: gain {:.2}%", 100.0 * r.gain);
    }
    let limit = limiting_profile(&fm, &mu)?;
    println!(
        "limit: beta {:.6}, gain {:.2}%",
        limit.beta,
        100.0 * limit.gain
    );
    Ok(())
}
