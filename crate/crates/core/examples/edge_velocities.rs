//! Front and back speeds of a single mixing zone under each fingering model.

use tapering::schedule::edge_velocities;
use tapering::{FingeringModel, ViscosityModel};

fn main() -> tapering::Result<()> {
    let mu = ViscosityModel::linear(1.0, 9.0)?;
    let models = [
        FingeringModel::Tfe,
        FingeringModel::koval(0.22)?,
        FingeringModel::todd_longstaff(2.0 / 3.0)?,
        FingeringModel::naive_koval(),
    ];
    println!(
        "zone c = 1 -> 0, mobility ratio M = {}",
        mu.max_mobility_ratio()
    );
    println!(
        "{:<28} {:>10} {:>10} {:>12}",
        "model", "front", "back", "front*back"
    );
    for fm in &models {
        let v = edge_velocities(fm, &mu, 1.0, 0.0)?;
        println!(
            "{:<28} {:>10.6} {:>10.6} {:>12.6}",
            fm.label(),
            v.front,
            v.back,
            v.front * v.back
        );
    }
    // TFE edges are tied to the viscosity contrast rather than reciprocal.
    let v = edge_velocities(&FingeringModel::Tfe, &mu, 0.6, 0.2)?;
    println!(
        "TFE on [0.2, 0.6]: front/back = {:.6}, mu(0.6)/mu(0.2) = {:.6}",
        v.front / v.back,
        6.4 / 2.8
    );
    Ok(())
}
