//! Limiting injection profile as the number of slugs grows without bound.

use tapering::optimizer::{limiting_beta, limiting_profile};
use tapering::schedule::ProfileCurve;
use tapering::{FingeringModel, FluxFactor, ViscosityModel};

fn main() -> tapering::Result<()> {
    let catalog = [
        ("mu = 1 + 9c", ViscosityModel::linear(1.0, 9.0)?),
        ("mu = 10^c", ViscosityModel::exponential(1.0, 10f64.ln())?),
    ];
    let models = [
        FingeringModel::Tfe,
        FingeringModel::todd_longstaff(2.0 / 3.0)?,
        FingeringModel::naive_koval(),
        FingeringModel::koval(0.22)?,
    ];
    for (name, mu) in &catalog {
        println!("{name}");
        for fm in &models {
            let limit = limiting_profile(fm, mu)?;
            println!(
                "  {:<28} beta={:.4}  V={:.6}  gain={:.2}%",
                fm.label(),
                limit.beta,
                limit.volume,
                100.0 * limit.gain
            );
        }
    }

    // A user-supplied flux factor gets its exponent from a finite difference.
    let power =
        FingeringModel::GeneralizedKoval(FluxFactor::custom("1/x^0.3", |x: f64| x.powf(-0.3))?);
    println!(
        "\ncustom flux beta = {:.8} (exact 0.6)",
        limiting_beta(&power)?
    );

    let limit = limiting_profile(&FingeringModel::Tfe, &catalog[0].1)?;
    for c in [1.0, 0.75, 0.5, 0.25, 0.0] {
        println!("T_inf({c:.2}) = {:.6}", limit.eval(c));
    }
    Ok(())
}
