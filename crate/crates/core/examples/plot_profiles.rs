//! SVG plot of optimal step profiles converging to the limiting curve.
//!
//! Usage: `cargo run --release --example plot_profiles [out.svg]`

use tapering::optimizer::{convergence_study, OptimizerOptions};
use tapering::report::{companion_csv_path, render_profiles};
use tapering::{FingeringModel, ViscosityModel};

fn main() -> tapering::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "profiles.svg".into());
    let mu = ViscosityModel::linear(1.0, 9.0)?;
    let study = convergence_study(
        &FingeringModel::Tfe,
        &mu,
        &[2, 5, 10, 50],
        &OptimizerOptions::default(),
    )?;
    for p in &study.points {
        println!(
            "n={:<3} gain={:.3}%  rank={:.4}  sup|T_n - T_inf|={:.4}",
            p.n,
            100.0 * p.gain,
            p.rank,
            p.sup_distance
        );
    }
    println!("limit gain {:.3}%", 100.0 * study.limit.gain);
    let results: Vec<_> = study.points.iter().map(|p| p.result.clone()).collect();
    render_profiles(&results, Some(&study.limit), &path)?;
    println!("wrote {path} and {}", companion_csv_path(&path).display());
    Ok(())
}
