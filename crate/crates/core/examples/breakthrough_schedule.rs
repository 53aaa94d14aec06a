//! Switch times, volume and the no-breakthrough check for a hand-picked bank.

use tapering::schedule::{
    breakthrough_times, breakthrough_times_product, check_no_breakthrough, zone_velocities,
};
use tapering::{FingeringModel, SlugConfiguration, ViscosityModel};

fn main() -> tapering::Result<()> {
    let mu = ViscosityModel::exponential(1.0, 10f64.ln())?;
    let fm = FingeringModel::koval(0.22)?;
    let c = vec![1.0, 0.7, 0.4, 0.15, 0.0];

    let closed = breakthrough_times(&fm, &mu, &c)?;
    let product = breakthrough_times_product(&fm, &mu, &c)?;
    for (j, (a, b)) in closed.iter().zip(&product).enumerate() {
        println!(
            "T_{} = {a:.10}  (product form differs by {:.1e})",
            j + 1,
            (a - b).abs()
        );
    }

    let config = SlugConfiguration::with_breakthrough_times(&fm, &mu, c.clone())?;
    println!("slug durations: {:?}", config.durations());
    println!(
        "polymer volume V = {:.8}, rank = {}",
        config.volume(),
        config.rank()
    );

    let report = check_no_breakthrough(&config, &zone_velocities(&fm, &mu, &c)?)?;
    println!(
        "feasible: {}, max |residual| = {:.1e}",
        report.feasible,
        report.max_abs_residual()
    );

    // Switching to the second slug too early lets zone 1 reach the producer.
    let mut early = config.switch_times().to_vec();
    early[0] -= 0.02;
    let rushed = SlugConfiguration::new(c.clone(), early)?;
    let report = check_no_breakthrough(&rushed, &zone_velocities(&fm, &mu, &c)?)?;
    println!(
        "after moving T_1 earlier: feasible = {}, first violation at j = {:?}",
        report.feasible,
        report.first_violation()
    );
    Ok(())
}
