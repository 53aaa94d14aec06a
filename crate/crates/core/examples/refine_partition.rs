//! Splitting the widest slab of a bank always saves polymer on a well-behaved
//! viscosity curve.

use tapering::optimizer::refine_partition;
use tapering::{FingeringModel, SlugConfiguration, ViscosityModel};

fn main() -> tapering::Result<()> {
    let mu = ViscosityModel::linear(1.0, 9.0)?;
    let fm = FingeringModel::Tfe;
    let mut config = SlugConfiguration::with_breakthrough_times(&fm, &mu, vec![1.0, 0.0])?;
    println!("n=1  V={:.8}", config.volume());
    for _ in 0..7 {
        let step = refine_partition(&fm, &mu, &config)?;
        println!(
            "n={}  split slab {} at c={:.4}  V {:.8} -> {:.8}",
            step.configuration.slug_count(),
            step.slab + 1,
            step.inserted,
            step.volume_before,
            step.volume_after
        );
        config = step.configuration;
    }
    Ok(())
}
