//! Optimal slug banks for n = 1..6 and the polymer saved against one slug.

use tapering::{optimize, FingeringModel, OptimizerOptions, ViscosityModel};

fn main() -> tapering::Result<()> {
    let mu = ViscosityModel::linear(1.0, 9.0)?;
    let fm = FingeringModel::todd_longstaff(2.0 / 3.0)?;
    let opts = OptimizerOptions::default();
    for n in 1..=6 {
        let r = optimize(&fm, &mu, n, &opts)?;
        let c: Vec<String> = r
            .configuration
            .concentrations()
            .iter()
            .map(|c| format!("{c:.3}"))
            .collect();
        println!(
            "n={n}  V={:.6}  gain={:5.2}%  rank={:.3}  starts agreeing={}  c=[{}]",
            r.volume,
            100.0 * r.gain,
            r.rank,
            r.starts_agreeing,
            c.join(", ")
        );
    }
    println!("\n{}", optimize(&fm, &mu, 3, &opts)?.to_json());
    Ok(())
}
