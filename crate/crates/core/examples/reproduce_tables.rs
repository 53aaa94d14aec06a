//! Gain tables for the two catalog viscosities, written as CSV.
//!
//! Usage: `cargo run --release --example reproduce_tables [out-dir]`

use tapering::report::run_table;
use tapering::scenario::{Scenario, ViscositySpec};

fn main() -> tapering::Result<()> {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from);
    let models: Vec<_> = ["tfe", "tl:2/3", "naive", "koval:0.22"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    let cases = [
        ("linear", ViscositySpec::linear(1.0, 9.0)),
        ("exponential", ViscositySpec::exponential(1.0, 10f64.ln())),
    ];
    for (name, viscosity) in cases {
        let scenario = Scenario::new(viscosity, models.clone(), vec![2, 3, 4, 5, 10]);
        let table = run_table(&scenario)?;
        println!("{name}\n{}", table.render());
        if let Some(dir) = &out {
            let written = table.write(dir.join(name))?;
            println!(
                "wrote {} files under {}\n",
                written.len(),
                dir.join(name).display()
            );
        }
    }
    Ok(())
}
