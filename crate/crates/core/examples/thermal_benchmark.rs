//! Thermal Fisher information of a fully thermalized probe qubit, the benchmark
//! every protocol is compared against.

use colltherm::channels::{thermal_populations, BathSpec};
use colltherm::estimation::thermal_fim;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let temps = [0.25, 0.5, 1.0, 2.0, 3.0, 5.0];
    let baths: Vec<BathSpec> = temps.iter().map(|&t| BathSpec::new(t, 0.0)).collect();
    let f = thermal_fim(&baths)?;
    println!("{:>6} {:>10} {:>10} {:>12}", "T", "λ₀", "λ₁", "F_th");
    for (b, fi) in baths.iter().zip(&f.diagonal) {
        let [l0, l1] = thermal_populations(b.omega, b.temperature)?;
        println!("{:>6.2} {:>10.6} {:>10.6} {:>12.6}", b.temperature, l0, l1, fi);
    }
    let pair = thermal_fim(&[BathSpec::new(2.0, 0.0), BathSpec::new(1.0, 0.0)])?;
    println!("two-bath benchmark diag = {:?}", pair.diagonal);
    Ok(())
}
