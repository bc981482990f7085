//! How much harder is the rod to cool when the involution is switched on?
//! Compares the source norm and the controlled and free temperature norms
//! across couplings ε.
//!
//!     cargo run --release --example energy_comparison

use spectral_inverse::experiment::{compare_energy, ExperimentConfig};

fn main() -> spectral_inverse::Result<()> {
    let cfg = ExperimentConfig {
        epsilons: vec![-0.5, 0.0, 0.5, 0.9],
        truncations: vec![20],
        ..ExperimentConfig::default()
    };
    let table = compare_energy(&cfg)?;
    println!("{:>6} {:>10} {:>12} {:>12} {:>12}", "eps", "|f|", "|u(2.5)|", "free(2.5)", "oracle");
    for row in &table.rows {
        println!(
            "{:>6} {:>10.4} {:>12.4} {:>12.4} {:>12.2e}",
            row.epsilon, row.f_norm, row.u_norms[1], row.free_norms[1], row.terminal_error
        );
    }
    Ok(())
}
