//! Time-fractional reconstruction on the harmonic oscillator for several
//! orders α, each checked with the L1 finite-difference oracle.
//!
//!     cargo run --release --example subdiffusion_inverse

use spectral_inverse::forward::{verify_reconstruction, OracleGrids};
use spectral_inverse::operator::{make_operator, OperatorDescriptor};
use spectral_inverse::{solve, FractionalOrder, ProblemData};

fn main() -> spectral_inverse::Result<()> {
    let sys = make_operator(&OperatorDescriptor::HarmonicOscillator { window: 12.0, nodes: 513 })?;
    let phi = sys.sample(|x| (-(x - 0.5).powi(2)).exp())?;
    let psi = sys.sample(|x| 0.3 * x * (-x * x / 2.0).exp())?;
    let grids = OracleGrids { space_n: 500, time_m: 1500 };
    println!("{:>6} {:>14} {:>16} {:>8}", "alpha", "|f|", "terminal error", "scheme");
    for alpha in [0.3, 0.5, 0.7, 0.9, 1.0] {
        let alpha = FractionalOrder::new(alpha)?;
        let data = ProblemData::new(phi.clone(), psi.clone(), 1.0, alpha)?;
        let sol = solve(&sys, &data, 30)?;
        let report = verify_reconstruction(&sol, &data, grids, 1e-2)?;
        println!(
            "{:>6} {:>14.6e} {:>16.3e} {:>8?}",
            alpha.value(),
            sys.l2_norm(&sol.evaluate_f()?)?,
            report.terminal_error,
            report.scheme
        );
    }
    Ok(())
}
