//! Observed convergence orders of the two forward schemes on the decay of
//! sin x: Crank-Nicolson under joint refinement of h and Δt, and the L1
//! scheme (with and without the start-up correction) under refinement of Δt.
//!
//!     cargo run --release --example oracle_convergence

use spectral_inverse::forward::{forward_fd_heat, forward_l1_with, FdOperator, L1Start, SpaceGrid, TimeGrid};
use spectral_inverse::mittag_leffler::{ml_neg, FractionalOrder};
use spectral_inverse::FieldSample;

fn main() -> spectral_inverse::Result<()> {
    println!("Crank-Nicolson, T = 1");
    let mut prev: Option<f64> = None;
    for level in 0..5 {
        let n = 16 * (1 << level) - 1;
        let grid = SpaceGrid::new(n)?;
        let op = FdOperator::involution(0.0, grid)?;
        let time = TimeGrid::new(10 * (1 << level), 1.0)?;
        let phi = grid.sample(f64::sin)?;
        let u = forward_fd_heat(&op, &phi, &FieldSample::zeros(n), &time)?;
        let exact = grid.sample(|x| (-1.0f64).exp() * x.sin())?;
        let err = grid.l2_norm(&u.add_scaled(-1.0, &exact)?);
        match prev {
            Some(p) => println!("  N = {n:>4}  M = {:>4}  error = {err:.3e}  ratio = {:.3}", time.steps(), p / err),
            None => println!("  N = {n:>4}  M = {:>4}  error = {err:.3e}", time.steps()),
        }
        prev = Some(err);
    }

    let grid = SpaceGrid::new(15)?;
    let op = FdOperator::involution(0.0, grid)?;
    let h = grid.spacing();
    let mu = (2.0 - 2.0 * h.cos()) / (h * h);
    for start in [L1Start::Plain, L1Start::Corrected] {
        println!("L1 ({start:?}), T = 1");
        for alpha in [0.3, 0.5, 0.7] {
            let a = FractionalOrder::new(alpha)?;
            let exact = grid.sample(|x| ml_neg(a, mu).unwrap() * x.sin())?;
            let errors: Vec<f64> = [320, 640, 1280, 2560]
                .iter()
                .map(|&m| {
                    let time = TimeGrid::new(m, 1.0)?;
                    let u = forward_l1_with(&op, &grid.sample(f64::sin)?, &FieldSample::zeros(15), a, &time, start)?;
                    Ok(grid.l2_norm(&u.add_scaled(-1.0, &exact)?))
                })
                .collect::<spectral_inverse::Result<_>>()?;
            let rates: Vec<String> = errors.windows(2).map(|w| format!("{:.3}", (w[0] / w[1]).log2())).collect();
            println!("  alpha = {alpha}  rates = [{}]  (2 - alpha = {})", rates.join(", "), 2.0 - alpha);
        }
    }
    Ok(())
}
