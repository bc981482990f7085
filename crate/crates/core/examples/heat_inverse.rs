//! Heat-equation inverse problem on the Dirichlet Laplacian: pick a source,
//! generate the terminal observation with the exact modal evolution, and
//! recover the source from (φ, ψ) alone.
//!
//!     cargo run --example heat_inverse

use spectral_inverse::forward::forward_modal;
use spectral_inverse::operator::{make_operator, OperatorDescriptor};
use spectral_inverse::{solve_heat, FractionalOrder};

fn main() -> spectral_inverse::Result<()> {
    let sys = make_operator(&OperatorDescriptor::DirichletLaplacian { a: 0.0, b: 1.0 })?;
    let horizon = 0.1;
    let l = 30;
    let phi = sys.sample(|x| (x * (1.0 - x)).powi(2) * 16.0)?;
    let f_true = sys.sample(|x| 20.0 * (x * (1.0 - x)) * (3.0 * x).cos())?;
    let psi = forward_modal(&sys, &phi, &f_true, FractionalOrder::ONE, l, &[horizon])?.remove(0);

    let sol = solve_heat(&sys, &phi, &psi, horizon, l)?;
    let f = sol.evaluate_f()?;
    let f_projected = sys.synthesize(&sys.analyze(&f_true, l)?)?;
    println!("modes                     {l}");
    println!("|f_true|                  {:.6e}", sys.l2_norm(&f_true)?);
    println!("|f - P_l f_true|          {:.3e}", sys.l2_norm(&f.add_scaled(-1.0, &f_projected)?)?);
    // ψ lives in span{e_1..e_l}; u(T) also carries the part of φ beyond mode l
    let tail = phi.add_scaled(-1.0, &sys.synthesize(&sys.analyze(&phi, l)?)?)?;
    let mismatch = sol.evaluate_u(horizon)?.add_scaled(-1.0, &psi)?;
    println!("|u(T) - psi|              {:.3e}", sys.l2_norm(&mismatch)?);
    println!("|phi beyond mode l|       {:.3e}", sys.l2_norm(&tail)?);
    println!("|u(T) - psi - tail|       {:.3e}", sys.l2_norm(&mismatch.add_scaled(-1.0, &tail)?)?);
    println!();
    println!("{:>4} {:>14} {:>14} {:>14}", "k", "lambda_k", "f_k", "C_k");
    for k in 0..8 {
        println!(
            "{:>4} {:>14.4} {:>14.6e} {:>14.6e}",
            k + 1,
            sol.eigenvalues()[k],
            sol.f_coeffs()[k],
            sol.c_coeffs()[k]
        );
    }
    Ok(())
}
