//! Tabulates E_α(-x) for a few orders next to the two-sided Simon bounds.
//!
//!     cargo run --example mittag_leffler

use spectral_inverse::mittag_leffler::{ml_neg, simon_bounds, FractionalOrder};

fn main() -> spectral_inverse::Result<()> {
    let xs = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 1e3];
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let a = FractionalOrder::new(alpha)?;
        println!("alpha = {alpha}");
        println!("{:>10} {:>22} {:>14} {:>14}", "x", "E(-x)", "lower", "upper");
        for &x in &xs {
            let e = ml_neg(a, x)?;
            let (lo, hi) = simon_bounds(a, x);
            println!("{x:>10} {e:>22.15e} {lo:>14.6e} {hi:>14.6e}");
        }
        println!();
    }
    // α = 1/2 has the closed form e^{x²} erfc(x)
    let half = FractionalOrder::new(0.5)?;
    let x: f64 = 3.0;
    println!(
        "E_1/2(-3) = {:.15e}, e^9 erfc(3) = {:.15e}",
        ml_neg(half, x)?,
        (x * x).exp() * libm::erfc(x)
    );
    Ok(())
}
