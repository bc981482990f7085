//! Lists the shipped operators, their leading eigenvalues and how well the
//! default quadrature keeps the eigenfunctions orthonormal; then shows the
//! entries that are recognised but rejected.
//!
//!     cargo run --example operator_catalog

use spectral_inverse::operator::{make_operator, OperatorDescriptor, UnsupportedOperator};

fn main() -> spectral_inverse::Result<()> {
    for text in ["dirichlet_laplacian(0, pi)", "dirichlet(0, 2)", "involution(0.9)", "involution(-0.5)", "harmonic_oscillator_1d"] {
        let desc: OperatorDescriptor = text.parse()?;
        let sys = make_operator(&desc)?;
        let lambdas: Vec<String> = sys.eigenvalues(8).iter().map(|l| format!("{l:.3}")).collect();
        println!("{desc}");
        println!("  quadrature nodes      {}", sys.nodes().len());
        println!("  resolvable modes      {}", sys.max_modes());
        println!("  lambda_1..8           {}", lambdas.join(", "));
        println!("  sorted spectrum       {:?}", sys.sorted_eigenvalues(5));
        println!("  orthonormality defect {:.2e} (50 modes)", sys.orthonormality_defect(50)?);
    }
    println!();
    for u in UnsupportedOperator::ALL {
        let err = make_operator(&OperatorDescriptor::Unsupported { operator: u }).unwrap_err();
        println!("{err}");
    }
    Ok(())
}
