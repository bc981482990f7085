use crate::error::{Error, Result};
use crate::mittag_leffler::{ml_neg_complement, FractionalOrder};
use crate::operator::EigenSystem;
use crate::quadrature::FieldSample;

/// Exact evolution of the first `l` modes of `D^α u + L u = f`, `u(0) = φ`:
///
/// `u_k(t) = φ_k E_α(-λ_k t^α) + (f_k / λ_k) (1 - E_α(-λ_k t^α))`.
///
/// Returns one field per requested time.
pub fn forward_modal(
    sys: &EigenSystem,
    phi: &FieldSample,
    f: &FieldSample,
    alpha: FractionalOrder,
    l: usize,
    times: &[f64],
) -> Result<Vec<FieldSample>> {
    if l == 0 {
        return Err(Error::invalid("at least one mode required"));
    }
    let phi_k = sys.analyze(phi, l)?;
    let f_k = sys.analyze(f, l)?;
    let lambdas = sys.eigenvalues(l);
    times
        .iter()
        .map(|&t| {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::invalid(format!("time must be non-negative, got {t}")));
            }
            let ta = t.powf(alpha.value());
            let amps = lambdas
                .iter()
                .zip(phi_k.iter().zip(&f_k))
                .map(|(&lambda, (&p, &s))| {
                    let relaxed = ml_neg_complement(alpha, lambda * ta)?;
                    Ok(p + (s / lambda - p) * relaxed)
                })
                .collect::<Result<Vec<f64>>>()?;
            sys.synthesize(&amps)
        })
        .collect()
}
