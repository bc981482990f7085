//! Reconstruction of `(u, f)` from the initial state `φ` and the terminal
//! observation `ψ`.
//!
//! Per mode the direct problem `D^α u_k + λ_k u_k = f_k` has the solution
//! `u_k(t) = f_k/λ_k + C_k E_α(-λ_k t^α)`. Matching `u_k(0) = φ_k` and
//! `u_k(T) = ψ_k` gives
//!
//! ```text
//! C_k = (φ_k - ψ_k) / (1 - E_α(-λ_k T^α)),    f_k = λ_k (φ_k - C_k),
//! u(t) = φ + Σ_k C_k (E_α(-λ_k t^α) - 1) e_k.
//! ```
//!
//! For `α = 1` every Mittag-Leffler factor is `exp(-λ_k t)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mittag_leffler::{ml_neg_complement, FractionalOrder};
use crate::operator::EigenSystem;
use crate::quadrature::FieldSample;

/// Smallest admissible `1 - E_α(-λ_k T^α)`.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

pub const DEFAULT_MODES: usize = 50;

#[derive(Debug, Clone)]
pub struct ProblemData {
    pub phi: FieldSample,
    pub psi: FieldSample,
    pub horizon: f64,
    pub alpha: FractionalOrder,
}

impl ProblemData {
    pub fn new(phi: FieldSample, psi: FieldSample, horizon: f64, alpha: FractionalOrder) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::invalid(format!("horizon must be positive, got {horizon}")));
        }
        if phi.len() != psi.len() {
            return Err(Error::LengthMismatch {
                expected: phi.len(),
                found: psi.len(),
            });
        }
        Ok(ProblemData {
            phi,
            psi,
            horizon,
            alpha,
        })
    }
}

/// Truncated reconstruction; evaluable at any `t ∈ [0, T]`.
#[derive(Debug, Clone)]
pub struct InverseSolution {
    system: EigenSystem,
    eigenvalues: Vec<f64>,
    phi_coeffs: Vec<f64>,
    psi_coeffs: Vec<f64>,
    c_coeffs: Vec<f64>,
    f_coeffs: Vec<f64>,
    horizon: f64,
    alpha: FractionalOrder,
    phi: FieldSample,
}

/// Reconstructs the first `l` modes of `(u, f)`.
pub fn solve(sys: &EigenSystem, data: &ProblemData, l: usize) -> Result<InverseSolution> {
    let alpha = data.alpha;
    let t_alpha = data.horizon.powf(alpha.value());
    build(sys, data, l, |lambda| ml_neg_complement(alpha, lambda * t_alpha))
}

/// Heat-equation reconstruction written directly with `1 - exp(-λT)`.
///
/// Kept separate from [`solve`] so the two can be compared.
pub fn solve_heat(sys: &EigenSystem, phi: &FieldSample, psi: &FieldSample, horizon: f64, l: usize) -> Result<InverseSolution> {
    let data = ProblemData::new(phi.clone(), psi.clone(), horizon, FractionalOrder::ONE)?;
    build(sys, &data, l, |lambda| Ok(-(-lambda * horizon).exp_m1()))
}

fn build(
    sys: &EigenSystem,
    data: &ProblemData,
    l: usize,
    complement: impl Fn(f64) -> Result<f64>,
) -> Result<InverseSolution> {
    let phi_coeffs = sys.analyze(&data.phi, l)?;
    let psi_coeffs = sys.analyze(&data.psi, l)?;
    let eigenvalues = sys.eigenvalues(l);
    let mut c_coeffs = Vec::with_capacity(l);
    let mut f_coeffs = Vec::with_capacity(l);
    for (k, ((&lambda, &p), &q)) in eigenvalues.iter().zip(&phi_coeffs).zip(&psi_coeffs).enumerate() {
        let denom = complement(lambda)?;
        if !(denom >= DENOMINATOR_FLOOR) {
            return Err(Error::DegenerateDenominator { mode: k + 1, value: denom });
        }
        let c = (p - q) / denom;
        c_coeffs.push(c);
        f_coeffs.push(lambda * (p - c));
    }
    Ok(InverseSolution {
        system: sys.clone(),
        eigenvalues,
        phi_coeffs,
        psi_coeffs,
        c_coeffs,
        f_coeffs,
        horizon: data.horizon,
        alpha: data.alpha,
        phi: data.phi.clone(),
    })
}

impl InverseSolution {
    pub fn system(&self) -> &EigenSystem {
        &self.system
    }

    pub fn modes(&self) -> usize {
        self.c_coeffs.len()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn phi_coeffs(&self) -> &[f64] {
        &self.phi_coeffs
    }

    pub fn psi_coeffs(&self) -> &[f64] {
        &self.psi_coeffs
    }

    pub fn c_coeffs(&self) -> &[f64] {
        &self.c_coeffs
    }

    pub fn f_coeffs(&self) -> &[f64] {
        &self.f_coeffs
    }

    pub fn phi(&self) -> &FieldSample {
        &self.phi
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(Error::TimeOutOfRange { t, horizon: self.horizon });
        }
        Ok(())
    }

    /// `1 - E_α(-λ_k t^α)` for every mode.
    fn relaxed(&self, t: f64) -> Result<Vec<f64>> {
        let ta = t.powf(self.alpha.value());
        self.eigenvalues
            .iter()
            .map(|&lambda| ml_neg_complement(self.alpha, lambda * ta))
            .collect()
    }

    /// Modal amplitudes `u_k(t) = φ_k + C_k (E_α(-λ_k t^α) - 1)`.
    pub fn mode_amplitudes(&self, t: f64) -> Result<Vec<f64>> {
        self.check_time(t)?;
        let r = self.relaxed(t)?;
        Ok(self
            .phi_coeffs
            .iter()
            .zip(&self.c_coeffs)
            .zip(r)
            .map(|((p, c), r)| p - c * r)
            .collect())
    }

    /// `u(·, t)` on the quadrature nodes. At `t = 0` this returns `φ` exactly.
    pub fn evaluate_u(&self, t: f64) -> Result<FieldSample> {
        self.check_time(t)?;
        let r = self.relaxed(t)?;
        let series: Vec<f64> = self.c_coeffs.iter().zip(r).map(|(c, r)| -c * r).collect();
        let correction = self.system.synthesize(&series)?;
        self.phi.add_scaled(1.0, &correction)
    }

    /// `f = Σ_{k≤l} f_k e_k`, i.e. `Lφ` realized spectrally at truncation `l`.
    pub fn evaluate_f(&self) -> Result<FieldSample> {
        self.system.synthesize(&self.f_coeffs)
    }

    /// `f = Lφ - Σ_{k≤l} λ_k C_k e_k` with `Lφ` supplied exactly, e.g. from
    /// a closed-form derivative of the initial profile.
    pub fn evaluate_f_with(&self, l_phi: &FieldSample) -> Result<FieldSample> {
        self.system.quadrature().check(l_phi)?;
        let series: Vec<f64> = self
            .eigenvalues
            .iter()
            .zip(&self.c_coeffs)
            .map(|(lambda, c)| lambda * c)
            .collect();
        let correction = self.system.synthesize(&series)?;
        l_phi.add_scaled(-1.0, &correction)
    }
}

/// Truncated `H¹` diagnostic of a field.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    /// `S_j = Σ_{k≤j} (1 + λ_k)² ⟨v, e_k⟩²` for `j = 1..=l`.
    pub partial_sums: Vec<f64>,
    /// Relative growth of `S` over the last quarter of the modes.
    pub tail_increment: f64,
    pub stabilized: bool,
}

impl HypothesisReport {
    pub fn value(&self) -> f64 {
        *self.partial_sums.last().expect("at least two modes")
    }
}

const STABILIZATION_TOL: f64 = 1e-3;

/// Checks whether the truncated `‖(I + L) v‖²` has settled by mode `l`.
pub fn hypothesis_check(sys: &EigenSystem, field: &FieldSample, l: usize) -> Result<HypothesisReport> {
    if l < 2 {
        return Err(Error::invalid("hypothesis check needs at least 2 modes"));
    }
    let coeffs = sys.analyze(field, l)?;
    let mut partial_sums = Vec::with_capacity(l);
    let mut s = 0.0;
    for (k, c) in coeffs.iter().enumerate() {
        let w = 1.0 + sys.eigenvalue(k + 1);
        s += w * w * c * c;
        partial_sums.push(s);
    }
    let quarter = (l / 4).max(1);
    let earlier = partial_sums[l - 1 - quarter];
    let tail_increment = if s > 0.0 { (s - earlier) / s } else { 0.0 };
    Ok(HypothesisReport {
        partial_sums,
        tail_increment,
        stabilized: tail_increment < STABILIZATION_TOL,
    })
}
