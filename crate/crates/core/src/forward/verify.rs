use serde::Serialize;

use super::fd::{forward_fd_heat, forward_l1_subdiffusion, FdOperator, TimeGrid};
use super::spline::CubicSpline;
use crate::error::{Error, Result};
use crate::inverse::{InverseSolution, ProblemData};
use crate::quadrature::FieldSample;

/// Relative terminal error accepted by default.
pub const DEFAULT_TOLERANCE: f64 = 5e-3;

/// Resolution of the finite-difference oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleGrids {
    pub space_n: usize,
    pub time_m: usize,
}

impl Default for OracleGrids {
    fn default() -> Self {
        OracleGrids {
            space_n: 401,
            time_m: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleScheme {
    CrankNicolson,
    L1,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub operator: String,
    pub alpha: f64,
    pub horizon: f64,
    pub modes: usize,
    pub scheme: OracleScheme,
    pub grids: OracleGrids,
    /// `‖u_h(·, T) - ψ‖ / max(‖φ‖, 1)` in the discrete `L²` norm.
    pub terminal_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Drives the oracle with the spectrally synthesized source of `sol`.
pub fn verify_reconstruction(
    sol: &InverseSolution,
    data: &ProblemData,
    grids: OracleGrids,
    tolerance: f64,
) -> Result<VerificationReport> {
    let f = sol.evaluate_f()?;
    verify_source(sol, data, &f, grids, tolerance)
}

/// Evolves `φ` under the source `f` (sampled on the quadrature nodes of
/// `sol`) with the finite-difference oracle, and compares the state at `T`
/// with `ψ`.
pub fn verify_source(
    sol: &InverseSolution,
    data: &ProblemData,
    f: &FieldSample,
    grids: OracleGrids,
    tolerance: f64,
) -> Result<VerificationReport> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tolerance}")));
    }
    let sys = sol.system();
    let desc = sys.descriptor();
    let op = FdOperator::for_descriptor(&desc, grids.space_n)?;
    let time = TimeGrid::new(grids.time_m, data.horizon)?;
    let space = *op.grid();
    let nodes = sys.nodes();
    let resample = |field: &FieldSample| -> Result<FieldSample> {
        sys.quadrature().check(field)?;
        let spline = CubicSpline::natural(nodes, field.values())?;
        space.sample(|x| spline.eval(x))
    };
    let phi = resample(&data.phi)?;
    let psi = resample(&data.psi)?;
    let f = resample(f)?;

    let (scheme, u_t) = if data.alpha.is_classical() {
        (OracleScheme::CrankNicolson, forward_fd_heat(&op, &phi, &f, &time)?)
    } else {
        (
            OracleScheme::L1,
            forward_l1_subdiffusion(&op, &phi, &f, data.alpha, &time)?,
        )
    };
    let terminal_error = space.l2_norm(&u_t.add_scaled(-1.0, &psi)?) / space.l2_norm(&phi).max(1.0);
    Ok(VerificationReport {
        operator: desc.to_string(),
        alpha: data.alpha.value(),
        horizon: data.horizon,
        modes: sol.modes(),
        scheme,
        grids,
        terminal_error,
        tolerance,
        passed: terminal_error <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::solve;
    use crate::mittag_leffler::FractionalOrder;
    use crate::operator::{make_operator, OperatorDescriptor};

    #[test]
    fn stationary_mode_passes() {
        let sys = make_operator(&OperatorDescriptor::Involution { epsilon: 0.5 }).unwrap();
        let e1 = sys.mode(1);
        let data = ProblemData::new(e1.clone(), e1, 2.0, FractionalOrder::ONE).unwrap();
        let sol = solve(&sys, &data, 10).unwrap();
        let report = verify_reconstruction(&sol, &data, OracleGrids { space_n: 201, time_m: 200 }, 1e-4).unwrap();
        assert!(report.passed, "{}", report.terminal_error);
        assert_eq!(report.scheme, OracleScheme::CrankNicolson);
    }

    #[test]
    fn corrupted_source_fails() {
        let sys = make_operator(&OperatorDescriptor::Involution { epsilon: 0.9 }).unwrap();
        let phi = sys.sample(|x| (x * (std::f64::consts::PI - x)).powi(3)).unwrap();
        let psi = FieldSample::zeros(phi.len());
        let data = ProblemData::new(phi, psi, 5.0, FractionalOrder::ONE).unwrap();
        let sol = solve(&sys, &data, 50).unwrap();
        let grids = OracleGrids { space_n: 201, time_m: 1000 };
        let good = verify_reconstruction(&sol, &data, grids, DEFAULT_TOLERANCE).unwrap();
        assert!(good.passed, "{}", good.terminal_error);
        let bad_f = sol.evaluate_f().unwrap().scaled(1.1);
        let bad = verify_source(&sol, &data, &bad_f, grids, DEFAULT_TOLERANCE).unwrap();
        assert!(bad.terminal_error > 1e-2 && !bad.passed);
    }

    #[test]
    fn oscillator_reconstruction_verifies() {
        let sys = make_operator(&OperatorDescriptor::HarmonicOscillator { window: 12.0, nodes: 513 }).unwrap();
        let phi = sys.synthesize(&[1.0, 0.0, 0.5]).unwrap();
        let psi = sys.synthesize(&[0.2, 0.3]).unwrap();
        let data = ProblemData::new(phi, psi, 1.0, FractionalOrder::new(0.6).unwrap()).unwrap();
        let sol = solve(&sys, &data, 6).unwrap();
        let report = verify_reconstruction(&sol, &data, OracleGrids { space_n: 600, time_m: 2000 }, 1e-2).unwrap();
        assert_eq!(report.scheme, OracleScheme::L1);
        assert!(report.passed, "{}", report.terminal_error);
    }
}
