//! Physical-space time stepping on a uniform interior grid.
//!
//! The spatial operator is the second-difference matrix `A` (approximating
//! `-d²/dx²` with homogeneous Dirichlet conditions), plus the involution
//! coupling `-ε R A`, where `R` reverses the node order: on a uniform grid the
//! reflection `x ↦ a + b - x` maps node `j` to node `N + 1 - j` exactly, so
//! `ε u''(a + b - x_j)` is `-ε (A u)_{N+1-j}`. An optional `x²` potential
//! covers the harmonic oscillator on a truncated line.
//!
//! Nothing here touches the eigenfunction machinery.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mittag_leffler::FractionalOrder;
use crate::operator::OperatorDescriptor;
use crate::quadrature::FieldSample;

/// Largest interior grid assembled densely.
pub const MAX_DENSE_POINTS: usize = 1024;
const MIN_STEPS: usize = 10;

/// `N` interior nodes `x_j = a + j h`, `h = (b - a)/(N + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceGrid {
    a: f64,
    b: f64,
    n: usize,
}

impl SpaceGrid {
    /// Interior grid on `(0, π)`.
    pub fn new(n: usize) -> Result<Self> {
        Self::on_interval(0.0, std::f64::consts::PI, n)
    }

    pub fn on_interval(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("empty interval ({a}, {b})")));
        }
        if !(3..=MAX_DENSE_POINTS).contains(&n) {
            return Err(Error::invalid(format!(
                "interior point count must be in [3, {MAX_DENSE_POINTS}], got {n}"
            )));
        }
        Ok(SpaceGrid { a, b, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / (self.n + 1) as f64
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.n).map(|j| self.a + j as f64 * h).collect()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<FieldSample> {
        FieldSample::new(self.nodes().into_iter().map(f).collect())
    }

    /// Discrete `L²` norm `sqrt(h Σ u_j²)`.
    pub fn l2_norm(&self, u: &FieldSample) -> f64 {
        (self.spacing() * u.values().iter().map(|v| v * v).sum::<f64>()).sqrt()
    }
}

/// `M` uniform steps on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    steps: usize,
    horizon: f64,
}

impl TimeGrid {
    pub fn new(steps: usize, horizon: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::invalid(format!("horizon must be positive, got {horizon}")));
        }
        if steps < MIN_STEPS {
            return Err(Error::invalid(format!(
                "at least {MIN_STEPS} time steps required, got {steps}"
            )));
        }
        Ok(TimeGrid { steps, horizon })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn time(&self, m: usize) -> f64 {
        if m == self.steps {
            self.horizon
        } else {
            m as f64 * self.step()
        }
    }
}

/// Finite-difference realization of one catalog operator.
#[derive(Debug, Clone)]
pub struct FdOperator {
    grid: SpaceGrid,
    epsilon: f64,
    quadratic_potential: bool,
}

impl FdOperator {
    /// `-u'' + ε u''(a + b - x)` on the grid's interval.
    pub fn involution(epsilon: f64, grid: SpaceGrid) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon.abs() < 1.0) {
            return Err(Error::invalid(format!(
                "involution coupling needs |epsilon| < 1, got {epsilon}"
            )));
        }
        Ok(FdOperator {
            grid,
            epsilon,
            quadratic_potential: false,
        })
    }

    /// `-u'' + x² u` with Dirichlet conditions at the grid ends.
    pub fn oscillator(grid: SpaceGrid) -> Self {
        FdOperator {
            grid,
            epsilon: 0.0,
            quadratic_potential: true,
        }
    }

    /// Grid and stencil matching a catalog descriptor, with `n` interior
    /// points. The oscillator is truncated to its quadrature window.
    pub fn for_descriptor(desc: &OperatorDescriptor, n: usize) -> Result<Self> {
        match *desc {
            OperatorDescriptor::Involution { epsilon } => Self::involution(epsilon, SpaceGrid::new(n)?),
            OperatorDescriptor::DirichletLaplacian { a, b } => {
                Self::involution(0.0, SpaceGrid::on_interval(a, b, n)?)
            }
            OperatorDescriptor::HarmonicOscillator { window, .. } => {
                Ok(Self::oscillator(SpaceGrid::on_interval(-window, window, n)?))
            }
            OperatorDescriptor::Unsupported { operator } => Err(Error::UnsupportedOperator {
                name: operator.name().to_string(),
                reason: operator.reason(),
            }),
        }
    }

    pub fn grid(&self) -> &SpaceGrid {
        &self.grid
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `L_h u` in O(N).
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let inv_h2 = 1.0 / (self.grid.spacing() * self.grid.spacing());
        let second: Vec<f64> = (0..n)
            .map(|j| {
                let left = if j > 0 { u[j - 1] } else { 0.0 };
                let right = if j + 1 < n { u[j + 1] } else { 0.0 };
                (2.0 * u[j] - left - right) * inv_h2
            })
            .collect();
        let nodes = if self.quadratic_potential { self.grid.nodes() } else { Vec::new() };
        (0..n)
            .map(|j| {
                let mut v = second[j] - self.epsilon * second[n - 1 - j];
                if self.quadratic_potential {
                    v += nodes[j] * nodes[j] * u[j];
                }
                v
            })
            .collect()
    }

    /// Dense `L_h`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.grid.len();
        let inv_h2 = 1.0 / (self.grid.spacing() * self.grid.spacing());
        let a = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0 * inv_h2
            } else if i.abs_diff(j) == 1 {
                -inv_h2
            } else {
                0.0
            }
        });
        let mut l = a.clone();
        if self.epsilon != 0.0 {
            for i in 0..n {
                let mirrored = a.row(n - 1 - i).into_owned();
                for j in 0..n {
                    l[(i, j)] -= self.epsilon * mirrored[j];
                }
            }
        }
        if self.quadratic_potential {
            for (j, x) in self.grid.nodes().into_iter().enumerate() {
                l[(j, j)] += x * x;
            }
        }
        l
    }

    fn check(&self, u: &FieldSample, what: &str) -> Result<()> {
        if u.len() != self.grid.len() {
            return Err(Error::invalid(format!(
                "{what} has {} values, grid has {} interior nodes",
                u.len(),
                self.grid.len()
            )));
        }
        Ok(())
    }
}

/// `(shift I + scale L_h)` factorized once.
struct Factorized(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>);

impl Factorized {
    fn new(op: &FdOperator, shift: f64, scale: f64) -> Result<Self> {
        let n = op.grid.len();
        let m = DMatrix::identity(n, n) * shift + op.matrix() * scale;
        let lu = m.lu();
        if !lu.is_invertible() {
            return Err(Error::SingularSystem);
        }
        Ok(Factorized(lu))
    }

    fn solve(&self, rhs: Vec<f64>) -> Result<Vec<f64>> {
        let b = DVector::from_vec(rhs);
        self.0
            .solve(&b)
            .map(|x| x.data.into())
            .ok_or(Error::SingularSystem)
    }
}

/// Crank-Nicolson for `u_t + L u = f`, `u(0) = φ`; returns `u(·, T)`.
///
/// Each step solves `(I + Δt/2 L_h) u^{m+1} = (I - Δt/2 L_h) u^m + Δt f`.
pub fn forward_fd_heat(op: &FdOperator, phi: &FieldSample, f: &FieldSample, time: &TimeGrid) -> Result<FieldSample> {
    op.check(phi, "initial state")?;
    op.check(f, "source")?;
    let dt = time.step();
    let lhs = Factorized::new(op, 1.0, 0.5 * dt)?;
    let mut u = phi.values().to_vec();
    for _ in 0..time.steps() {
        let lu = op.apply(&u);
        let rhs = u
            .iter()
            .zip(&lu)
            .zip(f.values())
            .map(|((u, l), f)| u - 0.5 * dt * l + dt * f)
            .collect();
        u = lhs.solve(rhs)?;
    }
    FieldSample::new(u)
}

/// Start-up treatment of the L1 scheme.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum L1Start {
    /// Plain L1. For data that is not compatible at `t = 0` (every
    /// non-stationary solution with a time-independent source) the error at
    /// fixed `T` is only first order in `Δt`.
    Plain,
    /// Adds `(f - L u^0)/2` to the first step, which restores the
    /// `O(Δt^{2-α})` rate for the `t^α` singularity of the exact solution.
    #[default]
    Corrected,
}

/// L1 weights `b_j = ((j+1)^{1-α} - j^{1-α}) / (Γ(2-α) Δt^α)`, `j = 0..m`.
pub fn l1_weights(alpha: f64, dt: f64, count: usize) -> Vec<f64> {
    let p = 1.0 - alpha;
    let scale = 1.0 / (libm::tgamma(2.0 - alpha) * dt.powf(alpha));
    (0..count)
        .map(|j| {
            let j = j as f64;
            ((j + 1.0).powf(p) - j.powf(p)) * scale
        })
        .collect()
}

/// Implicit L1 scheme for `D^α u + L u = f`, `0 < α < 1`; returns `u(·, T)`.
///
/// The Caputo derivative at `t_n` is `Σ_{j<n} b_j (u^{n-j} - u^{n-j-1})`.
pub fn forward_l1_subdiffusion(
    op: &FdOperator,
    phi: &FieldSample,
    f: &FieldSample,
    alpha: FractionalOrder,
    time: &TimeGrid,
) -> Result<FieldSample> {
    forward_l1_with(op, phi, f, alpha, time, L1Start::Corrected)
}

pub fn forward_l1_with(
    op: &FdOperator,
    phi: &FieldSample,
    f: &FieldSample,
    alpha: FractionalOrder,
    time: &TimeGrid,
    start: L1Start,
) -> Result<FieldSample> {
    let a = alpha.value();
    if a >= 1.0 {
        return Err(Error::invalid("the L1 scheme needs 0 < alpha < 1; use Crank-Nicolson for alpha = 1"));
    }
    op.check(phi, "initial state")?;
    op.check(f, "source")?;
    let n = op.grid.len();
    let steps = time.steps();
    let b = l1_weights(a, time.step(), steps);
    let lhs = Factorized::new(op, b[0], 1.0)?;
    let f = f.values();

    let mut u = phi.values().to_vec();
    // increments[m] = u^{m+1} - u^m
    let mut increments: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut hist = vec![0.0; n];
    for step in 1..=steps {
        hist.iter_mut().for_each(|h| *h = 0.0);
        for j in 1..step {
            let bj = b[j];
            for (h, d) in hist.iter_mut().zip(&increments[step - 1 - j]) {
                *h += bj * d;
            }
        }
        let mut rhs: Vec<f64> = (0..n).map(|i| b[0] * u[i] - hist[i] + f[i]).collect();
        if step == 1 && start == L1Start::Corrected {
            let lu = op.apply(&u);
            for i in 0..n {
                rhs[i] += 0.5 * (f[i] - lu[i]);
            }
        }
        let next = lhs.solve(rhs)?;
        increments.push(next.iter().zip(&u).map(|(a, b)| a - b).collect());
        u = next;
    }
    FieldSample::new(u)
}
