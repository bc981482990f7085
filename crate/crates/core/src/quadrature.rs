//! Quadrature rules realizing the inner product of the state space, and the
//! sampled-field type that lives on their nodes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    CompositeSimpson,
    GaussHermiteWindowed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: QuadratureKind,
}

impl QuadratureRule {
    /// Composite Simpson rule on `[a, b]` with `n` equispaced nodes, `n` odd.
    ///
    /// Endpoint weights are `h/3`, so the rule includes both boundary nodes.
    pub fn composite_simpson(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("empty interval ({a}, {b})")));
        }
        if n < 3 || n % 2 == 0 {
            return Err(Error::invalid(format!(
                "Simpson rule needs an odd node count >= 3, got {n}"
            )));
        }
        let h = (b - a) / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| if i == n - 1 { b } else { a + i as f64 * h })
            .collect();
        let weights = (0..n)
            .map(|i| {
                let c = if i == 0 || i == n - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * h / 3.0
            })
            .collect();
        Ok(QuadratureRule {
            nodes,
            weights,
            kind: QuadratureKind::CompositeSimpson,
        })
    }

    /// Gauss-Hermite rule of the given order, restricted to the nodes inside
    /// `[-window, window]`, with weights rescaled so that the rule integrates
    /// plain functions (not `e^{-x²}`-weighted ones).
    ///
    /// Nodes are the eigenvalues of the Hermite Jacobi matrix inside the
    /// window, isolated by Sturm-sequence bisection and polished by Newton on
    /// the Hermite function `ψ_order`. The rescaled weight at a node is
    /// `1 / (order · ψ_{order-1}(x)²)`, which never overflows.
    pub fn gauss_hermite_windowed(order: usize, window: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::invalid(format!(
                "Gauss-Hermite order must be at least 2, got {order}"
            )));
        }
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::invalid(format!("window must be positive, got {window}")));
        }
        let off: Vec<f64> = (1..order).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let below = |x: f64| sturm_count(&off, x);
        let lo = below(-window);
        let hi = below(window);
        let mut nodes = Vec::with_capacity(hi - lo);
        for idx in lo..hi {
            // idx-th eigenvalue: smallest x with below(x) > idx
            let (mut a, mut b) = (-window, window);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if below(m) > idx {
                    b = m;
                } else {
                    a = m;
                }
            }
            let mut x = 0.5 * (a + b);
            for _ in 0..3 {
                let psi = hermite_functions(order + 1, x);
                let value = psi[order];
                let slope = (2.0 * order as f64).sqrt() * psi[order - 1] - x * value;
                if slope == 0.0 {
                    break;
                }
                let step = value / slope;
                if !step.is_finite() || step.abs() > (b - a).max(1e-12) {
                    break;
                }
                x -= step;
            }
            nodes.push(x);
        }
        let weights = nodes
            .iter()
            .map(|&x| {
                let psi = hermite_functions(order, x);
                1.0 / (order as f64 * psi[order - 1] * psi[order - 1])
            })
            .collect();
        Ok(QuadratureRule {
            nodes,
            weights,
            kind: QuadratureKind::GaussHermiteWindowed,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Samples `f` on the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<FieldSample> {
        FieldSample::new(self.nodes.iter().map(|&x| f(x)).collect())
    }

    pub fn check(&self, field: &FieldSample) -> Result<()> {
        if field.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: field.len(),
            });
        }
        Ok(())
    }

    /// `Σ w_i v_i` over raw values.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: values.len(),
            });
        }
        Ok(self.weights.iter().zip(values).map(|(w, v)| w * v).sum())
    }

    /// `Σ w_i f_i g_i`.
    pub fn dot(&self, f: &FieldSample, g: &FieldSample) -> Result<f64> {
        self.check(f)?;
        self.check(g)?;
        Ok(self
            .weights
            .iter()
            .zip(f.values().iter().zip(g.values()))
            .map(|(w, (a, b))| w * a * b)
            .sum())
    }

    pub fn l2_norm(&self, f: &FieldSample) -> Result<f64> {
        Ok(self.dot(f, f)?.max(0.0).sqrt())
    }
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// zero diagonal and the given off-diagonal.
fn sturm_count(off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = -x;
    if q < 0.0 {
        count += 1;
    }
    for &b in off {
        let prev = if q == 0.0 { f64::EPSILON } else { q };
        q = -x - b * b / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Orthonormal Hermite functions `ψ_0(x), …, ψ_{count-1}(x)` by the
/// normalized three-term recurrence.
pub(crate) fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let psi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(psi0);
    if count == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * psi0);
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Values of a scalar function on the nodes of a quadrature rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    values: Vec<f64>,
}

impl FieldSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field sample"));
        }
        Ok(FieldSample { values })
    }

    pub fn zeros(len: usize) -> Self {
        FieldSample {
            values: vec![0.0; len],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> FieldSample {
        FieldSample {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: f64, other: &FieldSample) -> Result<FieldSample> {
        if other.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(FieldSample {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    pub fn sup_distance(&self, other: &FieldSample) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}
