//! Self-adjoint positive operators with closed-form eigensystems.
//!
//! An [`EigenSystem`] pairs a [`SpectralOperator`] (eigenvalue and
//! eigenfunction rules) with the quadrature rule that realizes the inner
//! product. Everything downstream works in the truncated eigenbasis: fields
//! are analyzed into Fourier coefficients, manipulated mode by mode and
//! synthesized back on the quadrature nodes.
//!
//! Modes are indexed from 1.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{hermite_functions, FieldSample, QuadratureRule};

pub const DEFAULT_SIMPSON_NODES: usize = 2049;
pub const DEFAULT_OSCILLATOR_WINDOW: f64 = 12.0;
pub const DEFAULT_OSCILLATOR_NODES: usize = 513;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    Line,
}

/// Eigenvalue and eigenfunction rules of a positive self-adjoint operator
/// with discrete spectrum and orthonormal eigenfunctions.
pub trait SpectralOperator: fmt::Debug + Send + Sync {
    fn descriptor(&self) -> OperatorDescriptor;

    fn domain(&self) -> Domain;

    /// `λ_k > 0`, `k ≥ 1`.
    fn eigenvalue(&self, k: usize) -> f64;

    /// `e_k(x)`, `k ≥ 1`.
    fn eigenfunction(&self, k: usize, x: f64) -> f64;

    /// `e_1(x), …, e_count(x)`.
    fn eigenfunctions(&self, count: usize, x: f64) -> Vec<f64> {
        (1..=count).map(|k| self.eigenfunction(k, x)).collect()
    }

    /// Largest mode count the default discretization resolves.
    fn max_modes(&self) -> usize;

    fn default_quadrature(&self) -> Result<QuadratureRule>;
}

/// `-u''` on `(a, b)` with homogeneous Dirichlet conditions.
#[derive(Debug, Clone, Copy)]
pub struct DirichletLaplacian {
    a: f64,
    b: f64,
    nodes: usize,
}

impl DirichletLaplacian {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("need a < b, got ({a}, {b})")));
        }
        Ok(DirichletLaplacian {
            a,
            b,
            nodes: DEFAULT_SIMPSON_NODES,
        })
    }

    fn wavenumber(&self) -> f64 {
        PI / (self.b - self.a)
    }
}

fn sine_mode(k: usize, x: f64, a: f64, b: f64, scale: f64) -> f64 {
    // exact zeros on the boundary nodes
    if x == a || x == b {
        return 0.0;
    }
    (2.0 / (b - a)).sqrt() * (k as f64 * scale * (x - a)).sin()
}

impl SpectralOperator for DirichletLaplacian {
    fn descriptor(&self) -> OperatorDescriptor {
        OperatorDescriptor::DirichletLaplacian {
            a: self.a,
            b: self.b,
        }
    }

    fn domain(&self) -> Domain {
        Domain::Interval {
            a: self.a,
            b: self.b,
        }
    }

    fn eigenvalue(&self, k: usize) -> f64 {
        let kf = k as f64;
        let w = self.wavenumber();
        kf * kf * (w * w)
    }

    fn eigenfunction(&self, k: usize, x: f64) -> f64 {
        sine_mode(k, x, self.a, self.b, self.wavenumber())
    }

    fn max_modes(&self) -> usize {
        simpson_max_modes(self.nodes)
    }

    fn default_quadrature(&self) -> Result<QuadratureRule> {
        QuadratureRule::composite_simpson(self.a, self.b, self.nodes)
    }
}

/// Simpson on `n` equispaced nodes integrates `sin(ix) sin(jx)` exactly for
/// `i + j < n - 1`.
fn simpson_max_modes(n: usize) -> usize {
    (n - 1) / 2 - 1
}

/// `-u''(x) + ε u''(π - x)` on `(0, π)` with `u(0) = u(π) = 0`, `|ε| < 1`.
///
/// Eigenfunctions are the Dirichlet sines `√(2/π) sin(kx)` and
/// `λ_k = (1 + (-1)^k ε) k²`: even modes `4(1+ε)j²`, odd modes
/// `(1-ε)(2j+1)²`. For `ε ≠ 0` the index order is not the eigenvalue order.
#[derive(Debug, Clone, Copy)]
pub struct Involution {
    epsilon: f64,
    nodes: usize,
}

impl Involution {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon.abs() < 1.0) {
            return Err(Error::invalid(format!(
                "involution coupling needs |epsilon| < 1, got {epsilon}"
            )));
        }
        Ok(Involution {
            epsilon,
            nodes: DEFAULT_SIMPSON_NODES,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl SpectralOperator for Involution {
    fn descriptor(&self) -> OperatorDescriptor {
        OperatorDescriptor::Involution {
            epsilon: self.epsilon,
        }
    }

    fn domain(&self) -> Domain {
        Domain::Interval { a: 0.0, b: PI }
    }

    fn eigenvalue(&self, k: usize) -> f64 {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (1.0 + sign * self.epsilon) * kf * kf
    }

    fn eigenfunction(&self, k: usize, x: f64) -> f64 {
        sine_mode(k, x, 0.0, PI, 1.0)
    }

    fn max_modes(&self) -> usize {
        simpson_max_modes(self.nodes)
    }

    fn default_quadrature(&self) -> Result<QuadratureRule> {
        QuadratureRule::composite_simpson(0.0, PI, self.nodes)
    }
}

/// One-dimensional harmonic oscillator `-u'' + x² u` on the line.
///
/// `λ_k = 2k - 1` with the Hermite functions `ψ_{k-1}` as eigenfunctions.
/// The line is truncated to `[-window, window]`; a mode is resolved when
/// its classical turning point `√(2k - 1)` sits at least 2 inside the window,
/// where the Hermite function has decayed below quadrature tolerance.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicOscillator {
    window: f64,
    nodes: usize,
}

impl HarmonicOscillator {
    pub fn new(window: f64, nodes: usize) -> Result<Self> {
        let op = HarmonicOscillator { window, nodes };
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::invalid(format!("window must be positive, got {window}")));
        }
        if op.max_modes() == 0 {
            return Err(Error::InsufficientResolution {
                requested: 1,
                max: 0,
            });
        }
        Ok(op)
    }
}

impl SpectralOperator for HarmonicOscillator {
    fn descriptor(&self) -> OperatorDescriptor {
        OperatorDescriptor::HarmonicOscillator {
            window: self.window,
            nodes: self.nodes,
        }
    }

    fn domain(&self) -> Domain {
        Domain::Line
    }

    fn eigenvalue(&self, k: usize) -> f64 {
        (2 * k - 1) as f64
    }

    fn eigenfunction(&self, k: usize, x: f64) -> f64 {
        hermite_functions(k, x)[k - 1]
    }

    fn eigenfunctions(&self, count: usize, x: f64) -> Vec<f64> {
        hermite_functions(count, x)
    }

    fn max_modes(&self) -> usize {
        let inner = self.window - 2.0;
        if inner <= 1.0 {
            return 0;
        }
        // 2k - 1 <= inner²
        let by_window = ((inner * inner + 1.0) / 2.0).floor() as usize;
        by_window.min(self.nodes / 2)
    }

    fn default_quadrature(&self) -> Result<QuadratureRule> {
        QuadratureRule::gauss_hermite_windowed(self.nodes, self.window)
    }
}

/// Catalog entries without closed-form eigenpairs suitable for 1D quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnsupportedOperator {
    FractionalSturmLiouville,
    RestrictedFractionalLaplacian,
    LandauHamiltonian,
    AnharmonicOscillator,
    HeisenbergHarmonicOscillator,
    HeisenbergAnharmonicOscillator,
}

impl UnsupportedOperator {
    pub const ALL: [UnsupportedOperator; 6] = [
        UnsupportedOperator::FractionalSturmLiouville,
        UnsupportedOperator::RestrictedFractionalLaplacian,
        UnsupportedOperator::LandauHamiltonian,
        UnsupportedOperator::AnharmonicOscillator,
        UnsupportedOperator::HeisenbergHarmonicOscillator,
        UnsupportedOperator::HeisenbergAnharmonicOscillator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UnsupportedOperator::FractionalSturmLiouville => "fractional_sturm_liouville",
            UnsupportedOperator::RestrictedFractionalLaplacian => "restricted_fractional_laplacian",
            UnsupportedOperator::LandauHamiltonian => "landau_hamiltonian",
            UnsupportedOperator::AnharmonicOscillator => "anharmonic_oscillator",
            UnsupportedOperator::HeisenbergHarmonicOscillator => "heisenberg_harmonic_oscillator",
            UnsupportedOperator::HeisenbergAnharmonicOscillator => {
                "heisenberg_anharmonic_oscillator"
            }
        }
    }

    pub fn reason(self) -> &'static str {
        match self {
            UnsupportedOperator::FractionalSturmLiouville => {
                "eigenpairs of the composed left Caputo / right Riemann-Liouville operator have no closed form"
            }
            UnsupportedOperator::RestrictedFractionalLaplacian => {
                "eigenpairs on a bounded domain have no closed form"
            }
            UnsupportedOperator::LandauHamiltonian => {
                "eigenspaces are infinite-dimensional Landau levels in two dimensions"
            }
            UnsupportedOperator::AnharmonicOscillator => {
                "eigenpairs of -d²/dx² + |x|^(2m) for m > 1 have no closed form"
            }
            UnsupportedOperator::HeisenbergHarmonicOscillator
            | UnsupportedOperator::HeisenbergAnharmonicOscillator => {
                "spectral data lives on the unitary dual of the Heisenberg group"
            }
        }
    }
}

/// Name plus numeric parameters; text form `name(p1, p2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum OperatorDescriptor {
    DirichletLaplacian { a: f64, b: f64 },
    Involution { epsilon: f64 },
    HarmonicOscillator { window: f64, nodes: usize },
    Unsupported { operator: UnsupportedOperator },
}

impl OperatorDescriptor {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorDescriptor::DirichletLaplacian { .. } => "dirichlet_laplacian",
            OperatorDescriptor::Involution { .. } => "involution",
            OperatorDescriptor::HarmonicOscillator { .. } => "harmonic_oscillator_1d",
            OperatorDescriptor::Unsupported { operator } => operator.name(),
        }
    }

    /// The involution coupling this operator carries (0 for the plain
    /// Dirichlet Laplacian on `(0, π)`), if it is one of the two.
    pub fn involution_epsilon(&self) -> Option<f64> {
        match *self {
            OperatorDescriptor::Involution { epsilon } => Some(epsilon),
            OperatorDescriptor::DirichletLaplacian { a, b } if a == 0.0 && b == PI => Some(0.0),
            _ => None,
        }
    }
}

impl fmt::Display for OperatorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorDescriptor::DirichletLaplacian { a, b } => {
                write!(f, "dirichlet_laplacian({a}, {b})")
            }
            OperatorDescriptor::Involution { epsilon } => write!(f, "involution({epsilon})"),
            OperatorDescriptor::HarmonicOscillator { window, nodes } => {
                write!(f, "harmonic_oscillator_1d({window}, {nodes})")
            }
            OperatorDescriptor::Unsupported { operator } => write!(f, "{}", operator.name()),
        }
    }
}

/// Parses a real number, accepting `pi` and simple multiples such as `2pi`
/// or `pi/2`.
pub(crate) fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase();
    let bad = || Error::Config(format!("not a number: `{text}`"));
    if let Some(pos) = t.find("pi") {
        let head = t[..pos].trim().trim_end_matches('*');
        let tail = t[pos + 2..].trim();
        let factor = if head.is_empty() {
            1.0
        } else if head == "-" {
            -1.0
        } else {
            head.parse::<f64>().map_err(|_| bad())?
        };
        let divisor = if tail.is_empty() {
            1.0
        } else {
            tail.strip_prefix('/')
                .ok_or_else(bad)?
                .trim()
                .parse::<f64>()
                .map_err(|_| bad())?
        };
        return Ok(factor * PI / divisor);
    }
    t.parse::<f64>().map_err(|_| bad())
}

impl FromStr for OperatorDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .rfind(')')
                    .filter(|&c| c > open)
                    .ok_or_else(|| Error::Config(format!("unbalanced parentheses in `{s}`")))?;
                (&s[..open], &s[open + 1..close])
            }
            None => (s, ""),
        };
        let name = name.trim().to_ascii_lowercase().replace('-', "_");
        let params: Vec<f64> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',').map(parse_real).collect::<Result<_>>()?
        };
        let arity = |n: usize| -> Result<()> {
            if params.len() > n {
                Err(Error::Config(format!(
                    "`{name}` takes at most {n} parameters, got {}",
                    params.len()
                )))
            } else {
                Ok(())
            }
        };
        match name.as_str() {
            "dirichlet_laplacian" | "dirichlet" | "sturm_liouville" => {
                arity(2)?;
                let a = params.first().copied().unwrap_or(0.0);
                let b = params.get(1).copied().unwrap_or(PI);
                Ok(OperatorDescriptor::DirichletLaplacian { a, b })
            }
            "involution" => {
                arity(1)?;
                Ok(OperatorDescriptor::Involution {
                    epsilon: params.first().copied().unwrap_or(0.0),
                })
            }
            "harmonic_oscillator_1d" | "harmonic_oscillator" | "oscillator" => {
                arity(2)?;
                let window = params.first().copied().unwrap_or(DEFAULT_OSCILLATOR_WINDOW);
                let nodes = match params.get(1) {
                    None => DEFAULT_OSCILLATOR_NODES,
                    Some(&n) if n >= 1.0 && n.fract() == 0.0 => n as usize,
                    Some(&n) => {
                        return Err(Error::Config(format!("node count must be a positive integer, got {n}")))
                    }
                };
                Ok(OperatorDescriptor::HarmonicOscillator { window, nodes })
            }
            other => UnsupportedOperator::ALL
                .into_iter()
                .find(|u| u.name() == other)
                .map(|operator| OperatorDescriptor::Unsupported { operator })
                .ok_or_else(|| Error::Config(format!("unknown operator `{other}`"))),
        }
    }
}

/// Builds the eigensystem for a catalog entry with its default quadrature.
pub fn make_operator(desc: &OperatorDescriptor) -> Result<EigenSystem> {
    let op: Arc<dyn SpectralOperator> = match *desc {
        OperatorDescriptor::DirichletLaplacian { a, b } => Arc::new(DirichletLaplacian::new(a, b)?),
        OperatorDescriptor::Involution { epsilon } => Arc::new(Involution::new(epsilon)?),
        OperatorDescriptor::HarmonicOscillator { window, nodes } => {
            Arc::new(HarmonicOscillator::new(window, nodes)?)
        }
        OperatorDescriptor::Unsupported { operator } => {
            return Err(Error::UnsupportedOperator {
                name: operator.name().to_string(),
                reason: operator.reason(),
            })
        }
    };
    let quadrature = op.default_quadrature()?;
    EigenSystem::new(op, quadrature)
}

/// Operator plus the quadrature rule realizing the inner product.
/// Immutable and cheap to clone.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    op: Arc<dyn SpectralOperator>,
    quadrature: Arc<QuadratureRule>,
}

impl EigenSystem {
    pub fn new(op: Arc<dyn SpectralOperator>, quadrature: QuadratureRule) -> Result<Self> {
        if quadrature.is_empty() {
            return Err(Error::invalid("quadrature rule has no nodes"));
        }
        Ok(EigenSystem {
            op,
            quadrature: Arc::new(quadrature),
        })
    }

    pub fn operator(&self) -> &dyn SpectralOperator {
        self.op.as_ref()
    }

    pub fn descriptor(&self) -> OperatorDescriptor {
        self.op.descriptor()
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quadrature
    }

    pub fn nodes(&self) -> &[f64] {
        self.quadrature.nodes()
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.op.eigenvalue(k)
    }

    pub fn eigenvalues(&self, l: usize) -> Vec<f64> {
        (1..=l).map(|k| self.op.eigenvalue(k)).collect()
    }

    pub fn max_modes(&self) -> usize {
        self.op.max_modes()
    }

    pub fn check_modes(&self, l: usize) -> Result<()> {
        if l == 0 {
            return Err(Error::invalid("mode count must be at least 1"));
        }
        let max = self.max_modes();
        if l > max {
            return Err(Error::InsufficientResolution { requested: l, max });
        }
        Ok(())
    }

    /// Samples a function on the quadrature nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<FieldSample> {
        self.quadrature.sample(f)
    }

    /// `e_k` on the quadrature nodes.
    pub fn mode(&self, k: usize) -> FieldSample {
        let values = self
            .nodes()
            .iter()
            .map(|&x| self.op.eigenfunction(k, x))
            .collect();
        FieldSample::new(values).expect("eigenfunctions are finite")
    }

    /// Row-major table `table[i][k-1] = e_k(x_i)` for `k ≤ l`.
    fn basis_table(&self, l: usize) -> Vec<Vec<f64>> {
        self.nodes()
            .iter()
            .map(|&x| self.op.eigenfunctions(l, x))
            .collect()
    }

    pub fn inner_product(&self, f: &FieldSample, g: &FieldSample) -> Result<f64> {
        self.quadrature.dot(f, g)
    }

    pub fn l2_norm(&self, f: &FieldSample) -> Result<f64> {
        self.quadrature.l2_norm(f)
    }

    /// First `l` Fourier coefficients `⟨f, e_k⟩`.
    pub fn analyze(&self, f: &FieldSample, l: usize) -> Result<Vec<f64>> {
        self.check_modes(l)?;
        self.quadrature.check(f)?;
        let mut coeffs = vec![0.0; l];
        let table = self.basis_table(l);
        for ((row, &w), &v) in table.iter().zip(self.quadrature.weights()).zip(f.values()) {
            let wv = w * v;
            if wv == 0.0 {
                continue;
            }
            for (c, e) in coeffs.iter_mut().zip(row) {
                *c += wv * e;
            }
        }
        Ok(coeffs)
    }

    /// `Σ_k c_k e_k` on the quadrature nodes.
    pub fn synthesize(&self, coeffs: &[f64]) -> Result<FieldSample> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("coefficient vector"));
        }
        if coeffs.is_empty() {
            return Ok(FieldSample::zeros(self.quadrature.len()));
        }
        self.check_modes(coeffs.len())?;
        let table = self.basis_table(coeffs.len());
        let values = table
            .iter()
            .map(|row| row.iter().zip(coeffs).map(|(e, c)| e * c).sum())
            .collect();
        FieldSample::new(values)
    }

    /// Spectral image `Σ_{k≤l} λ_k ⟨f, e_k⟩ e_k`.
    pub fn apply_operator(&self, f: &FieldSample, l: usize) -> Result<FieldSample> {
        let coeffs = self.analyze(f, l)?;
        let scaled: Vec<f64> = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| self.eigenvalue(i + 1) * c)
            .collect();
        self.synthesize(&scaled)
    }

    /// `max_{i,j ≤ l} |⟨e_i, e_j⟩ - δ_ij|` under the quadrature rule.
    pub fn orthonormality_defect(&self, l: usize) -> Result<f64> {
        self.check_modes(l)?;
        let table = self.basis_table(l);
        let w = self.quadrature.weights();
        let mut worst = 0.0f64;
        for i in 0..l {
            for j in i..l {
                let g: f64 = table
                    .iter()
                    .zip(w)
                    .map(|(row, wt)| wt * row[i] * row[j])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        Ok(worst)
    }

    /// First `count` eigenvalues in ascending order.
    pub fn sorted_eigenvalues(&self, count: usize) -> Vec<f64> {
        let mut v = self.eigenvalues(count);
        v.sort_by(f64::total_cmp);
        v
    }
}
