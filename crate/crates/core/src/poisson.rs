//! Poisson brackets: canonical, Lie–Poisson and general bivector structures.
//!
//! Dynamics follows `dF/dt = {F, H}` throughout. Canonical coordinates are
//! ordered `z = (q¹..qⁿ, p₁..pₙ)` so that `{q, p} = 1`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::lie_core::LieAlgebraSpec;

/// Relative step of central differences for gradients without an analytic form.
pub const GRADIENT_STEP: f64 = 1e-6;
/// Relative step used when differentiating bracket values (nested brackets).
pub const NESTED_STEP: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PoissonError {
    #[error("dimension mismatch: structure has {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Darboux chart is singular on the axis Σ₁ = Σ₂ = 0")]
    ChartSingular,
    #[error("the origin is a zero-dimensional orbit with no Darboux chart")]
    OriginOrbit,
}

pub type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradEval = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A smooth function on ℝⁿ with an optional analytic gradient.
#[derive(Clone)]
pub struct ScalarField {
    arity: usize,
    f: Eval,
    grad: Option<GradEval>,
    step: f64,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("arity", &self.arity)
            .field("analytic_gradient", &self.grad.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn new(arity: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { arity, f: Arc::new(f), grad: None, step: GRADIENT_STEP }
    }

    pub fn with_gradient(mut self, g: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.grad = Some(Arc::new(g));
        self
    }

    /// Relative step for finite-difference gradients.
    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn has_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        (self.f)(z)
    }

    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        match &self.grad {
            Some(g) => g(z),
            None => self.gradient_fd(z, self.step),
        }
    }

    /// Central differences with step `step·(1 + |z_i|)`.
    pub fn gradient_fd(&self, z: &[f64], step: f64) -> Vec<f64> {
        let mut w = z.to_vec();
        (0..z.len())
            .map(|i| {
                let h = step * (1.0 + z[i].abs());
                w[i] = z[i] + h;
                let fp = self.value(&w);
                w[i] = z[i] - h;
                let fm = self.value(&w);
                w[i] = z[i];
                (fp - fm) / (2.0 * h)
            })
            .collect()
    }

    /// Largest relative mismatch between analytic and finite-difference gradients.
    pub fn gradient_check(&self, points: &[Vec<f64>]) -> Option<f64> {
        self.grad.as_ref()?;
        let mut worst: f64 = 0.0;
        for z in points {
            let a = self.gradient(z);
            let n = self.gradient_fd(z, GRADIENT_STEP);
            for (x, y) in a.iter().zip(&n) {
                worst = worst.max((x - y).abs() / (1.0 + x.abs()));
            }
        }
        Some(worst)
    }

    pub fn constant(arity: usize, c: f64) -> Self {
        Self::new(arity, move |_| c).with_gradient(move |z| vec![0.0; z.len()])
    }

    /// The coordinate function `z_i`.
    pub fn coordinate(arity: usize, i: usize) -> Self {
        Self::new(arity, move |z| z[i]).with_gradient(move |z| {
            let mut g = vec![0.0; z.len()];
            g[i] = 1.0;
            g
        })
    }

    pub fn linear(coeffs: Vec<f64>) -> Self {
        let n = coeffs.len();
        let c2 = coeffs.clone();
        Self::new(n, move |z| coeffs.iter().zip(z).map(|(a, b)| a * b).sum())
            .with_gradient(move |_| c2.clone())
    }

    /// `½ zᵀAz + bᵀz + c` with `A` symmetrized.
    pub fn quadratic(a: DMatrix<f64>, b: Vec<f64>, c: f64) -> Self {
        let n = b.len();
        let a = (&a + a.transpose()) * 0.5;
        let a2 = a.clone();
        let b2 = b.clone();
        Self::new(n, move |z| {
            let v = DVector::from_column_slice(z);
            0.5 * v.dot(&(&a * &v)) + b.iter().zip(z).map(|(x, y)| x * y).sum::<f64>() + c
        })
        .with_gradient(move |z| {
            let v = DVector::from_column_slice(z);
            let g = &a2 * v;
            g.iter().zip(&b2).map(|(x, y)| x + y).collect()
        })
    }

    pub fn product(f: &ScalarField, g: &ScalarField) -> Self {
        let (f1, g1) = (f.clone(), g.clone());
        let prod = Self::new(f.arity, move |z| f1.value(z) * g1.value(z));
        if f.has_gradient() && g.has_gradient() {
            let (f2, g2) = (f.clone(), g.clone());
            prod.with_gradient(move |z| {
                let (fv, gv) = (f2.value(z), g2.value(z));
                f2.gradient(z).iter().zip(g2.gradient(z)).map(|(a, b)| a * gv + fv * b).collect()
            })
        } else {
            prod
        }
    }
}

/// Sign of the Lie–Poisson tensor `Γ^ab = ± z_c C^c_ab`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BracketSign {
    /// `{z_a, z_b} = z_c C^c_ab`.
    #[default]
    Plus,
    /// `{z_a, z_b} = −z_c C^c_ab`, the bracket of co-moving (body) momenta.
    Minus,
}

pub type BivectorEval = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

#[derive(Clone)]
pub enum PoissonStructure {
    /// ℝ²ⁿ with coordinates `(q, p)`.
    Canonical { n: usize },
    LiePoisson { algebra: LieAlgebraSpec, sign: BracketSign },
    /// Arbitrary bivector field; the evaluator is antisymmetrized on use.
    Bivector { dim: usize, eval: BivectorEval },
}

impl fmt::Debug for PoissonStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Canonical { n } => write!(f, "Canonical {{ n: {n} }}"),
            Self::LiePoisson { algebra, sign } => {
                write!(f, "LiePoisson {{ algebra: {}, sign: {sign:?} }}", algebra.label())
            }
            Self::Bivector { dim, .. } => write!(f, "Bivector {{ dim: {dim} }}"),
        }
    }
}

impl PoissonStructure {
    pub fn lie_poisson(algebra: LieAlgebraSpec) -> Self {
        Self::LiePoisson { algebra, sign: BracketSign::Plus }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Canonical { n } => 2 * n,
            Self::LiePoisson { algebra, .. } => algebra.dim(),
            Self::Bivector { dim, .. } => *dim,
        }
    }

    /// Poisson tensor `Γ^ab(z)`, exactly antisymmetric.
    pub fn matrix(&self, z: &[f64]) -> DMatrix<f64> {
        match self {
            Self::Canonical { n } => {
                let n = *n;
                let mut m = DMatrix::zeros(2 * n, 2 * n);
                for i in 0..n {
                    m[(i, n + i)] = 1.0;
                    m[(n + i, i)] = -1.0;
                }
                m
            }
            Self::LiePoisson { algebra, sign } => {
                let n = algebra.dim();
                let s = match sign {
                    BracketSign::Plus => 1.0,
                    BracketSign::Minus => -1.0,
                };
                let mut m = DMatrix::zeros(n, n);
                for a in 0..n {
                    for b in a + 1..n {
                        let v: f64 = (0..n).map(|c| z[c] * algebra.c(c, a, b)).sum::<f64>() * s;
                        m[(a, b)] = v;
                        m[(b, a)] = -v;
                    }
                }
                m
            }
            Self::Bivector { eval, .. } => {
                let m = eval(z);
                let mut out = (&m - m.transpose()) * 0.5;
                for i in 0..out.nrows() {
                    out[(i, i)] = 0.0;
                }
                out
            }
        }
    }

    fn check(&self, len: usize) -> Result<(), PoissonError> {
        if len != self.dim() {
            Err(PoissonError::DimensionMismatch { expected: self.dim(), got: len })
        } else {
            Ok(())
        }
    }
}

/// `{f, g}(z) = ∂_a f Γ^ab(z) ∂_b g`.
pub fn bracket(p: &PoissonStructure, f: &ScalarField, g: &ScalarField, z: &[f64]) -> Result<f64, PoissonError> {
    p.check(z.len())?;
    p.check(f.arity())?;
    p.check(g.arity())?;
    let gm = p.matrix(z);
    let df = DVector::from_vec(f.gradient(z));
    let dg = DVector::from_vec(g.gradient(z));
    Ok(df.dot(&(gm * dg)))
}

/// The function `z ↦ {f, g}(z)`, differentiated by finite differences with the nested step.
pub fn bracket_field(p: &PoissonStructure, f: &ScalarField, g: &ScalarField) -> ScalarField {
    let (p, f, g) = (p.clone(), f.clone(), g.clone());
    let n = p.dim();
    ScalarField::new(n, move |z| bracket(&p, &f, &g, z).unwrap_or(f64::NAN)).with_step(NESTED_STEP)
}

/// Largest cyclic Jacobi sum `|{{f,g},h} + {{g,h},f} + {{h,f},g}|` over the points.
pub fn jacobi_residual(
    p: &PoissonStructure,
    f: &ScalarField,
    g: &ScalarField,
    h: &ScalarField,
    points: &[Vec<f64>],
) -> Result<f64, PoissonError> {
    let fg = bracket_field(p, f, g);
    let gh = bracket_field(p, g, h);
    let hf = bracket_field(p, h, f);
    let mut worst: f64 = 0.0;
    for z in points {
        let s = bracket(p, &fg, h, z)? + bracket(p, &gh, f, z)? + bracket(p, &hf, g, z)?;
        worst = worst.max(s.abs());
    }
    Ok(worst)
}

/// `X^a = Γ^ab ∂_b H`; canonical structures give `(∂H/∂p, −∂H/∂q)`.
pub fn hamiltonian_vf(p: &PoissonStructure, h: &ScalarField, z: &[f64]) -> Result<DVector<f64>, PoissonError> {
    p.check(z.len())?;
    p.check(h.arity())?;
    Ok(p.matrix(z) * DVector::from_vec(h.gradient(z)))
}

/// Classical RK4 along the Hamiltonian vector field.
pub fn flow(
    p: &PoissonStructure,
    h: &ScalarField,
    z0: &[f64],
    dt: f64,
    steps: usize,
) -> Result<Vec<f64>, PoissonError> {
    let mut z = DVector::from_column_slice(z0);
    for _ in 0..steps {
        let k1 = hamiltonian_vf(p, h, z.as_slice())?;
        let k2 = hamiltonian_vf(p, h, (&z + &k1 * (0.5 * dt)).as_slice())?;
        let k3 = hamiltonian_vf(p, h, (&z + &k2 * (0.5 * dt)).as_slice())?;
        let k4 = hamiltonian_vf(p, h, (&z + &k3 * dt).as_slice())?;
        z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    Ok(z.as_slice().to_vec())
}

/// The quadratic Casimir `Σ z_a²` of so(3)*.
pub fn casimir_so3(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum()
}

/// Darboux chart `(q, p, ‖z‖)` with `q = atan2(z₂, z₁)`, `p = z₃`.
pub fn darboux_so3(z: &[f64]) -> Result<(f64, f64, f64), PoissonError> {
    let r = casimir_so3(z).sqrt();
    if r == 0.0 {
        return Err(PoissonError::OriginOrbit);
    }
    let rho = z[0].hypot(z[1]);
    if rho <= 1e-12 * r {
        return Err(PoissonError::ChartSingular);
    }
    Ok((z[1].atan2(z[0]), z[2], r))
}

pub fn darboux_so3_inverse(q: f64, p: f64, r: f64) -> [f64; 3] {
    let rho = (r * r - p * p).max(0.0).sqrt();
    [rho * q.cos(), rho * q.sin(), p]
}

/// `({q,p}, {q,z}, {p,z})` under the plus Lie–Poisson bracket of so(3), with
/// analytic chart gradients.
pub fn darboux_brackets(algebra: &LieAlgebraSpec, z: &[f64]) -> Result<[f64; 3], PoissonError> {
    darboux_so3(z)?;
    let p = PoissonStructure::lie_poisson(algebra.clone());
    let q = ScalarField::new(3, |z| z[1].atan2(z[0])).with_gradient(|z| {
        let rho2 = z[0] * z[0] + z[1] * z[1];
        vec![-z[1] / rho2, z[0] / rho2, 0.0]
    });
    let pp = ScalarField::coordinate(3, 2);
    let zc = ScalarField::new(3, |z| casimir_so3(z).sqrt()).with_gradient(|z| {
        let r = casimir_so3(z).sqrt();
        z.iter().map(|v| v / r).collect()
    });
    Ok([bracket(&p, &q, &pp, z)?, bracket(&p, &q, &zc, z)?, bracket(&p, &pp, &zc, z)?])
}
