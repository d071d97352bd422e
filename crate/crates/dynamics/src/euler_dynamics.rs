//! Generalized Euler equations for invariant kinetic energies on matrix groups.
//!
//! Left-invariant models carry co-moving momenta `Σ̂` and obey
//! `dΣ̂_a/dt = −γ^bc Σ̂_c Σ̂_d C^d_ab + N̂_a` with `dg/dt = g Ω̂`; right-invariant
//! models carry spatial momenta `Σ` with `dΣ_a/dt = γ^bc Σ_c Σ_d C^d_ab + N_a` and
//! `dg/dt = Ω g`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use phasecraft_core::cocycle::null_space;
use phasecraft_core::lie_core::{
    adjoint_matrix, fixtures, group_exp, killing_tensor, BilinearForm, GroupElement, GroupTag, LieAlgebraSpec,
    LieError,
};

/// Step of the central differences used for torques.
pub const TORQUE_STEP: f64 = 1e-6;
pub const MIDPOINT_TOL: f64 = 1e-12;
pub const MIDPOINT_MAX_ITER: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("kinetic metric is singular")]
    SingularMetric,
    #[error("kinetic metric is not positive definite")]
    NotPositiveDefinite,
    #[error("model has no potential")]
    NoPotential,
    #[error("implicit midpoint did not converge in {iterations} iterations (last update {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state became non-finite")]
    NonFinite,
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    Rk4,
    #[default]
    LieMidpoint,
}

pub type PotentialFn = Arc<dyn Fn(&DMatrix<f64>) -> f64 + Send + Sync>;
/// Returns `(N, N̂)` for a configuration.
pub type TorqueFn = Arc<dyn Fn(&DMatrix<f64>) -> (DVector<f64>, DVector<f64>) + Send + Sync>;

/// A potential on the group, optionally with analytic torques overriding finite differences.
#[derive(Clone)]
pub struct Potential {
    name: String,
    value: PotentialFn,
    torque: Option<TorqueFn>,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential").field("name", &self.name).field("analytic", &self.torque.is_some()).finish()
    }
}

impl Potential {
    pub fn new(name: impl Into<String>, value: impl Fn(&DMatrix<f64>) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), value: Arc::new(value), torque: None }
    }

    pub fn with_torque(
        mut self,
        torque: impl Fn(&DMatrix<f64>) -> (DVector<f64>, DVector<f64>) + Send + Sync + 'static,
    ) -> Self {
        self.torque = Some(Arc::new(torque));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, g: &DMatrix<f64>) -> f64 {
        (self.value)(g)
    }

    /// `𝒱(g) = Tr(K g)` with analytic torques `N_a = −Tr(K E_a g)`, `N̂_a = −Tr(K g E_a)`.
    pub fn trace_linear(algebra: &LieAlgebraSpec, k: DMatrix<f64>) -> Result<Self, LieError> {
        let basis: Vec<DMatrix<f64>> =
            algebra.basis().ok_or_else(|| LieError::NoBasis(algebra.label().to_string()))?.to_vec();
        let k2 = k.clone();
        Ok(Self::new("trace_linear", move |g| (&k * g).trace()).with_torque(move |g| {
            let n = basis.len();
            let spatial = DVector::from_fn(n, |a, _| -(&k2 * &basis[a] * g).trace());
            let body = DVector::from_fn(n, |a, _| -(&k2 * g * &basis[a]).trace());
            (spatial, body)
        }))
    }

    /// Heavy top on SO(3): `𝒱(R) = w · e₃ᵀ R c` for the body-frame centre of mass `c`.
    pub fn heavy_top(weight: f64, center: [f64; 3]) -> Self {
        let mut k = DMatrix::zeros(3, 3);
        for (i, c) in center.iter().enumerate() {
            k[(i, 2)] = weight * c;
        }
        let mut p = Self::trace_linear(&fixtures::so3(), k).expect("so3 fixture has a basis");
        p.name = "heavy_top".into();
        p
    }
}

/// Kinetic energy `½ γ^ab Σ_a Σ_b` of given chirality on a matrix group, plus an optional potential.
#[derive(Clone, Debug)]
pub struct InvariantModel {
    algebra: LieAlgebraSpec,
    metric: BilinearForm,
    metric_inv: DMatrix<f64>,
    chirality: Chirality,
    group: GroupTag,
    potential: Option<Potential>,
    inertia: Option<[f64; 3]>,
    center: Vec<DVector<f64>>,
    killing_inv: Option<DMatrix<f64>>,
}

impl InvariantModel {
    /// Requires a positive-definite metric and an algebra with a matrix basis.
    pub fn new(
        algebra: LieAlgebraSpec,
        metric: BilinearForm,
        chirality: Chirality,
        group: GroupTag,
    ) -> Result<Self, DynamicsError> {
        if !metric.is_positive_definite() {
            return Err(DynamicsError::NotPositiveDefinite);
        }
        Self::new_indefinite(algebra, metric, chirality, group)
    }

    /// Accepts any nonsingular metric, e.g. the doubly-invariant forms on gl(n).
    pub fn new_indefinite(
        algebra: LieAlgebraSpec,
        metric: BilinearForm,
        chirality: Chirality,
        group: GroupTag,
    ) -> Result<Self, DynamicsError> {
        if metric.dim() != algebra.dim() {
            return Err(DynamicsError::DimensionMismatch { expected: algebra.dim(), got: metric.dim() });
        }
        if algebra.basis().is_none() {
            return Err(LieError::NoBasis(algebra.label().to_string()).into());
        }
        let metric_inv = metric.inverse().ok_or(DynamicsError::SingularMetric)?.clone();
        let n = algebra.dim();
        // center: X with C^k_ij X^i = 0 for all j, k
        let mut rows = DMatrix::zeros(n * n, n);
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    rows[(k * n + j, i)] = algebra.c(k, i, j);
                }
            }
        }
        let center = null_space(&rows);
        let killing = killing_tensor(&algebra, 1.0, 0.0);
        let killing_inv = killing.inverse().map(|inv| {
            // report a positive Casimir for compact algebras
            if killing.scaled(-1.0).is_positive_definite() {
                -inv
            } else {
                inv.clone()
            }
        });
        Ok(Self { algebra, metric, metric_inv, chirality, group, potential: None, inertia: None, center, killing_inv })
    }

    /// Free rigid body on SO(3) with principal moments `I_a > 0`, left-invariant.
    pub fn rigid_body(moments: [f64; 3]) -> Result<Self, DynamicsError> {
        if moments.iter().any(|&i| !(i > 0.0) || !i.is_finite()) {
            return Err(DynamicsError::NotPositiveDefinite);
        }
        let mut m = Self::new(fixtures::so3(), BilinearForm::diagonal(&moments), Chirality::Left, GroupTag::rotations(3))?;
        m.inertia = Some(moments);
        Ok(m)
    }

    /// `γ(X, Y) = I Tr(XᵀY) + A Tr(XY) + B TrX TrY` on gl(n); with `I = 0` it is invariant
    /// under both left and right translations.
    pub fn gl_affine(n: usize, i: f64, a: f64, b: f64, chirality: Chirality) -> Result<Self, DynamicsError> {
        let alg = fixtures::gl(n);
        let basis = alg.basis().expect("gl fixture has a basis").to_vec();
        let d = basis.len();
        let mut g = DMatrix::zeros(d, d);
        for p in 0..d {
            for q in 0..d {
                g[(p, q)] = i * (basis[p].transpose() * &basis[q]).trace()
                    + a * (&basis[p] * &basis[q]).trace()
                    + b * basis[p].trace() * basis[q].trace();
            }
        }
        Self::new_indefinite(alg, BilinearForm::new(g)?, chirality, GroupTag::GeneralLinear)
    }

    pub fn with_potential(mut self, potential: Potential) -> Self {
        self.potential = Some(potential);
        self
    }

    pub fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    pub fn metric(&self) -> &BilinearForm {
        &self.metric
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn group(&self) -> &GroupTag {
        &self.group
    }

    pub fn potential(&self) -> Option<&Potential> {
        self.potential.as_ref()
    }

    pub fn inertia(&self) -> Option<[f64; 3]> {
        self.inertia
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `Σ_a = γ_ab Ω^b`.
    pub fn legendre(&self, omega: &[f64]) -> Result<DVector<f64>, DynamicsError> {
        self.check(omega.len())?;
        Ok(self.metric.coeffs() * DVector::from_column_slice(omega))
    }

    pub fn legendre_inv(&self, sigma: &[f64]) -> Result<DVector<f64>, DynamicsError> {
        self.check(sigma.len())?;
        Ok(&self.metric_inv * DVector::from_column_slice(sigma))
    }

    /// `½ γ^ab Σ_a Σ_b + 𝒱(g)`.
    pub fn energy(&self, state: &BodyState) -> f64 {
        let s = &state.sigma;
        let kin = 0.5 * s.dot(&(&self.metric_inv * s));
        kin + self.potential.as_ref().map_or(0.0, |p| p.value(&state.g.matrix))
    }

    /// Linear Casimirs from the centre of the algebra, then the quadratic Killing Casimir
    /// when the Killing form is nondegenerate (sign chosen positive for compact algebras).
    pub fn casimirs(&self, sigma: &[f64]) -> Vec<f64> {
        let s = DVector::from_column_slice(sigma);
        let mut out: Vec<f64> = self.center.iter().map(|z| z.dot(&s)).collect();
        if let Some(k) = &self.killing_inv {
            out.push(s.dot(&(k * &s)));
        }
        out
    }

    fn check(&self, len: usize) -> Result<(), DynamicsError> {
        if len != self.dim() {
            Err(DynamicsError::DimensionMismatch { expected: self.dim(), got: len })
        } else {
            Ok(())
        }
    }

    /// Geodetic part of the balance law.
    fn geodetic_rhs(&self, sigma: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        let omega = &self.metric_inv * sigma;
        let sign = match self.chirality {
            Chirality::Left => -1.0,
            Chirality::Right => 1.0,
        };
        DVector::from_fn(n, |a, _| {
            let mut s = 0.0;
            for b in 0..n {
                if omega[b] == 0.0 {
                    continue;
                }
                for d in 0..n {
                    s += omega[b] * sigma[d] * self.algebra.c(d, a, b);
                }
            }
            sign * s
        })
    }

    fn torque_for(&self, g: &DMatrix<f64>) -> Result<DVector<f64>, DynamicsError> {
        let (n, nhat) = torque_at(self, g)?;
        Ok(match self.chirality {
            Chirality::Left => nhat,
            Chirality::Right => n,
        })
    }

    fn velocity_matrix(&self, sigma: &DVector<f64>) -> Result<DMatrix<f64>, DynamicsError> {
        let omega = &self.metric_inv * sigma;
        Ok(self.algebra.to_matrix(omega.as_slice())?)
    }

    fn translate(&self, g: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
        match self.chirality {
            Chirality::Left => g * x,
            Chirality::Right => x * g,
        }
    }
}

/// Configuration and momentum; `sigma` is co-moving for left models, spatial for right ones.
#[derive(Clone, Debug)]
pub struct BodyState {
    pub g: GroupElement,
    pub sigma: DVector<f64>,
    pub time: f64,
}

impl BodyState {
    pub fn new(g: GroupElement, sigma: &[f64]) -> Self {
        Self { g, sigma: DVector::from_column_slice(sigma), time: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.sigma.iter().chain(self.g.matrix.iter()).all(|v| v.is_finite())
    }
}

pub fn euler_rhs(model: &InvariantModel, state: &BodyState) -> Result<DVector<f64>, DynamicsError> {
    model.check(state.sigma.len())?;
    let mut rhs = model.geodetic_rhs(&state.sigma);
    if model.potential.is_some() {
        rhs += model.torque_for(&state.g.matrix)?;
    }
    Ok(rhs)
}

fn torque_at(model: &InvariantModel, g: &DMatrix<f64>) -> Result<(DVector<f64>, DVector<f64>), DynamicsError> {
    let pot = model.potential.as_ref().ok_or(DynamicsError::NoPotential)?;
    if let Some(t) = &pot.torque {
        return Ok(t(g));
    }
    let basis = model.algebra.basis().expect("checked at construction");
    let n = basis.len();
    let h = TORQUE_STEP;
    let mut spatial = DVector::zeros(n);
    let mut body = DVector::zeros(n);
    for (a, e) in basis.iter().enumerate() {
        let ep = group_exp(&(e * h), model.group.clone())?.matrix;
        let em = group_exp(&(e * -h), model.group.clone())?.matrix;
        spatial[a] = -(pot.value(&(&ep * g)) - pot.value(&(&em * g))) / (2.0 * h);
        body[a] = -(pot.value(&(g * &ep)) - pot.value(&(g * &em))) / (2.0 * h);
    }
    Ok((spatial, body))
}

/// Generalized torques `(N_a, N̂_a) = (−ℒ_a𝒱, −ℛ_a𝒱)`, differentiated along
/// `exp(tE_a)·g` and `g·exp(tE_a)`.
pub fn torque_from_potential(
    model: &InvariantModel,
    g: &GroupElement,
) -> Result<(DVector<f64>, DVector<f64>), DynamicsError> {
    torque_at(model, &g.matrix)
}

/// `max_a |N̂_a − N_b A^b_a|` where `A` is the matrix of `Ad_g`.
pub fn torque_relation_residual(model: &InvariantModel, g: &GroupElement) -> Result<f64, DynamicsError> {
    let (n, nhat) = torque_from_potential(model, g)?;
    let a = adjoint_matrix(&model.algebra, g)?;
    Ok((nhat - a.transpose() * n).amax())
}

pub fn step(model: &InvariantModel, state: &BodyState, dt: f64, method: Method) -> Result<BodyState, DynamicsError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(DynamicsError::InvalidStep(dt));
    }
    model.check(state.sigma.len())?;
    let next = match method {
        Method::Rk4 => rk4(model, state, dt)?,
        Method::LieMidpoint => lie_midpoint(model, state, dt)?,
    };
    if !next.is_finite() {
        return Err(DynamicsError::NonFinite);
    }
    Ok(next)
}

fn rk4(model: &InvariantModel, state: &BodyState, dt: f64) -> Result<BodyState, DynamicsError> {
    let f = |g: &DMatrix<f64>, s: &DVector<f64>| -> Result<(DMatrix<f64>, DVector<f64>), DynamicsError> {
        let gdot = model.translate(g, &model.velocity_matrix(s)?);
        let mut sdot = model.geodetic_rhs(s);
        if model.potential.is_some() {
            sdot += model.torque_for(g)?;
        }
        Ok((gdot, sdot))
    };
    let (g0, s0) = (&state.g.matrix, &state.sigma);
    let (kg1, ks1) = f(g0, s0)?;
    let (kg2, ks2) = f(&(g0 + &kg1 * (0.5 * dt)), &(s0 + &ks1 * (0.5 * dt)))?;
    let (kg3, ks3) = f(&(g0 + &kg2 * (0.5 * dt)), &(s0 + &ks2 * (0.5 * dt)))?;
    let (kg4, ks4) = f(&(g0 + &kg3 * dt), &(s0 + &ks3 * dt))?;
    let g = g0 + (kg1 + kg2 * 2.0 + kg3 * 2.0 + kg4) * (dt / 6.0);
    let sigma = s0 + (ks1 + ks2 * 2.0 + ks3 * 2.0 + ks4) * (dt / 6.0);
    let g = GroupElement { matrix: g, tag: state.g.tag.clone() }.projected();
    Ok(BodyState { g, sigma, time: state.time + dt })
}

/// Half kick, geodetic implicit midpoint with exponential reconstruction, half kick.
fn lie_midpoint(model: &InvariantModel, state: &BodyState, dt: f64) -> Result<BodyState, DynamicsError> {
    let mut sigma = state.sigma.clone();
    if model.potential.is_some() {
        sigma += model.torque_for(&state.g.matrix)? * (0.5 * dt);
    }
    let s0 = sigma.clone();
    let mut s1 = &s0 + model.geodetic_rhs(&s0) * dt;
    let mut converged = false;
    let mut last = f64::INFINITY;
    for _ in 0..MIDPOINT_MAX_ITER {
        let mid = (&s0 + &s1) * 0.5;
        let next = &s0 + model.geodetic_rhs(&mid) * dt;
        last = (&next - &s1).amax();
        s1 = next;
        if last <= MIDPOINT_TOL * s1.amax().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(DynamicsError::NoConvergence { iterations: MIDPOINT_MAX_ITER, residual: last });
    }
    let mid = (&s0 + &s1) * 0.5;
    let x = model.velocity_matrix(&mid)? * dt;
    let e = group_exp(&x, state.g.tag.clone())?.matrix;
    let g = GroupElement { matrix: model.translate(&state.g.matrix, &e), tag: state.g.tag.clone() };
    let mut sigma = s1;
    if model.potential.is_some() {
        sigma += model.torque_for(&g.matrix)? * (0.5 * dt);
    }
    Ok(BodyState { g, sigma, time: state.time + dt })
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub energy: f64,
    pub casimirs: Vec<f64>,
    /// Spatial momenta for left models, co-moving momenta for right models.
    pub momentum_map: Vec<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BodyState>,
    pub diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// The momentum map constant along geodetic motion: `A^{-T} Σ̂` for left models,
/// `Aᵀ Σ` for right models, with `A` the matrix of `Ad_g`.
pub fn conserved_momentum(model: &InvariantModel, state: &BodyState) -> Result<DVector<f64>, DynamicsError> {
    let a = adjoint_matrix(&model.algebra, &state.g)?;
    Ok(match model.chirality {
        Chirality::Left => a.transpose().try_inverse().ok_or(LieError::Singular)? * &state.sigma,
        Chirality::Right => a.transpose() * &state.sigma,
    })
}

pub fn diagnostics(model: &InvariantModel, state: &BodyState) -> Result<Diagnostics, DynamicsError> {
    Ok(Diagnostics {
        energy: model.energy(state),
        casimirs: model.casimirs(state.sigma.as_slice()),
        momentum_map: conserved_momentum(model, state)?.as_slice().to_vec(),
    })
}

/// Integrates to `t_end` with a fixed step, sampling every `every` steps (and at the end).
pub fn integrate(
    model: &InvariantModel,
    initial: &BodyState,
    dt: f64,
    t_end: f64,
    method: Method,
    every: usize,
) -> Result<Trajectory, DynamicsError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(DynamicsError::InvalidStep(dt));
    }
    let steps = (t_end / dt).round() as usize;
    let every = every.max(1);
    let mut traj = Trajectory::default();
    let mut state = initial.clone();
    let t0 = state.time;
    let push = |traj: &mut Trajectory, s: &BodyState| -> Result<(), DynamicsError> {
        traj.times.push(s.time);
        traj.diagnostics.push(diagnostics(model, s)?);
        traj.states.push(s.clone());
        Ok(())
    };
    push(&mut traj, &state)?;
    for k in 1..=steps {
        state = step(model, &state, dt, method)?;
        // avoid accumulating round-off in the clock
        state.time = t0 + k as f64 * dt;
        if k % every == 0 || k == steps {
            push(&mut traj, &state)?;
        }
    }
    Ok(traj)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConservationReport {
    pub samples: usize,
    pub energy_drift: f64,
    pub casimir_drift: Vec<f64>,
    /// Per-component drift of the momentum map, relative to its initial norm.
    pub momentum_drift: Vec<f64>,
    /// Whether the momentum map is expected to be conserved (no potential).
    pub momentum_conserved: bool,
    /// A potential on the group breaks the reduction to the dual, so the
    /// Casimirs of the free flow stop being invariants.
    pub casimirs_conserved: bool,
}

fn rel_drift(values: impl Iterator<Item = f64> + Clone, reference: f64, scale: f64) -> f64 {
    let scale = if scale > 0.0 { scale } else { 1.0 };
    values.map(|v| (v - reference).abs()).fold(0.0, f64::max) / scale
}

/// Maximal relative drifts over the trajectory; empty trajectories give an empty report.
pub fn conservation_report(model: &InvariantModel, traj: &Trajectory) -> ConservationReport {
    let Some(first) = traj.diagnostics.first() else {
        return ConservationReport::default();
    };
    let d = &traj.diagnostics;
    let energy_drift = rel_drift(d.iter().map(|x| x.energy), first.energy, first.energy.abs());
    let casimir_drift = (0..first.casimirs.len())
        .map(|i| rel_drift(d.iter().map(|x| x.casimirs[i]), first.casimirs[i], first.casimirs[i].abs()))
        .collect();
    let norm = first.momentum_map.iter().map(|v| v * v).sum::<f64>().sqrt();
    let momentum_drift = (0..first.momentum_map.len())
        .map(|i| rel_drift(d.iter().map(|x| x.momentum_map[i]), first.momentum_map[i], norm))
        .collect();
    ConservationReport {
        samples: traj.len(),
        energy_drift,
        casimir_drift,
        momentum_drift,
        momentum_conserved: model.potential.is_none(),
        casimirs_conserved: model.potential.is_none(),
    }
}

/// `R_a = F^c γ_cd C^d_ab F^b`; zero exactly when `g₀ exp(F̂t)` solves the free equations.
pub fn relative_equilibria_residual(model: &InvariantModel, f: &[f64]) -> Result<DVector<f64>, DynamicsError> {
    model.check(f.len())?;
    let n = model.dim();
    let sigma = model.metric.coeffs() * DVector::from_column_slice(f);
    Ok(DVector::from_fn(n, |a, _| {
        let mut s = 0.0;
        for b in 0..n {
            if f[b] == 0.0 {
                continue;
            }
            for d in 0..n {
                s += sigma[d] * model.algebra.c(d, a, b) * f[b];
            }
        }
        s
    }))
}

/// Critical sets of `H = Σ Σ̂_a²/2I_a` on the sphere `‖Σ̂‖ = s`.
#[derive(Clone, Debug, PartialEq)]
pub enum CriticalSet {
    Point([f64; 3]),
    /// The circle of radius `radius` in the plane orthogonal to coordinate axis `normal`.
    Circle { normal: usize, radius: f64 },
    Sphere { radius: f64 },
}

impl CriticalSet {
    /// Sample point of the set at parameter `t` (ignored for points).
    pub fn point_at(&self, t: f64) -> [f64; 3] {
        match *self {
            CriticalSet::Point(p) => p,
            CriticalSet::Circle { normal, radius } => {
                let (i, j) = ((normal + 1) % 3, (normal + 2) % 3);
                let mut p = [0.0; 3];
                p[i] = radius * t.cos();
                p[j] = radius * t.sin();
                p
            }
            CriticalSet::Sphere { radius } => [radius * t.cos(), radius * t.sin(), 0.0],
        }
    }
}

/// Solutions of `∇H = λ∇F` on `F = ΣΣ̂² − s² = 0`, classified by degeneracy of the moments.
pub fn stationary_spins_so3(moments: [f64; 3], s: f64) -> Vec<CriticalSet> {
    if s == 0.0 {
        return vec![CriticalSet::Point([0.0; 3])];
    }
    let eq = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
    let [i1, i2, i3] = moments;
    let axis = |k: usize, sign: f64| {
        let mut p = [0.0; 3];
        p[k] = sign * s;
        CriticalSet::Point(p)
    };
    match (eq(i1, i2), eq(i2, i3), eq(i1, i3)) {
        (true, true, _) | (true, _, true) | (_, true, true) => vec![CriticalSet::Sphere { radius: s }],
        (true, false, false) => vec![axis(2, 1.0), axis(2, -1.0), CriticalSet::Circle { normal: 2, radius: s }],
        (false, true, false) => vec![axis(0, 1.0), axis(0, -1.0), CriticalSet::Circle { normal: 0, radius: s }],
        (false, false, true) => vec![axis(1, 1.0), axis(1, -1.0), CriticalSet::Circle { normal: 1, radius: s }],
        (false, false, false) => (0..3).flat_map(|k| [axis(k, 1.0), axis(k, -1.0)]).collect(),
    }
}
