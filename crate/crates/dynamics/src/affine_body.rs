//! Affinely rigid bodies: configurations `(x, φ)`, kinetic-energy models, the
//! two-polar decomposition `φ = L D Rᵀ` and the reduced Sutherland/Calogero lattices.
//!
//! Frames are orthonormal (`g = η = Id`) unless metrics are passed explicitly.
//! Momenta: `P^A_i` is conjugate to `φ^i_A`, `Σ = φP`, `Σ̂ = Pφ`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use phasecraft_core::lie_core::{group_exp, GroupElement, GroupTag, LieError};

use crate::euler_dynamics::{euler_rhs, BodyState, Chirality, DynamicsError, InvariantModel};

pub const DET_FLOOR: f64 = 1e-12;
pub const DEGENERATE_GAP: f64 = 1e-10;
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AffineError {
    #[error("configuration reverses orientation (det φ = {0})")]
    OrientationReversed(f64),
    #[error("configuration is singular (det φ = {0})")]
    Singular(f64),
    #[error("lattice points {a} and {b} collide")]
    SingularConfiguration { a: usize, b: usize },
    #[error("operation does not apply to this inertia model")]
    ModelMismatch,
    #[error("invalid inertial constants: {0}")]
    InvalidConstants(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Position, internal configuration and their conjugate momenta.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineState {
    pub x: DVector<f64>,
    pub phi: DMatrix<f64>,
    pub p: DVector<f64>,
    /// Co-moving affine spin `Σ̂ = Pφ`.
    pub sigma_hat: DMatrix<f64>,
}

impl AffineState {
    pub fn new(x: DVector<f64>, phi: DMatrix<f64>, p: DVector<f64>, sigma_hat: DMatrix<f64>) -> Result<Self, AffineError> {
        let n = phi.nrows();
        for len in [phi.ncols(), x.len(), p.len(), sigma_hat.nrows(), sigma_hat.ncols()] {
            if len != n {
                return Err(AffineError::DimensionMismatch { expected: n, got: len });
            }
        }
        let det = phi.determinant();
        if det.abs() < DET_FLOOR {
            return Err(AffineError::Singular(det));
        }
        Ok(Self { x, phi, p, sigma_hat })
    }

    /// Internal state only, at rest translationally at the origin.
    pub fn internal(phi: DMatrix<f64>, sigma_hat: DMatrix<f64>) -> Result<Self, AffineError> {
        let n = phi.nrows();
        Self::new(DVector::zeros(n), phi, DVector::zeros(n), sigma_hat)
    }

    /// From the canonical momentum `P^A_i` conjugate to `φ^i_A`.
    pub fn from_canonical(x: DVector<f64>, phi: DMatrix<f64>, p: DVector<f64>, big_p: &DMatrix<f64>) -> Result<Self, AffineError> {
        let sigma_hat = big_p * &phi;
        Self::new(x, phi, p, sigma_hat)
    }

    pub fn dim(&self) -> usize {
        self.phi.nrows()
    }

    fn phi_inv(&self) -> DMatrix<f64> {
        self.phi.clone().try_inverse().expect("checked nonsingular")
    }

    /// Spatial affine spin `Σ = φ Σ̂ φ⁻¹`.
    pub fn sigma(&self) -> DMatrix<f64> {
        &self.phi * &self.sigma_hat * self.phi_inv()
    }

    /// Canonical momentum `P = Σ̂ φ⁻¹`.
    pub fn canonical_momentum(&self) -> DMatrix<f64> {
        &self.sigma_hat * self.phi_inv()
    }
}

/// `(a, 1/b, 1/c)` of the affinely invariant Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineConstants {
    pub a: f64,
    pub inv_b: f64,
    pub inv_c: f64,
}

impl AffineConstants {
    pub fn new(a: f64, inv_b: f64, inv_c: f64) -> Result<Self, AffineError> {
        if a == 0.0 || !a.is_finite() || !inv_b.is_finite() || !inv_c.is_finite() {
            return Err(AffineError::InvalidConstants(format!("a = {a}, 1/b = {inv_b}, 1/c = {inv_c}")));
        }
        Ok(Self { a, inv_b, inv_c })
    }

    /// From the velocity-side constants: `a = I + A`, `1/b = −B/((I+A)(I+A+nB))`, `1/c = I/(I² − A²)`.
    pub fn from_iab(i: f64, a: f64, b: f64, n: usize) -> Result<Self, AffineError> {
        let s = i + a;
        let t = s + n as f64 * b;
        if s == 0.0 || (b != 0.0 && t == 0.0) || (i != 0.0 && i * i == a * a) {
            return Err(AffineError::InvalidConstants(format!("(I, A, B) = ({i}, {a}, {b}) has no Legendre inverse")));
        }
        let inv_b = if b == 0.0 { 0.0 } else { -b / (s * t) };
        let inv_c = if i == 0.0 { 0.0 } else { i / (i * i - a * a) };
        Self::new(s, inv_b, inv_c)
    }

    /// Largest mismatch with the constants derived from `(I, A, B)`.
    pub fn consistency_residual(&self, i: f64, a: f64, b: f64, n: usize) -> Result<f64, AffineError> {
        let o = Self::from_iab(i, a, b, n)?;
        Ok((o.a - self.a).abs().max((o.inv_b - self.inv_b).abs()).max((o.inv_c - self.inv_c).abs()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InertiaModel {
    /// `T = (m/2)|v|² + ½ Tr(φ̇ J φ̇ᵀ)` with material inertia `J`.
    Standard { mass: f64, j: DMatrix<f64> },
    /// Affinely invariant internal energy, in co-moving (left) or spatial (right) form.
    Affine { mass: f64, side: Chirality, constants: AffineConstants },
}

impl InertiaModel {
    pub fn standard(mass: f64, j: DMatrix<f64>) -> Result<Self, AffineError> {
        if !(mass > 0.0) {
            return Err(AffineError::InvalidConstants(format!("mass {mass}")));
        }
        if j != j.transpose() || j.clone().cholesky().is_none() {
            return Err(AffineError::InvalidConstants("J must be symmetric positive definite".into()));
        }
        Ok(Self::Standard { mass, j })
    }

    pub fn isotropic(mass: f64, inertia: f64, n: usize) -> Result<Self, AffineError> {
        Self::standard(mass, DMatrix::identity(n, n) * inertia)
    }

    pub fn affine(mass: f64, side: Chirality, constants: AffineConstants) -> Result<Self, AffineError> {
        if !(mass > 0.0) {
            return Err(AffineError::InvalidConstants(format!("mass {mass}")));
        }
        Ok(Self::Affine { mass, side, constants })
    }

    pub fn mass(&self) -> f64 {
        match self {
            Self::Standard { mass, .. } | Self::Affine { mass, .. } => *mass,
        }
    }
}

/// `𝒯 = |p|²/2m + ½ J⁻¹_AB P^A_i P^B_i`.
pub fn hamiltonian_standard(inertia: &InertiaModel, state: &AffineState) -> Result<f64, AffineError> {
    let InertiaModel::Standard { mass, j } = inertia else {
        return Err(AffineError::ModelMismatch);
    };
    if j.nrows() != state.dim() {
        return Err(AffineError::DimensionMismatch { expected: state.dim(), got: j.nrows() });
    }
    let big_p = state.canonical_momentum();
    let jinv = j.clone().try_inverse().expect("J is positive definite");
    let internal = 0.5 * (big_p.transpose() * jinv * &big_p).trace();
    Ok(state.p.norm_squared() / (2.0 * mass) + internal)
}

/// Velocity form `(m/2)|v|² + ½ Tr(φ̇ J φ̇ᵀ)` of the standard model.
pub fn kinetic_standard(inertia: &InertiaModel, v: &DVector<f64>, phidot: &DMatrix<f64>) -> Result<f64, AffineError> {
    let InertiaModel::Standard { mass, j } = inertia else {
        return Err(AffineError::ModelMismatch);
    };
    Ok(0.5 * mass * v.norm_squared() + 0.5 * (phidot * j * phidot.transpose()).trace())
}

/// Legendre map of the standard model: `p = m v`, `P = J φ̇ᵀ`.
pub fn legendre_standard(
    inertia: &InertiaModel,
    x: DVector<f64>,
    phi: DMatrix<f64>,
    v: &DVector<f64>,
    phidot: &DMatrix<f64>,
) -> Result<AffineState, AffineError> {
    let InertiaModel::Standard { mass, j } = inertia else {
        return Err(AffineError::ModelMismatch);
    };
    let big_p = j * phidot.transpose();
    AffineState::from_canonical(x, phi, v * *mass, &big_p)
}

/// `Tr(Σ²)/2a + (TrΣ)²/2b − Tr(V²)/4c` with `V = Σ − Σᵀ`.
pub fn internal_energy_affine(constants: &AffineConstants, sigma: &DMatrix<f64>) -> f64 {
    let v = sigma - sigma.transpose();
    let tr = sigma.trace();
    (sigma * sigma).trace() / (2.0 * constants.a) + 0.5 * constants.inv_b * tr * tr - 0.25 * constants.inv_c * (&v * &v).trace()
}

/// Translational plus affinely invariant internal energy; the left model uses `Σ̂`, the right one `Σ`.
pub fn hamiltonian_affine(inertia: &InertiaModel, state: &AffineState) -> Result<f64, AffineError> {
    let InertiaModel::Affine { mass, side, constants } = inertia else {
        return Err(AffineError::ModelMismatch);
    };
    let m = match side {
        Chirality::Left => state.sigma_hat.clone(),
        Chirality::Right => state.sigma(),
    };
    Ok(state.p.norm_squared() / (2.0 * mass) + internal_energy_affine(constants, &m))
}

/// Spin `S = Σ − g⁻¹Σᵀg` and vorticity `V = Σ̂ − η⁻¹Σ̂ᵀη`.
pub fn spin_vorticity(state: &AffineState, g: &DMatrix<f64>, eta: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>), AffineError> {
    let gi = g.clone().try_inverse().ok_or(LieError::Singular)?;
    let ei = eta.clone().try_inverse().ok_or(LieError::Singular)?;
    let sigma = state.sigma();
    let s = &sigma - gi * sigma.transpose() * g;
    let v = &state.sigma_hat - ei * state.sigma_hat.transpose() * eta;
    Ok((s, v))
}

/// `M = −ρ̂ − τ̂`, `N = ρ̂ − τ̂`.
pub fn mn_from_rho_tau(rho: &DMatrix<f64>, tau: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (-rho - tau, rho - tau)
}

/// Inverse of [`mn_from_rho_tau`]: `ρ̂ = (N − M)/2`, `τ̂ = −(M + N)/2`.
pub fn rho_tau_from_mn(m: &DMatrix<f64>, n: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    ((n - m) * 0.5, (m + n) * -0.5)
}

/// Kinematic part of the two-polar decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPolar {
    pub l: DMatrix<f64>,
    pub q: DVector<f64>,
    pub r: DMatrix<f64>,
    /// Two deformation invariants coincide within [`DEGENERATE_GAP`].
    pub degenerate: bool,
}

/// `φ = L diag(e^q) Rᵀ` with `q` descending, `det L = det R = 1`, and the first nonzero
/// entry of each of the first `n − 1` columns of `L` positive. The last column's sign is
/// fixed by the determinant condition.
pub fn two_polar(phi: &DMatrix<f64>) -> Result<TwoPolar, AffineError> {
    let n = phi.nrows();
    if phi.ncols() != n {
        return Err(AffineError::DimensionMismatch { expected: n, got: phi.ncols() });
    }
    let det = phi.determinant();
    if det.abs() < DET_FLOOR {
        return Err(AffineError::Singular(det));
    }
    if det < 0.0 {
        return Err(AffineError::OrientationReversed(det));
    }
    let svd = phi.clone().svd(true, true);
    let u = svd.u.expect("requested");
    let v = svd.v_t.expect("requested").transpose();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut l = DMatrix::zeros(n, n);
    let mut r = DMatrix::zeros(n, n);
    let mut q = DVector::zeros(n);
    for (k, &i) in order.iter().enumerate() {
        l.set_column(k, &u.column(i));
        r.set_column(k, &v.column(i));
        q[k] = svd.singular_values[i].ln();
    }
    for k in 0..n.saturating_sub(1) {
        let lead = l.column(k).iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if lead < 0.0 {
            flip(&mut l, &mut r, k);
        }
    }
    if l.determinant() < 0.0 {
        flip(&mut l, &mut r, n - 1);
    }
    let degenerate = (1..n).any(|k| (q[k - 1] - q[k]).abs() < DEGENERATE_GAP);
    Ok(TwoPolar { l, q, r, degenerate })
}

fn flip(l: &mut DMatrix<f64>, r: &mut DMatrix<f64>, k: usize) {
    l.column_mut(k).neg_mut();
    r.column_mut(k).neg_mut();
}

pub fn assemble(l: &DMatrix<f64>, q: &DVector<f64>, r: &DMatrix<f64>) -> DMatrix<f64> {
    let d = DMatrix::from_diagonal(&q.map(f64::exp));
    l * d * r.transpose()
}

/// Deformation invariants with their conjugate momenta and the lattice spins.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    pub q: DVector<f64>,
    pub p: DVector<f64>,
    pub m: DMatrix<f64>,
    pub n: DMatrix<f64>,
}

impl LatticeState {
    pub fn dim(&self) -> usize {
        self.q.len()
    }
}

/// Two-polar phase-space coordinates `(L, R, q, p, M, N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPolarState {
    pub l: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub lattice: LatticeState,
    pub degenerate: bool,
}

/// Maps `(φ, Σ̂)` to two-polar variables. With `K = RᵀΣ̂R D⁻¹`:
/// `p_a = (KD)_aa`, `ρ̂ = DK − (DK)ᵀ` (spin in the `L` frame) and
/// `τ̂ = (KD)ᵀ − KD` (negative vorticity in the `R` frame).
pub fn to_two_polar(phi: &DMatrix<f64>, sigma_hat: &DMatrix<f64>) -> Result<TwoPolarState, AffineError> {
    let tp = two_polar(phi)?;
    let d = DMatrix::from_diagonal(&tp.q.map(f64::exp));
    let kd = tp.r.transpose() * sigma_hat * &tp.r;
    let dinv = DMatrix::from_diagonal(&tp.q.map(|x| (-x).exp()));
    let k = &kd * &dinv;
    let dk = &d * &k;
    let rho = &dk - dk.transpose();
    let tau = kd.transpose() - &kd;
    let (m, n) = mn_from_rho_tau(&rho, &tau);
    let p = kd.diagonal();
    Ok(TwoPolarState { l: tp.l, r: tp.r, lattice: LatticeState { q: tp.q, p, m, n }, degenerate: tp.degenerate })
}

/// Inverse of [`to_two_polar`]; needs distinct invariants wherever `M_ab ≠ 0`.
pub fn from_two_polar(state: &TwoPolarState) -> Result<(DMatrix<f64>, DMatrix<f64>), AffineError> {
    let lat = &state.lattice;
    let n = lat.dim();
    let big_q = lat.q.map(f64::exp);
    let mut k = DMatrix::zeros(n, n);
    for a in 0..n {
        k[(a, a)] = lat.p[a] / big_q[a];
        for b in a + 1..n {
            // M = −(Q_a − Q_b)(u + v), N = (Q_a + Q_b)(u − v), u = K_ab, v = K_ba
            let diff = big_q[a] - big_q[b];
            let sum_uv = if lat.m[(a, b)] == 0.0 {
                0.0
            } else if diff.abs() <= DENOMINATOR_FLOOR * big_q[a].max(big_q[b]) {
                return Err(AffineError::SingularConfiguration { a, b });
            } else {
                -lat.m[(a, b)] / diff
            };
            let diff_uv = lat.n[(a, b)] / (big_q[a] + big_q[b]);
            k[(a, b)] = 0.5 * (sum_uv + diff_uv);
            k[(b, a)] = 0.5 * (sum_uv - diff_uv);
        }
    }
    let d = DMatrix::from_diagonal(&big_q);
    let sigma_hat = &state.r * (k * d) * state.r.transpose();
    Ok((assemble(&state.l, &lat.q, &state.r), sigma_hat))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeVariant {
    /// `1/sinh²` repulsion and `1/cosh²` attraction.
    Hyperbolic,
    /// `1/sin²` and `1/cos²` couplings on the circle.
    Trigonometric,
    /// `1/(Q_a − Q_b)²` and `1/(Q_a + Q_b)²` with `Q = e^q`, `P_a = e^{−q_a} p_a`.
    Calogero,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeParams {
    pub variant: LatticeVariant,
    /// `a` for the Sutherland variants, the isotropic inertia `I` for Calogero.
    pub inertia: f64,
    /// Stiffness `k` of the dilatation well `(k/2) q̄²`, `q̄ = Σq/n`; zero disables it.
    pub dilatation_well: f64,
}

impl LatticeParams {
    pub fn new(variant: LatticeVariant, inertia: f64) -> Self {
        Self { variant, inertia, dilatation_well: 0.0 }
    }
}

/// Pair profiles `(g, ∂_a g, ∂_b g)` for the `M` and `N` couplings, with their prefactors.
struct Pair {
    cm: f64,
    g: [f64; 3],
    cn: f64,
    h: [f64; 3],
}

fn pair(params: &LatticeParams, qa: f64, qb: f64, a: usize, b: usize, need_m: bool, need_n: bool) -> Result<Pair, AffineError> {
    let i = params.inertia;
    let singular = AffineError::SingularConfiguration { a, b };
    let half = 0.5 * (qa - qb);
    match params.variant {
        LatticeVariant::Hyperbolic => {
            let (sh, ch) = (half.sinh(), half.cosh());
            if need_m && sh.abs() < DENOMINATOR_FLOOR {
                return Err(singular);
            }
            let dg = -ch / (sh * sh * sh);
            let dh = -sh / (ch * ch * ch);
            Ok(Pair {
                cm: 1.0 / (32.0 * i),
                g: [1.0 / (sh * sh), dg, -dg],
                cn: -1.0 / (32.0 * i),
                h: [1.0 / (ch * ch), dh, -dh],
            })
        }
        LatticeVariant::Trigonometric => {
            let (s, c) = (half.sin(), half.cos());
            if (need_m && s.abs() < DENOMINATOR_FLOOR) || (need_n && c.abs() < DENOMINATOR_FLOOR) {
                return Err(singular);
            }
            let dg = -c / (s * s * s);
            let dh = s / (c * c * c);
            Ok(Pair { cm: 1.0 / (32.0 * i), g: [1.0 / (s * s), dg, -dg], cn: 1.0 / (32.0 * i), h: [1.0 / (c * c), dh, -dh] })
        }
        LatticeVariant::Calogero => {
            let (ea, eb) = (qa.exp(), qb.exp());
            let diff = ea - eb;
            if need_m && diff.abs() < DENOMINATOR_FLOOR * ea.max(eb) {
                return Err(singular);
            }
            let sum = ea + eb;
            let d3 = diff * diff * diff;
            let s3 = sum * sum * sum;
            Ok(Pair {
                cm: 1.0 / (8.0 * i),
                g: [1.0 / (diff * diff), -2.0 * ea / d3, 2.0 * eb / d3],
                cn: 1.0 / (8.0 * i),
                h: [1.0 / (sum * sum), -2.0 * ea / s3, -2.0 * eb / s3],
            })
        }
    }
}

/// Value and gradients `(H, ∂H/∂q, ∂H/∂p, ∂H/∂M, ∂H/∂N)`; the matrix gradients treat all
/// entries as independent.
#[allow(clippy::type_complexity)]
fn lattice_parts(
    params: &LatticeParams,
    lat: &LatticeState,
) -> Result<(f64, DVector<f64>, DVector<f64>, DMatrix<f64>, DMatrix<f64>), AffineError> {
    let n = lat.dim();
    let i = params.inertia;
    let mut h = 0.0;
    let mut hq = DVector::zeros(n);
    let mut hp = DVector::zeros(n);
    for a in 0..n {
        match params.variant {
            LatticeVariant::Calogero => {
                let w = (-2.0 * lat.q[a]).exp();
                h += w * lat.p[a] * lat.p[a] / (2.0 * i);
                hp[a] = w * lat.p[a] / i;
                hq[a] -= w * lat.p[a] * lat.p[a] / i;
            }
            _ => {
                h += lat.p[a] * lat.p[a] / (2.0 * i);
                hp[a] = lat.p[a] / i;
            }
        }
    }
    let mut hm = DMatrix::zeros(n, n);
    let mut hn = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let (m, nn) = (lat.m[(a, b)], lat.n[(a, b)]);
            if m == 0.0 && nn == 0.0 {
                continue;
            }
            let pr = pair(params, lat.q[a], lat.q[b], a, b, m != 0.0, nn != 0.0)?;
            let (wm, wn) = (pr.cm * m * m, pr.cn * nn * nn);
            if m != 0.0 {
                h += wm * pr.g[0];
                hq[a] += wm * pr.g[1];
                hq[b] += wm * pr.g[2];
                hm[(a, b)] = 2.0 * pr.cm * m * pr.g[0];
            }
            if nn != 0.0 {
                h += wn * pr.h[0];
                hq[a] += wn * pr.h[1];
                hq[b] += wn * pr.h[2];
                hn[(a, b)] = 2.0 * pr.cn * nn * pr.h[0];
            }
        }
    }
    if params.dilatation_well != 0.0 {
        let mean = lat.q.sum() / n as f64;
        h += 0.5 * params.dilatation_well * mean * mean;
        hq.add_scalar_mut(params.dilatation_well * mean / n as f64);
    }
    Ok((h, hq, hp, hm, hn))
}

/// Reduced kinetic energy on `(q, p, M, N)`.
pub fn lattice_hamiltonian(params: &LatticeParams, lat: &LatticeState) -> Result<f64, AffineError> {
    Ok(lattice_parts(params, lat)?.0)
}

/// Factor `s` in `dρ̂/dt = s[ρ̂, ∂H/∂ρ̂]`, `dτ̂/dt = s[τ̂, ∂H/∂τ̂]` for the
/// so(n) ⊕ so(n) bracket of the lattice spins.
pub const SPIN_BRACKET_FACTOR: f64 = -2.0;

fn lattice_rhs(params: &LatticeParams, lat: &LatticeState) -> Result<LatticeState, AffineError> {
    let (_, hq, hp, hm, hn) = lattice_parts(params, lat)?;
    let (rho, tau) = rho_tau_from_mn(&lat.m, &lat.n);
    let chi = -&hm + &hn;
    let theta = -&hm - &hn;
    let rho_dot = (&rho * &chi - &chi * &rho) * SPIN_BRACKET_FACTOR;
    let tau_dot = (&tau * &theta - &theta * &tau) * SPIN_BRACKET_FACTOR;
    let (m_dot, n_dot) = mn_from_rho_tau(&rho_dot, &tau_dot);
    Ok(LatticeState { q: hp, p: -hq, m: m_dot, n: n_dot })
}

fn axpy(base: &LatticeState, k: &LatticeState, h: f64) -> LatticeState {
    LatticeState { q: &base.q + &k.q * h, p: &base.p + &k.p * h, m: &base.m + &k.m * h, n: &base.n + &k.n * h }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSample {
    pub t: f64,
    pub state: LatticeState,
    pub energy: f64,
}

/// RK4 flow of the lattice; returns `steps + 1` samples including the initial one.
pub fn lattice_dynamics(
    params: &LatticeParams,
    initial: &LatticeState,
    dt: f64,
    steps: usize,
) -> Result<Vec<LatticeSample>, AffineError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(DynamicsError::InvalidStep(dt).into());
    }
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = initial.clone();
    out.push(LatticeSample { t: 0.0, energy: lattice_hamiltonian(params, &s)?, state: s.clone() });
    for k in 1..=steps {
        let k1 = lattice_rhs(params, &s)?;
        let k2 = lattice_rhs(params, &axpy(&s, &k1, 0.5 * dt))?;
        let k3 = lattice_rhs(params, &axpy(&s, &k2, 0.5 * dt))?;
        let k4 = lattice_rhs(params, &axpy(&s, &k3, dt))?;
        s = LatticeState {
            q: &s.q + (&k1.q + &k2.q * 2.0 + &k3.q * 2.0 + &k4.q) * (dt / 6.0),
            p: &s.p + (&k1.p + &k2.p * 2.0 + &k3.p * 2.0 + &k4.p) * (dt / 6.0),
            m: &s.m + (&k1.m + &k2.m * 2.0 + &k3.m * 2.0 + &k4.m) * (dt / 6.0),
            n: &s.n + (&k1.n + &k2.n * 2.0 + &k3.n * 2.0 + &k4.n) * (dt / 6.0),
        };
        out.push(LatticeSample { t: k as f64 * dt, energy: lattice_hamiltonian(params, &s)?, state: s.clone() });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `φ(t) = exp(Et) φ₀`.
    Spatial,
    /// `φ(t) = φ₀ exp(Êt)`.
    CoMoving,
}

pub fn geodesic_exponential(phi0: &DMatrix<f64>, e: &DMatrix<f64>, t: f64, frame: Frame) -> Result<DMatrix<f64>, AffineError> {
    let det = phi0.determinant();
    if det.abs() < DET_FLOOR {
        return Err(AffineError::Singular(det));
    }
    let x = group_exp(&(e * t), GroupTag::GeneralLinear)?.matrix;
    Ok(match frame {
        Frame::Spatial => x * phi0,
        Frame::CoMoving => phi0 * x,
    })
}

/// `Ê = φ₀⁻¹ E φ₀`.
pub fn comoving_generator(phi0: &DMatrix<f64>, e: &DMatrix<f64>) -> Result<DMatrix<f64>, AffineError> {
    let inv = phi0.clone().try_inverse().ok_or(AffineError::Singular(phi0.determinant()))?;
    Ok(inv * e * phi0)
}

/// Largest defect `|dΣ̂/dt − euler_rhs(Σ̂)|` along `φ₀ exp(Êt)` for a left-invariant model
/// on gl(n), with `Ω̂ = φ⁻¹φ̇` and `dΣ̂/dt` both taken by central differences.
pub fn geodesic_residual(model: &InvariantModel, phi0: &DMatrix<f64>, e_hat: &DMatrix<f64>, times: &[f64]) -> Result<f64, AffineError> {
    if model.chirality() != Chirality::Left {
        return Err(AffineError::ModelMismatch);
    }
    let alg = model.algebra();
    let curve = |t: f64| geodesic_exponential(phi0, e_hat, t, Frame::CoMoving);
    let sigma_at = |t: f64| -> Result<DVector<f64>, AffineError> {
        let h = 1e-5;
        let phi = curve(t)?;
        let dphi = (curve(t + h)? - curve(t - h)?) / (2.0 * h);
        let omega = phi.try_inverse().ok_or(AffineError::Singular(0.0))? * dphi;
        let coords = alg.coords_of(&omega)?;
        Ok(model.legendre(coords.as_slice())?)
    };
    let mut worst: f64 = 0.0;
    for &t in times {
        let h = 1e-3;
        let rate = (sigma_at(t + h)? - sigma_at(t - h)?) / (2.0 * h);
        let state = BodyState { g: GroupElement { matrix: curve(t)?, tag: GroupTag::GeneralLinear }, sigma: sigma_at(t)?, time: t };
        let rhs = euler_rhs(model, &state)?;
        worst = worst.max((rate - rhs).amax());
    }
    Ok(worst)
}
