use std::f64::consts::PI;

use rand::Rng;

use crate::EnsembleError;

/// Axis-aligned box in `(q, p)` with the action unit `ħ` fixing `dμ = (2πħ)⁻ⁿ dq dp`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseRegion {
    q: Vec<(f64, f64)>,
    p: Vec<(f64, f64)>,
    hbar: f64,
    periodic_q: bool,
}

impl PhaseRegion {
    pub fn new(q: Vec<(f64, f64)>, p: Vec<(f64, f64)>, hbar: f64) -> Result<Self, EnsembleError> {
        if q.len() != p.len() {
            return Err(EnsembleError::DimensionMismatch { expected: q.len(), got: p.len() });
        }
        if q.is_empty() {
            return Err(EnsembleError::InvalidRegion("no degrees of freedom".into()));
        }
        for &(lo, hi) in q.iter().chain(&p) {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(EnsembleError::InvalidRegion(format!("bad interval [{lo}, {hi}]")));
            }
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(EnsembleError::InvalidRegion(format!("ħ = {hbar}")));
        }
        Ok(Self { q, p, hbar, periodic_q: false })
    }

    /// Same box in every direction.
    pub fn cube(n: usize, half_width: f64, hbar: f64) -> Result<Self, EnsembleError> {
        let side = vec![(-half_width, half_width); n];
        Self::new(side.clone(), side, hbar)
    }

    /// Treat the `q` intervals as a torus: flowed samples are wrapped back into the box.
    pub fn with_periodic_q(mut self, periodic: bool) -> Self {
        self.periodic_q = periodic;
        self
    }

    pub fn dof(&self) -> usize {
        self.q.len()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn periodic_q(&self) -> bool {
        self.periodic_q
    }

    /// Bounds of phase-space coordinate `i`, ordered `(q₁..qₙ, p₁..pₙ)`.
    pub fn bounds(&self, i: usize) -> (f64, f64) {
        if i < self.dof() {
            self.q[i]
        } else {
            self.p[i - self.dof()]
        }
    }

    pub fn box_volume(&self) -> f64 {
        self.q.iter().chain(&self.p).map(|(lo, hi)| hi - lo).product()
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        z.iter().enumerate().all(|(i, &x)| {
            let (lo, hi) = self.bounds(i);
            (lo..=hi).contains(&x)
        })
    }

    /// Uniform point of the box.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..2 * self.dof())
            .map(|i| {
                let (lo, hi) = self.bounds(i);
                lo + (hi - lo) * rng.random::<f64>()
            })
            .collect()
    }

    pub(crate) fn wrap(&self, z: &mut [f64]) {
        if !self.periodic_q {
            return;
        }
        for (x, &(lo, hi)) in z.iter_mut().zip(&self.q) {
            *x = lo + (*x - lo).rem_euclid(hi - lo);
        }
    }
}

/// Box volume in units of `(2πħ)ⁿ`.
pub fn liouville_volume(region: &PhaseRegion) -> f64 {
    region.box_volume() / (2.0 * PI * region.hbar()).powi(region.dof() as i32)
}
