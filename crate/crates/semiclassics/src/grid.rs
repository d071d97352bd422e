use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::SemiclassicsError;

/// Weight that may sit in the guard bands before a transform is refused.
pub const GUARD_THRESHOLD: f64 = 1e-8;

/// Complex amplitudes on `q_j = q₀ + j·dx`, `j = 0..N`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridWavefunction {
    pub q0: f64,
    pub dx: f64,
    pub amps: Vec<Complex64>,
    pub hbar: f64,
    pub mass: f64,
}

impl GridWavefunction {
    pub fn new(q0: f64, dx: f64, amps: Vec<Complex64>, hbar: f64, mass: f64) -> Result<Self, SemiclassicsError> {
        let n = amps.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(SemiclassicsError::NotPowerOfTwo(n));
        }
        if !(dx > 0.0 && dx.is_finite() && q0.is_finite()) {
            return Err(SemiclassicsError::InvalidGrid(format!("q0 = {q0}, dx = {dx}")));
        }
        if !(hbar > 0.0 && mass > 0.0) {
            return Err(SemiclassicsError::InvalidParameter(format!("ħ = {hbar}, m = {mass}")));
        }
        Ok(Self { q0, dx, amps, hbar, mass })
    }

    /// Samples `f` on `n` points covering `[qmin, qmax)`.
    pub fn from_fn(
        n: usize,
        qmin: f64,
        qmax: f64,
        hbar: f64,
        mass: f64,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self, SemiclassicsError> {
        if !(qmax > qmin) {
            return Err(SemiclassicsError::InvalidGrid(format!("[{qmin}, {qmax})")));
        }
        let dx = (qmax - qmin) / n as f64;
        let amps = (0..n).map(|j| f(qmin + j as f64 * dx)).collect();
        Self::new(qmin, dx, amps, hbar, mass)
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn q(&self, j: usize) -> f64 {
        self.q0 + j as f64 * self.dx
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.q(j)).collect()
    }

    pub fn norm(&self) -> f64 {
        (self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dx).sqrt()
    }

    pub fn normalized(mut self) -> Result<Self, SemiclassicsError> {
        let n = self.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(SemiclassicsError::InvalidParameter(format!("norm {n}")));
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(self)
    }

    /// `|ψ(q_j)|²`.
    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len() && self.q0 == other.q0 && self.dx == other.dx && self.hbar == other.hbar
    }

    /// `⟨self|other⟩ = Σ conj(ψ) φ dx`.
    pub fn inner(&self, other: &Self) -> Result<Complex64, SemiclassicsError> {
        if !self.same_grid(other) {
            return Err(SemiclassicsError::GridMismatch);
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.dx)
    }

    /// Momentum step `2πħ/(N dx)` of the plain discrete transform.
    pub fn momentum_step(&self) -> f64 {
        2.0 * PI * self.hbar / (self.len() as f64 * self.dx)
    }

    /// `ψ̂(p) = (2πħ)^{-1/2} ∫ ψ(q) e^{-ipq/ħ} dq` on `p_k = (k − N/2)·dp`, `dp = 2πħ/(N dx)`.
    pub fn momentum_amplitudes(&self) -> (Vec<f64>, Vec<Complex64>) {
        self.momentum_amplitudes_refined(1)
    }

    /// As [`momentum_amplitudes`](Self::momentum_amplitudes) on a `refine`-times finer momentum grid
    /// (zero padding), still `N` points centred on zero.
    pub fn momentum_amplitudes_refined(&self, refine: usize) -> (Vec<f64>, Vec<Complex64>) {
        let n = self.len();
        let len = n * refine;
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        buf[..n].copy_from_slice(&self.amps);
        FftPlanner::new().plan_fft_forward(len).process(&mut buf);
        let dp = self.momentum_step() / refine as f64;
        let scale = self.dx / (2.0 * PI * self.hbar).sqrt();
        let half = n as i64 / 2;
        let mut ps = Vec::with_capacity(n);
        let mut amps = Vec::with_capacity(n);
        for k in 0..n as i64 {
            let idx = (k - half).rem_euclid(len as i64) as usize;
            let p = (k - half) as f64 * dp;
            let origin = Complex64::from_polar(1.0, -p * self.q0 / self.hbar);
            ps.push(p);
            amps.push(buf[idx] * origin * scale);
        }
        (ps, amps)
    }

    /// Fraction of `Σ|ψ|²` in the outer 5% of the window at either end, and of the
    /// spectral weight at the outer 5% of the momentum window at either end.
    pub fn guard_fractions(&self) -> (f64, f64) {
        let n = self.len();
        let edge = (n / 20).max(1);
        let total: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        let spatial: f64 = self.amps[..edge].iter().chain(&self.amps[n - edge..]).map(|a| a.norm_sqr()).sum();
        let (_, hat) = self.momentum_amplitudes();
        let spec_total: f64 = hat.iter().map(|a| a.norm_sqr()).sum();
        let spectral: f64 = hat[..edge].iter().chain(&hat[n - edge..]).map(|a| a.norm_sqr()).sum();
        (spatial / total, spectral / spec_total)
    }

    pub fn check_resolved(&self) -> Result<(), SemiclassicsError> {
        let (s, p) = self.guard_fractions();
        let worst = s.max(p);
        if !(worst < GUARD_THRESHOLD) {
            return Err(SemiclassicsError::GridTooCoarse { fraction: worst });
        }
        Ok(())
    }
}
