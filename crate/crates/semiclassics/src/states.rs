//! Reference states: oscillator eigenfunctions, Gaussians and cat states.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::GridWavefunction;
use crate::SemiclassicsError;

/// Grid covering `[qmin, qmax)` with `n` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub qmin: f64,
    pub qmax: f64,
}

/// Oscillator eigenfunction `k` for `H = p²/2m + mω²q²/2`, via the normalized Hermite recursion.
pub fn oscillator_state(k: usize, grid: Grid, hbar: f64, mass: f64, omega: f64) -> Result<GridWavefunction, SemiclassicsError> {
    if !(omega > 0.0) {
        return Err(SemiclassicsError::InvalidParameter(format!("ω = {omega}")));
    }
    let scale = (mass * omega / hbar).sqrt();
    GridWavefunction::from_fn(grid.n, grid.qmin, grid.qmax, hbar, mass, |q| {
        let x = scale * q;
        // h_j = H_j(x) e^{-x²/2} / sqrt(2^j j! √π)
        let mut prev = 0.0;
        let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
        for j in 0..k {
            let next = (2.0 / (j as f64 + 1.0)).sqrt() * x * cur - (j as f64 / (j as f64 + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        Complex64::new(cur * scale.sqrt(), 0.0)
    })
}

/// `(2πσ²)^{-1/4} exp(−(q−q₀)²/4σ² + ip₀q/ħ)`, so that `|ψ|²` has standard deviation `σ`.
pub fn gaussian(sigma: f64, q0: f64, p0: f64, grid: Grid, hbar: f64, mass: f64) -> Result<GridWavefunction, SemiclassicsError> {
    if !(sigma > 0.0) {
        return Err(SemiclassicsError::InvalidParameter(format!("σ = {sigma}")));
    }
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    GridWavefunction::from_fn(grid.n, grid.qmin, grid.qmax, hbar, mass, |q| {
        let d = q - q0;
        Complex64::from_polar(norm * (-d * d / (4.0 * sigma * sigma)).exp(), p0 * q / hbar)
    })
}

/// Normalized superposition of unit-width Gaussians centred at `±d`.
pub fn cat(d: f64, grid: Grid, hbar: f64, mass: f64) -> Result<GridWavefunction, SemiclassicsError> {
    GridWavefunction::from_fn(grid.n, grid.qmin, grid.qmax, hbar, mass, |q| {
        Complex64::new((-(q - d).powi(2) / 4.0).exp() + (-(q + d).powi(2) / 4.0).exp(), 0.0)
    })?
    .normalized()
}

/// Exact free evolution of [`gaussian`] with `p₀ = 0`.
pub fn spreading_gaussian(sigma: f64, q0: f64, t: f64, hbar: f64, mass: f64) -> impl Fn(f64) -> Complex64 {
    let factor = Complex64::new(1.0, hbar * t / (2.0 * mass * sigma * sigma));
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    move |q| {
        let d = q - q0;
        factor.powf(-0.5) * norm * (-(d * d) / (4.0 * sigma * sigma * factor)).exp()
    }
}
