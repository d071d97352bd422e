use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::{GridWavefunction, GUARD_THRESHOLD};
use crate::SemiclassicsError;

/// `𝒦(ξ, τ) = (m/2πiħτ)^{n/2} exp(imξ²/2ħτ)`, principal branch of the power.
pub fn free_propagator(xi: &[f64], tau: f64, mass: f64, hbar: f64) -> Result<Complex64, SemiclassicsError> {
    if tau == 0.0 {
        return Err(SemiclassicsError::ZeroTime);
    }
    let n = xi.len() as f64;
    let base = Complex64::new(mass, 0.0) / Complex64::new(0.0, 2.0 * PI * hbar * tau);
    let r2: f64 = xi.iter().map(|x| x * x).sum();
    Ok(base.powf(n / 2.0) * Complex64::from_polar(1.0, mass * r2 / (2.0 * hbar * tau)))
}

/// Free two-point characteristic function `σ(x, y) = m|x − y|²/2τ`.
pub fn free_phase(mass: f64, tau: f64) -> impl Fn(f64, f64) -> f64 {
    move |x, y| mass * (x - y) * (x - y) / (2.0 * tau)
}

fn multiply(buf: &mut [Complex64], dx: f64, t: f64, hbar: f64, mass: f64) {
    let len = buf.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(buf);
    for (i, v) in buf.iter_mut().enumerate() {
        let s = if i < len / 2 { i as f64 } else { i as f64 - len as f64 };
        let k = 2.0 * PI * s / (len as f64 * dx);
        *v *= Complex64::from_polar(1.0 / len as f64, -hbar * k * k * t / (2.0 * mass));
    }
    planner.plan_fft_inverse(len).process(buf);
}

/// Exact free evolution of the periodic grid function (plane waves on the grid pick up
/// `e^{−iħk²t/2m}`).
pub fn propagate_free_periodic(psi: &GridWavefunction, t: f64) -> GridWavefunction {
    let mut out = psi.clone();
    multiply(&mut out.amps, psi.dx, t, psi.hbar, psi.mass);
    out
}

/// Free evolution on the line: the state is embedded in a window twice as wide before
/// the Fourier multiplier is applied, so wrap-around cannot feed back into the grid.
/// Refuses if more than the guard threshold of the weight leaves the original window.
pub fn propagate_free(psi: &GridWavefunction, t: f64) -> Result<GridWavefunction, SemiclassicsError> {
    let n = psi.len();
    let pad = n / 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
    buf[pad..pad + n].copy_from_slice(&psi.amps);
    multiply(&mut buf, psi.dx, t, psi.hbar, psi.mass);
    let total: f64 = buf.iter().map(|v| v.norm_sqr()).sum();
    let kept: f64 = buf[pad..pad + n].iter().map(|v| v.norm_sqr()).sum();
    if total > 0.0 && (total - kept) / total > GUARD_THRESHOLD {
        return Err(SemiclassicsError::GridTooCoarse { fraction: (total - kept) / total });
    }
    Ok(GridWavefunction { amps: buf[pad..pad + n].to_vec(), ..psi.clone() })
}
