use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::GridWavefunction;
use crate::SemiclassicsError;

/// Function on `(q_j, p_k) = (q₀ + j dq, p₀ + k dp)`, stored row-major with `q` as the slow index.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub nq: usize,
    pub np: usize,
    pub q0: f64,
    pub dq: f64,
    pub p0: f64,
    pub dp: f64,
    pub hbar: f64,
    pub values: Vec<Complex64>,
}

impl PhaseGrid {
    /// Grid conjugate to an `N`-point position grid: `dp = πħ/(N dq)`, `p` centred on zero.
    pub fn conjugate_to(psi: &GridWavefunction, values: Vec<Complex64>) -> Self {
        let n = psi.len();
        let dp = PI * psi.hbar / (n as f64 * psi.dx);
        Self { nq: n, np: n, q0: psi.q0, dq: psi.dx, p0: -(n as f64 / 2.0) * dp, dp, hbar: psi.hbar, values }
    }

    pub fn from_fn(template: &PhaseGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut out = template.clone();
        for j in 0..out.nq {
            for k in 0..out.np {
                out.values[j * out.np + k] = f(template.q(j), template.p(k));
            }
        }
        out
    }

    pub fn constant(template: &PhaseGrid, c: Complex64) -> Self {
        Self { values: vec![c; template.values.len()], ..template.clone() }
    }

    pub fn q(&self, j: usize) -> f64 {
        self.q0 + j as f64 * self.dq
    }

    pub fn p(&self, k: usize) -> f64 {
        self.p0 + k as f64 * self.dp
    }

    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.np + k]
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.nq == other.nq
            && self.np == other.np
            && self.q0 == other.q0
            && self.dq == other.dq
            && self.p0 == other.p0
            && self.dp == other.dp
            && self.hbar == other.hbar
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Row-major little-endian float64 bytes of the real part.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.values.iter().flat_map(|v| v.re.to_le_bytes()).collect()
    }
}

/// Weyl symbol of `|ψ⟩⟨φ|` divided by `2πħ`:
/// `W(q, p) = (1/πħ) Σ_m conj(φ(q − y)) ψ(q + y) e^{−2ipy/ħ} dq`, `y = m dq`.
/// For `φ = ψ` this is the Wigner function with `∫∫ W dq dp = ‖ψ‖²`.
pub fn cross_wigner(psi: &GridWavefunction, phi: &GridWavefunction) -> Result<PhaseGrid, SemiclassicsError> {
    if !psi.same_grid(phi) {
        return Err(SemiclassicsError::GridMismatch);
    }
    psi.check_resolved()?;
    phi.check_resolved()?;
    let n = psi.len();
    let half = n as i64 / 2;
    let fft = FftPlanner::new().plan_fft_forward(n);
    let scale = psi.dx / (PI * psi.hbar);
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n as i64 {
        row.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for m in (1 - half)..half {
            let (a, b) = (j - m, j + m);
            if a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                continue;
            }
            row[m.rem_euclid(n as i64) as usize] = phi.amps[a as usize].conj() * psi.amps[b as usize];
        }
        fft.process(&mut row);
        for k in 0..n as i64 {
            let idx = (k - half).rem_euclid(n as i64) as usize;
            values[j as usize * n + k as usize] = row[idx] * scale;
        }
    }
    Ok(PhaseGrid::conjugate_to(psi, values))
}

/// Wigner function of a pure state; real up to rounding.
pub fn wigner_transform(psi: &GridWavefunction) -> Result<PhaseGrid, SemiclassicsError> {
    let mut w = cross_wigner(psi, psi)?;
    w.values.iter_mut().for_each(|v| v.im = 0.0);
    Ok(w)
}

/// `(Σ_k W dp, Σ_j W dq)`: the position density on the `q` grid and the momentum
/// density on the `p` grid.
pub fn marginals(w: &PhaseGrid) -> (Vec<f64>, Vec<f64>) {
    let mut pos = vec![0.0; w.nq];
    let mut mom = vec![0.0; w.np];
    for j in 0..w.nq {
        for k in 0..w.np {
            let v = w.at(j, k).re;
            pos[j] += v * w.dp;
            mom[k] += v * w.dq;
        }
    }
    (pos, mom)
}
