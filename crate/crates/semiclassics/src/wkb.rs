use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::grid::GridWavefunction;
use crate::SemiclassicsError;

/// Determinants below this are treated as turning points.
pub const TURNING_FLOOR: f64 = 1e-12;

/// `det ∂²S/∂qⁱ∂aʲ` by central differences with steps `rel·(1 + |x|)`.
pub fn van_vleck(s: impl Fn(&[f64], &[f64]) -> f64, q: &[f64], a: &[f64], rel: f64) -> Result<f64, SemiclassicsError> {
    let n = q.len();
    if a.len() != n {
        return Err(SemiclassicsError::InvalidParameter(format!("q has {n} components, a has {}", a.len())));
    }
    let mut m = DMatrix::zeros(n, n);
    let (mut qq, mut aa) = (q.to_vec(), a.to_vec());
    for i in 0..n {
        let h = rel * (1.0 + q[i].abs());
        for j in 0..n {
            let k = rel * (1.0 + a[j].abs());
            let mut eval = |dq: f64, da: f64| {
                qq[i] = q[i] + dq;
                aa[j] = a[j] + da;
                let v = s(&qq, &aa);
                qq[i] = q[i];
                aa[j] = a[j];
                v
            };
            m[(i, j)] = (eval(h, k) - eval(h, -k) - eval(-h, k) + eval(-h, -k)) / (4.0 * h * k);
        }
    }
    let det = m.determinant();
    if det.abs() < TURNING_FLOOR {
        return Err(SemiclassicsError::TurningPoint(det));
    }
    Ok(det)
}

/// `ψ(q) = √D(q) e^{iS(q)/ħ}` on the grid of `template`.
pub fn wkb_wavefunction(
    s: impl Fn(f64) -> f64,
    d: impl Fn(f64) -> f64,
    template: &GridWavefunction,
) -> Result<GridWavefunction, SemiclassicsError> {
    let hbar = template.hbar;
    let mut amps = Vec::with_capacity(template.len());
    for q in template.positions() {
        let dens = d(q);
        if dens < 0.0 || !dens.is_finite() {
            return Err(SemiclassicsError::InvalidParameter(format!("density {dens} at q = {q}")));
        }
        amps.push(Complex64::from_polar(dens.sqrt(), s(q) / hbar));
    }
    Ok(GridWavefunction { amps, ..template.clone() })
}
