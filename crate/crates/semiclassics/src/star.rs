use std::f64::consts::PI;
use std::thread;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::wigner::PhaseGrid;
use crate::SemiclassicsError;

/// The grid carries an exact discrete Moyal product when `N·dq·dp = πħ`: plane waves
/// `ω^{aj+bk}`, `ω = e^{2πi/N}`, then multiply as
/// `ω^{aj+bk} ∗ ω^{cj+dk} = ω^{−(ad−bc)} ω^{(a+c)j+(b+d)k}`.
fn check(a: &PhaseGrid, b: &PhaseGrid) -> Result<usize, SemiclassicsError> {
    if !a.same_grid(b) {
        return Err(SemiclassicsError::GridMismatch);
    }
    let n = a.nq;
    if a.np != n || !n.is_power_of_two() {
        return Err(SemiclassicsError::InvalidGrid(format!("star product needs a square power-of-two grid, got {}×{}", a.nq, a.np)));
    }
    let ratio = n as f64 * a.dq * a.dp / (PI * a.hbar);
    if (ratio - 1.0).abs() > 1e-12 {
        return Err(SemiclassicsError::InvalidGrid(format!("N·dq·dp/(πħ) = {ratio}, expected 1")));
    }
    Ok(n)
}

/// `Ã(a, k) = N⁻¹ Σ_j A(j, k) ω^{−aj}`, stored as `[a * n + k]`.
fn mixed(a: &PhaseGrid, n: usize) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        for j in 0..n {
            col[j] = a.values[j * n + k];
        }
        fft.process(&mut col);
        for s in 0..n {
            out[s * n + k] = col[s] / n as f64;
        }
    }
    out
}

/// Moyal product `A ∗ B` with `q ∗ p − p ∗ q = iħ`, evaluated in O(N³) through
/// `C(j, k) = Σ_{a,c} ω^{(a+c)j} Ã(a, k+c) B̃(c, k−a)`.
pub fn star_product(a: &PhaseGrid, b: &PhaseGrid) -> Result<PhaseGrid, SemiclassicsError> {
    let n = check(a, b)?;
    let mask = n - 1;
    let (ta, tb) = (mixed(a, n), mixed(b, n));
    let workers = thread::available_parallelism().map(|w| w.get()).unwrap_or(1).min(n);
    let per = n.div_ceil(workers);
    let columns: Vec<(usize, Vec<Complex64>)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (ta, tb) = (&ta, &tb);
                s.spawn(move || {
                    let ifft = FftPlanner::new().plan_fft_inverse(n);
                    let mut out = Vec::new();
                    for k in (w * per)..((w + 1) * per).min(n) {
                        let mut col = vec![Complex64::new(0.0, 0.0); n];
                        for (sidx, slot) in col.iter_mut().enumerate() {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for x in 0..n {
                                let c = sidx.wrapping_sub(x) & mask;
                                acc += ta[x * n + ((k + c) & mask)] * tb[c * n + (k.wrapping_sub(x) & mask)];
                            }
                            *slot = acc;
                        }
                        ifft.process(&mut col);
                        out.push((k, col));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("star worker panicked")).collect()
    });
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, col) in columns {
        for (j, v) in col.into_iter().enumerate() {
            values[j * n + k] = v;
        }
    }
    Ok(PhaseGrid { values, ..a.clone() })
}

/// Brute-force O(N⁴) evaluation of the same product in the doubly transformed picture.
pub fn star_product_naive(a: &PhaseGrid, b: &PhaseGrid) -> Result<PhaseGrid, SemiclassicsError> {
    let n = check(a, b)?;
    let w = |e: i64| Complex64::from_polar(1.0, 2.0 * PI * (e.rem_euclid(n as i64)) as f64 / n as f64);
    let hat = |g: &PhaseGrid| {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for x in 0..n {
            for y in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    for k in 0..n {
                        acc += g.values[j * n + k] * w(-((x * j + y * k) as i64));
                    }
                }
                out[x * n + y] = acc / (n * n) as f64;
            }
        }
        out
    };
    let (ha, hb) = (hat(a), hat(b));
    let ni = n as i64;
    let mut hc = vec![Complex64::new(0.0, 0.0); n * n];
    for e in 0..ni {
        for f in 0..ni {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..ni {
                for y in 0..ni {
                    let (c, d) = ((e - x).rem_euclid(ni), (f - y).rem_euclid(ni));
                    acc += ha[(x * ni + y) as usize] * hb[(c * ni + d) as usize] * w(-(x * f - y * e));
                }
            }
            hc[(e * ni + f) as usize] = acc;
        }
    }
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..ni {
        for k in 0..ni {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..ni {
                for f in 0..ni {
                    acc += hc[(e * ni + f) as usize] * w(e * j + f * k);
                }
            }
            values[(j * ni + k) as usize] = acc;
        }
    }
    Ok(PhaseGrid { values, ..a.clone() })
}

/// `∫ A dμ` with `dμ = dq dp/(2πħ)`.
pub fn phase_integral(a: &PhaseGrid) -> Complex64 {
    a.values.iter().sum::<Complex64>() * (a.dq * a.dp / (2.0 * PI * a.hbar))
}
