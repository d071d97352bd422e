use crate::SemiclassicsError;

/// Gradient tolerance for accepting a stationary point.
pub const GRADIENT_TOL: f64 = 1e-8;
const NEWTON_MAX: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatPoint {
    pub x: f64,
    pub value: f64,
}

fn derivatives(f: &impl Fn(f64) -> f64, x: f64) -> (f64, f64) {
    let h = 1e-4 * (1.0 + x.abs());
    let (fp, f0, fm) = (f(x + h), f(x), f(x - h));
    ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
}

/// Stationary values of `f` on the span of a sorted grid: sign changes of the discrete
/// gradient bracket candidates, a local parabola gives a first guess, and safeguarded
/// Newton steps refine it until `|f'| ≤ 1e−8`.
pub fn stat_values(f: impl Fn(f64) -> f64, grid: &[f64]) -> Result<Vec<StatPoint>, SemiclassicsError> {
    if grid.len() < 3 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SemiclassicsError::InvalidGrid("need at least three increasing points".into()));
    }
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let slope: Vec<f64> = (1..grid.len() - 1).map(|i| (vals[i + 1] - vals[i - 1]) / (grid[i + 1] - grid[i - 1])).collect();
    let mut out: Vec<StatPoint> = Vec::new();
    for i in 0..slope.len().saturating_sub(1) {
        let (g0, g1) = (slope[i], slope[i + 1]);
        if g0 != 0.0 && g0.signum() == g1.signum() {
            continue;
        }
        if g0 == 0.0 && i > 0 && slope[i - 1] == 0.0 {
            continue;
        }
        // grid points i+1 and i+2 carry slopes g0 and g1
        let (mut lo, mut hi) = (grid[i + 1], grid[i + 2]);
        let mut x = if g1 != g0 { lo - g0 * (hi - lo) / (g1 - g0) } else { 0.5 * (lo + hi) };
        let mut accepted = None;
        for _ in 0..NEWTON_MAX {
            let (d1, d2) = derivatives(&f, x);
            if d1.abs() <= GRADIENT_TOL {
                accepted = Some(x);
                break;
            }
            // keep the bracket on the sign change of f'
            let (dlo, _) = derivatives(&f, lo);
            if dlo.signum() == d1.signum() {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - d1 / d2;
            x = if d2 != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        if let Some(x) = accepted {
            if out.iter().all(|p| (p.x - x).abs() > 1e-6 * (1.0 + x.abs())) {
                out.push(StatPoint { x, value: f(x) });
            }
        }
    }
    if out.is_empty() {
        return Err(SemiclassicsError::NoCriticalPoint);
    }
    Ok(out)
}

/// `σ(x, y) = Stat_z(σ₁(x, z) + σ₂(z, y))`, searching `z` over `grid`.
pub fn compose_characteristic(
    s1: impl Fn(f64, f64) -> f64,
    s2: impl Fn(f64, f64) -> f64,
    x: f64,
    y: f64,
    grid: &[f64],
) -> Result<Vec<f64>, SemiclassicsError> {
    Ok(stat_values(|z| s1(x, z) + s2(z, y), grid)?.into_iter().map(|p| p.value).collect())
}
