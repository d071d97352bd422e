use crate::EnsembleError;

const NORMALIZATION_TOL: f64 = 1e-12;

fn plogp(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

/// Shannon entropy `−Σ p ln p` of a probability vector.
pub fn entropy_discrete(p: &[f64]) -> Result<f64, EnsembleError> {
    if let Some(&bad) = p.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(EnsembleError::NegativeProbability(bad));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(EnsembleError::NotNormalized(total));
    }
    Ok(-p.iter().map(|&x| plogp(x)).sum::<f64>())
}

/// Entropy of the distribution giving one state probability `q` and the other
/// `N − 1` states equal shares of `1 − q`.
pub fn entropy_family(n: usize, q: f64) -> f64 {
    -plogp(q) - plogp(1.0 - q) + (1.0 - q) * ((n - 1) as f64).ln()
}

/// `ρ_i = w_i / Σ w_j μ_j`, a density with respect to the cell measures `μ`.
pub fn normalize_density(weights: &[f64], cells: &[f64]) -> Result<Vec<f64>, EnsembleError> {
    if weights.len() != cells.len() {
        return Err(EnsembleError::DimensionMismatch { expected: cells.len(), got: weights.len() });
    }
    if let Some(&bad) = weights.iter().chain(cells).find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(EnsembleError::NegativeProbability(bad));
    }
    let z: f64 = weights.iter().zip(cells).map(|(w, m)| w * m).sum();
    if z <= 0.0 {
        return Err(EnsembleError::NotNormalized(z));
    }
    Ok(weights.iter().map(|w| w / z).collect())
}

/// `S = −Σ ρ_i ln ρ_i μ_i` for a density `ρ` normalized against the cells `μ`.
pub fn entropy_continuous(density: &[f64], cells: &[f64]) -> Result<f64, EnsembleError> {
    if density.len() != cells.len() {
        return Err(EnsembleError::DimensionMismatch { expected: cells.len(), got: density.len() });
    }
    if let Some(&bad) = density.iter().chain(cells).find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(EnsembleError::NegativeProbability(bad));
    }
    let total: f64 = density.iter().zip(cells).map(|(r, m)| r * m).sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL * density.len().max(1) as f64 {
        return Err(EnsembleError::NotNormalized(total));
    }
    Ok(-density.iter().zip(cells).map(|(&r, m)| plogp(r) * m).sum::<f64>())
}
