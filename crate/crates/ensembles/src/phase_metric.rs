use nalgebra::{DMatrix, DVector};

use crate::EnsembleError;

/// Metric on `T*Q` at `(q, p)` built from horizontal and vertical co-frames:
/// `α g(dq, dq) + β g⁻¹(dp − pΓdq, dp − pΓdq)`, in `(dq, dp)` block form.
/// `gamma[k][(r, a)]` holds `Γ^k_ra` at the base point.
pub fn phase_metric(
    g: &DMatrix<f64>,
    gamma: &[DMatrix<f64>],
    p: &DVector<f64>,
    alpha: f64,
    beta: f64,
) -> Result<DMatrix<f64>, EnsembleError> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(EnsembleError::DimensionMismatch { expected: n, got: g.ncols() });
    }
    for len in [gamma.len(), p.len()] {
        if len != n {
            return Err(EnsembleError::DimensionMismatch { expected: n, got: len });
        }
    }
    if (g - g.transpose()).amax() > 1e-12 * g.amax().max(1.0) {
        return Err(EnsembleError::SingularMetric);
    }
    let chol = g.clone().cholesky().ok_or(EnsembleError::SingularMetric)?;
    let ginv = chol.inverse();
    // C_ra = p_k Γ^k_ra
    let mut c = DMatrix::zeros(n, n);
    for (k, gk) in gamma.iter().enumerate() {
        if gk.shape() != (n, n) {
            return Err(EnsembleError::DimensionMismatch { expected: n, got: gk.nrows() });
        }
        c += gk * p[k];
    }
    let qq = g * alpha + c.transpose() * &ginv * &c * beta;
    let qp = -(c.transpose() * &ginv) * beta;
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(&qq);
    out.view_mut((0, n), (n, n)).copy_from(&qp);
    out.view_mut((n, 0), (n, n)).copy_from(&qp.transpose());
    out.view_mut((n, n), (n, n)).copy_from(&(ginv * beta));
    Ok(out)
}

/// Riemannian volume density `√det G` of [`phase_metric`] with respect to `dq dp`.
pub fn phase_metric_volume(
    g: &DMatrix<f64>,
    gamma: &[DMatrix<f64>],
    p: &DVector<f64>,
    alpha: f64,
    beta: f64,
) -> Result<f64, EnsembleError> {
    let det = phase_metric(g, gamma, p, alpha, beta)?.determinant();
    if !(det > 0.0) {
        return Err(EnsembleError::SingularMetric);
    }
    Ok(det.sqrt())
}
