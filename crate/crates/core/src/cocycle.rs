//! Chevalley–Eilenberg calculus: exterior forms on a Lie algebra, the coboundary
//! operator, cocycle and coboundary spaces, and radicals of two-cocycles.
//!
//! A k-form is stored by its values on increasing basis tuples,
//! `ω_I = ω(E_{i1}, …, E_{ik})`, so `dX^1 ∧ dX^2` has coefficient 1 at `(1,2)`
//! (determinant convention for the wedge product).

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::lie_core::LieAlgebraSpec;

/// Singular values below this (relative to the largest, floored at 1) count as zero.
pub const RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CocycleError {
    #[error("cannot take the coboundary of a top-degree form (degree {degree} on a {dim}-dimensional algebra)")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("form lives on a {got}-dimensional algebra, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected a {expected}-form, got degree {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("null space of the form is not closed under the bracket (residual {residual:.3e})")]
    NotSubalgebra { residual: f64 },
}

/// Strictly increasing multi-indices of length `k` from `0..n`, lexicographic.
#[derive(Clone, Debug)]
pub struct MultiIndices {
    combos: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl MultiIndices {
    pub fn new(n: usize, k: usize) -> Self {
        let mut combos = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        if k <= n {
            rec(0, n, k, &mut cur, &mut combos);
        }
        let lookup = combos.iter().enumerate().map(|(r, c)| (c.clone(), r)).collect();
        Self { combos, lookup }
    }

    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }

    pub fn get(&self, r: usize) -> &[usize] {
        &self.combos[r]
    }

    pub fn rank(&self, sorted: &[usize]) -> Option<usize> {
        self.lookup.get(sorted).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.combos.iter().map(|c| c.as_slice())
    }
}

/// Sorts `idx` and returns the permutation sign, or `None` on a repeated index.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    // insertion sort keeps the transposition count explicit
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// An exterior k-form on the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        let len = MultiIndices::new(dim, degree).len();
        Self { dim, degree, coeffs: vec![0.0; len] }
    }

    /// The monomial `dX^{i1} ∧ … ∧ dX^{ik}`, in any index order.
    pub fn monomial(dim: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(dim, idx.len());
        f.add_at(idx, 1.0);
        f
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), MultiIndices::new(dim, degree).len(), "coefficient count");
        Self { dim, degree, coeffs }
    }

    /// Two-form from an antisymmetric matrix `ω_ab` (upper triangle is read).
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let basis = MultiIndices::new(n, 2);
        let coeffs = basis.iter().map(|ij| m[(ij[0], ij[1])]).collect();
        Self { dim: n, degree: 2, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn indices(&self) -> MultiIndices {
        MultiIndices::new(self.dim, self.degree)
    }

    /// Antisymmetric component at an arbitrary index tuple.
    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => 0.0,
            Some((sorted, s)) => s * self.coeffs[self.indices().rank(&sorted).unwrap()],
        }
    }

    pub fn add_at(&mut self, idx: &[usize], v: f64) {
        assert_eq!(idx.len(), self.degree);
        if let Some((sorted, s)) = sort_with_sign(idx) {
            let r = self.indices().rank(&sorted).expect("index in range");
            self.coeffs[r] += s * v;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect(), ..self.clone() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self { coeffs, ..self.clone() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if out.coeffs.is_empty() {
            return out;
        }
        let (bi, bj) = (self.indices(), other.indices());
        for (ri, i) in bi.iter().enumerate() {
            let a = self.coeffs[ri];
            if a == 0.0 {
                continue;
            }
            for (rj, j) in bj.iter().enumerate() {
                let b = other.coeffs[rj];
                if b == 0.0 {
                    continue;
                }
                let joined: Vec<usize> = i.iter().chain(j).copied().collect();
                out.add_at(&joined, a * b);
            }
        }
        out
    }

    /// `ω(v_1, …, v_k)` for vectors in basis coordinates.
    pub fn eval(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        let k = self.degree;
        let mut total = 0.0;
        for (r, idx) in self.indices().iter().enumerate() {
            let w = self.coeffs[r];
            if w == 0.0 {
                continue;
            }
            let m = DMatrix::from_fn(k, k, |a, b| vectors[b][idx[a]]);
            total += w * m.determinant();
        }
        total
    }

    /// Antisymmetric matrix `ω_ab` of a two-form.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.degree, 2);
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, ij) in self.indices().iter().enumerate() {
            m[(ij[0], ij[1])] = self.coeffs[r];
            m[(ij[1], ij[0])] = -self.coeffs[r];
        }
        m
    }
}

/// `δ(dX^k) = −Σ_{i<j} C^k_ij dX^i ∧ dX^j`.
fn coboundary_of_dual(alg: &LieAlgebraSpec, k: usize) -> KForm {
    let n = alg.dim();
    let mut f = KForm::zero(n, 2);
    for (r, ij) in MultiIndices::new(n, 2).iter().enumerate() {
        f.coeffs[r] = -alg.c(k, ij[0], ij[1]);
    }
    f
}

/// Coboundary, extended from one-forms as a graded antiderivation.
pub fn coboundary(alg: &LieAlgebraSpec, f: &KForm) -> Result<KForm, CocycleError> {
    let n = alg.dim();
    if f.dim != n {
        return Err(CocycleError::DimensionMismatch { expected: n, got: f.dim });
    }
    if f.degree >= n && n > 0 {
        return Err(CocycleError::DegreeOverflow { degree: f.degree, dim: n });
    }
    let duals: Vec<KForm> = (0..n).map(|k| coboundary_of_dual(alg, k)).collect();
    let mut out = KForm::zero(n, f.degree + 1);
    for (r, idx) in f.indices().iter().enumerate() {
        let w = f.coeffs[r];
        if w == 0.0 {
            continue;
        }
        for m in 0..idx.len() {
            let sign = if m % 2 == 0 { w } else { -w };
            let head = KForm::monomial(n, &idx[..m]);
            let tail = KForm::monomial(n, &idx[m + 1..]);
            let term = head.wedge(&duals[idx[m]]).wedge(&tail);
            out = out.plus(&term.scaled(sign));
        }
    }
    Ok(out)
}

/// Matrix of `δ` from k-forms to (k+1)-forms in the multi-index bases.
pub fn coboundary_matrix(alg: &LieAlgebraSpec, k: usize) -> DMatrix<f64> {
    let n = alg.dim();
    let src = MultiIndices::new(n, k);
    let dst = MultiIndices::new(n, k + 1);
    let mut m = DMatrix::zeros(dst.len(), src.len());
    if dst.is_empty() {
        return m;
    }
    for (col, idx) in src.iter().enumerate() {
        let image = coboundary(alg, &KForm::monomial(n, idx)).expect("degree below dim");
        for (row, v) in image.coeffs.iter().enumerate() {
            m[(row, col)] = *v;
        }
    }
    m
}

fn cutoff(m: &DMatrix<f64>) -> f64 {
    RANK_CUTOFF * m.amax().max(1.0)
}

pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let tol = cutoff(m);
    m.clone().svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

/// Orthonormal basis of the null space of `m`.
pub fn null_space(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    // pad with zero rows so the SVD returns a full right factor
    let rows = m.nrows().max(cols);
    let mut padded = DMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let tol = cutoff(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested right factor");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol)
        .map(|(i, _)| vt.row(i).transpose())
        .collect()
}

/// Orthonormal basis of `Z^k = ker δ_k`.
pub fn cocycle_space(alg: &LieAlgebraSpec, k: usize) -> Vec<KForm> {
    let n = alg.dim();
    null_space(&coboundary_matrix(alg, k))
        .into_iter()
        .map(|v| KForm::from_coeffs(n, k, v.iter().copied().collect()))
        .collect()
}

pub fn cocycle_dim(alg: &LieAlgebraSpec, k: usize) -> usize {
    MultiIndices::new(alg.dim(), k).len() - numerical_rank(&coboundary_matrix(alg, k))
}

/// `dim B^k = rank δ_{k−1}`.
pub fn coboundary_dim(alg: &LieAlgebraSpec, k: usize) -> usize {
    if k == 0 {
        0
    } else {
        numerical_rank(&coboundary_matrix(alg, k - 1))
    }
}

pub fn cohomology_dim(alg: &LieAlgebraSpec, k: usize) -> usize {
    cocycle_dim(alg, k) - coboundary_dim(alg, k)
}

/// Dimensions of cocycles, coboundaries and cohomology in degrees 1 and 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
    pub z2: usize,
    pub b2: usize,
    pub h2: usize,
}

pub fn cohomology_report(alg: &LieAlgebraSpec) -> CohomologyReport {
    let (z1, b1) = (cocycle_dim(alg, 1), coboundary_dim(alg, 1));
    let (z2, b2) = (cocycle_dim(alg, 2), coboundary_dim(alg, 2));
    CohomologyReport { z1, b1, h1: z1 - b1, z2, b2, h2: z2 - b2 }
}

/// Least-squares `ω₁` with `δω₁ ≈ ω`, and the max-norm residual of the fit.
pub fn coboundary_preimage(alg: &LieAlgebraSpec, omega: &KForm) -> Result<(KForm, f64), CocycleError> {
    if omega.degree == 0 {
        return Err(CocycleError::WrongDegree { expected: 1, got: 0 });
    }
    let k = omega.degree - 1;
    let d = coboundary_matrix(alg, k);
    let rhs = DVector::from_column_slice(&omega.coeffs);
    let svd = d.clone().svd(true, true);
    let x = svd.solve(&rhs, cutoff(&d)).expect("both factors computed");
    let residual = (&d * &x - &rhs).amax();
    Ok((KForm::from_coeffs(alg.dim(), k, x.iter().copied().collect()), residual))
}

/// Null directions `h_ω = {X : ω(X, ·) = 0}` of a two-form.
#[derive(Clone, Debug)]
pub struct Radical {
    /// Orthonormal basis in algebra coordinates.
    pub basis: Vec<DVector<f64>>,
    /// `rank ω`, the dimension of the quotient.
    pub codim: usize,
}

impl Radical {
    /// Orthogonal projector onto the radical.
    pub fn projector(&self, n: usize) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(n, n);
        for v in &self.basis {
            p += v * v.transpose();
        }
        p
    }
}

pub fn radical(alg: &LieAlgebraSpec, omega: &KForm) -> Result<Radical, CocycleError> {
    let n = alg.dim();
    if omega.degree != 2 {
        return Err(CocycleError::WrongDegree { expected: 2, got: omega.degree });
    }
    if omega.dim != n {
        return Err(CocycleError::DimensionMismatch { expected: n, got: omega.dim });
    }
    let basis = null_space(&omega.to_matrix());
    let rad = Radical { codim: n - basis.len(), basis };
    let proj = rad.projector(n);
    let mut residual: f64 = 0.0;
    for u in &rad.basis {
        for v in &rad.basis {
            let w = alg.bracket(u.as_slice(), v.as_slice());
            residual = residual.max((&w - &proj * &w).amax());
        }
    }
    if residual > RANK_CUTOFF {
        return Err(CocycleError::NotSubalgebra { residual });
    }
    Ok(rad)
}
