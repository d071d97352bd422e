//! Lie algebras given by structure constants, optionally realized by matrices.
//!
//! Convention: `[E_i, E_j] = C^k_ij E_k`, stored densely as `c(k, i, j)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bound on the 1-norm of an exponent before `group_exp` refuses.
pub const EXP_NORM_BOUND: f64 = 1e4;

const SPAN_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("commutator [E{i}, E{j}] leaves the span of the basis (residual {residual:.3e})")]
    NotClosed { i: usize, j: usize, residual: f64 },
    #[error("basis matrices are linearly dependent")]
    Degenerate,
    #[error("exponent norm {norm:.3e} exceeds the bound {bound:.1e}")]
    Overflow { norm: f64, bound: f64 },
    #[error("group element is not invertible")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structure constant C[{k}][{i}][{i}] must vanish")]
    DiagonalEntry { k: usize, i: usize },
    #[error("Jacobi identity violated, residual {0:.3e}")]
    Jacobi(f64),
    #[error("basis does not reproduce the structure constants, residual {0:.3e}")]
    BasisMismatch(f64),
    #[error("bilinear form is not symmetric")]
    NotSymmetric,
    #[error("algebra `{0}` has no matrix realization")]
    NoBasis(String),
    #[error("invalid algebra document: {0}")]
    Document(String),
}

/// A finite-dimensional real Lie algebra.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    label: String,
    dim: usize,
    c: Vec<f64>,
    basis: Option<Vec<DMatrix<f64>>>,
    // pseudo-inverse of the flattened basis, for expanding matrices in coordinates
    basis_pinv: Option<DMatrix<f64>>,
}

impl LieAlgebraSpec {
    /// Builds an algebra from `(k, i, j, value)` entries meaning `C^k_ij = value`.
    /// The mirrored entry `C^k_ji = -value` is filled in automatically.
    pub fn from_entries(
        label: impl Into<String>,
        dim: usize,
        entries: &[(usize, usize, usize, f64)],
    ) -> Result<Self, LieError> {
        let mut c = vec![0.0; dim * dim * dim];
        for &(k, i, j, v) in entries {
            let worst = k.max(i).max(j);
            if worst >= dim {
                return Err(LieError::DimensionMismatch { expected: dim, got: worst + 1 });
            }
            if i == j {
                if v != 0.0 {
                    return Err(LieError::DiagonalEntry { k, i });
                }
                continue;
            }
            c[(k * dim + i) * dim + j] = v;
            c[(k * dim + j) * dim + i] = -v;
        }
        let alg = Self { label: label.into(), dim, c, basis: None, basis_pinv: None };
        let res = alg.jacobi_residual();
        let m = alg.max_abs();
        if res > 1e-12 * (1.0 + m * m * m) {
            return Err(LieError::Jacobi(res));
        }
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            label: format!("abelian{dim}"),
            dim,
            c: vec![0.0; dim * dim * dim],
            basis: None,
            basis_pinv: None,
        }
    }

    /// Attaches a matrix realization, checking it reproduces the structure constants.
    pub fn with_basis(mut self, basis: Vec<DMatrix<f64>>) -> Result<Self, LieError> {
        if basis.len() != self.dim {
            return Err(LieError::DimensionMismatch { expected: self.dim, got: basis.len() });
        }
        let d = basis.first().map_or(0, |m| m.nrows());
        if basis.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(LieError::DimensionMismatch { expected: d, got: 0 });
        }
        let scale = 1.0 + basis.iter().map(|m| m.amax()).fold(0.0, f64::max).powi(2);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut r = commutator(&basis[i], &basis[j]);
                for (k, ek) in basis.iter().enumerate() {
                    let ckij = self.c(k, i, j);
                    if ckij != 0.0 {
                        r -= ek * ckij;
                    }
                }
                let res = r.amax();
                if res > 1e-12 * scale * (1.0 + self.max_abs()) {
                    return Err(LieError::BasisMismatch(res));
                }
            }
        }
        let flat = flatten(&basis);
        let svd = flat.svd(true, true);
        if svd.rank(SPAN_TOL * svd.singular_values.max().max(1.0)) < self.dim {
            return Err(LieError::Degenerate);
        }
        self.basis_pinv = Some(svd.pseudo_inverse(1e-13).map_err(|_| LieError::Degenerate)?);
        self.basis = Some(basis);
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn c(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[(k * self.dim + i) * self.dim + j]
    }

    pub fn basis(&self) -> Option<&[DMatrix<f64>]> {
        self.basis.as_deref()
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Nonzero entries with `i < j`, the canonical sparse listing.
    pub fn entries(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    let v = self.c(k, i, j);
                    if v != 0.0 {
                        out.push((k, i, j, v));
                    }
                }
            }
        }
        out
    }

    /// Bracket of two elements given in coordinates.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> DVector<f64> {
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += self.c(k, i, j) * xy;
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`: `(ad_x)^k_j = x^i C^k_ij`.
    pub fn ad(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * self.c(k, i, j)).sum())
    }

    /// Largest cyclic Jacobi sum over all index quadruples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let s: f64 = (0..n)
                            .map(|l| {
                                self.c(m, i, l) * self.c(l, j, k)
                                    + self.c(m, j, l) * self.c(l, k, i)
                                    + self.c(m, k, l) * self.c(l, i, j)
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `x^a E_a` in the matrix realization.
    pub fn to_matrix(&self, x: &[f64]) -> Result<DMatrix<f64>, LieError> {
        let basis = self.basis.as_ref().ok_or_else(|| LieError::NoBasis(self.label.clone()))?;
        let d = basis[0].nrows();
        let mut m = DMatrix::zeros(d, d);
        for (xa, ea) in x.iter().zip(basis) {
            m += ea * *xa;
        }
        Ok(m)
    }

    /// Least-squares coordinates of a matrix in the basis.
    pub fn coords_of(&self, m: &DMatrix<f64>) -> Result<DVector<f64>, LieError> {
        let pinv = self.basis_pinv.as_ref().ok_or_else(|| LieError::NoBasis(self.label.clone()))?;
        let v = DVector::from_column_slice(m.transpose().as_slice());
        Ok(pinv * v)
    }

    pub fn to_document(&self) -> AlgebraDoc {
        AlgebraDoc {
            label: Some(self.label.clone()),
            dim: self.dim,
            structure: self.entries(),
            basis: self.basis.as_ref().map(|b| {
                b.iter().map(|m| m.transpose().as_slice().to_vec()).collect()
            }),
        }
    }

    pub fn from_document(doc: &AlgebraDoc) -> Result<Self, LieError> {
        let label = doc.label.clone().unwrap_or_else(|| "custom".into());
        let alg = Self::from_entries(label, doc.dim, &doc.structure)?;
        match &doc.basis {
            None => Ok(alg),
            Some(rows) => {
                let mut mats = Vec::with_capacity(rows.len());
                for r in rows {
                    let d = (r.len() as f64).sqrt().round() as usize;
                    if d * d != r.len() {
                        return Err(LieError::Document(format!(
                            "basis matrix with {} entries is not square",
                            r.len()
                        )));
                    }
                    mats.push(DMatrix::from_row_slice(d, d, r));
                }
                alg.with_basis(mats)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("algebra document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LieError> {
        let doc: AlgebraDoc =
            serde_json::from_str(text).map_err(|e| LieError::Document(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// On-disk form of an algebra. Basis matrices are row-major.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dim: usize,
    pub structure: Vec<(usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
}

pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

// columns are the row-major flattenings of the matrices
fn flatten(basis: &[DMatrix<f64>]) -> DMatrix<f64> {
    let d = basis[0].nrows();
    let mut flat = DMatrix::zeros(d * d, basis.len());
    for (a, m) in basis.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                flat[(i * d + j, a)] = m[(i, j)];
            }
        }
    }
    flat
}

/// Structure constants of a matrix Lie algebra, by least-squares expansion of commutators.
pub fn structure_from_basis(
    label: impl Into<String>,
    basis: Vec<DMatrix<f64>>,
) -> Result<LieAlgebraSpec, LieError> {
    let n = basis.len();
    if n == 0 {
        return Err(LieError::Degenerate);
    }
    let d = basis[0].nrows();
    if basis.iter().any(|m| m.nrows() != d || m.ncols() != d) {
        return Err(LieError::DimensionMismatch { expected: d, got: 0 });
    }
    let flat = flatten(&basis);
    let svd = flat.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 || svd.rank(SPAN_TOL * smax) < n {
        return Err(LieError::Degenerate);
    }
    let scale = 1.0 + basis.iter().map(|m| m.amax()).fold(0.0, f64::max).powi(2);
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let com = commutator(&basis[i], &basis[j]);
            let v = DVector::from_column_slice(com.transpose().as_slice());
            let x = svd.solve(&v, 1e-13).map_err(|_| LieError::Degenerate)?;
            let residual = (&flat * &x - &v).amax();
            if residual > SPAN_TOL * scale {
                return Err(LieError::NotClosed { i, j, residual });
            }
            for (k, &ck) in x.iter().enumerate() {
                // snap round-off to zero so that sparse listings stay clean
                if ck.abs() > 1e-14 * scale {
                    entries.push((k, i, j, ck));
                }
            }
        }
    }
    LieAlgebraSpec::from_entries(label, n, &entries)?.with_basis(basis)
}

/// Matrix units `E_a^b` with a single 1 in row `a`, column `b`, ordered `a`-major.
pub fn gl_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut m = DMatrix::zeros(n, n);
            m[(a, b)] = 1.0;
            out.push(m);
        }
    }
    out
}

/// Independent generators `ε^ab`, `a < b` in lexicographic order, for a diagonal
/// signature `g`: `(ε^ab)^i_j = g^{ai} δ^b_j - g^{bi} δ^a_j`.
pub fn so_basis(signature: &[f64]) -> Vec<DMatrix<f64>> {
    let n = signature.len();
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for a in 0..n {
        for b in a + 1..n {
            let mut m = DMatrix::zeros(n, n);
            m[(a, b)] = 1.0 / signature[a];
            m[(b, a)] = -1.0 / signature[b];
            out.push(m);
        }
    }
    out
}

/// Symmetric bilinear form on the algebra, with a cached inverse when nonsingular.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    coeffs: DMatrix<f64>,
    inverse: Option<DMatrix<f64>>,
}

impl BilinearForm {
    pub fn new(coeffs: DMatrix<f64>) -> Result<Self, LieError> {
        if !coeffs.is_square() {
            return Err(LieError::DimensionMismatch { expected: coeffs.nrows(), got: coeffs.ncols() });
        }
        if coeffs != coeffs.transpose() {
            return Err(LieError::NotSymmetric);
        }
        let n = coeffs.nrows();
        let inverse = coeffs.clone().try_inverse().filter(|inv| {
            (&coeffs * inv - DMatrix::<f64>::identity(n, n)).amax() <= 1e-10
        });
        Ok(Self { coeffs, inverse })
    }

    /// Symmetrizes `m` before construction.
    pub fn symmetrized(m: &DMatrix<f64>) -> Self {
        Self::new((m + m.transpose()) * 0.5).expect("symmetrized matrix is symmetric")
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).unwrap()
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(d))).unwrap()
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn inverse(&self) -> Option<&DMatrix<f64>> {
        self.inverse.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.coeffs.clone().cholesky().is_some()
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s += self.coeffs[(a, b)] * x[a] * y[b];
            }
        }
        s
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(&self.coeffs * s).unwrap()
    }
}

/// `λ C^d_ea C^e_db + μ C^d_da C^e_eb`; with `λ = 1, μ = 0` this is the Killing form.
pub fn killing_tensor(alg: &LieAlgebraSpec, lambda: f64, mu: f64) -> BilinearForm {
    let n = alg.dim();
    let trace: Vec<f64> = (0..n).map(|a| (0..n).map(|d| alg.c(d, d, a)).sum()).collect();
    let mut m = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut g = 0.0;
            for d in 0..n {
                for e in 0..n {
                    g += alg.c(d, e, a) * alg.c(e, d, b);
                }
            }
            let v = lambda * g + mu * trace[a] * trace[b];
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    BilinearForm::new(m).expect("contraction is symmetric by construction")
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupTag {
    GeneralLinear,
    /// Orientation-preserving isometries of a diagonal signature.
    SpecialOrthogonal(Vec<f64>),
}

impl GroupTag {
    pub fn rotations(n: usize) -> Self {
        GroupTag::SpecialOrthogonal(vec![1.0; n])
    }
}

/// A group element in a matrix realization.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: DMatrix<f64>,
    pub tag: GroupTag,
}

impl GroupElement {
    pub fn identity(d: usize, tag: GroupTag) -> Self {
        Self { matrix: DMatrix::identity(d, d), tag }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Distance from the group: `‖gᵀηg − η‖` plus the determinant defect for SO tags.
    pub fn membership_residual(&self) -> f64 {
        let g = &self.matrix;
        match &self.tag {
            GroupTag::GeneralLinear => {
                if g.determinant().abs() > 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            GroupTag::SpecialOrthogonal(sig) => {
                let eta = DMatrix::from_diagonal(&DVector::from_column_slice(sig));
                let r = (g.transpose() * &eta * g - &eta).amax();
                r.max((g.determinant() - 1.0).abs())
            }
        }
    }

    /// Nearest group element. Euclidean rotations use the orthogonal polar factor;
    /// other tags are returned unchanged.
    pub fn projected(&self) -> Self {
        match &self.tag {
            GroupTag::SpecialOrthogonal(sig) if sig.iter().all(|&s| s > 0.0) => {
                let svd = self.matrix.clone().svd(true, true);
                let u = svd.u.unwrap();
                let vt = svd.v_t.unwrap();
                Self { matrix: u * vt, tag: self.tag.clone() }
            }
            _ => self.clone(),
        }
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>, LieError> {
        if let GroupTag::SpecialOrthogonal(sig) = &self.tag {
            let eta = DMatrix::from_diagonal(&DVector::from_column_slice(sig));
            return Ok(&eta * self.matrix.transpose() * &eta);
        }
        self.matrix.clone().try_inverse().ok_or(LieError::Singular)
    }
}

/// Matrix exponential (scaling and squaring with a Padé approximant).
pub fn group_exp(x: &DMatrix<f64>, tag: GroupTag) -> Result<GroupElement, LieError> {
    let norm = x.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    if !norm.is_finite() || norm > EXP_NORM_BOUND {
        return Err(LieError::Overflow { norm, bound: EXP_NORM_BOUND });
    }
    Ok(GroupElement { matrix: x.clone().exp(), tag })
}

/// `Ad_g X = g X g⁻¹`.
pub fn adjoint(g: &GroupElement, x: &DMatrix<f64>) -> Result<DMatrix<f64>, LieError> {
    let ginv = g.inverse()?;
    Ok(&g.matrix * x * ginv)
}

/// Matrix `A` of `Ad_g` in basis coordinates: `Ad_g E_a = A^b_a E_b`.
pub fn adjoint_matrix(alg: &LieAlgebraSpec, g: &GroupElement) -> Result<DMatrix<f64>, LieError> {
    let basis = alg.basis().ok_or_else(|| LieError::NoBasis(alg.label().to_string()))?;
    let n = alg.dim();
    let ginv = g.inverse()?;
    let mut a = DMatrix::zeros(n, n);
    for (col, e) in basis.iter().enumerate() {
        let image = &g.matrix * e * &ginv;
        a.set_column(col, &alg.coords_of(&image)?);
    }
    Ok(a)
}

/// Coadjoint action on covectors: `(coAd_g z)_a = z_b (Ad_g⁻¹)^b_a`.
pub fn coadjoint(alg: &LieAlgebraSpec, g: &GroupElement, z: &[f64]) -> Result<DVector<f64>, LieError> {
    if z.len() != alg.dim() {
        return Err(LieError::DimensionMismatch { expected: alg.dim(), got: z.len() });
    }
    let a = adjoint_matrix(alg, g)?;
    let ainv = a.try_inverse().ok_or(LieError::Singular)?;
    Ok(ainv.transpose() * DVector::from_column_slice(z))
}

/// Standard hat map on ℝ³: `hat(x) y = x × y`.
pub fn hat(x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, -x[2], x[1], x[2], 0.0, -x[0], -x[1], x[0], 0.0])
}

fn levi_civita_entries(out: &mut Vec<(usize, usize, usize, f64)>, offset_k: usize, offset_i: usize, offset_j: usize) {
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        out.push((offset_k + k, offset_i + i, offset_j + j, 1.0));
    }
}

fn rotation_action(out: &mut Vec<(usize, usize, usize, f64)>, j: usize, v: usize) {
    // [J_i, V_j] = ε_ijk V_k, written for both orders
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        out.push((v + c, j + a, v + b, 1.0));
        out.push((v + b, j + a, v + c, -1.0));
    }
}

/// Bundled algebras used as fixtures throughout the library.
pub mod fixtures {
    use super::*;

    /// so(3) with the hat basis, `[ε_a, ε_b] = ε_abc ε_c`.
    pub fn so3() -> LieAlgebraSpec {
        let mut e = Vec::new();
        levi_civita_entries(&mut e, 0, 0, 0);
        let basis = (0..3)
            .map(|a| {
                let mut x = [0.0; 3];
                x[a] = 1.0;
                hat(&x)
            })
            .collect();
        LieAlgebraSpec::from_entries("so3", 3, &e).unwrap().with_basis(basis).unwrap()
    }

    pub fn gl(n: usize) -> LieAlgebraSpec {
        structure_from_basis(format!("gl{n}"), gl_basis(n)).unwrap()
    }

    /// sl(2) with `H = diag(1,-1)`, `E`, `F`.
    pub fn sl2() -> LieAlgebraSpec {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let e = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let f = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        structure_from_basis("sl2", vec![h, e, f]).unwrap()
    }

    pub fn so_signature(label: &str, signature: &[f64]) -> LieAlgebraSpec {
        structure_from_basis(label, so_basis(signature)).unwrap()
    }

    /// Lorentz algebra, signature (+,−,−,−).
    pub fn so13() -> LieAlgebraSpec {
        so_signature("so13", &[1.0, -1.0, -1.0, -1.0])
    }

    /// Heisenberg algebra with basis `{Θ, Q_1..Q_n, P_1..P_n}`, `[Q_j, P_k] = δ_jk Θ`.
    pub fn heisenberg(n: usize) -> LieAlgebraSpec {
        let d = n + 2;
        let mut basis = Vec::with_capacity(2 * n + 1);
        let unit = |i: usize, j: usize| {
            let mut m = DMatrix::zeros(d, d);
            m[(i, j)] = 1.0;
            m
        };
        basis.push(unit(0, d - 1));
        for j in 1..=n {
            basis.push(unit(0, j));
        }
        for j in 1..=n {
            basis.push(unit(j, d - 1));
        }
        let entries: Vec<_> = (0..n).map(|j| (0, 1 + j, 1 + n + j, 1.0)).collect();
        LieAlgebraSpec::from_entries("heisenberg", 2 * n + 1, &entries)
            .unwrap()
            .with_basis(basis)
            .unwrap()
    }

    /// Heisenberg algebra (n = 3) extended by rotations `J_i` acting on `Q` and `P`.
    /// Basis order: `Θ, Q_1..3, P_1..3, J_1..3`.
    pub fn heisenberg_rotations() -> LieAlgebraSpec {
        let mut e: Vec<_> = (0..3).map(|j| (0, 1 + j, 4 + j, 1.0)).collect();
        levi_civita_entries(&mut e, 7, 7, 7);
        rotation_action(&mut e, 7, 1);
        rotation_action(&mut e, 7, 4);
        LieAlgebraSpec::from_entries("heisenberg_rotations", 10, &e).unwrap()
    }

    /// Galilei algebra, basis `H, P_1..3, K_1..3, J_1..3`, with `[K_i, H] = P_i`
    /// and `[K_i, P_j] = 0` (no central mass term).
    pub fn galilei() -> LieAlgebraSpec {
        let mut e: Vec<_> = (0..3).map(|i| (1 + i, 4 + i, 0, 1.0)).collect();
        levi_civita_entries(&mut e, 7, 7, 7);
        rotation_action(&mut e, 7, 1);
        rotation_action(&mut e, 7, 4);
        LieAlgebraSpec::from_entries("galilei", 10, &e).unwrap()
    }

    /// Euclidean algebra e(3), basis `P_1..3, J_1..3`.
    pub fn e3() -> LieAlgebraSpec {
        let mut e = Vec::new();
        levi_civita_entries(&mut e, 3, 3, 3);
        rotation_action(&mut e, 3, 0);
        LieAlgebraSpec::from_entries("e3", 6, &e).unwrap()
    }

    /// Two-dimensional non-unimodular algebra `[X, Y] = Y`.
    pub fn affine_line() -> LieAlgebraSpec {
        LieAlgebraSpec::from_entries("affine_line", 2, &[(1, 0, 1, 1.0)]).unwrap()
    }

    /// Registry lookup by name.
    pub fn by_name(name: &str) -> Option<LieAlgebraSpec> {
        Some(match name {
            "so3" => so3(),
            "sl2" => sl2(),
            "gl1" => gl(1),
            "gl2" => gl(2),
            "gl3" => gl(3),
            "so13" => so13(),
            "heisenberg" => heisenberg(3),
            "heisenberg_rotations" => heisenberg_rotations(),
            "galilei" => galilei(),
            "e3" => e3(),
            "affine_line" => affine_line(),
            "abelian2" => LieAlgebraSpec::abelian(2),
            "abelian3" => LieAlgebraSpec::abelian(3),
            _ => return None,
        })
    }

    pub const NAMES: &[&str] = &[
        "so3",
        "sl2",
        "gl1",
        "gl2",
        "gl3",
        "so13",
        "heisenberg",
        "heisenberg_rotations",
        "galilei",
        "e3",
        "affine_line",
        "abelian2",
        "abelian3",
    ];
}
