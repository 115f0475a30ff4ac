//! Dense complex matrices and multipartite index arithmetic.
//!
//! Basis convention: a product basis vector `|j_0 j_1 ... j_{n-1}>` over a
//! [`SubsystemShape`] with local dimensions `d_0, ..., d_{n-1}` maps to the
//! mixed-radix integer `sum_k j_k * (d_{k+1} * ... * d_{n-1})`, i.e. `j_0` is
//! the most significant digit.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on the total Hilbert-space dimension handled anywhere in the crate.
pub const MAX_DIM: usize = 64;

/// Eigenvalues within this distance of zero are treated as exactly zero.
pub const EIGEN_ZERO_TOL: f64 = 1e-10;

/// Tolerance used when deciding whether a matrix is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |r, c| if r == c { Complex64::new(values[r], 0.0) } else { ZERO })
    }

    /// Column vector.
    pub fn column(entries: Vec<Complex64>) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    /// `|v><v|` for a column given as a slice.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |r, c| v[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; infinite when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M^dag|`, infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch.
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Local dimensions of the subsystems, most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemShape {
    dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("no subsystems".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidShape(format!("local dimension {d} < 2")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        if total > MAX_DIM {
            return Err(Error::DimensionCap {
                dim: total,
                cap: MAX_DIM,
            });
        }
        Ok(Self { dims })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_multi_qubit(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Sub-shape over the given subsystems (in the given order).
    pub fn select(&self, subsystems: &[usize]) -> Result<Self> {
        let dims = subsystems
            .iter()
            .map(|&i| {
                self.dims.get(i).copied().ok_or(Error::IndexOutOfRange {
                    index: i,
                    len: self.dims.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims)
    }

    /// Mixed-radix digits of a basis index.
    pub fn unravel(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        digits
    }

    pub fn ravel(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&j, &d)| acc * d + j)
    }

    fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        if m.rows != self.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                found: m.rows,
            });
        }
        Ok(())
    }

    fn check_subset(&self, subset: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.dims.len()];
        for &i in subset {
            if i >= self.dims.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.dims.len(),
                });
            }
            mask[i] = true;
        }
        Ok(mask)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Reduced matrix on the subsystems in `keep`; the result uses the original
/// relative order of the kept subsystems regardless of the order in `keep`.
pub fn partial_trace(m: &ComplexMatrix, shape: &SubsystemShape, keep: &[usize]) -> Result<ComplexMatrix> {
    shape.check_matrix(m)?;
    let mask = shape.check_subset(keep)?;
    let kept: Vec<usize> = (0..shape.len()).filter(|&i| mask[i]).collect();
    if kept.len() == shape.len() {
        return Ok(m.clone());
    }
    if kept.is_empty() {
        return Ok(ComplexMatrix::from_fn(1, 1, |_, _| m.trace()));
    }
    let kept_shape = shape.select(&kept)?;
    let traced: Vec<usize> = (0..shape.len()).filter(|&i| !mask[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| shape.dims[i]).collect();
    let traced_total: usize = traced_dims.iter().product();
    let out_dim = kept_shape.total_dim();

    // Full index from (kept index, traced index).
    let total = shape.total_dim();
    let mut compose = vec![0usize; out_dim * traced_total];
    for full in 0..total {
        let digits = shape.unravel(full);
        let k = kept.iter().fold(0, |acc, &i| acc * shape.dims[i] + digits[i]);
        let t = traced.iter().fold(0, |acc, &i| acc * shape.dims[i] + digits[i]);
        compose[k * traced_total + t] = full;
    }

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for r in 0..out_dim {
        for c in 0..out_dim {
            let mut acc = ZERO;
            for t in 0..traced_total {
                acc += m[(compose[r * traced_total + t], compose[c * traced_total + t])];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Transposes the row/column digits belonging to `subset`.
pub fn partial_transpose(m: &ComplexMatrix, shape: &SubsystemShape, subset: &[usize]) -> Result<ComplexMatrix> {
    shape.check_matrix(m)?;
    let mask = shape.check_subset(subset)?;
    let n = shape.total_dim();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| shape.unravel(i)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut rd = vec![0usize; shape.len()];
    let mut cd = vec![0usize; shape.len()];
    for r in 0..n {
        for c in 0..n {
            for k in 0..shape.len() {
                if mask[k] {
                    rd[k] = digits[c][k];
                    cd[k] = digits[r][k];
                } else {
                    rd[k] = digits[r][k];
                    cd[k] = digits[c][k];
                }
            }
            out[(shape.ravel(&rd), shape.ravel(&cd))] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, k)]).collect()
    }
}

fn require_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let defect = m.hermiticity_defect();
    // Loose check: callers pass numerically-Hermitian products.
    if defect > 1e-8 * m.max_abs().max(1.0) {
        return Err(Error::InvalidState(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Symmetrizes `(M + M^dag) / 2` before handing it to the solver.
fn hermitian_part(m: &ComplexMatrix) -> DMatrix<Complex64> {
    let a = m.to_nalgebra();
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    require_hermitian(m)?;
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.rows;
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    require_hermitian(m)?;
    let mut values: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Sum of singular values; Hermitian input goes through the eigensolver.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.is_hermitian(HERMITIAN_TOL * m.max_abs().max(1.0)) {
        Ok(hermitian_eigenvalues(m)?.iter().map(|v| v.abs()).sum())
    } else {
        Ok(singular_values(m).iter().sum())
    }
}

/// Clamps values within [`EIGEN_ZERO_TOL`] of zero to exactly zero.
pub fn clamp_near_zero(v: f64) -> f64 {
    if v.abs() <= EIGEN_ZERO_TOL {
        0.0
    } else {
        v
    }
}
