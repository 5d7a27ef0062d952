//! Dense complex matrices and the handful of kernels the channel code needs:
//! products, Kronecker products, traces, partial trace/transpose over a
//! bipartite split, and a cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Bipartite indices are row-major: basis vector `|a>|b>` sits at
//! `a * d_b + b`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for Hermiticity, trace and positivity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative off-diagonal threshold at which the Jacobi sweeps stop.
pub const EIGEN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subsystem::A => f.write_str("A"),
            Subsystem::B => f.write_str("B"),
        }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str("  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        f.write_str("]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails if the length is not `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input; intended for literals.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged rows");
            data.extend_from_slice(row.as_ref());
        }
        Self { rows: r, cols: c, data }
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// `|v><v|` for a column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Complex64> {
        let d = self.ensure_square()?;
        Ok((0..d).map(|i| self[(i, i)]).sum())
    }

    /// Sum of every entry, i.e. `<e|X|e>` for the all-ones vector `e`.
    pub fn entry_sum(&self) -> Complex64 {
        self.data.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`. Infinite when the shapes differ.
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

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Max entrywise `|a - a^dagger|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let d = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(a + a^dagger) / 2`.
    pub fn hermitian_part(&self) -> Result<Self> {
        self.ensure_square()?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

fn assert_same_shape(a: &ComplexMatrix, b: &ComplexMatrix) {
    assert!(
        a.rows == b.rows && a.cols == b.cols,
        "shape mismatch: {}x{} vs {}x{}",
        a.rows,
        a.cols,
        b.rows,
        b.cols
    );
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_same_shape(self, rhs);
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
        assert_same_shape(self, rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Panics on incompatible shapes; use [`ComplexMatrix::matmul`] for a fallible product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("incompatible matrix product")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn trace(a: &ComplexMatrix) -> Result<Complex64> {
    a.trace()
}

/// Hilbert-Schmidt inner product `Tr(x^dagger y)`.
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Complex64> {
    if x.rows != y.rows || x.cols != y.cols {
        return Err(Error::DimMismatch(format!(
            "Hilbert-Schmidt product of {}x{} and {}x{}",
            x.rows, x.cols, y.rows, y.cols
        )));
    }
    Ok(x.data.iter().zip(&y.data).map(|(a, b)| a.conj() * b).sum())
}

fn check_bipartite(x: &ComplexMatrix, (da, db): (usize, usize)) -> Result<()> {
    let n = da * db;
    if da == 0 || db == 0 || x.rows != n || x.cols != n {
        return Err(Error::DimMismatch(format!(
            "expected a {n}x{n} operator for dims ({da}, {db}), got {}x{}",
            x.rows, x.cols
        )));
    }
    Ok(())
}

/// Traces out `side`; the result acts on the remaining factor.
pub fn partial_trace(x: &ComplexMatrix, dims: (usize, usize), side: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(x, dims)?;
    let (da, db) = dims;
    Ok(match side {
        Subsystem::A => ComplexMatrix::from_fn(db, db, |b, bp| {
            (0..da).map(|a| x[(a * db + b, a * db + bp)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(da, da, |a, ap| {
            (0..db).map(|b| x[(a * db + b, ap * db + b)]).sum()
        }),
    })
}

/// Transposes the indices of `side` only.
pub fn partial_transpose(x: &ComplexMatrix, dims: (usize, usize), side: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(x, dims)?;
    let (da, db) = dims;
    let n = da * db;
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (a, b) = (r / db, r % db);
        let (ap, bp) = (c / db, c % db);
        match side {
            Subsystem::A => x[(ap * db + b, a * db + bp)],
            Subsystem::B => x[(a * db + bp, ap * db + b)],
        }
    }))
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V^dagger`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let d = v.rows();
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(d, d, |i, j| {
            (0..d).map(|k| v[(i, k)] * w[k] * v[(j, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// `tol` bounds the allowed entrywise `|a - a^dagger|`; only the Hermitian part
/// of `a` is diagonalised.
pub fn hermitian_eigen(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    hermitian_eigen_with(a, tol, EIGEN_TOL)
}

pub fn hermitian_eigen_with(a: &ComplexMatrix, tol: f64, eigen_tol: f64) -> Result<HermitianEigen> {
    let n = a.ensure_square()?;
    let deviation = a.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    let mut m = a.hermitian_part()?;
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();

    let off_norm = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while n > 1 && scale > 0.0 {
        if off_norm(&m) <= eigen_tol * scale {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps, residual: off_norm(&m) });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { eigenvalues, eigenvectors })
}

/// Annihilates `m[p][q]`: first a diagonal phase makes the pivot real, then a
/// real Givens rotation zeroes it. Both are accumulated into `v`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.rows();
    let g = m[(p, q)];
    let mag = g.norm();
    if mag <= f64::MIN_POSITIVE {
        return;
    }
    let phase = g / mag;
    let phase_c = phase.conj();
    // D^dagger M D with D = diag(.., e^{-i phi} at q, ..)
    for k in 0..n {
        m[(k, q)] *= phase_c;
        m[(q, k)] *= phase;
        v[(k, q)] *= phase_c;
    }
    m[(p, q)] = Complex64::new(mag, 0.0);
    m[(q, p)] = Complex64::new(mag, 0.0);

    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c - mkq * s;
        m[(k, q)] = mkp * s + mkq * c;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c - mqk * s;
        m[(q, k)] = mpk * s + mqk * c;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(app - t * mag, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &ComplexMatrix, tol: f64) -> Result<f64> {
    let eig = hermitian_eigen(a, tol)?;
    Ok(eig.eigenvalues.first().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ginibre, random_hermitian, seeded_rng};
    use crate::states::pauli;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert!(kron(&i2, &i2).approx_eq(&ComplexMatrix::identity(4), 0.0));
    }

    #[test]
    fn kron_sigma_x_is_antidiagonal() {
        let sx = pauli(1);
        let k = kron(&sx, &sx);
        let expected = ComplexMatrix::from_fn(4, 4, |i, j| if i + j == 3 { ONE } else { ZERO });
        assert!(k.approx_eq(&expected, 0.0));
    }

    #[test]
    fn kron_matches_index_formula() {
        let mut rng = seeded_rng(11);
        let a = ginibre(&mut rng, 2, 2);
        let b = ginibre(&mut rng, 2, 2);
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for s in 0..2 {
                        let direct = a[(i, j)] * b[(r, s)];
                        assert!((k[(2 * i + r, 2 * j + s)] - direct).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn dagger_cases() {
        assert!(ComplexMatrix::identity(3).dagger().approx_eq(&ComplexMatrix::identity(3), 0.0));
        assert!(pauli(2).dagger().approx_eq(&pauli(2), 0.0));
        let mut rng = seeded_rng(3);
        let a = ginibre(&mut rng, 3, 2);
        assert!(a.dagger().dagger().approx_eq(&a, 0.0));
    }

    #[test]
    fn trace_cases() {
        assert_eq!(ComplexMatrix::identity(3).trace().unwrap(), c(3.0, 0.0));
        assert_eq!(pauli(3).trace().unwrap(), ZERO);
        let err = ComplexMatrix::zeros(2, 3).trace().unwrap_err();
        assert_eq!(err, Error::NonSquare { rows: 2, cols: 3 });
    }

    #[test]
    fn hs_inner_cases() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(hs_inner(&i2, &i2).unwrap(), c(2.0, 0.0));
        assert!(hs_inner(&pauli(1), &pauli(2)).unwrap().norm() < 1e-15);
        let mut rng = seeded_rng(5);
        let a = ginibre(&mut rng, 3, 3);
        let n = hs_inner(&a, &a).unwrap();
        assert!(n.re > 0.0 && n.im.abs() < 1e-14);
        assert!(matches!(
            hs_inner(&i2, &ComplexMatrix::identity(3)),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn eigen_of_pauli_x() {
        let eig = hermitian_eigen(&pauli(1), DEFAULT_TOL).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_of_identity() {
        let eig = hermitian_eigen(&ComplexMatrix::identity(5), DEFAULT_TOL).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-15));
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(hermitian_eigen(&m, DEFAULT_TOL), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = seeded_rng(17);
        for d in 1..=12 {
            let h = random_hermitian(&mut rng, d);
            let eig = hermitian_eigen(&h, DEFAULT_TOL).unwrap();
            let v = &eig.eigenvectors;
            let gram = &v.dagger() * v;
            let tol = d as f64 * 1e-10;
            assert!(gram.approx_eq(&ComplexMatrix::identity(d), tol), "d = {d}");
            assert!(eig.reconstruct().approx_eq(&h, tol), "d = {d}");
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = seeded_rng(23);
        let ra = crate::random::random_density(&mut rng, 2);
        let rb = crate::random::random_density(&mut rng, 3);
        let prod = kron(ra.matrix(), rb.matrix());
        let tb = partial_trace(&prod, (2, 3), Subsystem::A).unwrap();
        let ta = partial_trace(&prod, (2, 3), Subsystem::B).unwrap();
        assert!(tb.approx_eq(rb.matrix(), 1e-14));
        assert!(ta.approx_eq(ra.matrix(), 1e-14));
    }

    #[test]
    fn maximally_entangled_marginal_is_maximally_mixed() {
        let omega = crate::states::maximally_entangled(2);
        let marginal = partial_trace(omega.matrix(), (2, 2), Subsystem::A).unwrap();
        assert!(marginal.approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));
    }

    #[test]
    fn partial_transpose_of_product_and_bell() {
        let mut rng = seeded_rng(29);
        let ra = ginibre(&mut rng, 3, 3);
        let rb = ginibre(&mut rng, 2, 2);
        let pt = partial_transpose(&kron(&ra, &rb), (3, 2), Subsystem::A).unwrap();
        assert!(pt.approx_eq(&kron(&ra.transpose(), &rb), 1e-15));
        let pt = partial_transpose(&kron(&ra, &rb), (3, 2), Subsystem::B).unwrap();
        assert!(pt.approx_eq(&kron(&ra, &rb.transpose()), 1e-15));

        let omega = crate::states::maximally_entangled(2);
        let pt = partial_transpose(omega.matrix(), (2, 2), Subsystem::A).unwrap();
        let lmin = min_eigenvalue(&pt, DEFAULT_TOL).unwrap();
        assert!((lmin + 0.5).abs() < 1e-14);
    }

    #[test]
    fn bipartite_ops_reject_wrong_dims() {
        let x = ComplexMatrix::identity(5);
        assert!(partial_trace(&x, (2, 2), Subsystem::A).is_err());
        assert!(partial_transpose(&x, (2, 3), Subsystem::B).is_err());
    }

    #[test]
    fn all_ones_quadratic_form_is_bracketed_by_extreme_eigenvalues() {
        let mut rng = seeded_rng(31);
        for d in 2..=6 {
            let h = random_hermitian(&mut rng, d);
            let eig = hermitian_eigen(&h, DEFAULT_TOL).unwrap();
            let form = h.entry_sum().re;
            let (lo, hi) = (eig.eigenvalues[0], eig.eigenvalues[d - 1]);
            assert!(d as f64 * lo <= form + 1e-12 && form <= d as f64 * hi + 1e-12);
        }
    }
}
