//! Quantum states and permutation matrices.
//!
//! [`DensityMatrix`] is the validated state type; every constructor here either
//! builds a state that is valid by construction or runs the full check
//! (Hermitian, unit trace, positive semidefinite).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, kron, ComplexMatrix, DEFAULT_TOL, ONE, ZERO};

/// Largest `d` accepted by [`enumerate_permutations`].
pub const MAX_ENUM_DIM: usize = 10;

/// A validated density matrix together with its tensor-factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Runs the Hermiticity, trace and positivity checks against `tol`.
    pub fn validate(m: ComplexMatrix, dims: Vec<usize>, tol: f64) -> Result<Self> {
        check_dims(&m, &dims)?;
        let deviation = m.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = m.trace()?;
        if (tr - ONE).norm() > tol {
            return Err(Error::TraceNotOne { re: tr.re, im: tr.im });
        }
        let eig = hermitian_eigen(&m, tol)?;
        let min_eigenvalue = eig.eigenvalues.first().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { mat: m, dims })
    }

    /// Projects onto the state space: Hermitian part, negative eigenvalues
    /// clamped to zero, trace renormalised. Only the Hermiticity check is kept.
    pub fn sanitize(m: ComplexMatrix, dims: Vec<usize>, tol: f64) -> Result<Self> {
        check_dims(&m, &dims)?;
        let eig = hermitian_eigen(&m, tol)?;
        let clamped = eig.apply_fn(|l| l.max(0.0));
        let tr = clamped.trace()?.re;
        if tr <= 0.0 {
            return Err(Error::NotPositive { min_eigenvalue: eig.eigenvalues[0] });
        }
        Ok(Self { mat: clamped.scale_real(1.0 / tr), dims })
    }

    /// Wraps a matrix known to be a state (e.g. built from a closed form).
    pub(crate) fn from_trusted(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), mat.rows());
        Self { mat, dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn is_bipartite(&self) -> bool {
        self.dims.len() == 2
    }

    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims[..] {
            [da, db] => Ok((da, db)),
            _ => Err(Error::DimMismatch(format!("expected a bipartite state, dims are {:?}", self.dims))),
        }
    }

    pub fn ensure_monopartite(&self) -> Result<usize> {
        match self.dims[..] {
            [d] => Ok(d),
            _ => Err(Error::DimMismatch(format!(
                "expected a single-system state, dims are {:?}",
                self.dims
            ))),
        }
    }

    /// Same matrix, reinterpreted as a single system of dimension `dim()`.
    pub fn flattened(&self) -> Self {
        Self { mat: self.mat.clone(), dims: vec![self.dim()] }
    }
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let d = m.ensure_square()?;
    let prod: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || prod != d {
        return Err(Error::DimMismatch(format!("dims {dims:?} do not factor a {d}x{d} matrix")));
    }
    Ok(())
}

/// Free-function form of [`DensityMatrix::validate`].
pub fn validate_density(m: ComplexMatrix, dims: Vec<usize>, tol: f64) -> Result<DensityMatrix> {
    DensityMatrix::validate(m, dims, tol)
}

/// Pauli matrices: `k = 0` is the identity, `1..=3` are σ₁, σ₂, σ₃.
pub fn pauli(k: usize) -> ComplexMatrix {
    let i = Complex64::i();
    match k {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[[ZERO, -i], [i, ZERO]]),
        3 => ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
        _ => panic!("Pauli index {k} out of range 0..=3"),
    }
}

/// Real coordinates of a qubit in the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Self {
        Self { r1, r2, r3 }
    }

    pub fn norm(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3).sqrt()
    }
}

/// `½(1 + r·σ)`.
pub fn qubit_from_bloch(r: BlochVector) -> Result<DensityMatrix> {
    let length = r.norm();
    if length > 1.0 + DEFAULT_TOL {
        return Err(Error::BlochOutsideBall { length });
    }
    let m = ComplexMatrix::from_rows(&[
        [Complex64::new(0.5 * (1.0 + r.r3), 0.0), Complex64::new(0.5 * r.r1, -0.5 * r.r2)],
        [Complex64::new(0.5 * r.r1, 0.5 * r.r2), Complex64::new(0.5 * (1.0 - r.r3), 0.0)],
    ]);
    Ok(DensityMatrix::from_trusted(m, vec![2]))
}

/// `r_k = Tr(ρ σ_k)`.
pub fn bloch_of_qubit(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch(format!("Bloch vector needs a qubit, got d = {}", rho.dim())));
    }
    bloch_of_operator(rho.matrix())
}

/// Pauli coordinates of any 2x2 operator (real parts of `Tr(X σ_k)`).
pub fn bloch_of_operator(x: &ComplexMatrix) -> Result<BlochVector> {
    if x.rows() != 2 || x.cols() != 2 {
        return Err(Error::DimMismatch(format!("expected 2x2, got {}x{}", x.rows(), x.cols())));
    }
    let coord = |k| (&pauli(k) * x).trace().map(|z| z.re);
    Ok(BlochVector::new(coord(1)?, coord(2)?, coord(3)?))
}

/// A bijection of `{0, .., d-1}`, stored as `map[i] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let d = map.len();
        let mut seen = vec![false; d];
        for &j in &map {
            if j >= d || seen[j] {
                return Err(Error::InvalidPermutation(format!("{map:?} is not a bijection of 0..{d}")));
            }
            seen[j] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(d: usize) -> Self {
        Self { map: (0..d).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Self { map: other.map.iter().map(|&i| self.map[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    /// Permutation with lexicographic rank `rank` among all of `S_d`
    /// (factorial number system).
    pub fn from_lex_rank(d: usize, mut rank: u64) -> Self {
        let mut pool: Vec<usize> = (0..d).collect();
        let mut map = Vec::with_capacity(d);
        for k in (0..d).rev() {
            let f = factorial(k);
            let idx = (rank / f) as usize;
            rank %= f;
            map.push(pool.remove(idx));
        }
        Self { map }
    }

    /// Advances to the lexicographic successor; returns `false` (leaving the
    /// permutation untouched) when already at the last one.
    pub fn advance_lex(&mut self) -> bool {
        next_lex(&mut self.map)
    }

    /// `P_π = Σ_i |π(i)><i|`.
    pub fn matrix(&self) -> ComplexMatrix {
        let d = self.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for (i, &j) in self.map.iter().enumerate() {
            m[(j, i)] = ONE;
        }
        m
    }
}

pub(crate) fn next_lex(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Iterator over `S_d` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lex(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { map: current })
    }
}

/// All `d!` permutations, lexicographically. `d` must lie in `1..=10`.
pub fn enumerate_permutations(d: usize) -> Result<Permutations> {
    if d == 0 || d > MAX_ENUM_DIM {
        return Err(Error::DimensionTooLarge { d, limit: MAX_ENUM_DIM });
    }
    Ok(Permutations { next: Some((0..d).collect()) })
}

pub fn permutation_matrix(p: &Permutation) -> ComplexMatrix {
    p.matrix()
}

/// `E = |e><e|`, the all-ones matrix.
pub fn all_ones_projector(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| ONE)
}

/// `E - 1`: ones off the diagonal, zeros on it.
pub fn off_diagonal_ones(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| if i == j { ZERO } else { ONE })
}

/// `|Φ_d><Φ_d|` with `|Φ_d> = d^{-1/2} Σ_i |i>`.
pub fn maximally_coherent_state(d: usize) -> DensityMatrix {
    let v = 1.0 / d as f64;
    DensityMatrix::from_trusted(ComplexMatrix::from_fn(d, d, |_, _| Complex64::new(v, 0.0)), vec![d])
}

/// Valid range of the mixing weight `p` for dimension `d`.
pub fn weight_range(d: usize) -> (f64, f64) {
    if d <= 1 {
        (f64::NEG_INFINITY, 1.0)
    } else {
        (-1.0 / (d as f64 - 1.0), 1.0)
    }
}

/// `(1-p) 1/d + p |Φ_d><Φ_d|`: diagonal `1/d`, every off-diagonal entry `p/d`.
pub fn maximally_coherent_mixed_state(d: usize, p: f64) -> Result<DensityMatrix> {
    let (lo, hi) = weight_range(d);
    if !p.is_finite() || p < lo - DEFAULT_TOL || p > hi + DEFAULT_TOL {
        return Err(Error::WeightOutOfRange { p, lo, hi });
    }
    let diag = Complex64::new(1.0 / d as f64, 0.0);
    let off = Complex64::new(p / d as f64, 0.0);
    let m = ComplexMatrix::from_fn(d, d, |i, j| if i == j { diag } else { off });
    Ok(DensityMatrix::from_trusted(m, vec![d]))
}

/// `|Ω><Ω|` with `|Ω> = d^{-1/2} Σ_i |ii>`, dims `[d, d]`.
pub fn maximally_entangled(d: usize) -> DensityMatrix {
    let n = d * d;
    let v = 1.0 / d as f64;
    let m = ComplexMatrix::from_fn(n, n, |r, c| {
        if r % (d + 1) == 0 && c % (d + 1) == 0 {
            Complex64::new(v, 0.0)
        } else {
            ZERO
        }
    });
    DensityMatrix::from_trusted(m, vec![d, d])
}

/// Correlation coefficients of a Bell-diagonal two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalParams {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl BellDiagonalParams {
    /// Checks the four tetrahedron constraints with the default tolerance.
    pub fn new(t1: f64, t2: f64, t3: f64) -> Result<Self> {
        Self::new_with_tol(t1, t2, t3, DEFAULT_TOL)
    }

    pub fn new_with_tol(t1: f64, t2: f64, t3: f64, tol: f64) -> Result<Self> {
        let t = Self { t1, t2, t3 };
        for (label, value) in [("|t1| <= 1", t1), ("|t2| <= 1", t2), ("|t3| <= 1", t3)] {
            if !(value.abs() <= 1.0 + tol) {
                return Err(Error::InvalidBellParams { constraint: label.to_string(), value });
            }
        }
        for (label, value) in t.constraints() {
            if !(value >= -tol) {
                return Err(Error::InvalidBellParams { constraint: label.to_string(), value });
            }
        }
        Ok(t)
    }

    /// Left-hand sides of `1 ∓ t1 ∓ t2 ∓ t3 ≥ 0`, each equal to four times an eigenvalue.
    pub fn constraints(&self) -> [(&'static str, f64); 4] {
        let Self { t1, t2, t3 } = *self;
        [
            ("1 - t1 - t2 - t3 >= 0", 1.0 - t1 - t2 - t3),
            ("1 - t1 + t2 + t3 >= 0", 1.0 - t1 + t2 + t3),
            ("1 + t1 - t2 + t3 >= 0", 1.0 + t1 - t2 + t3),
            ("1 + t1 + t2 - t3 >= 0", 1.0 + t1 + t2 - t3),
        ]
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        self.constraints().map(|(_, v)| 0.25 * v)
    }

    pub fn l1_norm(&self) -> f64 {
        self.t1.abs() + self.t2.abs() + self.t3.abs()
    }
}

/// `¼(1 + Σ t_i σ_i⊗σ_i)` with dims `[2, 2]`.
pub fn bell_diagonal_state(t: BellDiagonalParams) -> DensityMatrix {
    let mut m = ComplexMatrix::identity(4);
    for (k, tk) in [(1, t.t1), (2, t.t2), (3, t.t3)] {
        let s = kron(&pauli(k), &pauli(k));
        m = &m + &s.scale_real(tk);
    }
    DensityMatrix::from_trusted(m.scale_real(0.25), vec![2, 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_eigenvalue;
    use crate::random::{random_density, random_permutation, seeded_rng};

    #[test]
    fn pauli_literals() {
        let i = Complex64::i();
        assert_eq!(pauli(1).as_slice(), &[ZERO, ONE, ONE, ZERO]);
        assert_eq!(pauli(2).as_slice(), &[ZERO, -i, i, ZERO]);
        assert_eq!(pauli(3).as_slice(), &[ONE, ZERO, ZERO, -ONE]);
    }

    #[test]
    fn validate_accepts_maximally_mixed() {
        let m = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(validate_density(m, vec![2], DEFAULT_TOL).is_ok());
    }

    #[test]
    fn validate_rejects_traceless() {
        let err = validate_density(pauli(3), vec![2], DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, Error::TraceNotOne { .. }));
    }

    #[test]
    fn validate_rejects_negative_eigenvalue() {
        // λ_min = 0.5 - sqrt(0.01 + 0.3025) ≈ -0.0590
        let m = ComplexMatrix::from_real_rows(&[[0.6, 0.55], [0.55, 0.4]]);
        match validate_density(m, vec![2], DEFAULT_TOL).unwrap_err() {
            Error::NotPositive { min_eigenvalue } => {
                let expected = 0.5 - (0.01f64 + 0.3025).sqrt();
                assert!((min_eigenvalue - expected).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_non_hermitian_and_bad_dims() {
        let m = ComplexMatrix::from_real_rows(&[[0.5, 0.1], [0.0, 0.5]]);
        assert!(matches!(validate_density(m, vec![2], DEFAULT_TOL), Err(Error::NotHermitian { .. })));
        let m = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(matches!(validate_density(m, vec![2, 3], DEFAULT_TOL), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn sanitize_clamps_and_renormalises() {
        let m = ComplexMatrix::from_real_rows(&[[0.6, 0.55], [0.55, 0.4]]);
        let rho = DensityMatrix::sanitize(m, vec![2], DEFAULT_TOL).unwrap();
        assert!(min_eigenvalue(rho.matrix(), DEFAULT_TOL).unwrap() > -1e-14);
        assert!((rho.matrix().trace().unwrap() - ONE).norm() < 1e-14);
    }

    #[test]
    fn bloch_examples() {
        let rho = qubit_from_bloch(BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!(rho.matrix().approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 0.0));
        let plus = qubit_from_bloch(BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert!(plus.matrix().approx_eq(&ComplexMatrix::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]), 0.0));
        let rho = qubit_from_bloch(BlochVector::new(0.2, -0.4, 0.3)).unwrap();
        let expected = ComplexMatrix::from_rows(&[
            [Complex64::new(0.65, 0.0), Complex64::new(0.1, 0.2)],
            [Complex64::new(0.1, -0.2), Complex64::new(0.35, 0.0)],
        ]);
        assert!(rho.matrix().approx_eq(&expected, 1e-15));
        assert!(matches!(
            qubit_from_bloch(BlochVector::new(0.8, 0.8, 0.0)),
            Err(Error::BlochOutsideBall { .. })
        ));
        let qutrit = maximally_coherent_state(3);
        assert!(matches!(bloch_of_qubit(&qutrit), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn bloch_round_trip_on_random_qubits() {
        let mut rng = seeded_rng(7);
        for _ in 0..200 {
            let rho = random_density(&mut rng, 2);
            let back = qubit_from_bloch(bloch_of_qubit(&rho).unwrap()).unwrap();
            assert!(back.matrix().approx_eq(rho.matrix(), 1e-12));
        }
    }

    #[test]
    fn permutation_matrix_examples() {
        assert!(Permutation::identity(4).matrix().approx_eq(&ComplexMatrix::identity(4), 0.0));
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert!(swap.matrix().approx_eq(&pauli(1), 0.0));
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
    }

    #[test]
    fn permutation_matrices_form_a_representation() {
        let mut rng = seeded_rng(13);
        for d in 1..=6 {
            for _ in 0..20 {
                let p = random_permutation(&mut rng, d);
                let s = random_permutation(&mut rng, d);
                let lhs = &p.matrix() * &s.matrix();
                assert!(lhs.approx_eq(&p.compose(&s).matrix(), 0.0));
                assert!(p.matrix().transpose().approx_eq(&p.inverse().matrix(), 0.0));
                assert!(p.matrix().dagger().approx_eq(&p.inverse().matrix(), 0.0));
            }
        }
    }

    #[test]
    fn composition_matches_direct_evaluation() {
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let s = Permutation::new(vec![1, 3, 0, 2]).unwrap();
        let ps = p.compose(&s);
        for i in 0..4 {
            assert_eq!(ps.apply(i), p.apply(s.apply(i)));
        }
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        assert_eq!(enumerate_permutations(1).unwrap().count(), 1);
        let all: Vec<_> = enumerate_permutations(3).unwrap().collect();
        assert_eq!(all.len(), 6);
        let unique: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), 6);
        assert!(matches!(enumerate_permutations(11), Err(Error::DimensionTooLarge { .. })));
        assert!(enumerate_permutations(0).is_err());
    }

    #[test]
    fn enumeration_matches_lex_rank() {
        for (rank, p) in enumerate_permutations(5).unwrap().enumerate() {
            assert_eq!(p, Permutation::from_lex_rank(5, rank as u64));
        }
    }

    #[test]
    fn permutation_matrices_sum_to_scaled_all_ones() {
        let d = 5;
        let mut sum = ComplexMatrix::zeros(d, d);
        let mut count = 0;
        for p in enumerate_permutations(d).unwrap() {
            sum = &sum + &p.matrix();
            count += 1;
        }
        assert_eq!(count, 120);
        let expected = all_ones_projector(d).scale_real(factorial(d - 1) as f64);
        assert!(sum.approx_eq(&expected, 0.0));
    }

    #[test]
    fn all_ones_squares_to_d_times_itself() {
        assert_eq!(all_ones_projector(1).as_slice(), &[ONE]);
        let e = all_ones_projector(3);
        assert!((&e * &e).approx_eq(&e.scale_real(3.0), 0.0));
        let phi = all_ones_projector(4).scale_real(0.25);
        assert!(phi.approx_eq(maximally_coherent_state(4).matrix(), 0.0));
        assert!(validate_density(phi, vec![4], DEFAULT_TOL).is_ok());
    }

    #[test]
    fn maximally_coherent_examples() {
        let half = ComplexMatrix::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]);
        assert!(maximally_coherent_state(2).matrix().approx_eq(&half, 0.0));
        let m3 = maximally_coherent_state(3);
        assert!(m3.matrix().as_slice().iter().all(|z| (z.re - 1.0 / 3.0).abs() < 1e-16));
    }

    #[test]
    fn mixed_state_examples() {
        let d = 4;
        let mixed = maximally_coherent_mixed_state(d, 0.0).unwrap();
        assert!(mixed.matrix().approx_eq(&ComplexMatrix::identity(d).scale_real(0.25), 0.0));
        let pure = maximally_coherent_mixed_state(d, 1.0).unwrap();
        assert!(pure.matrix().approx_eq(maximally_coherent_state(d).matrix(), 0.0));
        let rho = maximally_coherent_mixed_state(3, 0.4).unwrap();
        let eig = hermitian_eigen(rho.matrix(), DEFAULT_TOL).unwrap();
        for (got, want) in eig.eigenvalues.iter().zip([0.2, 0.2, 0.6]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(matches!(maximally_coherent_mixed_state(3, -0.6), Err(Error::WeightOutOfRange { .. })));
        assert!(matches!(maximally_coherent_mixed_state(3, 1.1), Err(Error::WeightOutOfRange { .. })));
        assert!(maximally_coherent_mixed_state(3, -0.5).is_ok());
    }

    #[test]
    fn bell_diagonal_examples() {
        let t = BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap();
        assert!(bell_diagonal_state(t).matrix().approx_eq(&ComplexMatrix::identity(4).scale_real(0.25), 0.0));

        let singlet = bell_diagonal_state(BellDiagonalParams::new(-1.0, -1.0, -1.0).unwrap());
        let eig = hermitian_eigen(singlet.matrix(), DEFAULT_TOL).unwrap();
        for (got, want) in eig.eigenvalues.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }

        let t = BellDiagonalParams::new(0.5, 0.3, -0.2).unwrap();
        let rho = bell_diagonal_state(t);
        assert!(validate_density(rho.matrix().clone(), vec![2, 2], DEFAULT_TOL).is_ok());
        assert!((t.l1_norm() - 1.0).abs() < 1e-15);

        assert!(BellDiagonalParams::new(1.0, 1.0, -1.0).is_ok());
        assert!(matches!(
            BellDiagonalParams::new(1.0, 1.0, 1.0),
            Err(Error::InvalidBellParams { .. })
        ));
    }

    #[test]
    fn bell_eigenvalue_formula_matches_spectrum() {
        for t in [(0.1, 0.2, 0.3), (-0.4, 0.1, 0.5), (0.5, 0.3, -0.2)] {
            let t = BellDiagonalParams::new(t.0, t.1, t.2).unwrap();
            let mut formula = t.eigenvalues().to_vec();
            formula.sort_by(f64::total_cmp);
            let eig = hermitian_eigen(bell_diagonal_state(t).matrix(), DEFAULT_TOL).unwrap();
            for (a, b) in eig.eigenvalues.iter().zip(&formula) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }
}
