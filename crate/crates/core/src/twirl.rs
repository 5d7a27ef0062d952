//! The mixed-permutation channel `Δ(X) = (1/d!) Σ_π P_π X P_π^dagger`.
//!
//! Every closed form here has a brute-force counterpart that literally sums
//! over the symmetric group. The brute-force routines are the reference the
//! closed forms are tested against; they are not used to compute anything
//! else.
//!
//! The channel is linear on all square matrices, so none of these functions
//! require Hermitian or positive input.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hs_inner, kron, partial_trace, ComplexMatrix, Subsystem, DEFAULT_TOL};
use crate::par::{chunked_reduce, Exec};
use crate::states::{
    factorial, maximally_coherent_mixed_state, maximally_coherent_state, maximally_entangled,
    off_diagonal_ones, DensityMatrix, Permutation,
};

/// Largest dimension accepted by the single-system and one-sided brute force.
pub const MAX_TWIRL_DIM: usize = 9;

/// Largest single-factor dimension accepted by the collective brute force.
pub const MAX_COLLECTIVE_DIM: usize = 7;

/// Upper bound on the number of group elements a brute-force average may visit.
pub const MAX_GROUP_ORDER: u64 = 362_880;

const CHUNK: u64 = 720;

fn guard(d: usize, limit: usize) -> Result<()> {
    if d > limit {
        Err(Error::DimensionTooLarge { d, limit })
    } else {
        Ok(())
    }
}

/// Averages `x` over the relabelings produced by `fill_map`: for group
/// element `k`, basis index `r` is sent to `map[r]`, so the summand is
/// `Σ_{r,c} x[r][c] |map[r]><map[c]|`. Accumulates the raw sum in chunk order
/// and divides by `order` once at the end.
fn average_relabelings<F>(x: &ComplexMatrix, order: u64, exec: Exec, fill_map: F) -> ComplexMatrix
where
    F: Fn(u64, &mut [usize]) + Sync + Send,
{
    let n = x.rows();
    let src = x.as_slice();
    let sum = chunked_reduce(
        exec,
        order,
        CHUNK,
        |start, end| {
            let mut acc = vec![Complex64::new(0.0, 0.0); n * n];
            let mut map = vec![0usize; n];
            for k in start..end {
                fill_map(k, &mut map);
                for r in 0..n {
                    let row = map[r] * n;
                    let src_row = &src[r * n..(r + 1) * n];
                    for (c, &v) in src_row.iter().enumerate() {
                        acc[row + map[c]] += v;
                    }
                }
            }
            acc
        },
        |mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        },
    )
    .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); n * n]);
    let inv = 1.0 / order as f64;
    let data = sum.into_iter().map(|z| z * inv).collect();
    ComplexMatrix::from_vec(n, n, data).expect("n*n entries")
}

/// `P_π X P_π^dagger`, computed by relabeling indices.
pub fn conjugate_by_permutation(x: &ComplexMatrix, p: &Permutation) -> Result<ComplexMatrix> {
    let d = x.ensure_square()?;
    if p.len() != d {
        return Err(Error::DimMismatch(format!("permutation of degree {} on a {d}x{d} matrix", p.len())));
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            out[(p.apply(r), p.apply(c))] = x[(r, c)];
        }
    }
    Ok(out)
}

/// Literal group average over `S_d`.
pub fn twirl_bruteforce(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    twirl_bruteforce_with(x, Exec::default())
}

pub fn twirl_bruteforce_with(x: &ComplexMatrix, exec: Exec) -> Result<ComplexMatrix> {
    let d = x.ensure_square()?;
    guard(d, MAX_TWIRL_DIM)?;
    if d == 0 {
        return Ok(x.clone());
    }
    Ok(average_relabelings(x, factorial(d), exec, |k, map| {
        let p = Permutation::from_lex_rank(d, k);
        map.copy_from_slice(p.as_slice());
    }))
}

/// Closed form `Tr(X) 1/d + Tr(X(E-1)) (E-1)/(d(d-1))`, evaluated in `O(d²)`.
///
/// Every diagonal entry of the result is `Tr(X)/d` and every off-diagonal entry
/// is the mean of the off-diagonal entries of `X`. At `d = 1` the channel is
/// the identity.
pub fn twirl_closed_form(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = x.ensure_square()?;
    if d <= 1 {
        return Ok(x.clone());
    }
    let (diag, off) = closed_form_entries(x)?;
    Ok(ComplexMatrix::from_fn(d, d, |i, j| if i == j { diag } else { off }))
}

/// The two distinct entries of `Δ(X)`: (diagonal, off-diagonal).
pub fn closed_form_entries(x: &ComplexMatrix) -> Result<(Complex64, Complex64)> {
    let d = x.ensure_square()?;
    let tr = x.trace()?;
    let df = d as f64;
    if d <= 1 {
        return Ok((tr, Complex64::new(0.0, 0.0)));
    }
    let off_sum = x.entry_sum() - tr;
    Ok((tr / df, off_sum / (df * (df - 1.0))))
}

/// The scalars characterising `Δ(ρ)` for a state `ρ`: the common off-diagonal
/// entry `a` and the mixing weight `p = d·a` towards `|Φ_d><Φ_d|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwirlSummary {
    pub a: f64,
    pub p: f64,
    pub d: usize,
}

impl TwirlSummary {
    /// `[-1/(d(d-1)), 1/d]`.
    pub fn a_range(d: usize) -> (f64, f64) {
        if d <= 1 {
            return (0.0, 0.0);
        }
        let df = d as f64;
        (-1.0 / (df * (df - 1.0)), 1.0 / df)
    }
}

/// Sum of the off-diagonal entries of `ρ` divided by `d(d-1)` (and by `d-1`).
pub fn twirl_params(rho: &DensityMatrix) -> Result<TwirlSummary> {
    twirl_params_with_tol(rho, DEFAULT_TOL)
}

pub fn twirl_params_with_tol(rho: &DensityMatrix, tol: f64) -> Result<TwirlSummary> {
    let d = rho.ensure_monopartite()?;
    if d <= 1 {
        return Ok(TwirlSummary { a: 0.0, p: 0.0, d });
    }
    let m = rho.matrix();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m[(i, j)];
            }
        }
    }
    if sum.im.abs() > tol {
        return Err(Error::NonRealSum { im: sum.im });
    }
    let df = d as f64;
    Ok(TwirlSummary { a: sum.re / (df * (df - 1.0)), p: sum.re / (df - 1.0), d })
}

/// Rebuilds `Δ(ρ) = (1-p) 1/d + p |Φ_d><Φ_d|` from its summary.
pub fn reconstruct_output_state(s: &TwirlSummary) -> Result<DensityMatrix> {
    let (lo, hi) = TwirlSummary::a_range(s.d);
    if s.d == 0 || !(s.a >= lo - DEFAULT_TOL && s.a <= hi + DEFAULT_TOL) {
        return Err(Error::ParamOutOfRange(format!("a = {} outside [{lo}, {hi}] for d = {}", s.a, s.d)));
    }
    if (s.p - s.d as f64 * s.a).abs() > DEFAULT_TOL {
        return Err(Error::ParamOutOfRange(format!("p = {} inconsistent with d·a = {}", s.p, s.d as f64 * s.a)));
    }
    maximally_coherent_mixed_state(s.d, s.p)
        .map_err(|e| Error::ParamOutOfRange(e.to_string()))
}

fn check_square_dims(x: &ComplexMatrix, (da, db): (usize, usize)) -> Result<usize> {
    let n = x.ensure_square()?;
    if da == 0 || db == 0 || da * db != n {
        return Err(Error::DimMismatch(format!("dims ({da}, {db}) do not factor a {n}x{n} operator")));
    }
    Ok(n)
}

/// `(Δ⊗id)(X)` for `side = A`, `(id⊗Δ)(X)` for `side = B`, via partial traces:
///
/// `(Δ_A⊗id)(X) = 1/d_A ⊗ Tr_A X + (E_A-1)/(d_A(d_A-1)) ⊗ Tr_A[X (E_A-1)⊗1]`
pub fn twirl_one_sided(x: &ComplexMatrix, dims: (usize, usize), side: Subsystem) -> Result<ComplexMatrix> {
    check_square_dims(x, dims)?;
    let (da, db) = dims;
    let dt = match side {
        Subsystem::A => da,
        Subsystem::B => db,
    };
    if dt == 1 {
        return Ok(x.clone());
    }
    let dtf = dt as f64;
    let id_t = ComplexMatrix::identity(dt);
    let f_t = off_diagonal_ones(dt);
    Ok(match side {
        Subsystem::A => {
            let marginal = partial_trace(x, dims, Subsystem::A)?;
            let weighted = partial_trace(&x.matmul(&kron(&f_t, &ComplexMatrix::identity(db)))?, dims, Subsystem::A)?;
            let first = kron(&id_t.scale_real(1.0 / dtf), &marginal);
            let second = kron(&f_t.scale_real(1.0 / (dtf * (dtf - 1.0))), &weighted);
            &first + &second
        }
        Subsystem::B => {
            let marginal = partial_trace(x, dims, Subsystem::B)?;
            let weighted = partial_trace(&x.matmul(&kron(&ComplexMatrix::identity(da), &f_t))?, dims, Subsystem::B)?;
            let first = kron(&marginal, &id_t.scale_real(1.0 / dtf));
            let second = kron(&weighted, &f_t.scale_real(1.0 / (dtf * (dtf - 1.0))));
            &first + &second
        }
    })
}

/// `(1/d!) Σ_π (P_π⊗1) X (P_π⊗1)^dagger` (or the mirror image for side B).
pub fn twirl_one_sided_bruteforce(
    x: &ComplexMatrix,
    dims: (usize, usize),
    side: Subsystem,
    exec: Exec,
) -> Result<ComplexMatrix> {
    check_square_dims(x, dims)?;
    let (da, db) = dims;
    let dt = match side {
        Subsystem::A => da,
        Subsystem::B => db,
    };
    guard(dt, MAX_TWIRL_DIM)?;
    Ok(average_relabelings(x, factorial(dt), exec, |k, map| {
        let p = Permutation::from_lex_rank(dt, k);
        for (r, slot) in map.iter_mut().enumerate() {
            let (a, b) = (r / db, r % db);
            *slot = match side {
                Subsystem::A => p.apply(a) * db + b,
                Subsystem::B => a * db + p.apply(b),
            };
        }
    }))
}

/// Coefficients of `(Δ⊗Δ)(X)` in the orthogonal operator basis
/// `{1⊗1, 1⊗(E_B-1), (E_A-1)⊗1, (E_A-1)⊗(E_B-1)}`.
///
/// `gamma_k = Tr(X B_k)` is the unnormalised overlap with basis element `B_k`
/// and `c_k = gamma_k / ||B_k||²`. `c1`/`gamma1` belong to `1⊗(E_B-1)` and
/// `c2`/`gamma2` to `(E_A-1)⊗1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BipartiteTwirlCoefficients {
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    pub gamma1: Complex64,
    pub gamma2: Complex64,
    pub gamma3: Complex64,
}

fn two_sided_basis(da: usize, db: usize) -> [ComplexMatrix; 4] {
    let ia = ComplexMatrix::identity(da);
    let ib = ComplexMatrix::identity(db);
    let fa = off_diagonal_ones(da);
    let fb = off_diagonal_ones(db);
    [kron(&ia, &ib), kron(&ia, &fb), kron(&fa, &ib), kron(&fa, &fb)]
}

/// Hilbert-Schmidt projection of `x` onto the two-sided basis.
pub fn bipartite_twirl_coefficients(x: &ComplexMatrix, dims: (usize, usize)) -> Result<BipartiteTwirlCoefficients> {
    check_square_dims(x, dims)?;
    let basis = two_sided_basis(dims.0, dims.1);
    let mut overlaps = [Complex64::new(0.0, 0.0); 4];
    let mut coeffs = [Complex64::new(0.0, 0.0); 4];
    for (k, b) in basis.iter().enumerate() {
        overlaps[k] = hs_inner(b, x)?;
        let norm2 = hs_inner(b, b)?.re;
        // a one-dimensional factor has E - 1 = 0; its terms vanish
        if norm2 > 0.0 {
            coeffs[k] = overlaps[k] / norm2;
        }
    }
    Ok(BipartiteTwirlCoefficients {
        c0: coeffs[0],
        c1: coeffs[1],
        c2: coeffs[2],
        c3: coeffs[3],
        gamma1: overlaps[1],
        gamma2: overlaps[2],
        gamma3: overlaps[3],
    })
}

/// `(Δ_A⊗Δ_B)(X)` together with its expansion coefficients.
pub fn twirl_two_sided(
    x: &ComplexMatrix,
    dims: (usize, usize),
) -> Result<(ComplexMatrix, BipartiteTwirlCoefficients)> {
    let coeffs = bipartite_twirl_coefficients(x, dims)?;
    let [b0, b1, b2, b3] = two_sided_basis(dims.0, dims.1);
    let out = &(&b0.scale(coeffs.c0) + &b1.scale(coeffs.c1)) + &(&b2.scale(coeffs.c2) + &b3.scale(coeffs.c3));
    Ok((out, coeffs))
}

/// Nested average `(1/(d_A! d_B!)) Σ_{π,σ} (P_π⊗P_σ) X (P_π⊗P_σ)^dagger`.
pub fn twirl_two_sided_bruteforce(x: &ComplexMatrix, dims: (usize, usize), exec: Exec) -> Result<ComplexMatrix> {
    check_square_dims(x, dims)?;
    let (da, db) = dims;
    guard(da, MAX_TWIRL_DIM)?;
    guard(db, MAX_TWIRL_DIM)?;
    let (fa, fb) = (factorial(da), factorial(db));
    let order = fa * fb;
    if order > MAX_GROUP_ORDER {
        return Err(Error::DimensionTooLarge { d: da.max(db), limit: MAX_TWIRL_DIM });
    }
    Ok(average_relabelings(x, order, exec, |k, map| {
        let pa = Permutation::from_lex_rank(da, k / fb);
        let pb = Permutation::from_lex_rank(db, k % fb);
        for (r, slot) in map.iter_mut().enumerate() {
            *slot = pa.apply(r / db) * db + pb.apply(r % db);
        }
    }))
}

/// Choi state `J(Δ) = (Δ⊗id)(|Ω><Ω|)` with dims `[d, d]`.
pub fn choi_matrix(d: usize) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::ParamOutOfRange("Choi matrix needs d >= 1".into()));
    }
    let omega = maximally_entangled(d);
    let j = twirl_one_sided(omega.matrix(), (d, d), Subsystem::A)?;
    Ok(DensityMatrix::from_trusted(j, vec![d, d]))
}

/// The two product terms `(1/d) Φ⊗Φ + (1-1/d) Ψ⊗Ψ`, `Ψ = (1-Φ)/(d-1)`,
/// whose sum is the Choi state.
#[derive(Debug, Clone)]
pub struct SeparableDecomposition {
    pub weights: [f64; 2],
    pub factors: [ComplexMatrix; 2],
}

impl SeparableDecomposition {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::ParamOutOfRange(format!("separable decomposition needs d >= 2, got {d}")));
        }
        let df = d as f64;
        let phi = maximally_coherent_state(d).into_matrix();
        let psi = (&ComplexMatrix::identity(d) - &phi).scale_real(1.0 / (df - 1.0));
        Ok(Self { weights: [1.0 / df, 1.0 - 1.0 / df], factors: [phi, psi] })
    }

    pub fn assemble(&self) -> ComplexMatrix {
        let [phi, psi] = &self.factors;
        &kron(phi, phi).scale_real(self.weights[0]) + &kron(psi, psi).scale_real(self.weights[1])
    }
}

/// Outcome of comparing the Choi state with its separable decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct EntanglementBreakingCertificate {
    pub d: usize,
    pub weights: [f64; 2],
    pub residual: f64,
    pub tol: f64,
}

/// Builds `J(Δ)` from the one-sided closed form, assembles the separable
/// decomposition independently, and fails if they differ by more than `tol`.
pub fn entanglement_breaking_certificate(d: usize, tol: f64) -> Result<EntanglementBreakingCertificate> {
    let decomposition = SeparableDecomposition::new(d)?;
    let choi = choi_matrix(d)?;
    let residual = choi.matrix().max_abs_diff(&decomposition.assemble());
    if !(residual <= tol) {
        return Err(Error::CertificateFailed { d, residual, tol });
    }
    Ok(EntanglementBreakingCertificate { d, weights: decomposition.weights, residual, tol })
}

/// `(1/d!) Σ_π (P_π⊗P_π) X (P_π⊗P_π)^dagger` on a `d²`-dimensional operator.
pub fn collective_twirl_bruteforce(x: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    collective_twirl_bruteforce_with(x, d, Exec::default())
}

pub fn collective_twirl_bruteforce_with(x: &ComplexMatrix, d: usize, exec: Exec) -> Result<ComplexMatrix> {
    guard(d, MAX_COLLECTIVE_DIM)?;
    check_square_dims(x, (d, d))?;
    Ok(average_relabelings(x, factorial(d), exec, |k, map| {
        let p = Permutation::from_lex_rank(d, k);
        for (r, slot) in map.iter_mut().enumerate() {
            *slot = p.apply(r / d) * d + p.apply(r % d);
        }
    }))
}
