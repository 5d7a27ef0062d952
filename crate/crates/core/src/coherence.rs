//! Coherence measures, the lower bounds obtained from `Δ(ρ)`, and a sampling
//! estimator for the coherence of assistance.
//!
//! Entropies are in nats throughout.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, DEFAULT_TOL};
use crate::par::{map_indices, Exec};
use crate::random::{haar_unitary, stream_rng};
use crate::states::DensityMatrix;
use crate::twirl::twirl_params;

/// Eigenvalues in `(-NEG_EIGEN_TOL, 0]` count as zero in entropies.
pub const NEG_EIGEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    L1,
    RelEnt,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::L1 => "l1",
            Measure::RelEnt => "relent",
        })
    }
}

/// `diag(ρ)`.
pub fn dephase(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = rho.ensure_monopartite()?;
    let m = rho.matrix();
    let diag = ComplexMatrix::from_fn(d, d, |i, j| if i == j { m[(i, i)] } else { Complex64::new(0.0, 0.0) });
    Ok(DensityMatrix::from_trusted(diag, rho.dims().to_vec()))
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l <= -NEG_EIGEN_TOL {
            return Err(Error::NotPositive { min_eigenvalue: l });
        }
        s -= xlnx(l);
    }
    Ok(s)
}

/// `-Tr(ρ ln ρ)`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eigen(rho.matrix(), DEFAULT_TOL)?;
    entropy_of_spectrum(&eig.eigenvalues)
}

/// Sum of the moduli of the off-diagonal entries of a square matrix.
pub fn l1_offdiagonal(m: &ComplexMatrix) -> Result<f64> {
    let d = m.ensure_square()?;
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += m[(i, j)].norm();
            }
        }
    }
    Ok(s)
}

pub fn l1_coherence(rho: &DensityMatrix) -> Result<f64> {
    rho.ensure_monopartite()?;
    l1_offdiagonal(rho.matrix())
}

/// `S(diag ρ) - S(ρ)`.
pub fn rel_ent_coherence(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.ensure_monopartite()?;
    let diag: Vec<f64> = (0..d).map(|i| rho.matrix()[(i, i)].re).collect();
    Ok(entropy_of_spectrum(&diag)? - von_neumann_entropy(rho)?)
}

/// `d(d-1)|a|`, the l1 coherence of `Δ(ρ)`.
pub fn l1_lower_bound(rho: &DensityMatrix) -> Result<f64> {
    let s = twirl_params(rho)?;
    let d = s.d as f64;
    Ok(d * (d - 1.0) * s.a.abs())
}

/// Relative entropy of coherence of `ρ★(d, p)`:
/// `(1-1/d)(1-p)ln(1-p) + (1/d)[(d-1)p+1]ln[(d-1)p+1]`.
pub fn rel_ent_bound_from_p(d: usize, p: f64) -> Result<f64> {
    if d <= 1 {
        return Ok(0.0);
    }
    let df = d as f64;
    let lo = -1.0 / (df - 1.0);
    if !(p >= lo - DEFAULT_TOL && p <= 1.0 + DEFAULT_TOL) {
        return Err(Error::ParamOutOfRange(format!("p = {p} outside [{lo}, 1] for d = {d}")));
    }
    let p = p.clamp(lo, 1.0);
    Ok((1.0 - 1.0 / df) * xlnx(1.0 - p) + xlnx((df - 1.0) * p + 1.0) / df)
}

pub fn rel_ent_lower_bound(rho: &DensityMatrix) -> Result<f64> {
    let s = twirl_params(rho)?;
    rel_ent_bound_from_p(s.d, s.p)
}

pub fn coherence(rho: &DensityMatrix, measure: Measure) -> Result<f64> {
    match measure {
        Measure::L1 => l1_coherence(rho),
        Measure::RelEnt => rel_ent_coherence(rho),
    }
}

pub fn lower_bound(rho: &DensityMatrix, measure: Measure) -> Result<f64> {
    match measure {
        Measure::L1 => l1_lower_bound(rho),
        Measure::RelEnt => rel_ent_lower_bound(rho),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub measure: Measure,
    pub value: f64,
    pub lower_bound: f64,
    pub gap: f64,
}

impl CoherenceReport {
    /// Relative-entropy figures divided by `ln 2`; l1 figures are unitless and unchanged.
    pub fn in_bits(self) -> Self {
        match self.measure {
            Measure::L1 => self,
            Measure::RelEnt => {
                let k = std::f64::consts::LN_2;
                Self { value: self.value / k, lower_bound: self.lower_bound / k, gap: self.gap / k, ..self }
            }
        }
    }
}

pub fn coherence_report(rho: &DensityMatrix, measure: Measure) -> Result<CoherenceReport> {
    let value = coherence(rho, measure)?;
    let lower_bound = lower_bound(rho, measure)?;
    Ok(CoherenceReport { measure, value, lower_bound, gap: value - lower_bound })
}

/// Best average pure-state coherence found among the sampled decompositions.
/// This is a lower estimate of the coherence of assistance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssistanceEstimate {
    pub measure: Measure,
    pub value: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `p·C(ψ/√p)` for an unnormalised vector `ψ` with `p = ||ψ||²`.
fn weighted_pure_coherence(psi: &[Complex64], measure: Measure) -> f64 {
    let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if p <= 0.0 {
        return 0.0;
    }
    match measure {
        Measure::L1 => {
            let s: f64 = psi.iter().map(|z| z.norm()).sum();
            (s * s - p).max(0.0)
        }
        Measure::RelEnt => -psi.iter().map(|z| xlnx(z.norm_sqr() / p)).sum::<f64>() * p,
    }
}

/// Square-root factors `√λ_i |v_i>` of `ρ`, dropping numerically null directions.
fn sqrt_factors(rho: &DensityMatrix) -> Result<Vec<Vec<Complex64>>> {
    let eig = hermitian_eigen(rho.matrix(), DEFAULT_TOL)?;
    let mut factors = Vec::new();
    for (k, &l) in eig.eigenvalues.iter().enumerate().rev() {
        if l <= -NEG_EIGEN_TOL {
            return Err(Error::NotPositive { min_eigenvalue: l });
        }
        if l > NEG_EIGEN_TOL {
            let s = l.sqrt();
            factors.push(eig.eigenvectors.column(k).into_iter().map(|z| z * s).collect());
        }
    }
    Ok(factors)
}

/// Average coherence of one random decomposition. With `r = rank(ρ)` and a
/// Haar unitary `U` of size `k ∈ {r, ..., d+2}`, the ensemble members are
/// `ψ_j = Σ_{i<r} U_{ji} √λ_i |v_i>`, `j < k`.
fn sample_decomposition<R: Rng + ?Sized>(
    rng: &mut R,
    factors: &[Vec<Complex64>],
    d: usize,
    measure: Measure,
) -> f64 {
    let r = factors.len();
    let k = rng.random_range(r..=d + 2);
    let u = haar_unitary(rng, k);
    let mut total = 0.0;
    let mut psi = vec![Complex64::new(0.0, 0.0); d];
    for j in 0..k {
        psi.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (i, f) in factors.iter().enumerate() {
            let w = u[(j, i)];
            for (z, &fi) in psi.iter_mut().zip(f) {
                *z += w * fi;
            }
        }
        total += weighted_pure_coherence(&psi, measure);
    }
    total
}

/// Per-sample values of the decomposition search; sample `j` draws from
/// `stream_rng(seed, j)`, so any prefix is reproducible on its own.
pub fn assistance_samples(rho: &DensityMatrix, measure: Measure, samples: usize, seed: u64, exec: Exec) -> Result<Vec<f64>> {
    let d = rho.ensure_monopartite()?;
    if samples == 0 {
        return Err(Error::SampleCountZero);
    }
    let factors = sqrt_factors(rho)?;
    if factors.is_empty() {
        return Err(Error::NotPositive { min_eigenvalue: 0.0 });
    }
    Ok(map_indices(exec, samples, |j| {
        let mut rng = stream_rng(seed, j as u64);
        sample_decomposition(&mut rng, &factors, d, measure)
    }))
}

pub fn assistance_estimate(rho: &DensityMatrix, measure: Measure, samples: usize, seed: u64) -> Result<AssistanceEstimate> {
    assistance_estimate_with(rho, measure, samples, seed, Exec::default())
}

pub fn assistance_estimate_with(
    rho: &DensityMatrix,
    measure: Measure,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<AssistanceEstimate> {
    let values = assistance_samples(rho, measure, samples, seed, exec)?;
    let value = values.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(AssistanceEstimate { measure, value, samples, seed })
}
