//! Seeded samplers for test inputs: Ginibre matrices, random density matrices,
//! Hermitian operators, Haar unitaries, Bloch vectors and permutations.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::ComplexMatrix;
use crate::states::{BlochVector, DensityMatrix, Permutation};

/// Seed used when neither a flag nor `PERMUTWIRL_SEED` provides one.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for item `index` of a seeded stream. Depends only on
/// `(seed, index)`, so any partition of the indices reproduces the same draws.
pub fn stream_rng(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex normal: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// `G G^dagger / Tr(G G^dagger)` with a square Ginibre `G` (full rank almost surely).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    random_density_dims(rng, &[d])
}

pub fn random_density_dims<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ginibre(rng, n, n);
    let mut rho = &g * &g.dagger();
    let tr = rho.trace().expect("square").re;
    rho = rho.scale_real(1.0 / tr);
    let rho = rho.hermitian_part().expect("square");
    DensityMatrix::from_trusted(rho, dims.to_vec())
}

/// Real density matrix with non-negative off-diagonal entries: `M M^T / Tr` for
/// `M` with i.i.d. uniform `[0, 1)` entries.
pub fn random_nonnegative_real_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let m = ComplexMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random::<f64>(), 0.0));
    let rho = &m * &m.transpose();
    let tr = rho.trace().expect("square").re;
    DensityMatrix::from_trusted(rho.scale_real(1.0 / tr), vec![d])
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..d).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// `(G + G^dagger) / 2` for a Ginibre `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ginibre(rng, d, d).hermitian_part().expect("square")
}

/// Haar-distributed unitary: the `Q` factor of a Ginibre matrix, normalised so
/// that `R` has a positive real diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    let mut cols: Vec<Vec<Complex64>> = (0..d).map(|j| g.column(j)).collect();
    // modified Gram-Schmidt
    for j in 0..d {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qk = &done[k];
            let proj: Complex64 = qk.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
            for (x, q) in rest[0].iter_mut().zip(qk) {
                *x -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    // Gram-Schmidt already yields R with positive real diagonal, which is the
    // phase convention that makes Q Haar-distributed.
    let mut u = ComplexMatrix::zeros(d, d);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// Uniform point in the closed unit ball.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let r = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        if r.iter().map(|x: &f64| x * x).sum::<f64>() <= 1.0 {
            return BlochVector::new(r[0], r[1], r[2]);
        }
    }
}

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Permutation {
    let mut map: Vec<usize> = (0..d).collect();
    map.shuffle(rng);
    Permutation::new(map).expect("shuffle of identity is a bijection")
}

/// Diagonal unitary with uniformly random phases.
pub fn random_phase_diagonal<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        m[(i, i)] = Complex64::from_polar(1.0, theta);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = seeded_rng(1);
        for d in 1..=6 {
            let u = haar_unitary(&mut rng, d);
            assert!((&u.dagger() * &u).approx_eq(&ComplexMatrix::identity(d), 1e-13));
        }
    }

    #[test]
    fn random_density_is_valid() {
        let mut rng = seeded_rng(2);
        for d in 1..=6 {
            let rho = random_density(&mut rng, d);
            DensityMatrix::validate(rho.matrix().clone(), vec![d], DEFAULT_TOL).unwrap();
        }
    }

    #[test]
    fn stream_rng_depends_only_on_seed_and_index() {
        let a: f64 = stream_rng(9, 4).random();
        let b: f64 = stream_rng(9, 4).random();
        let c: f64 = stream_rng(9, 5).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
