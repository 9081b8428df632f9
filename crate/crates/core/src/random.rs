//! Seeded random ensembles: Gaussian matrices, Haar vectors, isometries.
//!
//! Every generator takes an explicit RNG; [`rng_from_seed`] and
//! [`derive_seed`] turn a user seed into independent per-trial streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{c64, vector, ComplexMatrix, C64};

pub type TrialRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes `(seed, stream, index)` into a fresh seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian with `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    c64(gaussian(rng) * s, gaussian(rng) * s)
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Gaussian Hermitian ensemble: `(G + G*)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    random_matrix(rng, dim).hermitian_part()
}

/// Square of a Gaussian Hermitian matrix.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, dim);
    (&h * &h).hermitian_part()
}

/// Haar-distributed unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if let Some(u) = vector::normalized(&v) {
            return u;
        }
    }
}

/// Random density matrix `G G* / tr(G G*)`; full rank with probability one.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = random_matrix(rng, dim);
    let p = (&g * &g.adjoint()).hermitian_part();
    let t = p.trace().re;
    p.scale_real(1.0 / t)
}

/// Haar-random unitary (Gram-Schmidt of a Ginibre matrix with positive `R` diagonal).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let cols = random_isometry_columns(rng, dim, dim);
    let mut u = ComplexMatrix::zeros(dim);
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    u
}

/// `cols` orthonormal vectors in `C^rows` from Gaussian columns (Gram-Schmidt, twice).
pub fn random_isometry_columns<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> Vec<Vec<C64>> {
    assert!(cols <= rows, "an isometry needs cols <= rows");
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(cols);
    while out.len() < cols {
        let mut v: Vec<C64> = (0..rows).map(|_| complex_gaussian(rng)).collect();
        let start = vector::norm(&v);
        for _ in 0..2 {
            for q in &out {
                let h = vector::dot(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= h * y;
                }
            }
        }
        let n = vector::norm(&v);
        if n > 1e-8 * start {
            out.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    out
}
