use crate::matrix::ComplexMatrix;

/// Whether the Hermitian part of `a - shift*I` admits a Cholesky factorization,
/// i.e. `lambda_min(a) > shift` up to round-off. Much cheaper than an eigensolve
/// when only the sign matters.
pub fn exceeds_shift(a: &ComplexMatrix, shift: f64) -> bool {
    let n = a.dim();
    let h = a.hermitian_part();
    let mut l = vec![crate::matrix::ZERO; n * n];
    for j in 0..n {
        let mut diag = h[(j, j)].re - shift;
        for k in 0..j {
            diag -= l[j * n + k].norm_sqr();
        }
        if !(diag > 0.0) {
            return false;
        }
        let ljj = diag.sqrt();
        l[j * n + j] = ljj.into();
        for i in j + 1..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / ljj;
        }
    }
    true
}
