use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, C64, ZERO};

const DEFLATION_RTOL: f64 = 1e-13;
const ITERATIONS_PER_EIGENVALUE: usize = 60;

/// All eigenvalues of a general complex square matrix (with multiplicity).
///
/// Householder reduction to upper Hessenberg form, then single-shift complex
/// QR sweeps with Wilkinson shifts on the active window. A subdiagonal entry
/// is deflated when it is negligible relative to its diagonal neighbours or
/// falls below `1e-13 * ||M||_inf`. Order of the output is unspecified.
pub fn general_spectrum(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = m.dim();
    let mut h = m.clone();
    hessenberg_in_place(&mut h);

    let norm = m.norm_row_sum();
    let floor = DEFLATION_RTOL * norm;
    let eps = f64::EPSILON;
    let mut eig = vec![ZERO; n];
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    let budget = ITERATIONS_PER_EIGENVALUE * n;

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let neighbours = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            if sub <= eps * neighbours || sub <= floor {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }

        its += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence { routine: "Hessenberg QR", budget });
        }

        let mu = if its % 11 == 0 {
            // exceptional shift to break symmetric stalls
            let s = h[(hi, hi - 1)].norm() + if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + c64(0.75 * s, 0.4375 * s)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, l, hi, mu);
    }
    Ok(eig)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let e1 = mid + disc;
    let e2 = mid - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One shifted QR step `H - mu = QR, H <- RQ + mu` on rows/cols `l..=hi`.
fn qr_step(h: &mut ComplexMatrix, l: usize, hi: usize, mu: C64) {
    for k in l..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - l);
    for k in l..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = x.norm().hypot(y.norm());
        let (c, s) = if r == 0.0 { (c64(1.0, 0.0), ZERO) } else { (x / r, y / r) };
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c.conj() * a + s.conj() * b;
            h[(k + 1, j)] = -s * a + c * b;
        }
        rots.push((c, s));
    }
    for (idx, k) in (l..hi).enumerate() {
        let (c, s) = rots[idx];
        for i in l..=(k + 2).min(hi) {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s;
            h[(i, k + 1)] = -a * s.conj() + b * c.conj();
        }
    }
    for k in l..=hi {
        h[(k, k)] += mu;
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
pub(crate) fn hessenberg_in_place(a: &mut ComplexMatrix) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { c64(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A <- (I - 2 v v*) A
        for j in 0..n {
            let mut s = ZERO;
            for (t, vi) in v.iter().enumerate() {
                s += vi.conj() * a[(k + 1 + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= *vi * s * 2.0;
            }
        }
        // A <- A (I - 2 v v*)
        for i in 0..n {
            let mut s = ZERO;
            for (t, vi) in v.iter().enumerate() {
                s += a[(i, k + 1 + t)] * vi;
            }
            for (t, vi) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= s * vi.conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
        }
    }
}
