use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, C64};

/// `||M||_inf` above which the exponential is refused; `e^700` is still finite.
pub const EXPM_GUARD: f64 = 700.0;

const THETA_13: f64 = 5.371_920_351_148_152;
const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with the [13/13] Padé approximant.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let norm_inf = m.norm_row_sum();
    if !norm_inf.is_finite() || norm_inf > EXPM_GUARD {
        return Err(Error::Overflow { norm: norm_inf, bound: EXPM_GUARD });
    }
    let n = m.dim();
    let norm_one = m.transpose().norm_row_sum();
    let squarings = if norm_one > THETA_13 {
        (norm_one / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale_real(0.5f64.powi(squarings));

    let b = |k: usize| c64(PADE_13[k], 0.0);
    let id = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let lin = |c6: C64, c4: C64, c2: C64, c0: C64| -> ComplexMatrix {
        let mut s = a6.scale(c6);
        s += &a4.scale(c4);
        s += &a2.scale(c2);
        s += &id.scale(c0);
        s
    };
    let mut inner_u = &a6 * &lin(b(13), b(11), b(9), c64(0.0, 0.0));
    inner_u += &lin(b(7), b(5), b(3), b(1));
    let u = &a * &inner_u;
    let mut v = &a6 * &lin(b(12), b(10), b(8), c64(0.0, 0.0));
    v += &lin(b(6), b(4), b(2), b(0));

    let p = &v + &u;
    let q = &v - &u;
    let mut r = solve(&q, &p)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap();
        if lu[(piv, k)].norm() == 0.0 {
            return Err(Error::InvalidArgument("singular system in LU solve".into()));
        }
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
                let t = x[(k, j)];
                x[(k, j)] = x[(piv, j)];
                x[(piv, j)] = t;
            }
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..n {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let pivot = lu[(k, k)];
        for j in 0..n {
            let mut s = x[(k, j)];
            for i in (k + 1)..n {
                s -= lu[(k, i)] * x[(i, j)];
            }
            x[(k, j)] = s / pivot;
        }
    }
    Ok(x)
}
