use num_traits::Num;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Rising factorial `x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
///
/// Only needs ring operations, so it also works for exact types such as
/// `num_rational::BigRational`. Floating-point results may overflow to
/// infinity for large `n`; use [`ln_gamma_ratio`] in that regime.
pub fn pochhammer<T: Num + Clone>(x: T, n: usize) -> T {
    let mut acc = T::one();
    let mut factor = x;
    for _ in 0..n {
        acc = acc * factor.clone();
        factor = factor + T::one();
    }
    acc
}

/// `n!` as a scalar.
pub fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, j| acc * T::from_usize(j))
}

/// Stirling-series coefficients B_{2k} / (2k (2k-1)) as exact numerator and
/// denominator pairs, so that every scalar type rounds them only once.
const STIRLING: [(f64, f64); 15] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360360.0),
    (1.0, 156.0),
    (-3617.0, 122400.0),
    (43867.0, 244188.0),
    (-174611.0, 125400.0),
    (77683.0, 5796.0),
    (-236364091.0, 1506960.0),
    (657931.0, 300.0),
    (-3392780147.0, 93960.0),
    (1723168255201.0, 2492028.0),
];

const SHIFT_THRESHOLD: f64 = 20.0;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    ln_gamma_ratio(x, T::one())
}

/// `ln Γ(a) - ln Γ(b)` for `a, b > 0`.
///
/// Both arguments are shifted upward by the same integer so that the
/// Stirling series applies, and every difference is formed from `a - b`
/// directly. The result therefore stays accurate relative to the size of the
/// ratio even when `a` and `b` are close.
pub fn ln_gamma_ratio<T: Real>(a: T, b: T) -> Result<T> {
    if !(a > T::zero() && b > T::zero()) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "ln_gamma_ratio requires positive finite arguments, got ({:?}, {:?})",
            a, b
        )));
    }
    if a == b {
        return Ok(T::zero());
    }
    let d = a - b;
    let threshold = T::from_f64(SHIFT_THRESHOLD);

    // ln Γ(a) - ln Γ(b) = [ln Γ(a+K) - ln Γ(b+K)] - Σ_{i<K} ln((a+i)/(b+i))
    let mut shift_correction = T::zero();
    let (mut big_a, mut big_b) = (a, b);
    while big_a.min(big_b) < threshold {
        shift_correction = shift_correction + (d / big_b).ln_1p();
        big_a = big_a + T::one();
        big_b = big_b + T::one();
    }

    let half = T::from_f64(0.5);
    // (A - 1/2) ln A - A - [(B - 1/2) ln B - B]
    let leading = d * big_a.ln() + (big_b - half) * (d / big_b).ln_1p() - d;

    // Σ c_k (A^{-(2k-1)} - B^{-(2k-1)}), each difference written as
    // -d Σ_{i<m} A^{-(m-i)} B^{-(i+1)} to avoid cancellation.
    let inv_a = T::one() / big_a;
    let inv_b = T::one() / big_b;
    let mut series = T::zero();
    for (k, &(num, den)) in STIRLING.iter().enumerate() {
        let m = 2 * k + 1;
        let mut diff = T::zero();
        for i in 0..m {
            diff = diff + inv_a.powi((m - i) as i32) * inv_b.powi(i as i32 + 1);
        }
        let coeff = T::from_f64(num) / T::from_f64(den);
        series = series - coeff * d * diff;
    }

    Ok(leading + series - shift_correction)
}
