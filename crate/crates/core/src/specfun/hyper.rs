use crate::error::{Error, Result};
use crate::scalar::{as_nonpositive_integer, Real};

use super::gamma::ln_gamma_ratio;
use super::sum::CompensatedSum;

/// Terms of the terminating series `₂F₁(-n, b; c; z)`, summed in ascending
/// order. The returned accumulator exposes the absolute term mass, which
/// callers use to estimate the condition number of the sum.
pub fn gauss_2f1_terminating_sum<T: Real>(n: usize, b: T, c: T, z: T) -> Result<CompensatedSum<T>> {
    if let Some(pole) = as_nonpositive_integer(c) {
        if pole < n {
            return Err(Error::Pole {
                param: c.as_f64(),
                order: pole + 1,
            });
        }
    }
    let neg_n = -T::from_usize(n);
    let mut acc = CompensatedSum::new();
    let mut term = T::one();
    acc.add(term);
    for k in 1..=n {
        let km1 = T::from_usize(k - 1);
        term = term * (neg_n + km1) * (b + km1) / ((c + km1) * T::from_usize(k)) * z;
        acc.add(term);
    }
    Ok(acc)
}

/// `₂F₁(-n, b; c; z)`, a polynomial of degree `n` in `z`.
///
/// Errors with [`Error::Pole`] when `c` is a non-positive integer `-j` with
/// `j < n`, since `(c)_k` then vanishes inside the summation range.
///
/// ```
/// use sunmodel::specfun::gauss_2f1_terminating;
/// let v: f64 = gauss_2f1_terminating(1, 2.0, 4.0, 0.5).unwrap();
/// assert_eq!(v, 0.75);
/// ```
pub fn gauss_2f1_terminating<T: Real>(n: usize, b: T, c: T, z: T) -> Result<T> {
    gauss_2f1_terminating_sum(n, b, c, z).map(|s| s.value())
}

/// `₂F₁(-n, b; c; 1) = (c-b)_n / (c)_n` (Gauss' summation theorem).
///
/// When `c = b + 1` this is `n! / ((b+1)(b+2)...(b+n))`, evaluated as a
/// product of ratios. Otherwise both Pochhammer ratios are taken from
/// [`ln_gamma_ratio`], which requires `c > 0` and `c - b > 0`.
pub fn gauss_2f1_at_unity<T: Real>(n: usize, b: T, c: T) -> Result<T> {
    if n == 0 {
        return Ok(T::one());
    }
    let cmb = c - b;
    if cmb == T::one() {
        let mut acc = T::one();
        for j in 1..=n {
            let j = T::from_usize(j);
            acc = acc * j / (b + j);
        }
        return Ok(acc);
    }
    if !(c > T::zero() && cmb > T::zero()) {
        return Err(Error::domain(format!(
            "unit-argument 2F1 needs c > 0 and c - b > 0, got b={:?}, c={:?}",
            b, c
        )));
    }
    let nn = T::from_usize(n);
    let log = ln_gamma_ratio(cmb + nn, cmb)? - ln_gamma_ratio(c + nn, c)?;
    Ok(log.exp())
}
