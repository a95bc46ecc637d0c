//! Incomplete beta integrals `B_x(p, N+1)` with a positive integer second
//! parameter, written as finite sums of positive terms.
//!
//! With `q = 1 - x` and `xp = x^p`,
//!
//! ```text
//! I_x(p, N+1) = xp Σ_{j=0}^{N} (p)_j / j! q^j
//! 1 - I_x(p, N+1) = xp Σ_{j>N} (p)_j / j! q^j
//! ```
//!
//! Every term is non-negative, so neither form suffers the cancellation of
//! the alternating `₂F₁(-N, p; p+1; x)` expansion. Callers pass `xp` and `q`
//! directly because both are usually available in closed form without
//! rounding through `x`.

use crate::scalar::Real;

use super::sum::CompensatedSum;

/// Series length after which the upper tail falls back to `1 - lower`.
const TAIL_MAX_TERMS: usize = 20_000;

/// Complete beta function `B(p, N+1) = N! / (p (p+1) ... (p+N))`.
pub fn complete_beta<T: Real>(p: T, n: usize) -> T {
    let mut acc = T::one() / p;
    for j in 1..=n {
        let j = T::from_usize(j);
        acc = acc * j / (p + j);
    }
    acc
}

/// Weights `w_j = N!/(p+1)_N (p)_j/j!` for `j = 0..=len-1`.
///
/// They satisfy `B(p, N+1) (p)_j / j! = w_j / p`. The weights are built downward from
/// `w_N = p/(p+N)` for `j <= N` and upward beyond `N`, so no factorial is
/// ever formed.
pub fn beta_weights<T: Real>(p: T, n: usize, len: usize) -> Vec<T> {
    let mut w = vec![T::zero(); len.max(n + 1)];
    w[n] = if n == 0 {
        T::one()
    } else {
        p / (p + T::from_usize(n))
    };
    for j in (1..=n).rev() {
        let jj = T::from_usize(j);
        w[j - 1] = w[j] * jj / (p + jj - T::one());
    }
    for j in n..w.len() - 1 {
        let jj = T::from_usize(j);
        w[j + 1] = w[j] * (p + jj) / (jj + T::one());
    }
    w.truncate(len);
    w
}

/// Regularized lower incomplete beta `I_x(p, N+1)`.
pub fn lower_regularized<T: Real>(p: T, n: usize, xp: T, q: T) -> T {
    let mut acc = CompensatedSum::new();
    let mut term = T::one();
    acc.add(term);
    for j in 1..=n {
        let jj = T::from_usize(j);
        term = term * (p + jj - T::one()) / jj * q;
        acc.add(term);
    }
    // Rounding can carry the product a few ulps past one near x = 1.
    (xp * acc.value()).min(T::one())
}

/// Regularized upper incomplete beta `1 - I_x(p, N+1)`.
pub fn upper_regularized<T: Real>(p: T, n: usize, xp: T, q: T) -> T {
    let lower = lower_regularized(p, n, xp, q);
    let half = T::from_f64(0.5);
    if lower <= half || q > T::from_f64(0.99) {
        return T::one() - lower;
    }
    tail_series(p, n, xp, q).unwrap_or(T::one() - lower)
}

/// `xp Σ_{j>N} (p)_j/j! q^j`, or `None` if it needs too many terms.
fn tail_series<T: Real>(p: T, n: usize, xp: T, q: T) -> Option<T> {
    // Start from xp (p)_{N+1}/(N+1)! q^{N+1} without forming it from a
    // possibly overflowing power.
    let mut term = xp;
    for j in 1..=n + 1 {
        let jj = T::from_usize(j);
        term = term * (p + jj - T::one()) / jj * q;
    }
    let mut acc = CompensatedSum::new();
    let eps = T::epsilon();
    let mut j = n + 1;
    loop {
        acc.add(term);
        if term <= eps * acc.value() || term == T::zero() {
            return Some(acc.value());
        }
        if j - n > TAIL_MAX_TERMS {
            return None;
        }
        j += 1;
        let jj = T::from_usize(j);
        term = term * (p + jj - T::one()) / jj * q;
    }
}
