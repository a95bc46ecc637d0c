//! The classical alternating-series forms of mass and pressure.
//!
//! They are algebraically identical to the closed forms in the parent
//! module but sum terms of both signs whose magnitudes grow like `2^γ`
//! relative to the result. Evaluate them in [`crate::Quad`] to use them as
//! an independent check.

use crate::calibrate::constraint_value;
use crate::density::{check_unit_interval, ModelParams};
use crate::error::Result;
use crate::scalar::Real;
use crate::specfun::{
    gauss_2f1_at_unity, gauss_2f1_terminating, pochhammer, CompensatedSum, KdfSpec,
};

use super::{a3, b2};

/// `(-γ)_m / m!`, i.e. `(-1)^m C(γ, m)`.
pub(crate) fn signed_binomial<T: Real>(gamma: usize, m: usize) -> T {
    let mut acc = T::one();
    for j in 0..m {
        acc = acc * T::from_usize(gamma - j) / T::from_usize(j + 1);
    }
    if m % 2 == 1 {
        -acc
    } else {
        acc
    }
}

fn y_delta<T: Real>(params: &ModelParams<T>, y: T) -> T {
    y.powf(params.delta())
}

/// `M(r)/M(R) = C(δ,γ) y³ ₂F₁(-γ, 3/δ; 3/δ+1; y^δ)`.
pub fn mass_ratio<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    check_unit_interval(y)?;
    let a3 = a3(params);
    let f = gauss_2f1_terminating(
        params.gamma() as usize,
        a3,
        a3 + T::one(),
        y_delta(params, y),
    )?;
    Ok(constraint_value(params.delta(), params.gamma()) * y * y * y * f)
}

/// One summand of the pressure sum, without the `(-γ)_m/m!` weight:
/// `1/((3/δ+m)(2/δ+m)) · [γ!/∏(2/δ+m+j) - y^{mδ+2} ₂F₁(-γ, 2/δ+m; 2/δ+m+1; y^δ)]`.
fn pressure_summand<T: Real>(
    params: &ModelParams<T>,
    m: usize,
    y: T,
    interior_only: bool,
) -> Result<T> {
    let gamma = params.gamma() as usize;
    let mm = T::from_usize(m);
    let b = b2(params) + mm;
    let denom = (a3(params) + mm) * b;
    let complete = if interior_only {
        T::zero()
    } else {
        gauss_2f1_at_unity(gamma, b, b + T::one())?
    };
    let partial = if y == T::zero() {
        T::zero()
    } else {
        let x = y_delta(params, y);
        x.powi(m as i32) * y * y * gauss_2f1_terminating(gamma, b, b + T::one(), x)?
    };
    Ok((complete - partial) / denom)
}

fn weighted_sum<T: Real>(params: &ModelParams<T>, f: impl Fn(usize) -> Result<T>) -> Result<T> {
    let gamma = params.gamma() as usize;
    let mut acc = CompensatedSum::new();
    for m in 0..=gamma {
        acc.add(signed_binomial::<T>(gamma, m) * f(m)?);
    }
    Ok(acc.value())
}

/// `g(y)` as the single sum over `m` of complete minus incomplete terms.
pub fn pressure_factor_g<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    check_unit_interval(y)?;
    let d = params.delta();
    Ok(weighted_sum(params, |m| pressure_summand(params, m, y, false))? / (d * d))
}

/// `ψ(δ, γ) = δ² g(0)`.
pub fn psi<T: Real>(params: &ModelParams<T>) -> Result<T> {
    let d = params.delta();
    Ok(pressure_factor_g(params, T::zero())? * d * d)
}

/// `φ(y) = ψ - δ² g(y)`, summed directly.
pub fn phi<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    check_unit_interval(y)?;
    Ok(-weighted_sum(params, |m| {
        pressure_summand(params, m, y, true)
    })?)
}

/// The Kampé de Fériet series `F^{1:2:1}_{1:1:0}` behind the double-sum
/// form of the pressure:
///
/// ```text
/// Σ_{m,n} (-γ)_m/m! (-γ)_n/n! (2/δ)_{m+n}/(2/δ+1)_{m+n} (3/δ)_m/(3/δ+1)_m x^m z^n
/// ```
pub fn pressure_kdf_spec<T: Real>(params: &ModelParams<T>, x: T) -> KdfSpec<T> {
    let neg_gamma = -T::from_usize(params.gamma() as usize);
    let (a3, b2) = (a3(params), b2(params));
    KdfSpec {
        upper_joint: vec![b2],
        upper_x: vec![neg_gamma, a3],
        upper_y: vec![neg_gamma],
        lower_joint: vec![b2 + T::one()],
        lower_x: vec![a3 + T::one()],
        lower_y: vec![],
        x,
        y: x,
    }
}

/// `g(y) = [F(1, 1) - y² F(y^δ, y^δ)] / 6`.
pub fn pressure_factor_g_kdf<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    check_unit_interval(y)?;
    let centre = pressure_kdf_spec(params, T::one()).eval()?;
    let partial = if y == T::zero() {
        T::zero()
    } else {
        y * y * pressure_kdf_spec(params, y_delta(params, y)).eval()?
    };
    Ok((centre - partial) / T::from_f64(6.0))
}

/// `(x)_n` ratio helper shared with the energy series.
pub(crate) fn poch_ratio<T: Real>(a: T, b: T, n: usize) -> T {
    pochhammer(a, n) / pochhammer(b, n)
}
