//! Alternating-series and Kampé de Fériet forms of the luminosity
//! integrals. Evaluate in [`crate::Quad`]; see [`crate::structure::series`].

use crate::density::{check_unit_interval, ModelParams};
use crate::error::Result;
use crate::scalar::Real;
use crate::specfun::{gauss_2f1_terminating, ln_gamma, ln_gamma_ratio, CompensatedSum, KdfSpec};
use crate::structure::series::{poch_ratio, signed_binomial};
use crate::structure::{a3, b2};

pub use crate::structure::series::{phi, psi};

/// `(δ²/6) (-γ)_{m1}/m1! (-γ)_{m2}/m2! (3/δ)_{m1}/(3/δ+1)_{m1} (2/δ)_M/(2/δ+1)_M`
/// with `M = m1 + m2`, summed against `f(M)`.
fn double_sum<T: Real>(params: &ModelParams<T>, f: impl Fn(usize) -> Result<T>) -> Result<T> {
    let gamma = params.gamma() as usize;
    let (a3, b2) = (a3(params), b2(params));
    let one = T::one();
    let fs = (0..=2 * gamma).map(&f).collect::<Result<Vec<_>>>()?;
    let mut acc = CompensatedSum::new();
    for m1 in 0..=gamma {
        let outer = signed_binomial::<T>(gamma, m1) * poch_ratio(a3, a3 + one, m1);
        for m2 in 0..=gamma {
            let big = m1 + m2;
            acc.add(
                outer * signed_binomial::<T>(gamma, m2) * poch_ratio(b2, b2 + one, big) * fs[big],
            );
        }
    }
    let d = params.delta();
    Ok(acc.value() * d * d / T::from_f64(6.0))
}

/// `(nγ)! Γ(p) / Γ(p + nγ + 1)`.
fn gamma_beta<T: Real>(p: T, ng: usize) -> Result<T> {
    let ng = T::from_usize(ng);
    Ok((ln_gamma(ng + T::one())? + ln_gamma_ratio(p, p + ng + T::one())?).exp())
}

/// `I₁` as the double sum over `(m1, m2)` with each moment
/// `∫ u^{4+Mδ} (1-u^δ)^{nγ} du` reduced to a gamma ratio.
pub fn integral_i1<T: Real>(params: &ModelParams<T>, n: u32) -> Result<T> {
    let ng = n as usize * params.gamma() as usize;
    let a5 = T::from_f64(5.0) / params.delta();
    let d = params.delta();
    double_sum(params, |big| {
        Ok(gamma_beta(a5 + T::from_usize(big), ng)? / d)
    })
}

/// The `F^{2:2:1}_{2:1:0}` series at unit arguments whose scaled value is
/// `I₁`.
pub fn integral_i1_kdf_spec<T: Real>(params: &ModelParams<T>, n: u32) -> KdfSpec<T> {
    let ng = T::from_usize(n as usize * params.gamma() as usize);
    let neg_gamma = -T::from_usize(params.gamma() as usize);
    let (a3, b2) = (a3(params), b2(params));
    let a5 = T::from_f64(5.0) / params.delta();
    KdfSpec {
        upper_joint: vec![b2, a5],
        upper_x: vec![neg_gamma, a3],
        upper_y: vec![neg_gamma],
        lower_joint: vec![b2 + T::one(), a5 + ng + T::one()],
        lower_x: vec![a3 + T::one()],
        lower_y: vec![],
        x: T::one(),
        y: T::one(),
    }
}

/// `I₁ = (δ/6) (nγ)! Γ(5/δ)/Γ(5/δ + nγ + 1) · F^{2:2:1}_{2:1:0}[…](1, 1)`.
pub fn integral_i1_kdf<T: Real>(params: &ModelParams<T>, n: u32) -> Result<T> {
    let ng = n as usize * params.gamma() as usize;
    let a5 = T::from_f64(5.0) / params.delta();
    let f = integral_i1_kdf_spec(params, n).eval()?;
    Ok(params.delta() / T::from_f64(6.0) * gamma_beta(a5, ng)? * f)
}

/// `I₂(y) = (y³/3) ₂F₁(-nγ, 3/δ; 3/δ+1; y^δ)`, in units of `R³`.
pub fn integral_i2<T: Real>(params: &ModelParams<T>, n: u32, y: T) -> Result<T> {
    check_unit_interval(y)?;
    let a3 = a3(params);
    let ng = n as usize * params.gamma() as usize;
    let f = gauss_2f1_terminating(ng, a3, a3 + T::one(), y.powf(params.delta()))?;
    Ok(y * y * y / T::from_f64(3.0) * f)
}

/// `I₃(y)` as the double sum of `y^{5+Mδ}/(5+Mδ) ₂F₁(-nγ, 5/δ+M; 5/δ+M+1; y^δ)`
/// moments, in units of `R³`.
pub fn integral_i3<T: Real>(params: &ModelParams<T>, n: u32, y: T) -> Result<T> {
    check_unit_interval(y)?;
    if y == T::zero() {
        return Ok(T::zero());
    }
    let d = params.delta();
    let ng = n as usize * params.gamma() as usize;
    let a5 = T::from_f64(5.0) / d;
    let x = y.powf(d);
    let y5 = y * y * y * y * y;
    double_sum(params, |big| {
        let bb = T::from_usize(big);
        let f = gauss_2f1_terminating(ng, a5 + bb, a5 + bb + T::one(), x)?;
        Ok(y5 * x.powi(big as i32) / (T::from_f64(5.0) + bb * d) * f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Quad;

    #[test]
    fn literal_forms_match_closed_forms_in_quad() {
        // The triple alternating sum behind I₃ cancels ten to fifteen digits
        // at y = 1, so only ~1e-18 of the double-double precision survives.
        let params: ModelParams<Quad> = ModelParams::new(Quad::from_f64(1.28), 10).unwrap();
        for n in 1..=2 {
            let closed = crate::energy::integral_i1(&params, n);
            let double = integral_i1(&params, n).unwrap();
            let kdf = integral_i1_kdf(&params, n).unwrap();
            assert!(((double - closed) / closed).abs().as_f64() < 1e-24);
            assert!(((kdf - closed) / closed).abs().as_f64() < 1e-24);
            for i in 1..=4 {
                let y = Quad::from_f64(i as f64 / 4.0);
                let i2 = crate::energy::integral_i2(&params, n, y).unwrap();
                let i3 = crate::energy::integral_i3(&params, n, y).unwrap();
                assert!(
                    ((integral_i2(&params, n, y).unwrap() - i2) / i2)
                        .abs()
                        .as_f64()
                        < 1e-24
                );
                let lit = integral_i3(&params, n, y).unwrap();
                assert!(
                    ((lit - i3) / i3).abs().as_f64() < 1e-17,
                    "n={n} y={y:?}: {lit:?} vs {i3:?}"
                );
            }
        }
    }
}
