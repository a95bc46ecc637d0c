//! Thermonuclear energy generation `ε = ε₀ ρⁿ Tᵐ` and the resulting
//! luminosity for the power-law density model.
//!
//! Closed forms exist for `m = 1`. With `ρ = ρ_c u` and
//! `T = Θ g/u` (see [`SolarConstants::temperature_unit`]),
//!
//! ```text
//! L(r) = 4π ε₀ Θ ρ_c^{n+1} R³ / δ² · [ψ I₂(y) - I₃(y)]
//! ```
//!
//! where `I₂ = ∫_0^y s² uⁿ ds` and `I₃ = ∫_0^y s² uⁿ φ(s) ds`.

use serde::{Deserialize, Serialize};

use crate::density::ModelParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::beta::{beta_weights, complete_beta, lower_regularized, upper_regularized};
use crate::specfun::{ln_gamma, ln_gamma_ratio, CompensatedSum};
use crate::structure::{a3, b2, g_sum, Point, SolarConstants};

pub mod series;

/// Rate parameters of `ε = ε₀ ρⁿ Tᵐ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams<T> {
    pub epsilon_0: T,
    pub n: u32,
    pub m: u32,
}

impl<T: Real> EnergyParams<T> {
    pub fn new(epsilon_0: T, n: u32, m: u32) -> Result<Self> {
        if !(epsilon_0 > T::zero() && epsilon_0.is_finite()) {
            return Err(Error::domain(format!(
                "epsilon_0 must be positive, got {epsilon_0:?}"
            )));
        }
        if n == 0 || m == 0 {
            return Err(Error::domain(
                "density and temperature exponents must be at least 1",
            ));
        }
        Ok(Self { epsilon_0, n, m })
    }

    fn require_linear_temperature(&self) -> Result<()> {
        if self.m == 1 {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "closed-form luminosity needs m = 1, got m = {}; integrate numerically instead",
                self.m
            )))
        }
    }
}

/// `ε₀ ρⁿ Tᵐ`, erg g⁻¹ s⁻¹.
pub fn epsilon_rate<T: Real>(rho: T, temperature: T, params: &EnergyParams<T>) -> T {
    params.epsilon_0 * rho.powi(params.n as i32) * temperature.powi(params.m as i32)
}

/// `ψ(δ, γ) = δ² g(0)`.
pub fn psi<T: Real>(params: &ModelParams<T>) -> T {
    let d = params.delta();
    g_sum(params, |_, _| T::one()) * d * d
}

/// `φ(y) = ψ - δ² g(y)`, which rises from 0 at the centre to `ψ` at the
/// surface.
pub fn phi<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    let pt = Point::new(params, y)?;
    let d = params.delta();
    Ok(g_sum(params, |p, n| lower_regularized(p, n, pt.y2, pt.q)) * d * d)
}

fn n_gamma<T: Real>(params: &ModelParams<T>, n: u32) -> usize {
    n as usize * params.gamma() as usize
}

/// `I₀ = ∫_0^1 u² (1 - u^δ)^{nγ} du = (nγ)! Γ(3/δ) / (δ Γ(3/δ + nγ + 1))`.
pub fn integral_i0<T: Real>(params: &ModelParams<T>, n: u32) -> Result<T> {
    let a3 = a3(params);
    let ng = T::from_usize(n_gamma(params, n));
    let log = ln_gamma(ng + T::one())? + ln_gamma_ratio(a3, a3 + ng + T::one())?;
    Ok(log.exp() / params.delta())
}

/// `I₁ = ∫_0^1 u² (1 - u^δ)^{nγ} φ(u) du`.
pub fn integral_i1<T: Real>(params: &ModelParams<T>, n: u32) -> T {
    i3_sum(params, n, |_, _| T::one())
}

/// `I₂(y) = ∫_0^y s² (1 - s^δ)^{nγ} ds`, in units of `R³`.
pub fn integral_i2<T: Real>(params: &ModelParams<T>, n: u32, y: T) -> Result<T> {
    let pt = Point::new(params, y)?;
    let (a3, ng) = (a3(params), n_gamma(params, n));
    Ok(complete_beta(a3, ng) * lower_regularized(a3, ng, pt.y3, pt.q) / params.delta())
}

/// `I₃(y) = ∫_0^y s² (1 - s^δ)^{nγ} φ(s) ds`, in units of `R³`.
pub fn integral_i3<T: Real>(params: &ModelParams<T>, n: u32, y: T) -> Result<T> {
    let pt = Point::new(params, y)?;
    Ok(i3_sum(params, n, |p, k| {
        lower_regularized(p, k, pt.y5, pt.q)
    }))
}

/// `(1/3)(δ/2) Σ_k w_k(3/δ, γ) Σ_{j≤γ+k} w_j(2/δ, γ+k) B(5/δ, nγ+j+1) f(5/δ, nγ+j)`.
///
/// Expanding `φ(s) = (δ/3) Σ_k w_k B(2/δ, γ+k+1) I_{s^δ}(2/δ, γ+k+1)` into
/// powers of `1 - s^δ` turns each term of `I₃` into an incomplete beta
/// integral in `5/δ`.
fn i3_sum<T: Real>(params: &ModelParams<T>, n: u32, f: impl Fn(T, usize) -> T) -> T {
    let gamma = params.gamma() as usize;
    let ng = n_gamma(params, n);
    let a5 = T::from_f64(5.0) / params.delta();
    let b2 = b2(params);
    let outer = beta_weights(a3(params), gamma, gamma + 1);
    let mut acc = CompensatedSum::new();
    for (k, &wk) in outer.iter().enumerate() {
        let inner = beta_weights(b2, gamma + k, gamma + k + 1);
        for (j, &wj) in inner.iter().enumerate() {
            acc.add(wk * wj * complete_beta(a5, ng + j) * f(a5, ng + j));
        }
    }
    acc.value() / (T::from_f64(3.0) * b2)
}

/// Most terms taken by the exterior series before giving up on it.
const EXTERIOR_MAX_TERMS: usize = 4000;

/// `∫_y^1 s² uⁿ (ψ - φ(s)) ds`, the luminosity generated outside `y`, as
/// the convergent tail `Σ_{j>γ+k}` of the expansion in [`i3_sum`].
fn exterior_core<T: Real>(params: &ModelParams<T>, n: u32, pt: &Point<T>) -> Option<T> {
    let gamma = params.gamma() as usize;
    let ng = n_gamma(params, n);
    let a5 = T::from_f64(5.0) / params.delta();
    let b2 = b2(params);
    let outer = beta_weights(a3(params), gamma, gamma + 1);
    let eps = T::epsilon();
    let mut acc = CompensatedSum::new();
    for (k, &wk) in outer.iter().enumerate() {
        let top = gamma + k;
        let mut w = beta_weights(b2, top, top + 2)[top + 1];
        let mut j = top + 1;
        let mut partial = T::zero();
        loop {
            let term =
                wk * w * complete_beta(a5, ng + j) * upper_regularized(a5, ng + j, pt.y5, pt.q);
            partial = partial + term;
            if term <= eps * partial || term == T::zero() {
                break;
            }
            if j - top > EXTERIOR_MAX_TERMS {
                return None;
            }
            let jj = T::from_usize(j);
            w = w * (b2 + jj) / (jj + T::one());
            j += 1;
        }
        acc.add(partial);
    }
    Some(acc.value() / (T::from_f64(3.0) * b2))
}

/// `ψ I₂(y) - I₃(y)`, switching to `total - exterior` near the surface.
fn luminosity_core<T: Real>(params: &ModelParams<T>, n: u32, y: T) -> Result<T> {
    let pt = Point::new(params, y)?;
    if pt.q <= T::from_f64(0.75) {
        if let Some(ext) = exterior_core(params, n, &pt) {
            return Ok(total_core(params, n) - ext);
        }
    }
    Ok(psi(params) * integral_i2(params, n, y)? - integral_i3(params, n, y)?)
}

fn total_core<T: Real>(params: &ModelParams<T>, n: u32) -> T {
    let a3 = a3(params);
    let i0 = complete_beta(a3, n_gamma(params, n)) / params.delta();
    psi(params) * i0 - integral_i1(params, n)
}

fn luminosity_unit<T: Real>(
    params: &ModelParams<T>,
    c: &SolarConstants<T>,
    e: &EnergyParams<T>,
) -> T {
    let d = params.delta();
    let r = c.radius;
    T::from_f64(4.0)
        * T::pi()
        * e.epsilon_0
        * c.temperature_unit()
        * c.rho_c.powi(e.n as i32 + 1)
        * r
        * r
        * r
        / (d * d)
}

/// Total luminosity `L(R)`, erg s⁻¹. Requires `m = 1`.
pub fn total_luminosity<T: Real>(
    params: &ModelParams<T>,
    constants: &SolarConstants<T>,
    eparams: &EnergyParams<T>,
) -> Result<T> {
    eparams.require_linear_temperature()?;
    Ok(luminosity_unit(params, constants, eparams) * total_core(params, eparams.n))
}

/// Luminosity `L(r)` generated inside `r = yR`, erg s⁻¹. Requires `m = 1`.
pub fn luminosity_profile<T: Real>(
    params: &ModelParams<T>,
    constants: &SolarConstants<T>,
    eparams: &EnergyParams<T>,
    y: T,
) -> Result<T> {
    eparams.require_linear_temperature()?;
    if y == T::one() {
        return total_luminosity(params, constants, eparams);
    }
    Ok(luminosity_unit(params, constants, eparams) * luminosity_core(params, eparams.n, y)?)
}

/// Luminosity generated outside `r = yR`, `L(R) - L(r)`, erg s⁻¹. Keeps its
/// relative accuracy near the surface, where `L(r)` is flat. Requires `m = 1`.
pub fn exterior_luminosity<T: Real>(
    params: &ModelParams<T>,
    constants: &SolarConstants<T>,
    eparams: &EnergyParams<T>,
    y: T,
) -> Result<T> {
    eparams.require_linear_temperature()?;
    let pt = Point::new(params, y)?;
    let unit = luminosity_unit(params, constants, eparams);
    if pt.q <= T::from_f64(0.75) {
        if let Some(ext) = exterior_core(params, eparams.n, &pt) {
            return Ok(unit * ext);
        }
    }
    let core =
        psi(params) * integral_i2(params, eparams.n, y)? - integral_i3(params, eparams.n, y)?;
    Ok(unit * (total_core(params, eparams.n) - core))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(delta: f64, gamma: u32) -> ModelParams<f64> {
        ModelParams::new(delta, gamma).unwrap()
    }

    #[test]
    fn rate_small_cases() {
        let e = EnergyParams::new(1.0, 1, 1).unwrap();
        assert_eq!(epsilon_rate(2.0, 3.0, &e), 6.0);
        let e = EnergyParams::new(0.5, 2, 3).unwrap();
        assert_eq!(epsilon_rate(2.0, 2.0, &e), 16.0);
        let e = EnergyParams::new(7.5, 3, 2).unwrap();
        assert_eq!(epsilon_rate(1.0, 1.0, &e), 7.5);
    }

    #[test]
    fn energy_params_validate() {
        assert!(EnergyParams::new(0.0_f64, 1, 1).is_err());
        assert!(EnergyParams::new(1.0_f64, 0, 1).is_err());
        assert!(EnergyParams::new(1.0_f64, 1, 0).is_err());
    }

    #[test]
    fn uniform_sphere_values() {
        let params = ModelParams::uniform(1.7_f64);
        let d2 = 1.7 * 1.7;
        assert!((psi(&params) - d2 / 6.0).abs() < 1e-15);
        // φ(u) = δ² u²/6, so I₁ = δ²/30 whatever n is.
        assert!((integral_i1(&params, 1) - d2 / 30.0).abs() < 1e-15);
        assert!((integral_i1(&params, 3) - d2 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn i0_small_cases() {
        assert!((integral_i0(&p(1.0, 1), 1).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!((integral_i0(&ModelParams::uniform(3.0), 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn i2_small_case() {
        // δ = 1, nγ = 1 at y = 1: 1/12
        assert!((integral_i2(&p(1.0, 1), 1, 1.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(integral_i2(&p(1.0, 1), 1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn phi_endpoints() {
        let params = p(1.28, 10);
        assert_eq!(phi(&params, 0.0).unwrap(), 0.0);
        assert!((phi(&params, 1.0).unwrap() - psi(&params)).abs() < 1e-17);
    }

    #[test]
    fn luminosity_needs_linear_temperature() {
        let params = p(1.28, 10);
        let c = SolarConstants::reduced();
        let e = EnergyParams::new(1.0, 1, 4).unwrap();
        assert!(matches!(
            total_luminosity(&params, &c, &e),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            luminosity_profile(&params, &c, &e, 0.5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn luminosity_profile_endpoints_and_branches_meet() {
        let params = p(1.28, 10);
        let c = SolarConstants::reduced();
        let e = EnergyParams::new(1.0, 1, 1).unwrap();
        assert_eq!(luminosity_profile(&params, &c, &e, 0.0).unwrap(), 0.0);
        let total = total_luminosity(&params, &c, &e).unwrap();
        assert_eq!(luminosity_profile(&params, &c, &e, 1.0).unwrap(), total);
        // Either side of the branch switch at q = 0.75.
        let y_switch = 0.25_f64.powf(1.0 / 1.28);
        let below = psi(&params) * integral_i2(&params, 1, y_switch).unwrap()
            - integral_i3(&params, 1, y_switch).unwrap();
        let pt = Point::new(&params, y_switch).unwrap();
        let above = total_core(&params, 1) - exterior_core(&params, 1, &pt).unwrap();
        assert!(((below - above) / above).abs() < 1e-13);
    }
}
