//! Mass, pressure and temperature of a gas sphere in hydrostatic
//! equilibrium whose density follows `ρ = ρ_c (1 - y^δ)^γ`.
//!
//! Every closed form here is a finite sum of non-negative terms (see
//! [`crate::specfun::beta`]). The alternating hypergeometric expressions
//! they are equivalent to live in [`series`]; those lose most of their
//! significant digits near the surface in `f64` and are intended for
//! cross-checks in extended precision.

use serde::{Deserialize, Serialize};

use crate::calibrate::constraint_value;
use crate::density::{check_unit_interval, eval_density_ratio, ModelParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::beta::{beta_weights, complete_beta, lower_regularized, upper_regularized};

pub mod series;

/// Physical constants in CGS units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolarConstants<T> {
    /// Central density, g cm⁻³.
    pub rho_c: T,
    /// Total mass, g.
    pub m_total: T,
    /// Radius, cm.
    pub radius: T,
    /// Gravitational constant, cm³ g⁻¹ s⁻².
    pub g_newton: T,
    /// Boltzmann constant, erg K⁻¹.
    pub k_boltzmann: T,
    /// Avogadro constant, mol⁻¹.
    pub avogadro: T,
    /// Mean molecular weight. Without it temperatures are reported in
    /// reduced units, `g/u`.
    pub mu: Option<T>,
}

impl<T: Real> SolarConstants<T> {
    /// Sears (1964) solar values with CODATA `G`, `k` and `N_A`.
    pub fn sears() -> Self {
        let f = T::from_f64;
        Self {
            rho_c: f(158.0),
            m_total: f(1.991e33),
            radius: f(6.96e10),
            g_newton: f(6.674e-8),
            k_boltzmann: f(1.380649e-16),
            avogadro: f(6.02214076e23),
            mu: None,
        }
    }

    /// All constants equal to one, including `μ`, so that every physical
    /// quantity reduces to its dimensionless factor.
    pub fn reduced() -> Self {
        Self {
            rho_c: T::one(),
            m_total: T::one(),
            radius: T::one(),
            g_newton: T::one(),
            k_boltzmann: T::one(),
            avogadro: T::one(),
            mu: Some(T::one()),
        }
    }

    pub fn with_mu(self, mu: T) -> Self {
        Self {
            mu: Some(mu),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("rho_c", self.rho_c),
            ("m_total", self.m_total),
            ("radius", self.radius),
            ("g_newton", self.g_newton),
            ("k_boltzmann", self.k_boltzmann),
            ("avogadro", self.avogadro),
        ];
        let mu = self.mu.map(|m| ("mu", m));
        for (name, v) in named.into_iter().chain(mu) {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v:?}")));
            }
        }
        Ok(())
    }

    /// `4π G ρ_c² R²`, the unit in which [`pressure_factor_g`] is expressed.
    pub fn pressure_unit(&self) -> T {
        let four_pi = T::from_f64(4.0) * T::pi();
        four_pi * self.g_newton * self.rho_c * self.rho_c * self.radius * self.radius
    }

    /// `μ/(k N_A) · 4π G ρ_c R²`, or one when `μ` is absent.
    pub fn temperature_unit(&self) -> T {
        match self.mu {
            Some(mu) => mu / (self.k_boltzmann * self.avogadro) * self.pressure_unit() / self.rho_c,
            None => T::one(),
        }
    }
}

/// Shared quantities of one evaluation point: `y²`, `y³` and `q = 1 - y^δ`
/// taken without rounding through `y^δ`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Point<T> {
    pub y2: T,
    pub y3: T,
    pub y5: T,
    pub q: T,
}

impl<T: Real> Point<T> {
    pub fn new(params: &ModelParams<T>, y: T) -> Result<Self> {
        check_unit_interval(y)?;
        let q = if y == T::zero() {
            T::one()
        } else {
            -(params.delta() * y.ln()).exp_m1()
        };
        let y2 = y * y;
        Ok(Self {
            y2,
            y3: y2 * y,
            y5: y2 * y2 * y,
            q,
        })
    }
}

pub(crate) fn a3<T: Real>(p: &ModelParams<T>) -> T {
    T::from_f64(3.0) / p.delta()
}

pub(crate) fn b2<T: Real>(p: &ModelParams<T>) -> T {
    T::from_f64(2.0) / p.delta()
}

/// `M(r)/M(R)`.
///
/// ```
/// use sunmodel::{density::ModelParams, structure::mass_ratio};
/// let p = ModelParams::new(1.2814_f64, 10).unwrap();
/// assert_eq!(mass_ratio(&p, 1.0).unwrap(), 1.0);
/// assert!((mass_ratio(&p, 0.245).unwrap() - 0.5225).abs() < 5e-4);
/// ```
pub fn mass_ratio<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    let pt = Point::new(params, y)?;
    Ok(lower_regularized(
        a3(params),
        params.gamma() as usize,
        pt.y3,
        pt.q,
    ))
}

/// `1 - M(r)/M(R)`, accurate to full relative precision near the surface.
pub fn exterior_mass_ratio<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    let pt = Point::new(params, y)?;
    Ok(upper_regularized(
        a3(params),
        params.gamma() as usize,
        pt.y3,
        pt.q,
    ))
}

/// Enclosed mass `M(r)` in grams, from `ρ_c` and `R`.
pub fn mass<T: Real>(params: &ModelParams<T>, constants: &SolarConstants<T>, y: T) -> Result<T> {
    let total = uniform_mass(constants.rho_c, constants.radius)
        / constraint_value(params.delta(), params.gamma());
    Ok(total * mass_ratio(params, y)?)
}

fn uniform_mass<T: Real>(rho: T, radius: T) -> T {
    T::from_f64(4.0) / T::from_f64(3.0) * T::pi() * rho * radius * radius * radius
}

/// Central density implied by total mass and radius,
/// `3M/(4πR³) · ∏_{j=1}^{γ} (3/δ + j)/j`.
pub fn central_density<T: Real>(params: &ModelParams<T>, m_total: T, radius: T) -> T {
    m_total / uniform_mass(T::one(), radius) * constraint_value(params.delta(), params.gamma())
}

/// Dimensionless pressure `g(y) = P(r) / (4π G ρ_c² R²)`.
///
/// Written as `(1/(3δ)) Σ_k w_k B(2/δ, γ+k+1) (1 - I_{y^δ}(2/δ, γ+k+1))`,
/// which is the integral `∫_y^1 m(t) u(t) / t² dt` with
/// `m(t) = ∫_0^t s² u(s) ds` expanded term by term.
pub fn pressure_factor_g<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    let pt = Point::new(params, y)?;
    Ok(g_sum(params, |p, n| upper_regularized(p, n, pt.y2, pt.q)))
}

/// `(1/(3δ)) Σ_k w_k(3/δ, γ) B(2/δ, γ+k+1) · f(2/δ, γ+k)`.
pub(crate) fn g_sum<T: Real>(params: &ModelParams<T>, f: impl Fn(T, usize) -> T) -> T {
    let gamma = params.gamma() as usize;
    let b2 = b2(params);
    let weights = beta_weights(a3(params), gamma, gamma + 1);
    let mut acc = T::zero();
    for (k, &w) in weights.iter().enumerate() {
        acc = acc + w * complete_beta(b2, gamma + k) * f(b2, gamma + k);
    }
    acc / (T::from_f64(3.0) * params.delta())
}

/// `P_c = 4π G ρ_c² R² g(0)`.
pub fn central_pressure<T: Real>(params: &ModelParams<T>, constants: &SolarConstants<T>) -> T {
    constants.pressure_unit() * g_sum(params, |_, _| T::one())
}

/// `P(r) = 4π G ρ_c² R² g(y)`, dyn cm⁻².
pub fn pressure<T: Real>(
    params: &ModelParams<T>,
    constants: &SolarConstants<T>,
    y: T,
) -> Result<T> {
    Ok(constants.pressure_unit() * pressure_factor_g(params, y)?)
}

/// Pressure through the Kampé de Fériet representation,
/// `P_c - (2/3)π G ρ_c² r² F(y^δ, y^δ)` with `P_c = (2/3)π G ρ_c² R² F(1, 1)`.
///
/// An independent route to [`pressure`]. The double series alternates, so
/// evaluate it in [`crate::Quad`] when `δ` is small or `γ` is large.
pub fn pressure_kdf<T: Real>(
    params: &ModelParams<T>,
    constants: &SolarConstants<T>,
    y: T,
) -> Result<T> {
    Ok(constants.pressure_unit() * series::pressure_factor_g_kdf(params, y)?)
}

/// Temperature from the perfect-gas law, `T = μ P / (k N_A ρ)`.
///
/// In kelvin when `constants.mu` is set, otherwise the reduced value
/// `g(y)/u(y)`. Undefined at the surface, where the density vanishes.
pub fn temperature<T: Real>(
    params: &ModelParams<T>,
    constants: &SolarConstants<T>,
    y: T,
) -> Result<T> {
    if y >= T::one() {
        return Err(Error::domain(
            "temperature is singular at the surface (y = 1)",
        ));
    }
    let u = eval_density_ratio(params, y)?;
    if u == T::zero() {
        return Err(Error::domain(format!(
            "density underflows to zero at y = {y:?}"
        )));
    }
    Ok(constants.temperature_unit() * pressure_factor_g(params, y)? / u)
}

/// One evaluated radius of a [`Profile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow<T> {
    pub y: T,
    pub u: T,
    pub m_ratio: T,
    pub g: T,
    /// dyn cm⁻².
    pub pressure: T,
    /// Absent at the surface.
    pub temperature: Option<T>,
    /// erg s⁻¹, when energy-generation parameters were supplied.
    pub luminosity: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct Profile<T> {
    pub params: ModelParams<T>,
    pub constants: SolarConstants<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<crate::energy::EnergyParams<T>>,
    pub rows: Vec<ProfileRow<T>>,
}

impl<T: Real> Profile<T> {
    /// Evaluates every grid point independently. The grid must be strictly
    /// increasing inside `[0, 1]`.
    pub fn build(
        params: ModelParams<T>,
        constants: SolarConstants<T>,
        grid: &[T],
        energy: Option<crate::energy::EnergyParams<T>>,
    ) -> Result<Self> {
        constants.validate()?;
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("profile grid must be strictly increasing"));
        }
        let rows = grid
            .iter()
            .map(|&y| {
                let g = pressure_factor_g(&params, y)?;
                let temperature = if y < T::one() {
                    Some(temperature(&params, &constants, y)?)
                } else {
                    None
                };
                let luminosity = match &energy {
                    Some(e) => Some(crate::energy::luminosity_profile(
                        &params, &constants, e, y,
                    )?),
                    None => None,
                };
                Ok(ProfileRow {
                    y,
                    u: eval_density_ratio(&params, y)?,
                    m_ratio: mass_ratio(&params, y)?,
                    g,
                    pressure: constants.pressure_unit() * g,
                    temperature,
                    luminosity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            constants,
            energy,
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Quad;

    fn p(delta: f64, gamma: u32) -> ModelParams<f64> {
        ModelParams::new(delta, gamma).unwrap()
    }

    #[test]
    fn mass_ratio_boundaries() {
        let params = p(0.7, 4);
        assert_eq!(mass_ratio(&params, 0.0).unwrap(), 0.0);
        assert_eq!(mass_ratio(&params, 1.0).unwrap(), 1.0);
        assert_eq!(exterior_mass_ratio(&params, 1.0).unwrap(), 0.0);
        assert!(mass_ratio(&params, 1.01).is_err());
    }

    #[test]
    fn central_density_small_case() {
        // (3/3 + 1)/1! = 2 with a unit-density uniform mass
        let rho = central_density(&p(3.0, 1), 4.0 / 3.0 * std::f64::consts::PI, 1.0);
        assert!((rho - 2.0).abs() < 1e-15);
        let uniform = central_density(
            &ModelParams::uniform(1.0),
            4.0 / 3.0 * std::f64::consts::PI,
            1.0,
        );
        assert!((uniform - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_sphere_pressure() {
        let params = ModelParams::uniform(0.8_f64);
        assert!((pressure_factor_g(&params, 0.0).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        // g(y) = (1 - y²)/6 for constant density.
        let y = 0.4;
        assert!((pressure_factor_g(&params, y).unwrap() - (1.0 - y * y) / 6.0).abs() < 1e-16);
        let c = SolarConstants::<f64>::sears();
        let pc = central_pressure(&params, &c);
        let want =
            2.0 / 3.0 * std::f64::consts::PI * c.g_newton * c.rho_c.powi(2) * c.radius.powi(2);
        assert!(((pc - want) / want).abs() < 1e-15);
    }

    #[test]
    fn surface_pressure_vanishes() {
        assert_eq!(pressure_factor_g(&p(1.2814, 10), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn temperature_rejects_surface() {
        let c = SolarConstants::sears();
        assert!(matches!(
            temperature(&p(1.28, 10), &c, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn temperature_at_centre_is_g0() {
        let params = p(1.28, 10);
        let c = SolarConstants::sears();
        let t0 = temperature(&params, &c, 0.0).unwrap();
        assert_eq!(t0, pressure_factor_g(&params, 0.0).unwrap());
    }

    #[test]
    fn f64_and_quad_agree() {
        let pf = p(0.5, 15);
        let pq: ModelParams<Quad> = pf.cast();
        for i in 0..=24 {
            let y = i as f64 / 24.0;
            let gf = pressure_factor_g(&pf, y).unwrap();
            let gq = pressure_factor_g(&pq, Quad::from_f64(y)).unwrap().as_f64();
            let scale = gq.abs().max(f64::MIN_POSITIVE);
            assert!(((gf - gq) / scale).abs() < 1e-13, "y={y}: {gf} vs {gq}");
        }
    }

    #[test]
    fn constants_validation() {
        let mut c = SolarConstants::<f64>::sears();
        assert!(c.validate().is_ok());
        c.radius = -1.0;
        assert!(c.validate().is_err());
        let c = SolarConstants::<f64>::sears().with_mu(-0.5);
        assert!(c.validate().is_err());
    }

    #[test]
    fn profile_rejects_unsorted_grid() {
        let r = Profile::build(p(1.28, 10), SolarConstants::sears(), &[0.2, 0.1], None);
        assert!(r.is_err());
    }
}
