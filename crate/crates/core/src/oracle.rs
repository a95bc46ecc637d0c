//! Direct numerical integration of the defining integrals, used to check
//! the closed forms.
//!
//! The integrands are smooth on closed intervals (the density vanishes at
//! the surface like `(1 - y)^γ` with `γ >= 1`), so a globally adaptive
//! Gauss–Kronrod 7/15 rule needs no endpoint treatment.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::density::{eval_density_ratio, ModelParams};
use crate::energy::EnergyParams;
use crate::error::{Error, Result};
use crate::specfun::CompensatedSum;
use crate::structure::{self, SolarConstants};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSettings {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && abs_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if max_subdivisions < 10 {
            return Err(Error::domain("max_subdivisions must be at least 10"));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

// Kronrod abscissae; the odd entries are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let (f1, f2) = (f(centre - dx), f(centre + dx));
        kron += w * (f1 + f2);
        abs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * half;
    // Floor the estimate at the rounding level of the panel sum.
    let error = ((kron - gauss) * half)
        .abs()
        .max(50.0 * f64::EPSILON * abs * half.abs());
    Panel { a, b, value, error }
}

/// `∫_a^b f` by globally adaptive bisection, always refining the panel with
/// the largest error estimate.
///
/// Returns once the summed estimate is at most
/// `max(abs_tol, rel_tol |value|)`. Running out of subdivisions is an error
/// that carries the best estimate.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "integration bounds must satisfy a <= b, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(&f, a, b));
    let mut subdivisions = 0;
    loop {
        let value: CompensatedSum<f64> = heap.iter().map(|p| p.value).collect();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let value = value.value();
        if !value.is_finite() {
            return Err(Error::domain("integrand is not finite on the interval"));
        }
        if error <= settings.abs_tol.max(settings.rel_tol * value.abs()) {
            return Ok(Estimate {
                value,
                error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if subdivisions >= settings.max_subdivisions || !(mid > worst.a && mid < worst.b) {
            return Err(Error::NonConvergence {
                value,
                error,
                subdivisions,
            });
        }
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
        subdivisions += 1;
    }
}

fn four_pi() -> f64 {
    4.0 * std::f64::consts::PI
}

/// `M(yR) = 4π ∫_0^{yR} t² ρ(t) dt`, grams.
pub fn mass_by_quadrature(
    params: &ModelParams<f64>,
    constants: &SolarConstants<f64>,
    y: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    crate::density::check_unit_interval(y)?;
    let r = constants.radius;
    let integrand = |t: f64| {
        let u = eval_density_ratio(params, (t / r).min(1.0)).unwrap_or(0.0);
        four_pi() * t * t * constants.rho_c * u
    };
    integrate_adaptive(integrand, 0.0, y * r, settings)
}

/// `P(yR) = G ∫_{yR}^{R} M(t) ρ(t) / t² dt` with the closed-form `M`, dyn cm⁻².
pub fn pressure_by_quadrature(
    params: &ModelParams<f64>,
    constants: &SolarConstants<f64>,
    y: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    crate::density::check_unit_interval(y)?;
    let r = constants.radius;
    let integrand = |t: f64| {
        let s = (t / r).min(1.0);
        let m = structure::mass(params, constants, s).unwrap_or(f64::NAN);
        let u = eval_density_ratio(params, s).unwrap_or(f64::NAN);
        constants.g_newton * m * constants.rho_c * u / (t * t)
    };
    integrate_adaptive(integrand, y * r, r, settings)
}

/// `L(yR) = 4π ∫_0^{yR} t² ρ ε(ρ, T) dt` for any positive integers `n`, `m`,
/// with the temperature from the closed-form pressure. erg s⁻¹.
pub fn luminosity_by_quadrature(
    params: &ModelParams<f64>,
    constants: &SolarConstants<f64>,
    eparams: &EnergyParams<f64>,
    y: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    crate::density::check_unit_interval(y)?;
    let r = constants.radius;
    let theta = constants.temperature_unit();
    let integrand = |t: f64| {
        let s = (t / r).min(1.0);
        let u = eval_density_ratio(params, s).unwrap_or(f64::NAN);
        if u <= 0.0 {
            return 0.0;
        }
        let g = structure::pressure_factor_g(params, s).unwrap_or(f64::NAN);
        let rho = constants.rho_c * u;
        let temp = theta * g / u;
        four_pi() * t * t * rho * crate::energy::epsilon_rate(rho, temp, eparams)
    };
    integrate_adaptive(integrand, 0.0, y * r, settings)
}
