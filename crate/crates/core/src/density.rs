//! Density laws `u = ρ(r)/ρ_c` as functions of `y = r/R`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The two-parameter law `u = (1 - y^δ)^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams<T>", into = "RawParams<T>")]
#[serde(bound(
    serialize = "T: Clone + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct ModelParams<T> {
    delta: T,
    gamma: u32,
}

#[derive(Serialize, Deserialize)]
struct RawParams<T> {
    delta: T,
    gamma: u32,
}

impl<T: Real> TryFrom<RawParams<T>> for ModelParams<T> {
    type Error = Error;
    fn try_from(raw: RawParams<T>) -> Result<Self> {
        Self::new(raw.delta, raw.gamma)
    }
}

impl<T> From<ModelParams<T>> for RawParams<T> {
    fn from(p: ModelParams<T>) -> Self {
        RawParams {
            delta: p.delta,
            gamma: p.gamma,
        }
    }
}

impl<T: Real> ModelParams<T> {
    /// Requires `delta > 0` (finite) and `gamma >= 1`.
    pub fn new(delta: T, gamma: u32) -> Result<Self> {
        if !(delta > T::zero() && delta.is_finite()) {
            return Err(Error::domain(format!(
                "delta must be positive and finite, got {delta:?}"
            )));
        }
        if gamma == 0 {
            return Err(Error::domain("gamma must be a positive integer"));
        }
        Ok(Self { delta, gamma })
    }

    /// The uniform sphere, `γ = 0`. Excluded from [`ModelParams::new`] but
    /// useful as an analytic fixture.
    #[doc(hidden)]
    pub fn uniform(delta: T) -> Self {
        Self { delta, gamma: 0 }
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn cast<U: Real>(&self) -> ModelParams<U> {
        ModelParams {
            delta: U::from_quad(self.delta.to_quad()),
            gamma: self.gamma,
        }
    }
}

pub(crate) fn check_unit_interval<T: Real>(y: T) -> Result<()> {
    if y >= T::zero() && y <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("y must lie in [0, 1], got {y:?}")))
    }
}

/// `(1 - y^δ)^γ`.
pub fn eval_density_ratio<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    check_unit_interval(y)?;
    Ok((T::one() - y.powf(params.delta)).powi(params.gamma as i32))
}

/// `∏ (1 - y^{a_i})^{b_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductDensityModel<T> {
    pub factors: Vec<(T, u32)>,
}

impl<T: Real> ProductDensityModel<T> {
    pub fn new(factors: Vec<(T, u32)>) -> Result<Self> {
        if let Some((a, _)) = factors.iter().find(|(a, _)| !(*a > T::zero())) {
            return Err(Error::domain(format!(
                "factor exponents must be positive, got {a:?}"
            )));
        }
        Ok(Self { factors })
    }
}

pub fn eval_product_model<T: Real>(model: &ProductDensityModel<T>, y: T) -> Result<T> {
    check_unit_interval(y)?;
    Ok(model.factors.iter().fold(T::one(), |acc, &(a, b)| {
        acc * (T::one() - y.powf(a)).powi(b as i32)
    }))
}

/// Polynomial `c_0 + c_1 y + ...`, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDensityModel<T> {
    pub coefficients: Vec<T>,
}

pub fn eval_poly_model<T: Real>(model: &PolynomialDensityModel<T>, y: T) -> T {
    model
        .coefficients
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * y + c)
}

const ROOT_SCAN_POINTS: usize = 4096;

/// Roots of the polynomial strictly inside `(0, 1)`, from a sign scan on a
/// uniform grid refined by bisection to width `tol`.
///
/// A value is treated as zero when it is below the rounding level of the
/// Horner sum, so that a root sitting exactly on an endpoint is not
/// reported as a nearby interior crossing.
pub fn roots_in_open_unit_interval<T: Real>(model: &PolynomialDensityModel<T>, tol: T) -> Vec<T> {
    let f = |y: T| eval_poly_model(model, y);
    let noise = |y: T| {
        let mass = model
            .coefficients
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * y.abs() + c.abs());
        T::from_f64(8.0) * T::epsilon() * mass
    };
    let sign = |y: T| {
        let v = f(y);
        if v.abs() <= noise(y) {
            0
        } else if v > T::zero() {
            1
        } else {
            -1
        }
    };

    let n = ROOT_SCAN_POINTS;
    let grid = |i: usize| T::from_usize(i) / T::from_usize(n);
    let mut roots = Vec::new();
    let mut prev = sign(grid(0));
    for i in 1..=n {
        let y = grid(i);
        let s = sign(y);
        if s == 0 && i < n {
            roots.push(y);
        } else if s != 0 && prev != 0 && s != prev {
            let (mut lo, mut hi) = (grid(i - 1), y);
            while hi - lo > tol {
                let mid = (lo + hi) / T::from_f64(2.0);
                let sm = sign(mid);
                if sm == 0 {
                    lo = mid;
                    hi = mid;
                } else if sm == prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push((lo + hi) / T::from_f64(2.0));
        }
        prev = s;
    }
    roots
}

/// A candidate density law.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityModel<T> {
    Polynomial(PolynomialDensityModel<T>),
    Product(ProductDensityModel<T>),
}

impl<T: Real> DensityModel<T> {
    pub fn eval(&self, y: T) -> Result<T> {
        match self {
            DensityModel::Polynomial(p) => Ok(eval_poly_model(p, y)),
            DensityModel::Product(p) => eval_product_model(p, y),
        }
    }
}

/// The eight candidate fits to the Sears (1964) core density data, in
/// column order of the reference density table.
pub fn reference_models<T: Real>() -> Vec<(&'static str, DensityModel<T>)> {
    let f = T::from_f64;
    let poly = |c: &[f64]| {
        DensityModel::Polynomial(PolynomialDensityModel {
            coefficients: c.iter().map(|&v| f(v)).collect(),
        })
    };
    let prod = |fs: &[(f64, u32)]| {
        DensityModel::Product(ProductDensityModel {
            factors: fs.iter().map(|&(a, b)| (f(a), b)).collect(),
        })
    };
    vec![
        ("cubic_fit", poly(&[1.0, -4.94, 6.67, -2.73])),
        ("quartic", poly(&[1.0, -4.0, 2.0, 2.0, -1.0])),
        ("sqrt_cube64", prod(&[(0.5, 1), (3.0, 64)])),
        ("pow1.5_16", prod(&[(1.5, 16)])),
        ("sqrt_cube64_lin", prod(&[(0.5, 1), (3.0, 64), (1.0, 1)])),
        ("pow1.48_14", prod(&[(1.48, 14)])),
        ("pow1.48_13", prod(&[(1.48, 13)])),
        ("pow1.28_10", prod(&[(1.28, 10)])),
    ]
}
