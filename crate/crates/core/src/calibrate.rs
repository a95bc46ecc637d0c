//! Choosing `(δ, γ)`: the mass-normalization constraint, least-squares
//! polynomial fits, and a sweep over `γ` against tabulated densities.

use std::io::Read;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::density::{eval_density_ratio, ModelParams, PolynomialDensityModel};
use crate::error::{Error, Result};
use crate::scalar::{Quad, Real};
use crate::structure::SolarConstants;

/// The constant printed for the Sears data, rounded to two decimals.
pub const PRINTED_MASS_TARGET: f64 = 112.08;

/// `∏_{j=1}^{γ} (3/δ + j) / j`, the ratio `ρ_c / (3M/(4πR³))`.
pub fn constraint_value<T: Real>(delta: T, gamma: u32) -> T {
    let a = T::from_f64(3.0) / delta;
    (1..=gamma as usize).fold(T::one(), |acc, j| {
        let j = T::from_usize(j);
        acc * (a + j) / j
    })
}

/// Constraint value implied by a set of constants, `ρ_c 4πR³ / (3M)`.
pub fn mass_target<T: Real>(constants: &SolarConstants<T>) -> T {
    let r = constants.radius;
    constants.rho_c * T::from_f64(4.0) * T::pi() * r * r * r
        / (T::from_f64(3.0) * constants.m_total)
}

const DELTA_MIN: f64 = 1e-6;
const DELTA_MAX: f64 = 64.0;

/// The `δ` in `[1e-6, 64]` with `constraint_value(δ, γ) = target`.
///
/// The constraint is strictly decreasing in `δ`, so bisection runs until
/// the bracket can no longer be split.
pub fn solve_delta<T: Real>(gamma: u32, target: T) -> Result<T> {
    if gamma == 0 {
        return Err(Error::domain("gamma must be a positive integer"));
    }
    let (mut lo, mut hi) = (T::from_f64(DELTA_MIN), T::from_f64(DELTA_MAX));
    let (c_lo, c_hi) = (constraint_value(lo, gamma), constraint_value(hi, gamma));
    if !(target < c_lo && target > c_hi) {
        return Err(Error::NoRoot(format!(
            "target {target:?} outside the attainable range ({c_hi:?}, {c_lo:?}) for gamma = {gamma}"
        )));
    }
    let two = T::from_f64(2.0);
    for _ in 0..256 {
        let mid = (lo + hi) / two;
        if !(mid > lo && mid < hi) {
            break;
        }
        if constraint_value(mid, gamma) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Tabulated `(y, value)` pairs with `y` strictly increasing in `(0, 1)` and
/// values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable<T> {
    rows: Vec<(T, T)>,
    source_label: String,
}

impl<T: Real> ReferenceTable<T> {
    pub fn new(rows: Vec<(T, T)>, source_label: impl Into<String>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Data("reference table is empty".into()));
        }
        for (i, &(y, v)) in rows.iter().enumerate() {
            if !(y > T::zero() && y < T::one()) {
                return Err(Error::Data(format!(
                    "row {i}: y = {y:?} is not inside (0, 1)"
                )));
            }
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::Data(format!(
                    "row {i}: value {v:?} is not inside [0, 1]"
                )));
            }
        }
        if let Some(i) = rows.windows(2).position(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Data(format!(
                "y is not strictly increasing at row {}",
                i + 1
            )));
        }
        Ok(Self {
            rows,
            source_label: source_label.into(),
        })
    }

    /// Reads two numeric columns from CSV with a header row. Lines starting
    /// with `#` are comments.
    pub fn from_csv<R: Read>(
        reader: R,
        y_column: &str,
        value_column: &str,
        label: &str,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Data(e.to_string()))?
            .clone();
        let column = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Data(format!("missing column '{name}'")))
        };
        let (iy, iv) = (column(y_column)?, column(value_column)?);
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Data(e.to_string()))?;
            let parse = |i: usize| -> Result<T> {
                let field = record.get(i).unwrap_or("");
                field.parse::<f64>().map(T::from_f64).map_err(|_| {
                    Error::Data(format!("record {}: '{field}' is not a number", line + 1))
                })
            };
            rows.push((parse(iy)?, parse(iv)?));
        }
        Self::new(rows, label)
    }

    pub fn rows(&self) -> &[(T, T)] {
        &self.rows
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }
}

/// Ordinary least squares in the monomial basis `1, y, ..., y^degree`.
///
/// The normal equations are accumulated and solved in double-double
/// arithmetic with partial pivoting.
pub fn fit_polynomial<T: Real>(
    data: &ReferenceTable<T>,
    degree: usize,
) -> Result<PolynomialDensityModel<T>> {
    let n = degree + 1;
    if data.rows.len() < n {
        return Err(Error::RankDeficient(format!(
            "{} rows cannot determine {} coefficients",
            data.rows.len(),
            n
        )));
    }
    let mut a = vec![vec![Quad::ZERO; n + 1]; n];
    for &(y, v) in &data.rows {
        let (y, v) = (y.to_quad(), v.to_quad());
        let mut powers = vec![Quad::ONE; 2 * n - 1];
        for k in 1..powers.len() {
            powers[k] = powers[k - 1] * y;
        }
        for (i, row) in a.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().take(n).enumerate() {
                *cell += powers[i + j];
            }
            row[n] += powers[i] * v;
        }
    }

    let scale = a
        .iter()
        .map(|r| Real::abs(r[0]))
        .fold(Quad::ZERO, Real::max);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                Real::abs(a[i][col])
                    .partial_cmp(Real::abs(a[j][col]))
                    .unwrap()
            })
            .unwrap();
        if Real::abs(a[pivot][col]) <= scale * Quad::from_f64(1e-26) {
            return Err(Error::RankDeficient(format!(
                "normal equations are singular at column {col}; ordinates are not distinct enough"
            )));
        }
        a.swap(col, pivot);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            for c in col..=n {
                let sub = factor * a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    let mut coeffs = vec![Quad::ZERO; n];
    for r in (0..n).rev() {
        let mut s = a[r][n];
        for c in r + 1..n {
            s -= a[r][c] * coeffs[c];
        }
        coeffs[r] = s / a[r][r];
    }
    Ok(PolynomialDensityModel {
        coefficients: coeffs.into_iter().map(T::from_quad).collect(),
    })
}

/// Sum of squared residuals of the power law against the table.
pub fn sse<T: Real>(params: &ModelParams<T>, data: &ReferenceTable<T>) -> Result<T> {
    data.rows.iter().try_fold(T::zero(), |acc, &(y, v)| {
        let r = eval_density_ratio(params, y)? - v;
        Ok(acc + r * r)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow<T> {
    pub gamma: u32,
    pub delta: T,
    pub sse: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct FitReport<T> {
    pub best: ModelParams<T>,
    pub best_sse: T,
    pub mass_target: T,
    pub rows: Vec<FitRow<T>>,
}

/// Row with the smallest SSE; ties go to the smallest `γ`, then the
/// smallest `δ`.
pub fn select_best<T: Real>(rows: &[FitRow<T>]) -> &FitRow<T> {
    rows.iter()
        .reduce(|best, r| {
            let key = |x: &FitRow<T>| (x.sse, x.gamma, x.delta);
            let (a, b) = (key(r), key(best));
            let better = a.0 < b.0 || (a.0 == b.0 && (a.1 < b.1 || (a.1 == b.1 && a.2 < b.2)));
            if better {
                r
            } else {
                best
            }
        })
        .expect("at least one row")
}

/// For each `γ` sets `δ = solve_delta(γ, mass_target)` and keeps the pair
/// with the smallest SSE. Ties go to the smallest `γ`.
pub fn fit_model_params<T: Real>(
    data: &ReferenceTable<T>,
    gamma_range: RangeInclusive<u32>,
    mass_target: T,
) -> Result<FitReport<T>> {
    if gamma_range.is_empty() || *gamma_range.start() == 0 {
        return Err(Error::domain(
            "gamma range must be non-empty and start at 1 or more",
        ));
    }
    let rows = gamma_range
        .map(|gamma| {
            let delta = solve_delta(gamma, mass_target)?;
            let sse = sse(&ModelParams::new(delta, gamma)?, data)?;
            Ok(FitRow { gamma, delta, sse })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = select_best(&rows);
    Ok(FitReport {
        best: ModelParams::new(best.delta, best.gamma)?,
        best_sse: best.sse,
        mass_target,
        rows,
    })
}
