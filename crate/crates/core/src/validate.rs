//! Closed forms checked against quadrature and against the alternative
//! series representations, plus the printed-table comparisons.

use serde::{Deserialize, Serialize};

use crate::density::{eval_density_ratio, ModelParams};
use crate::energy::{self, EnergyParams};
use crate::error::Result;
use crate::oracle::{self, Estimate, QuadratureSettings};
use crate::reference;
use crate::scalar::{Quad, Real};
use crate::structure::{self, series, SolarConstants};
use crate::tables::{self, TableOptions};

pub const DEFAULT_REL_TOL: f64 = 1e-8;
/// Normwise tolerance between the single-sum and double-series pressure.
pub const REPRESENTATION_TOL: f64 = 1e-10;
/// Normwise tolerance on `ψ - φ(y) = δ² g(y)`.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Relative agreement that counts a printed pressure column as confirmed.
pub const CONFIRM_TOL: f64 = 1e-3;
pub const PROXY_TARGET: f64 = 2.7907e-3;
pub const PROXY_WINDOW: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateOptions {
    pub rel_tol: f64,
    pub deltas: Vec<f64>,
    pub gammas: Vec<u32>,
    pub density_exponents: Vec<u32>,
    pub grid_points: usize,
    pub constants: SolarConstants<f64>,
    /// Model for the pressure-table adjudication.
    pub params: ModelParams<f64>,
    pub quadrature: QuadratureSettings,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            deltas: vec![0.5, 1.0, 1.2814, 2.0],
            gammas: vec![1, 5, 10, 15],
            density_exponents: vec![1, 2],
            grid_points: 25,
            constants: SolarConstants::sears(),
            params: ModelParams::new(1.2814, 10).expect("valid default"),
            quadrature: QuadratureSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub delta: f64,
    pub gamma: u32,
    pub n: Option<u32>,
    /// `None` for normwise checks over the whole grid.
    pub y: Option<f64>,
    pub closed_form: f64,
    pub reference: f64,
    pub error_estimate: Option<f64>,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjudicationRow {
    pub y: f64,
    pub oracle_g: f64,
    pub closed_g: f64,
    pub table4_g: f64,
    pub table6_g: f64,
    pub u: f64,
}

/// Which of the two printed pressure columns the quadrature supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adjudication {
    pub delta: f64,
    pub gamma: u32,
    pub rows: Vec<AdjudicationRow>,
    pub table4_confirmed: bool,
    pub table6_confirmed: bool,
    /// `g/u` at the innermost ordinate.
    pub proxy: f64,
    pub proxy_target: f64,
    pub proxy_within_window: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSummary {
    pub id: u8,
    pub mismatches: usize,
    pub known_discrepancies: usize,
    pub banner: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rel_tol: f64,
    pub checks: Vec<Check>,
    pub failures: usize,
    pub adjudication: Adjudication,
    /// Informational; does not affect `passed`.
    pub tables: Vec<TableSummary>,
    pub passed: bool,
}

fn rel_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b.abs().max(f64::MIN_POSITIVE)).abs()
    }
}

/// `y_i = i/(N-1)`, `i = 0..N`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Largest pointwise difference over the largest reference magnitude.
pub fn normwise_error(a: &[f64], b: &[f64]) -> f64 {
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
    if diff == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

#[allow(clippy::too_many_arguments)]
fn quad_check(
    name: &str,
    params: &ModelParams<f64>,
    n: Option<u32>,
    y: f64,
    closed: f64,
    est: Estimate,
    tol: f64,
) -> Check {
    let rel = rel_error(est.value, closed);
    Check {
        name: name.into(),
        delta: params.delta(),
        gamma: params.gamma(),
        n,
        y: Some(y),
        closed_form: closed,
        reference: est.value,
        error_estimate: Some(est.error),
        rel_error: rel,
        tolerance: tol,
        passed: rel <= tol,
    }
}

fn normwise_check(
    name: &str,
    params: &ModelParams<f64>,
    closed: &[f64],
    other: &[f64],
    tol: f64,
) -> Check {
    let err = normwise_error(other, closed);
    let peak = |v: &[f64]| {
        v.iter()
            .copied()
            .fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m })
    };
    Check {
        name: name.into(),
        delta: params.delta(),
        gamma: params.gamma(),
        n: None,
        y: None,
        closed_form: peak(closed),
        reference: peak(other),
        error_estimate: None,
        rel_error: err,
        tolerance: tol,
        passed: err <= tol,
    }
}

/// Closed-form mass, pressure and `m = 1` luminosity against quadrature at
/// each grid point.
pub fn quadrature_checks(params: &ModelParams<f64>, opts: &ValidateOptions) -> Result<Vec<Check>> {
    let c = &opts.constants;
    let s = &opts.quadrature;
    let tol = opts.rel_tol;
    let mut out = Vec::new();
    for y in uniform_grid(opts.grid_points) {
        let m = structure::mass(params, c, y)?;
        out.push(quad_check(
            "mass",
            params,
            None,
            y,
            m,
            oracle::mass_by_quadrature(params, c, y, s)?,
            tol,
        ));
        let p = structure::pressure(params, c, y)?;
        let pq = oracle::pressure_by_quadrature(params, c, y, s)?;
        out.push(quad_check("pressure", params, None, y, p, pq, tol));
        for &n in &opts.density_exponents {
            let e = EnergyParams::new(1.0, n, 1)?;
            let l = energy::luminosity_profile(params, c, &e, y)?;
            let lq = oracle::luminosity_by_quadrature(params, c, &e, y, s)?;
            out.push(quad_check("luminosity", params, Some(n), y, l, lq, tol));
        }
    }
    Ok(out)
}

/// Pressure through the single alternating sum and through the
/// double series, and `ψ - φ(y)` against `δ² g(y)`, all in double-double.
pub fn representation_checks(
    params: &ModelParams<f64>,
    opts: &ValidateOptions,
) -> Result<Vec<Check>> {
    let pq: ModelParams<Quad> = params.cast();
    let grid = uniform_grid(opts.grid_points);
    let mut single = Vec::new();
    let mut double = Vec::new();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let psi = energy::psi(&pq);
    let d2 = pq.delta() * pq.delta();
    for &y in &grid {
        let yq = Quad::from_f64(y);
        single.push(series::pressure_factor_g(&pq, yq)?.as_f64());
        double.push(series::pressure_factor_g_kdf(&pq, yq)?.as_f64());
        lhs.push((psi - energy::phi(&pq, yq)?).as_f64());
        rhs.push((d2 * structure::pressure_factor_g(&pq, yq)?).as_f64());
    }
    Ok(vec![
        normwise_check(
            "pressure_single_vs_double_series",
            params,
            &single,
            &double,
            REPRESENTATION_TOL,
        ),
        normwise_check(
            "psi_minus_phi_vs_pressure",
            params,
            &rhs,
            &lhs,
            IDENTITY_TOL,
        ),
    ])
}

/// The quadrature's dimensionless pressure at the printed ordinates next to
/// both printed pressure columns.
pub fn adjudicate(
    params: &ModelParams<f64>,
    settings: &QuadratureSettings,
) -> Result<Adjudication> {
    let c = SolarConstants::<f64>::reduced();
    let t4 = reference::pressure_table()?;
    let t6 = reference::alt_pressure_table()?;
    let mut rows = Vec::new();
    for (a, b) in t4.iter().zip(&t6) {
        let oracle_g =
            oracle::pressure_by_quadrature(params, &c, a.y, settings)?.value / c.pressure_unit();
        rows.push(AdjudicationRow {
            y: a.y,
            oracle_g,
            closed_g: structure::pressure_factor_g(params, a.y)?,
            table4_g: a.g,
            table6_g: b.g,
            u: eval_density_ratio(params, a.y)?,
        });
    }
    let confirmed = |pick: fn(&AdjudicationRow) -> f64| {
        rows.iter()
            .all(|r| rel_error(pick(r), r.oracle_g) <= CONFIRM_TOL)
    };
    let table4_confirmed = confirmed(|r| r.table4_g);
    let table6_confirmed = confirmed(|r| r.table6_g);
    let proxy = rows[0].oracle_g / rows[0].u;
    Ok(Adjudication {
        delta: params.delta(),
        gamma: params.gamma(),
        table4_confirmed,
        table6_confirmed,
        proxy,
        proxy_target: PROXY_TARGET,
        proxy_within_window: rel_error(proxy, PROXY_TARGET) <= PROXY_WINDOW,
        rows,
    })
}

pub fn table_summaries(params: &ModelParams<f64>) -> Result<Vec<TableSummary>> {
    let opts = TableOptions {
        params: *params,
        ..TableOptions::default()
    };
    (1..=6)
        .map(|id| {
            let r = tables::build(id, &opts)?;
            Ok(TableSummary {
                id,
                mismatches: r.mismatches(),
                known_discrepancies: r
                    .cells
                    .iter()
                    .filter(|c| c.status == tables::CellStatus::KnownDiscrepancy)
                    .count(),
                banner: r.banner,
            })
        })
        .collect()
}

pub fn run(opts: &ValidateOptions) -> Result<ValidationReport> {
    let mut checks = Vec::new();
    for &d in &opts.deltas {
        for &g in &opts.gammas {
            let params = ModelParams::new(d, g)?;
            checks.extend(quadrature_checks(&params, opts)?);
            checks.extend(representation_checks(&params, opts)?);
        }
    }
    let failures = checks.iter().filter(|c| !c.passed).count();
    Ok(ValidationReport {
        rel_tol: opts.rel_tol,
        failures,
        passed: failures == 0,
        adjudication: adjudicate(&opts.params, &opts.quadrature)?,
        tables: table_summaries(&opts.params)?,
        checks,
    })
}
