//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::time::{Duration, Instant};

use sunmodel::calibrate::{self, ReferenceTable, PRINTED_MASS_TARGET};
use sunmodel::density::{eval_density_ratio, ModelParams};
use sunmodel::energy::{self, EnergyParams};
use sunmodel::oracle::QuadratureSettings;
use sunmodel::reference;
use sunmodel::structure::{self, SolarConstants};
use sunmodel::tables::{self, CellStatus, TableOptions};
use sunmodel::validate::{self, ValidateOptions};

const TABLE2_TOL: f64 = 1e-3;
const TABLE2_TOL_TWO_DECIMALS: f64 = 5e-3;
const TABLE3_TOL: f64 = 5e-4;
const TABLE1_TOL: f64 = 2e-3;
const FAST_BUDGET: Duration = Duration::from_secs(1);
const CENTRAL_DENSITY_RANGE: (f64, f64) = (157.0, 159.0);
const QUADRATURE_TOL: f64 = 1e-8;
const QUADRATURE_BUDGET: Duration = Duration::from_secs(60);
const SERIES_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-5;
const PHI_BOUND: f64 = 1.0 + 1e-12;
const GRID_POINTS: usize = 25;
const DELTAS: [f64; 4] = [0.5, 1.0, 1.2814, 2.0];
const GAMMAS: [u32; 4] = [1, 5, 10, 15];
const DENSITY_EXPONENTS: [u32; 2] = [1, 2];

type Outcome = Result<String, String>;

fn params(delta: f64, gamma: u32) -> ModelParams<f64> {
    ModelParams::new(delta, gamma).expect("valid parameters")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    match out {
        Ok(msg) if elapsed <= budget => Ok(format!("{msg}; {elapsed:.2?}")),
        Ok(msg) => Err(format!("{msg}; {elapsed:.2?} exceeds {budget:?}")),
        Err(msg) => Err(format!("{msg}; {elapsed:.2?}")),
    }
}

fn table2() -> Outcome {
    let rows = reference::delta_table().map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for r in &rows {
        let d = calibrate::solve_delta(r.gamma, PRINTED_MASS_TARGET).map_err(|e| e.to_string())?;
        let tol = if r.decimals < 4 {
            TABLE2_TOL_TWO_DECIMALS
        } else {
            TABLE2_TOL
        };
        let err = (d - r.delta).abs();
        worst = worst.max(err);
        if err > tol {
            bad.push(format!("γ={} δ={d:.5} printed {}", r.gamma, r.delta));
        }
    }
    let msg = format!("{} rows, worst |Δδ| {worst:.2e}", rows.len());
    if rows.len() == 19 && bad.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; {}", bad.join(", ")))
    }
}

fn table3() -> Outcome {
    let rows = reference::mass_table().map_err(|e| e.to_string())?;
    let p = params(1.2814, 10);
    let mut worst: f64 = 0.0;
    for r in &rows {
        worst = worst
            .max((structure::mass_ratio(&p, r.y).map_err(|e| e.to_string())? - r.analytic).abs());
    }
    let msg = format!("{} ordinates, worst |Δ| {worst:.2e}", rows.len());
    if rows.len() == 7 && worst <= TABLE3_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn table1() -> Outcome {
    let report = tables::build(1, &TableOptions::default()).map_err(|e| e.to_string())?;
    let compared: Vec<_> = report
        .cells
        .iter()
        .filter(|c| c.status != CellStatus::Informational)
        .collect();
    let mut worst: f64 = 0.0;
    let mut excluded = Vec::new();
    for c in &compared {
        let computed = c.computed.ok_or("cell without a computed value")?;
        if c.status == CellStatus::KnownDiscrepancy {
            excluded.push(format!(
                "{}@{} printed {} computed {computed:.4}",
                c.column, c.x, c.printed
            ));
        } else {
            worst = worst.max((computed - c.printed).abs());
        }
    }
    let msg = format!(
        "{} model cells, worst |Δ| {worst:.2e}; excluded: {}",
        compared.len(),
        excluded.join(", ")
    );
    if compared.len() == 56 && report.mismatches() == 0 && worst <= TABLE1_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn central_density() -> Outcome {
    let rho = structure::central_density(&params(1.2814, 10), 1.991e33, 6.96e10);
    let msg = format!("ρ_c = {rho:.3} g/cm³");
    if (CENTRAL_DENSITY_RANGE.0..=CENTRAL_DENSITY_RANGE.1).contains(&rho) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn options() -> ValidateOptions {
    ValidateOptions {
        rel_tol: QUADRATURE_TOL,
        deltas: DELTAS.to_vec(),
        gammas: GAMMAS.to_vec(),
        density_exponents: DENSITY_EXPONENTS.to_vec(),
        grid_points: GRID_POINTS,
        ..ValidateOptions::default()
    }
}

fn closed_form_vs_quadrature() -> Outcome {
    let opts = options();
    let mut checks = Vec::new();
    for &d in &DELTAS {
        for &g in &GAMMAS {
            checks.extend(
                validate::quadrature_checks(&params(d, g), &opts).map_err(|e| e.to_string())?,
            );
        }
    }
    let worst = checks.iter().map(|c| c.rel_error).fold(0.0, f64::max);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    let msg = format!("{} checks, worst rel {worst:.2e}", checks.len());
    // 16 models × 25 points × (mass, pressure, two luminosities)
    if checks.len() == 16 * 25 * 4 && failed.is_empty() {
        Ok(msg)
    } else {
        Err(format!(
            "{msg}; {} failed, first {:?}",
            failed.len(),
            failed.first()
        ))
    }
}

fn representations() -> Outcome {
    let opts = options();
    let mut worst_series: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;
    for &d in &DELTAS {
        for &g in &GAMMAS {
            for c in
                validate::representation_checks(&params(d, g), &opts).map_err(|e| e.to_string())?
            {
                match c.name.as_str() {
                    "pressure_single_vs_double_series" => {
                        worst_series = worst_series.max(c.rel_error)
                    }
                    _ => worst_identity = worst_identity.max(c.rel_error),
                }
            }
        }
    }
    let msg =
        format!("single vs double series {worst_series:.2e}, ψ-φ vs δ²g {worst_identity:.2e}");
    if worst_series <= SERIES_TOL && worst_identity <= IDENTITY_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Differentiates whichever of the enclosed or exterior quantity is
/// smaller, so that neither side of the difference is nearly flat.
fn residuals() -> std::result::Result<(f64, f64, f64), sunmodel::Error> {
    let c = SolarConstants::<f64>::reduced();
    let four_pi = 4.0 * std::f64::consts::PI;
    let (mut wm, mut wp, mut wl) = (0.0_f64, 0.0_f64, 0.0_f64);
    let grid = validate::uniform_grid(GRID_POINTS);
    for &d in &DELTAS {
        for &g in &GAMMAS {
            let p = params(d, g);
            let total = structure::mass(&p, &c, 1.0)?;
            for &y in &grid[1..grid.len() - 1] {
                let h = 1e-3 * y.min(1.0 - y);
                let u = eval_density_ratio(&p, y)?;
                let m = structure::mass(&p, &c, y)?;

                let dm = if structure::mass_ratio(&p, y)? <= 0.5 {
                    derivative(|t| structure::mass(&p, &c, t).unwrap(), y, h)
                } else {
                    -derivative(
                        |t| total * structure::exterior_mass_ratio(&p, t).unwrap(),
                        y,
                        h,
                    )
                };
                wm = wm.max(rel(dm, four_pi * y * y * u));

                let dp = derivative(|t| structure::pressure(&p, &c, t).unwrap(), y, h);
                wp = wp.max(rel(dp, -m * u / (y * y)));

                let temperature = structure::temperature(&p, &c, y)?;
                for &n in &DENSITY_EXPONENTS {
                    let e = EnergyParams::new(1.0, n, 1)?;
                    let inner = energy::luminosity_profile(&p, &c, &e, y)?;
                    let outer = energy::exterior_luminosity(&p, &c, &e, y)?;
                    let dl = if inner <= outer {
                        derivative(|t| energy::luminosity_profile(&p, &c, &e, t).unwrap(), y, h)
                    } else {
                        -derivative(
                            |t| energy::exterior_luminosity(&p, &c, &e, t).unwrap(),
                            y,
                            h,
                        )
                    };
                    let source = four_pi * y * y * u * energy::epsilon_rate(u, temperature, &e);
                    wl = wl.max(rel(dl, source));
                }
            }
        }
    }
    Ok((wm, wp, wl))
}

fn differential_equations() -> Outcome {
    let (wm, wp, wl) = residuals().map_err(|e| e.to_string())?;
    let msg = format!("worst rel dM/dr {wm:.2e}, dP/dr {wp:.2e}, dL/dr {wl:.2e}");
    if wm.max(wp).max(wl) <= RESIDUAL_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn phi_bound() -> Outcome {
    let mut worst: f64 = 0.0;
    for gamma in 1..=20 {
        for step in 3..=20 {
            let p = params(step as f64 / 10.0, gamma);
            let psi = energy::psi(&p);
            for i in 0..1000 {
                let y = i as f64 / 999.0;
                let phi = energy::phi(&p, y).map_err(|e| e.to_string())?;
                worst = worst.max((phi / psi).abs());
            }
        }
    }
    let msg = format!("max |φ/ψ| = {worst:.17}");
    if worst <= PHI_BOUND {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn adjudication() -> Outcome {
    let a = validate::adjudicate(&params(1.2814, 10), &QuadratureSettings::default())
        .map_err(|e| e.to_string())?;
    let rows: Vec<String> = a
        .rows
        .iter()
        .map(|r| {
            format!(
                "{}: {:.4e} ({} | {})",
                r.y, r.oracle_g, r.table4_g, r.table6_g
            )
        })
        .collect();
    let msg = format!(
        "g/u = {:.4e} (within 5%: {}), pressure column confirmed: {}/{}; {}",
        a.proxy,
        a.proxy_within_window,
        a.table4_confirmed,
        a.table6_confirmed,
        rows.join(", ")
    );
    if a.rows.len() == 7 && a.proxy_within_window == a.table4_confirmed {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn fit_recovery() -> Outcome {
    let truth = params(1.5, 8);
    let rows: Vec<(f64, f64)> = (1..20)
        .map(|i| {
            let y = i as f64 / 20.0;
            (y, eval_density_ratio(&truth, y).unwrap())
        })
        .collect();
    let synthetic = ReferenceTable::new(rows, "synthetic").map_err(|e| e.to_string())?;
    let target = calibrate::constraint_value(1.5, 8);
    let fit = calibrate::fit_model_params(&synthetic, 1..=20, target).map_err(|e| e.to_string())?;
    let sears = reference::sears_density().map_err(|e| e.to_string())?;
    let fit_sears = calibrate::fit_model_params(&sears, 1..=20, PRINTED_MASS_TARGET)
        .map_err(|e| e.to_string())?;
    let msg = format!(
        "synthetic → (δ={}, γ={}), Sears → (δ={:.4}, γ={})",
        fit.best.delta(),
        fit.best.gamma(),
        fit_sears.best.delta(),
        fit_sears.best.gamma()
    );
    let recovered = fit.best.gamma() == 8 && (fit.best.delta() - 1.5).abs() <= 1e-12;
    if recovered && (9..=11).contains(&fit_sears.best.gamma()) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [(&str, Box<dyn FnOnce() -> Outcome>); 10] = [
        ("delta table", Box::new(|| timed(FAST_BUDGET, table2))),
        ("mass table", Box::new(|| timed(FAST_BUDGET, table3))),
        ("density table", Box::new(|| timed(FAST_BUDGET, table1))),
        ("central density", Box::new(central_density)),
        (
            "closed form vs quadrature",
            Box::new(|| timed(QUADRATURE_BUDGET, closed_form_vs_quadrature)),
        ),
        ("series representations", Box::new(representations)),
        ("differential equations", Box::new(differential_equations)),
        ("phi bound", Box::new(phi_bound)),
        ("pressure table adjudication", Box::new(adjudication)),
        ("fit recovery", Box::new(fit_recovery)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
