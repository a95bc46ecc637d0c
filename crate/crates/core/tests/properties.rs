//! Invariants of the density law, the structure integrals, calibration and
//! the quadrature oracle.

use proptest::prelude::*;
use sunmodel::calibrate::{self, FitRow, ReferenceTable};
use sunmodel::density::{
    eval_density_ratio, eval_poly_model, eval_product_model, ModelParams, ProductDensityModel,
};
use sunmodel::energy;
use sunmodel::oracle::{self, QuadratureSettings};
use sunmodel::reference;
use sunmodel::structure::{self, SolarConstants};

fn params(delta: f64, gamma: u32) -> ModelParams<f64> {
    ModelParams::new(delta, gamma).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Fourth-order central difference.
fn derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

fn grid(points: usize) -> impl Iterator<Item = f64> {
    (1..points).map(move |i| i as f64 / points as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_strictly_decreases(delta in 0.2f64..3.0, gamma in 1u32..=20) {
        let p = params(delta, gamma);
        let u: Vec<f64> = grid(1000).map(|y| eval_density_ratio(&p, y).unwrap()).collect();
        prop_assert!(u.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn single_factor_product_is_the_power_law(delta in 0.1f64..4.0, gamma in 1u32..=30, y in 0.0f64..=1.0) {
        let m = ProductDensityModel::new(vec![(delta, gamma)]).unwrap();
        prop_assert_eq!(eval_product_model(&m, y).unwrap(), eval_density_ratio(&params(delta, gamma), y).unwrap());
    }

    #[test]
    fn mass_rises_and_pressure_falls(delta in 0.2f64..2.0, gamma in 1u32..=20) {
        let p = params(delta, gamma);
        let ys: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        let m: Vec<f64> = ys.iter().map(|&y| structure::mass_ratio(&p, y).unwrap()).collect();
        let g: Vec<f64> = ys.iter().map(|&y| structure::pressure_factor_g(&p, y).unwrap()).collect();
        prop_assert!(m.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert_eq!(m[0], 0.0);
        prop_assert_eq!(m[200], 1.0);
        // Monotone up to a few ulps where the values saturate.
        let slack = 4.0 * f64::EPSILON;
        prop_assert!(m.windows(2).all(|w| w[0] <= w[1] + slack));
        prop_assert!(g.windows(2).all(|w| w[1] <= w[0] + slack * g[0]));
        prop_assert!(g[200].abs() <= 1e-15 * g[0]);
    }

    #[test]
    fn doubling_the_radius_keeps_reduced_quantities(delta in 0.2f64..2.0, gamma in 1u32..=20, y in 0.0f64..=1.0) {
        let p = params(delta, gamma);
        let c = SolarConstants::<f64>::sears();
        let c2 = SolarConstants { radius: 2.0 * c.radius, ..c };
        let m = |c: &SolarConstants<f64>| structure::mass(&p, c, y).unwrap() / structure::mass(&p, c, 1.0).unwrap();
        let g = |c: &SolarConstants<f64>| structure::pressure(&p, c, y).unwrap() / c.pressure_unit();
        prop_assert!((m(&c) - m(&c2)).abs() <= 1e-15);
        prop_assert!((g(&c) - g(&c2)).abs() <= 1e-15 * structure::pressure_factor_g(&p, 0.0).unwrap());
    }

    #[test]
    fn solve_delta_inverts_the_constraint(gamma in 1u32..=30, log_t in 1.1f64.ln()..1e4f64.ln()) {
        let t = log_t.exp();
        // Above δ = 64 the constraint is already close to one.
        if t <= calibrate::constraint_value(64.0, gamma) {
            prop_assert!(calibrate::solve_delta(gamma, t).is_err());
        } else {
            let d = calibrate::solve_delta(gamma, t).unwrap();
            prop_assert!(rel(calibrate::constraint_value(d, gamma), t) <= 1e-9);
        }
    }

    #[test]
    fn luminosity_integrand_is_positive(delta in 0.2f64..2.0, gamma in 1u32..=20, n in 1u32..=3) {
        let p = params(delta, gamma);
        let psi_i0 = energy::psi(&p) * energy::integral_i0(&p, n).unwrap();
        let i1 = energy::integral_i1(&p, n);
        prop_assert!(psi_i0 - i1 > 0.0);
        prop_assert!(i1 <= psi_i0);
    }

    #[test]
    fn phi_is_bounded_by_psi(delta in 0.2f64..2.0, gamma in 1u32..=20, y in 0.0f64..=1.0) {
        let p = params(delta, gamma);
        let phi = energy::phi(&p, y).unwrap();
        prop_assert!(phi.abs() <= energy::psi(&p) * (1.0 + 1e-12));
    }

    #[test]
    fn hydrostatic_and_mass_continuity(delta in 0.2f64..2.0, gamma in 1u32..=20, y in 0.02f64..0.98) {
        let p = params(delta, gamma);
        let c = SolarConstants::<f64>::reduced();
        let h = 1e-3 * y.min(1.0 - y);
        let four_pi = 4.0 * std::f64::consts::PI;
        let rho = eval_density_ratio(&p, y).unwrap();
        let m = structure::mass(&p, &c, y).unwrap();

        let dp = derivative(|t| structure::pressure(&p, &c, t).unwrap(), y, h);
        let hydrostatic = -m * rho / (y * y);
        prop_assert!(rel(dp, hydrostatic) <= 1e-6, "dP/dr {dp:e} vs {hydrostatic:e}");

        let total = structure::mass(&p, &c, 1.0).unwrap();
        let dm = if structure::mass_ratio(&p, y).unwrap() <= 0.5 {
            derivative(|t| structure::mass(&p, &c, t).unwrap(), y, h)
        } else {
            -derivative(|t| total * structure::exterior_mass_ratio(&p, t).unwrap(), y, h)
        };
        let continuity = four_pi * y * y * rho;
        prop_assert!(rel(dm, continuity) <= 1e-6, "dM/dr {dm:e} vs {continuity:e}");
    }

    /// A tighter tolerance moves the estimate by no more than the error the
    /// looser run reported.
    #[test]
    fn refining_stays_within_the_error_estimate(
        delta in 0.3f64..2.0,
        gamma in 1u32..=15,
        y in 0.05f64..=1.0,
        log_tol in 1e-11f64.ln()..1e-4f64.ln(),
    ) {
        let p = params(delta, gamma);
        let c = SolarConstants::<f64>::reduced();
        let e = energy::EnergyParams::new(1.0, 2, 1).unwrap();
        let tol = log_tol.exp();
        let coarse = QuadratureSettings::new(tol, 1e-300, 2000).unwrap();
        let fine = QuadratureSettings::new(tol / 2.0, 1e-300, 2000).unwrap();
        let runs: [&dyn Fn(&QuadratureSettings) -> oracle::Estimate; 3] = [
            &|s| oracle::mass_by_quadrature(&p, &c, y, s).unwrap(),
            &|s| oracle::pressure_by_quadrature(&p, &c, y, s).unwrap(),
            &|s| oracle::luminosity_by_quadrature(&p, &c, &e, y, s).unwrap(),
        ];
        for run in runs {
            let (a, b) = (run(&coarse), run(&fine));
            prop_assert!((a.value - b.value).abs() <= a.error, "{} -> {} (error {:e})", a.value, b.value, a.error);
        }
    }
}

#[test]
fn polynomial_fits_are_least_squares() {
    let data = reference::sears_density().unwrap();
    for degree in 1..=4 {
        let fit = calibrate::fit_polynomial(&data, degree).unwrap();
        let sse = |coeffs: &[f64]| -> f64 {
            let model = sunmodel::density::PolynomialDensityModel {
                coefficients: coeffs.to_vec(),
            };
            data.rows()
                .iter()
                .map(|&(y, v)| (eval_poly_model(&model, y) - v).powi(2))
                .sum()
        };
        let best = sse(&fit.coefficients);
        for i in 0..=degree {
            for step in [-1e-6, 1e-6] {
                let mut c = fit.coefficients.clone();
                c[i] += step;
                assert!(
                    sse(&c) >= best,
                    "degree {degree}, coefficient {i}, step {step}"
                );
            }
        }
    }
}

#[test]
fn synthetic_fit_recovers_the_generating_pair() {
    let p = params(1.5, 8);
    let rows: Vec<(f64, f64)> = grid(20)
        .map(|y| (y, eval_density_ratio(&p, y).unwrap()))
        .collect();
    let table = ReferenceTable::new(rows, "synthetic").unwrap();
    let report =
        calibrate::fit_model_params(&table, 1..=20, calibrate::constraint_value(1.5, 8)).unwrap();
    assert_eq!(report.best.gamma(), 8);
    assert!((report.best.delta() - 1.5).abs() < 1e-12);
    assert!(report.best_sse <= 1e-20);
}

#[test]
fn ties_go_to_the_smallest_gamma_then_delta() {
    let row = |gamma, delta| FitRow {
        gamma,
        delta,
        sse: 0.25,
    };
    let rows = [row(7, 1.0), row(3, 2.0), row(3, 1.5), row(9, 0.5)];
    let best = calibrate::select_best(&rows);
    assert_eq!((best.gamma, best.delta), (3, 1.5));
}
