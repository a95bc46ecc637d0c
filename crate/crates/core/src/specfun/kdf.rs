use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{as_nonpositive_integer, Real};

use super::sum::CompensatedSum;

/// Parameters and arguments of a two-variable Kampé de Fériet series
///
/// ```text
///  ∞   ∞   ∏(a)_{m+n} ∏(b)_m ∏(c)_n     x^m y^n
///  Σ   Σ   ---------------------------  -------
/// m=0 n=0  ∏(α)_{m+n} ∏(β)_m ∏(γ)_n     m!  n!
/// ```
///
/// Only terminating instances are evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdfSpec<T> {
    pub upper_joint: Vec<T>,
    pub upper_x: Vec<T>,
    pub upper_y: Vec<T>,
    pub lower_joint: Vec<T>,
    pub lower_x: Vec<T>,
    pub lower_y: Vec<T>,
    pub x: T,
    pub y: T,
}

/// Largest order reached before a non-positive integer parameter kills the
/// series: `-k` truncates at order `k`.
fn truncation<T: Real>(params: &[T]) -> Option<usize> {
    params
        .iter()
        .filter_map(|&p| as_nonpositive_integer(p))
        .min()
}

fn ratio_table<T: Real>(upper: &[T], lower: &[T], len: usize) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = T::one();
    out.push(acc);
    for k in 0..len {
        let kk = T::from_usize(k);
        for &l in lower {
            if l + kk == T::zero() {
                return Err(Error::Pole {
                    param: l.as_f64(),
                    order: k + 1,
                });
            }
        }
        let num = upper.iter().fold(T::one(), |p, &a| p * (a + kk));
        let den = lower.iter().fold(T::one(), |p, &a| p * (a + kk));
        acc = acc * num / den;
        out.push(acc);
    }
    Ok(out)
}

impl<T: Real> KdfSpec<T> {
    /// Orders `(max m, max n)` implied by the non-positive integer upper
    /// parameters, or `None` when the series does not terminate.
    pub fn termination_bounds(&self) -> Option<(usize, usize)> {
        let joint = truncation(&self.upper_joint);
        let bx = [truncation(&self.upper_x), joint]
            .into_iter()
            .flatten()
            .min();
        let by = [truncation(&self.upper_y), joint]
            .into_iter()
            .flatten()
            .min();
        bx.zip(by)
    }

    /// Evaluates with the orders implied by [`Self::termination_bounds`].
    pub fn eval(&self) -> Result<T> {
        let (mx, my) = self
            .termination_bounds()
            .ok_or_else(|| self.non_terminating())?;
        kdf_eval(self, mx, my)
    }

    fn non_terminating(&self) -> Error {
        Error::NonTerminating(
            "Kampé de Fériet series needs a non-positive integer upper parameter in each direction"
                .into(),
        )
    }
}

/// Finite double sum of a terminating Kampé de Fériet series over
/// `0 <= m <= max_x_order`, `0 <= n <= max_y_order`.
///
/// The orders must cover the termination bounds of `spec`; a smaller order
/// would silently truncate a non-zero tail and is rejected.
pub fn kdf_eval<T: Real>(spec: &KdfSpec<T>, max_x_order: usize, max_y_order: usize) -> Result<T> {
    let (bx, by) = spec
        .termination_bounds()
        .ok_or_else(|| spec.non_terminating())?;
    if max_x_order < bx || max_y_order < by {
        return Err(Error::domain(format!(
            "orders ({max_x_order}, {max_y_order}) do not reach the termination bounds ({bx}, {by})"
        )));
    }
    let joint_bound = truncation(&spec.upper_joint).unwrap_or(bx + by);
    let (mx, my) = (bx, by);

    let joint = ratio_table(
        &spec.upper_joint,
        &spec.lower_joint,
        (mx + my).min(joint_bound),
    )?;
    let mut xs = ratio_table(&spec.upper_x, &spec.lower_x, mx)?;
    let mut ys = ratio_table(&spec.upper_y, &spec.lower_y, my)?;
    let scale = |table: &mut Vec<T>, z: T| {
        let mut pow_over_fact = T::one();
        for (k, v) in table.iter_mut().enumerate() {
            if k > 0 {
                pow_over_fact = pow_over_fact * z / T::from_usize(k);
            }
            *v = *v * pow_over_fact;
        }
    };
    scale(&mut xs, spec.x);
    scale(&mut ys, spec.y);

    let mut acc = CompensatedSum::new();
    for (m, &xm) in xs.iter().enumerate() {
        for (n, &yn) in ys.iter().enumerate() {
            if m + n >= joint.len() {
                break;
            }
            acc.add(joint[m + n] * xm * yn);
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(upper_x: Vec<f64>, upper_y: Vec<f64>) -> KdfSpec<f64> {
        KdfSpec {
            upper_joint: vec![],
            upper_x,
            upper_y,
            lower_joint: vec![],
            lower_x: vec![],
            lower_y: vec![],
            x: 0.3,
            y: 0.7,
        }
    }

    #[test]
    fn zero_parameters_leave_only_the_constant_term() {
        let s = spec(vec![0.0, 2.5], vec![0.0]);
        assert_eq!(s.eval().unwrap(), 1.0);
    }

    #[test]
    fn separable_case_factorises() {
        // No joint parameters: the double sum is (1 - x)^2 (1 - y)^3.
        let s = spec(vec![-2.0], vec![-3.0]);
        let want = (1.0 - 0.3_f64).powi(2) * (1.0 - 0.7_f64).powi(3);
        assert!((s.eval().unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn joint_parameter_alone_terminates() {
        // (-N)_{m+n} x^m y^n/(m! n!) sums to (1 - x - y)^N.
        let mut s = spec(vec![], vec![]);
        s.upper_joint = vec![-4.0];
        assert_eq!(s.termination_bounds(), Some((4, 4)));
        let want = (1.0 - 0.3_f64 - 0.7).powi(4);
        assert!((s.eval().unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_terminating_and_short_orders() {
        let s = spec(vec![1.5], vec![-2.0]);
        assert!(matches!(s.eval(), Err(Error::NonTerminating(_))));
        let s = spec(vec![-3.0], vec![-2.0]);
        assert!(matches!(kdf_eval(&s, 2, 2), Err(Error::Domain(_))));
        assert!(kdf_eval(&s, 3, 2).is_ok());
    }

    #[test]
    fn lower_pole_inside_grid_is_rejected() {
        let mut s = spec(vec![-3.0], vec![-2.0]);
        s.lower_x = vec![-1.0];
        assert_eq!(
            s.eval().unwrap_err(),
            Error::Pole {
                param: -1.0,
                order: 2
            }
        );
    }
}
