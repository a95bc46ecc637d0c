//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! The model is evaluated in `f64` by default. `f32` is supported for cheap
//! bulk evaluation, and [`Quad`] (double-double, ~32 significant digits)
//! carries the alternating hypergeometric series whose terms cancel heavily
//! near the stellar surface.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;

pub use qd::Quad;

/// Real scalar used by the model.
///
/// This is deliberately smaller than `num_traits::Float`: it lists only the
/// operations the model needs, so that double-double types without a full
/// `Float` implementation can participate.
pub trait Real:
    Num + Neg<Output = Self> + Copy + PartialOrd + Debug + Send + Sync + 'static
{
    fn from_f64(v: f64) -> Self;
    fn as_f64(self) -> f64;
    /// Lossless widening into double-double.
    fn to_quad(self) -> Quad;
    fn from_quad(q: Quad) -> Self;

    fn exp(self) -> Self;
    fn exp_m1(self) -> Self;
    fn ln(self) -> Self;
    fn ln_1p(self) -> Self;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn floor(self) -> Self;
    fn is_finite(self) -> bool;

    /// Unit roundoff of the type.
    fn epsilon() -> Self;
    fn pi() -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    /// `self^e` for `self > 0`; `0^e = 0` for `e > 0`.
    fn powf(self, e: Self) -> Self {
        if self == Self::zero() {
            if e == Self::zero() {
                Self::one()
            } else {
                Self::zero()
            }
        } else {
            (e * self.ln()).exp()
        }
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

macro_rules! impl_real_for_primitive {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn from_f64(v: f64) -> Self {
                v as $t
            }
            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
            #[inline]
            fn to_quad(self) -> Quad {
                Quad::from_f64(self as f64)
            }
            #[inline]
            fn from_quad(q: Quad) -> Self {
                (q.0 + q.1) as $t
            }
            #[inline]
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            #[inline]
            fn exp_m1(self) -> Self {
                <$t>::exp_m1(self)
            }
            #[inline]
            fn ln(self) -> Self {
                <$t>::ln(self)
            }
            #[inline]
            fn ln_1p(self) -> Self {
                <$t>::ln_1p(self)
            }
            #[inline]
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            #[inline]
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            #[inline]
            fn floor(self) -> Self {
                <$t>::floor(self)
            }
            #[inline]
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
            #[inline]
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            #[inline]
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }
            #[inline]
            fn powf(self, e: Self) -> Self {
                <$t>::powf(self, e)
            }
            #[inline]
            fn powi(self, n: i32) -> Self {
                <$t>::powi(self, n)
            }
        }
    };
}

impl_real_for_primitive!(f32);
impl_real_for_primitive!(f64);

impl Real for Quad {
    #[inline]
    fn from_f64(v: f64) -> Self {
        Quad::from_f64(v)
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self.0 + self.1
    }
    #[inline]
    fn to_quad(self) -> Quad {
        self
    }
    #[inline]
    fn from_quad(q: Quad) -> Self {
        q
    }
    fn exp(self) -> Self {
        Quad::exp(self)
    }
    fn exp_m1(self) -> Self {
        // Below ~1e-5 the Taylor tail is under the double-double unit roundoff
        // after five terms.
        if self.0.abs() < 1e-5 {
            let mut term = self;
            let mut sum = self;
            for k in 2..=6 {
                term = term * self / Quad::from_f64(k as f64);
                sum = sum + term;
            }
            sum
        } else {
            Quad::exp(self) - Quad::ONE
        }
    }
    fn ln(self) -> Self {
        Quad::ln(self)
    }
    fn ln_1p(self) -> Self {
        Quad::ln(Quad::ONE + self)
    }
    fn sqrt(self) -> Self {
        Quad::sqrt(self)
    }
    #[inline]
    fn abs(self) -> Self {
        Quad::abs(self)
    }
    fn floor(self) -> Self {
        let t = self.trunc();
        if t > self {
            t - Quad::ONE
        } else {
            t
        }
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.0.is_finite() && self.1.is_finite()
    }
    #[inline]
    fn epsilon() -> Self {
        Quad::EPSILON
    }
    #[inline]
    fn pi() -> Self {
        Quad::PI
    }
}

/// Convert a scalar to its integer value if it is a non-positive integer.
pub(crate) fn as_nonpositive_integer<T: Real>(x: T) -> Option<usize> {
    if x > T::zero() || !x.is_finite() {
        return None;
    }
    if x.floor() == x {
        Some((-x).as_f64().round() as usize)
    } else {
        None
    }
}
