use crate::scalar::Real;

/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan it stays correct when an incoming term is larger in
/// magnitude than the running sum, which is the normal situation for the
/// alternating binomial series in this crate.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
    abs_sum: T,
}

impl<T: Real> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
            abs_sum: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
        self.abs_sum = self.abs_sum + x.abs();
    }

    pub fn value(&self) -> T {
        self.sum + self.compensation
    }

    /// Sum of absolute values of all terms added so far.
    ///
    /// `abs_sum / |value|` is the condition number of the summation; the
    /// forward error of the result is bounded by a small multiple of
    /// `epsilon * abs_sum`.
    pub fn abs_sum(&self) -> T {
        self.abs_sum
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
