use num_traits::Float;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
pub struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: Float> Default for Compensated<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Float> Compensated<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Float> FromIterator<T> for Compensated<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
