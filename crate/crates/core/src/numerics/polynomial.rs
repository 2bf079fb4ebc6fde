//! Dense univariate polynomials over a generic scalar, coefficients ascending.

use super::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// Build from ascending coefficients; exact trailing zeros are trimmed.
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Polynomial::new(vec![c])
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the trimmed polynomial; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_int_ratio(k as i64, 1))
            .collect();
        Polynomial::new(coeffs)
    }

    /// Multiply by the indeterminate (shift all coefficients up one degree).
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(T::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(T::zero);
            coeffs.push(a + b);
        }
        Polynomial::new(coeffs)
    }

    pub fn map_to_f64(&self) -> Polynomial<f64> {
        Polynomial::new(self.coeffs.iter().map(Scalar::to_f64).collect())
    }
}

impl Polynomial<f64> {
    /// Test helper: monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut p = Polynomial::constant(1.0);
        for &r in roots {
            p = p.shift_up().add(&p.scale(&(-r)));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn eval_and_derivative() {
        // p = 1 - 3x + 2x^2
        let p = Polynomial::new(vec![1.0, -3.0, 2.0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&2.0), 3.0);
        let d = p.derivative();
        assert_eq!(d.coeffs(), &[-3.0, 4.0]);
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        let z = Polynomial::new(vec![0.0, 0.0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn from_roots_round_trip() {
        let p = Polynomial::from_roots(&[1.0, -2.0, 3.0]);
        for r in [1.0, -2.0, 3.0] {
            assert!(p.eval(&r).abs() < 1e-12);
        }
        assert_eq!(*p.leading().unwrap(), 1.0);
    }

    #[test]
    fn exact_rational_arithmetic() {
        let half = BigRational::from_int_ratio(1, 2);
        let third = BigRational::from_int_ratio(1, 3);
        let p = Polynomial::new(vec![half.clone(), third]);
        let v = p.eval(&BigRational::from_int_ratio(3, 1));
        assert_eq!(v, BigRational::from_int_ratio(3, 2));
        assert_eq!(p.map_to_f64().coeffs(), &[0.5, 1.0 / 3.0]);
    }
}
