//! Univariate real polynomials over an exact or floating scalar.
//!
//! Coefficients are stored densely, index `i` holding the coefficient of
//! `x^i`, trimmed so the last entry is nonzero. The zero polynomial is the
//! empty coefficient list and its degree is `None` rather than a fake
//! numeric sentinel.

use crate::scalar::Scalar;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// Lagrange node products require strictly increasing nodes.
    #[error("nodes must be strictly increasing (violated at position {position})")]
    NonIncreasingNodes { position: usize },
    /// Root isolation of the zero polynomial is undefined.
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// Dense univariate polynomial with scalar type `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    /// Build from low-to-high coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn identity() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the stored degree).
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Coefficientwise derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * S::from_int(i as i64))
            .collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Monic polynomial `∏ (x - λᵢ)` with the given simple roots.
    pub fn lagrange_node_product(lambdas: &[S]) -> Result<Self, PolyError> {
        for (i, pair) in lambdas.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(PolyError::NonIncreasingNodes { position: i + 1 });
            }
        }
        let mut p = Self::constant(S::one());
        for l in lambdas {
            p = p.mul(&Self::new(vec![-l.clone(), S::one()]));
        }
        Ok(p)
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlead = divisor.leading().unwrap().clone();
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let qlen = rem.len() - ddeg;
        let mut quot = vec![S::zero(); qlen];
        for k in (0..qlen).rev() {
            let factor = rem[k + ddeg].clone() / dlead.clone();
            if !factor.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - factor.clone() * d.clone();
                }
            }
            quot[k] = factor;
        }
        rem.truncate(ddeg);
        (Self::new(quot), Self::new(rem))
    }

    /// Scale so the leading coefficient is one. No-op on the zero polynomial.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_zero() => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm. Exact only
    /// when `S` is exact; avoid on floats except for well-conditioned cases.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic(); // keeps exact coefficient growth in check
        }
        a.monic()
    }

    /// Map coefficients into another scalar type (explicit conversion).
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn quartic() -> Polynomial<Rat> {
        // x^4 + x^3 - 13x^2 - x + 12
        Polynomial::new(vec![rat(12, 1), rat(-1, 1), rat(-13, 1), rat(1, 1), rat(1, 1)])
    }

    #[test]
    fn eval_quartic_at_minus_two() {
        assert_eq!(quartic().eval(&rat(-2, 1)), rat(-30, 1));
    }

    #[test]
    fn eval_zero_polynomial() {
        let p: Polynomial<Rat> = Polynomial::zero();
        assert_eq!(p.eval(&rat(7, 1)), rat(0, 1));
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn eval_node_product_at_interior_point() {
        let p =
            Polynomial::lagrange_node_product(&[rat(-2, 1), rat(0, 1), rat(2, 1), rat(4, 1)])
                .unwrap();
        // (1+2)(1)(1-2)(1-4) = 9
        assert_eq!(p.eval(&rat(1, 1)), rat(9, 1));
    }

    #[test]
    fn derivative_basics() {
        let sq: Polynomial<Rat> = Polynomial::new(vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(sq.derivative(), Polynomial::new(vec![rat(0, 1), rat(2, 1)]));
        let c: Polynomial<Rat> = Polynomial::constant(rat(5, 1));
        assert!(c.derivative().is_zero());
    }

    #[test]
    fn derivative_of_node_product_at_node() {
        // f = (x+2)x(x-2)(x-4), f'(-2) = -48
        let f =
            Polynomial::lagrange_node_product(&[rat(-2, 1), rat(0, 1), rat(2, 1), rat(4, 1)])
                .unwrap();
        assert_eq!(f.derivative().eval(&rat(-2, 1)), rat(-48, 1));
        assert_eq!(
            f,
            Polynomial::new(vec![rat(0, 1), rat(16, 1), rat(-4, 1), rat(-4, 1), rat(1, 1)])
        );
    }

    #[test]
    fn node_product_simple_cases() {
        let p = Polynomial::lagrange_node_product(&[rat(0, 1)]).unwrap();
        assert_eq!(p, Polynomial::identity());
        let q = Polynomial::lagrange_node_product(&[rat(-1, 1), rat(1, 1)]).unwrap();
        assert_eq!(q, Polynomial::new(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]));
    }

    #[test]
    fn node_product_rejects_non_increasing() {
        let err = Polynomial::lagrange_node_product(&[rat(1, 1), rat(1, 1)]).unwrap_err();
        assert_eq!(err, PolyError::NonIncreasingNodes { position: 1 });
    }

    #[test]
    fn node_product_alternation_at_nodes() {
        // sgn((-1)^i f'(λᵢ)) is the same nonzero value at every node.
        let nodes = [rat(-2, 1), rat(0, 1), rat(2, 1), rat(4, 1)];
        let f = Polynomial::lagrange_node_product(&nodes).unwrap();
        let df = f.derivative();
        let mut pattern = None;
        for (i, l) in nodes.iter().enumerate() {
            let v = df.eval(l);
            let s = v.signum_int() * if (i + 1) % 2 == 0 { 1 } else { -1 };
            assert_ne!(s, 0);
            match pattern {
                None => pattern = Some(s),
                Some(p) => assert_eq!(p, s),
            }
        }
    }

    #[test]
    fn div_rem_and_gcd() {
        let f = quartic();
        let g = Polynomial::new(vec![rat(-1, 1), rat(1, 1)]); // x - 1
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero()); // 1 is a root of the quartic
        assert_eq!(q.mul(&g), f);
        let gcd = f.gcd(&g);
        assert_eq!(gcd, g.monic());
    }

    #[test]
    fn horner_is_exact_at_product_nodes() {
        let nodes = [rat(-7, 3), rat(1, 4), rat(11, 5)];
        let f = Polynomial::lagrange_node_product(&nodes).unwrap();
        for l in &nodes {
            assert!(num_traits::Zero::is_zero(&f.eval(l)));
        }
    }
}
