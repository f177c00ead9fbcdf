//! Real trigonometric polynomials of period one.
//!
//! `constant + Σₖ cosₖ·cos(2πkt) + sinₖ·sin(2πkt)`, entry `k-1` of
//! `harmonics` holding the order-`k` pair. Periodicity is structural: time is
//! reduced modulo one before evaluation, so values at `t = 0` and `t = 1`
//! agree exactly. Products are re-expanded through product-to-sum identities,
//! which keeps the harmonic algebra closed (and exact over rationals).

use crate::scalar::Scalar;
use std::f64::consts::TAU;

/// Coefficient pair of one harmonic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Harmonic<S> {
    pub cos: S,
    pub sin: S,
}

/// Trigonometric polynomial in `t` with period one.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly<S> {
    constant: S,
    harmonics: Vec<Harmonic<S>>,
}

impl<S: Scalar> TrigPoly<S> {
    pub fn new(constant: S, harmonics: Vec<Harmonic<S>>) -> Self {
        let mut tp = Self { constant, harmonics };
        tp.trim();
        tp
    }

    pub fn zero() -> Self {
        Self {
            constant: S::zero(),
            harmonics: Vec::new(),
        }
    }

    pub fn constant(c: S) -> Self {
        Self {
            constant: c,
            harmonics: Vec::new(),
        }
    }

    /// Build from parallel cosine/sine coefficient lists (order 1, 2, ...).
    pub fn from_coeffs(constant: S, cos: &[S], sin: &[S]) -> Self {
        let n = cos.len().max(sin.len());
        let harmonics = (0..n)
            .map(|k| Harmonic {
                cos: cos.get(k).cloned().unwrap_or_else(S::zero),
                sin: sin.get(k).cloned().unwrap_or_else(S::zero),
            })
            .collect();
        Self::new(constant, harmonics)
    }

    fn trim(&mut self) {
        while self
            .harmonics
            .last()
            .is_some_and(|h| h.cos.is_zero() && h.sin.is_zero())
        {
            self.harmonics.pop();
        }
    }

    pub fn constant_part(&self) -> &S {
        &self.constant
    }

    pub fn harmonics(&self) -> &[Harmonic<S>] {
        &self.harmonics
    }

    /// Number of harmonic orders carried (after trimming).
    pub fn harmonic_degree(&self) -> usize {
        self.harmonics.len()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.harmonics.is_empty()
    }

    /// Mean over one period; harmonics integrate to zero.
    pub fn mean(&self) -> S {
        self.constant.clone()
    }

    pub fn neg(&self) -> Self {
        Self::new(
            -self.constant.clone(),
            self.harmonics
                .iter()
                .map(|h| Harmonic {
                    cos: -h.cos.clone(),
                    sin: -h.sin.clone(),
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.harmonics.len().max(other.harmonics.len());
        let harmonics = (0..n)
            .map(|k| {
                let a = self.harmonics.get(k);
                let b = other.harmonics.get(k);
                Harmonic {
                    cos: a.map_or_else(S::zero, |h| h.cos.clone())
                        + b.map_or_else(S::zero, |h| h.cos.clone()),
                    sin: a.map_or_else(S::zero, |h| h.sin.clone())
                        + b.map_or_else(S::zero, |h| h.sin.clone()),
                }
            })
            .collect();
        Self::new(self.constant.clone() + other.constant.clone(), harmonics)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(
            self.constant.clone() * k.clone(),
            self.harmonics
                .iter()
                .map(|h| Harmonic {
                    cos: h.cos.clone() * k.clone(),
                    sin: h.sin.clone() * k.clone(),
                })
                .collect(),
        )
    }

    /// Product, re-expanded into harmonics by the product-to-sum identities.
    pub fn mul(&self, other: &Self) -> Self {
        let deg = self.harmonics.len() + other.harmonics.len();
        let mut constant = self.constant.clone() * other.constant.clone();
        let mut cos_acc = vec![S::zero(); deg];
        let mut sin_acc = vec![S::zero(); deg];
        let half = S::one() / S::from_int(2);

        let add_cos = |acc_const: &mut S, acc: &mut [S], k: i64, v: S| {
            if v.is_zero() {
                return;
            }
            let k = k.abs(); // cos is even
            if k == 0 {
                *acc_const = acc_const.clone() + v;
            } else {
                let i = (k - 1) as usize;
                acc[i] = acc[i].clone() + v;
            }
        };
        let add_sin = |acc: &mut [S], k: i64, v: S| {
            if v.is_zero() || k == 0 {
                return; // sin(0) = 0
            }
            let (k, v) = if k < 0 { (-k, -v) } else { (k, v) }; // sin is odd
            let i = (k - 1) as usize;
            acc[i] = acc[i].clone() + v;
        };

        // constant × harmonics
        for (k, h) in other.harmonics.iter().enumerate() {
            add_cos(
                &mut constant,
                &mut cos_acc,
                (k + 1) as i64,
                self.constant.clone() * h.cos.clone(),
            );
            add_sin(&mut sin_acc, (k + 1) as i64, self.constant.clone() * h.sin.clone());
        }
        for (k, h) in self.harmonics.iter().enumerate() {
            add_cos(
                &mut constant,
                &mut cos_acc,
                (k + 1) as i64,
                other.constant.clone() * h.cos.clone(),
            );
            add_sin(&mut sin_acc, (k + 1) as i64, other.constant.clone() * h.sin.clone());
        }
        // harmonic × harmonic
        for (j0, a) in self.harmonics.iter().enumerate() {
            let j = (j0 + 1) as i64;
            for (k0, b) in other.harmonics.iter().enumerate() {
                let k = (k0 + 1) as i64;
                let (diff, sum) = (j - k, j + k);
                // cos j · cos k = ½cos(j-k) + ½cos(j+k)
                let cc = a.cos.clone() * b.cos.clone() * half.clone();
                add_cos(&mut constant, &mut cos_acc, diff, cc.clone());
                add_cos(&mut constant, &mut cos_acc, sum, cc);
                // sin j · sin k = ½cos(j-k) - ½cos(j+k)
                let ss = a.sin.clone() * b.sin.clone() * half.clone();
                add_cos(&mut constant, &mut cos_acc, diff, ss.clone());
                add_cos(&mut constant, &mut cos_acc, sum, -ss);
                // sin j · cos k = ½sin(j+k) + ½sin(j-k)
                let sc = a.sin.clone() * b.cos.clone() * half.clone();
                add_sin(&mut sin_acc, sum, sc.clone());
                add_sin(&mut sin_acc, diff, sc);
                // cos j · sin k = ½sin(j+k) - ½sin(j-k)
                let cs = a.cos.clone() * b.sin.clone() * half.clone();
                add_sin(&mut sin_acc, sum, cs.clone());
                add_sin(&mut sin_acc, diff, -cs);
            }
        }
        let harmonics = cos_acc
            .into_iter()
            .zip(sin_acc)
            .map(|(cos, sin)| Harmonic { cos, sin })
            .collect();
        Self::new(constant, harmonics)
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::constant(S::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at `t`; time is reduced modulo the period first.
    pub fn eval(&self, t: f64) -> f64 {
        let u = t - t.floor();
        let mut acc = self.constant.to_f64();
        if self.harmonics.is_empty() {
            return acc;
        }
        let (s1, c1) = (TAU * u).sin_cos();
        let (mut sk, mut ck) = (s1, c1);
        for (k, h) in self.harmonics.iter().enumerate() {
            if k > 0 {
                let s = sk * c1 + ck * s1;
                let c = ck * c1 - sk * s1;
                sk = s;
                ck = c;
            }
            acc += h.cos.to_f64() * ck + h.sin.to_f64() * sk;
        }
        acc
    }

    /// `|constant| + Σ (|cosₖ| + |sinₖ|)`, a bound on `|value(t)|`.
    pub fn amplitude_bound(&self) -> S {
        let mut b = Scalar::abs(&self.constant);
        for h in &self.harmonics {
            b = b + Scalar::abs(&h.cos) + Scalar::abs(&h.sin);
        }
        b
    }

    /// `2π Σ k(|cosₖ| + |sinₖ|)`, a bound on `|d/dt value(t)|`.
    pub fn derivative_bound(&self) -> f64 {
        let mut b = 0.0;
        for (k, h) in self.harmonics.iter().enumerate() {
            b += (k + 1) as f64 * (h.cos.to_f64().abs() + h.sin.to_f64().abs());
        }
        TAU * b
    }

    /// Explicit conversion of the coefficients to doubles.
    pub fn to_f64(&self) -> TrigPoly<f64> {
        TrigPoly::new(
            self.constant.to_f64(),
            self.harmonics
                .iter()
                .map(|h| Harmonic {
                    cos: h.cos.to_f64(),
                    sin: h.sin.to_f64(),
                })
                .collect(),
        )
    }
}

impl TrigPoly<f64> {
    /// Analytic time derivative (picks up 2πk factors, hence float-only).
    pub fn derivative(&self) -> TrigPoly<f64> {
        let harmonics = self
            .harmonics
            .iter()
            .enumerate()
            .map(|(k0, h)| {
                let w = TAU * (k0 + 1) as f64;
                Harmonic {
                    cos: w * h.sin,
                    sin: -w * h.cos,
                }
            })
            .collect();
        TrigPoly::new(0.0, harmonics)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn rtp(c: (i64, i64), cos: &[(i64, i64)], sin: &[(i64, i64)]) -> TrigPoly<Rat> {
        TrigPoly::from_coeffs(
            rat(c.0, c.1),
            &cos.iter().map(|(n, d)| rat(*n, *d)).collect::<Vec<_>>(),
            &sin.iter().map(|(n, d)| rat(*n, *d)).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn periodicity_is_structural() {
        let tp = TrigPoly::from_coeffs(0.5, &[1.0, -0.25], &[2.0, 0.125]);
        assert_eq!(tp.eval(0.0), tp.eval(1.0));
        assert_eq!(tp.eval(0.25), tp.eval(1.25));
    }

    #[test]
    fn product_matches_pointwise_values() {
        let a = rtp((1, 2), &[(2, 1), (0, 1)], &[(1, 3), (1, 1)]);
        let b = rtp((-1, 1), &[(1, 4)], &[(3, 1)]);
        let prod = a.mul(&b);
        let (af, bf, pf) = (a.to_f64(), b.to_f64(), prod.to_f64());
        for i in 0..200 {
            let t = i as f64 / 200.0;
            let want = af.eval(t) * bf.eval(t);
            assert!((pf.eval(t) - want).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn square_of_cos_halves_exactly() {
        // cos² = 1/2 + 1/2 cos(4πt)
        let c = rtp((0, 1), &[(1, 1)], &[]);
        let sq = c.mul(&c);
        assert_eq!(sq.constant_part(), &rat(1, 2));
        assert_eq!(sq.harmonics().len(), 2);
        assert_eq!(sq.harmonics()[1].cos, rat(1, 2));
        assert!(num_traits::Zero::is_zero(&sq.harmonics()[0].cos));
    }

    #[test]
    fn bounds_hold_on_grid() {
        let tp = TrigPoly::from_coeffs(0.3, &[1.5, -0.2], &[0.7, 0.4]);
        let amp = tp.amplitude_bound();
        let der = tp.derivative();
        let der_bound = tp.derivative_bound();
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            assert!(tp.eval(t).abs() <= amp + 1e-12);
            assert!(der.eval(t).abs() <= der_bound + 1e-9);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let tp = TrigPoly::from_coeffs(0.0, &[1.0, 0.5], &[-0.3, 0.2]);
        let der = tp.derivative();
        let h = 1e-6;
        for i in 1..100 {
            let t = i as f64 / 101.0;
            let fd = (tp.eval(t + h) - tp.eval(t - h)) / (2.0 * h);
            assert!((der.eval(t) - fd).abs() < 1e-5);
        }
    }

    #[test]
    fn mean_is_constant_term() {
        let tp = rtp((7, 3), &[(5, 1)], &[(2, 1)]);
        assert_eq!(tp.mean(), rat(7, 3));
    }
}
