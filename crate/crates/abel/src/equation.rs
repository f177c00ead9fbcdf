//! The equation model: `ẋ = S(x,t) = Σᵢ aᵢ(t)·xⁱ` with trigonometric-
//! polynomial coefficients, its x-partials, the reduction to the
//! `f_a + f_b·cos + f_c·sin` form for degree-one coefficients, and the affine
//! change of variables `y = (x - b(t))/a(t)` along a curve family.

use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::sign::certify_positive;
use crate::trig::TrigPoly;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquationError {
    #[error("expected {expected} coefficient records for degree {degree}, got {got}")]
    CoefficientArity {
        degree: usize,
        expected: usize,
        got: usize,
    },
    #[error("degree must be at least 1")]
    DegreeZero,
    #[error(
        "leading coefficient a_{degree}(t) is identically zero; the stated degree is overstated"
    )]
    LeadingCoefficientZero { degree: usize },
    #[error("coefficient a_{index}(t) has harmonic degree {got}, expected at most {max}")]
    HarmonicDegreeTooHigh { index: usize, got: usize, max: usize },
    #[error("positivity of the curve-family scale a(t) could not be certified")]
    PositivityNotCertified,
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

/// `S(x,t) = Σᵢ aᵢ(t)·xⁱ`: degree `m` plus `m+1` trigonometric-polynomial
/// coefficients. The identically-zero equation is allowed as a distinguished
/// degenerate value; any other equation must have a nonzero leading
/// coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelEquation<S> {
    degree: usize,
    coefficients: Vec<TrigPoly<S>>,
}

impl<S: Scalar> AbelEquation<S> {
    /// Build from coefficients `[a₀, a₁, ..., a_m]`.
    pub fn new(coefficients: Vec<TrigPoly<S>>) -> Result<Self, EquationError> {
        if coefficients.len() < 2 {
            return Err(EquationError::DegreeZero);
        }
        let degree = coefficients.len() - 1;
        let all_zero = coefficients.iter().all(|c| c.is_zero());
        if !all_zero && coefficients[degree].is_zero() {
            return Err(EquationError::LeadingCoefficientZero { degree });
        }
        Ok(Self {
            degree,
            coefficients,
        })
    }

    /// The identically-zero right-hand side, carried with the given arity.
    pub fn zero(degree: usize) -> Self {
        Self {
            degree: degree.max(1),
            coefficients: vec![TrigPoly::zero(); degree.max(1) + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[TrigPoly<S>] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> &TrigPoly<S> {
        &self.coefficients[i]
    }

    pub fn leading(&self) -> &TrigPoly<S> {
        &self.coefficients[self.degree]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    pub fn max_harmonic_degree(&self) -> usize {
        self.coefficients
            .iter()
            .map(|c| c.harmonic_degree())
            .max()
            .unwrap_or(0)
    }

    /// The line restriction `t ↦ S(λ, t)` as a trig polynomial (exact in `S`).
    pub fn node_function(&self, lambda: &S) -> TrigPoly<S> {
        let mut acc = TrigPoly::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc.scale(lambda).add(c);
        }
        acc
    }

    /// Per-harmonic component polynomials in `x`: the constant component and
    /// one `(cos_k, sin_k)` pair per harmonic order.
    #[allow(clippy::type_complexity)]
    pub fn component_polynomials(&self) -> (Polynomial<S>, Vec<(Polynomial<S>, Polynomial<S>)>) {
        let kmax = self.max_harmonic_degree();
        let constant = Polynomial::new(
            self.coefficients
                .iter()
                .map(|c| c.constant_part().clone())
                .collect(),
        );
        let pairs = (0..kmax)
            .map(|k| {
                let cos = Polynomial::new(
                    self.coefficients
                        .iter()
                        .map(|c| {
                            c.harmonics()
                                .get(k)
                                .map_or_else(S::zero, |h| h.cos.clone())
                        })
                        .collect(),
                );
                let sin = Polynomial::new(
                    self.coefficients
                        .iter()
                        .map(|c| {
                            c.harmonics()
                                .get(k)
                                .map_or_else(S::zero, |h| h.sin.clone())
                        })
                        .collect(),
                );
                (cos, sin)
            })
            .collect();
        (constant, pairs)
    }

    /// Reduce a degree-one-harmonic equation to `(f_a, f_b, f_c)` with
    /// `S(x,t) = f_a(x) + f_b(x)·cos(2πt) + f_c(x)·sin(2πt)`.
    #[allow(clippy::type_complexity)]
    pub fn trig_reduce(
        &self,
    ) -> Result<(Polynomial<S>, Polynomial<S>, Polynomial<S>), EquationError> {
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.harmonic_degree() > 1 {
                return Err(EquationError::HarmonicDegreeTooHigh {
                    index: i,
                    got: c.harmonic_degree(),
                    max: 1,
                });
            }
        }
        let (f_a, mut pairs) = self.component_polynomials();
        let (f_b, f_c) = if pairs.is_empty() {
            (Polynomial::zero(), Polynomial::zero())
        } else {
            pairs.remove(0)
        };
        Ok((f_a, f_b, f_c))
    }

    /// Explicit conversion of all coefficients to doubles.
    pub fn to_f64(&self) -> AbelEquation<f64> {
        AbelEquation {
            degree: self.degree,
            coefficients: self.coefficients.iter().map(|c| c.to_f64()).collect(),
        }
    }
}

/// Right-hand side of the scalar periodic ODE together with its first two
/// x-partials; what the flow layer integrates.
pub trait ScalarOde: Sync {
    /// `S(x, t)`.
    fn value(&self, x: f64, t: f64) -> f64;
    /// `∂S/∂x (x, t)`.
    fn dx(&self, x: f64, t: f64) -> f64;
    /// `∂²S/∂x² (x, t)`.
    fn dxx(&self, x: f64, t: f64) -> f64;
}

impl<T: ScalarOde> ScalarOde for &T {
    fn value(&self, x: f64, t: f64) -> f64 {
        (*self).value(x, t)
    }
    fn dx(&self, x: f64, t: f64) -> f64 {
        (*self).dx(x, t)
    }
    fn dxx(&self, x: f64, t: f64) -> f64 {
        (*self).dxx(x, t)
    }
}

impl AbelEquation<f64> {
    fn coeff_values(&self, t: f64, out: &mut [f64]) {
        for (i, c) in self.coefficients.iter().enumerate() {
            out[i] = c.eval(t);
        }
    }
}

impl ScalarOde for AbelEquation<f64> {
    fn value(&self, x: f64, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coefficients.iter().rev() {
            acc = acc * x + c.eval(t);
        }
        acc
    }

    fn dx(&self, x: f64, t: f64) -> f64 {
        let mut vals = [0.0; 64];
        let n = self.coefficients.len();
        self.coeff_values(t, &mut vals[..n]);
        let mut acc = 0.0;
        for i in (1..n).rev() {
            acc = acc * x + i as f64 * vals[i];
        }
        acc
    }

    fn dxx(&self, x: f64, t: f64) -> f64 {
        let mut vals = [0.0; 64];
        let n = self.coefficients.len();
        self.coeff_values(t, &mut vals[..n]);
        let mut acc = 0.0;
        for i in (2..n).rev() {
            acc = acc * x + (i * (i - 1)) as f64 * vals[i];
        }
        acc
    }
}

/// Curve family `γ_λ(t) = (t, λ·a(t) + b(t))` with `a(t) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamily<S> {
    pub a: TrigPoly<S>,
    pub b: TrigPoly<S>,
}

impl<S: Scalar> CurveFamily<S> {
    pub fn new(a: TrigPoly<S>, b: TrigPoly<S>) -> Self {
        Self { a, b }
    }

    /// The identity family `a ≡ 1, b ≡ 0` (no change of variables).
    pub fn identity() -> Self {
        Self {
            a: TrigPoly::constant(S::one()),
            b: TrigPoly::zero(),
        }
    }

    pub fn to_f64(&self) -> CurveFamily<f64> {
        CurveFamily {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
        }
    }
}

/// The transformed equation in quotient form: `S̃(y,t) = N(y,t) / a(t)` with
/// trig-polynomial numerator coefficients and the certified-positive scale
/// `a(t)` kept as a shared denominator. Sign analysis downstream works on the
/// numerator, which is exactly `a(t)·S̃(y,t)` — the curve determinant.
#[derive(Debug, Clone)]
pub struct TransformedEquation {
    numerator: AbelEquation<f64>,
    denominator: TrigPoly<f64>,
    denominator_lower_bound: f64,
}

impl TransformedEquation {
    /// Numerator as an equation in `y` (its node functions are the curve
    /// determinants `det(γ̇_λ, v_S)|_γ`).
    pub fn numerator(&self) -> &AbelEquation<f64> {
        &self.numerator
    }

    pub fn denominator(&self) -> &TrigPoly<f64> {
        &self.denominator
    }

    /// Certified lower bound for `a(t)` on the period.
    pub fn denominator_lower_bound(&self) -> f64 {
        self.denominator_lower_bound
    }

    /// `t ↦ a(t)·S̃(λ, t)`, the determinant restricted to the curve `γ_λ`.
    pub fn determinant_at(&self, lambda: f64) -> TrigPoly<f64> {
        let mut acc = TrigPoly::zero();
        for c in self.numerator.coefficients().iter().rev() {
            acc = acc.scale(&lambda).add(c);
        }
        acc
    }

    /// When the scale is constant the quotient collapses to a plain equation.
    pub fn into_plain(&self) -> Option<AbelEquation<f64>> {
        if self.denominator.harmonic_degree() > 0 {
            return None;
        }
        let inv = 1.0 / self.denominator.constant_part();
        let coeffs = self
            .numerator
            .coefficients()
            .iter()
            .map(|c| c.scale(&inv))
            .collect();
        AbelEquation::new(coeffs).ok()
    }
}

impl ScalarOde for TransformedEquation {
    fn value(&self, y: f64, t: f64) -> f64 {
        self.numerator.value(y, t) / self.denominator.eval(t)
    }
    fn dx(&self, y: f64, t: f64) -> f64 {
        self.numerator.dx(y, t) / self.denominator.eval(t)
    }
    fn dxx(&self, y: f64, t: f64) -> f64 {
        self.numerator.dxx(y, t) / self.denominator.eval(t)
    }
}

/// Apply `y = (x - b(t))/a(t)`:
/// `S̃(y,t) = (1/a)·(S(a·y + b, t) - ȧ·y - ḃ)`.
///
/// The numerator coefficients stay trigonometric polynomials (products are
/// re-expanded; `ȧ`, `ḃ` are analytic harmonic derivatives). Fails unless
/// the positivity of `a` is certified.
pub fn transform(
    eq: &AbelEquation<f64>,
    curves: &CurveFamily<f64>,
) -> Result<TransformedEquation, EquationError> {
    let lower = certify_positive(&curves.a).ok_or(EquationError::PositivityNotCertified)?;
    let m = eq.degree();
    let mut numer = vec![TrigPoly::zero(); m + 1];

    // binomial expansion of S(a·y + b, t) over the coefficient algebra
    let mut a_pows = Vec::with_capacity(m + 1);
    let mut b_pows = Vec::with_capacity(m + 1);
    a_pows.push(TrigPoly::constant(1.0));
    b_pows.push(TrigPoly::constant(1.0));
    for i in 1..=m {
        a_pows.push(a_pows[i - 1].mul(&curves.a));
        b_pows.push(b_pows[i - 1].mul(&curves.b));
    }
    let mut binom = vec![vec![0i64; m + 1]; m + 1];
    for j in 0..=m {
        binom[j][0] = 1;
        for i in 1..=j {
            binom[j][i] = binom[j - 1][i - 1] + if i <= j - 1 { binom[j - 1][i] } else { 0 };
        }
    }
    for (j, aj) in eq.coefficients().iter().enumerate() {
        if aj.is_zero() {
            continue;
        }
        for i in 0..=j {
            let term = aj
                .mul(&a_pows[i])
                .mul(&b_pows[j - i])
                .scale(&(binom[j][i] as f64));
            numer[i] = numer[i].add(&term);
        }
    }
    numer[1] = numer[1].sub(&curves.a.derivative());
    numer[0] = numer[0].sub(&curves.b.derivative());

    let numerator = AbelEquation::new(numer).map_err(|e| match e {
        // a_m·aᵐ cannot vanish for a > 0 unless the input was degenerate
        EquationError::LeadingCoefficientZero { degree } => {
            EquationError::LeadingCoefficientZero { degree }
        }
        other => other,
    })?;
    Ok(TransformedEquation {
        numerator,
        denominator: curves.a.clone(),
        denominator_lower_bound: lower,
    })
}

/// The determinant `det(γ̇_λ, v_S)|_{γ_λ} = a(t)·S̃(λ,t)` as a function of
/// `t`, together with the transformed equation it came from.
pub fn det_along_curve(
    eq: &AbelEquation<f64>,
    curves: &CurveFamily<f64>,
    lambda: f64,
) -> Result<TrigPoly<f64>, EquationError> {
    Ok(transform(eq, curves)?.determinant_at(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::rat;

    #[test]
    fn arity_and_leading_checks() {
        let c = TrigPoly::constant(1.0);
        assert!(matches!(
            AbelEquation::new(vec![c.clone()]),
            Err(EquationError::DegreeZero)
        ));
        assert!(matches!(
            AbelEquation::new(vec![c.clone(), TrigPoly::zero()]),
            Err(EquationError::LeadingCoefficientZero { degree: 1 })
        ));
        let zero = AbelEquation::<f64>::zero(2);
        assert!(zero.is_zero());
        assert_eq!(zero.value(2.0, 0.3), 0.0);
    }

    #[test]
    fn sign_changing_cubic_node_values() {
        let eq = catalog::sign_changing_cubic();
        let eqf = eq.to_f64();
        for t in [0.0, 0.21, 0.5, 0.93] {
            assert!((eqf.value(-1.0, t) - 3.0).abs() < 1e-12);
            assert!((eqf.value(3.0, t) - 15.0).abs() < 1e-12);
        }
        // exact node functions: constants 3, -3, 15
        assert_eq!(eq.node_function(&rat(-1, 1)), TrigPoly::constant(rat(3, 1)));
        assert_eq!(eq.node_function(&rat(1, 1)), TrigPoly::constant(rat(-3, 1)));
        assert_eq!(eq.node_function(&rat(3, 1)), TrigPoly::constant(rat(15, 1)));
    }

    #[test]
    fn partials_match_finite_differences() {
        let eq = catalog::reachable_bound_quartic().to_f64();
        assert_eq!(eq.dx(-4.0, 0.0), -105.0);
        let trig = catalog::sign_changing_quartic().to_f64();
        let h = 1e-6;
        for (x, t) in [(0.3, 0.1), (-1.7, 0.62), (2.4, 0.9)] {
            let fd = (trig.value(x + h, t) - trig.value(x - h, t)) / (2.0 * h);
            assert!((trig.dx(x, t) - fd).abs() < 1e-6);
            let fd2 = (trig.value(x + 1e-4, t) - 2.0 * trig.value(x, t)
                + trig.value(x - 1e-4, t))
                / 1e-8;
            assert!((trig.dxx(x, t) - fd2).abs() < 1e-4);
        }
    }

    #[test]
    fn periodicity_exact() {
        let eq = catalog::sign_changing_quartic().to_f64();
        for x in [-2.5, 0.0, 1.3, 4.2] {
            assert_eq!(eq.value(x, 0.0), eq.value(x, 1.0));
        }
    }

    #[test]
    fn trig_reduce_quartic() {
        let eq = catalog::sign_changing_quartic();
        let (fa, fb, fc) = eq.trig_reduce().unwrap();
        let want_fa = Polynomial::new(vec![
            rat(18, 1),
            rat(45, 1),
            rat(-6, 1),
            rat(-15, 1),
            rat(3, 1),
        ]);
        let want_fb = Polynomial::new(vec![
            rat(30, 1),
            rat(47, 1),
            rat(-20, 1),
            rat(-17, 1),
            rat(5, 1),
        ]);
        assert_eq!(fa, want_fa);
        assert_eq!(fb, want_fb);
        assert!(fc.is_zero());
    }

    #[test]
    fn trig_reduce_autonomous_and_reconstruction() {
        let eq = catalog::reachable_bound_quartic();
        let (fa, fb, fc) = eq.trig_reduce().unwrap();
        assert!(fb.is_zero() && fc.is_zero());
        assert_eq!(fa.eval(&rat(-2, 1)), rat(-30, 1));

        // reconstruction identity on a grid
        let eq = catalog::sign_changing_quartic();
        let (fa, fb, fc) = eq.trig_reduce().unwrap();
        let (fa, fb, fc) = (fa.map(|c| c.to_f64()), fb.map(|c| c.to_f64()), fc.map(|c| c.to_f64()));
        let eqf = eq.to_f64();
        for i in 0..40 {
            let x = -3.0 + i as f64 * 0.2;
            for j in 0..25 {
                let t = j as f64 / 25.0;
                let rebuilt = fa.eval(&x)
                    + fb.eval(&x) * (std::f64::consts::TAU * t).cos()
                    + fc.eval(&x) * (std::f64::consts::TAU * t).sin();
                assert!((rebuilt - eqf.value(x, t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn trig_reduce_rejects_high_harmonics() {
        let (eq, _) = catalog::curve_family_cubic();
        assert!(matches!(
            eq.trig_reduce(),
            Err(EquationError::HarmonicDegreeTooHigh { .. })
        ));
    }

    #[test]
    fn identity_transform_is_exact() {
        let eq = catalog::sign_changing_quartic().to_f64();
        let tr = transform(&eq, &CurveFamily::identity()).unwrap();
        assert!(tr.into_plain().is_some());
        for (x, t) in [(0.0, 0.0), (1.5, 0.3), (-2.0, 0.77)] {
            assert_eq!(tr.value(x, t), eq.value(x, t));
        }
    }

    #[test]
    fn transform_pointwise_contract() {
        let (eq, curves) = catalog::curve_family_cubic();
        let tr = transform(&eq, &curves).unwrap();
        let da = curves.a.derivative();
        let db = curves.b.derivative();
        for i in 0..50 {
            let y = -5.0 + i as f64 * 0.2;
            for j in 0..50 {
                let t = j as f64 / 50.0;
                let a = curves.a.eval(t);
                let want = (eq.value(a * y + curves.b.eval(t), t) - da.eval(t) * y - db.eval(t))
                    / a;
                assert!(
                    (tr.value(y, t) - want).abs() < 1e-10,
                    "y={y} t={t}: {} vs {want}",
                    tr.value(y, t)
                );
            }
        }
    }

    #[test]
    fn determinant_along_curves() {
        let (eq, curves) = catalog::curve_family_cubic();
        // λ = 0: constantly -1
        let d0 = det_along_curve(&eq, &curves, 0.0).unwrap();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert!((d0.eval(t) + 1.0).abs() < 1e-10);
        }
        // λ = -4: 32(3+cos)² - 8π sin - 1; λ = 1: 2(3+cos)² + 2π sin - 1
        let dm4 = det_along_curve(&eq, &curves, -4.0).unwrap();
        let d1 = det_along_curve(&eq, &curves, 1.0).unwrap();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let a = 3.0 + (std::f64::consts::TAU * t).cos();
            let s = (std::f64::consts::TAU * t).sin();
            let want_m4 = 32.0 * a * a - 8.0 * std::f64::consts::PI * s - 1.0;
            let want_1 = 2.0 * a * a + 2.0 * std::f64::consts::PI * s - 1.0;
            assert!((dm4.eval(t) - want_m4).abs() < 1e-9);
            assert!((d1.eval(t) - want_1).abs() < 1e-9);
            assert!(dm4.eval(t) > 0.0);
            assert!(d1.eval(t) > 0.0);
        }
        // identity family: determinant coincides with S itself
        let eqq = catalog::sign_changing_quartic().to_f64();
        let det = det_along_curve(&eqq, &CurveFamily::identity(), 1.3).unwrap();
        for i in 0..=50 {
            let t = i as f64 / 50.0;
            assert!((det.eval(t) - eqq.value(1.3, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_requires_positive_scale() {
        let eq = catalog::reachable_bound_quartic().to_f64();
        let bad = CurveFamily::new(TrigPoly::from_coeffs(1.0, &[2.0], &[0.0]), TrigPoly::zero());
        assert!(matches!(
            transform(&eq, &bad),
            Err(EquationError::PositivityNotCertified)
        ));
    }
}
