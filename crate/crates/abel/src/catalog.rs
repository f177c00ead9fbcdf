//! Worked equations used across the examples, the tests and the built-in
//! regression suite. All coefficients are exact rationals; convert with
//! `.to_f64()` where the flow layer needs doubles.

use crate::equation::{AbelEquation, CurveFamily};
use crate::scalar::{rat, Rat};
use crate::trig::TrigPoly;

fn c(n: i64) -> TrigPoly<Rat> {
    TrigPoly::constant(rat(n, 1))
}

/// `a + b·cos(2πt)`.
fn lin(a: i64, b: i64) -> TrigPoly<Rat> {
    TrigPoly::from_coeffs(rat(a, 1), &[rat(b, 1)], &[rat(0, 1)])
}

/// `ẋ = x⁴ + x³ − 13x² − x + 12`. Autonomous quartic whose four equilibria
/// `−4, −1, 1, 3` realize the degree-four bound exactly.
pub fn reachable_bound_quartic() -> AbelEquation<Rat> {
    AbelEquation::new(vec![c(12), c(-1), c(-13), c(1), c(1)]).unwrap()
}

/// `ẋ = (1+5cos)x³ − 15cos·x² − (4+5cos)x + 15cos`: a cubic in which every
/// coefficient changes sign, certified on the lines `x = −1, 1, 3`.
pub fn sign_changing_cubic() -> AbelEquation<Rat> {
    AbelEquation::new(vec![lin(0, 15), lin(-4, -5), lin(0, -15), lin(1, 5)]).unwrap()
}

/// `ẋ = (3+5c)x⁴ − (15+17c)x³ − 2(3+10c)x² + (45+47c)x + 6(3+5c)` with
/// `c = cos(2πt)`: a quartic with degree-one trigonometric coefficients and
/// no coefficient of fixed sign; the algebraic zero criterion applies.
pub fn sign_changing_quartic() -> AbelEquation<Rat> {
    AbelEquation::new(vec![
        lin(18, 30),
        lin(45, 47),
        lin(-6, -20),
        lin(-15, -17),
        lin(3, 5),
    ])
    .unwrap()
}

/// Cubic certified through the curve family `γ_λ(t) = (t, λ·(3+cos 2πt))`:
/// `ẋ = cos·x³ + (2+9cos+3cos²)x² − (36cos+24cos²+4cos³)x − 1`,
/// with the squares and cubes re-expanded into harmonics.
pub fn curve_family_cubic_exact() -> (AbelEquation<Rat>, CurveFamily<Rat>) {
    let zero3 = [rat(0, 1), rat(0, 1), rat(0, 1)];
    let a0 = c(-1);
    let a1 = TrigPoly::from_coeffs(
        rat(-12, 1),
        &[rat(-39, 1), rat(-12, 1), rat(-1, 1)],
        &zero3,
    );
    let a2 = TrigPoly::from_coeffs(rat(7, 2), &[rat(9, 1), rat(3, 2)], &zero3[..2]);
    let a3 = TrigPoly::from_coeffs(rat(0, 1), &[rat(1, 1)], &zero3[..1]);
    let eq = AbelEquation::new(vec![a0, a1, a2, a3]).unwrap();
    let curves = CurveFamily::new(
        TrigPoly::from_coeffs(rat(3, 1), &[rat(1, 1)], &zero3[..1]),
        TrigPoly::zero(),
    );
    (eq, curves)
}

/// Float view of [`curve_family_cubic_exact`].
pub fn curve_family_cubic() -> (AbelEquation<f64>, CurveFamily<f64>) {
    let (eq, curves) = curve_family_cubic_exact();
    (eq.to_f64(), curves.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::ScalarOde;

    #[test]
    fn curve_family_cubic_matches_raw_formula() {
        let (eq, _) = curve_family_cubic();
        for i in 0..40 {
            let t = i as f64 / 40.0;
            let co = (std::f64::consts::TAU * t).cos();
            for x in [-4.0, -0.5, 0.0, 1.0, 2.5] {
                let want = co * f64::powi(x, 3) + (2.0 + 9.0 * co + 3.0 * co * co) * x * x
                    - (36.0 * co + 24.0 * co * co + 4.0 * f64::powi(co, 3)) * x
                    - 1.0;
                assert!((eq.value(x, t) - want).abs() < 1e-11, "x={x} t={t}");
            }
        }
    }

    #[test]
    fn quartic_equilibria() {
        let eq = reachable_bound_quartic().to_f64();
        for r in [-4.0, -1.0, 1.0, 3.0] {
            assert_eq!(eq.value(r, 0.37), 0.0);
        }
    }
}
