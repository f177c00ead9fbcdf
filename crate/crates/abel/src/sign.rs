//! Rigorous sign decisions for trigonometric polynomials on one period.
//!
//! Two routes. Harmonic degree ≤ 1 reduces to the amplitude inequality
//! `A² ≥ B² + C²` for `A + B·cos(2πt) + C·sin(2πt)`, decided exactly over
//! rationals and with a small relative slack over floats. Higher degrees are
//! handled by a 4096-point grid combined with the Lipschitz bound on the
//! derivative, so the certified margin survives between grid points.

use crate::scalar::Scalar;
use crate::trig::TrigPoly;
use serde::{Deserialize, Serialize};

/// Certified sign class of a trig polynomial over a full period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Nonneg,
    Nonpos,
    ZeroIdentically,
}

impl SignClass {
    /// -1, 0, +1 view; `ZeroIdentically` maps to 0.
    pub fn as_int(self) -> i8 {
        match self {
            SignClass::Nonneg => 1,
            SignClass::Nonpos => -1,
            SignClass::ZeroIdentically => 0,
        }
    }
}

/// Which certification route produced a [`SignDecision`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMethod {
    ExactAmplitude,
    GridLipschitz,
}

/// Witness values for the amplitude route: `(A², B² + C²)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeWitness {
    pub a_squared: f64,
    pub bc_squared: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_squared_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bc_squared_exact: Option<String>,
}

/// A successful sign certification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignDecision {
    pub class: SignClass,
    pub method: SignMethod,
    /// Worst-case certified distance from zero (0 for touching cases).
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AmplitudeWitness>,
}

/// Why a sign certification failed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignFailure {
    /// The function provably takes both signs; `(t1, v1)` positive sample,
    /// `(t2, v2)` negative sample.
    SignChange { t1: f64, v1: f64, t2: f64, v2: f64 },
    /// One sign on the grid, but the Lipschitz slack swallows the margin.
    MarginTooSmall { t_min: f64, min_abs: f64, slack: f64 },
}

const GRID_POINTS: usize = 4096;
const FLOAT_AMPLITUDE_SLACK: f64 = 1e-9;

/// Decide the sign of `tp` over `[0, 1]`.
///
/// Exact for rational scalars with harmonic degree ≤ 1; otherwise certified
/// in floating point (grid + Lipschitz). Identically-zero inputs certify as
/// [`SignClass::ZeroIdentically`].
pub fn decide_sign<S: Scalar>(tp: &TrigPoly<S>) -> Result<SignDecision, SignFailure> {
    if tp.is_zero() {
        return Ok(SignDecision {
            class: SignClass::ZeroIdentically,
            method: SignMethod::ExactAmplitude,
            margin: 0.0,
            witness: None,
        });
    }
    if tp.harmonic_degree() <= 1 {
        decide_amplitude(tp)
    } else {
        decide_grid(&tp.to_f64())
    }
}

fn decide_amplitude<S: Scalar>(tp: &TrigPoly<S>) -> Result<SignDecision, SignFailure> {
    let a = tp.constant_part().clone();
    let (b, c) = match tp.harmonics().first() {
        Some(h) => (h.cos.clone(), h.sin.clone()),
        None => (S::zero(), S::zero()),
    };
    let a_sq = a.clone() * a.clone();
    let bc_sq = b.clone() * b.clone() + c.clone() * c.clone();
    let a_sq_f = a_sq.to_f64();
    let bc_sq_f = bc_sq.to_f64();
    let witness = Some(AmplitudeWitness {
        a_squared: a_sq_f,
        bc_squared: bc_sq_f,
        a_squared_exact: S::EXACT.then(|| a_sq.to_string()),
        bc_squared_exact: S::EXACT.then(|| bc_sq.to_string()),
    });
    let definite = if S::EXACT {
        a_sq >= bc_sq
    } else {
        let scale = a_sq_f.max(bc_sq_f).max(1.0);
        a_sq_f - bc_sq_f >= -FLOAT_AMPLITUDE_SLACK * scale
    };
    let margin = (a.to_f64().abs() - bc_sq_f.max(0.0).sqrt()).max(0.0);
    if definite && a.signum_int() != 0 {
        let class = if a.signum_int() > 0 {
            SignClass::Nonneg
        } else {
            SignClass::Nonpos
        };
        return Ok(SignDecision {
            class,
            method: SignMethod::ExactAmplitude,
            margin,
            witness,
        });
    }
    // |A| < sqrt(B²+C²) (or A = 0 with nonzero harmonics): both signs occur.
    // The extrema of B·cos θ + C·sin θ sit at θ* = atan2(C, B) and θ* + π.
    let theta = c.to_f64().atan2(b.to_f64());
    let norm = |t: f64| t - t.floor();
    let t_max = norm(theta / std::f64::consts::TAU);
    let t_min = norm(t_max + 0.5);
    let f = tp.to_f64();
    let (v_max, v_min) = (f.eval(t_max), f.eval(t_min));
    let (tp_, vp, tn, vn) = if v_max >= v_min {
        (t_max, v_max, t_min, v_min)
    } else {
        (t_min, v_min, t_max, v_max)
    };
    Err(SignFailure::SignChange {
        t1: tp_,
        v1: vp,
        t2: tn,
        v2: vn,
    })
}

fn decide_grid(tp: &TrigPoly<f64>) -> Result<SignDecision, SignFailure> {
    let step = 1.0 / GRID_POINTS as f64;
    let slack = tp.derivative_bound() * step / 2.0;
    let mut min_abs = f64::INFINITY;
    let mut t_min_abs = 0.0;
    let mut pos: Option<(f64, f64)> = None;
    let mut neg: Option<(f64, f64)> = None;
    for i in 0..GRID_POINTS {
        let t = i as f64 * step;
        let v = tp.eval(t);
        if v.abs() < min_abs {
            min_abs = v.abs();
            t_min_abs = t;
        }
        if v > 0.0 && pos.is_none() {
            pos = Some((t, v));
        }
        if v < 0.0 && neg.is_none() {
            neg = Some((t, v));
        }
        if let (Some(p), Some(n)) = (pos, neg) {
            return Err(SignFailure::SignChange {
                t1: p.0,
                v1: p.1,
                t2: n.0,
                v2: n.1,
            });
        }
    }
    if min_abs > slack {
        let class = if pos.is_some() {
            SignClass::Nonneg
        } else {
            SignClass::Nonpos
        };
        Ok(SignDecision {
            class,
            method: SignMethod::GridLipschitz,
            margin: min_abs - slack,
            witness: None,
        })
    } else {
        Err(SignFailure::MarginTooSmall {
            t_min: t_min_abs,
            min_abs,
            slack,
        })
    }
}

/// Certified strict positivity: `Some(lower_bound)` with a positive bound on
/// `min_t tp(t)`, or `None` when positivity cannot be certified.
pub fn certify_positive<S: Scalar>(tp: &TrigPoly<S>) -> Option<f64> {
    // amplitude route first: constant minus total harmonic amplitude
    let c = tp.constant_part().to_f64();
    let amp = tp.amplitude_bound().to_f64() - c.abs();
    if c > 0.0 && c - amp > 0.0 {
        return Some(c - amp);
    }
    match decide_grid(&tp.to_f64()) {
        Ok(d) if d.class == SignClass::Nonneg && d.margin > 0.0 => Some(d.margin),
        _ => None,
    }
}
