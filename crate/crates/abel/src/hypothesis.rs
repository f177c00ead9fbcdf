//! Certification of the alternating sign hypotheses and the Lagrange
//! interpolation decomposition.
//!
//! Three certificates are produced here. The line hypothesis asks for nodes
//! `λ₁ < … < λ_m` on which `(−1)ⁱ·S(λᵢ,t)` keeps one sign; the algebraic
//! criterion for degree-one trigonometric coefficients reads the same
//! pattern off the zeros of `f_a² − f_b² − f_c²`; and the geometric variant
//! replaces lines by the curves `γ_λ = (t, λa(t)+b(t))`, certifying the
//! determinant `det(γ̇_λ, v_S)|_γ = a(t)·S̃(λ,t)` through the quotient-form
//! numerator of the transformed equation. A successful certificate bounds
//! the number of isolated periodic solutions by `m`.

use crate::equation::{transform, AbelEquation, CurveFamily, EquationError};
use crate::poly::{PolyError, Polynomial};
use crate::roots::{coeff_scale_at, exact_sign_at_root};
use crate::scalar::{Rat, Scalar};
use crate::sign::{decide_sign, AmplitudeWitness, SignClass, SignFailure, SignMethod};
use crate::trig::TrigPoly;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which hypothesis a certificate establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypothesisKind {
    #[serde(rename = "H")]
    Lines,
    #[serde(rename = "C")]
    AlgebraicCriterion,
    #[serde(rename = "Hprime")]
    Curves,
}

/// Global alternation pattern, named by the sign of the first node function.
///
/// `AlternatingStartNonneg` means `S(λ₁,·) ≥ 0, S(λ₂,·) ≤ 0, …`, i.e.
/// `(−1)ⁱ·S(λᵢ,t) ≤ 0` with 1-based `i`; `AlternatingStartNonpos` is the
/// mirrored pattern `(−1)ⁱ·S(λᵢ,t) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    AlternatingStartNonneg,
    AlternatingStartNonpos,
}

impl Pattern {
    /// Expected sign (+1 nonneg, -1 nonpos) at 0-based node index.
    pub fn expected_sign(self, index: usize) -> i8 {
        let first = match self {
            Pattern::AlternatingStartNonneg => 1,
            Pattern::AlternatingStartNonpos => -1,
        };
        if index % 2 == 0 {
            first
        } else {
            -first
        }
    }

    /// The common sign `σ` of `(−1)ⁱ·S(λᵢ,t)` (1-based `i`).
    pub fn sigma(self) -> i8 {
        match self {
            Pattern::AlternatingStartNonneg => -1,
            Pattern::AlternatingStartNonpos => 1,
        }
    }

    fn from_first_sign(index: usize, sign: i8) -> Pattern {
        debug_assert!(sign != 0);
        if Pattern::AlternatingStartNonneg.expected_sign(index) == sign {
            Pattern::AlternatingStartNonneg
        } else {
            Pattern::AlternatingStartNonpos
        }
    }
}

/// Per-node rigorous sign evidence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignEvidence {
    pub node: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_exact: Option<String>,
    pub sign: SignClass,
    pub method: SignMethod,
    /// Worst-case certified distance from zero (0 for touching cases).
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AmplitudeWitness>,
    /// Set when the node function is constant in `t`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_value_exact: Option<String>,
    /// Algebraic-criterion path: value of `f_a` at the node.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_a_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_a_value_exact: Option<String>,
    /// Multiplicity of the node as a zero of `f_a² − f_b² − f_c²`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_multiplicity: Option<usize>,
}

/// Serializable snapshot of a curve family (for geometric certificates).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSummary {
    pub a_constant: f64,
    pub a_cos: Vec<f64>,
    pub a_sin: Vec<f64>,
    pub b_constant: f64,
    pub b_cos: Vec<f64>,
    pub b_sin: Vec<f64>,
}

impl CurveSummary {
    fn from_family(curves: &CurveFamily<f64>) -> Self {
        let split = |tp: &TrigPoly<f64>| {
            let cos = tp.harmonics().iter().map(|h| h.cos).collect();
            let sin = tp.harmonics().iter().map(|h| h.sin).collect();
            (*tp.constant_part(), cos, sin)
        };
        let (a_constant, a_cos, a_sin) = split(&curves.a);
        let (b_constant, b_cos, b_sin) = split(&curves.b);
        Self {
            a_constant,
            a_cos,
            a_sin,
            b_constant,
            b_cos,
            b_sin,
        }
    }
}

/// One admissible node choice reported by the algebraic criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeChoice {
    pub nodes: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_exact: Option<Vec<String>>,
    pub f_a_values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_a_values_exact: Option<Vec<String>>,
    pub pattern: Pattern,
    pub all_zero: bool,
}

/// A certified hypothesis: nodes, global pattern, per-node evidence and the
/// implied bound on isolated periodic solutions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisCertificate {
    pub kind: HypothesisKind,
    pub nodes: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_exact: Option<Vec<String>>,
    pub pattern: Pattern,
    pub evidence: Vec<SignEvidence>,
    /// Upper bound on isolated periodic solutions (counted with
    /// multiplicity): the equation degree.
    pub bound: usize,
    pub all_nodes_identically_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<CurveSummary>,
    /// Algebraic-criterion path: every admissible alternating choice.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub admissible_alternatives: Vec<NodeChoice>,
}

impl HypothesisCertificate {
    /// Convenience view of the per-node constant values (when every node
    /// function is constant in `t`).
    pub fn constant_node_values(&self) -> Option<Vec<f64>> {
        self.evidence.iter().map(|e| e.constant_value).collect()
    }
}

/// Why a node could not be certified.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RefusalReason {
    /// The node function takes both signs; `(t1, v1)` positive sample,
    /// `(t2, v2)` negative sample.
    SignChange { t1: f64, v1: f64, t2: f64, v2: f64 },
    /// Single sign on the certification grid but margin below the Lipschitz
    /// slack.
    MarginTooSmall { t_min: f64, min_abs: f64, slack: f64 },
    /// Node certified individually but incompatible with the alternation
    /// pattern established by the preceding nodes.
    PatternBreak { expected: SignClass, found: SignClass },
}

/// Refusal value: the offending node plus the reason.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Refusal {
    pub node_index: usize,
    pub node: f64,
    pub reason: RefusalReason,
}

/// A zero of `f_a² − f_b² − f_c²` annotated with the sign of `f_a`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnotatedRoot {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub multiplicity: usize,
    pub f_a_sign: i8,
    pub f_a_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_a_value_exact: Option<String>,
    #[serde(skip)]
    pub(crate) exact_value: Option<Rat>,
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("expected {expected} nodes, got {got}")]
    WrongNodeCount { expected: usize, got: usize },
    #[error("nodes must be strictly increasing")]
    NodesNotIncreasing,
    #[error("hypothesis not certifiable at node index {} (λ = {})", .0.node_index, .0.node)]
    NotCertifiable(Refusal),
    #[error("no admissible alternating subsequence among {} annotated zeros", roots.len())]
    NoAdmissibleSubsequence { roots: Vec<AnnotatedRoot> },
    #[error("the identically-zero equation carries no canonical node choice")]
    ZeroEquation,
    #[error("f_a² − f_b² − f_c² vanishes identically; the zero criterion is degenerate")]
    DegenerateConditionPolynomial,
    #[error("evaluation point x = {x} coincides with node λ_{index}")]
    NodeEvaluation { index: usize, x: f64 },
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn validate_nodes<S: Scalar>(expected: usize, lambdas: &[S]) -> Result<(), CertifyError> {
    if lambdas.len() != expected {
        return Err(CertifyError::WrongNodeCount {
            expected,
            got: lambdas.len(),
        });
    }
    for pair in lambdas.windows(2) {
        if pair[0] >= pair[1] {
            return Err(CertifyError::NodesNotIncreasing);
        }
    }
    Ok(())
}

fn refusal_from_failure(index: usize, node: f64, failure: &SignFailure) -> Refusal {
    let reason = match failure {
        SignFailure::SignChange { t1, v1, t2, v2 } => RefusalReason::SignChange {
            t1: *t1,
            v1: *v1,
            t2: *t2,
            v2: *v2,
        },
        SignFailure::MarginTooSmall {
            t_min,
            min_abs,
            slack,
        } => RefusalReason::MarginTooSmall {
            t_min: *t_min,
            min_abs: *min_abs,
            slack: *slack,
        },
    };
    Refusal {
        node_index: index,
        node,
        reason,
    }
}

/// Shared certification core: per-node sign decisions (fanned out across
/// threads, merged in node order) followed by the alternation check.
fn certify_node_functions<S: Scalar>(
    kind: HypothesisKind,
    nodes: Vec<f64>,
    nodes_exact: Option<Vec<String>>,
    node_fns: &[TrigPoly<S>],
    bound: usize,
    curves: Option<CurveSummary>,
) -> Result<HypothesisCertificate, CertifyError> {
    let decisions: Vec<_> = node_fns.par_iter().map(decide_sign).collect();
    let mut resolved = Vec::with_capacity(decisions.len());
    for (i, d) in decisions.into_iter().enumerate() {
        match d {
            Ok(d) => resolved.push(d),
            Err(f) => {
                return Err(CertifyError::NotCertifiable(refusal_from_failure(
                    i, nodes[i], &f,
                )))
            }
        }
    }
    let mut pattern: Option<Pattern> = None;
    for (i, d) in resolved.iter().enumerate() {
        let s = d.class.as_int();
        if s == 0 {
            continue;
        }
        match pattern {
            None => pattern = Some(Pattern::from_first_sign(i, s)),
            Some(p) => {
                if p.expected_sign(i) != s {
                    let expected = if p.expected_sign(i) > 0 {
                        SignClass::Nonneg
                    } else {
                        SignClass::Nonpos
                    };
                    return Err(CertifyError::NotCertifiable(Refusal {
                        node_index: i,
                        node: nodes[i],
                        reason: RefusalReason::PatternBreak {
                            expected,
                            found: d.class,
                        },
                    }));
                }
            }
        }
    }
    let all_zero = pattern.is_none();
    let pattern = pattern.unwrap_or(Pattern::AlternatingStartNonneg);
    let evidence = nodes
        .iter()
        .zip(node_fns)
        .zip(&resolved)
        .enumerate()
        .map(|(i, ((node, f), d))| {
            let constant = (f.harmonic_degree() == 0).then(|| f.constant_part().clone());
            SignEvidence {
                node: *node,
                node_exact: nodes_exact.as_ref().map(|v| v[i].clone()),
                sign: d.class,
                method: d.method,
                margin: d.margin,
                witness: d.witness.clone(),
                constant_value: constant.as_ref().map(|c| c.to_f64()),
                constant_value_exact: constant
                    .as_ref()
                    .and_then(|c| S::EXACT.then(|| c.to_string())),
                f_a_value: None,
                f_a_value_exact: None,
                root_multiplicity: None,
            }
        })
        .collect();
    Ok(HypothesisCertificate {
        kind,
        nodes,
        nodes_exact,
        pattern,
        evidence,
        bound,
        all_nodes_identically_zero: all_zero,
        curves,
        admissible_alternatives: Vec::new(),
    })
}

/// Certify the line hypothesis for the given nodes. Exact when `S` is the
/// rational scalar and the node functions have harmonic degree ≤ 1.
pub fn certify_h<S: Scalar>(
    eq: &AbelEquation<S>,
    lambdas: &[S],
) -> Result<HypothesisCertificate, CertifyError> {
    validate_nodes(eq.degree(), lambdas)?;
    let node_fns: Vec<_> = lambdas.iter().map(|l| eq.node_function(l)).collect();
    let nodes: Vec<f64> = lambdas.iter().map(|l| l.to_f64()).collect();
    let nodes_exact = S::EXACT.then(|| lambdas.iter().map(|l| l.to_string()).collect());
    certify_node_functions(
        HypothesisKind::Lines,
        nodes,
        nodes_exact,
        &node_fns,
        eq.degree(),
        None,
    )
}

/// Certify the geometric hypothesis along the curve family: equivalent to
/// the line hypothesis for the transformed equation, decided on the
/// quotient-form numerator `a(t)·S̃(λ,t)`.
pub fn certify_h_prime(
    eq: &AbelEquation<f64>,
    curves: &CurveFamily<f64>,
    lambdas: &[f64],
) -> Result<HypothesisCertificate, CertifyError> {
    validate_nodes(eq.degree(), lambdas)?;
    let tr = transform(eq, curves)?;
    let node_fns: Vec<_> = lambdas.iter().map(|l| tr.determinant_at(*l)).collect();
    certify_node_functions(
        HypothesisKind::Curves,
        lambdas.to_vec(),
        None,
        &node_fns,
        eq.degree(),
        Some(CurveSummary::from_family(curves)),
    )
}

mod sealed {
    pub trait Sealed {}
    impl Sealed for f64 {}
    impl Sealed for crate::scalar::Rat {}
}

/// Scalars on which the algebraic zero criterion can be decided: exactly
/// over rationals, with relative tolerances over floats.
pub trait ConditionScalar: Scalar + sealed::Sealed {
    #[doc(hidden)]
    fn condition_roots(
        f_a: &Polynomial<Self>,
        f_b: &Polynomial<Self>,
        f_c: &Polynomial<Self>,
    ) -> Result<Vec<AnnotatedRoot>, CertifyError>;

    #[doc(hidden)]
    fn from_rat(r: &Rat) -> Self;
}

impl ConditionScalar for Rat {
    fn condition_roots(
        f_a: &Polynomial<Rat>,
        f_b: &Polynomial<Rat>,
        f_c: &Polynomial<Rat>,
    ) -> Result<Vec<AnnotatedRoot>, CertifyError> {
        let cap_f = f_a
            .mul(f_a)
            .sub(&f_b.mul(f_b))
            .sub(&f_c.mul(f_c));
        if cap_f.is_zero() {
            return Err(CertifyError::DegenerateConditionPolynomial);
        }
        let iso = cap_f.isolate_real_roots()?;
        let f_a_f = f_a.map(|c| c.to_f64());
        Ok(iso
            .roots
            .into_iter()
            .map(|root| {
                let (sign, exact_fa) = match &root.exact {
                    Some(r) => {
                        let v = f_a.eval(r);
                        (v.signum_int(), Some(v))
                    }
                    None => (exact_sign_at_root(&root, f_a), None),
                };
                let f_a_value = exact_fa
                    .as_ref()
                    .map_or_else(|| f_a_f.eval(&root.value), |v| v.to_f64());
                AnnotatedRoot {
                    value: root.value,
                    exact: root.exact.as_ref().map(|r| r.to_string()),
                    multiplicity: root.multiplicity,
                    f_a_sign: sign,
                    f_a_value,
                    f_a_value_exact: exact_fa.as_ref().map(|v| v.to_string()),
                    exact_value: root.exact,
                }
            })
            .collect())
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl ConditionScalar for f64 {
    fn condition_roots(
        f_a: &Polynomial<f64>,
        f_b: &Polynomial<f64>,
        f_c: &Polynomial<f64>,
    ) -> Result<Vec<AnnotatedRoot>, CertifyError> {
        let cap_f = f_a
            .mul(f_a)
            .sub(&f_b.mul(f_b))
            .sub(&f_c.mul(f_c));
        if cap_f.is_zero() {
            return Err(CertifyError::DegenerateConditionPolynomial);
        }
        let iso = cap_f.isolate_real_roots()?;
        Ok(iso
            .roots
            .into_iter()
            .map(|root| {
                let v = f_a.eval(&root.value);
                // treating a float root of F as a zero of f_a: 1e-9 relative
                let sign = if v.abs() <= 1e-9 * coeff_scale_at(f_a, root.value) {
                    0
                } else if v > 0.0 {
                    1
                } else {
                    -1
                };
                AnnotatedRoot {
                    value: root.value,
                    exact: None,
                    multiplicity: root.multiplicity,
                    f_a_sign: sign,
                    f_a_value: v,
                    f_a_value_exact: None,
                    exact_value: None,
                }
            })
            .collect())
    }

    fn from_rat(r: &Rat) -> Self {
        r.to_f64()
    }
}

/// Enumerate all admissible strictly-increasing length-`m` subsequences of
/// the annotated zeros (alternating `f_a` signs, zeros acting as wildcards),
/// in lexicographic index order. Capped generously; the zero count is at
/// most `2m` so this stays small for practical degrees.
fn admissible_subsequences(signs: &[i8], m: usize) -> Vec<Vec<usize>> {
    const CAP: usize = 10_000;
    fn rec(
        signs: &[i8],
        m: usize,
        sigma: i8,
        start: usize,
        choice: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= CAP {
            return;
        }
        if choice.len() == m {
            out.push(choice.clone());
            return;
        }
        let pos = choice.len() + 1; // 1-based position in the subsequence
        let want = sigma * if pos % 2 == 0 { 1 } else { -1 };
        let remaining = m - choice.len();
        if signs.len() + choice.len() < m {
            return;
        }
        let last = signs.len() - remaining;
        for idx in start..=last {
            if signs[idx] == 0 || signs[idx] == want {
                choice.push(idx);
                rec(signs, m, sigma, idx + 1, choice, out);
                choice.pop();
            }
        }
    }
    let mut out = Vec::new();
    for sigma in [1i8, -1] {
        let mut choice = Vec::with_capacity(m);
        rec(signs, m, sigma, 0, &mut choice, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn choice_pattern(signs: &[i8]) -> (Pattern, bool) {
    for (i, s) in signs.iter().enumerate() {
        if *s != 0 {
            return (Pattern::from_first_sign(i, *s), false);
        }
    }
    (Pattern::AlternatingStartNonneg, true)
}

/// Certify the algebraic zero criterion for an equation with degree-one
/// trigonometric coefficients. On success the certificate's primary node
/// choice is the lexicographically first admissible subsequence and every
/// other admissible choice is reported alongside.
pub fn certify_c<S: ConditionScalar>(
    eq: &AbelEquation<S>,
) -> Result<HypothesisCertificate, CertifyError> {
    if eq.is_zero() {
        return Err(CertifyError::ZeroEquation);
    }
    let (f_a, f_b, f_c) = eq.trig_reduce()?;
    let roots = S::condition_roots(&f_a, &f_b, &f_c)?;
    let m = eq.degree();
    let signs: Vec<i8> = roots.iter().map(|r| r.f_a_sign).collect();
    let subsequences = admissible_subsequences(&signs, m);
    if subsequences.is_empty() {
        return Err(CertifyError::NoAdmissibleSubsequence { roots });
    }

    let make_choice = |indices: &[usize]| -> NodeChoice {
        let picked: Vec<&AnnotatedRoot> = indices.iter().map(|i| &roots[*i]).collect();
        let picked_signs: Vec<i8> = picked.iter().map(|r| r.f_a_sign).collect();
        let (pattern, all_zero) = choice_pattern(&picked_signs);
        let nodes_exact: Option<Vec<String>> =
            picked.iter().map(|r| r.exact.clone()).collect();
        let f_a_values_exact: Option<Vec<String>> =
            picked.iter().map(|r| r.f_a_value_exact.clone()).collect();
        NodeChoice {
            nodes: picked.iter().map(|r| r.value).collect(),
            nodes_exact,
            f_a_values: picked.iter().map(|r| r.f_a_value).collect(),
            f_a_values_exact,
            pattern,
            all_zero,
        }
    };

    let choices: Vec<NodeChoice> = subsequences.iter().map(|s| make_choice(s)).collect();
    let primary_indices = &subsequences[0];
    let primary = &choices[0];

    let f_b_f = f_b.map(|c| c.to_f64());
    let f_c_f = f_c.map(|c| c.to_f64());
    let evidence = primary_indices
        .iter()
        .map(|&idx| {
            let root = &roots[idx];
            let sign = match root.f_a_sign {
                0 => SignClass::ZeroIdentically,
                s if s > 0 => SignClass::Nonneg,
                _ => SignClass::Nonpos,
            };
            let bc_sq = {
                let b = f_b_f.eval(&root.value);
                let c = f_c_f.eval(&root.value);
                b * b + c * c
            };
            // at a zero of F the amplitude inequality is tight by definition:
            // f_b² + f_c² = f_a² exactly, so both exact witnesses coincide
            let fa_sq_exact = root.exact_value.as_ref().map(|r| {
                let v = f_a.eval(&S::from_rat(r));
                (v.clone() * v).to_string()
            });
            SignEvidence {
                node: root.value,
                node_exact: root.exact.clone(),
                sign,
                method: SignMethod::ExactAmplitude,
                margin: 0.0,
                witness: Some(AmplitudeWitness {
                    a_squared: root.f_a_value * root.f_a_value,
                    bc_squared: bc_sq,
                    a_squared_exact: fa_sq_exact.clone(),
                    bc_squared_exact: fa_sq_exact,
                }),
                constant_value: (root.f_a_sign == 0).then_some(0.0),
                constant_value_exact: None,
                f_a_value: Some(root.f_a_value),
                f_a_value_exact: root.f_a_value_exact.clone(),
                root_multiplicity: Some(root.multiplicity),
            }
        })
        .collect();

    Ok(HypothesisCertificate {
        kind: HypothesisKind::AlgebraicCriterion,
        nodes: primary.nodes.clone(),
        nodes_exact: primary.nodes_exact.clone(),
        pattern: primary.pattern,
        evidence,
        bound: m,
        all_nodes_identically_zero: primary.all_zero,
        curves: None,
        admissible_alternatives: choices,
    })
}

/// Route taken by [`suggest_nodes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuggestionRoute {
    AlgebraicCriterion,
    GridScan,
}

/// A suggested admissible node sequence.
#[derive(Debug, Clone)]
pub struct SuggestedNodes {
    pub values: Vec<f64>,
    /// Exact values when the algebraic route produced rational zeros.
    pub exact: Option<Vec<Rat>>,
    pub route: SuggestionRoute,
}

/// Search for an admissible node sequence: the algebraic criterion when the
/// coefficients have harmonic degree ≤ 1, otherwise a grid scan over `x`
/// keeping rigorously sign-definite lines and extracting an alternating
/// subsequence. `None` is "no certificate found", never "hypothesis false".
pub fn suggest_nodes<S: ConditionScalar>(eq: &AbelEquation<S>) -> Option<SuggestedNodes> {
    if eq.is_zero() {
        return None;
    }
    if eq.max_harmonic_degree() <= 1 {
        if let Ok(cert) = certify_c(eq) {
            let exact: Option<Vec<Rat>> = cert
                .admissible_alternatives
                .first()
                .map(|_| ())
                .and_then(|_| {
                    cert.nodes_exact.as_ref().map(|strings| {
                        strings
                            .iter()
                            .map(|s| crate::scalar::parse_rational(s).expect("own serialization"))
                            .collect()
                    })
                });
            return Some(SuggestedNodes {
                values: cert.nodes.clone(),
                exact,
                route: SuggestionRoute::AlgebraicCriterion,
            });
        }
    }
    // grid scan over sign-definite lines
    let eqf = eq.to_f64();
    let m = eqf.degree();
    let mut radius: f64 = 1.0;
    for c in eqf.coefficients() {
        radius = radius.max(c.amplitude_bound());
    }
    let radius = (1.0 + radius).min(100.0);
    let n = 2001;
    let mut picks: Vec<f64> = Vec::new();
    let mut last_sign = 0i8;
    for i in 0..n {
        let x = -radius + 2.0 * radius * i as f64 / (n - 1) as f64;
        let line = eqf.node_function(&x);
        if let Ok(d) = decide_sign(&line) {
            let s = d.class.as_int();
            if s != 0 && s != last_sign {
                picks.push(x);
                last_sign = s;
            }
        }
    }
    if picks.len() < m {
        return None;
    }
    picks.truncate(m);
    // re-check through the certifier before suggesting
    certify_h(&eqf, &picks).ok().map(|_| SuggestedNodes {
        values: picks,
        exact: None,
        route: SuggestionRoute::GridScan,
    })
}

/// The Lagrange interpolation decomposition
/// `S(x,t) = (a_m(t) + Σ wᵢ(t)/(x−λᵢ))·f(x)` with
/// `f = ∏(x−λᵢ)` and `wᵢ(t) = S(λᵢ,t)/∏_{j≠i}(λᵢ−λⱼ)`.
#[derive(Debug, Clone)]
pub struct Decomposition<S> {
    pub lambdas: Vec<S>,
    pub f: Polynomial<S>,
    pub weights: Vec<TrigPoly<S>>,
    pub leading: TrigPoly<S>,
}

/// Build the decomposition of `eq` over the given nodes.
pub fn decompose<S: Scalar>(
    eq: &AbelEquation<S>,
    lambdas: &[S],
) -> Result<Decomposition<S>, CertifyError> {
    validate_nodes(eq.degree(), lambdas)?;
    let f = Polynomial::lagrange_node_product(lambdas)?;
    let weights = lambdas
        .iter()
        .enumerate()
        .map(|(i, li)| {
            let mut denom = S::one();
            for (j, lj) in lambdas.iter().enumerate() {
                if j != i {
                    denom = denom * (li.clone() - lj.clone());
                }
            }
            eq.node_function(li).scale(&(S::one() / denom))
        })
        .collect();
    Ok(Decomposition {
        lambdas: lambdas.to_vec(),
        f,
        weights,
        leading: eq.leading().clone(),
    })
}

impl<S: Scalar> Decomposition<S> {
    pub fn to_f64(&self) -> Decomposition<f64> {
        Decomposition {
            lambdas: self.lambdas.iter().map(|l| l.to_f64()).collect(),
            f: self.f.map(|c| c.to_f64()),
            weights: self.weights.iter().map(|w| w.to_f64()).collect(),
            leading: self.leading.to_f64(),
        }
    }
}

impl Decomposition<f64> {
    fn check_node(&self, x: f64) -> Result<(), CertifyError> {
        for (i, l) in self.lambdas.iter().enumerate() {
            if x == *l {
                return Err(CertifyError::NodeEvaluation { index: i, x });
            }
        }
        Ok(())
    }

    /// `I_S(x,t) = Σ wᵢ(t)/(x−λᵢ)²`; sign-definite under a certified
    /// hypothesis.
    pub fn eval_i_s(&self, x: f64, t: f64) -> Result<f64, CertifyError> {
        self.check_node(x)?;
        Ok(self
            .weights
            .iter()
            .zip(&self.lambdas)
            .map(|(w, l)| w.eval(t) / ((x - l) * (x - l)))
            .sum())
    }

    /// `R_S(x,t) = Σ wᵢ(t)/(x−λᵢ)`; fixed signs on the two exterior rays.
    pub fn eval_r_s(&self, x: f64, t: f64) -> Result<f64, CertifyError> {
        self.check_node(x)?;
        Ok(self
            .weights
            .iter()
            .zip(&self.lambdas)
            .map(|(w, l)| w.eval(t) / (x - l))
            .sum())
    }

    /// `G(x,t) = −I_S(x,t)·f(x)`, which also equals
    /// `∂S/∂x + F(x)·S` for `F = −ḟ/f`.
    pub fn eval_g(&self, x: f64, t: f64) -> Result<f64, CertifyError> {
        Ok(-self.eval_i_s(x, t)? * self.f.eval(&x))
    }

    /// Evaluate the right-hand side of the decomposition identity.
    pub fn reconstruct(&self, x: f64, t: f64) -> Result<f64, CertifyError> {
        Ok((self.leading.eval(t) + self.eval_r_s(x, t)?) * self.f.eval(&x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::equation::ScalarOde;
    use crate::scalar::rat;

    #[test]
    fn certify_h_quartic_exact_values() {
        let eq = catalog::reachable_bound_quartic();
        let nodes = [rat(-2, 1), rat(0, 1), rat(2, 1), rat(4, 1)];
        let cert = certify_h(&eq, &nodes).unwrap();
        assert_eq!(cert.pattern, Pattern::AlternatingStartNonpos);
        assert_eq!(cert.pattern.sigma(), 1);
        assert_eq!(cert.bound, 4);
        assert!(!cert.all_nodes_identically_zero);
        let values = cert.constant_node_values().unwrap();
        assert_eq!(values, vec![-30.0, 12.0, -18.0, 120.0]);
        let exact: Vec<&str> = cert
            .evidence
            .iter()
            .map(|e| e.constant_value_exact.as_deref().unwrap())
            .collect();
        assert_eq!(exact, vec!["-30", "12", "-18", "120"]);
    }

    #[test]
    fn certify_h_cubic() {
        let eq = catalog::sign_changing_cubic();
        let cert = certify_h(&eq, &[rat(-1, 1), rat(1, 1), rat(3, 1)]).unwrap();
        assert_eq!(cert.pattern, Pattern::AlternatingStartNonneg);
        assert_eq!(cert.pattern.sigma(), -1);
        assert_eq!(
            cert.constant_node_values().unwrap(),
            vec![3.0, -3.0, 15.0]
        );
    }

    #[test]
    fn certify_h_accepts_zero_node_between() {
        // quartic at (-2, 0, 1, 4): S(1,·) ≡ 0 slots in as a wildcard
        let eq = catalog::reachable_bound_quartic();
        let cert =
            certify_h(&eq, &[rat(-2, 1), rat(0, 1), rat(1, 1), rat(4, 1)]).unwrap();
        assert_eq!(cert.evidence[2].sign, SignClass::ZeroIdentically);
        assert!(!cert.all_nodes_identically_zero);
        assert_eq!(cert.pattern, Pattern::AlternatingStartNonpos);
    }

    #[test]
    fn certify_h_pattern_break_refusal() {
        let eq = catalog::reachable_bound_quartic();
        let err = certify_h(
            &eq,
            &[rat(-2, 1), rat(-3, 2), rat(0, 1), rat(2, 1)],
        )
        .unwrap_err();
        match err {
            CertifyError::NotCertifiable(refusal) => {
                assert!(matches!(refusal.reason, RefusalReason::PatternBreak { .. }));
                assert_eq!(refusal.node_index, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn certify_h_sign_change_refusal_carries_witness() {
        let eq = catalog::sign_changing_cubic();
        // S(0,t) = 15cos(2πt) changes sign
        let err = certify_h(&eq, &[rat(0, 1), rat(1, 1), rat(2, 1)]).unwrap_err();
        match err {
            CertifyError::NotCertifiable(refusal) => {
                assert_eq!(refusal.node_index, 0);
                match refusal.reason {
                    RefusalReason::SignChange { t1, v1, t2, v2 } => {
                        let f = catalog::sign_changing_cubic().to_f64();
                        assert!(v1 > 0.0 && v2 < 0.0);
                        assert!(f.value(0.0, t1) > 0.0);
                        assert!(f.value(0.0, t2) < 0.0);
                    }
                    other => panic!("unexpected reason {other:?}"),
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn certify_h_wrong_count() {
        let eq = catalog::reachable_bound_quartic();
        assert!(matches!(
            certify_h(&eq, &[rat(0, 1)]),
            Err(CertifyError::WrongNodeCount { expected: 4, got: 1 })
        ));
        assert!(matches!(
            certify_h(&eq, &[rat(0, 1), rat(0, 1), rat(1, 1), rat(2, 1)]),
            Err(CertifyError::NodesNotIncreasing)
        ));
    }

    #[test]
    fn certify_c_quartic_primary_and_alternatives() {
        let eq = catalog::sign_changing_quartic();
        let cert = certify_c(&eq).unwrap();
        assert_eq!(cert.kind, HypothesisKind::AlgebraicCriterion);
        assert_eq!(cert.nodes, vec![-2.0, -1.0, 1.0, 3.0]);
        assert_eq!(
            cert.nodes_exact.as_deref(),
            Some(&["-2".to_string(), "-1".into(), "1".into(), "3".into()][..])
        );
        let fa: Vec<f64> = cert.evidence.iter().map(|e| e.f_a_value.unwrap()).collect();
        assert_eq!(fa, vec![72.0, -15.0, 45.0, -63.0]);
        let fa_exact: Vec<&str> = cert
            .evidence
            .iter()
            .map(|e| e.f_a_value_exact.as_deref().unwrap())
            .collect();
        assert_eq!(fa_exact, vec!["72", "-15", "45", "-63"]);
        assert_eq!(cert.pattern, Pattern::AlternatingStartNonneg);

        // the complementary factor's zeros appear among the alternatives
        let alt = cert
            .admissible_alternatives
            .iter()
            .find(|c| c.nodes == vec![-1.5, -0.5, 2.0, 4.0])
            .expect("remark alternative present");
        assert_eq!(
            alt.f_a_values_exact.as_deref(),
            Some(&["45/16".to_string(), "-63/16".into(), "12".into(), "-90".into()][..])
        );
        assert_eq!(alt.f_a_values, vec![45.0 / 16.0, -63.0 / 16.0, 12.0, -90.0]);
    }

    #[test]
    fn certify_c_autonomous_degenerate_all_zero() {
        // f_b = f_c = 0: F = f_a², every zero of f_a is a double zero of F
        // with f_a vanishing there; certificate succeeds in the all-zero mode.
        let eq = catalog::reachable_bound_quartic();
        let cert = certify_c(&eq).unwrap();
        assert!(cert.all_nodes_identically_zero);
        assert_eq!(cert.nodes, vec![-4.0, -1.0, 1.0, 3.0]);
        for e in &cert.evidence {
            assert_eq!(e.sign, SignClass::ZeroIdentically);
            assert_eq!(e.root_multiplicity, Some(2));
        }
    }

    #[test]
    fn certify_c_float_path() {
        let eq = catalog::sign_changing_quartic().to_f64();
        let cert = certify_c(&eq).unwrap();
        assert_eq!(cert.nodes.len(), 4);
        for (got, want) in cert.nodes.iter().zip([-2.0, -1.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-7);
        }
    }

    #[test]
    fn condition_implies_lines_on_same_nodes() {
        let eq = catalog::sign_changing_quartic();
        let cert = certify_c(&eq).unwrap();
        let kappa: Vec<_> = cert
            .nodes_exact
            .unwrap()
            .iter()
            .map(|s| crate::scalar::parse_rational(s).unwrap())
            .collect();
        let h = certify_h(&eq, &kappa).unwrap();
        assert_eq!(h.pattern, cert.pattern);
    }

    #[test]
    fn certify_h_prime_identity_family_matches_h() {
        let eq = catalog::reachable_bound_quartic().to_f64();
        let lam = [-2.0, 0.0, 2.0, 4.0];
        let hp = certify_h_prime(&eq, &CurveFamily::identity(), &lam).unwrap();
        let h = certify_h(&eq, &lam).unwrap();
        assert_eq!(hp.pattern, h.pattern);
        assert_eq!(hp.bound, h.bound);
        for (a, b) in hp.evidence.iter().zip(&h.evidence) {
            assert_eq!(a.sign, b.sign);
        }
    }

    #[test]
    fn certify_h_prime_curve_cubic() {
        let (eq, curves) = catalog::curve_family_cubic();
        let cert = certify_h_prime(&eq, &curves, &[-4.0, 0.0, 1.0]).unwrap();
        assert_eq!(cert.bound, 3);
        assert_eq!(cert.pattern, Pattern::AlternatingStartNonneg);
        assert!(cert.curves.is_some());
        // determinant at λ = 0 is the constant -1
        assert_eq!(cert.evidence[1].sign, SignClass::Nonpos);
        assert_eq!(cert.evidence[1].constant_value, Some(-1.0));
    }

    #[test]
    fn certify_h_prime_identity_family_refuses_untransformed_cubic() {
        let (eq, _) = catalog::curve_family_cubic();
        let err =
            certify_h_prime(&eq, &CurveFamily::identity(), &[-4.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, CertifyError::NotCertifiable(_)));
    }

    #[test]
    fn suggest_nodes_routes() {
        let eq = catalog::sign_changing_quartic();
        let s = suggest_nodes(&eq).unwrap();
        assert_eq!(s.route, SuggestionRoute::AlgebraicCriterion);
        assert_eq!(s.values, vec![-2.0, -1.0, 1.0, 3.0]);
        let exact = s.exact.unwrap();
        assert_eq!(exact[0], rat(-2, 1));

        let zero = AbelEquation::<Rat>::zero(3);
        assert!(suggest_nodes(&zero).is_none());

        let eq16 = catalog::reachable_bound_quartic();
        let s = suggest_nodes(&eq16).unwrap();
        let nodes: Vec<Rat> = s.exact.unwrap();
        assert!(certify_h(&eq16, &nodes).is_ok());
    }

    #[test]
    fn suggest_nodes_grid_scan_for_higher_harmonics() {
        let (eq, _) = catalog::curve_family_cubic_exact();
        // untransformed cubic has harmonic degree 3; the grid route applies
        let s = suggest_nodes(&eq);
        if let Some(s) = s {
            assert_eq!(s.route, SuggestionRoute::GridScan);
            assert!(certify_h(&eq.to_f64(), &s.values).is_ok());
        }
    }

    #[test]
    fn decomposition_weights_and_reconstruction() {
        let eq = catalog::reachable_bound_quartic();
        let nodes = [rat(-2, 1), rat(0, 1), rat(2, 1), rat(4, 1)];
        let dec = decompose(&eq, &nodes).unwrap();
        // w₁ = S(-2)/((-2)(-4)(-6)) = -30/-48 = 5/8
        assert_eq!(dec.weights[0], TrigPoly::constant(rat(5, 8)));
        let decf = dec.to_f64();
        let eqf = eq.to_f64();
        for i in 0..50 {
            let x = -6.0 + i as f64 * 0.251; // avoids the nodes
            for j in 0..20 {
                let t = j as f64 / 20.0;
                let lhs = eqf.value(x, t);
                let rhs = decf.reconstruct(x, t).unwrap();
                assert!((lhs - rhs).abs() < 1e-10, "x={x}");
            }
        }
    }

    #[test]
    fn decomposition_pure_product_has_zero_weights() {
        // S(x,t) = f(x): all node values vanish identically
        let f = Polynomial::lagrange_node_product(&[rat(-1, 1), rat(0, 1), rat(2, 1)]).unwrap();
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| TrigPoly::constant(c.clone()))
            .collect();
        let eq = AbelEquation::new(coeffs).unwrap();
        let dec = decompose(&eq, &[rat(-1, 1), rat(0, 1), rat(2, 1)]).unwrap();
        assert!(dec.weights.iter().all(|w| w.is_zero()));
        let decf = dec.to_f64();
        assert_eq!(decf.eval_i_s(0.5, 0.3).unwrap(), 0.0);
        assert_eq!(decf.eval_r_s(0.5, 0.3).unwrap(), 0.0);
        assert_eq!(decf.eval_g(0.5, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn weight_sign_identity_pointwise() {
        // sgn(wᵢ(t)) = (−1)^m · sgn((−1)ⁱ S(λᵢ,t)) wherever the node value
        // is nonzero.
        let eq = catalog::sign_changing_cubic();
        let nodes = [rat(-1, 1), rat(1, 1), rat(3, 1)];
        let dec = decompose(&eq, &nodes).unwrap().to_f64();
        let eqf = eq.to_f64();
        let m = 3i32;
        for j in 0..=60 {
            let t = j as f64 / 60.0;
            for (i0, w) in dec.weights.iter().enumerate() {
                let i = (i0 + 1) as i32;
                let s = eqf.value(dec.lambdas[i0], t);
                if s == 0.0 {
                    continue;
                }
                let lhs = w.eval(t).signum();
                let rhs = (-1f64).powi(m) * ((-1f64).powi(i) * s).signum();
                assert_eq!(lhs, rhs, "i={i} t={t}");
            }
        }
    }

    #[test]
    fn i_s_sign_constant_for_certified_equation() {
        let eq = catalog::sign_changing_cubic();
        let nodes = [rat(-1, 1), rat(1, 1), rat(3, 1)];
        let dec = decompose(&eq, &nodes).unwrap().to_f64();
        let mut seen = 0i8;
        for i in 0..40 {
            let x = -4.0 + i as f64 * 0.213;
            if dec.lambdas.iter().any(|l| (x - l).abs() < 1e-9) {
                continue;
            }
            for j in 0..20 {
                let t = j as f64 / 20.0;
                let v = dec.eval_i_s(x, t).unwrap();
                if v.abs() > 1e-12 {
                    let s = if v > 0.0 { 1 } else { -1 };
                    if seen == 0 {
                        seen = s;
                    }
                    assert_eq!(s, seen);
                }
            }
        }
        assert_ne!(seen, 0);
    }

    #[test]
    fn g_identity_cross_check() {
        // G = −I_S·f must equal ∂S/∂x + F·S with F = −f'/f
        let eq = catalog::sign_changing_cubic();
        let nodes = [rat(-1, 1), rat(1, 1), rat(3, 1)];
        let dec = decompose(&eq, &nodes).unwrap().to_f64();
        let eqf = eq.to_f64();
        let df = dec.f.derivative();
        for i in 0..100 {
            let x = -4.0 + i as f64 * 0.0817;
            if dec.lambdas.iter().any(|l| (x - l).abs() < 1e-6) {
                continue;
            }
            let t = (i as f64 * 0.37) % 1.0;
            let g = dec.eval_g(x, t).unwrap();
            let fx = dec.f.eval(&x);
            let alt = eqf.dx(x, t) - df.eval(&x) / fx * eqf.value(x, t);
            assert!((g - alt).abs() < 1e-8 * (1.0 + alt.abs()), "x={x} t={t}");
        }
    }

    #[test]
    fn node_evaluation_guard() {
        let eq = catalog::sign_changing_cubic();
        let dec = decompose(&eq, &[rat(-1, 1), rat(1, 1), rat(3, 1)])
            .unwrap()
            .to_f64();
        assert!(matches!(
            dec.eval_i_s(1.0, 0.5),
            Err(CertifyError::NodeEvaluation { index: 1, .. })
        ));
    }

    #[test]
    fn certificate_serializes() {
        let eq = catalog::sign_changing_quartic();
        let cert = certify_c(&eq).unwrap();
        let json = serde_json::to_string_pretty(&cert).unwrap();
        assert!(json.contains("\"kind\": \"C\""));
        assert!(json.contains("45/16"));
    }
}
