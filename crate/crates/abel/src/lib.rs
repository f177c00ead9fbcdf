//! Analysis of generalized Abel equations `ẋ = S(x,t) = Σᵢ aᵢ(t)·xⁱ` with
//! trigonometric-polynomial coefficients on `t ∈ [0,1]`.
//!
//! The crate certifies alternating sign hypotheses on lines `x = λᵢ` (and
//! their algebraic and geometric variants), derives the resulting upper
//! bound on isolated periodic solutions, and numerically locates and
//! classifies those solutions through the Poincaré return map.
//!
//! # Layout
//!
//! - [`poly`] / [`roots`]: exact and floating univariate polynomial
//!   arithmetic with rigorous real-root isolation (Sturm sequences over
//!   rationals).
//! - [`trig`] / [`sign`]: trigonometric polynomials of period one and
//!   rigorous sign certification over a period.
//! - [`equation`]: the equation model, its x-partials, the
//!   `f_a + f_b·cos + f_c·sin` reduction, and the affine change of
//!   variables along a curve family.
//! - [`hypothesis`]: hypothesis certificates, admissible-node search, and
//!   the Lagrange interpolation decomposition with its sign diagnostics.
//! - [`flow`]: adaptive integration, the return map and its variational
//!   derivatives, and the periodic-solution finder.
//! - [`synth`]: seeded synthesis of certified equations (decomposition run
//!   backwards), used heavily by the test suites.
//! - [`report`]: the equation-file and report JSON schemas and the
//!   displacement CSV export behind the command-line tool.
//! - [`reproduce`]: the built-in regression suite over the worked equations
//!   in [`catalog`].
//!
//! # Quick start
//!
//! ```
//! use abel::catalog;
//! use abel::flow::{find_periodic_solutions, IntegrationConfig};
//! use abel::hypothesis::certify_h;
//! use abel::scalar::rat;
//!
//! let eq = catalog::reachable_bound_quartic();
//! let cert = certify_h(&eq, &[rat(-2, 1), rat(0, 1), rat(2, 1), rat(4, 1)]).unwrap();
//! assert_eq!(cert.bound, 4);
//!
//! let report = find_periodic_solutions(
//!     &eq.to_f64(),
//!     (-10.0, 10.0),
//!     &IntegrationConfig::default(),
//!     2001,
//! )
//! .unwrap();
//! assert_eq!(report.solutions.len(), 4); // the bound is attained
//! ```

pub mod catalog;
pub mod equation;
pub mod flow;
pub mod hypothesis;
pub mod poly;
pub mod report;
pub mod reproduce;
pub mod roots;
pub mod scalar;
pub mod sign;
pub mod synth;
pub mod trig;

pub use equation::{AbelEquation, CurveFamily, ScalarOde, TransformedEquation};
pub use flow::{
    find_periodic_solutions, integrate, return_map, IntegrationConfig, PeriodicSolutionReport,
};
pub use hypothesis::{certify_c, certify_h, certify_h_prime, HypothesisCertificate};
pub use poly::Polynomial;
pub use scalar::Rat;
pub use trig::TrigPoly;
