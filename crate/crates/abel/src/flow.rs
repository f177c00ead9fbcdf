//! Time-one flow of `ẋ = S(x,t)`: adaptive integration, the return map
//! `H(x₀) = x(1,x₀)` together with its first two derivatives from the
//! variational equations, and the periodic-solution finder built on the
//! displacement function `D(x₀) = H(x₀) − x₀`.
//!
//! The first variation is integrated in log form,
//! `u(t) = ∫₀ᵗ ∂S/∂x(x(s),s) ds`, so `Ḣ = exp(u(1))` survives the
//! `exp(−105)`-scale values that strongly attracting solutions produce. The
//! second derivative accumulates `z(t) = ∫₀ᵗ ∂²S/∂x²·e^u ds`, giving
//! `Ḧ = Ḣ·z(1)`.

use crate::equation::{AbelEquation, EquationError, ScalarOde};
use crate::poly::Polynomial;
use crate::trig::TrigPoly;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("invalid integration configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid scan request: lo must be < hi and grid ≥ 2")]
    InvalidScan,
    #[error("every sample in the scan range escaped before t = 1")]
    EmptyUsableRange,
}

/// Tolerances and knobs for the adaptive integrator and the finder.
///
/// The integration method is a Dormand–Prince 5(4) embedded pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Trajectories leaving `|x| ≥ escape_radius` terminate early.
    pub escape_radius: f64,
    pub min_step: f64,
    /// Bisection stops when the bracket width falls below this (relative).
    pub refine_width: f64,
    /// Displacement and `|Ḣ-1|` threshold for continuum detection.
    pub continuum_tol: f64,
    /// `|Ḣ − 1|` below this is classified non-hyperbolic.
    pub hyperbolic_tol: f64,
    /// `|Ḧ|` above this flags multiplicity at least two.
    pub curvature_tol: f64,
    /// Scan-level threshold for probing tangential (no-sign-change) minima.
    pub tangential_scan_threshold: f64,
    /// Acceptance threshold on `|D|` for a tangential fixed point.
    pub tangential_accept: f64,
    /// Distance at which a located solution is considered to sit on a node.
    pub node_match_tol: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 1e-2,
            escape_radius: 1e6,
            min_step: 1e-14,
            refine_width: 1e-12,
            continuum_tol: 1e-8,
            hyperbolic_tol: 1e-6,
            curvature_tol: 1e-6,
            tangential_scan_threshold: 1e-3,
            tangential_accept: 1e-9,
            node_match_tol: 1e-8,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<(), FlowError> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("escape_radius", self.escape_radius),
            ("min_step", self.min_step),
            ("refine_width", self.refine_width),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(FlowError::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Default number of scan samples for the finder.
pub const DEFAULT_SCAN_GRID: usize = 2001;

// Dormand–Prince 5(4) coefficients.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const STAGE_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

enum DriveOutcome<const N: usize> {
    Completed([f64; N]),
    Escaped { t: f64, direction: i8 },
}

/// Adaptive Dormand–Prince driver over `t ∈ [0,1]` for a small fixed-size
/// state. The first state component is the phase variable monitored against
/// the escape radius.
fn drive<const N: usize>(
    rhs: &(impl Fn(f64, &[f64; N], &mut [f64; N]) + ?Sized),
    y0: [f64; N],
    cfg: &IntegrationConfig,
    mut observer: Option<&mut Vec<(f64, f64)>>,
) -> Result<DriveOutcome<N>, FlowError> {
    let mut t = 0.0;
    let mut y = y0;
    let mut h = cfg.max_step.min(1e-3);
    if let Some(obs) = observer.as_deref_mut() {
        obs.push((t, y[0]));
    }
    let mut k1 = [0.0; N];
    rhs(t, &y, &mut k1);
    let mut stages = [[0.0; N]; 7];
    while t < 1.0 {
        h = h.min(1.0 - t);
        if h < cfg.min_step {
            // step collapse while the state is large and still drifting
            // outward is a finite-time blow-up racing past any radius
            let outward = y[0] * k1[0] > 0.0;
            if y[0].abs() > 0.5 * cfg.escape_radius || (y[0].abs() >= 10.0 && outward) {
                return Ok(DriveOutcome::Escaped {
                    t,
                    direction: if y[0] > 0.0 { 1 } else { -1 },
                });
            }
            return Err(FlowError::StepSizeUnderflow { t });
        }
        stages[0] = k1;
        let tableau: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
        for (s, row) in tableau.iter().enumerate() {
            let mut ys = y;
            for (j, a) in row.iter().enumerate() {
                for i in 0..N {
                    ys[i] += h * a * stages[j][i];
                }
            }
            rhs(t + STAGE_C[s] * h, &ys, &mut stages[s + 1]);
        }
        let mut y_new = y;
        for (j, b) in B.iter().enumerate() {
            for i in 0..N {
                y_new[i] += h * b * stages[j][i];
            }
        }
        rhs(t + h, &y_new, &mut stages[6]); // FSAL stage
        let mut err_norm_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (j, d) in ERR.iter().enumerate() {
                e += d * stages[j][i];
            }
            e *= h;
            let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            err_norm_sq += (e / sc) * (e / sc);
        }
        let err = (err_norm_sq / N as f64).sqrt();
        let accept = err.is_finite() && err <= 1.0 && y_new.iter().all(|v| v.is_finite());
        if accept {
            t += h;
            y = y_new;
            k1 = stages[6];
            if let Some(obs) = observer.as_deref_mut() {
                obs.push((t, y[0]));
            }
            if y[0].abs() >= cfg.escape_radius {
                return Ok(DriveOutcome::Escaped {
                    t,
                    direction: if y[0] > 0.0 { 1 } else { -1 },
                });
            }
            if t >= 1.0 {
                break;
            }
        }
        let factor = if err.is_finite() && err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else if err == 0.0 {
            5.0
        } else {
            0.2
        };
        let factor = if accept { factor } else { factor.min(0.9) };
        h = (h * factor).min(cfg.max_step);
    }
    Ok(DriveOutcome::Completed(y))
}

/// How a trajectory over `[0,1]` ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrajectoryOutcome {
    Returned,
    Escaped { t_escape: f64, direction: i8 },
}

/// Accepted integration steps of one trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<(f64, f64)>,
    pub outcome: TrajectoryOutcome,
}

impl Trajectory {
    pub fn final_value(&self) -> f64 {
        self.points.last().map(|p| p.1).unwrap_or(f64::NAN)
    }
}

/// Integrate `ẋ = S(x,t)` from `x(0) = x0` over one period.
pub fn integrate<S: ScalarOde>(
    sys: &S,
    x0: f64,
    cfg: &IntegrationConfig,
) -> Result<Trajectory, FlowError> {
    cfg.validate()?;
    let mut points = Vec::new();
    let rhs = |t: f64, y: &[f64; 1], dy: &mut [f64; 1]| {
        dy[0] = sys.value(y[0], t);
    };
    let outcome = match drive(&rhs, [x0], cfg, Some(&mut points))? {
        DriveOutcome::Completed(_) => TrajectoryOutcome::Returned,
        DriveOutcome::Escaped { t, direction } => TrajectoryOutcome::Escaped {
            t_escape: t,
            direction,
        },
    };
    Ok(Trajectory { points, outcome })
}

/// Return-map data at one seed.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReturnData {
    /// `H(x₀) = x(1, x₀)`.
    pub x1: f64,
    /// `log Ḣ(x₀) = ∫₀¹ ∂S/∂x dt` along the solution.
    pub log_dh: f64,
    /// `Ḣ(x₀) = exp(log_dh)`; may underflow to 0 or overflow to ∞ while
    /// `log_dh` stays informative.
    pub dh: f64,
    /// `Ḧ(x₀)`.
    pub ddh: f64,
    /// Set when the variational factor `e^u` saturated during accumulation.
    pub variation_overflow: bool,
}

/// Outcome of a return-map evaluation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapOutcome {
    Returned(ReturnData),
    Escaped { t_escape: f64, direction: i8 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReturnMapSample {
    pub x0: f64,
    pub outcome: MapOutcome,
}

impl ReturnMapSample {
    pub fn displacement(&self) -> Option<f64> {
        match &self.outcome {
            MapOutcome::Returned(d) => Some(d.x1 - self.x0),
            MapOutcome::Escaped { .. } => None,
        }
    }
}

/// Evaluate the return map and its first two derivatives at `x0` by
/// integrating the state jointly with the variational equations.
pub fn return_map<S: ScalarOde>(
    sys: &S,
    x0: f64,
    cfg: &IntegrationConfig,
) -> Result<ReturnMapSample, FlowError> {
    cfg.validate()?;
    let rhs = |t: f64, y: &[f64; 3], dy: &mut [f64; 3]| {
        let (x, u) = (y[0], y[1]);
        dy[0] = sys.value(x, t);
        dy[1] = sys.dx(x, t);
        dy[2] = sys.dxx(x, t) * u.min(700.0).exp();
    };
    let outcome = match drive(&rhs, [x0, 0.0, 0.0], cfg, None)? {
        DriveOutcome::Completed([x1, u1, z1]) => {
            let dh = u1.exp();
            let ddh = dh * z1;
            MapOutcome::Returned(ReturnData {
                x1,
                log_dh: u1,
                dh,
                ddh: if ddh.is_nan() { 0.0 } else { ddh },
                variation_overflow: u1 > 700.0 || !z1.is_finite(),
            })
        }
        DriveOutcome::Escaped { t, direction } => MapOutcome::Escaped {
            t_escape: t,
            direction,
        },
    };
    Ok(ReturnMapSample { x0, outcome })
}

/// Phase-only time-one map, used during bracket refinement.
enum PointOutcome {
    Returned(f64),
    Escaped(i8),
    Failed,
}

fn time_one<S: ScalarOde>(sys: &S, x0: f64, cfg: &IntegrationConfig) -> PointOutcome {
    let rhs = |t: f64, y: &[f64; 1], dy: &mut [f64; 1]| {
        dy[0] = sys.value(y[0], t);
    };
    match drive(&rhs, [x0], cfg, None) {
        Ok(DriveOutcome::Completed([x1])) => PointOutcome::Returned(x1),
        Ok(DriveOutcome::Escaped { direction, .. }) => PointOutcome::Escaped(direction),
        Err(_) => PointOutcome::Failed,
    }
}

/// Stability class of an isolated fixed point of the return map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityKind {
    HyperbolicStable,
    HyperbolicUnstable,
    Nonhyperbolic,
}

/// Numerically classified multiplicity of a fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplicityFlag {
    Simple,
    AtLeastTwo,
    Continuum,
    Undetermined,
}

/// Connected component of `ℝ ∖ {λ₁,…,λ_m}` a solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum ComponentTag {
    ExteriorLeft,
    /// Open interval `(λ_k, λ_{k+1})`, 0-based `k`.
    Interior(usize),
    /// Coincides with node `λ_k`.
    AtNode(usize),
    ExteriorRight,
}

/// One located isolated periodic solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodicSolution {
    pub x0: f64,
    pub kind: StabilityKind,
    pub dh: f64,
    pub log_dh: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ddh: Option<f64>,
    pub multiplicity: MultiplicityFlag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<ComponentTag>,
    /// `|D(x₀)|` at acceptance (diagnostic).
    pub residual: f64,
}

/// Scan metadata echoed into reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanInfo {
    pub lo: f64,
    pub hi: f64,
    pub grid: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub refine_width: f64,
}

/// State of one scan sample (kept for displacement-map exports).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum ScanState {
    Returned(ReturnData),
    Escaped { t_escape: f64, direction: i8 },
    Failed,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanSample {
    pub x0: f64,
    #[serde(flatten)]
    pub state: ScanState,
}

/// Full output of the periodic-solution finder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodicSolutionReport {
    pub solutions: Vec<PeriodicSolution>,
    /// Intervals on which the return map is numerically the identity.
    pub continua: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_used: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    pub scan: ScanInfo,
    #[serde(skip)]
    pub samples: Vec<ScanSample>,
}

impl PeriodicSolutionReport {
    pub fn isolated_count(&self) -> usize {
        self.solutions.len()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum DispSign {
    Neg,
    Zero,
    Pos,
}

fn disp_sign<S: ScalarOde>(sys: &S, x: f64, cfg: &IntegrationConfig) -> Option<DispSign> {
    match time_one(sys, x, cfg) {
        PointOutcome::Returned(x1) => {
            let d = x1 - x;
            Some(if d.abs() <= cfg.abs_tol {
                DispSign::Zero
            } else if d > 0.0 {
                DispSign::Pos
            } else {
                DispSign::Neg
            })
        }
        PointOutcome::Escaped(direction) => Some(if direction > 0 {
            DispSign::Pos
        } else {
            DispSign::Neg
        }),
        PointOutcome::Failed => None,
    }
}

/// Bisection between points of opposite effective displacement sign.
/// Escaping evaluations act as ±∞ displacement, which converges onto the
/// boundary fixed point when a strongly unstable solution is shielded by
/// escaping neighborhoods.
fn refine_bracket<S: ScalarOde>(
    sys: &S,
    mut a: f64,
    mut sa: DispSign,
    mut b: f64,
    cfg: &IntegrationConfig,
) -> Option<f64> {
    for _ in 0..200 {
        if (b - a) <= cfg.refine_width * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        let mid = 0.5 * (a + b);
        match disp_sign(sys, mid, cfg)? {
            DispSign::Zero => return Some(mid),
            s if s == sa => {
                a = mid;
                sa = s;
            }
            _ => b = mid,
        }
    }
    Some(0.5 * (a + b))
}

/// Golden-section minimization of `|D|` for tangential candidates.
fn refine_tangential<S: ScalarOde>(
    sys: &S,
    mut a: f64,
    mut b: f64,
    cfg: &IntegrationConfig,
) -> Option<(f64, f64)> {
    let disp = |x: f64| -> Option<f64> {
        match time_one(sys, x, cfg) {
            PointOutcome::Returned(x1) => Some((x1 - x).abs()),
            _ => None,
        }
    };
    const PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - PHI * (b - a);
    let mut x2 = a + PHI * (b - a);
    let mut f1 = disp(x1)?;
    let mut f2 = disp(x2)?;
    for _ in 0..120 {
        if (b - a) <= 1e-11 * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - PHI * (b - a);
            f1 = disp(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + PHI * (b - a);
            f2 = disp(x2)?;
        }
    }
    let x = 0.5 * (a + b);
    Some((x, disp(x)?))
}

fn classify<S: ScalarOde>(
    sys: &S,
    x: f64,
    residual: f64,
    cfg: &IntegrationConfig,
) -> PeriodicSolution {
    // A fixed point so strongly repelling that the bracket cannot pin it
    // beyond this displacement is the boundary of an escaping neighborhood:
    // its stability is decided by the geometry, not by a probe trajectory
    // that has already left the neighborhood.
    let boundary_cut = 1e-6 * x.abs().max(1.0);
    let probe = return_map(sys, x, cfg);
    match probe {
        Ok(ReturnMapSample {
            outcome: MapOutcome::Returned(d),
            ..
        }) if (d.x1 - x).abs() <= boundary_cut => {
            let dev = d.log_dh.exp_m1();
            let kind = if dev < -cfg.hyperbolic_tol {
                StabilityKind::HyperbolicStable
            } else if dev > cfg.hyperbolic_tol {
                StabilityKind::HyperbolicUnstable
            } else {
                StabilityKind::Nonhyperbolic
            };
            let multiplicity = match kind {
                StabilityKind::Nonhyperbolic => {
                    if d.ddh.abs() > cfg.curvature_tol {
                        MultiplicityFlag::AtLeastTwo
                    } else {
                        MultiplicityFlag::Undetermined
                    }
                }
                _ => MultiplicityFlag::Simple,
            };
            PeriodicSolution {
                x0: x,
                kind,
                dh: d.dh,
                log_dh: d.log_dh,
                ddh: Some(d.ddh),
                multiplicity,
                component: None,
                residual: residual.min((d.x1 - x).abs()),
            }
        }
        Ok(ReturnMapSample {
            outcome: MapOutcome::Returned(d),
            ..
        }) if d.log_dh > cfg.hyperbolic_tol => {
            // off the root but still in the expanding regime: keep the
            // measured exponent, drop the unreliable curvature
            PeriodicSolution {
                x0: x,
                kind: StabilityKind::HyperbolicUnstable,
                dh: d.dh,
                log_dh: d.log_dh,
                ddh: None,
                multiplicity: MultiplicityFlag::Simple,
                component: None,
                residual: (d.x1 - x).abs(),
            }
        }
        _ => PeriodicSolution {
            x0: x,
            kind: StabilityKind::HyperbolicUnstable,
            dh: f64::INFINITY,
            log_dh: f64::INFINITY,
            ddh: None,
            multiplicity: MultiplicityFlag::Simple,
            component: None,
            residual,
        },
    }
}

/// Scan `[lo, hi]` for fixed points of the return map: sample the
/// displacement on the grid, bracket sign changes (escaping samples
/// contribute their blow-up direction), refine by bisection, detect
/// continua and tangential fixed points, and classify every root through
/// the variational data.
pub fn find_periodic_solutions<S: ScalarOde>(
    sys: &S,
    range: (f64, f64),
    cfg: &IntegrationConfig,
    grid: usize,
) -> Result<PeriodicSolutionReport, FlowError> {
    cfg.validate()?;
    let (lo, hi) = range;
    if !(lo < hi) || grid < 2 {
        return Err(FlowError::InvalidScan);
    }
    let xs: Vec<f64> = (0..grid)
        .map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64)
        .collect();
    let samples: Vec<ScanSample> = xs
        .par_iter()
        .map(|&x0| {
            let state = match return_map(sys, x0, cfg) {
                Ok(ReturnMapSample {
                    outcome: MapOutcome::Returned(d),
                    ..
                }) => ScanState::Returned(d),
                Ok(ReturnMapSample {
                    outcome: MapOutcome::Escaped { t_escape, direction },
                    ..
                }) => ScanState::Escaped { t_escape, direction },
                Err(_) => ScanState::Failed,
            };
            ScanSample { x0, state }
        })
        .collect();
    if !samples
        .iter()
        .any(|s| matches!(s.state, ScanState::Returned(_)))
    {
        return Err(FlowError::EmptyUsableRange);
    }

    let disp = |i: usize| -> Option<f64> {
        match &samples[i].state {
            ScanState::Returned(d) => Some(d.x1 - samples[i].x0),
            _ => None,
        }
    };

    // continuum detection: runs where D ≈ 0 and Ḣ ≈ 1
    let mut in_continuum = vec![false; grid];
    let mut continua: Vec<(f64, f64)> = Vec::new();
    let flat = |i: usize| -> bool {
        match &samples[i].state {
            ScanState::Returned(d) => {
                (d.x1 - samples[i].x0).abs() < cfg.continuum_tol
                    && d.log_dh.exp_m1().abs() < cfg.continuum_tol
            }
            _ => false,
        }
    };
    let mut i = 0;
    while i < grid {
        if flat(i) {
            let start = i;
            while i < grid && flat(i) {
                i += 1;
            }
            if i - start >= 3 {
                for j in start..i {
                    in_continuum[j] = true;
                }
                continua.push((xs[start], xs[i - 1]));
            }
        } else {
            i += 1;
        }
    }

    let mut roots: Vec<(f64, f64)> = Vec::new(); // (x, |D| residual)

    // direct zeros at grid points
    for i in 0..grid {
        if in_continuum[i] {
            continue;
        }
        if let Some(d) = disp(i) {
            if d.abs() <= cfg.abs_tol {
                roots.push((xs[i], d.abs()));
            }
        }
    }

    // sign-change brackets, including directional escape brackets
    let eff_sign = |i: usize| -> Option<DispSign> {
        match &samples[i].state {
            ScanState::Returned(d) => {
                let v = d.x1 - samples[i].x0;
                Some(if v.abs() <= cfg.abs_tol {
                    DispSign::Zero
                } else if v > 0.0 {
                    DispSign::Pos
                } else {
                    DispSign::Neg
                })
            }
            ScanState::Escaped { direction, .. } => Some(if *direction > 0 {
                DispSign::Pos
            } else {
                DispSign::Neg
            }),
            ScanState::Failed => None,
        }
    };
    for i in 0..grid - 1 {
        if in_continuum[i] || in_continuum[i + 1] {
            continue;
        }
        let (Some(sa), Some(sb)) = (eff_sign(i), eff_sign(i + 1)) else {
            continue;
        };
        let opposite = matches!(
            (sa, sb),
            (DispSign::Pos, DispSign::Neg) | (DispSign::Neg, DispSign::Pos)
        );
        if !opposite {
            continue;
        }
        if let Some(x) = refine_bracket(sys, xs[i], sa, xs[i + 1], cfg) {
            let residual = match time_one(sys, x, cfg) {
                PointOutcome::Returned(x1) => (x1 - x).abs(),
                _ => f64::INFINITY, // escape-shielded boundary root
            };
            roots.push((x, residual));
        }
    }

    // tangential candidates: interior |D| minima without a sign change
    for i in 1..grid - 1 {
        if in_continuum[i] {
            continue;
        }
        let (Some(dm), Some(d0), Some(dp)) = (disp(i - 1), disp(i), disp(i + 1)) else {
            continue;
        };
        let same_sign = dm * d0 > 0.0 && d0 * dp > 0.0;
        if !same_sign {
            continue;
        }
        if d0.abs() <= dm.abs()
            && d0.abs() <= dp.abs()
            && d0.abs() < cfg.tangential_scan_threshold * xs[i].abs().max(1.0)
        {
            if let Some((x, residual)) = refine_tangential(sys, xs[i - 1], xs[i + 1], cfg) {
                if residual <= cfg.tangential_accept * x.abs().max(1.0) {
                    roots.push((x, residual));
                }
            }
        }
    }

    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut dedup: Vec<(f64, f64)> = Vec::new();
    for (x, r) in roots {
        match dedup.last_mut() {
            Some((px, pr)) if (x - *px).abs() <= 1e-8 * x.abs().max(1.0) => {
                if r < *pr {
                    *px = x;
                    *pr = r;
                }
            }
            _ => dedup.push((x, r)),
        }
    }

    let solutions = dedup
        .into_iter()
        .map(|(x, residual)| classify(sys, x, residual, cfg))
        .collect();

    Ok(PeriodicSolutionReport {
        solutions,
        continua,
        nodes_used: None,
        bound: None,
        scan: ScanInfo {
            lo,
            hi,
            grid,
            rel_tol: cfg.rel_tol,
            abs_tol: cfg.abs_tol,
            refine_width: cfg.refine_width,
        },
        samples,
    })
}

/// Tag every located solution with its component of `ℝ ∖ {λ₁,…,λ_m}` (or
/// the node it coincides with) and record the node sequence and its implied
/// bound on the report.
pub fn assign_components(
    report: &PeriodicSolutionReport,
    lambdas: &[f64],
    cfg: &IntegrationConfig,
) -> PeriodicSolutionReport {
    let mut out = report.clone();
    out.nodes_used = Some(lambdas.to_vec());
    out.bound = Some(lambdas.len());
    for sol in &mut out.solutions {
        let x = sol.x0;
        let tag = lambdas
            .iter()
            .position(|l| (x - l).abs() <= cfg.node_match_tol * l.abs().max(1.0))
            .map(ComponentTag::AtNode)
            .unwrap_or_else(|| {
                if x < lambdas[0] {
                    ComponentTag::ExteriorLeft
                } else if x > lambdas[lambdas.len() - 1] {
                    ComponentTag::ExteriorRight
                } else {
                    let k = lambdas.iter().take_while(|l| **l < x).count() - 1;
                    ComponentTag::Interior(k)
                }
            });
        sol.component = Some(tag);
    }
    out
}

/// The node-product perturbation `S + ε₁·f + ε₂·ḟ` with
/// `f = ∏(x − λᵢ)`; node values move by `ε₂·ḟ(λᵢ)` only, and the return-map
/// derivative at a node with `S(λ,·) ≡ 0` picks up the factor
/// `exp(ε₁·ḟ(λ))`.
pub fn perturb(
    eq: &AbelEquation<f64>,
    eps1: f64,
    eps2: f64,
    lambdas: &[f64],
) -> Result<AbelEquation<f64>, EquationError> {
    let f = Polynomial::lagrange_node_product(lambdas)?;
    let df = f.derivative();
    let arity = (eq.degree() + 1).max(f.coeffs().len());
    let mut coeffs: Vec<TrigPoly<f64>> = Vec::with_capacity(arity);
    for i in 0..arity {
        let mut c = if i <= eq.degree() {
            eq.coefficient(i).clone()
        } else {
            TrigPoly::zero()
        };
        let shift = eps1 * f.coeff(i) + eps2 * df.coeff(i);
        if shift != 0.0 {
            c = c.add(&TrigPoly::constant(shift));
        }
        coeffs.push(c);
    }
    AbelEquation::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::equation::AbelEquation;
    use crate::scalar::rat;
    use crate::trig::TrigPoly;

    fn cfg() -> IntegrationConfig {
        IntegrationConfig::default()
    }

    #[test]
    fn integrates_constant_field() {
        let eq = AbelEquation::<f64>::zero(1);
        let tr = integrate(&eq, 3.0, &cfg()).unwrap();
        assert_eq!(tr.outcome, TrajectoryOutcome::Returned);
        assert_eq!(tr.final_value(), 3.0);
    }

    #[test]
    fn equilibrium_stays_put() {
        let eq = catalog::reachable_bound_quartic().to_f64();
        let tr = integrate(&eq, -4.0, &cfg()).unwrap();
        assert_eq!(tr.outcome, TrajectoryOutcome::Returned);
        assert_eq!(tr.final_value(), -4.0);
        assert!(tr.points.iter().all(|(_, x)| *x == -4.0));
    }

    #[test]
    fn quadratic_blowup_escapes() {
        // ẋ = x² from x(0) = 2 blows up at t = 1/2
        let eq = AbelEquation::new(vec![
            TrigPoly::zero(),
            TrigPoly::zero(),
            TrigPoly::constant(1.0),
        ])
        .unwrap();
        let tr = integrate(&eq, 2.0, &cfg()).unwrap();
        match tr.outcome {
            TrajectoryOutcome::Escaped { t_escape, direction } => {
                assert_eq!(direction, 1);
                assert!((t_escape - 0.5).abs() < 1e-3);
            }
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn return_map_on_equilibrium_gives_log_derivative() {
        let eq = catalog::reachable_bound_quartic().to_f64();
        let s = return_map(&eq, -4.0, &cfg()).unwrap();
        match s.outcome {
            MapOutcome::Returned(d) => {
                assert_eq!(d.x1, -4.0);
                // Ḣ = exp(∂S/∂x(-4)·1) = exp(-105)
                assert!((d.log_dh + 105.0).abs() < 1e-6);
                assert!(d.dh > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn return_map_trivial_field() {
        let eq = AbelEquation::<f64>::zero(1);
        let s = return_map(&eq, 0.7, &cfg()).unwrap();
        match s.outcome {
            MapOutcome::Returned(d) => {
                assert_eq!(d.x1, 0.7);
                assert_eq!(d.log_dh, 0.0);
                assert_eq!(d.dh, 1.0);
                assert_eq!(d.ddh, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn variational_derivative_matches_finite_differences() {
        let eq = catalog::sign_changing_cubic().to_f64();
        let tight = IntegrationConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            ..cfg()
        };
        for x0 in [-0.4, 0.2, 1.4, 2.2] {
            let s = return_map(&eq, x0, &tight).unwrap();
            let MapOutcome::Returned(d) = s.outcome else {
                panic!("escaped")
            };
            let h = 1e-5;
            let hp = integrate(&eq, x0 + h, &tight).unwrap().final_value();
            let hm = integrate(&eq, x0 - h, &tight).unwrap().final_value();
            let fd = (hp - hm) / (2.0 * h);
            assert!(
                (d.dh - fd).abs() <= 1e-6 * fd.abs().max(1e-3),
                "x0={x0}: {} vs {fd}",
                d.dh
            );
        }
    }

    #[test]
    fn finds_all_equilibria_of_the_quartic() {
        let eq = catalog::reachable_bound_quartic().to_f64();
        let report = find_periodic_solutions(&eq, (-10.0, 10.0), &cfg(), 2001).unwrap();
        let xs: Vec<f64> = report.solutions.iter().map(|s| s.x0).collect();
        assert_eq!(xs.len(), 4, "got {xs:?}");
        for (got, want) in xs.iter().zip([-4.0, -1.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-8);
        }
        let kinds: Vec<StabilityKind> = report.solutions.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            vec![
                StabilityKind::HyperbolicStable,
                StabilityKind::HyperbolicUnstable,
                StabilityKind::HyperbolicStable,
                StabilityKind::HyperbolicUnstable,
            ]
        );
        assert!(report.continua.is_empty());
    }

    #[test]
    fn zero_field_reports_continuum() {
        let eq = AbelEquation::<f64>::zero(2);
        let report = find_periodic_solutions(&eq, (-1.0, 1.0), &cfg(), 101).unwrap();
        assert!(report.solutions.is_empty());
        assert_eq!(report.continua.len(), 1);
        let (a, b) = report.continua[0];
        assert_eq!((a, b), (-1.0, 1.0));
    }

    #[test]
    fn tangential_double_root_detected() {
        // ẋ = x²: D has a double zero at the origin and no sign change
        let eq = AbelEquation::new(vec![
            TrigPoly::zero(),
            TrigPoly::zero(),
            TrigPoly::constant(1.0),
        ])
        .unwrap();
        let report = find_periodic_solutions(&eq, (-0.9, 0.8), &cfg(), 201).unwrap();
        assert_eq!(report.solutions.len(), 1, "{:?}", report.solutions);
        let sol = &report.solutions[0];
        assert!(sol.x0.abs() < 1e-9);
        assert_eq!(sol.kind, StabilityKind::Nonhyperbolic);
        assert_eq!(sol.multiplicity, MultiplicityFlag::AtLeastTwo);
        // H(x) = x/(1-x) has H'' = 2 at the origin
        assert!((sol.ddh.unwrap() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn two_tolerance_settings_agree() {
        let eq = catalog::sign_changing_cubic().to_f64();
        let loose = find_periodic_solutions(&eq, (-5.0, 5.0), &cfg(), 801).unwrap();
        let tighter = IntegrationConfig {
            abs_tol: 1e-10,
            ..cfg()
        };
        let tight = find_periodic_solutions(&eq, (-5.0, 5.0), &tighter, 801).unwrap();
        assert_eq!(loose.solutions.len(), tight.solutions.len());
        for (a, b) in loose.solutions.iter().zip(&tight.solutions) {
            assert!((a.x0 - b.x0).abs() < 1e-8);
        }
        // at least one root in each certified component
        assert!(loose.solutions.iter().any(|s| s.x0 > -1.0 && s.x0 < 1.0));
        assert!(loose.solutions.iter().any(|s| s.x0 > 1.0 && s.x0 < 3.0));
        assert!(loose.solutions.len() <= 3);
    }

    #[test]
    fn component_assignment() {
        let eq = catalog::reachable_bound_quartic().to_f64();
        let report = find_periodic_solutions(&eq, (-10.0, 10.0), &cfg(), 2001).unwrap();
        let tagged = assign_components(&report, &[-2.0, 0.0, 2.0, 4.0], &cfg());
        let tags: Vec<ComponentTag> = tagged
            .solutions
            .iter()
            .map(|s| s.component.unwrap())
            .collect();
        assert_eq!(
            tags,
            vec![
                ComponentTag::ExteriorLeft,
                ComponentTag::Interior(0),
                ComponentTag::Interior(1),
                ComponentTag::Interior(2),
            ]
        );
        assert_eq!(tagged.bound, Some(4));
    }

    #[test]
    fn perturbation_identities() {
        let eq = catalog::sign_changing_cubic().to_f64();
        let nodes = [-1.0, 1.0, 3.0];
        let same = perturb(&eq, 0.0, 0.0, &nodes).unwrap();
        for (a, b) in eq.coefficients().iter().zip(same.coefficients()) {
            assert_eq!(a, b);
        }
        // S_pert(λᵢ,t) = S(λᵢ,t) + ε₂·ḟ(λᵢ)
        let eps2 = 0.01;
        let pert = perturb(&eq, 0.0, eps2, &nodes).unwrap();
        let f = Polynomial::lagrange_node_product(&nodes.to_vec()).unwrap();
        let df = f.derivative();
        use crate::equation::ScalarOde;
        for l in nodes {
            for t in [0.0, 0.3, 0.8] {
                let want = eq.value(l, t) + eps2 * df.eval(&l);
                assert!((pert.value(l, t) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn perturbed_return_derivative_at_silent_node() {
        // build an equation with S(0,·) ≡ 0 via the decomposition inverse:
        // S = a_m·f + w·L where only the node at 1 has a nonzero value
        let nodes = [rat(-1, 1), rat(0, 1), rat(1, 1)];
        let f = Polynomial::lagrange_node_product(&nodes).unwrap();
        let mut coeffs: Vec<TrigPoly<crate::scalar::Rat>> = f
            .coeffs()
            .iter()
            .map(|c| TrigPoly::constant(c.clone()))
            .collect();
        // add g(t)·(x+1)x/((1+1)(1)) at node 1 with g = 1 + cos/2
        let g = TrigPoly::from_coeffs(rat(1, 1), &[rat(1, 2)], &[rat(0, 1)]);
        let basis = Polynomial::lagrange_node_product(&[rat(-1, 1), rat(0, 1)]).unwrap();
        for (i, c) in basis.coeffs().iter().enumerate() {
            coeffs[i] = coeffs[i].add(&g.scale(&(c.clone() / rat(2, 1))));
        }
        let eq = AbelEquation::new(coeffs).unwrap().to_f64();
        use crate::equation::ScalarOde;
        for t in [0.0, 0.4, 0.9] {
            assert!(eq.value(0.0, t).abs() < 1e-12); // node 0 is silent
        }
        let lam = [-1.0, 0.0, 1.0];
        let base = return_map(&eq, 0.0, &cfg()).unwrap();
        let MapOutcome::Returned(b) = base.outcome else {
            panic!()
        };
        let df = Polynomial::lagrange_node_product(&lam.to_vec())
            .unwrap()
            .derivative();
        for eps1 in [1e-3, -1e-3, 1e-2, -1e-2] {
            let pert = perturb(&eq, eps1, 0.0, &lam).unwrap();
            let s = return_map(&pert, 0.0, &cfg()).unwrap();
            let MapOutcome::Returned(p) = s.outcome else {
                panic!()
            };
            let want = b.log_dh + eps1 * df.eval(&0.0);
            assert!(
                (p.log_dh - want).abs() < 1e-8 * want.abs().max(1.0),
                "eps1={eps1}"
            );
        }
    }

    #[test]
    fn invalid_scan_and_empty_range() {
        let eq = catalog::reachable_bound_quartic().to_f64();
        assert!(matches!(
            find_periodic_solutions(&eq, (1.0, 1.0), &cfg(), 100),
            Err(FlowError::InvalidScan)
        ));
        // far beyond all roots everything blows up
        let report = find_periodic_solutions(&eq, (50.0, 60.0), &cfg(), 11);
        assert!(matches!(report, Err(FlowError::EmptyUsableRange)));
    }
}
