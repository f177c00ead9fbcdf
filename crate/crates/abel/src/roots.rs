//! Real-root isolation for univariate polynomials.
//!
//! Rational polynomials take the exact route: Yun square-free decomposition
//! for multiplicities, capped rational-root extraction for exact values, and
//! Sturm bisection for everything else, so each reported interval provably
//! contains exactly one root. Float polynomials take a scan-and-bisect route
//! with a local-minimum probe for even-multiplicity roots; that path is a
//! numerical heuristic and is labelled as such in the result.

use crate::poly::{PolyError, Polynomial};
use crate::scalar::{rat_from_f64, Rat, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// How a [`RootIsolation`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsolationMethod {
    /// Exact Sturm-sequence isolation over rationals.
    SturmExact,
    /// Floating-point scan plus bisection refinement.
    BisectionFloat,
}

/// One isolated real root.
#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    /// Lower end of the isolating interval.
    pub lo: f64,
    /// Upper end of the isolating interval.
    pub hi: f64,
    /// Refined root value (exact when `exact` is set).
    pub value: f64,
    pub multiplicity: usize,
    /// Exact rational value when the root is rational and was recognized.
    pub exact: Option<Rat>,
    pub(crate) exact_interval: Option<(Rat, Rat)>,
    /// Square-free factor this root belongs to (exact path only).
    pub(crate) exact_factor: Option<Polynomial<Rat>>,
}

/// Sorted, pairwise-disjoint isolated real roots of a polynomial.
#[derive(Debug, Clone)]
pub struct RootIsolation {
    pub roots: Vec<IsolatedRoot>,
    pub method: IsolationMethod,
}

impl RootIsolation {
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

// ---------------------------------------------------------------------------
// Exact path

fn positive_normalize(p: &Polynomial<Rat>) -> Polynomial<Rat> {
    // Scale by 1/|leading|: Sturm chains tolerate positive scaling only.
    match p.leading() {
        Some(l) if !l.is_zero() => {
            let inv = Rat::from_int(1) / Scalar::abs(l);
            p.scale(&inv)
        }
        _ => p.clone(),
    }
}

pub(crate) fn sturm_chain(p: &Polynomial<Rat>) -> Vec<Polynomial<Rat>> {
    let mut chain = vec![positive_normalize(p)];
    let dp = p.derivative();
    if dp.is_zero() {
        return chain;
    }
    chain.push(positive_normalize(&dp));
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(positive_normalize(&r.neg()));
    }
    chain
}

fn sign_variations(chain: &[Polynomial<Rat>], x: &Rat) -> usize {
    let mut last: i8 = 0;
    let mut variations = 0;
    for p in chain {
        let s = p.eval(x).signum_int();
        if s != 0 {
            if last != 0 && s != last {
                variations += 1;
            }
            last = s;
        }
    }
    variations
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub(crate) fn count_roots_in(chain: &[Polynomial<Rat>], lo: &Rat, hi: &Rat) -> usize {
    sign_variations(chain, lo).saturating_sub(sign_variations(chain, hi))
}

/// Cauchy bound: every real root r satisfies |r| < bound.
fn cauchy_bound(p: &Polynomial<Rat>) -> Rat {
    let lead = Scalar::abs(p.leading().expect("nonzero polynomial"));
    let mut m = Rat::from_int(0);
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let a = Scalar::abs(c) / lead.clone();
        if a > m {
            m = a;
        }
    }
    m + Rat::from_int(1)
}

/// Yun's square-free decomposition: `p = c · ∏ f_k^k` with the `f_k`
/// square-free, pairwise coprime, returned as `(f_k, k)` for nonconstant ones.
pub(crate) fn square_free_decomposition(p: &Polynomial<Rat>) -> Vec<(Polynomial<Rat>, usize)> {
    let deg = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    let dp = p.derivative();
    let g = p.gcd(&dp);
    if g.degree() == Some(0) {
        return vec![(p.monic(), 1)];
    }
    let mut out = Vec::new();
    let mut w = p.div_rem(&g).0;
    let mut y = dp.div_rem(&g).0;
    let mut k = 0usize;
    while w.degree().is_some_and(|d| d >= 1) {
        k += 1;
        if k > deg + 1 {
            break; // cannot happen for exact input; guards nontermination
        }
        let z = y.sub(&w.derivative());
        let f = w.gcd(&z);
        if f.degree().is_some_and(|d| d >= 1) {
            out.push((f.monic(), k));
        }
        w = w.div_rem(&f).0;
        y = z.div_rem(&f).0;
    }
    out
}

/// Divisors of `n` (n > 0) with caps; `None` when the caps are exceeded.
fn bounded_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.to_u64()?;
    if n == 0 || n > 1_000_000_000_000_000 {
        return None;
    }
    let mut divs = Vec::new();
    let mut d = 1u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n % d == 0 {
            divs.push(d);
            if d != n / d {
                divs.push(n / d);
            }
            if divs.len() > 4000 {
                return None;
            }
        }
        d += 1;
    }
    Some(divs)
}

/// Rational roots of `p` by the rational-root theorem, with caps on the
/// divisor search. Returns roots found (possibly not all of them if capped).
fn rational_roots(p: &Polynomial<Rat>) -> Vec<Rat> {
    let mut found = Vec::new();
    let mut p = p.clone();
    // x = 0 roots
    while !p.is_zero() && p.coeff(0).is_zero() && p.degree().is_some_and(|d| d >= 1) {
        found.push(Rat::from_int(0));
        let (q, _) = p.div_rem(&Polynomial::identity());
        p = q;
        break; // square-free callers only carry the root once
    }
    if p.degree().map_or(true, |d| d < 1) {
        return found;
    }
    // clear denominators to integer coefficients
    let mut lcm = BigInt::from(1);
    for c in p.coeffs() {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let (Some(num_divs), Some(den_divs)) = (bounded_divisors(&a0), bounded_divisors(&an)) else {
        return found;
    };
    let mut candidates: Vec<Rat> = Vec::new();
    for nu in &num_divs {
        for de in &den_divs {
            let c = Rat::new(BigInt::from(*nu), BigInt::from(*de));
            candidates.push(c.clone());
            candidates.push(-c);
        }
    }
    candidates.sort();
    candidates.dedup();
    for c in candidates {
        if p.eval(&c).is_zero() {
            found.push(c);
        }
    }
    found.sort();
    found.dedup();
    found
}

struct ExactRoot {
    exact: Option<Rat>,
    interval: (Rat, Rat),
    factor: Polynomial<Rat>,
}

/// Isolate all roots of a square-free polynomial, refining intervals to
/// `width`. Exact rational roots are recognized where the divisor caps allow.
fn isolate_square_free(factor: &Polynomial<Rat>, width: &Rat) -> Vec<ExactRoot> {
    let mut f = factor.monic();
    let mut exact: Vec<Rat> = Vec::new();
    for r in rational_roots(&f) {
        let lin = Polynomial::new(vec![-r.clone(), Rat::from_int(1)]);
        let (q, rem) = f.div_rem(&lin);
        debug_assert!(rem.is_zero());
        f = q;
        exact.push(r);
    }
    let mut out: Vec<ExactRoot> = exact
        .into_iter()
        .map(|r| ExactRoot {
            interval: (r.clone(), r.clone()),
            exact: Some(r),
            factor: factor.clone(),
        })
        .collect();

    'restart: loop {
        if f.degree().map_or(true, |d| d < 1) {
            break;
        }
        let chain = sturm_chain(&f);
        let bound = cauchy_bound(&f);
        let mut stack = vec![(-bound.clone(), bound.clone())];
        let mut isolated: Vec<(Rat, Rat)> = Vec::new();
        while let Some((lo, hi)) = stack.pop() {
            let count = count_roots_in(&chain, &lo, &hi);
            if count == 0 {
                continue;
            }
            let mid = (lo.clone() + hi.clone()) / Rat::from_int(2);
            if f.eval(&mid).is_zero() {
                // rational root discovered mid-subdivision: deflate and restart
                let lin = Polynomial::new(vec![-mid.clone(), Rat::from_int(1)]);
                f = f.div_rem(&lin).0;
                out.push(ExactRoot {
                    interval: (mid.clone(), mid.clone()),
                    exact: Some(mid),
                    factor: factor.clone(),
                });
                continue 'restart;
            }
            if count == 1 {
                isolated.push((lo, hi));
            } else {
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
        for (lo, hi) in isolated {
            let (lo, hi) = refine_bisect(&f, lo, hi, width);
            out.push(ExactRoot {
                exact: None,
                interval: (lo, hi),
                factor: factor.clone(),
            });
        }
        break;
    }
    out
}

/// Shrink `(lo, hi]` around the single interior root of square-free `f`
/// until `hi - lo <= width`. Endpoint signs are nonzero by construction.
fn refine_bisect(f: &Polynomial<Rat>, mut lo: Rat, mut hi: Rat, width: &Rat) -> (Rat, Rat) {
    let mut s_lo = f.eval(&lo).signum_int();
    if s_lo == 0 {
        // cannot happen for isolating intervals produced above
        return (lo.clone(), lo);
    }
    while &(hi.clone() - lo.clone()) > width {
        let mid = (lo.clone() + hi.clone()) / Rat::from_int(2);
        let s_mid = f.eval(&mid).signum_int();
        if s_mid == 0 {
            return (mid.clone(), mid);
        }
        if s_mid == s_lo {
            lo = mid;
            s_lo = s_mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

impl Polynomial<Rat> {
    /// Exact real-root isolation with the default refinement width (1e-12).
    pub fn isolate_real_roots(&self) -> Result<RootIsolation, PolyError> {
        self.isolate_real_roots_with(1e-12)
    }

    /// Exact real-root isolation; intervals are refined below `width`.
    pub fn isolate_real_roots_with(&self, width: f64) -> Result<RootIsolation, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let width = rat_from_f64(width.abs().max(f64::MIN_POSITIVE)).unwrap();
        let mut collected: Vec<(ExactRoot, usize)> = Vec::new();
        for (factor, mult) in square_free_decomposition(self) {
            for root in isolate_square_free(&factor, &width) {
                collected.push((root, mult));
            }
        }
        collected.sort_by(|a, b| {
            let ka = a.0.interval.0.clone() + a.0.interval.1.clone();
            let kb = b.0.interval.0.clone() + b.0.interval.1.clone();
            ka.partial_cmp(&kb).unwrap()
        });
        // roots are distinct; shrink any overlapping neighbors until disjoint
        for i in 1..collected.len() {
            let mut guard = 0;
            while collected[i - 1].0.interval.1 >= collected[i].0.interval.0 && guard < 256 {
                guard += 1;
                let (left, right) = collected.split_at_mut(i);
                let a = &mut left[i - 1].0;
                let b = &mut right[0].0;
                for r in [a, b] {
                    if r.exact.is_some() {
                        continue;
                    }
                    let w = (r.interval.1.clone() - r.interval.0.clone()) / Rat::from_int(4);
                    if w.is_zero() {
                        continue;
                    }
                    let (lo, hi) =
                        refine_bisect(&r.factor, r.interval.0.clone(), r.interval.1.clone(), &w);
                    r.interval = (lo, hi);
                }
                if guard == 256 {
                    break;
                }
            }
        }
        let roots = collected
            .into_iter()
            .map(|(r, mult)| {
                let value = match &r.exact {
                    Some(v) => Scalar::to_f64(v),
                    None => Scalar::to_f64(
                        &((r.interval.0.clone() + r.interval.1.clone()) / Rat::from_int(2)),
                    ),
                };
                IsolatedRoot {
                    lo: Scalar::to_f64(&r.interval.0),
                    hi: Scalar::to_f64(&r.interval.1),
                    value,
                    multiplicity: mult,
                    exact: r.exact,
                    exact_interval: Some(r.interval),
                    exact_factor: Some(r.factor),
                }
            })
            .collect();
        Ok(RootIsolation {
            roots,
            method: IsolationMethod::SturmExact,
        })
    }
}

/// Exact sign of `q` at an exactly-isolated root. Returns -1, 0 or +1.
///
/// Requires a root produced by the exact path; decides zero via a gcd with
/// the root's square-free factor and otherwise refines the isolating
/// interval until `q` provably keeps one sign on it.
pub(crate) fn exact_sign_at_root(root: &IsolatedRoot, q: &Polynomial<Rat>) -> i8 {
    if q.is_zero() {
        return 0;
    }
    if let Some(r) = &root.exact {
        return q.eval(r).signum_int();
    }
    let factor = root
        .exact_factor
        .as_ref()
        .expect("exact_sign_at_root requires an exact-path root");
    let (mut lo, mut hi) = root.exact_interval.clone().unwrap();
    let g = factor.gcd(q);
    if g.degree().is_some_and(|d| d >= 1) {
        let chain = sturm_chain(&g);
        if count_roots_in(&chain, &lo, &hi) >= 1 {
            return 0; // the root is a common root of factor and q
        }
    }
    let q_chain = sturm_chain(q);
    loop {
        if count_roots_in(&q_chain, &lo, &hi) == 0 {
            let mid = (lo.clone() + hi.clone()) / Rat::from_int(2);
            let s = q.eval(&mid).signum_int();
            if s != 0 {
                return s;
            }
        }
        let w = (hi.clone() - lo.clone()) / Rat::from_int(4);
        let (nlo, nhi) = refine_bisect(factor, lo, hi, &w);
        lo = nlo;
        hi = nhi;
        if lo == hi {
            return q.eval(&lo).signum_int();
        }
    }
}

// ---------------------------------------------------------------------------
// Float path

/// Magnitude scale of `p` near `x`, used for relative zero tests.
pub(crate) fn coeff_scale_at(p: &Polynomial<f64>, x: f64) -> f64 {
    let ax = f64::abs(x).max(1.0);
    let mut scale = 0.0;
    let mut pow = 1.0;
    for c in p.coeffs() {
        scale += f64::abs(*c) * pow;
        pow *= ax;
    }
    scale.max(1.0)
}

fn float_bisect(p: &Polynomial<f64>, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = p.eval(&lo);
    for _ in 0..200 {
        if hi - lo <= 1e-14 * lo.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = p.eval(&mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl Polynomial<f64> {
    /// Heuristic float root isolation: dense scan, bisection on sign changes,
    /// and a |p| local-minimum probe for even-multiplicity roots.
    pub fn isolate_real_roots(&self) -> Result<RootIsolation, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let Some(deg) = self.degree().filter(|d| *d >= 1) else {
            return Ok(RootIsolation {
                roots: Vec::new(),
                method: IsolationMethod::BisectionFloat,
            });
        };
        let lead = f64::abs(*self.leading().unwrap());
        let mut cauchy = 1.0f64;
        for c in &self.coeffs()[..deg] {
            cauchy = cauchy.max(1.0 + f64::abs(*c) / lead);
        }
        // Fujiwara's bound is far tighter when the coefficients are large
        let mut fujiwara = 0.0f64;
        for k in 1..=deg {
            let a = f64::abs(self.coeff(deg - k)) / lead;
            if a > 0.0 {
                fujiwara = fujiwara.max(a.powf(1.0 / k as f64));
            }
        }
        let bound = (2.02 * fujiwara).min(cauchy).max(1.0);
        let n = (512 * deg).max(4096);
        let h = 2.0 * bound / n as f64;
        let xs: Vec<f64> = (0..=n).map(|i| -bound + i as f64 * h).collect();
        let vs: Vec<f64> = xs.iter().map(|x| self.eval(x)).collect();
        let dp = self.derivative();

        let mut found: Vec<f64> = Vec::new();
        for i in 0..=n {
            if vs[i] == 0.0 {
                found.push(xs[i]);
            }
        }
        for i in 0..n {
            if vs[i] != 0.0 && vs[i + 1] != 0.0 && (vs[i] > 0.0) != (vs[i + 1] > 0.0) {
                found.push(float_bisect(self, xs[i], xs[i + 1]));
            }
        }
        // even-multiplicity candidates: interior minima of |p| without a sign change
        for i in 1..n {
            let same_sign = vs[i - 1] * vs[i] > 0.0 && vs[i] * vs[i + 1] > 0.0;
            if !same_sign {
                continue;
            }
            let a = vs[i - 1].abs();
            let b = vs[i].abs();
            let c = vs[i + 1].abs();
            if b <= a && b <= c && b < 1e-3 * coeff_scale_at(self, xs[i]) {
                let d_lo = dp.eval(&xs[i - 1]);
                let d_hi = dp.eval(&xs[i + 1]);
                let r = if d_lo != 0.0 && d_hi != 0.0 && (d_lo > 0.0) != (d_hi > 0.0) {
                    float_bisect(&dp, xs[i - 1], xs[i + 1])
                } else {
                    xs[i]
                };
                if self.eval(&r).abs() <= 1e-9 * coeff_scale_at(self, r) {
                    found.push(r);
                }
            }
        }
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        found.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * a.abs().max(1.0));

        let mut roots = Vec::new();
        let mut total = 0usize;
        for r in found {
            let mut mult = 1usize;
            let mut d = dp.clone();
            while mult < deg {
                let scale = coeff_scale_at(&d, r);
                if d.eval(&r).abs() > 1e-7 * scale {
                    break;
                }
                mult += 1;
                d = d.derivative();
            }
            if total + mult > deg {
                mult = deg - total;
                if mult == 0 {
                    break;
                }
            }
            total += mult;
            let w = 1e-12 * r.abs().max(1.0);
            roots.push(IsolatedRoot {
                lo: r - w,
                hi: r + w,
                value: r,
                multiplicity: mult,
                exact: None,
                exact_interval: None,
                exact_factor: None,
            });
        }
        Ok(RootIsolation {
            roots,
            method: IsolationMethod::BisectionFloat,
        })
    }
}
