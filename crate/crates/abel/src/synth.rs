//! Seeded synthesis of certified equations: the Lagrange decomposition run
//! backwards. Choosing nodes, alternating sign-definite node functions and a
//! leading coefficient determines
//! `S = a_m(t)·f(x) + Σᵢ gᵢ(t)·∏_{j≠i}(x−λⱼ)/∏_{j≠i}(λᵢ−λⱼ)`,
//! an equation whose node values are exactly the chosen `gᵢ` — so the line
//! hypothesis holds by construction. The fuzzing suites lean on this.

use crate::equation::AbelEquation;
use crate::hypothesis::Pattern;
use crate::poly::Polynomial;
use crate::scalar::{rat, Rat, Scalar};
use crate::trig::TrigPoly;
use num_traits::Zero;
use rand::Rng;

/// A synthesized equation together with the data it was built from.
#[derive(Debug, Clone)]
pub struct SynthesizedEquation {
    pub equation: AbelEquation<Rat>,
    pub nodes: Vec<Rat>,
    pub node_functions: Vec<TrigPoly<Rat>>,
    pub leading: TrigPoly<Rat>,
    pub pattern: Pattern,
}

/// Assemble the equation with the given node values and leading coefficient.
///
/// `node_functions[i]` becomes `S(λᵢ, ·)` exactly.
pub fn assemble(
    nodes: &[Rat],
    node_functions: &[TrigPoly<Rat>],
    leading: &TrigPoly<Rat>,
) -> AbelEquation<Rat> {
    assert_eq!(nodes.len(), node_functions.len());
    let m = nodes.len();
    let f = Polynomial::lagrange_node_product(nodes).expect("strictly increasing nodes");
    let mut coeffs: Vec<TrigPoly<Rat>> = (0..=m)
        .map(|i| leading.scale(&f.coeff(i)))
        .collect();
    for (i, g) in node_functions.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let others: Vec<Rat> = nodes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, l)| l.clone())
            .collect();
        let basis = Polynomial::lagrange_node_product(&others).expect("increasing");
        let mut denom = Rat::from_int(1);
        for (j, l) in nodes.iter().enumerate() {
            if j != i {
                denom = denom * (nodes[i].clone() - l.clone());
            }
        }
        let w = g.scale(&(Rat::from_int(1) / denom));
        for (k, c) in basis.coeffs().iter().enumerate() {
            coeffs[k] = coeffs[k].add(&w.scale(c));
        }
    }
    AbelEquation::new(coeffs).expect("leading coefficient nonzero by construction")
}

fn random_rat(rng: &mut impl Rng, lo: f64, hi: f64) -> Rat {
    // quarters keep everything exactly representable and well separated
    let lo_q = (lo * 4.0).round() as i64;
    let hi_q = (hi * 4.0).round() as i64;
    rat(rng.random_range(lo_q..=hi_q), 4)
}

/// Strictly increasing nodes on the quarter grid in `[-3, 3]`, separated by
/// at least 1/2 so scan grids resolve every component.
pub fn random_nodes(rng: &mut impl Rng, m: usize) -> Vec<Rat> {
    let slots: Vec<i64> = (-6..=6).collect(); // halves: -3, -2.5, ..., 3
    let mut picked: Vec<i64> = Vec::with_capacity(m);
    while picked.len() < m {
        let s = slots[rng.random_range(0..slots.len())];
        if !picked.contains(&s) {
            picked.push(s);
        }
    }
    picked.sort_unstable();
    picked.into_iter().map(|s| rat(s, 2)).collect()
}

/// A sign-definite degree-one node function with the requested sign and a
/// comfortable margin: `|A| ≥ |B| + |C| + 1/4`.
fn random_definite(rng: &mut impl Rng, sign: i8) -> TrigPoly<Rat> {
    let a = random_rat(rng, 0.75, 3.0);
    let budget = a.clone() - rat(1, 4);
    let b = random_rat(rng, 0.0, budget.to_f64() * 0.6);
    let c_max = (budget.clone() - b.clone()).to_f64().max(0.0);
    let c = random_rat(rng, 0.0, c_max);
    let flip = |v: Rat, neg: bool| if neg { -v } else { v };
    let tp = TrigPoly::from_coeffs(
        a,
        &[flip(b, rng.random_bool(0.5))],
        &[flip(c, rng.random_bool(0.5))],
    );
    if sign < 0 {
        tp.neg()
    } else {
        tp
    }
}

/// Random leading coefficient `a_m(t)` of harmonic degree ≤ 1 with nonzero
/// mean, rescaled so that `max |ḟ(λᵢ)|·|mean|` stays below `kappa_cap`
/// (keeps the strongest return-map exponents integrable).
fn random_leading(rng: &mut impl Rng, nodes: &[Rat], kappa_cap: f64) -> TrigPoly<Rat> {
    let mean = {
        let v = random_rat(rng, 0.5, 2.0);
        if rng.random_bool(0.5) {
            -v
        } else {
            v
        }
    };
    let amp = random_rat(rng, 0.0, mean.to_f64().abs() * 0.5);
    let mut lead = TrigPoly::from_coeffs(mean.clone(), &[amp], &[Rat::zero()]);
    let f = Polynomial::lagrange_node_product(nodes).unwrap();
    let df = f.derivative();
    let kappa = nodes
        .iter()
        .map(|l| df.eval(l).to_f64().abs())
        .fold(0.0f64, f64::max)
        * mean.to_f64().abs();
    if kappa > kappa_cap {
        // rescale by a nearby rational to keep exactness
        let num = (kappa_cap / kappa * 64.0).floor().max(1.0) as i64;
        lead = lead.scale(&rat(num, 64));
    }
    lead
}

/// Random equation satisfying the line hypothesis by construction, with
/// strictly sign-definite node functions in the alternating pattern.
pub fn random_certified(rng: &mut impl Rng, m: usize) -> SynthesizedEquation {
    let nodes = random_nodes(rng, m);
    let pattern = if rng.random_bool(0.5) {
        Pattern::AlternatingStartNonneg
    } else {
        Pattern::AlternatingStartNonpos
    };
    let node_functions: Vec<TrigPoly<Rat>> = (0..m)
        .map(|i| random_definite(rng, pattern.expected_sign(i)))
        .collect();
    let leading = random_leading(rng, &nodes, 40.0);
    let equation = assemble(&nodes, &node_functions, &leading);
    SynthesizedEquation {
        equation,
        nodes,
        node_functions,
        leading,
        pattern,
    }
}

/// Like [`random_certified`] but with one node function identically zero
/// (a silent node, `S(λ,·) ≡ 0`) and a configurable cap on the strongest
/// return-map exponent, so the constant solution at the silent node stays
/// numerically clean.
pub fn random_with_silent_node(
    rng: &mut impl Rng,
    m: usize,
    silent: usize,
    kappa_cap: f64,
) -> SynthesizedEquation {
    assert!(silent < m);
    let nodes = random_nodes(rng, m);
    let pattern = if rng.random_bool(0.5) {
        Pattern::AlternatingStartNonneg
    } else {
        Pattern::AlternatingStartNonpos
    };
    let node_functions: Vec<TrigPoly<Rat>> = (0..m)
        .map(|i| {
            if i == silent {
                TrigPoly::zero()
            } else {
                random_definite(rng, pattern.expected_sign(i))
            }
        })
        .collect();
    let leading = random_leading(rng, &nodes, kappa_cap);
    let equation = assemble(&nodes, &node_functions, &leading);
    SynthesizedEquation {
        equation,
        nodes,
        node_functions,
        leading,
        pattern,
    }
}

/// Random pure product-form equation `S = a_m(t)·f(x)`; every node value
/// vanishes identically. With `zero_mean` the leading coefficient has zero
/// mean, which turns every well-defined solution periodic.
pub fn random_product_form(
    rng: &mut impl Rng,
    m: usize,
    zero_mean: bool,
) -> (AbelEquation<Rat>, Vec<Rat>, TrigPoly<Rat>) {
    let nodes = random_nodes(rng, m);
    let leading = if zero_mean {
        let amp = random_rat(rng, 0.5, 1.5);
        let s = random_rat(rng, 0.25, 0.75);
        TrigPoly::from_coeffs(Rat::zero(), &[amp], &[s])
    } else {
        random_leading(rng, &nodes, 25.0)
    };
    let zeros = vec![TrigPoly::zero(); m];
    let eq = assemble(&nodes, &zeros, &leading);
    (eq, nodes, leading)
}

/// Random mild equation for derivative-oracle sampling (no certification
/// requirement; coefficients are kept small so trajectories stay tame).
pub fn random_mild(rng: &mut impl Rng, degree: usize) -> AbelEquation<Rat> {
    loop {
        let coeffs: Vec<TrigPoly<Rat>> = (0..=degree)
            .map(|_| {
                TrigPoly::from_coeffs(
                    random_rat(rng, -0.75, 0.75),
                    &[random_rat(rng, -0.5, 0.5), random_rat(rng, -0.25, 0.25)],
                    &[random_rat(rng, -0.5, 0.5), random_rat(rng, -0.25, 0.25)],
                )
            })
            .collect();
        if coeffs[degree].is_zero() {
            continue;
        }
        return AbelEquation::new(coeffs).unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::certify_h;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn assembled_equation_has_prescribed_node_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let s = random_certified(&mut rng, 4);
            for (l, g) in s.nodes.iter().zip(&s.node_functions) {
                assert_eq!(&s.equation.node_function(l), g);
            }
            assert_eq!(s.equation.leading(), &s.leading);
            let cert = certify_h(&s.equation, &s.nodes).unwrap();
            assert_eq!(cert.pattern, s.pattern);
        }
    }

    #[test]
    fn product_form_nodes_are_silent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (eq, nodes, _) = random_product_form(&mut rng, 3, false);
        for l in &nodes {
            assert!(eq.node_function(l).is_zero());
        }
        let cert = certify_h(&eq, &nodes).unwrap();
        assert!(cert.all_nodes_identically_zero);
    }
}
