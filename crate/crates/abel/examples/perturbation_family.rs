//! The node-product perturbation `S + ε₁·f + ε₂·ḟ`. Adding `ε₁·f` leaves
//! every node value unchanged but multiplies the return-map derivative at a
//! silent node (one with `S(λ,·) ≡ 0`) by `exp(ε₁·ḟ(λ))`; adding `ε₂·ḟ`
//! shifts the node values by `ε₂·ḟ(λᵢ)` and breaks ties in the alternation.
//!
//! ```bash
//! cargo run -p abel --example perturbation_family
//! ```

use abel::equation::ScalarOde;
use abel::flow::{perturb, return_map, IntegrationConfig, MapOutcome};
use abel::poly::Polynomial;
use abel::scalar::Scalar;
use abel::synth;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // degree-three equation with the middle node silent
    let s = synth::random_with_silent_node(&mut rng, 3, 1, 8.0);
    let eq = s.equation.to_f64();
    let nodes: Vec<f64> = s.nodes.iter().map(Scalar::to_f64).collect();
    let lam = nodes[1];
    println!("nodes {nodes:?}, silent node at λ = {lam}");
    for t in [0.0, 0.25, 0.5] {
        println!("  S(λ, {t}) = {:.3e}", eq.value(lam, t));
    }

    let cfg = IntegrationConfig::default();
    let base = match return_map(&eq, lam, &cfg).unwrap().outcome {
        MapOutcome::Returned(d) => d,
        _ => unreachable!("constant solution"),
    };
    let f = Polynomial::lagrange_node_product(&nodes).unwrap();
    let df = f.derivative();
    println!("\nlog dH(λ) = {:.9}, ḟ(λ) = {}", base.log_dh, df.eval(&lam));

    println!("\n{:>8} {:>16} {:>16}", "ε₁", "log dH (measured)", "log dH + ε₁·ḟ(λ)");
    for eps1 in [1e-3, -1e-3, 1e-2, -1e-2, 5e-2] {
        let pert = perturb(&eq, eps1, 0.0, &nodes).unwrap();
        let d = match return_map(&pert, lam, &cfg).unwrap().outcome {
            MapOutcome::Returned(d) => d,
            _ => unreachable!(),
        };
        println!(
            "{eps1:>8} {:>16.9} {:>16.9}",
            d.log_dh,
            base.log_dh + eps1 * df.eval(&lam)
        );
    }

    // the ε₂ direction moves the node values themselves
    let eps2 = 0.01;
    let pert = perturb(&eq, 0.0, eps2, &nodes).unwrap();
    println!("\nnode values under ε₂ = {eps2} (shift is ε₂·ḟ(λᵢ)):");
    for l in &nodes {
        println!(
            "  λ = {l:>5}: S → {:+.6} (ḟ = {:+.3})",
            pert.value(*l, 0.0),
            df.eval(l)
        );
    }
}
