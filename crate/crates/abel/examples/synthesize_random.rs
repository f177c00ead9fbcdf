//! Run the Lagrange decomposition backwards: pick nodes, alternating
//! sign-definite node functions and a leading coefficient, and assemble an
//! equation that satisfies the line hypothesis by construction. Then verify
//! numerically that the certified bound really caps the solution count.
//!
//! ```bash
//! cargo run -p abel --example synthesize_random -- 7
//! ```
//! (the optional argument is the seed)

use abel::flow::{
    assign_components, find_periodic_solutions, IntegrationConfig, DEFAULT_SCAN_GRID,
};
use abel::hypothesis::certify_h;
use abel::report::{evaluate_bound, solution_summary};
use abel::scalar::Scalar;
use abel::synth;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(3..=5);
    let s = synth::random_certified(&mut rng, m);

    println!("seed {seed}: degree {m} equation with nodes");
    for (l, g) in s.nodes.iter().zip(&s.node_functions) {
        println!(
            "  λ = {:>5}  S(λ,·) = {} + {}·cos + {}·sin",
            l.to_string(),
            g.constant_part(),
            g.harmonics().first().map(|h| h.cos.to_string()).unwrap_or_else(|| "0".into()),
            g.harmonics().first().map(|h| h.sin.to_string()).unwrap_or_else(|| "0".into()),
        );
    }

    let cert = certify_h(&s.equation, &s.nodes).expect("holds by construction");
    println!("\ncertified: pattern {:?}, bound {}", cert.pattern, cert.bound);

    let eqf = s.equation.to_f64();
    let nodes: Vec<f64> = s.nodes.iter().map(Scalar::to_f64).collect();
    let cfg = IntegrationConfig::default();
    let report = find_periodic_solutions(
        &eqf,
        (nodes[0] - 5.0, nodes[m - 1] + 5.0),
        &cfg,
        DEFAULT_SCAN_GRID,
    )
    .expect("scan");
    let tagged = assign_components(&report, &nodes, &cfg);
    println!("\n{} isolated periodic solutions:", tagged.solutions.len());
    for sol in &tagged.solutions {
        println!("  {}  component {:?}", solution_summary(sol), sol.component.unwrap());
    }
    let bc = evaluate_bound(&cert, &tagged, eqf.leading().mean());
    println!(
        "\ncount {} ≤ bound {}: {}; one per component: {}; excluded {:?} exterior clean: {}",
        bc.isolated_count,
        bc.bound,
        bc.count_within_bound,
        bc.per_component_at_most_one,
        bc.excluded_exterior,
        bc.exterior_exclusion_respected,
    );
    assert!(bc.satisfied);
}
