//! The geometric hypothesis: when no straight lines work, a family of
//! curves `γ_λ(t) = (t, λ·a(t) + b(t))` can. The sign object is the
//! determinant `det(γ̇_λ, v_S)|_γ = a(t)·S̃(λ,t)`, read off the numerator
//! of the transformed equation.
//!
//! ```bash
//! cargo run -p abel --example curve_family
//! ```

use abel::catalog;
use abel::equation::{det_along_curve, transform, CurveFamily};
use abel::flow::{find_periodic_solutions, IntegrationConfig, DEFAULT_SCAN_GRID};
use abel::hypothesis::{certify_h, certify_h_prime};

fn main() {
    let (eq, curves) = catalog::curve_family_cubic();

    // straight lines fail here: S(λ,·) changes sign for the candidates
    let refused = certify_h(&eq, &[-4.0, 0.0, 1.0]);
    println!("straight lines at (-4, 0, 1): {:?}", refused.err().map(|e| e.to_string()));

    // along the curves y = x/(3+cos 2πt) the determinants keep fixed signs
    for lambda in [-4.0, 0.0, 1.0] {
        let det = det_along_curve(&eq, &curves, lambda).expect("positivity certified");
        let vals: Vec<f64> = (0..5).map(|i| det.eval(i as f64 / 5.0)).collect();
        println!("det along γ_{lambda}: samples {vals:.3?}");
    }

    let cert = certify_h_prime(&eq, &curves, &[-4.0, 0.0, 1.0]).expect("certifiable");
    println!(
        "\ngeometric certificate: pattern {:?}, at most {} isolated periodic solutions",
        cert.pattern, cert.bound
    );

    // the transformed equation is an equation again; count its solutions
    let tr = transform(&eq, &curves).unwrap();
    let report =
        find_periodic_solutions(&tr, (-9.0, 6.0), &IntegrationConfig::default(), DEFAULT_SCAN_GRID)
            .unwrap();
    println!("\ntransformed equation: {} periodic solutions", report.solutions.len());
    for s in &report.solutions {
        println!("  {}", abel::report::solution_summary(s));
    }
    println!("(x-solutions of the original equation are x(t) = y₀·a(t) curves)");

    // the identity family reduces the geometric certificate to the plain one
    let quartic = catalog::reachable_bound_quartic().to_f64();
    let h = certify_h(&quartic, &[-2.0, 0.0, 2.0, 4.0]).unwrap();
    let hp = certify_h_prime(&quartic, &CurveFamily::identity(), &[-2.0, 0.0, 2.0, 4.0]).unwrap();
    assert_eq!(h.pattern, hp.pattern);
    println!("\nidentity family reproduces the line certificate: pattern {:?}", hp.pattern);
}
