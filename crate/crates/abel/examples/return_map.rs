//! The Poincaré return map `H(x₀) = x(1, x₀)` and its first two derivatives
//! from the variational equations, cross-checked against finite differences.
//!
//! ```bash
//! cargo run -p abel --example return_map
//! ```

use abel::catalog;
use abel::flow::{integrate, return_map, IntegrationConfig, MapOutcome, TrajectoryOutcome};

fn main() {
    let eq = catalog::sign_changing_cubic().to_f64();
    let cfg = IntegrationConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        ..IntegrationConfig::default()
    };

    println!("{:>6}  {:>14} {:>14} {:>14} {:>12}", "x0", "H(x0)", "dH", "dH (FD)", "ddH");
    for x0 in [-0.5, 0.0, 0.5, 1.2, 1.8, 2.4] {
        let sample = return_map(&eq, x0, &cfg).unwrap();
        let MapOutcome::Returned(d) = sample.outcome else {
            println!("{x0:>6}  escaped");
            continue;
        };
        let h = 1e-5;
        let hp = integrate(&eq, x0 + h, &cfg).unwrap().final_value();
        let hm = integrate(&eq, x0 - h, &cfg).unwrap().final_value();
        let fd = (hp - hm) / (2.0 * h);
        println!(
            "{x0:>6}  {:>14.9} {:>14.9} {:>14.9} {:>12.6}",
            d.x1, d.dh, fd, d.ddh
        );
    }

    // strongly attracting solutions produce exponentially small dH; the
    // derivative is kept in log form so it stays informative
    let quartic = catalog::reachable_bound_quartic().to_f64();
    let sample = return_map(&quartic, -4.0, &IntegrationConfig::default()).unwrap();
    if let MapOutcome::Returned(d) = sample.outcome {
        println!(
            "\nquartic equilibrium at -4: dH = {:.3e}, log dH = {:.6} (≈ ∂S/∂x(-4) = -105)",
            d.dh, d.log_dh
        );
    }

    // escapes report the blow-up time and direction
    let traj = integrate(&quartic, 5.0, &IntegrationConfig::default()).unwrap();
    if let TrajectoryOutcome::Escaped { t_escape, direction } = traj.outcome {
        println!("x₀ = 5 escapes {} at t ≈ {t_escape:.4}", if direction > 0 { "upward" } else { "downward" });
    }
}
