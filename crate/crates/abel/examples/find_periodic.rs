//! Locate, classify and count isolated periodic solutions through the
//! displacement function `D(x₀) = H(x₀) − x₀`, then compare the count with
//! the certified bound.
//!
//! ```bash
//! cargo run -p abel --example find_periodic
//! ```

use abel::catalog;
use abel::flow::{
    assign_components, find_periodic_solutions, IntegrationConfig, DEFAULT_SCAN_GRID,
};
use abel::hypothesis::certify_h;
use abel::report::{evaluate_bound, solution_summary};
use abel::scalar::rat;

fn main() {
    let cfg = IntegrationConfig::default();

    // the quartic attains its bound: four isolated periodic solutions
    let eq = catalog::reachable_bound_quartic();
    let cert = certify_h(&eq, &[rat(-2, 1), rat(0, 1), rat(2, 1), rat(4, 1)]).unwrap();
    let eqf = eq.to_f64();
    let report = find_periodic_solutions(&eqf, (-10.0, 10.0), &cfg, DEFAULT_SCAN_GRID).unwrap();
    let tagged = assign_components(&report, &[-2.0, 0.0, 2.0, 4.0], &cfg);
    println!("quartic over [-10, 10] (bound {}):", cert.bound);
    for s in &tagged.solutions {
        println!("  {}  component {:?}", solution_summary(s), s.component.unwrap());
    }
    let bc = evaluate_bound(&cert, &tagged, eqf.leading().mean());
    println!(
        "  count {} ≤ bound {}; excluded exterior: {:?}; satisfied: {}",
        bc.isolated_count, bc.bound, bc.excluded_exterior, bc.satisfied
    );
    println!(
        "  note the solution at -4 in the left exterior: only the {:?} ray is excluded\n",
        bc.excluded_exterior
    );

    // the sign-changing cubic: one solution per certified component
    let eq = catalog::sign_changing_cubic();
    let cert = certify_h(&eq, &[rat(-1, 1), rat(1, 1), rat(3, 1)]).unwrap();
    let eqf = eq.to_f64();
    let report = find_periodic_solutions(&eqf, (-5.0, 5.0), &cfg, DEFAULT_SCAN_GRID).unwrap();
    let tagged = assign_components(&report, &[-1.0, 1.0, 3.0], &cfg);
    println!("cubic over [-5, 5] (bound {}):", cert.bound);
    for s in &tagged.solutions {
        println!("  {}  component {:?}", solution_summary(s), s.component.unwrap());
    }

    // a continuum: the zero equation returns every point
    let zero = abel::AbelEquation::<f64>::zero(2);
    let report = find_periodic_solutions(&zero, (-1.0, 1.0), &cfg, 101).unwrap();
    println!("\nzero equation: {} isolated solutions, continua {:?}", report.solutions.len(), report.continua);
}
