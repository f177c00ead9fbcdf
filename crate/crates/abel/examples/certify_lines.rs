//! Certify the alternating line hypothesis for two worked equations and
//! print the resulting certificates.
//!
//! ```bash
//! cargo run -p abel --example certify_lines
//! ```

use abel::catalog;
use abel::hypothesis::certify_h;
use abel::scalar::rat;

fn main() {
    // ẋ = x⁴ + x³ − 13x² − x + 12 on the lines x = -2, 0, 2, 4:
    // S(λᵢ) = (-30, 12, -18, 120), so (−1)ⁱ·S(λᵢ) > 0 and the equation has
    // at most four isolated periodic solutions.
    let quartic = catalog::reachable_bound_quartic();
    let nodes = [rat(-2, 1), rat(0, 1), rat(2, 1), rat(4, 1)];
    let cert = certify_h(&quartic, &nodes).expect("certifiable");
    println!("quartic: bound {} with pattern {:?}", cert.bound, cert.pattern);
    for e in &cert.evidence {
        println!(
            "  λ = {:>4}  sign {:?}  S(λ,·) ≡ {}",
            e.node,
            e.sign,
            e.constant_value_exact.as_deref().unwrap_or("-")
        );
    }

    // The cubic whose coefficients all change sign still certifies on the
    // lines x = -1, 1, 3 because the node values are the constants 3, -3, 15.
    let cubic = catalog::sign_changing_cubic();
    let cert = certify_h(&cubic, &[rat(-1, 1), rat(1, 1), rat(3, 1)]).expect("certifiable");
    println!("\ncubic: bound {} with pattern {:?}", cert.bound, cert.pattern);
    println!("{}", serde_json::to_string_pretty(&cert).unwrap());

    // A refusal carries a concrete witness: S(0,t) = 15·cos(2πt) changes
    // sign, so the node 0 cannot be certified.
    let err = certify_h(&cubic, &[rat(0, 1), rat(1, 1), rat(2, 1)]).unwrap_err();
    println!("\nrefusal for nodes (0, 1, 2): {err}");
}
