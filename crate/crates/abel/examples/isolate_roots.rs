//! Exact real-root isolation: Sturm sequences over rationals, square-free
//! decomposition for multiplicities, and recognized rational roots — the
//! machinery behind the algebraic zero criterion.
//!
//! ```bash
//! cargo run -p abel --example isolate_roots
//! ```

use abel::catalog;
use abel::poly::Polynomial;
use abel::scalar::rat;

fn main() {
    // the criterion polynomial F = f_a² − f_b² − f_c² of the trig quartic
    let eq = catalog::sign_changing_quartic();
    let (fa, fb, fc) = eq.trig_reduce().unwrap();
    let cap_f = fa.mul(&fa).sub(&fb.mul(&fb)).sub(&fc.mul(&fc));
    println!("F has degree {:?}", cap_f.degree());
    let iso = cap_f.isolate_real_roots().unwrap();
    println!("{} real zeros ({:?}):", iso.roots.len(), iso.method);
    for r in &iso.roots {
        println!(
            "  {} (multiplicity {}, exact: {})",
            r.value,
            r.multiplicity,
            r.exact.as_ref().map(|e| e.to_string()).unwrap_or_else(|| "no".into())
        );
    }

    // multiplicities via square-free decomposition: (x+1)·(x−2)²·(x−5)³
    let p = Polynomial::new(vec![rat(1, 1), rat(1, 1)])
        .mul(&Polynomial::new(vec![rat(-2, 1), rat(1, 1)]).mul(&Polynomial::new(vec![rat(-2, 1), rat(1, 1)])))
        .mul(&Polynomial::new(vec![rat(-5, 1), rat(1, 1)])
            .mul(&Polynomial::new(vec![rat(-5, 1), rat(1, 1)]))
            .mul(&Polynomial::new(vec![rat(-5, 1), rat(1, 1)])));
    let iso = p.isolate_real_roots().unwrap();
    println!("\n(x+1)(x−2)²(x−5)³:");
    for r in &iso.roots {
        println!("  root {} with multiplicity {}", r.value, r.multiplicity);
    }

    // irrational roots come back as certified intervals
    let p = Polynomial::new(vec![rat(-2, 1), rat(0, 1), rat(1, 1)]); // x² − 2
    let iso = p.isolate_real_roots().unwrap();
    for r in &iso.roots {
        println!(
            "\nx² − 2: root in [{:.15}, {:.15}], refined to {}",
            r.lo, r.hi, r.value
        );
    }

    // the float path covers equations that were never exact to begin with
    let pf = Polynomial::new(vec![-1.0f64, 0.0, 0.25]);
    let iso = pf.isolate_real_roots().unwrap();
    println!(
        "\nfloat path on 0.25x² − 1: {:?}",
        iso.roots.iter().map(|r| r.value).collect::<Vec<_>>()
    );
}
