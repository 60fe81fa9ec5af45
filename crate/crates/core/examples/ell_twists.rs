//! Cubic twists over F_7 and the unitary reference.
use twistlab::ecurve::{build_ap_table, build_curve, TraceCache};
use twistlab::famstats::{ell_density, TestFunction};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(7, "0,1")?, Poly::parse(7, "1")?)?;
    let table = build_ap_table(&TraceCache::new(curve.clone()), curve.twist_degree(2))?;
    let phi = TestFunction::new(0.4, 0.5)?;
    for n in 1..=2 {
        let r = ell_density(&curve, &table, 3, n, &phi, 4)?;
        println!(
            "N={n}: {} characters, M={}, RH error {:.1e}",
            r.family_size, r.m, r.rh_error
        );
        for (k, (re, im)) in r.traces.iter().enumerate() {
            println!("  <tr^{}> = {re:+.4} {im:+.1e}i", k + 1);
        }
        println!("  density {:.4} vs {:.4}", r.density.empirical, r.density.reference);
    }
    Ok(())
}
