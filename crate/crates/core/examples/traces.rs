//! Family averages of tr Theta^n over all twists of degree N.
use twistlab::ecurve::{build_curve, TraceCache};
use twistlab::famstats::{family_records, trace_average};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(5, "0,1")?, Poly::parse(5, "1")?)?;
    let cache = TraceCache::new(curve);
    println!("  N  size     <tr>     <tr^2>   <tr^3>   <tr^4>");
    for n in 1..=4 {
        let recs = family_records(&cache, n, None)?;
        let t: Vec<f64> = (1..=4).map(|k| trace_average(&recs, k)).collect();
        println!(
            "{n:>3} {:>5} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            recs.len(),
            t[0],
            t[1],
            t[2],
            t[3]
        );
    }
    Ok(())
}
