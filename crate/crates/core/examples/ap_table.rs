//! Frobenius traces a_P for every prime up to a degree, with an on-disk cache.
use twistlab::ecurve::{a_p, build_curve, load_or_build, TraceCache};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(5, "0,1")?, Poly::parse(5, "1")?)?;
    let cache = TraceCache::new(curve.clone());
    let dir = std::env::temp_dir().join("twistlab-example-cache");
    let table = load_or_build(&cache, &dir, 4)?;
    table.check_hasse(&curve)?;
    println!(
        "{} primes up to degree 4, cached under {}",
        table.entries.len(),
        dir.display()
    );
    for (prime, ap) in table.of_degree(1) {
        println!("  a_({prime}) = {ap}  [{:?}]", curve.reduction_type(prime));
    }
    // direct point count agrees with the table
    let p = Poly::parse(5, "2,0,1")?;
    let direct = a_p(&curve, &p, &*cache.field(2)?)?;
    println!("a_({p}) = {} (direct {direct})", table.get(&p).unwrap());
    Ok(())
}
