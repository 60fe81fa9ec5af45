//! L-polynomial of one quadratic twist, by fiber sums and by the Euler product.
use twistlab::ecurve::{build_ap_table, build_curve, TraceCache};
use twistlab::lfunction::{euler_l, fiber_power_sums, spectral, twist_lpoly};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(5, "0,1")?, Poly::parse(5, "1")?)?;
    let cache = TraceCache::new(curve.clone());
    let d = Poly::parse(5, "1,1,0,1")?; // t^3 + t + 1
    let l = twist_lpoly(&cache, &d)?;
    println!("S_n = {:?}", fiber_power_sums(&cache, &d, l.degree().div_ceil(2) + 1)?);
    println!("L(u) = {:?}", l.coeffs);
    let table = build_ap_table(&cache, 6)?;
    assert_eq!(euler_l(&curve, &table, &d)?, l);
    let sd = spectral(&l)?;
    println!("rank {}  sign {}  RH error {:.1e}", sd.rank, sd.eps, sd.rh_error);
    println!("angles {:?}", sd.angles);
    println!("{}", l.dump_line(&d, sd.rank));
    Ok(())
}
