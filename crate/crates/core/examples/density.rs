//! One-level density of the quadratic family against the orthogonal
//! reference, with the Fourier route checked against direct summation.
use twistlab::ecurve::{build_curve, TraceCache};
use twistlab::famstats::{family_records, one_level_density, z_phi_direct, TestFunction, DIRECT_TRUNCATION};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(5, "0,1")?, Poly::parse(5, "1")?)?;
    let cache = TraceCache::new(curve);
    let phi = TestFunction::new(0.75, 1.0)?;
    for n in 2..=4 {
        let recs = family_records(&cache, n, None)?;
        let d = one_level_density(&recs, &phi);
        let direct: f64 = recs
            .iter()
            .map(|r| z_phi_direct(&r.spectral.angles, d.m, &phi, DIRECT_TRUNCATION))
            .sum::<f64>()
            / recs.len() as f64;
        println!(
            "N={n} M={}: empirical {:.5} reference {:.5} deviation {:.5} (direct {:.1e} away)",
            d.m,
            d.empirical,
            d.reference,
            d.deviation,
            (direct - d.empirical).abs()
        );
    }
    Ok(())
}
