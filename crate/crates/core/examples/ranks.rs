//! Analytic ranks, root numbers and the calibrated sign formula.
use twistlab::ecurve::{build_curve, TraceCache};
use twistlab::famstats::{calibrate_signs, family_records, hypothesis_m_diag, rank_report};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(5, "0,1")?, Poly::parse(5, "1")?)?;
    let cache = TraceCache::new(curve.clone());
    let recs = family_records(&cache, 4, None)?;
    let r = rank_report(&curve, &recs);
    println!("{} twists, histogram {:?}", r.family_size, r.histogram);
    println!(
        "average rank {:.4}, rank 0 {:.3}, rank 1 {:.3}",
        r.average_rank, r.fraction_rank0, r.fraction_rank1
    );
    println!(
        "signs +{} / -{}, parity violations {}",
        r.plus, r.minus, r.parity_violations
    );
    let cal = calibrate_signs(&curve, &recs[..1]);
    let agree = recs
        .iter()
        .filter(|t| cal.eps_formula(&curve, &t.d).ok() == Some(t.spectral.eps))
        .count();
    println!(
        "sign formula calibrated on one twist predicts {agree}/{} signs",
        recs.len()
    );
    for n in 1..=3 {
        println!(
            "hypothesis M diagnostic S(4, {n}) / q^(4 + {n}) = {:.5}",
            hypothesis_m_diag(&cache, 4, n)?
        );
    }
    Ok(())
}
