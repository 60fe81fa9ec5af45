//! Reduction data of y^2 = x^3 + A x + B over F_p(t).
use twistlab::ecurve::build_curve;
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(5, "0,1")?, Poly::parse(5, "1")?)?;
    println!("discriminant {}  c4 {}", curve.delta, curve.c4);
    for bp in &curve.bad_primes {
        println!("  {:<8} {:?} exponent {}", bp.prime.to_string(), bp.kind, bp.exponent);
    }
    println!(
        "finite conductor {}  f_inf {}  deg N_E {}",
        curve.finite_conductor, curve.f_inf, curve.deg_conductor
    );
    println!(
        "twists of degree N have L-polynomials of degree {:?}",
        (1..=4).map(|n| curve.twist_degree(n)).collect::<Vec<_>>()
    );

    // validation errors are typed
    for (a, b) in [("0", "1"), ("0,0,0,0,1", "0,0,0,0,0,0,1")] {
        let err = build_curve(Poly::parse(5, a)?, Poly::parse(5, b)?).unwrap_err();
        println!("A = {a}, B = {b}: {err}");
    }
    Ok(())
}
