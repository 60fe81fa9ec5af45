//! Class sizes of the twist family modulo the conductor, and the
//! character-square sum check.
use twistlab::ecurve::build_curve;
use twistlab::famstats::{char_square_check, class_main_term, class_sizes};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(5, "0,1")?, Poly::parse(5, "1")?)?;
    for n in 2..=5 {
        let sizes = class_sizes(&curve, n)?;
        let main = class_main_term(&curve.finite_conductor, n)?;
        let worst = sizes
            .values()
            .map(|&s| (s as f64 - main).abs() / main)
            .fold(0.0, f64::max);
        println!(
            "N={n}: {} classes, total {}, main term {main:.3}, worst relative deviation {worst:.3}",
            sizes.len(),
            sizes.values().sum::<usize>()
        );
    }
    let class = Poly::parse(5, "1")?;
    for p in ["0,1", "1,1"] {
        let prime = Poly::parse(5, p)?;
        println!(
            "residual at P = {prime}: {}",
            char_square_check(&curve, 4, &class, &prime)?
        );
    }
    Ok(())
}
