//! Polynomials over F_p: factoring, irreducibility, primes and twist families.
use twistlab::fqpoly::{iter_family, iter_primes, necklace_count};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let f = Poly::parse(5, "4,0,0,0,0,1")?; // t^5 + 4 = (t + 4)^5 in characteristic 5
    println!(
        "{f} factors as {:?}",
        f.factor()?
            .iter()
            .map(|(q, e)| format!("({q})^{e}"))
            .collect::<Vec<_>>()
    );
    let g = Poly::parse(5, "2,0,1")?;
    println!("{g} irreducible: {}", g.is_irreducible()?);
    for d in 1..=4 {
        println!(
            "degree {d}: {} primes (necklace count {})",
            iter_primes(5, d).count(),
            necklace_count(5, d)
        );
    }
    let modulus = Poly::parse(5, "3,0,0,1")?;
    let family: Vec<Poly> = iter_family(4, &modulus, None)?.collect();
    println!("squarefree monic D of degree 4 coprime to {modulus}: {}", family.len());
    let class = Poly::parse(5, "1,1")?;
    println!(
        "of which congruent to {class}: {}",
        iter_family(4, &modulus, Some(&class))?.count()
    );
    Ok(())
}
