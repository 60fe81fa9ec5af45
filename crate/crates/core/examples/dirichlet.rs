//! Dirichlet L-functions over F_p[t]: quadratic and cubic characters,
//! Gauss sums and the duality identity.
use twistlab::characters::{char_l_poly, duality_residual, gauss_sum, EllChar, QuadChar};
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let chi = QuadChar::new(Poly::parse(5, "1,0,2,1")?)?;
    let l = char_l_poly(&chi)?;
    println!(
        "quadratic: L = {:?}, parity {:?}, RH error {:.1e}",
        l.int_coeffs,
        l.parity,
        l.rh_error(5)
    );
    let g = gauss_sum(&chi)?;
    println!("  omega {:.6} (roots {:.6})", g.omega, g.omega_roots);
    for j in 0..4 {
        println!("  duality residual j={j}: {:.1e}", duality_residual(&chi, &g, j));
    }

    let cubic = EllChar::new(7, 3, vec![(Poly::parse(7, "1,1")?, 1), (Poly::parse(7, "1,0,1")?, 2)])?;
    let l = char_l_poly(&cubic)?;
    println!(
        "cubic: degree {}, lambda {}, RH error {:.1e}",
        l.degree,
        l.lambda,
        l.rh_error(7)
    );
    let g = gauss_sum(&cubic)?;
    println!("  omega mismatch {:.1e}", g.omega_mismatch());
    Ok(())
}
