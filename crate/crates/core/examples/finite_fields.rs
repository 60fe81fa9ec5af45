//! Extension fields by table lookup: generator, discrete logs, characters.
use twistlab::ffield::{build_extension, FieldSpec};

fn main() -> twistlab::Result<()> {
    let f25 = build_extension(FieldSpec::new(5)?, 2)?;
    println!("F_25 = F_5[t]/({}), generator {:?}", f25.modulus(), f25.generator());
    let t = f25.t();
    let x = f25.add(t, f25.from_base(3));
    let y = f25.inv(x)?;
    println!("(t+3)^-1 = {:?}, check {:?}", y, f25.mul(x, y));
    println!("log(t+3) = {:?}", f25.log(x));
    println!("quadratic character of t+3: {}", f25.quad_char(x));
    println!("norm of t+3 to F_5: {}", f25.norm(x));

    let f49 = build_extension(FieldSpec::new(7)?, 2)?;
    let z = f49.add(f49.t(), f49.from_base(1));
    println!("cubic character on F_49 at t+1: {:?}", f49.ell_char(z, 3)?);
    Ok(())
}
