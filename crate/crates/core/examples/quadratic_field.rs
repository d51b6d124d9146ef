//! Exact arithmetic in Q(sqrt 5): powers of the golden ratio, ordering and
//! certified decimal rendering.

use fibsum::{phi_pow, qsign, to_decimal, QuadExt};

fn main() -> fibsum::Result<()> {
    let phi = QuadExt::phi();
    println!("phi        = {phi}");
    println!("phi^10     = {}", phi_pow(10)?);
    println!("phi^-10    = {}", phi_pow(-10)?);
    println!("phi * conj = {}", &phi * &phi.conj());

    let x = QuadExt::from_parts(161, 72, -1, 1);
    println!("161/72 - sqrt5 = {x}, sign {}", qsign(&x));
    println!("             ~ {}", to_decimal(&x, 12));

    let y = (&phi + &QuadExt::one()).checked_div(&phi)?;
    println!("(phi + 1)/phi = {y}");
    println!("sqrt 5 to 40 places: {}", to_decimal(&QuadExt::sqrt5(), 40));
    Ok(())
}
