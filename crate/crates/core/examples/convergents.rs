//! Continued-fraction convergents of sqrt 5 and how fast their errors shrink.

use fibsum::closed::sqrt5_convergents_by_recurrence;
use fibsum::{sqrt5_convergent, to_decimal, QuadExt};

fn main() -> fibsum::Result<()> {
    let by_recurrence = sqrt5_convergents_by_recurrence(10);
    for (n, r) in (1..).zip(&by_recurrence) {
        assert_eq!(&sqrt5_convergent(n)?, r);
        let err = (QuadExt::rational(r.clone()) - QuadExt::sqrt5()).abs();
        println!(
            "{n:>2}  {:>14}/{:<14} |sqrt5 - r| ~ {}",
            r.numer(),
            r.denom(),
            to_decimal(&err, 20)
        );
    }
    Ok(())
}
