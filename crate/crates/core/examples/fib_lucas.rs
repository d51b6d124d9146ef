//! Fibonacci and Lucas numbers at signed indices, and the integer identities
//! that tie them together.

use fibsum::{check_int_identity, fib, lucas, IdentityTag, DEFAULT_INDEX_CAP};

fn main() -> fibsum::Result<()> {
    for n in [-10, -3, 0, 1, 10, 100] {
        println!("F({n}) = {}    L({n}) = {}", fib(n)?, lucas(n)?);
    }
    let digits = fib(1_000_000)?.to_string().len();
    println!("F(1000000) has {digits} digits");

    for tag in IdentityTag::ALL {
        let ok = check_int_identity(tag, 37, -12, 5, DEFAULT_INDEX_CAP)?;
        println!("{:<16} n=37 m=-12 r=5: {ok}", tag.name());
    }
    Ok(())
}
