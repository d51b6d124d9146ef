//! Fibonacci and Lucas numbers at arbitrary signed indices.
//!
//! Values are computed with the fast-doubling recurrences
//! `F(2m) = F(m)(2F(m+1) - F(m))` and `F(2m+1) = F(m)^2 + F(m+1)^2`, so an
//! index `n` costs `O(log |n|)` big-integer multiplications. Negative indices
//! are folded onto positive ones with `F(-n) = (-1)^(n+1) F(n)` and
//! `L(-n) = (-1)^n L(n)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default bound on `|n|` for every Fibonacci/Lucas evaluation.
pub const DEFAULT_INDEX_CAP: u64 = 10_000_000;

/// `(F(n), F(n+1))` for `n >= 0`, by fast doubling from the top bit down.
pub(crate) fn fib_pair_unchecked(n: u64) -> (BigInt, BigInt) {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    if n == 0 {
        return (a, b);
    }
    let bits = 64 - n.leading_zeros();
    for i in (0..bits).rev() {
        let two_b_minus_a: BigInt = (&b << 1usize) - &a;
        let c = &a * two_b_minus_a;
        let d = &a * &a + &b * &b;
        if (n >> i) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

fn check_cap(n: i128, cap: u64) -> Result<u64> {
    let abs = n.unsigned_abs();
    if abs > cap as u128 {
        return Err(Error::IndexCap { index: n, cap });
    }
    Ok(abs as u64)
}

fn negate_if(x: BigInt, flip: bool) -> BigInt {
    if flip {
        -x
    } else {
        x
    }
}

/// `F(n)` with an explicit index cap.
pub fn fib_capped(n: i64, cap: u64) -> Result<BigInt> {
    let m = check_cap(n as i128, cap)?;
    let (f, _) = fib_pair_unchecked(m);
    // F(-m) = (-1)^(m+1) F(m): negative exactly when m is even.
    Ok(negate_if(f, n < 0 && m % 2 == 0))
}

/// `L(n)` with an explicit index cap.
pub fn lucas_capped(n: i64, cap: u64) -> Result<BigInt> {
    let m = check_cap(n as i128, cap)?;
    let (f, g) = fib_pair_unchecked(m);
    let l = (g << 1usize) - f;
    Ok(negate_if(l, n < 0 && m % 2 == 1))
}

/// `(F(n), L(n))` from a single doubling pass.
pub fn fib_lucas_capped(n: i64, cap: u64) -> Result<(BigInt, BigInt)> {
    let m = check_cap(n as i128, cap)?;
    let (f, g) = fib_pair_unchecked(m);
    let l = (g << 1usize) - &f;
    let neg = n < 0;
    Ok((
        negate_if(f, neg && m % 2 == 0),
        negate_if(l, neg && m % 2 == 1),
    ))
}

/// The Fibonacci number `F(n)` for any signed `n` with `|n| <= DEFAULT_INDEX_CAP`.
pub fn fib(n: i64) -> Result<BigInt> {
    fib_capped(n, DEFAULT_INDEX_CAP)
}

/// The Lucas number `L(n)` for any signed `n` with `|n| <= DEFAULT_INDEX_CAP`.
pub fn lucas(n: i64) -> Result<BigInt> {
    lucas_capped(n, DEFAULT_INDEX_CAP)
}

/// Integer identities between Fibonacci and Lucas numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityTag {
    /// `F(-n) = (-1)^(n+1) F(n)`
    NegIndex,
    /// `L(n) = F(n-1) + F(n+1)`
    LucasFromFib,
    /// `F(2n) = F(n) L(n)`
    FibLucasProduct,
    /// `F(r) F(n-m) = (-1)^m (F(n) F(m+r) - F(m) F(n+r))`
    GenSubtraction,
}

impl IdentityTag {
    pub const ALL: [IdentityTag; 4] = [
        IdentityTag::NegIndex,
        IdentityTag::LucasFromFib,
        IdentityTag::FibLucasProduct,
        IdentityTag::GenSubtraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityTag::NegIndex => "NegIndex",
            IdentityTag::LucasFromFib => "LucasFromFib",
            IdentityTag::FibLucasProduct => "FibLucasProduct",
            IdentityTag::GenSubtraction => "GenSubtraction",
        }
    }
}

fn sum_index(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b)
        .ok_or_else(|| Error::domain("index arithmetic overflowed i64"))
}

/// Evaluates one integer identity exactly. Arguments not used by `tag` are
/// ignored. A `false` result means the arithmetic is broken.
pub fn check_int_identity(tag: IdentityTag, n: i64, m: i64, r: i64, cap: u64) -> Result<bool> {
    let f = |i: i64| fib_capped(i, cap);
    let ok = match tag {
        IdentityTag::NegIndex => {
            let lhs = f(n
                .checked_neg()
                .ok_or_else(|| Error::domain("cannot negate i64::MIN"))?)?;
            let rhs = f(n)?;
            let odd_exponent = (n as i128 + 1).rem_euclid(2) == 1;
            lhs == negate_if(rhs, odd_exponent)
        }
        IdentityTag::LucasFromFib => {
            lucas_capped(n, cap)? == f(sum_index(n, -1)?)? + f(sum_index(n, 1)?)?
        }
        IdentityTag::FibLucasProduct => {
            let two_n = n
                .checked_mul(2)
                .ok_or_else(|| Error::domain("index arithmetic overflowed i64"))?;
            f(two_n)? == f(n)? * lucas_capped(n, cap)?
        }
        IdentityTag::GenSubtraction => {
            let lhs = f(r)? * f(sum_index(n, -m)?)?;
            let inner = f(n)? * f(sum_index(m, r)?)? - f(m)? * f(sum_index(n, r)?)?;
            lhs == negate_if(inner, m.rem_euclid(2) == 1)
        }
    };
    Ok(ok)
}
