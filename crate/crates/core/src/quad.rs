//! Exact arithmetic in Q(sqrt 5) and certified decimal rendering.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::fib::{fib_capped, fib_lucas_capped, DEFAULT_INDEX_CAP};

/// Guard digits carried beyond the requested precision when bracketing sqrt 5.
pub const GUARD_DIGITS: u32 = 10;

/// `a + b * sqrt(5)` with rational `a`, `b`.
///
/// Both coordinates are kept in lowest terms, so structural equality is
/// value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadExt { a, b }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        QuadExt::rational(BigRational::from_integer(n.into()))
    }

    pub fn rational(a: BigRational) -> Self {
        QuadExt {
            a,
            b: BigRational::zero(),
        }
    }

    /// Convenience constructor `an/ad + (bn/bd) sqrt 5`.
    pub fn from_parts(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QuadExt::new(ratio(an, ad), ratio(bn, bd))
    }

    pub fn zero() -> Self {
        QuadExt::default_zero()
    }

    fn default_zero() -> Self {
        QuadExt {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        QuadExt::from_int(1)
    }

    pub fn sqrt5() -> Self {
        QuadExt::from_parts(0, 1, 1, 1)
    }

    /// The golden ratio `(1 + sqrt 5)/2`.
    pub fn phi() -> Self {
        QuadExt::from_parts(1, 2, 1, 2)
    }

    /// `(1 - sqrt 5)/2 = -1/phi`.
    pub fn phi_bar() -> Self {
        QuadExt::from_parts(1, 2, -1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b sqrt 5`.
    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a^2 - 5 b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(5.into()) * &self.b * &self.b
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QuadExt {
            a: &self.a * c,
            b: &self.b * c,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // norm is nonzero for nonzero elements since sqrt 5 is irrational
        let n = self.norm();
        Ok(QuadExt {
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    pub fn checked_div(&self, rhs: &QuadExt) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power by square-and-multiply; negative exponents invert first.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = QuadExt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn signum(&self) -> i8 {
        qsign(self)
    }

    pub fn abs(&self) -> Self {
        if qsign(self) < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Rational interval `[lo, hi]` containing the value, of width at most
    /// `|b| * 10^-w`.
    pub fn enclose(&self, w: u32) -> (BigRational, BigRational) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let (s_lo, s_hi) = sqrt5_bracket(w);
        let x = &self.a + &self.b * &s_lo;
        let y = &self.a + &self.b * &s_hi;
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// A rational upper bound on `|self|` within `|b| * 10^-w` of the truth.
    pub fn abs_upper(&self, w: u32) -> BigRational {
        let (lo, hi) = self.enclose(w);
        lo.abs().max(hi.abs())
    }

    /// A rational lower bound on `|self|` (zero if the enclosure straddles 0).
    pub fn abs_lower(&self, w: u32) -> BigRational {
        let (lo, hi) = self.enclose(w);
        if lo.is_positive() {
            lo
        } else if hi.is_negative() {
            -hi
        } else {
            BigRational::zero()
        }
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::from_int(n)
    }
}

impl From<BigRational> for QuadExt {
    fn from(a: BigRational) -> Self {
        QuadExt::rational(a)
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        QuadExt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        QuadExt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let five = BigRational::from_integer(5.into());
        QuadExt {
            a: &self.a * &rhs.a + five * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &QuadExt) -> QuadExt {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        qsign(&(self - other)).cmp(&0)
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadExt {
    /// `a + b√5`, omitting zero parts; non-integer `b` is parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return fmt_rational(&self.a, f);
        }
        let b_abs = self.b.abs();
        if !self.a.is_zero() {
            fmt_rational(&self.a, f)?;
            f.write_str(if self.b.is_negative() { " - " } else { " + " })?;
        } else if self.b.is_negative() {
            f.write_str("-")?;
        }
        if b_abs.is_one() {
        } else if b_abs.is_integer() {
            write!(f, "{}", b_abs.numer())?;
        } else {
            write!(f, "({}/{})", b_abs.numer(), b_abs.denom())?;
        }
        f.write_str("√5")
    }
}

/// Field operation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn qarith(kind: ArithKind, x: &QuadExt, y: &QuadExt) -> Result<QuadExt> {
    Ok(match kind {
        ArithKind::Add => x + y,
        ArithKind::Sub => x - y,
        ArithKind::Mul => x * y,
        ArithKind::Div => x.checked_div(y)?,
    })
}

/// Exact sign of `a + b sqrt 5`.
pub fn qsign(x: &QuadExt) -> i8 {
    let sa = sign_of(&x.a);
    let sb = sign_of(&x.b);
    if sa == 0 || sb == 0 || sa == sb {
        return if sa != 0 { sa } else { sb };
    }
    // mixed signs: compare a^2 against 5 b^2
    let lhs = &x.a * &x.a;
    let rhs = BigRational::from_integer(5.into()) * &x.b * &x.b;
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => unreachable!("a^2 = 5 b^2 with b != 0 is impossible"),
    }
}

fn sign_of(r: &BigRational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// `phi^n = (L(n) + F(n) sqrt 5)/2`, valid for every integer `n`.
pub fn phi_pow_capped(n: i64, cap: u64) -> Result<QuadExt> {
    let (f, l) = fib_lucas_capped(n, cap)?;
    let two = BigInt::from(2);
    Ok(QuadExt::new(
        BigRational::new(l, two.clone()),
        BigRational::new(f, two),
    ))
}

pub fn phi_pow(n: i64) -> Result<QuadExt> {
    phi_pow_capped(n, DEFAULT_INDEX_CAP)
}

/// `(lo, hi)` with `lo < sqrt 5 < hi` and `hi - lo = 10^-w`.
pub fn sqrt5_bracket(w: u32) -> (BigRational, BigRational) {
    let scale = BigInt::from(10).pow(w);
    let s = (BigInt::from(5) * &scale * &scale).sqrt();
    let lo = BigRational::new(s.clone(), scale.clone());
    let hi = BigRational::new(s + 1, scale);
    (lo, hi)
}

/// A decimal `digits * 10^-scale` within one unit in the last place of the
/// value it was rendered from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalApprox {
    pub digits: BigInt,
    pub scale: u32,
    /// `true` when `digits * 10^-scale` is the value itself.
    pub exact: bool,
}

impl DecimalApprox {
    /// The plain decimal string without the inexact suffix.
    pub fn plain(&self) -> String {
        let neg = self.digits.is_negative();
        let mut s = self.digits.abs().to_str_radix(10);
        let p = self.scale as usize;
        if s.len() <= p {
            s = format!("{}{}", "0".repeat(p + 1 - s.len()), s);
        }
        let (int, frac) = s.split_at(s.len() - p);
        let mut out = String::with_capacity(s.len() + 2);
        if neg {
            out.push('-');
        }
        out.push_str(int);
        if p > 0 {
            out.push('.');
            out.push_str(frac);
        }
        out
    }

    /// The rendered value as an exact rational.
    pub fn value(&self) -> BigRational {
        BigRational::new(self.digits.clone(), BigInt::from(10).pow(self.scale))
    }
}

impl fmt::Display for DecimalApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.plain())?;
        if !self.exact {
            f.write_str("±1ulp")?;
        }
        Ok(())
    }
}

/// Nearest integer, ties away from zero.
fn round_nearest(v: &BigRational) -> BigInt {
    v.round().to_integer()
}

/// Renders `x` with `p` fractional digits and error at most `10^-p`.
///
/// sqrt 5 is bracketed by integer square roots at `p + GUARD_DIGITS` digits,
/// plus enough further digits to absorb the size of the `b` coordinate, and
/// the lower end of the resulting enclosure is rounded to nearest.
pub fn to_decimal(x: &QuadExt, p: u32) -> DecimalApprox {
    let scale = BigInt::from(10).pow(p);
    let scale_r = BigRational::from_integer(scale);
    if x.b.is_zero() {
        let v = &x.a * &scale_r;
        return if v.is_integer() {
            DecimalApprox {
                digits: v.to_integer(),
                scale: p,
                exact: true,
            }
        } else {
            DecimalApprox {
                digits: round_nearest(&v),
                scale: p,
                exact: false,
            }
        };
    }
    // |b| <= 10^extra keeps the enclosure width below 10^-(p + GUARD_DIGITS)
    let b_ceil = x.b.abs().ceil().to_integer();
    let extra = b_ceil.to_str_radix(10).len() as u32;
    let (lo, _) = x.enclose(p + GUARD_DIGITS + extra);
    DecimalApprox {
        digits: round_nearest(&(lo * scale_r)),
        scale: p,
        exact: false,
    }
}

/// Largest `d` with `bound <= 10^-d`, or `None` when `bound` is zero.
pub fn certified_digits(bound: &BigRational) -> Option<u32> {
    if bound.is_zero() {
        return None;
    }
    let q = (bound.denom() / bound.numer()).abs();
    if q.is_zero() {
        return Some(0);
    }
    Some(q.to_str_radix(10).len() as u32 - 1)
}

/// Identities in Q(sqrt 5) tying powers of phi to F and L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhiIdentity {
    /// `F(n) = (phi^n - phibar^n)/sqrt 5`
    Binet,
    /// `L(n) = phi^n + phibar^n`
    LucasBinet,
    /// `phi^n F(r) = phi^r F(n) + (-1)^(r+1) F(n-r)`
    PhiShift,
    /// `phibar^n F(r) = phibar^r F(n) + (-1)^(r+1) F(n-r)`
    PhiBarShift,
}

impl PhiIdentity {
    pub const ALL: [PhiIdentity; 4] = [
        PhiIdentity::Binet,
        PhiIdentity::LucasBinet,
        PhiIdentity::PhiShift,
        PhiIdentity::PhiBarShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PhiIdentity::Binet => "Binet",
            PhiIdentity::LucasBinet => "LucasBinet",
            PhiIdentity::PhiShift => "PhiShift",
            PhiIdentity::PhiBarShift => "PhiBarShift",
        }
    }
}

/// Checks a phi identity exactly. Powers of phi and phibar are taken by
/// repeated multiplication in the field, independent of [`phi_pow`].
pub fn check_phi_identity(tag: PhiIdentity, n: i64, r: i64, cap: u64) -> Result<bool> {
    let fib_q = |i: i64| -> Result<QuadExt> { Ok(QuadExt::from_int(fib_capped(i, cap)?)) };
    let ok = match tag {
        PhiIdentity::Binet => {
            let diff = QuadExt::phi().pow(n)? - QuadExt::phi_bar().pow(n)?;
            diff.checked_div(&QuadExt::sqrt5())? == fib_q(n)?
        }
        PhiIdentity::LucasBinet => {
            let sum = QuadExt::phi().pow(n)? + QuadExt::phi_bar().pow(n)?;
            sum == QuadExt::from_int(crate::fib::lucas_capped(n, cap)?)
        }
        PhiIdentity::PhiShift | PhiIdentity::PhiBarShift => {
            let base = if tag == PhiIdentity::PhiShift {
                QuadExt::phi()
            } else {
                QuadExt::phi_bar()
            };
            let n_minus_r = n
                .checked_sub(r)
                .ok_or_else(|| Error::domain("index arithmetic overflowed i64"))?;
            let lhs = base.pow(n)? * fib_q(r)?;
            let mut tail = fib_q(n_minus_r)?;
            if (r as i128 + 1).rem_euclid(2) == 1 {
                tail = -tail;
            }
            let rhs = base.pow(r)? * fib_q(n)? + tail;
            lhs == rhs
        }
    };
    Ok(ok)
}
