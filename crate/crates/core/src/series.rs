//! Exact partial sums and certified tail bounds for Fibonacci series.
//!
//! Every term is an exact element of Q(sqrt 5) and partial sums are exact;
//! the only approximation is the rational tail bound, which is a proven
//! upper bound on the truncation error.
//!
//! Tail bounds rest on `Phi^(m-2) <= F(m)` for `m >= 1`. Each family gets a
//! majorant `|term_n| <= c * Phi^-(alpha * d_n - beta)` in a driving index
//! `d_n` that strictly increases along the tail, so the remaining terms are
//! dominated by a geometric series with ratio `Phi^-alpha`. Powers of `Phi`
//! are bounded through `Phi^m = (L(m) + F(m) sqrt 5)/2` and `2 < sqrt 5 < 9/4`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::fib::{fib_capped, fib_lucas_capped, fib_pair_unchecked, DEFAULT_INDEX_CAP};
use crate::quad::{phi_pow_capped, QuadExt};
use crate::seq::{parse_seq_at, SeqSpec};

/// Majorant exponents are clamped here; `Phi^-65536` is below `10^-13600`.
pub const MAX_MAJORANT_EXPONENT: u64 = 1 << 16;

/// Largest precision (in digits) accepted by [`Evaluator::sum_to_precision`].
pub const MAX_DIGITS: u32 = 10_000;

/// Accumulated terms between normalisations of a running sum.
const NORMALIZE_EVERY: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Bound on `|n|` for every `F(n)`/`L(n)` evaluated as a term.
    pub index_cap: u64,
    /// Most terms [`Evaluator::sum_to_precision`] may use.
    pub term_cap: u64,
    /// Smallest truncation point that may receive a certified tail bound.
    pub burn_in: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            index_cap: DEFAULT_INDEX_CAP,
            term_cap: 10_000,
            burn_in: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignRule {
    None,
    /// `(-1)^(u_n)`
    AltUn,
    /// `(-1)^(u_n - n)`
    AltUnMinusN,
    /// `(-1)^(r (n - 1))`, arithmetic sequences only
    AltR,
    /// `(-1)^((r - 1)(n - 1))`, arithmetic sequences only
    AltRMinus1,
}

impl SignRule {
    fn name(self) -> &'static str {
        match self {
            SignRule::None => "none",
            SignRule::AltUn => "altun",
            SignRule::AltUnMinusN => "altunminusn",
            SignRule::AltR => "altr",
            SignRule::AltRMinus1 => "altrminus1",
        }
    }

    fn needs_difference(self) -> bool {
        matches!(self, SignRule::AltR | SignRule::AltRMinus1)
    }

    /// `true` when the sign at index `n` is negative.
    fn is_negative(self, seq: &SeqSpec, n: u64, u_n: u64) -> Result<bool> {
        let odd = |x: i128| x.rem_euclid(2) == 1;
        let n_minus_1 = n as i128 - 1;
        Ok(match self {
            SignRule::None => false,
            SignRule::AltUn => odd(u_n as i128),
            SignRule::AltUnMinusN => odd(u_n as i128 - n as i128),
            SignRule::AltR | SignRule::AltRMinus1 => {
                let r = seq.common_difference().ok_or_else(|| {
                    Error::domain("sign rules altr/altrminus1 need an arithmetic sequence")
                })? as i128;
                let base = if self == SignRule::AltR { r } else { r - 1 };
                odd(base * n_minus_1)
            }
        })
    }
}

impl FromStr for SignRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "none" => SignRule::None,
            "altun" => SignRule::AltUn,
            "altunminusn" => SignRule::AltUnMinusN,
            "altr" => SignRule::AltR,
            "altrminus1" => SignRule::AltRMinus1,
            other => return Err(Error::domain(format!("unknown sign rule `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesFamily {
    /// `sign * F(u_{n+k} - u_n) / (F(u_n) F(u_{n+k}))`
    Type1 {
        seq: SeqSpec,
        k: u64,
        sign: SignRule,
    },
    /// `sign / (F(u_n) Phi^(u_n))`
    Type2 { seq: SeqSpec, sign: SignRule },
    /// `1 / F(u_n)`
    Reciprocal { seq: SeqSpec },
    /// `1 / (F(u_{2n}) F(u_{2n-1}))`
    PairProduct { seq: SeqSpec },
    /// `(-1)^(u_{2n-1}+1) F(u_{2n} - u_{2n-1}) / (F(u_{2n}) F(u_{2n-1}))`
    GroupedPair { seq: SeqSpec },
    /// `|sqrt 5 - L(u_n)/F(u_n)|`
    AbsErr { seq: SeqSpec },
    /// `L(k 3^n) / F(k 3^(n+1))`
    LucasOverFib { k: u64 },
    /// `|sqrt 5 - p_n/q_n|` over the continued-fraction convergents of sqrt 5
    /// (`p_1/q_1 = 2/1`)
    ConvergentErr,
}

/// A series: a term rule plus the index of its first term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesSpec {
    pub family: SeriesFamily,
    pub from: u64,
}

impl SeriesSpec {
    pub fn new(family: SeriesFamily) -> Self {
        SeriesSpec { family, from: 1 }
    }

    pub fn starting_at(mut self, from: u64) -> Self {
        self.from = from;
        self
    }

    pub fn type1(seq: SeqSpec, k: u64, sign: SignRule) -> Self {
        SeriesSpec::new(SeriesFamily::Type1 { seq, k, sign })
    }

    pub fn type2(seq: SeqSpec, sign: SignRule) -> Self {
        SeriesSpec::new(SeriesFamily::Type2 { seq, sign })
    }

    pub fn reciprocal(seq: SeqSpec) -> Self {
        SeriesSpec::new(SeriesFamily::Reciprocal { seq })
    }

    pub fn pair_product(seq: SeqSpec) -> Self {
        SeriesSpec::new(SeriesFamily::PairProduct { seq })
    }

    pub fn grouped_pair(seq: SeqSpec) -> Self {
        SeriesSpec::new(SeriesFamily::GroupedPair { seq })
    }

    pub fn abs_err(seq: SeqSpec) -> Self {
        SeriesSpec::new(SeriesFamily::AbsErr { seq })
    }

    pub fn lucas_over_fib(k: u64) -> Self {
        SeriesSpec::new(SeriesFamily::LucasOverFib { k })
    }

    pub fn convergent_err() -> Self {
        SeriesSpec::new(SeriesFamily::ConvergentErr)
    }

    pub fn seq(&self) -> Option<&SeqSpec> {
        match &self.family {
            SeriesFamily::Type1 { seq, .. }
            | SeriesFamily::Type2 { seq, .. }
            | SeriesFamily::Reciprocal { seq }
            | SeriesFamily::PairProduct { seq }
            | SeriesFamily::GroupedPair { seq }
            | SeriesFamily::AbsErr { seq } => Some(seq),
            SeriesFamily::LucasOverFib { .. } | SeriesFamily::ConvergentErr => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(seq) = self.seq() {
            seq.validate()?;
        }
        match &self.family {
            SeriesFamily::Type1 { k: 0, .. } => return Err(Error::domain("type1 needs k >= 1")),
            SeriesFamily::LucasOverFib { k: 0 } => {
                return Err(Error::domain("lucasfib needs k >= 1"))
            }
            SeriesFamily::Type1 { seq, sign, .. } | SeriesFamily::Type2 { seq, sign }
                if sign.needs_difference() && seq.common_difference().is_none() =>
            {
                return Err(Error::domain(format!(
                    "sign rule {} needs an arithmetic sequence",
                    sign.name()
                )))
            }
            SeriesFamily::PairProduct { .. }
            | SeriesFamily::GroupedPair { .. }
            | SeriesFamily::ConvergentErr
                if self.from == 0 =>
            {
                return Err(Error::domain("this family starts at n >= 1"))
            }
            _ => {}
        }
        Ok(())
    }

    /// Number of terms that can be evaluated, `None` when unbounded.
    pub fn available_terms(&self) -> Option<u64> {
        let len = self.seq()?.len()?;
        let last_index = match &self.family {
            SeriesFamily::Type1 { k, .. } => len.checked_sub(*k)?,
            SeriesFamily::PairProduct { .. } | SeriesFamily::GroupedPair { .. } => len / 2,
            _ => len,
        };
        Some((last_index + 1).saturating_sub(self.from))
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            SeriesFamily::Type1 { seq, k, sign } => {
                write!(f, "type1 {seq} k={k} sign={}", sign.name())?
            }
            SeriesFamily::Type2 { seq, sign } => write!(f, "type2 {seq} sign={}", sign.name())?,
            SeriesFamily::Reciprocal { seq } => write!(f, "recip {seq}")?,
            SeriesFamily::PairProduct { seq } => write!(f, "pair {seq}")?,
            SeriesFamily::GroupedPair { seq } => write!(f, "grouped {seq}")?,
            SeriesFamily::AbsErr { seq } => write!(f, "abserr {seq}")?,
            SeriesFamily::LucasOverFib { k } => write!(f, "lucasfib k={k}")?,
            SeriesFamily::ConvergentErr => f.write_str("converr")?,
        }
        if self.from != 1 {
            write!(f, " from={}", self.from)?;
        }
        Ok(())
    }
}

/// Parses `family [sequence] [key=value ...]`, e.g. `type1 arith:1,1 k=2 sign=none`.
///
/// Families: `type1`, `type2`, `recip`, `pair`, `grouped`, `abserr` (all
/// take a sequence), `lucasfib` and `converr`. Keys: `k`, `sign`, `from`.
pub fn parse_series(text: &str) -> Result<SeriesSpec> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push((s, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push((s, &text[s..]));
    }
    let mut it = tokens.into_iter().peekable();
    let (fam_pos, fam) = it
        .next()
        .ok_or_else(|| Error::parse(0, "empty series description"))?;
    let takes_seq = matches!(
        fam,
        "type1" | "type2" | "recip" | "pair" | "grouped" | "abserr"
    );
    if !takes_seq && !matches!(fam, "lucasfib" | "converr") {
        return Err(Error::parse(
            fam_pos,
            format!("unknown series family `{fam}`"),
        ));
    }
    let seq = if takes_seq {
        let (pos, tok) = it
            .next()
            .ok_or_else(|| Error::parse(text.len(), format!("`{fam}` needs a sequence")))?;
        Some(parse_seq_at(tok, pos)?)
    } else {
        None
    };

    let mut k: Option<(usize, u64)> = None;
    let mut sign: Option<(usize, SignRule)> = None;
    let mut from: u64 = 1;
    for (pos, tok) in it {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(pos, format!("expected key=value, found `{tok}`")))?;
        let vpos = pos + key.len() + 1;
        let num = || {
            value.parse::<u64>().map_err(|_| {
                Error::parse(
                    vpos,
                    format!("expected a non-negative integer, found `{value}`"),
                )
            })
        };
        match key {
            "k" => k = Some((pos, num()?)),
            "from" => from = num()?,
            "sign" => {
                let rule = value
                    .parse::<SignRule>()
                    .map_err(|e| Error::parse(vpos, e.to_string()))?;
                sign = Some((pos, rule));
            }
            _ => return Err(Error::parse(pos, format!("unknown key `{key}`"))),
        }
    }
    let reject = |what: Option<usize>, key: &str| -> Result<()> {
        match what {
            Some(p) => Err(Error::parse(p, format!("`{fam}` does not take `{key}`"))),
            None => Ok(()),
        }
    };
    let family = match fam {
        "type1" => SeriesFamily::Type1 {
            seq: seq.expect("sequence parsed"),
            k: k.map_or(1, |(_, v)| v),
            sign: sign.map_or(SignRule::None, |(_, s)| s),
        },
        "type2" => {
            reject(k.map(|(p, _)| p), "k")?;
            SeriesFamily::Type2 {
                seq: seq.expect("sequence parsed"),
                sign: sign.map_or(SignRule::None, |(_, s)| s),
            }
        }
        "lucasfib" => {
            reject(sign.map(|(p, _)| p), "sign")?;
            SeriesFamily::LucasOverFib {
                k: k.map_or(1, |(_, v)| v),
            }
        }
        _ => {
            reject(k.map(|(p, _)| p), "k")?;
            reject(sign.map(|(p, _)| p), "sign")?;
            match fam {
                "recip" => SeriesFamily::Reciprocal {
                    seq: seq.expect("sequence parsed"),
                },
                "pair" => SeriesFamily::PairProduct {
                    seq: seq.expect("sequence parsed"),
                },
                "grouped" => SeriesFamily::GroupedPair {
                    seq: seq.expect("sequence parsed"),
                },
                "abserr" => SeriesFamily::AbsErr {
                    seq: seq.expect("sequence parsed"),
                },
                _ => SeriesFamily::ConvergentErr,
            }
        }
    };
    let spec = SeriesSpec { family, from };
    spec.validate()
        .map_err(|e| Error::parse(fam_pos, e.to_string()))?;
    Ok(spec)
}

impl FromStr for SeriesSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_series(s)
    }
}

/// Outcome of summing a series to a target precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumResult {
    pub partial: QuadExt,
    pub terms_used: u64,
    /// Upper bound on `|true sum - partial|` when `certified`.
    pub tail: BigRational,
    pub certified: bool,
}

/// A tail bound, or the reason none could be certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Bound(BigRational),
    Uncertified(String),
}

impl Tail {
    pub fn bound(&self) -> Option<&BigRational> {
        match self {
            Tail::Bound(b) => Some(b),
            Tail::Uncertified(_) => None,
        }
    }
}

/// Running sum in Q(sqrt 5) kept as unreduced fractions, reduced every
/// [`NORMALIZE_EVERY`] additions.
struct Accumulator {
    a: (BigInt, BigInt),
    b: (BigInt, BigInt),
    pending: u32,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            a: (BigInt::zero(), BigInt::one()),
            b: (BigInt::zero(), BigInt::one()),
            pending: 0,
        }
    }

    fn add_frac(acc: &mut (BigInt, BigInt), x: &BigRational) {
        if x.is_zero() {
            return;
        }
        if acc.1 == *x.denom() {
            acc.0 += x.numer();
        } else {
            acc.0 = &acc.0 * x.denom() + x.numer() * &acc.1;
            acc.1 *= x.denom();
        }
    }

    fn reduce(acc: &mut (BigInt, BigInt)) {
        let g = acc.0.gcd(&acc.1);
        if !g.is_one() && !g.is_zero() {
            acc.0 /= &g;
            acc.1 /= &g;
        }
    }

    fn add(&mut self, x: &QuadExt) {
        Self::add_frac(&mut self.a, &x.a);
        Self::add_frac(&mut self.b, &x.b);
        self.pending += 1;
        if self.pending >= NORMALIZE_EVERY {
            Self::reduce(&mut self.a);
            Self::reduce(&mut self.b);
            self.pending = 0;
        }
    }

    fn finish(self) -> QuadExt {
        QuadExt::new(
            BigRational::new(self.a.0, self.a.1),
            BigRational::new(self.b.0, self.b.1),
        )
    }
}

/// Convergent numerators/denominators of `sqrt 5 = [2; 4, 4, 4, ...]`.
pub(crate) struct Sqrt5Convergents {
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
}

impl Sqrt5Convergents {
    pub(crate) fn new() -> Self {
        Sqrt5Convergents {
            prev: (BigInt::one(), BigInt::zero()),
            cur: (BigInt::from(2), BigInt::one()),
        }
    }
}

impl Iterator for Sqrt5Convergents {
    type Item = (BigInt, BigInt);
    fn next(&mut self) -> Option<Self::Item> {
        let out = self.cur.clone();
        let four = BigInt::from(4);
        let next = (
            &four * &self.cur.0 + &self.prev.0,
            &four * &self.cur.1 + &self.prev.1,
        );
        self.prev = std::mem::replace(&mut self.cur, next);
        Some(out)
    }
}

fn recip(x: BigInt) -> Result<BigRational> {
    if x.is_zero() {
        return Err(Error::domain("division by F(0)"));
    }
    Ok(BigRational::new(BigInt::one(), x))
}

/// `|sqrt 5 - c|` for rational `c`, exactly.
fn abs_dist_sqrt5(c: BigRational) -> QuadExt {
    (QuadExt::sqrt5() - QuadExt::rational(c)).abs()
}

/// Upper bound on `Phi^-e` (any sign of `e`), clamping large exponents.
fn phi_inv_pow_upper(e: i128) -> BigRational {
    let two = BigInt::from(2);
    if e >= 0 {
        let m = (e as u128).min(MAX_MAJORANT_EXPONENT as u128) as u64;
        let (f, g) = fib_pair_unchecked(m);
        let l = (g << 1usize) - &f;
        // Phi^m > (L + 2F)/2
        BigRational::new(two, l + f * 2)
    } else {
        let m = (-e) as u64;
        let (f, g) = fib_pair_unchecked(m);
        let l = (g << 1usize) - &f;
        // Phi^m < (L + 9F/4)/2
        BigRational::new(l * 4 + f * 9, BigInt::from(8))
    }
}

/// `|term_n| <= coef * Phi^-(slope * d_n - offset)` for the family's driving
/// index `d_n`, which increases by at least one per step along the tail.
struct Majorant {
    coef: BigRational,
    slope: u32,
    offset: i128,
}

impl Majorant {
    fn ratio_complement(&self) -> BigRational {
        // 1 - rho with Phi^-1 < 5/8 and Phi^-2 < 2/5
        if self.slope == 1 {
            BigRational::new(3.into(), 8.into())
        } else {
            BigRational::new(3.into(), 5.into())
        }
    }

    fn tail_from(&self, driver: u64) -> BigRational {
        let e = self.slope as i128 * driver as i128 - self.offset;
        &self.coef * phi_inv_pow_upper(e) / self.ratio_complement()
    }
}

/// Evaluates terms, partial sums and tail bounds under a set of [`Limits`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Evaluator {
    pub limits: Limits,
}

impl Evaluator {
    pub fn new(limits: Limits) -> Self {
        Evaluator { limits }
    }

    fn fib(&self, i: i128) -> Result<BigInt> {
        let cap = self.limits.index_cap;
        let n = i64::try_from(i).map_err(|_| Error::IndexCap { index: i, cap })?;
        fib_capped(n, cap)
    }

    fn fib_lucas(&self, i: u64) -> Result<(BigInt, BigInt)> {
        let cap = self.limits.index_cap;
        let n = i64::try_from(i).map_err(|_| Error::IndexCap {
            index: i as i128,
            cap,
        })?;
        fib_lucas_capped(n, cap)
    }

    fn inv_fib(&self, i: u64) -> Result<BigRational> {
        recip(self.fib(i as i128)?)
    }

    /// `sign * F(v - u) / (F(u) F(v))`
    fn difference_ratio(&self, u: u64, v: u64, negative: bool) -> Result<BigRational> {
        let num = self.fib(v as i128 - u as i128)?;
        let den = self.fib(u as i128)? * self.fib(v as i128)?;
        if den.is_zero() {
            return Err(Error::domain("division by F(0)"));
        }
        let x = BigRational::new(num, den);
        Ok(if negative { -x } else { x })
    }

    /// The exact value of term `n` (`n >= spec.from`).
    pub fn term_value(&self, spec: &SeriesSpec, n: u64) -> Result<QuadExt> {
        if n < spec.from {
            return Err(Error::domain(format!(
                "term index {n} precedes the first index {}",
                spec.from
            )));
        }
        let mut v = self.terms(spec, n, 1)?;
        Ok(v.pop().expect("one term requested"))
    }

    /// Terms `n0, n0+1, ..., n0+count-1`.
    fn terms(&self, spec: &SeriesSpec, n0: u64, count: u64) -> Result<Vec<QuadExt>> {
        spec.validate()?;
        if let SeriesFamily::ConvergentErr = spec.family {
            if n0 == 0 {
                return Err(Error::domain("convergents are indexed from 1"));
            }
            return Ok(Sqrt5Convergents::new()
                .skip((n0 - 1) as usize)
                .take(count as usize)
                .map(|(p, q)| abs_dist_sqrt5(BigRational::new(p, q)))
                .collect());
        }
        (n0..n0 + count)
            .map(|n| self.single_term(spec, n))
            .collect()
    }

    fn single_term(&self, spec: &SeriesSpec, n: u64) -> Result<QuadExt> {
        Ok(match &spec.family {
            SeriesFamily::Type1 { seq, k, sign } => {
                let u = seq.term(n)?;
                let v = seq.term(n + k)?;
                QuadExt::rational(self.difference_ratio(u, v, sign.is_negative(seq, n, u)?)?)
            }
            SeriesFamily::Type2 { seq, sign } => {
                let u = seq.term(n)?;
                let inv_phi = phi_pow_capped(-(u as i64), self.limits.index_cap)?;
                let mut t = inv_phi.scale(&self.inv_fib(u)?);
                if sign.is_negative(seq, n, u)? {
                    t = -t;
                }
                t
            }
            SeriesFamily::Reciprocal { seq } => QuadExt::rational(self.inv_fib(seq.term(n)?)?),
            SeriesFamily::PairProduct { seq } => {
                let (lo, hi) = pair_indices(seq, n)?;
                QuadExt::rational(recip(self.fib(lo as i128)? * self.fib(hi as i128)?)?)
            }
            SeriesFamily::GroupedPair { seq } => {
                let (lo, hi) = pair_indices(seq, n)?;
                // (-1)^(lo+1) is negative for even lo
                QuadExt::rational(self.difference_ratio(lo, hi, lo % 2 == 0)?)
            }
            SeriesFamily::AbsErr { seq } => {
                let u = seq.term(n)?;
                let (f, l) = self.fib_lucas(u)?;
                if f.is_zero() {
                    return Err(Error::domain("division by F(0)"));
                }
                abs_dist_sqrt5(BigRational::new(l, f))
            }
            SeriesFamily::LucasOverFib { k } => {
                let m = lucas_fib_index(*k, n).ok_or(Error::IndexCap {
                    index: i128::MAX,
                    cap: self.limits.index_cap,
                })?;
                let (_, l) = self.fib_lucas(m)?;
                let f3 = self.fib(3 * m as i128)?;
                QuadExt::rational(BigRational::new(l, f3))
            }
            SeriesFamily::ConvergentErr => {
                let (p, q) = Sqrt5Convergents::new()
                    .nth((n - 1) as usize)
                    .expect("infinite iterator");
                abs_dist_sqrt5(BigRational::new(p, q))
            }
        })
    }

    /// Exact sum of the first `count` terms.
    pub fn partial_sum(&self, spec: &SeriesSpec, count: u64) -> Result<QuadExt> {
        let mut acc = Accumulator::new();
        for t in self.terms(spec, spec.from, count)? {
            acc.add(&t);
        }
        Ok(acc.finish())
    }

    /// Certified bound on `|sum - partial_sum(count)|`.
    pub fn tail_bound(&self, spec: &SeriesSpec, count: u64) -> Tail {
        if let Err(e) = spec.validate() {
            return Tail::Uncertified(e.to_string());
        }
        if count < self.limits.burn_in {
            return Tail::Uncertified(format!(
                "truncation point {count} is below the burn-in {}",
                self.limits.burn_in
            ));
        }
        let n0 = spec.from + count;
        let one = BigRational::one;
        let (majorant, driver) = match &spec.family {
            SeriesFamily::ConvergentErr => {
                // |sqrt 5 - p_n/q_n| < 1/q_n^2 and q_{n+1} >= 4 q_n
                let (_, q) = Sqrt5Convergents::new()
                    .nth((n0 - 1) as usize)
                    .expect("infinite iterator");
                let b = BigRational::new(16.into(), 15.into()) / BigRational::from_integer(&q * &q);
                return Tail::Bound(b);
            }
            SeriesFamily::LucasOverFib { k } => {
                let m = lucas_fib_index(*k, n0).unwrap_or(u64::MAX);
                // L(m)/F(3m) <= 1/(F(m) F(m+1))
                (
                    Majorant {
                        coef: one(),
                        slope: 2,
                        offset: 3,
                    },
                    m,
                )
            }
            family => {
                let seq = spec.seq().expect("sequence family");
                let (driver_index, majorant) = match family {
                    // |F(v-u)|/(F(u)F(v)) <= 1/(F(u)F(u+1)) when v > u
                    SeriesFamily::Type1 { .. } => (
                        n0,
                        Majorant {
                            coef: one(),
                            slope: 2,
                            offset: 3,
                        },
                    ),
                    SeriesFamily::Type2 { .. } => (
                        n0,
                        Majorant {
                            coef: one(),
                            slope: 2,
                            offset: 2,
                        },
                    ),
                    SeriesFamily::Reciprocal { .. } => (
                        n0,
                        Majorant {
                            coef: one(),
                            slope: 1,
                            offset: 2,
                        },
                    ),
                    SeriesFamily::AbsErr { .. } => (
                        n0,
                        Majorant {
                            coef: BigRational::from_integer(2.into()),
                            slope: 2,
                            offset: 2,
                        },
                    ),
                    // both bounded by 1/(F(u_{2n-1}) F(u_{2n-1}+1))
                    _ => (
                        2 * n0 - 1,
                        Majorant {
                            coef: one(),
                            slope: 2,
                            offset: 3,
                        },
                    ),
                };
                if !seq.increasing_from(driver_index) {
                    return Tail::Uncertified(format!(
                        "sequence {seq} is not strictly increasing from index {driver_index}"
                    ));
                }
                (majorant, seq.term_lower_bound(driver_index))
            }
        };
        Tail::Bound(majorant.tail_from(driver))
    }

    /// Sums until the certified tail is at most `10^-p / 2`.
    ///
    /// The truncation point grows by doubling and is then bisected down to
    /// the smallest count that clears the target.
    pub fn sum_to_precision(&self, spec: &SeriesSpec, p: u32) -> Result<SumResult> {
        spec.validate()?;
        if p == 0 || p > MAX_DIGITS {
            return Err(Error::Config(format!(
                "precision must be in 1..={MAX_DIGITS}, got {p}"
            )));
        }
        let target = BigRational::new(BigInt::one(), BigInt::from(2) * BigInt::from(10).pow(p));
        let clears =
            |n: u64| matches!(self.tail_bound(spec, n), Tail::Bound(ref b) if *b <= target);
        let limit = match spec.available_terms() {
            Some(avail) => avail.min(self.limits.term_cap),
            None => self.limits.term_cap,
        };

        let mut hi = self.limits.burn_in.max(1);
        let mut lo = 0;
        while hi <= limit && !clears(hi) {
            lo = hi;
            hi = if hi == limit {
                limit + 1
            } else {
                (hi * 2).min(limit)
            };
        }
        if hi > limit {
            return Err(self.starved(spec, limit, p));
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if mid >= self.limits.burn_in && clears(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let tail = self
            .tail_bound(spec, hi)
            .bound()
            .cloned()
            .expect("bound cleared above");
        Ok(SumResult {
            partial: self.partial_sum(spec, hi)?,
            terms_used: hi,
            tail,
            certified: true,
        })
    }

    fn starved(&self, spec: &SeriesSpec, limit: u64, p: u32) -> Error {
        let best = match self.partial_sum(spec, limit) {
            Ok(partial) => {
                let (tail, certified) = match self.tail_bound(spec, limit) {
                    Tail::Bound(b) => (b, true),
                    Tail::Uncertified(_) => {
                        let last = if limit > 0 {
                            self.term_value(spec, spec.from + limit - 1)
                                .map(|t| t.abs_upper(30))
                                .unwrap_or_else(|_| BigRational::zero())
                        } else {
                            BigRational::zero()
                        };
                        (last, false)
                    }
                };
                SumResult {
                    partial,
                    terms_used: limit,
                    tail,
                    certified,
                }
            }
            Err(e) => return e,
        };
        Error::TermCap {
            cap: limit,
            digits: p,
            best: Box::new(best),
        }
    }
}

fn pair_indices(seq: &SeqSpec, n: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::domain("paired terms start at n = 1"));
    }
    Ok((seq.term(2 * n - 1)?, seq.term(2 * n)?))
}

/// `k 3^n`, or `None` on overflow.
pub(crate) fn lucas_fib_index(k: u64, n: u64) -> Option<u64> {
    3u64.checked_pow(u32::try_from(n).ok()?)?.checked_mul(k)
}

pub fn term_value(spec: &SeriesSpec, n: u64) -> Result<QuadExt> {
    Evaluator::default().term_value(spec, n)
}

pub fn partial_sum(spec: &SeriesSpec, count: u64) -> Result<QuadExt> {
    Evaluator::default().partial_sum(spec, count)
}

pub fn tail_bound(spec: &SeriesSpec, count: u64) -> Tail {
    Evaluator::default().tail_bound(spec, count)
}

pub fn sum_to_precision(spec: &SeriesSpec, p: u32) -> Result<SumResult> {
    Evaluator::default().sum_to_precision(spec, p)
}
