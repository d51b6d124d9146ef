//! Index sequences `(u_n)` driving the series families.
//!
//! Textual form: `arith:u1,r`, `geom:k,a`, `fibidx`, `explicit:v1,v2,...`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeqSpec {
    /// `u_n = u1 + r (n - 1)`
    Arithmetic { u1: u64, r: u64 },
    /// `u_n = k a^n`
    Geometric { k: u64, a: u64 },
    /// `u_n = F(n)`
    FibIndex,
    /// A finite prefix `u_1, u_2, ...`. Past the end the sequence is only
    /// assumed to keep strictly increasing.
    Explicit(Vec<u64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    TendsToInfinity,
    StrictlyIncreasing,
    ParityMatchesIndex,
}

const FIB_U64: [u64; 94] = {
    let mut t = [0u64; 94];
    t[1] = 1;
    let mut i = 2;
    while i < 94 {
        t[i] = t[i - 1] + t[i - 2];
        i += 1;
    }
    t
};

fn overflow() -> Error {
    Error::domain("sequence term overflows u64")
}

impl SeqSpec {
    pub fn arith(u1: u64, r: u64) -> Self {
        SeqSpec::Arithmetic { u1, r }
    }

    pub fn geom(k: u64, a: u64) -> Self {
        SeqSpec::Geometric { k, a }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SeqSpec::Arithmetic { u1, r } if *u1 == 0 || *r == 0 => Err(Error::domain(
                "arithmetic sequence needs u1 >= 1 and r >= 1",
            )),
            SeqSpec::Geometric { k, a } if *k == 0 || *a < 2 => {
                Err(Error::domain("geometric sequence needs k >= 1 and a >= 2"))
            }
            SeqSpec::Explicit(v) if v.is_empty() => Err(Error::domain(
                "explicit sequence must list at least one term",
            )),
            SeqSpec::Explicit(v) if v.contains(&0) => {
                Err(Error::domain("explicit sequence terms must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Number of defined terms, `None` when unbounded.
    pub fn len(&self) -> Option<u64> {
        match self {
            SeqSpec::Explicit(v) => Some(v.len() as u64),
            _ => None,
        }
    }

    /// `u_n`. Index 0 is accepted where the closed formula stays positive
    /// (geometric `u_0 = k`, arithmetic `u_0 = u1 - r` when `u1 > r`).
    pub fn term(&self, n: u64) -> Result<u64> {
        let v = match self {
            SeqSpec::Arithmetic { u1, r } => {
                if n == 0 {
                    u1.checked_sub(*r).unwrap_or(0)
                } else {
                    r.checked_mul(n - 1)
                        .and_then(|x| x.checked_add(*u1))
                        .ok_or_else(overflow)?
                }
            }
            SeqSpec::Geometric { k, a } => {
                let exp = u32::try_from(n).map_err(|_| overflow())?;
                a.checked_pow(exp)
                    .and_then(|p| p.checked_mul(*k))
                    .ok_or_else(overflow)?
            }
            SeqSpec::FibIndex => *FIB_U64.get(n as usize).ok_or_else(overflow)?,
            SeqSpec::Explicit(v) => {
                if n == 0 || n > v.len() as u64 {
                    return Err(Error::domain(format!(
                        "explicit sequence has terms 1..={}, asked for {n}",
                        v.len()
                    )));
                }
                v[(n - 1) as usize]
            }
        };
        if v == 0 {
            return Err(Error::domain(format!("u_{n} is not a positive integer")));
        }
        Ok(v)
    }

    /// A lower bound for `u_n` that never fails: exact where computable,
    /// `u64::MAX` past overflow, and `last + (n - len)` past an explicit list.
    pub(crate) fn term_lower_bound(&self, n: u64) -> u64 {
        match self {
            SeqSpec::Explicit(v) if n > v.len() as u64 => {
                let last = *v.last().unwrap_or(&1);
                last.saturating_add(n - v.len() as u64)
            }
            _ => match self.term(n) {
                Ok(v) => v,
                Err(_) if n == 0 => 0,
                Err(_) => u64::MAX,
            },
        }
    }

    /// Whether `u_{n+1} > u_n` holds for every `n >= from`.
    ///
    /// Explicit lists are checked over their defined prefix; beyond it the
    /// strictly increasing tail rule is assumed.
    pub fn increasing_from(&self, from: u64) -> bool {
        match self {
            SeqSpec::Arithmetic { .. } | SeqSpec::Geometric { .. } => true,
            SeqSpec::FibIndex => from >= 2,
            SeqSpec::Explicit(v) => {
                let start = from.max(1) as usize;
                v.windows(2).skip(start - 1).all(|w| w[1] > w[0])
            }
        }
    }

    /// Common difference of an arithmetic sequence.
    pub fn common_difference(&self) -> Option<u64> {
        match self {
            SeqSpec::Arithmetic { r, .. } => Some(*r),
            _ => None,
        }
    }
}

/// Evaluates `u_n` (see [`SeqSpec::term`]).
pub fn seq_term(spec: &SeqSpec, n: u64) -> Result<u64> {
    spec.term(n)
}

fn windowed(spec: &SeqSpec, req: Requirement, horizon: u64) -> bool {
    let terms: Vec<u64> = (1..=horizon).map_while(|n| spec.term(n).ok()).collect();
    match req {
        Requirement::StrictlyIncreasing => terms.windows(2).all(|w| w[1] > w[0]),
        Requirement::ParityMatchesIndex => terms
            .iter()
            .enumerate()
            .all(|(i, u)| (u % 2) == ((i as u64 + 1) % 2)),
        Requirement::TendsToInfinity => match terms.split_last() {
            Some((last, rest)) => rest.iter().all(|u| u < last),
            None => false,
        },
    }
}

/// Checks a structural requirement over `n = 1..=horizon`.
///
/// Arithmetic, geometric and Fibonacci-index sequences are decided from
/// their parameters; explicit lists are checked over the window.
pub fn seq_validate(spec: &SeqSpec, req: Requirement, horizon: u64) -> bool {
    let horizon = horizon.max(2);
    match (spec, req) {
        (SeqSpec::Explicit(v), _) => windowed(spec, req, horizon.min(v.len() as u64)),
        (_, Requirement::TendsToInfinity) => true,
        (SeqSpec::FibIndex, Requirement::StrictlyIncreasing) => false,
        (_, Requirement::StrictlyIncreasing) => true,
        (SeqSpec::Arithmetic { u1, r }, Requirement::ParityMatchesIndex) => {
            u1 % 2 == 1 && r % 2 == 1
        }
        // k a is odd forces k a^2 odd as well
        (SeqSpec::Geometric { .. }, Requirement::ParityMatchesIndex) => false,
        // F(2) = 1 is odd
        (SeqSpec::FibIndex, Requirement::ParityMatchesIndex) => false,
    }
}

impl fmt::Display for SeqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqSpec::Arithmetic { u1, r } => write!(f, "arith:{u1},{r}"),
            SeqSpec::Geometric { k, a } => write!(f, "geom:{k},{a}"),
            SeqSpec::FibIndex => f.write_str("fibidx"),
            SeqSpec::Explicit(v) => {
                f.write_str("explicit:")?;
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Parses a sequence token whose first byte sits at `offset` in a larger input.
pub(crate) fn parse_seq_at(s: &str, offset: usize) -> Result<SeqSpec> {
    let (head, body) = match s.split_once(':') {
        Some((h, b)) => (h, Some(b)),
        None => (s, None),
    };
    let body_pos = offset + head.len() + 1;
    let numbers = |body: Option<&str>| -> Result<Vec<u64>> {
        let body =
            body.ok_or_else(|| Error::parse(offset, format!("`{head}` needs `:` and values")))?;
        let mut out = Vec::new();
        let mut pos = body_pos;
        for part in body.split(',') {
            let v = part.trim().parse::<u64>().map_err(|_| {
                Error::parse(
                    pos,
                    format!("expected a non-negative integer, found `{part}`"),
                )
            })?;
            out.push(v);
            pos += part.len() + 1;
        }
        Ok(out)
    };
    let spec = match head {
        "arith" | "geom" => {
            let v = numbers(body)?;
            if v.len() != 2 {
                return Err(Error::parse(
                    body_pos,
                    format!("`{head}` takes exactly two values"),
                ));
            }
            if head == "arith" {
                SeqSpec::Arithmetic { u1: v[0], r: v[1] }
            } else {
                SeqSpec::Geometric { k: v[0], a: v[1] }
            }
        }
        "fibidx" => {
            if body.is_some() {
                return Err(Error::parse(body_pos, "`fibidx` takes no values"));
            }
            SeqSpec::FibIndex
        }
        "explicit" => SeqSpec::Explicit(numbers(body)?),
        other => {
            return Err(Error::parse(
                offset,
                format!("unknown sequence `{other}` (expected arith, geom, fibidx or explicit)"),
            ))
        }
    };
    spec.validate()
        .map_err(|e| Error::parse(offset, e.to_string()))?;
    Ok(spec)
}

impl FromStr for SeqSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_seq_at(s.trim(), 0)
    }
}
