//! Catalog verification, randomized identity checks, single-series
//! evaluation and the text/JSON/Markdown renderings used by the CLI.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed::{check_identity, series_for, Combination, FormulaId, ParamSet, Verdict};
use crate::error::{Error, Result};
use crate::fib::{check_int_identity, IdentityTag};
use crate::quad::{check_phi_identity, to_decimal, PhiIdentity};
use crate::seq::SeqSpec;
use crate::series::{parse_series, Evaluator, Limits, SumResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub digits: u32,
    pub limits: Limits,
    pub samples: u64,
    pub seed: u64,
    /// Randomized parameter sets drawn for the general telescoping identity.
    pub random_cases: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            digits: 25,
            limits: Limits::default(),
            samples: 1000,
            seed: 0x5eed,
            random_cases: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub formula_id: FormulaId,
    pub params: ParamSet,
    pub lhs_partial: String,
    pub rhs_exact: String,
    pub abs_error_bound: String,
    pub digits_verified: u32,
    pub status: Verdict,
    /// Exact `a + b√5` form of the right-hand side, or the related series.
    #[serde(skip)]
    pub rhs_form: String,
    #[serde(skip)]
    pub notes: Vec<String>,
}

/// Upper-rounded two-significant-digit scientific rendering of `x >= 0`.
pub fn format_bound(x: &BigRational) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let x = x.abs();
    let ten = BigInt::from(10);
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let scaled = |e: i64| -> BigRational {
        if e >= 0 {
            &x / BigRational::from_integer(ten.pow(e as u32))
        } else {
            &x * BigRational::from_integer(ten.pow((-e) as u32))
        }
    };
    let one = BigRational::from_integer(1.into());
    let tenr = BigRational::from_integer(ten.clone());
    let mut m = scaled(e);
    while m >= tenr {
        e += 1;
        m = scaled(e);
    }
    while m < one {
        e -= 1;
        m = scaled(e);
    }
    let mut tenths = (m * BigRational::from_integer(ten.clone()))
        .ceil()
        .to_integer();
    if tenths >= BigInt::from(100) {
        tenths = BigInt::from(10);
        e += 1;
    }
    let s = tenths.to_string();
    format!("{}.{}e{}", &s[..1], &s[1..], e)
}

fn describe_side(c: &Combination) -> String {
    let mut parts = Vec::new();
    for (coef, spec) in &c.terms {
        if coef == &BigRational::from_integer(1.into()) {
            parts.push(format!("[{spec}]"));
        } else {
            parts.push(format!("({coef})*[{spec}]"));
        }
    }
    if !c.constant.is_zero() || parts.is_empty() {
        parts.push(c.constant.to_string());
    }
    parts.join(" + ")
}

/// The fixed list of formula instances checked by [`verify_catalog`].
pub fn catalog(seed: u64, random_cases: usize) -> Vec<(FormulaId, ParamSet)> {
    use FormulaId::*;
    let mut out = Vec::new();
    let p = ParamSet::new;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < random_cases {
        let seq = match rng.gen_range(0..3) {
            0 => SeqSpec::arith(rng.gen_range(1..=4), rng.gen_range(1..=3)),
            1 => SeqSpec::geom(rng.gen_range(1..=2), rng.gen_range(2..=3)),
            _ => SeqSpec::FibIndex,
        };
        let k = rng.gen_range(1..=4);
        let mut t = rng.gen_range(-6..=5);
        if t >= 0 {
            t += 1;
        }
        seen.insert(p().seq(seq).k(k).t(t));
    }
    out.extend(seen.into_iter().map(|ps| (Thm2_1, ps)));

    for seq in [
        SeqSpec::geom(1, 2),
        SeqSpec::geom(1, 3),
        SeqSpec::geom(2, 2),
        SeqSpec::geom(3, 2),
        SeqSpec::arith(1, 1),
        SeqSpec::arith(2, 3),
        SeqSpec::FibIndex,
    ] {
        out.push((Cor2_3, p().seq(seq)));
    }
    for (u1, r, k) in [
        (1, 1, 1),
        (1, 1, 2),
        (1, 2, 1),
        (2, 2, 1),
        (1, 1, 3),
        (2, 3, 2),
        (3, 2, 4),
    ] {
        out.push((Cor2_4, p().u1(u1).r(r).k(k)));
    }
    for (u1, r) in [(1, 1), (1, 2), (2, 3), (3, 4)] {
        out.push((Cor2_4K1, p().u1(u1).r(r)));
    }
    for (k, a) in [(1, 2), (1, 3), (2, 2), (3, 2)] {
        out.push((Eq2_9, p().k(k).a(a)));
    }
    for k in 1..=3 {
        out.push((Eq2_10, p().k(k)));
    }
    for k in 1..=2 {
        out.push((EqC, p().k(k)));
    }
    for (seq, k) in [
        (SeqSpec::arith(1, 1), 1),
        (SeqSpec::arith(1, 1), 2),
        (SeqSpec::arith(2, 3), 1),
        (SeqSpec::FibIndex, 1),
        (SeqSpec::geom(1, 2), 2),
    ] {
        out.push((Thm2_5, p().seq(seq).k(k)));
    }
    for (r, k) in [(1, 1), (1, 2), (2, 1), (3, 2)] {
        out.push((Cor2_6, p().u1(1).r(r).k(k)));
    }
    for (u1, r) in [(1, 1), (1, 2), (2, 3)] {
        out.push((EqE, p().u1(u1).r(r)));
    }
    for r in 1..=4 {
        for k in [1, 3, 5, 7, 9] {
            out.push((EqD, p().r(r).k(k)));
        }
    }
    for seq in [
        SeqSpec::arith(1, 1),
        SeqSpec::arith(1, 2),
        SeqSpec::arith(2, 3),
        SeqSpec::geom(1, 2),
        SeqSpec::geom(1, 3),
    ] {
        out.push((Thm3_1, p().seq(seq)));
    }
    for r in 2..=4 {
        out.push((Thm3_3, p().r(r)));
    }
    for id in [
        Eq2_11, Eq2_12, Eq2_13, Cor3_2, EqB, Eq3_5a, Eq3_5b, Eq3_5c, EqF, Millin, Eq1_12_1,
        Eq1_12_2, Eq1_12_3, Eq1_12_4, Eq1_12_5,
    ] {
        out.push((id, p()));
    }
    out.sort();
    out
}

/// Verifies one formula instance to `digits` certified digits.
pub fn verify_one(
    ev: &Evaluator,
    id: FormulaId,
    params: &ParamSet,
    digits: u32,
) -> VerificationRecord {
    let ident = match series_for(id, params) {
        Ok(i) => i,
        Err(e) => {
            return VerificationRecord {
                formula_id: id,
                params: params.clone(),
                lhs_partial: String::new(),
                rhs_exact: String::new(),
                abs_error_bound: "inf".into(),
                digits_verified: 0,
                status: Verdict::NonCertified,
                rhs_form: String::new(),
                notes: vec![e.to_string()],
            }
        }
    };
    let check = check_identity(ev, &ident, digits);
    let (rhs_exact, rhs_form) = match ident.rhs_constant() {
        Some(c) => (to_decimal(c, digits).to_string(), c.to_string()),
        None => ("relation".to_string(), describe_side(&ident.sides[1])),
    };
    VerificationRecord {
        formula_id: id,
        params: params.clone(),
        lhs_partial: to_decimal(&check.side_values[0], digits).to_string(),
        rhs_exact,
        rhs_form,
        abs_error_bound: format_bound(&check.error_bound),
        digits_verified: check.digits.min(digits.saturating_add(20)),
        status: check.verdict,
        notes: check.notes,
    }
}

/// Verifies every catalog entry in parallel; the output order is the
/// catalog's sorted order regardless of scheduling.
pub fn verify_catalog(config: &RunConfig) -> Vec<VerificationRecord> {
    let ev = Evaluator::new(config.limits);
    catalog(config.seed, config.random_cases)
        .par_iter()
        .map(|(id, ps)| verify_one(&ev, *id, ps, config.digits))
        .collect()
}

pub fn render_markdown(records: &[VerificationRecord], config: &RunConfig) -> String {
    let mut s = String::new();
    let count = |v: Verdict| records.iter().filter(|r| r.status == v).count();
    let _ = writeln!(s, "# Identity verification\n");
    let _ = writeln!(
        s,
        "Target: {} digits, seed {}. {} verified, {} non-certified, {} failed.\n",
        config.digits,
        config.seed,
        count(Verdict::Verified),
        count(Verdict::NonCertified),
        count(Verdict::Failed)
    );
    let _ = writeln!(
        s,
        "| formula | params | status | digits | error bound | rhs |"
    );
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    for r in records {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            r.formula_id,
            r.params.to_string().replace('|', "\\|"),
            r.status,
            r.digits_verified,
            r.abs_error_bound,
            r.rhs_form.replace('|', "\\|")
        );
    }
    s
}

/// Plain-text summary line per record.
pub fn render_text(records: &[VerificationRecord]) -> String {
    let mut s = String::new();
    for r in records {
        let _ = writeln!(
            s,
            "{:<13} {:<10} {:>4} digits  err<={:<9} {}",
            r.status.to_string(),
            r.formula_id.as_str(),
            r.digits_verified,
            r.abs_error_bound,
            r.params
        );
        for n in &r.notes {
            let _ = writeln!(s, "    note: {n}");
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub samples: u64,
    /// `(checked, failed)` per identity tag.
    pub per_tag: BTreeMap<String, (u64, u64)>,
    pub counterexamples: Vec<String>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} samples {}", self.seed, self.samples)?;
        for (tag, (n, bad)) in &self.per_tag {
            writeln!(f, "  {tag:<16} {n:>6} checked {bad:>3} failed")?;
        }
        for c in &self.counterexamples {
            writeln!(f, "  counterexample: {c}")?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all identities held"
            } else {
                "identity failures found"
            }
        )
    }
}

/// Checks randomly drawn integer and `Phi`-power identities. The same seed
/// always draws the same cases.
pub fn fuzz_identities(samples: u64, seed: u64, index_cap: u64) -> Result<FuzzSummary> {
    if samples == 0 {
        return Err(Error::Config("fuzz needs at least one sample".into()));
    }
    const SPAN: i64 = 60;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_tag: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for t in IdentityTag::ALL {
        per_tag.insert(t.name().into(), (0, 0));
    }
    for t in PhiIdentity::ALL {
        per_tag.insert(t.name().into(), (0, 0));
    }
    let mut counterexamples = Vec::new();
    for _ in 0..samples {
        let which = rng.gen_range(0..8);
        let n = rng.gen_range(-SPAN..=SPAN);
        let m = rng.gen_range(-SPAN..=SPAN);
        let r = rng.gen_range(-SPAN..=SPAN);
        let (name, ok) = if which < 4 {
            let tag = IdentityTag::ALL[which];
            (tag.name(), check_int_identity(tag, n, m, r, index_cap)?)
        } else {
            let tag = PhiIdentity::ALL[which - 4];
            (tag.name(), check_phi_identity(tag, n, r, index_cap)?)
        };
        let entry = per_tag.get_mut(name).expect("tag registered");
        entry.0 += 1;
        if !ok {
            entry.1 += 1;
            counterexamples.push(format!("{name} n={n} m={m} r={r}"));
        }
    }
    Ok(FuzzSummary {
        seed,
        samples,
        per_tag,
        counterexamples,
    })
}

#[derive(Debug, Clone)]
pub struct EvalOutput {
    pub spec: String,
    pub digits: u32,
    pub result: SumResult,
    pub hit_term_cap: bool,
}

impl fmt::Display for EvalOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.result;
        writeln!(f, "series  {}", self.spec)?;
        writeln!(f, "terms   {}", r.terms_used)?;
        writeln!(f, "tail    <= {}", format_bound(&r.tail))?;
        let status = match (r.certified, self.hit_term_cap) {
            (true, false) => "certified",
            (true, true) => "term cap reached, certified to fewer digits",
            (false, _) => "not certified",
        };
        writeln!(f, "status  {status}")?;
        write!(f, "sum     {}", to_decimal(&r.partial, self.digits))?;
        if !r.partial.b.is_zero() {
            write!(f, "\nexact   {}", r.partial)?;
        }
        Ok(())
    }
}

/// Parses `text` and sums it to `digits` certified digits.
pub fn eval_series(text: &str, digits: u32, limits: Limits) -> Result<EvalOutput> {
    let spec = parse_series(text)?;
    let ev = Evaluator::new(limits);
    let (result, hit_term_cap) = match ev.sum_to_precision(&spec, digits.saturating_add(1)) {
        Ok(r) => (r, false),
        Err(Error::TermCap { best, .. }) => (*best, true),
        Err(e) => return Err(e),
    };
    Ok(EvalOutput {
        spec: spec.to_string(),
        digits,
        result,
        hit_term_cap,
    })
}
