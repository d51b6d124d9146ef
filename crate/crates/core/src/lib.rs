//! Exact Fibonacci and Lucas arithmetic, arithmetic in `Q(sqrt 5)`, certified
//! summation of Fibonacci reciprocal series, and verification of their
//! closed-form evaluations.
//!
//! ```
//! use fibsum::{fib, sum_to_precision, SeqSpec, SeriesSpec};
//!
//! assert_eq!(fib(10).unwrap(), 55.into());
//!
//! let millin = SeriesSpec::reciprocal(SeqSpec::geom(1, 2)).starting_at(0);
//! let sum = sum_to_precision(&millin, 30).unwrap();
//! assert!(sum.certified);
//! ```

pub mod closed;
pub mod error;
pub mod fib;
pub mod quad;
pub mod report;
pub mod seq;
pub mod series;

pub use closed::{
    check_identity, closed_form, series_for, sqrt5_convergent, srk_relation_check, Combination,
    FormulaId, IdentityCheck, ParamSet, SeriesIdentity, Verdict,
};
pub use error::{Error, Result};
pub use fib::{
    check_int_identity, fib, fib_capped, lucas, lucas_capped, IdentityTag, DEFAULT_INDEX_CAP,
};
pub use quad::{
    check_phi_identity, phi_pow, qarith, qsign, to_decimal, ArithKind, DecimalApprox, PhiIdentity,
    QuadExt,
};
pub use report::{
    catalog, eval_series, fuzz_identities, render_markdown, render_text, verify_catalog,
    FuzzSummary, RunConfig, VerificationRecord,
};
pub use seq::{seq_term, seq_validate, Requirement, SeqSpec};
pub use series::{
    parse_series, partial_sum, sum_to_precision, tail_bound, term_value, Evaluator, Limits,
    SeriesFamily, SeriesSpec, SignRule, SumResult, Tail,
};
