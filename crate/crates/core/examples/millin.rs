//! The reciprocal sum over F(2^n) converges quadratically; a handful of
//! terms certify hundreds of digits.

use fibsum::report::format_bound;
use fibsum::{closed_form, sum_to_precision, to_decimal, FormulaId, ParamSet, SeqSpec, SeriesSpec};

fn main() -> fibsum::Result<()> {
    let spec = SeriesSpec::reciprocal(SeqSpec::geom(1, 2)).starting_at(0);
    let exact = closed_form(FormulaId::Millin, &ParamSet::new())?;
    println!("closed form: {exact}");
    println!("decimal:     {}", to_decimal(&exact, 60));
    for digits in [10, 30, 100, 300, 1000] {
        let r = sum_to_precision(&spec, digits)?;
        println!(
            "{digits:>5} digits: {:>2} terms, tail <= {}",
            r.terms_used,
            format_bound(&r.tail)
        );
    }
    Ok(())
}
