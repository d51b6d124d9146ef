//! Parse series from text and sum them to a requested number of digits.
//!
//! Run with a series argument, e.g.
//! `cargo run --example series_eval -- "type1 fibidx k=2 sign=altun" 40`.

use fibsum::report::eval_series;
use fibsum::Limits;

fn main() -> fibsum::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let specs = if args.is_empty() {
        vec![
            "type1 arith:1,1 k=2".to_string(),
            "type2 arith:1,2 sign=altunminusn".to_string(),
            "pair arith:3,3".to_string(),
            "lucasfib k=1 from=0".to_string(),
            "converr".to_string(),
        ]
    } else {
        vec![args[0].clone()]
    };
    let digits = args.get(1).and_then(|d| d.parse().ok()).unwrap_or(30);
    for s in specs {
        println!("{}\n", eval_series(&s, digits, Limits::default())?);
    }
    Ok(())
}
