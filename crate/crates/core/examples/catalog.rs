//! Verify every catalogued identity and print a Markdown report.

use fibsum::report::{render_markdown, verify_catalog, RunConfig};
use fibsum::Verdict;

fn main() {
    let config = RunConfig {
        digits: 30,
        ..RunConfig::default()
    };
    let records = verify_catalog(&config);
    print!("{}", render_markdown(&records, &config));
    let verified = records
        .iter()
        .filter(|r| r.status == Verdict::Verified)
        .count();
    eprintln!("{verified}/{} verified", records.len());
}
