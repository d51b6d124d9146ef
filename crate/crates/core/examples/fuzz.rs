//! Seeded random checks of the Fibonacci, Lucas and golden-ratio identities.

use fibsum::{fuzz_identities, DEFAULT_INDEX_CAP};

fn main() -> fibsum::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let summary = fuzz_identities(5_000, seed, DEFAULT_INDEX_CAP)?;
    println!("{summary}");
    Ok(())
}
