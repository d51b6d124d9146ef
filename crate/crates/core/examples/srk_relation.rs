//! The relation between S(r,k) and S(r,1) for odd k, checked to 40 digits.

use fibsum::srk_relation_check;

fn main() -> fibsum::Result<()> {
    for r in 1..=5 {
        let row: Vec<String> = [1, 3, 5, 7, 9, 11]
            .iter()
            .map(|&k| {
                Ok(format!(
                    "k={k}:{}",
                    if srk_relation_check(r, k, 40)? {
                        "ok"
                    } else {
                        "--"
                    }
                ))
            })
            .collect::<fibsum::Result<_>>()?;
        println!("r={r}  {}", row.join("  "));
    }
    match srk_relation_check(2, 4, 40) {
        Err(e) => println!("k=4: {e}"),
        Ok(v) => println!("k=4: {v}"),
    }
    Ok(())
}
