//! Sums a series given on the command line in p+1Fp form.
//!
//! cargo run --example custom_series -- "1/2,1/2,1" "3/2,3/2" "1" 40
//!
//! The default is 3F2(1/2,1/2,1; 3/2,3/2; 1) = Σ 1/(2n+1)² = π²/8, whose
//! terms decay like 1/n², with 40 partial sums.

use hypersum::qtransform::Path;
use hypersum::series::{classify, to_unit_form};
use hypersum::{format_number, parse_number, q_table, PrecisionConfig};

fn parse_list(
    text: &str,
    precision: &PrecisionConfig,
) -> hypersum::Result<Vec<hypersum::HPComplex>> {
    text.split(',')
        .map(|s| parse_number(s, precision))
        .collect()
}

fn main() -> hypersum::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let get = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let precision = PrecisionConfig::new(40)?;
    let upper = parse_list(&get(0, "1/2,1/2,1"), &precision)?;
    let lower = parse_list(&get(1, "3/2,3/2"), &precision)?;
    let x = parse_number(&get(2, "1"), &precision)?;
    let budget: usize = get(3, "40")
        .parse()
        .map_err(|_| hypersum::Error::Usage("budget must be an integer".into()))?;

    let series = to_unit_form(upper, lower, x, precision)?;
    println!(
        "{:?}, sigma {}",
        classify(&series).kind,
        format_number(&classify(&series).sigma, 6)
    );
    let max_m = (budget - 1) / series.p();
    let table = q_table(&series, budget, max_m, Path::Direct)?;
    println!("s_{budget} = {}", format_number(table.sums().s(budget), 30));
    for m in (1..=max_m).step_by((max_m / 6).max(1)) {
        if let Some(Ok(q)) = table.get(1, m) {
            println!("Q^({m})_1 = {}", format_number(q, 30));
        }
    }
    Ok(())
}
