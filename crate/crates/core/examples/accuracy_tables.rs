//! Accuracy tables of `Q^(m)_n` for the alternating and the complex preset.
//!
//! cargo run --example accuracy_tables

use hypersum::diagnostics::acceleration_ratios;
use hypersum::report::{to_text, Content};
use hypersum::{q_table, Path, PrecisionConfig, Preset};

fn main() -> hypersum::Result<()> {
    let precision = PrecisionConfig::default();
    for preset in [Preset::Ex1, Preset::Ex3] {
        let series = preset.series(precision);
        let table = q_table(&series, 15, 7, Path::Direct)?;
        let report = acceleration_ratios(&table, &preset.limit(precision));
        println!("{preset}: correct digits from s_1..s_15");
        print!("{}", to_text(&report, Content::Acc, precision.digits));
        println!();
    }
    Ok(())
}
