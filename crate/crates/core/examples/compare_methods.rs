//! Best accuracy of every method over the same partial sums.
//!
//! cargo run --example compare_methods [budget]

use hypersum::classic::{classic_cells, ClassicMethod, LevinVariant};
use hypersum::diagnostics::{acceleration_ratios, assess, AccuracyReport};
use hypersum::{partial_sums, q_table, Path, PrecisionConfig, Preset};

fn best(report: &AccuracyReport) -> (f64, (usize, usize)) {
    report
        .cells
        .iter()
        .filter_map(|(k, c)| c.acc.map(|a| (a, *k)))
        .fold(
            (f64::NEG_INFINITY, (0, 0)),
            |b, c| if c.0 > b.0 { c } else { b },
        )
}

fn main() -> hypersum::Result<()> {
    let budget: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(15);
    let precision = PrecisionConfig::default();
    let methods = [
        ("epsilon", ClassicMethod::Epsilon),
        ("aitken", ClassicMethod::Aitken),
        ("levin-t", ClassicMethod::Levin(LevinVariant::T)),
        ("levin-u", ClassicMethod::Levin(LevinVariant::U)),
        ("levin-d", ClassicMethod::Levin(LevinVariant::D)),
        ("levin-v", ClassicMethod::Levin(LevinVariant::V)),
    ];
    for preset in Preset::ALL {
        let series = preset.series(precision);
        let limit = preset.limit(precision);
        let max_m = (budget - 1) / series.p();
        println!("{preset} with s_1..s_{budget}");
        let q = acceleration_ratios(&q_table(&series, budget, max_m, Path::Direct)?, &limit);
        let (a, (n, m)) = best(&q);
        println!("  {:<8} {a:>5.1} at n={n} m={m}", "q");
        let sums = partial_sums(&series, budget)?;
        for (name, method) in methods {
            let cells = classic_cells(&sums, method, budget, max_m)?;
            let (a, (n, m)) = best(&assess(&cells, &sums, Some(&limit), precision));
            println!("  {name:<8} {a:>5.1} at n={n} m={m}");
        }
    }
    Ok(())
}
