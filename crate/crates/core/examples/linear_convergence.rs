//! A linearly convergent 3F2 at x = 25/27: partial sums against the first
//! row of the Q table built from s_1..s_25.
//!
//! cargo run --example linear_convergence

use hypersum::{acc, format_number, partial_sums, q_table, Path, PrecisionConfig, Preset};

fn main() -> hypersum::Result<()> {
    let precision = PrecisionConfig::default();
    let series = Preset::Ex2.series(precision);
    let limit = Preset::Ex2.limit(precision);

    let sums = partial_sums(&series, 200)?;
    for n in [10, 100, 200] {
        let s = sums.s(n);
        println!(
            "s_{n:<4} = {}  acc {:.1}",
            format_number(s, 12),
            acc(s, &limit, &precision)?
        );
    }

    let table = q_table(&series, 25, 12, Path::Direct)?;
    for m in 1..=12 {
        let q = table
            .get(1, m)
            .expect("cell in budget")
            .as_ref()
            .expect("regular cell");
        println!(
            "Q^({m:>2})_1 = {}  acc {:.1}",
            format_number(q, 12),
            acc(q, &limit, &precision)?
        );
    }
    Ok(())
}
