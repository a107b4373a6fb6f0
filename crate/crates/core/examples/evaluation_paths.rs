//! The same cell by every evaluation route, and the relative spread.
//!
//! cargo run --example evaluation_paths

use hypersum::numerics::relative_error;
use hypersum::qtransform::{l_ratio, q_recursion3f2, q_remainder_form};
use hypersum::{format_number, partial_sums, q_direct, PrecisionConfig, Preset};

fn main() -> hypersum::Result<()> {
    let precision = PrecisionConfig::default();
    for preset in Preset::ALL {
        let series = preset.series(precision);
        let sums = partial_sums(&series, 15)?;
        let (m, n) = (6, 2);
        let direct = q_direct(&series, &sums, m, n)?;
        let others = [
            ("remainder", q_remainder_form(&series, &sums, m, n)?),
            ("operator", l_ratio(&series, &sums, m, n)?),
            ("recursion3f2", q_recursion3f2(&series, &sums, m, n)?),
        ];
        println!("{preset} Q^({m})_{n} = {}", format_number(&direct, 32));
        for (name, value) in others {
            println!(
                "  {name:<13} differs by {:.1e}",
                relative_error(&value, &direct)?
            );
        }
    }
    Ok(())
}
