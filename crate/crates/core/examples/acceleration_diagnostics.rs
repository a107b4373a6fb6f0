//! Probes of when the transformation accelerates: the condition values,
//! remainder ratios and the large-n coefficients.
//!
//! cargo run --example acceleration_diagnostics

use hypersum::diagnostics::{
    acceleration_condition, asymptotic_coeffs, extrapolated_limit, ratio_probe,
};
use hypersum::numerics::relative_error;
use hypersum::series::classify;
use hypersum::{format_number, partial_sums, HPComplex, PrecisionConfig, Preset};

fn main() -> hypersum::Result<()> {
    let precision = PrecisionConfig::default();
    let one = HPComplex::one(precision.working());
    for preset in Preset::ALL {
        let series = preset.series(precision);
        let limit = preset.limit(precision);
        let class = classify(&series);
        let coeffs = asymptotic_coeffs(&series);
        println!(
            "{preset}: {:?}, sigma {}",
            class.kind,
            format_number(&class.sigma, 8)
        );
        println!(
            "  b1 {}  d1 {}",
            format_number(&coeffs.b1, 8),
            format_number(&coeffs.d1, 8)
        );

        let sums = partial_sums(&series, 420)?;
        for n in [20, 100, 400] {
            let probe = ratio_probe(&series, &limit, &sums, n, 10)?;
            println!(
                "  r_{{n+1}}/r_n at n={n:<3} {}",
                format_number(&probe.ratio, 10)
            );
        }
        for m in 1..=3 {
            let dev: Vec<String> = [5, 10, 20, 40]
                .iter()
                .map(|&n| {
                    let c = acceleration_condition(&series, &limit, m, n, &sums)?;
                    Ok(format!("{:.1e}", (c - &one).abs_f64()))
                })
                .collect::<hypersum::Result<_>>()?;
            println!("  |condition - 1| m={m} at n=5,10,20,40: {}", dev.join(" "));
        }
    }

    // The complex preset's sum is only known to 16 digits; Q at 48 digits
    // reproduces it.
    let series = Preset::Ex3.series(precision);
    let high = extrapolated_limit(&series, 48, 10)?;
    let known = Preset::Ex3.limit(precision);
    println!(
        "ex3 sum at 48 digits: {}  (relative difference to the 16-digit value {:.1e})",
        format_number(&high, 20),
        relative_error(&high.with_digits(precision.working()), &known)?
    );
    Ok(())
}
