//! Identities of the weight polynomials, checked in rational arithmetic.
//!
//! cargo run --example exact_identities

use hypersum::qtransform::{
    annihilation_residual_in, lambda_degree_report, lambda_weights_in, leading_coeffs,
};
use hypersum::Exact;

fn main() -> hypersum::Result<()> {
    for x in [Exact::int(-1), Exact::ratio(1, 2), Exact::int(2)] {
        for (m, p) in [(1, 1), (2, 2), (3, 3)] {
            let c = leading_coeffs(m, p, &x)?;
            println!(
                "x={x:<4} m={m} p={p}: sum c_j - (1-x)^mp = {}, sum c_j x^j = {}",
                c.sum_residual, c.moment_residual
            );
        }
    }

    let alpha = [Exact::int(3), Exact::ratio(-1, 2)];
    let beta = [Exact::int(4), Exact::int(1)];
    let w = lambda_weights_in(&alpha, &beta, &Exact::int(-1), 1, 0);
    println!("weights at m=1 n=0: {:?}", w.lambda);

    for x in [Exact::int(-1), Exact::int(1)] {
        let r = lambda_degree_report(2, &alpha, &beta, &x)?;
        println!(
            "x={x}: expected degree {}, lambda degrees {:?}, denominator degree {:?}, drop {}",
            r.expected_degree, r.lambda_degrees, r.denominator_degree, r.degree_drop
        );
    }

    let r = annihilation_residual_in(
        &[Exact::ratio(2, 7)],
        &[Exact::ratio(9, 4)],
        &Exact::ratio(-3, 5),
        1,
        4,
    )?;
    println!("annihilation residual, m=1 p=1 rational: {r}");
    Ok(())
}
