//! The `Q^(m)` transformation.
//!
//! `Q^(m)_n` is a normalized linear combination of `s_n .. s_{n+mp}` whose
//! weights come from a difference operator that annihilates the first `m`
//! terms of the remainder. The canonical path is [`q_direct`]; the
//! remainder form, the explicit operator quotient and (for `p = 2`) the
//! factored operator recursion exist to cross-validate it.

mod lambda;
mod paths;
mod table;

pub use lambda::{
    lambda_coefficients, lambda_degree_check, lambda_degree_report, lambda_weights,
    lambda_weights_in, leading_coeffs, tails, DegreeReport, LambdaWeights, LeadingCoeffs,
};
pub use paths::{
    annihilation_residual, annihilation_residual_in, l_ratio, p3f2_coefficients, p_apply_3f2,
    q_direct, q_recursion3f2, q_remainder_form,
};
pub use table::{q_table, Cell, QTable};

use std::fmt;

use crate::error::Result;
use crate::numerics::HPComplex;
use crate::series::{PartialSums, SeriesDef};

/// Evaluation route for a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    /// `Σ λ_j s_{n+j} / Σ λ_j`.
    #[default]
    Direct,
    /// `s_n` plus tail-weighted terms.
    Remainder,
    /// Explicit forward differences of the weighted window.
    Operator,
    /// Factored 3F2 operators applied column by column.
    #[value(name = "recursion3f2")]
    #[serde(rename = "recursion3f2")]
    Recursion3F2,
}

impl Path {
    pub fn name(self) -> &'static str {
        match self {
            Path::Direct => "direct",
            Path::Remainder => "remainder",
            Path::Operator => "operator",
            Path::Recursion3F2 => "recursion3f2",
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One cell by the chosen path.
pub fn q_cell(
    series: &SeriesDef,
    sums: &PartialSums,
    m: usize,
    n: usize,
    path: Path,
) -> Result<HPComplex> {
    match path {
        Path::Direct => q_direct(series, sums, m, n),
        Path::Remainder => q_remainder_form(series, sums, m, n),
        Path::Operator => l_ratio(series, sums, m, n),
        Path::Recursion3F2 => q_recursion3f2(series, sums, m, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::acc;
    use crate::error::Error;
    use crate::numerics::{parse_number, relative_error, Exact, PrecisionConfig};
    use crate::presets::Preset;
    use crate::series::partial_sums;

    fn p() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn num(s: &str) -> HPComplex {
        parse_number(s, &p()).unwrap()
    }

    fn p1_series() -> SeriesDef {
        SeriesDef::new(
            vec![num("0.4+0.3i")],
            vec![num("1.9")],
            num("-0.8+0.1i"),
            p(),
        )
        .unwrap()
    }

    #[test]
    fn m0_is_identity_on_every_path() {
        let s = Preset::Ex1.series(p());
        let sums = partial_sums(&s, 6).unwrap();
        for path in [
            Path::Direct,
            Path::Remainder,
            Path::Operator,
            Path::Recursion3F2,
        ] {
            assert_eq!(&q_cell(&s, &sums, 0, 3, path).unwrap(), sums.s(3));
        }
    }

    #[test]
    fn p1_m1_closed_forms() {
        let s = p1_series();
        let sums = partial_sums(&s, 10).unwrap();
        let (a, b, x) = (&s.alpha()[0], &s.beta()[0], s.x());
        for n in 0..8 {
            let nn = HPComplex::from_i64(n as i64, 42);
            let bn = b + &nn;
            let xan = x * &(a + &nn);
            let direct = (&bn * sums.s(n + 1) - &xan * sums.s(n)) / (&bn - &xan);
            let remainder = sums.s(n) + &(&bn * sums.a(n) / (&bn - &xan));
            assert!(relative_error(&q_direct(&s, &sums, 1, n).unwrap(), &direct).unwrap() < 1e-38);
            assert!(
                relative_error(&q_remainder_form(&s, &sums, 1, n).unwrap(), &remainder).unwrap()
                    < 1e-38
            );
        }
    }

    #[test]
    fn ex1_corner_cell() {
        let s = Preset::Ex1.series(p());
        let limit = Preset::Ex1.limit(p());
        let sums = partial_sums(&s, 15).unwrap();
        let q = q_direct(&s, &sums, 7, 1).unwrap();
        let a = acc(&q, &limit, &p()).unwrap();
        assert!((a - 21.7).abs() < 0.05, "{a}");
    }

    #[test]
    fn ex3_corner_cell_by_operator() {
        let s = Preset::Ex3.series(p());
        let limit = Preset::Ex3.limit(p());
        let sums = partial_sums(&s, 15).unwrap();
        let q = l_ratio(&s, &sums, 7, 1).unwrap();
        let a = acc(&q, &limit, &p()).unwrap();
        assert!((a - 14.1).abs() < 0.05, "{a}");
    }

    #[test]
    fn ex2_first_row_digits() {
        // Q^(10..12)_1 to ten decimals; their acc is 8.7, 9.6, 10.4.
        let s = Preset::Ex2.series(p());
        let table = q_table(&s, 25, 12, Path::Direct).unwrap();
        for (m, text) in [
            (10, "1.2990381082"),
            (11, "1.299038106"),
            (12, "1.2990381057"),
        ] {
            let v = table.get(1, m).unwrap().as_ref().unwrap();
            assert_eq!(
                crate::numerics::format_number(v, 11),
                format!("{text:0<12}")
            );
        }
        let limit = Preset::Ex2.limit(p());
        let a8 = acc(table.get(1, 8).unwrap().as_ref().unwrap(), &limit, &p()).unwrap();
        assert!((a8 - 7.0).abs() < 0.05);
    }

    #[test]
    fn table_shape_follows_the_budget() {
        let s = Preset::Ex1.series(p());
        let t = q_table(&s, 15, 7, Path::Direct).unwrap();
        for m in 0..=7 {
            let rows: Vec<usize> = t.cells().keys().filter(|k| k.1 == m).map(|k| k.0).collect();
            let last = 15 - 2 * m;
            assert_eq!(rows, (1..=last).collect::<Vec<_>>(), "m={m}");
            assert_eq!(t.last_row(m), Some(last));
        }
        assert_eq!(t.cells().len(), (0..=7).map(|m| 15 - 2 * m).sum::<usize>());
        assert_eq!(t.best().unwrap().0, (1, 7));

        let t0 = q_table(&s, 9, 0, Path::Direct).unwrap();
        for n in 1..=9 {
            assert_eq!(t0.get(n, 0).unwrap().as_ref().unwrap(), t0.sums().s(n));
        }
        assert!(matches!(
            q_table(&s, 14, 7, Path::Direct),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            q_table(&p1_series(), 10, 2, Path::Recursion3F2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn recursion_matches_direct_on_table1() {
        let s = Preset::Ex1.series(p());
        let direct = q_table(&s, 15, 7, Path::Direct).unwrap();
        let rec = q_table(&s, 15, 7, Path::Recursion3F2).unwrap();
        for (key, cell) in direct.cells() {
            let a = cell.as_ref().unwrap();
            let b = rec.get(key.0, key.1).unwrap().as_ref().unwrap();
            assert!(relative_error(b, a).unwrap() < p().tolerance(6), "{key:?}");
            let single = q_recursion3f2(&s, direct.sums(), key.1, key.0).unwrap();
            assert!(relative_error(&single, a).unwrap() < p().tolerance(6));
        }
    }

    #[test]
    fn first_operator_denominator_is_the_lambda_sum() {
        // With z ≡ 1, P^(1)_n(z) = Σ_j λ_j^(1)(n): P^(1) is the λ operator itself.
        let s = Preset::Ex3.series(p());
        let ones = vec![HPComplex::one(42); 12];
        for n in 0..8 {
            let d1 = p_apply_3f2(&s, &ones, 1, n).unwrap();
            let w = lambda_weights(&s, 1, n);
            assert!(relative_error(&d1, w.denominator()).unwrap() < 1e-38);
        }
    }

    #[test]
    fn operator_at_zero_argument_keeps_only_the_shift_term() {
        let s = Preset::Ex1.series(p()).with_x(HPComplex::zero(42));
        let [c0, c1, c2] = p3f2_coefficients(&s, 2, 3).unwrap();
        assert!(c0.is_zero() && c1.is_zero() && !c2.is_zero());
        assert!(matches!(
            p3f2_coefficients(&p1_series(), 1, 0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn annihilation_examples() {
        let s = Preset::Ex1.series(p());
        assert!(annihilation_residual(&s, 3, 2).unwrap() <= p().tolerance(8));
        let r = annihilation_residual_in(
            &[Exact::ratio(2, 7)],
            &[Exact::ratio(9, 4)],
            &Exact::ratio(-3, 5),
            1,
            3,
        )
        .unwrap();
        assert_eq!(r, 0.0);
        assert!(annihilation_residual(&s, 0, 2).is_err());
    }

    #[test]
    fn annihilated_remainder_is_removed_exactly() {
        // s'_ν = S - (a_ν + ... + a_{ν+m-1}): the remainder is exactly the
        // m-term window that L^(m) annihilates, so Q^(m)_n(s') = S.
        let s = Preset::Ex3.series(p());
        let full = partial_sums(&s, 40).unwrap();
        let target = num("0.25-1.5i");
        for (m, n) in [(1, 2), (2, 1), (3, 4), (4, 3)] {
            let order = m * s.p();
            let seq: Vec<HPComplex> = (0..=n + order)
                .map(|nu| &target - &(full.s(nu + m) - full.s(nu)))
                .collect();
            let q = q_direct(&s, &PartialSums::from_sums(seq, p()), m, n).unwrap();
            assert!(
                relative_error(&q, &target).unwrap() < p().tolerance(6),
                "m={m} n={n}"
            );
        }
    }
}
