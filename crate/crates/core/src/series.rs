//! The series `Σ a_n` with `a_n = [α]_n / [β]_n · x^n`, where `[γ]_n` is the
//! product of the Pochhammer symbols `(γ_j)_n`.
//!
//! This is `p+1F_p(α_1..α_p, 1; β_1..β_p; x)`; the unit upper parameter
//! is implicit and is never stored.

use crate::error::{Error, Result};
use crate::numerics::{Field, HPComplex, PrecisionConfig};

/// Parameters of one `p+1F_p` series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesDef {
    alpha: Vec<HPComplex>,
    beta: Vec<HPComplex>,
    x: HPComplex,
    precision: PrecisionConfig,
    terminating: Option<usize>,
}

impl SeriesDef {
    /// Validates the shape and the lower parameters. Every value is
    /// rounded to the working precision of `precision`.
    pub fn new(
        alpha: Vec<HPComplex>,
        beta: Vec<HPComplex>,
        x: HPComplex,
        precision: PrecisionConfig,
    ) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::shape(
                "at least one upper and one lower parameter is required",
            ));
        }
        if alpha.len() != beta.len() {
            return Err(Error::shape(format!(
                "{} upper parameters but {} lower parameters",
                alpha.len(),
                beta.len()
            )));
        }
        if let Some(b) = beta.iter().find(|b| b.as_nonpositive_integer().is_some()) {
            return Err(Error::domain(format!(
                "lower parameter {b} is a pole of the Pochhammer symbol"
            )));
        }
        let digits = precision.working();
        let alpha: Vec<_> = alpha.iter().map(|a| a.with_digits(digits)).collect();
        let beta: Vec<_> = beta.iter().map(|b| b.with_digits(digits)).collect();
        // a_n vanishes from n = -α_j on.
        let terminating = alpha
            .iter()
            .filter_map(|a| a.as_nonpositive_integer())
            .map(|k| k.unsigned_abs() as usize)
            .min();
        Ok(SeriesDef {
            alpha,
            beta,
            x: x.with_digits(digits),
            precision,
            terminating,
        })
    }

    pub fn alpha(&self) -> &[HPComplex] {
        &self.alpha
    }

    pub fn beta(&self) -> &[HPComplex] {
        &self.beta
    }

    pub fn x(&self) -> &HPComplex {
        &self.x
    }

    pub fn p(&self) -> usize {
        self.alpha.len()
    }

    pub fn precision(&self) -> PrecisionConfig {
        self.precision
    }

    /// Working digits of every scalar in this series.
    pub fn digits(&self) -> u32 {
        self.precision.working()
    }

    /// Index of the first vanishing term when some `α_j` is a non-positive
    /// integer.
    pub fn terminates_at(&self) -> Option<usize> {
        self.terminating
    }

    /// The same parameters with a different argument.
    pub fn with_x(&self, x: HPComplex) -> Self {
        SeriesDef {
            x: x.with_digits(self.digits()),
            ..self.clone()
        }
    }

    /// The same series at another precision.
    pub fn with_precision(&self, precision: PrecisionConfig) -> Self {
        let d = precision.working();
        SeriesDef {
            alpha: self.alpha.iter().map(|a| a.with_digits(d)).collect(),
            beta: self.beta.iter().map(|b| b.with_digits(d)).collect(),
            x: self.x.with_digits(d),
            precision,
            terminating: self.terminating,
        }
    }

    /// Iterator over `a_0, a_1, ...` by the ratio recurrence.
    pub fn terms(&self) -> Terms<'_> {
        Terms {
            series: self,
            n: 0,
            current: HPComplex::one(self.digits()),
        }
    }
}

/// Converts a `p+1F_p` parameter list (upper has one more entry than lower)
/// into the stored form.
///
/// An upper parameter exactly equal to 1 is removed. Without one, a unit is
/// appended to the lower row only: the appended upper unit is the implicit
/// one of the stored form.
pub fn to_unit_form(
    upper: Vec<HPComplex>,
    lower: Vec<HPComplex>,
    x: HPComplex,
    precision: PrecisionConfig,
) -> Result<SeriesDef> {
    if upper.len() != lower.len() + 1 {
        return Err(Error::shape(format!(
            "expected {} upper parameters for {} lower ones, got {}",
            lower.len() + 1,
            lower.len(),
            upper.len()
        )));
    }
    let mut upper = upper;
    let mut lower = lower;
    match upper.iter().position(|a| a.equals_int(1)) {
        Some(k) => {
            upper.remove(k);
        }
        None => lower.push(HPComplex::one(precision.working())),
    }
    SeriesDef::new(upper, lower, x, precision)
}

/// `Π_j (γ_j)_n`, with the empty product at `n = 0`.
pub fn poch_product<F: Field>(gamma: &[F], n: usize, one: &F) -> F {
    let mut out = one.lift(1);
    for g in gamma {
        for k in 0..n {
            out = out.times(&g.plus(&one.lift(k as i64)));
        }
    }
    out
}

/// `a_n`, generated incrementally from `a_0 = 1`.
pub fn term(series: &SeriesDef, n: usize) -> Result<HPComplex> {
    Ok(series.terms().nth(n).expect("term iterator is infinite"))
}

/// `t_n = a_{n+1}/a_n = x · Π(α_j+n) / Π(β_j+n)`.
pub fn term_ratio(series: &SeriesDef, n: usize) -> Result<HPComplex> {
    if series.x.is_zero() {
        return Err(Error::domain(
            "term ratio with x = 0: a_n vanishes for n >= 1",
        ));
    }
    if series.terminating.is_some_and(|k| n >= k) {
        return Err(Error::domain(format!(
            "a_{n} = 0, the series terminates at n = {}",
            n
        )));
    }
    Ok(ratio_factor(series, n))
}

fn ratio_factor(series: &SeriesDef, n: usize) -> HPComplex {
    let d = series.digits();
    let shift = HPComplex::from_i64(n as i64, d);
    let mut num = series.x.clone();
    for a in &series.alpha {
        num *= &(a + &shift);
    }
    let mut den = HPComplex::one(d);
    for b in &series.beta {
        den *= &(b + &shift);
    }
    num / den
}

/// Terms `a_n` of a series.
pub struct Terms<'a> {
    series: &'a SeriesDef,
    n: usize,
    current: HPComplex,
}

impl Iterator for Terms<'_> {
    type Item = HPComplex;

    fn next(&mut self) -> Option<HPComplex> {
        let out = self.current.clone();
        self.current = &self.current * &ratio_factor(self.series, self.n);
        self.n += 1;
        Some(out)
    }
}

/// Partial sums `s_0 = 0, s_n = Σ_{j<n} a_j` together with the terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSums {
    s: Vec<HPComplex>,
    a: Vec<HPComplex>,
    precision: PrecisionConfig,
}

impl PartialSums {
    /// Builds the running sums of `terms`.
    pub fn from_terms(terms: Vec<HPComplex>, precision: PrecisionConfig) -> Self {
        let mut s = Vec::with_capacity(terms.len() + 1);
        s.push(HPComplex::zero(precision.working()));
        for a in &terms {
            let next = s.last().expect("non-empty") + a;
            s.push(next);
        }
        PartialSums {
            s,
            a: terms,
            precision,
        }
    }

    /// Takes an arbitrary sequence as partial sums; terms are its first
    /// differences.
    pub fn from_sums(s: Vec<HPComplex>, precision: PrecisionConfig) -> Self {
        let a = s.windows(2).map(|w| &w[1] - &w[0]).collect();
        PartialSums { s, a, precision }
    }

    pub fn precision(&self) -> PrecisionConfig {
        self.precision
    }

    pub fn digits(&self) -> u32 {
        self.precision.working()
    }

    pub fn s(&self, n: usize) -> &HPComplex {
        &self.s[n]
    }

    pub fn a(&self, n: usize) -> &HPComplex {
        &self.a[n]
    }

    pub fn sums(&self) -> &[HPComplex] {
        &self.s
    }

    pub fn terms(&self) -> &[HPComplex] {
        &self.a
    }

    /// Largest index `N` with `s_N` available.
    pub fn len(&self) -> usize {
        self.s.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.s.len() <= 1
    }

    /// Fails unless `s_idx` exists.
    pub(crate) fn require(&self, idx: usize) -> Result<()> {
        if idx > self.len() {
            Err(Error::shape(format!(
                "partial sum s_{idx} requested but only s_0..s_{} are available",
                self.len()
            )))
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_term(&self, idx: usize) -> Result<()> {
        if idx >= self.a.len() {
            Err(Error::shape(format!(
                "term a_{idx} requested but only a_0..a_{} are available",
                self.a.len().saturating_sub(1)
            )))
        } else {
            Ok(())
        }
    }

    /// `s_n + c` for every element, keeping the terms.
    pub fn shifted(&self, c: &HPComplex) -> Self {
        PartialSums {
            s: self.s.iter().map(|v| v + c).collect(),
            a: self.a.clone(),
            precision: self.precision,
        }
    }
}

/// `s_0 .. s_N` and `a_0 .. a_N` of a series.
///
/// One term beyond `s_N` is kept so that transformations needing `a_N`
/// (Levin estimates, for instance) do not have to recompute the series.
pub fn partial_sums(series: &SeriesDef, count: usize) -> Result<PartialSums> {
    if count < 1 {
        return Err(Error::shape("at least one partial sum is required"));
    }
    let terms: Vec<_> = series.terms().take(count + 1).collect();
    let mut sums = PartialSums::from_terms(terms, series.precision());
    sums.s.truncate(count + 1);
    Ok(sums)
}

/// Convergence regime of the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergenceKind {
    /// `|x| < 1`.
    Absolute,
    /// `|x| = 1`, `x ≠ 1`, `Re σ < 1`.
    ConditionalBoundary,
    /// `x = 1`, `Re σ < 0`.
    LogarithmicAtOne,
    Divergent,
    /// Some upper parameter is a non-positive integer.
    Terminating,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceClass {
    pub sigma: HPComplex,
    pub kind: ConvergenceKind,
    /// Expected limit of `r_{n+1}/r_n` (the argument `x`).
    pub ratio_hint: HPComplex,
}

/// `σ = 1 + Σα - Σβ`.
pub fn sigma(series: &SeriesDef) -> HPComplex {
    let mut out = HPComplex::one(series.digits());
    for a in &series.alpha {
        out += a;
    }
    for b in &series.beta {
        out -= b;
    }
    out
}

pub fn classify(series: &SeriesDef) -> ConvergenceClass {
    let sigma = sigma(series);
    let re_sigma = sigma.re_f64();
    let modulus = series.x.abs();
    let unit_tol = {
        let d = series.precision.digits as i32;
        rug::Float::with_val(modulus.prec(), 10f64.powi(-d))
    };
    let mut off_unit = modulus.clone() - 1u32;
    off_unit.abs_mut();

    let kind = if series.terminating.is_some() {
        ConvergenceKind::Terminating
    } else if off_unit <= unit_tol {
        if series.x.equals_int(1) {
            if re_sigma < 0.0 {
                ConvergenceKind::LogarithmicAtOne
            } else {
                ConvergenceKind::Divergent
            }
        } else if re_sigma < 1.0 {
            ConvergenceKind::ConditionalBoundary
        } else {
            ConvergenceKind::Divergent
        }
    } else if modulus < 1u32 {
        ConvergenceKind::Absolute
    } else {
        ConvergenceKind::Divergent
    };
    ConvergenceClass {
        sigma,
        kind,
        ratio_hint: series.x.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{parse_number, relative_error, Exact};

    fn p() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn num(s: &str) -> HPComplex {
        parse_number(s, &p()).unwrap()
    }

    fn nums(list: &[&str]) -> Vec<HPComplex> {
        list.iter().map(|s| num(s)).collect()
    }

    pub(crate) fn ex1() -> SeriesDef {
        SeriesDef::new(nums(&["3", "-1/2"]), nums(&["4", "1"]), num("-1"), p()).unwrap()
    }

    fn ex2() -> SeriesDef {
        SeriesDef::new(
            nums(&["1/6", "1/3"]),
            nums(&["1/2", "1"]),
            num("25/27"),
            p(),
        )
        .unwrap()
    }

    #[test]
    fn unit_form_strips_an_upper_unit() {
        let s = to_unit_form(nums(&["3", "-1/2", "1"]), nums(&["4", "1"]), num("-1"), p()).unwrap();
        assert_eq!(s.alpha(), nums(&["3", "-1/2"]).as_slice());
        assert_eq!(s.beta(), nums(&["4", "1"]).as_slice());

        let s = to_unit_form(nums(&["0.3", "1"]), nums(&["0.7"]), num("0.5"), p()).unwrap();
        assert_eq!(s.alpha(), nums(&["0.3"]).as_slice());
        assert_eq!(s.beta(), nums(&["0.7"]).as_slice());
    }

    #[test]
    fn unit_form_appends_a_lower_unit() {
        let s = to_unit_form(nums(&["1/3", "-1/2"]), nums(&["4/3"]), num("-1"), p()).unwrap();
        assert_eq!(s.alpha(), nums(&["1/3", "-1/2"]).as_slice());
        assert_eq!(s.beta(), nums(&["4/3", "1"]).as_slice());

        // Term-by-term against 2F1(1/3, -1/2; 4/3; -1) summed directly in
        // exact rationals: c_n = (1/3)_n (-1/2)_n / ((4/3)_n n!) (-1)^n.
        let mut c = Exact::int(1);
        for (n, a) in s.terms().take(10).enumerate() {
            let approx = HPComplex::from_exact(&c, 42);
            assert!(relative_error(&a, &approx).unwrap() < 1e-38, "n={n}");
            let k = n as i64;
            let factor = Exact::ratio(1 + 3 * k, 3)
                .times(&Exact::ratio(2 * k - 1, 2))
                .over(&Exact::ratio(4 + 3 * k, 3).times(&Exact::int(k + 1)))
                .unwrap()
                .negated();
            c = c.times(&factor);
        }
    }

    #[test]
    fn unit_form_rejects_bad_shapes() {
        let r = to_unit_form(nums(&["1", "2"]), nums(&["3", "4"]), num("0.5"), p());
        assert!(matches!(r, Err(Error::Shape(_))));
        assert!(matches!(
            SeriesDef::new(nums(&["1"]), nums(&["-2"]), num("0.5"), p()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            SeriesDef::new(vec![], vec![], num("0.5"), p()),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn poch_products() {
        let one = Exact::int(1);
        assert_eq!(poch_product(&[Exact::int(7)], 0, &one), Exact::int(1));
        assert_eq!(
            poch_product(&[Exact::int(2), Exact::int(3)], 2, &one),
            Exact::int(72)
        );
        assert_eq!(
            poch_product(&[Exact::ratio(-1, 2)], 3, &one),
            Exact::ratio(-3, 8)
        );
    }

    #[test]
    fn first_terms() {
        let s1 = ex1();
        assert!(term(&s1, 0).unwrap().equals_int(1));
        let a1 = term(&s1, 1).unwrap();
        assert!(relative_error(&a1, &HPComplex::from_ratio(3, 8, 42)).unwrap() < 1e-40);
        let a1 = term(&ex2(), 1).unwrap();
        // (1/6)(1/3)/(1/2) * 25/27 = 25/243
        assert!(relative_error(&a1, &HPComplex::from_ratio(25, 243, 42)).unwrap() < 1e-40);
    }

    #[test]
    fn ex1_term_ratio_closed_form() {
        let s1 = ex1();
        for n in 0..20i64 {
            let t = term_ratio(&s1, n as usize).unwrap();
            let expected = HPComplex::from_ratio(-(2 * n - 1) * (n + 3), (2 * n + 2) * (n + 4), 42);
            assert!(relative_error(&t, &expected).unwrap() < 1e-40);
        }
        let far = term_ratio(&s1, 1_000_000).unwrap();
        assert!((&far - s1.x()).abs_f64() < 1e-5);
    }

    #[test]
    fn equal_parameters_give_a_geometric_ratio() {
        let s = SeriesDef::new(nums(&["0.7"]), nums(&["0.7"]), num("0.3"), p()).unwrap();
        for n in [0, 5, 50] {
            assert_eq!(term_ratio(&s, n).unwrap(), *s.x());
        }
    }

    #[test]
    fn terminating_series_are_flagged() {
        let s = SeriesDef::new(nums(&["-3", "2"]), nums(&["1", "5"]), num("0.5"), p()).unwrap();
        assert_eq!(s.terminates_at(), Some(3));
        assert_eq!(classify(&s).kind, ConvergenceKind::Terminating);
        assert!(term(&s, 4).unwrap().is_zero());
        assert!(term_ratio(&s, 3).is_err());
    }

    #[test]
    fn partial_sums_basics() {
        let sums = partial_sums(&ex1(), 12).unwrap();
        assert_eq!(sums.len(), 12);
        assert!(sums.s(0).is_zero());
        assert!(sums.s(1).equals_int(1));
        for n in 0..12 {
            assert!((&(sums.s(n + 1) - sums.s(n)) - sums.a(n)).abs_f64() < 1e-40);
        }
        assert!(partial_sums(&ex1(), 0).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = classify(&ex1());
        assert_eq!(c.kind, ConvergenceKind::ConditionalBoundary);
        assert!(relative_error(&c.sigma, &num("-1.5")).unwrap() < 1e-40);

        let c = classify(&ex2());
        assert_eq!(c.kind, ConvergenceKind::Absolute);
        assert!(c.sigma.abs_f64() < 1e-40);

        let s3 = SeriesDef::new(
            nums(&["1.7+2.5i", "1.5+2.0i"]),
            nums(&["1.3-3.0i", "3.2-4.0i"]),
            num("1"),
            p(),
        )
        .unwrap();
        let c = classify(&s3);
        assert!(c.sigma.re_f64() < 0.0);
        assert_eq!(c.kind, ConvergenceKind::LogarithmicAtOne);

        let div = ex2().with_x(num("1.5"));
        assert_eq!(classify(&div).kind, ConvergenceKind::Divergent);
        let at_one = SeriesDef::new(nums(&["1"]), nums(&["1.5"]), num("1"), p()).unwrap();
        assert_eq!(classify(&at_one).kind, ConvergenceKind::Divergent);
        let boundary = ex2().with_x(num("0.6+0.8i"));
        assert_eq!(
            classify(&boundary).kind,
            ConvergenceKind::ConditionalBoundary
        );
    }

    #[test]
    fn alternating_condition_for_example1() {
        let s1 = ex1();
        let one = HPComplex::one(42);
        for n in 10..200 {
            let a = &one + &term_ratio(&s1, n + 1).unwrap();
            let b = &one + &term_ratio(&s1, n).unwrap();
            let q = (&a / &b - &one).abs_f64();
            assert!(q < 2.0 / n as f64, "n={n}: {q}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn param() -> impl Strategy<Value = (f64, f64)> {
            (0.1f64..4.0, -2.0f64..2.0)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn ratio_matches_consecutive_terms(
                params in proptest::collection::vec((param(), param()), 1..4),
                xr in -1.2f64..1.2, xi in -0.5f64..0.5,
            ) {
                let alpha = params.iter().map(|((r, i), _)| HPComplex::from_parts_f64(*r, *i, 42)).collect();
                let beta = params.iter().map(|(_, (r, i))| HPComplex::from_parts_f64(*r, *i, 42)).collect();
                let s = SeriesDef::new(alpha, beta, HPComplex::from_parts_f64(xr, xi, 42), p()).unwrap();
                prop_assume!(!s.x().is_zero());
                let terms: Vec<_> = s.terms().take(202).collect();
                for n in 0..=200 {
                    let t = term_ratio(&s, n).unwrap();
                    let q = &terms[n + 1] / &terms[n];
                    prop_assert!(relative_error(&q, &t).unwrap() <= 1e-26);
                }
            }

            #[test]
            fn classification_is_permutation_invariant(
                params in proptest::collection::vec((param(), param()), 2..4),
                xr in -1.5f64..1.5,
            ) {
                let alpha: Vec<_> = params.iter().map(|((r, i), _)| HPComplex::from_parts_f64(*r, *i, 42)).collect();
                let beta: Vec<_> = params.iter().map(|(_, (r, i))| HPComplex::from_parts_f64(*r, *i, 42)).collect();
                let x = HPComplex::from_f64(xr, 42);
                let s = SeriesDef::new(alpha.clone(), beta.clone(), x.clone(), p()).unwrap();
                let mut ra = alpha; ra.reverse();
                let mut rb = beta; rb.rotate_left(1);
                let t = SeriesDef::new(ra, rb, x, p()).unwrap();
                let (cs, ct) = (classify(&s), classify(&t));
                prop_assert_eq!(cs.kind, ct.kind);
                prop_assert!((cs.sigma.re_f64() - ct.sigma.re_f64()).abs() < 1e-12);
            }
        }
    }
}
