//! Coefficients `λ_j^(m)(n)` and their tails `M_k^(m)(n)`, plus the exact
//! identities on their leading coefficients.

use rug::Integer;

use crate::error::{Error, Result};
use crate::numerics::{field_pow, Exact, Field, HPComplex};
use crate::series::SeriesDef;

/// `λ_0..λ_{mp}` and `M_0..M_{mp}` for one `(m, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaWeights<F = HPComplex> {
    pub m: usize,
    pub n: usize,
    pub lambda: Vec<F>,
    /// `tails[k] = M_k = Σ_{j>=k} λ_j`; `tails[0]` is the denominator `M`.
    pub tails: Vec<F>,
}

impl<F: Field> LambdaWeights<F> {
    pub fn denominator(&self) -> &F {
        &self.tails[0]
    }

    pub fn order(&self) -> usize {
        self.lambda.len() - 1
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `(z + start)(z + start + 1)...(z + start + len - 1)` accumulated into
/// `acc` factor by factor.
fn rising_into<F: Field>(acc: F, z: &F, start: i64, len: usize) -> F {
    let mut acc = acc;
    for k in 0..len as i64 {
        acc = acc.times(&z.plus(&z.lift(start + k)));
    }
    acc
}

/// `λ_j = C(mp, j) (-x)^{mp-j} Π_i (α_i+n+j)_{mp-j} (β_i+n+m-1)_j`.
///
/// Products are accumulated with `i` ascending and each Pochhammer factor
/// ascending, so two evaluations at the same precision agree bit for bit.
pub fn lambda_coefficients<F: Field>(alpha: &[F], beta: &[F], x: &F, m: usize, n: usize) -> Vec<F> {
    let p = alpha.len();
    let order = m * p;
    let minus_x = x.negated();
    (0..=order)
        .map(|j| {
            let mut prod = x.lift(1);
            for (a, b) in alpha.iter().zip(beta) {
                prod = rising_into(prod, a, (n + j) as i64, order - j);
                prod = rising_into(prod, b, (n + m) as i64 - 1, j);
            }
            prod.times(&x.lift_integer(&binomial(order, j)))
                .times(&field_pow(&minus_x, order - j))
        })
        .collect()
}

/// Partial tails `M_k = Σ_{j=k}^{len-1} λ_j`.
pub fn tails<F: Field>(lambda: &[F]) -> Vec<F> {
    let mut out = vec![lambda[0].lift(0); lambda.len()];
    let mut acc = lambda[0].lift(0);
    for k in (0..lambda.len()).rev() {
        acc = acc.plus(&lambda[k]);
        out[k] = acc.clone();
    }
    out
}

pub fn lambda_weights_in<F: Field>(
    alpha: &[F],
    beta: &[F],
    x: &F,
    m: usize,
    n: usize,
) -> LambdaWeights<F> {
    let lambda = lambda_coefficients(alpha, beta, x, m, n);
    let tails = tails(&lambda);
    LambdaWeights {
        m,
        n,
        lambda,
        tails,
    }
}

pub fn lambda_weights(series: &SeriesDef, m: usize, n: usize) -> LambdaWeights {
    lambda_weights_in(series.alpha(), series.beta(), series.x(), m, n)
}

/// Leading coefficients `c_j = C(mp, j) (-x)^{mp-j}` of the λ polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingCoeffs<F = HPComplex> {
    pub m: usize,
    pub p: usize,
    pub x: F,
    pub c: Vec<F>,
    /// `Σ c_j - (1 - x)^{mp}`.
    pub sum_residual: F,
    /// `Σ c_j x^j`.
    pub moment_residual: F,
}

pub fn leading_coeffs<F: Field>(m: usize, p: usize, x: &F) -> Result<LeadingCoeffs<F>> {
    if m == 0 || p == 0 {
        return Err(Error::domain("leading coefficients need m >= 1 and p >= 1"));
    }
    let order = m * p;
    let minus_x = x.negated();
    let c: Vec<F> = (0..=order)
        .map(|j| {
            x.lift_integer(&binomial(order, j))
                .times(&field_pow(&minus_x, order - j))
        })
        .collect();
    let mut sum = x.lift(0);
    let mut moment = x.lift(0);
    let mut x_pow = x.lift(1);
    for cj in &c {
        sum = sum.plus(cj);
        moment = moment.plus(&cj.times(&x_pow));
        x_pow = x_pow.times(x);
    }
    let expected = field_pow(&x.lift(1).minus(x), order);
    Ok(LeadingCoeffs {
        m,
        p,
        x: x.clone(),
        c,
        sum_residual: sum.minus(&expected),
        moment_residual: moment,
    })
}

/// Outcome of [`lambda_degree_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReport {
    /// `m p²`.
    pub expected_degree: usize,
    /// Degree of each `λ_j` as a polynomial in `n`; `None` for the zero
    /// polynomial.
    pub lambda_degrees: Vec<Option<usize>>,
    /// Whether the top finite difference of `λ_j` equals `(mp²)! c_j`.
    pub leading_matches: Vec<bool>,
    pub denominator_degree: Option<usize>,
    /// `M` has degree below `m p²`, which happens exactly when `x = 1`.
    pub degree_drop: bool,
    pub x_is_one: bool,
}

impl DegreeReport {
    pub fn passed(&self) -> bool {
        let lambda_ok = self
            .lambda_degrees
            .iter()
            .zip(&self.leading_matches)
            .all(|(d, ok)| *d == Some(self.expected_degree) && *ok);
        lambda_ok && self.degree_drop == self.x_is_one
    }
}

/// Degree of the polynomial sampled at `0, 1, ..., len-1`, assuming
/// `len` exceeds the true degree.
fn sampled_degree(samples: &[Exact]) -> Option<usize> {
    let mut row = samples.to_vec();
    let mut degree = None;
    for k in 0..samples.len() {
        if !row[0].is_zero() {
            degree = Some(k);
        }
        row = row.windows(2).map(|w| w[1].minus(&w[0])).collect();
    }
    degree
}

/// `k`-th forward difference of `samples` at every available point.
fn nth_difference(samples: &[Exact], k: usize) -> Vec<Exact> {
    let mut row = samples.to_vec();
    for _ in 0..k {
        row = row.windows(2).map(|w| w[1].minus(&w[0])).collect();
    }
    row
}

/// Checks in exact arithmetic that every `λ_j^(m)` has degree exactly
/// `m p²` in `n` with leading coefficient `c_j`, and that the denominator
/// keeps that degree unless `x = 1`.
pub fn lambda_degree_report(
    m: usize,
    alpha: &[Exact],
    beta: &[Exact],
    x: &Exact,
) -> Result<DegreeReport> {
    let p = alpha.len();
    if p == 0 || beta.len() != p {
        return Err(Error::shape(
            "alpha and beta must be non-empty and of equal length",
        ));
    }
    if m == 0 {
        return Err(Error::domain("degree check needs m >= 1"));
    }
    let degree = m * p * p;
    if degree > 64 {
        return Err(Error::domain(format!(
            "m p^2 = {degree} exceeds the supported 64"
        )));
    }
    let points = degree + 2;
    let samples: Vec<LambdaWeights<Exact>> = (0..points)
        .map(|n| lambda_weights_in(alpha, beta, x, m, n))
        .collect();
    let leading = leading_coeffs(m, p, x)?;
    let factorial = Exact(rug::Rational::from(Integer::from(Integer::factorial(
        degree as u32,
    ))));

    let mut lambda_degrees = Vec::new();
    let mut leading_matches = Vec::new();
    for j in 0..=m * p {
        let values: Vec<Exact> = samples.iter().map(|w| w.lambda[j].clone()).collect();
        lambda_degrees.push(sampled_degree(&values));
        let top = nth_difference(&values, degree);
        let target = factorial.times(&leading.c[j]);
        leading_matches.push(top.iter().all(|v| *v == target));
    }
    let denominators: Vec<Exact> = samples.iter().map(|w| w.denominator().clone()).collect();
    let denominator_degree = sampled_degree(&denominators);
    Ok(DegreeReport {
        expected_degree: degree,
        lambda_degrees,
        leading_matches,
        denominator_degree,
        degree_drop: denominator_degree.is_none_or(|d| d < degree),
        x_is_one: *x == Exact::int(1),
    })
}

pub fn lambda_degree_check(m: usize, alpha: &[Exact], beta: &[Exact], x: &Exact) -> Result<bool> {
    Ok(lambda_degree_report(m, alpha, beta, x)?.passed())
}
