//! Four ways to evaluate one cell `Q^(m)_n`. They agree in exact
//! arithmetic; at finite precision they round differently, which is what
//! makes them useful as cross-checks.

use rug::Float;

use super::lambda::{binomial, lambda_weights};
use crate::error::{Error, Result};
use crate::numerics::{Field, HPComplex};
use crate::series::{PartialSums, SeriesDef};

/// `|den| < 10^(4-P) · scale` means the quotient carries no digits.
fn is_degenerate(series: &SeriesDef, den: &HPComplex, scale: &Float) -> bool {
    let tol = Float::with_val(scale.prec(), series.precision().tolerance(4));
    den.abs() < tol * scale
}

fn max_abs<'a>(values: impl IntoIterator<Item = &'a HPComplex>, digits: u32) -> Float {
    values
        .into_iter()
        .map(HPComplex::abs)
        .fold(
            HPComplex::zero(digits).abs(),
            |acc, v| if v > acc { v } else { acc },
        )
}

/// `Σ λ_j s_{n+j} / Σ λ_j`.
pub fn q_direct(series: &SeriesDef, sums: &PartialSums, m: usize, n: usize) -> Result<HPComplex> {
    if m == 0 {
        return Ok(sums.s(n).clone());
    }
    let order = m * series.p();
    sums.require(n + order)?;
    let w = lambda_weights(series, m, n);
    let mut num = HPComplex::zero(series.digits());
    for (j, l) in w.lambda.iter().enumerate() {
        num += &(l * sums.s(n + j));
    }
    let den = w.denominator();
    let scale = max_abs(&w.lambda, series.digits()) * (order as u32 + 1);
    if is_degenerate(series, den, &scale) {
        return Err(Error::Degenerate { n, m });
    }
    Ok(num / den)
}

/// `s_n + Σ_{k<mp} (M_{k+1}/M_0) a_{n+k}`.
pub fn q_remainder_form(
    series: &SeriesDef,
    sums: &PartialSums,
    m: usize,
    n: usize,
) -> Result<HPComplex> {
    if m == 0 {
        return Ok(sums.s(n).clone());
    }
    let order = m * series.p();
    sums.require(n)?;
    sums.require_term(n + order - 1)?;
    let w = lambda_weights(series, m, n);
    let den = w.denominator();
    let scale = max_abs(&w.lambda, series.digits()) * (order as u32 + 1);
    if is_degenerate(series, den, &scale) {
        return Err(Error::Degenerate { n, m });
    }
    let mut correction = HPComplex::zero(series.digits());
    for k in 0..order {
        correction += &(&w.tails[k + 1] * sums.a(n + k));
    }
    Ok(sums.s(n) + &(correction / den))
}

/// Operator weights `w_ν = [β]_{ν+m-1} / ([α]_ν x^ν)` for `ν = n..=n+len-1`,
/// divided by `w_n` so that the window starts at 1.
pub(crate) fn operator_weights<F: Field>(
    alpha: &[F],
    beta: &[F],
    x: &F,
    m: usize,
    n: usize,
    len: usize,
) -> Result<Vec<F>> {
    let mut out = Vec::with_capacity(len);
    let mut w = x.lift(1);
    for nu in n..n + len {
        out.push(w.clone());
        let mut num = x.lift(1);
        let mut den = x.clone();
        for (a, b) in alpha.iter().zip(beta) {
            num = num.times(&b.plus(&x.lift((nu + m) as i64 - 1)));
            den = den.times(&a.plus(&x.lift(nu as i64)));
        }
        w = w
            .times(&num)
            .over(&den)
            .ok_or_else(|| Error::domain(format!("operator weight undefined at ν = {}", nu + 1)))?;
    }
    Ok(out)
}

/// `Δ^k` of a finite sequence, evaluated at its first point.
fn forward_difference(values: Vec<HPComplex>, k: usize) -> HPComplex {
    let mut row = values;
    for _ in 0..k {
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    row.swap_remove(0)
}

/// `Δ^{mp}(w_ν s_ν) / Δ^{mp}(w_ν)` at `ν = n`, by explicit repeated
/// differencing of the weighted window.
pub fn l_ratio(series: &SeriesDef, sums: &PartialSums, m: usize, n: usize) -> Result<HPComplex> {
    if m == 0 {
        return Ok(sums.s(n).clone());
    }
    let order = m * series.p();
    sums.require(n + order)?;
    let weights = operator_weights(series.alpha(), series.beta(), series.x(), m, n, order + 1)?;
    let weighted: Vec<HPComplex> = weights
        .iter()
        .enumerate()
        .map(|(j, w)| w * sums.s(n + j))
        .collect();
    let digits = series.digits();
    let scale = weights
        .iter()
        .enumerate()
        .map(|(j, w)| w.abs() * &binomial(order, j))
        .fold(HPComplex::zero(digits).abs(), |acc, v| acc + v);
    let num = forward_difference(weighted, order);
    let den = forward_difference(weights, order);
    if is_degenerate(series, &den, &scale) {
        return Err(Error::Degenerate { n, m });
    }
    Ok(num / den)
}

fn require_p2(series: &SeriesDef) -> Result<()> {
    if series.p() != 2 {
        return Err(Error::Unsupported(format!(
            "the 3F2 operator recursion needs p = 2, this series has p = {}",
            series.p()
        )));
    }
    Ok(())
}

/// Coefficients of `z_n, z_{n+1}, z_{n+2}` in the 3F2 operator `P^(m)_n`.
pub fn p3f2_coefficients(series: &SeriesDef, m: usize, n: usize) -> Result<[HPComplex; 3]> {
    require_p2(series)?;
    let d = series.digits();
    let int = |v: i64| HPComplex::from_i64(v, d);
    let (a, b, x) = (series.alpha(), series.beta(), series.x());
    let (n, m) = (n as i64, m as i64);
    let at = |z: &HPComplex, k: i64| z + &int(k);

    let c0 = x
        * x
        * at(&a[0], n + 2 * m - 2)
        * at(&a[0], n + 2 * m - 1)
        * at(&a[1], n + 2 * m - 2)
        * at(&a[1], n + 2 * m - 1);
    let bracket = at(&b[0], n + 2 * m - 2) * at(&b[1], n + 2 * m - 2) - int(m * m) + int(m);
    let c1 = -(int(2) * x * at(&a[0], n + 2 * m - 1) * at(&a[1], n + 2 * m - 1) * bracket);
    let c2 = at(&b[0], n + m - 1)
        * at(&b[1], n + m - 1)
        * at(&b[0], n + 3 * m - 2)
        * at(&b[1], n + 3 * m - 2);
    Ok([c0, c1, c2])
}

/// `P^(m)_n` applied to `z`, indexed absolutely (`z[n]`, `z[n+1]`, `z[n+2]`).
pub fn p_apply_3f2(series: &SeriesDef, z: &[HPComplex], m: usize, n: usize) -> Result<HPComplex> {
    if z.len() < n + 3 {
        return Err(Error::shape(format!(
            "operator at n = {n} needs z up to index {}",
            n + 2
        )));
    }
    let [c0, c1, c2] = p3f2_coefficients(series, m, n)?;
    Ok(c0 * &z[n] + c1 * &z[n + 1] + c2 * &z[n + 2])
}

/// One step of the recursion: column `m` of numerators and denominators
/// from column `m - 1`. Both columns are indexed from `first`.
pub(crate) fn recursion_step(
    series: &SeriesDef,
    m: usize,
    first: usize,
    num: &[HPComplex],
    den: &[HPComplex],
) -> Result<(Vec<HPComplex>, Vec<HPComplex>, Vec<Float>)> {
    let len = num.len().saturating_sub(2);
    let mut next_num = Vec::with_capacity(len);
    let mut next_den = Vec::with_capacity(len);
    let mut scales = Vec::with_capacity(len);
    for i in 0..len {
        let [c0, c1, c2] = p3f2_coefficients(series, m, first + i)?;
        let parts = [&c0 * &den[i], &c1 * &den[i + 1], &c2 * &den[i + 2]];
        scales.push(
            parts
                .iter()
                .map(HPComplex::abs)
                .fold(Float::with_val(c0.abs().prec(), 0), |a, v| a + v),
        );
        next_den.push(&parts[0] + &parts[1] + &parts[2]);
        next_num.push(c0 * &num[i] + c1 * &num[i + 1] + c2 * &num[i + 2]);
    }
    Ok((next_num, next_den, scales))
}

/// `N^(m)_n / D^(m)_n` from the operator recursion started at
/// `N^(0) = s`, `D^(0) = 1`.
pub fn q_recursion3f2(
    series: &SeriesDef,
    sums: &PartialSums,
    m: usize,
    n: usize,
) -> Result<HPComplex> {
    require_p2(series)?;
    if m == 0 {
        return Ok(sums.s(n).clone());
    }
    sums.require(n + 2 * m)?;
    let d = series.digits();
    let mut num: Vec<HPComplex> = (n..=n + 2 * m).map(|k| sums.s(k).clone()).collect();
    let mut den = vec![HPComplex::one(d); num.len()];
    let mut scale = Float::with_val(1, 0);
    for k in 1..=m {
        let (nn, dd, scales) = recursion_step(series, k, n, &num, &den)?;
        num = nn;
        den = dd;
        scale = scales
            .into_iter()
            .next()
            .expect("window shrinks to one cell");
    }
    if is_degenerate(series, &den[0], &scale) {
        return Err(Error::Degenerate { n, m });
    }
    Ok(&num[0] / &den[0])
}

/// Relative size of `L^(m)_n(a_n + ... + a_{n+m-1})`: the operator sum
/// divided by its largest summand. Zero up to rounding by construction of
/// the operator; exactly zero in exact arithmetic.
pub fn annihilation_residual_in<F: Field>(
    alpha: &[F],
    beta: &[F],
    x: &F,
    m: usize,
    n: usize,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("annihilation needs m >= 1"));
    }
    let order = m * alpha.len();
    let weights = operator_weights(alpha, beta, x, m, n, order + 1)?;

    // a_0 .. a_{n+order+m-1} by the term ratio.
    let count = n + order + m;
    let mut terms = Vec::with_capacity(count);
    let mut a = x.lift(1);
    for k in 0..count {
        terms.push(a.clone());
        let mut num = x.clone();
        let mut den = x.lift(1);
        for (al, be) in alpha.iter().zip(beta) {
            num = num.times(&al.plus(&x.lift(k as i64)));
            den = den.times(&be.plus(&x.lift(k as i64)));
        }
        a = a
            .times(&num)
            .over(&den)
            .ok_or_else(|| Error::domain("lower parameter pole"))?;
    }

    let mut total = x.lift(0);
    let mut largest: Option<(f64, F)> = None;
    for (j, w) in weights.iter().enumerate() {
        let nu = n + j;
        let partial = terms[nu..nu + m]
            .iter()
            .fold(x.lift(0), |acc, t| acc.plus(t));
        let mut c = w
            .times(&partial)
            .times(&x.lift_integer(&binomial(order, j)));
        if (order - j) % 2 == 1 {
            c = c.negated();
        }
        let mag = c.magnitude();
        if largest.as_ref().is_none_or(|(best, _)| mag > *best) {
            largest = Some((mag, c.clone()));
        }
        total = total.plus(&c);
    }
    if total.is_exact_zero() {
        return Ok(0.0);
    }
    let (_, big) = largest.expect("at least one summand");
    match total.over(&big) {
        Some(r) => Ok(r.magnitude()),
        None => Ok(f64::INFINITY),
    }
}

pub fn annihilation_residual(series: &SeriesDef, m: usize, n: usize) -> Result<f64> {
    annihilation_residual_in(series.alpha(), series.beta(), series.x(), m, n)
}
