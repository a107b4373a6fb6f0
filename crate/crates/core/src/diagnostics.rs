//! Accuracy against a known limit, and numeric probes of when and how fast
//! `Q^(m)` accelerates.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numerics::{relative_error, HPComplex, PrecisionConfig};
use crate::qtransform::{lambda_weights, q_direct, Cell, QTable};
use crate::series::{partial_sums, PartialSums, SeriesDef};

/// `-log10 |z/s - 1|`, the number of correct significant digits, capped at
/// `precision.digits`.
pub fn acc(z: &HPComplex, s: &HPComplex, precision: &PrecisionConfig) -> Result<f64> {
    let cap = f64::from(precision.digits);
    let rel = relative_error(z, s)?;
    if rel == 0.0 {
        return Ok(cap);
    }
    Ok((-rel.log10()).min(cap))
}

/// Diagnostics of one cell. Fields needing a reference limit are `None`
/// without one.
#[derive(Debug, Clone)]
pub struct CellReport {
    pub value: Cell,
    pub acc: Option<f64>,
    /// `|Q^(m)_n - s| / |s_n - s|`.
    pub ratio: Option<f64>,
    /// The acceleration condition at this cell.
    pub condition: Option<Result<HPComplex>>,
}

#[derive(Debug, Clone)]
pub struct AccuracyReport {
    pub reference: Option<HPComplex>,
    pub precision: PrecisionConfig,
    pub cells: BTreeMap<(usize, usize), CellReport>,
}

impl AccuracyReport {
    pub fn get(&self, n: usize, m: usize) -> Option<&CellReport> {
        self.cells.get(&(n, m))
    }

    pub fn acc(&self, n: usize, m: usize) -> Option<f64> {
        self.get(n, m).and_then(|c| c.acc)
    }

    pub fn ratio(&self, n: usize, m: usize) -> Option<f64> {
        self.get(n, m).and_then(|c| c.ratio)
    }

    pub fn min_m(&self) -> usize {
        self.cells.keys().map(|k| k.1).min().unwrap_or(0)
    }

    pub fn max_m(&self) -> usize {
        self.cells.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn max_n(&self) -> usize {
        self.cells.keys().map(|k| k.0).max().unwrap_or(0)
    }
}

/// Value, acc and ratio for every cell of a grid.
pub fn assess(
    cells: &BTreeMap<(usize, usize), Cell>,
    sums: &PartialSums,
    reference: Option<&HPComplex>,
    precision: PrecisionConfig,
) -> AccuracyReport {
    let mut out = BTreeMap::new();
    for (&(n, m), cell) in cells {
        let mut report = CellReport {
            value: cell.clone(),
            acc: None,
            ratio: None,
            condition: None,
        };
        if let (Some(s), Ok(v)) = (reference, cell) {
            report.acc = acc(v, s, &precision).ok();
            let base = (s - sums.s(n)).abs();
            if !base.is_zero() {
                report.ratio = Some((s - v).abs().to_f64() / base.to_f64());
            }
        }
        out.insert((n, m), report);
    }
    AccuracyReport {
        reference: reference.cloned(),
        precision,
        cells: out,
    }
}

/// Fills acc and `|Q - s|/|s_n - s|` for each cell of `table`, and the
/// acceleration condition for `m >= 1`.
pub fn acceleration_ratios(table: &QTable, s: &HPComplex) -> AccuracyReport {
    let series = table.series();
    let mut report = assess(table.cells(), table.sums(), Some(s), series.precision());
    for (&(n, m), cell) in report.cells.iter_mut() {
        if m >= 1 {
            cell.condition = Some(acceleration_condition(series, s, m, n, table.sums()));
        }
    }
    report
}

/// `Σ_{k<mp} (M_{k+1}/M_0) a_{n+k} / r_n` with `r_n = s - s_n`.
///
/// `Q^(m)_n - s = r_n (condition - 1)`, so acceleration holds iff this tends
/// to 1.
pub fn acceleration_condition(
    series: &SeriesDef,
    s: &HPComplex,
    m: usize,
    n: usize,
    sums: &PartialSums,
) -> Result<HPComplex> {
    let order = m * series.p();
    sums.require(n)?;
    if order > 0 {
        sums.require_term(n + order - 1)?;
    }
    let r = s - sums.s(n);
    let tol = rug::Float::with_val(r.abs().prec(), series.precision().tolerance(0)) * s.abs();
    if r.abs() <= tol {
        return Err(Error::domain(format!(
            "r_{n} vanishes: the limit is already reached"
        )));
    }
    let w = lambda_weights(series, m, n);
    let mut total = HPComplex::zero(series.digits());
    for k in 0..order {
        total += &(&w.tails[k + 1] * sums.a(n + k));
    }
    Ok(total / w.denominator() / r)
}

/// Coefficients of the large-`n` expansions of the term ratio and of the
/// remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoeffs {
    pub b1: HPComplex,
    pub b2: HPComplex,
    pub d1: HPComplex,
    /// `None` when `b1 = 0`.
    pub d2: Option<HPComplex>,
}

pub fn asymptotic_coeffs(series: &SeriesDef) -> AsymptoticCoeffs {
    let d = series.digits();
    let mut b1 = HPComplex::zero(d);
    let mut squares = HPComplex::zero(d);
    for a in series.alpha() {
        b1 += a;
        squares += &(a * a);
    }
    for b in series.beta() {
        b1 -= b;
        squares -= &(b * b);
    }
    let one = HPComplex::one(d);
    let b2 = (&b1 * &b1 - squares) / HPComplex::from_i64(2, d);
    let d1 = &b1 + &one;
    let d2 = if b1.is_zero() {
        None
    } else {
        Some((&b1 * &b1 + &b1 * &b2 + &b1 + &b2) / &b1)
    };
    AsymptoticCoeffs { b1, b2, d1, d2 }
}

/// Remainder ratios near `n`.
#[derive(Debug, Clone)]
pub struct RatioProbe {
    /// `r_{n+1}/r_n`.
    pub ratio: HPComplex,
    /// `r_{ν+1}/r_ν` for `ν = n .. n+window-1`.
    pub window: Vec<HPComplex>,
    /// Intercept of the least-squares fit `ρ_ν ≈ L + c/ν` over the window,
    /// an estimate of the limit of the ratio.
    pub fitted_limit: HPComplex,
}

pub fn ratio_probe(
    series: &SeriesDef,
    s: &HPComplex,
    sums: &PartialSums,
    n: usize,
    window: usize,
) -> Result<RatioProbe> {
    let window = window.max(1);
    sums.require(n + window)?;
    let d = series.digits();
    let remainders: Vec<HPComplex> = (n..=n + window).map(|nu| s - sums.s(nu)).collect();
    let mut ratios = Vec::with_capacity(window);
    for (i, pair) in remainders.windows(2).enumerate() {
        if pair[0].is_zero() {
            return Err(Error::domain(format!("r_{} vanishes", n + i)));
        }
        ratios.push(&pair[1] / &pair[0]);
    }
    let fitted_limit = if window == 1 {
        ratios[0].clone()
    } else {
        let u: Vec<HPComplex> = (n..n + window)
            .map(|nu| HPComplex::one(d) / HPComplex::from_i64(nu.max(1) as i64, d))
            .collect();
        let k = HPComplex::from_i64(window as i64, d);
        let mut su = HPComplex::zero(d);
        let mut suu = HPComplex::zero(d);
        let mut sy = HPComplex::zero(d);
        let mut suy = HPComplex::zero(d);
        for (ui, yi) in u.iter().zip(&ratios) {
            su += ui;
            suu += &(ui * ui);
            sy += yi;
            suy += &(ui * yi);
        }
        let det = &k * &suu - &su * &su;
        if det.is_zero() {
            ratios[0].clone()
        } else {
            (&suu * &sy - &su * &suy) / det
        }
    };
    Ok(RatioProbe {
        ratio: ratios[0].clone(),
        window: ratios,
        fitted_limit,
    })
}

/// `Q^(m)_1` at `digits` digits over the minimal budget `1 + mp`, as an
/// independent estimate of the sum.
pub fn extrapolated_limit(series: &SeriesDef, digits: u32, m: usize) -> Result<HPComplex> {
    let series = series.with_precision(PrecisionConfig::new(digits)?);
    let sums = partial_sums(&series, 1 + m * series.p())?;
    q_direct(&series, &sums, m, 1)
}
