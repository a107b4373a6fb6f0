use std::collections::BTreeMap;

use super::paths::{l_ratio, q_direct, q_remainder_form, recursion_step};
use super::Path;
use crate::error::{Error, Result};
use crate::numerics::HPComplex;
use crate::series::{partial_sums, PartialSums, SeriesDef};

/// A failed cell keeps its error; the rest of the table is unaffected.
pub type Cell = Result<HPComplex>;

/// Triangular array of `Q^(m)_n` over a budget of partial sums.
///
/// Cell `(n, m)` exists iff `1 <= n` and `n + m p <= budget`: it uses
/// exactly `s_n .. s_{n+mp}`. Column `m = 0` holds the partial sums.
#[derive(Debug, Clone)]
pub struct QTable {
    series: SeriesDef,
    sums: PartialSums,
    path: Path,
    budget: usize,
    max_m: usize,
    cells: BTreeMap<(usize, usize), Cell>,
}

impl QTable {
    pub fn series(&self) -> &SeriesDef {
        &self.series
    }

    pub fn sums(&self) -> &PartialSums {
        &self.sums
    }

    pub fn path(&self) -> Path {
        self.path
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn max_m(&self) -> usize {
        self.max_m
    }

    /// `m p`, the number of partial sums beyond `s_n` a cell in column `m`
    /// depends on.
    pub fn stencil(&self, m: usize) -> usize {
        m * self.series.p()
    }

    /// Last row present in column `m`, or `None` when the column is empty.
    pub fn last_row(&self, m: usize) -> Option<usize> {
        self.budget.checked_sub(self.stencil(m)).filter(|&n| n >= 1)
    }

    pub fn get(&self, n: usize, m: usize) -> Option<&Cell> {
        self.cells.get(&(n, m))
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> &BTreeMap<(usize, usize), Cell> {
        &self.cells
    }

    /// Cell with the largest `m` in the first row.
    pub fn best(&self) -> Option<((usize, usize), &Cell)> {
        (0..=self.max_m)
            .rev()
            .find_map(|m| self.cells.get_key_value(&(1, m)))
            .map(|(k, v)| (*k, v))
    }

    pub fn has_degenerate_cells(&self) -> bool {
        self.cells.values().any(|c| c.is_err())
    }
}

/// Builds the table over `s_1 .. s_budget`.
pub fn q_table(series: &SeriesDef, budget: usize, max_m: usize, path: Path) -> Result<QTable> {
    let p = series.p();
    if budget < 1 + p * max_m {
        return Err(Error::shape(format!(
            "budget {budget} is too small for m = {max_m}: need at least {}",
            1 + p * max_m
        )));
    }
    if path == Path::Recursion3F2 && p != 2 {
        return Err(Error::Unsupported(format!(
            "recursion3f2 needs p = 2, this series has p = {p}"
        )));
    }
    let sums = partial_sums(series, budget)?;
    let mut cells = BTreeMap::new();
    for n in 1..=budget {
        cells.insert((n, 0), Ok(sums.s(n).clone()));
    }

    match path {
        Path::Recursion3F2 => {
            let d = series.digits();
            let mut num: Vec<HPComplex> = (1..=budget).map(|n| sums.s(n).clone()).collect();
            let mut den = vec![HPComplex::one(d); budget];
            for m in 1..=max_m {
                let (nn, dd, scales) = recursion_step(series, m, 1, &num, &den)?;
                for (i, ((a, b), scale)) in nn.iter().zip(&dd).zip(&scales).enumerate() {
                    let n = i + 1;
                    let tol = rug::Float::with_val(scale.prec(), series.precision().tolerance(4));
                    let cell = if b.abs() < tol * scale {
                        Err(Error::Degenerate { n, m })
                    } else {
                        Ok(a / b)
                    };
                    cells.insert((n, m), cell);
                }
                num = nn;
                den = dd;
            }
        }
        _ => {
            let eval = match path {
                Path::Direct => q_direct,
                Path::Remainder => q_remainder_form,
                Path::Operator => l_ratio,
                Path::Recursion3F2 => unreachable!(),
            };
            for m in 1..=max_m {
                for n in 1..=budget - m * p {
                    cells.insert((n, m), eval(series, &sums, m, n));
                }
            }
        }
    }

    Ok(QTable {
        series: series.clone(),
        sums,
        path,
        budget,
        max_m,
        cells,
    })
}
