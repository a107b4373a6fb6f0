//! Wynn's ε-algorithm, Levin transformations and iterated Aitken Δ².
//!
//! These act on partial sums alone and know nothing of the series
//! parameters; they are the baselines `Q^(m)` is compared against.

use std::collections::BTreeMap;
use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::HPComplex;
use crate::qtransform::Cell;
use crate::series::PartialSums;

/// `|a - b|` below `10^(4-P) · max(|a|, |b|)` leaves nothing to divide by.
fn difference_lost(sums: &PartialSums, diff: &HPComplex, a: &HPComplex, b: &HPComplex) -> bool {
    let scale = {
        let (x, y) = (a.abs(), b.abs());
        if x > y {
            x
        } else {
            y
        }
    };
    let tol = Float::with_val(scale.prec(), sums.precision().tolerance(4));
    diff.is_zero() || diff.abs() <= tol * scale
}

/// The ε rhombus over `s_0 .. s_N`.
///
/// Column `k` holds `ε_k^(n)` for `n + k <= N`. `None` marks a cell whose
/// recursion divided by a vanishing difference, or that depends on one.
#[derive(Debug, Clone)]
pub struct EpsilonTable {
    max_k: usize,
    eps: BTreeMap<(usize, usize), Option<HPComplex>>,
}

impl EpsilonTable {
    /// `ε_k^(n)`, `None` when outside the table or unavailable.
    pub fn get(&self, n: usize, k: usize) -> Option<&HPComplex> {
        self.eps.get(&(n, k)).and_then(Option::as_ref)
    }

    /// Whether `(n, k)` lies inside the table at all.
    pub fn contains(&self, n: usize, k: usize) -> bool {
        self.eps.contains_key(&(n, k))
    }

    /// `ε_{2m}^(n)`, the value compared with `Q^(m)_n`.
    pub fn even(&self, n: usize, m: usize) -> Option<&HPComplex> {
        self.get(n, 2 * m)
    }

    pub fn max_column(&self) -> usize {
        self.max_k
    }

    pub fn unavailable(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.eps
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(k, _)| *k)
    }
}

/// Runs the rhombus rule up to column `max_even`.
pub fn epsilon_table(sums: &PartialSums, max_even: usize) -> Result<EpsilonTable> {
    let last = sums.len();
    if last < max_even {
        return Err(Error::shape(format!(
            "column {max_even} needs s_0..s_{max_even}, only s_0..s_{last} are available"
        )));
    }
    let digits = sums.digits();
    let mut eps = BTreeMap::new();
    let mut prev: Vec<Option<HPComplex>> = vec![Some(HPComplex::zero(digits)); last + 2];
    let mut cur: Vec<Option<HPComplex>> = sums.sums().iter().cloned().map(Some).collect();
    for (n, v) in cur.iter().enumerate() {
        eps.insert((n, 0), v.clone());
    }
    for k in 1..=max_even {
        let next: Vec<Option<HPComplex>> = (0..=last - k)
            .map(|n| {
                let (a, b) = (cur[n + 1].as_ref()?, cur[n].as_ref()?);
                let base = prev[n + 1].as_ref()?;
                let diff = a - b;
                if difference_lost(sums, &diff, a, b) {
                    return None;
                }
                Some(base + &diff.recip())
            })
            .collect();
        for (n, v) in next.iter().enumerate() {
            eps.insert((n, k), v.clone());
        }
        prev = cur;
        cur = next;
    }
    Ok(EpsilonTable {
        max_k: max_even,
        eps,
    })
}

/// Remainder estimate `ω_n` of a Levin transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevinVariant {
    /// `a_n`
    T,
    /// `a_{n+1}`
    D,
    /// `(n+1) a_n`
    U,
    /// `a_n a_{n+1} / (a_n - a_{n+1})`
    V,
}

impl LevinVariant {
    pub const ALL: [LevinVariant; 4] = [
        LevinVariant::T,
        LevinVariant::D,
        LevinVariant::U,
        LevinVariant::V,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LevinVariant::T => "t",
            LevinVariant::D => "d",
            LevinVariant::U => "u",
            LevinVariant::V => "v",
        }
    }

    /// Offset of the highest term index `ω_{n+m}` reads, relative to `n+m`.
    fn lookahead(self) -> usize {
        match self {
            LevinVariant::T | LevinVariant::U => 0,
            LevinVariant::D | LevinVariant::V => 1,
        }
    }
}

impl fmt::Display for LevinVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevinSpec {
    pub variant: LevinVariant,
    /// `γ` in the weights `(n + j + γ)^{m-1}`.
    pub shift: f64,
}

impl LevinSpec {
    pub fn new(variant: LevinVariant) -> Self {
        LevinSpec {
            variant,
            shift: 1.0,
        }
    }
}

fn omega(sums: &PartialSums, variant: LevinVariant, k: usize) -> Result<HPComplex> {
    let a = sums.a(k);
    let w = match variant {
        LevinVariant::T => a.clone(),
        LevinVariant::D => sums.a(k + 1).clone(),
        LevinVariant::U => HPComplex::from_i64(k as i64 + 1, sums.digits()) * a,
        LevinVariant::V => {
            let b = sums.a(k + 1);
            let diff = a - b;
            if diff.is_zero() {
                return Err(Error::domain(format!(
                    "Levin v estimate undefined at index {k}: a_{k} = a_{}",
                    k + 1
                )));
            }
            a * b / diff
        }
    };
    if w.is_zero() {
        return Err(Error::domain(format!(
            "Levin {variant} estimate ω_{k} vanishes"
        )));
    }
    Ok(w)
}

/// `Σ_j (-1)^j C(m,j) ((n+j+γ)/(n+m+γ))^{m-1} s_{n+j}/ω_{n+j}` over the same
/// sum applied to 1.
///
/// The common factor `(n+m+γ)^{m-1}` is divided out; it cancels in the
/// quotient and keeps the weights of order one.
pub fn levin(sums: &PartialSums, spec: LevinSpec, m: usize, n: usize) -> Result<HPComplex> {
    if m == 0 {
        sums.require(n)?;
        return Ok(sums.s(n).clone());
    }
    sums.require(n + m)?;
    sums.require_term(n + m + spec.variant.lookahead())?;
    let digits = sums.digits();
    let gamma = HPComplex::from_f64(spec.shift, digits);
    let top = &gamma + &HPComplex::from_i64((n + m) as i64, digits);
    let mut num = HPComplex::zero(digits);
    let mut den = HPComplex::zero(digits);
    let mut scale = HPComplex::zero(digits).abs();
    let mut binom = rug::Integer::from(1);
    for j in 0..=m {
        let base = (&gamma + &HPComplex::from_i64((n + j) as i64, digits)) / &top;
        let mut w = base.powi(m as i64 - 1) * HPComplex::from_integer(&binom, digits);
        if j % 2 == 1 {
            w = -w;
        }
        let w = w / omega(sums, spec.variant, n + j)?;
        scale += w.abs();
        num += &(&w * sums.s(n + j));
        den += &w;
        binom = binom * (m - j) as u32 / (j + 1) as u32;
    }
    let tol = Float::with_val(scale.prec(), sums.precision().tolerance(4));
    if den.abs() < tol * scale {
        return Err(Error::Degenerate { n, m });
    }
    Ok(num / den)
}

/// The sequence after `iterations` passes of `s'_ν = s_ν - (Δs_ν)²/Δ²s_ν`,
/// read at `n`.
pub fn aitken(sums: &PartialSums, iterations: usize, n: usize) -> Result<HPComplex> {
    sums.require(n + 2 * iterations)?;
    let mut row: Vec<HPComplex> = sums.sums()[n..=n + 2 * iterations].to_vec();
    for it in 1..=iterations {
        let mut next = Vec::with_capacity(row.len() - 2);
        for w in row.windows(3) {
            let d1 = &w[1] - &w[0];
            let d2 = &w[2] - &w[1];
            let dd = &d2 - &d1;
            if difference_lost(sums, &dd, &d2, &d1) {
                return Err(Error::Degenerate { n, m: it });
            }
            next.push(&w[0] - &(&d1 * &d1 / dd));
        }
        row = next;
    }
    Ok(row.swap_remove(0))
}

/// A comparison method other than `Q^(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicMethod {
    /// Column `m` is `ε_{2m}`.
    Epsilon,
    Levin(LevinVariant),
    /// Column `m` is `m` iterations.
    Aitken,
}

impl ClassicMethod {
    /// Number of partial sums beyond `s_n` that column `m` touches,
    /// including those implied by the remainder estimates.
    pub fn stencil(self, m: usize) -> usize {
        match self {
            ClassicMethod::Epsilon | ClassicMethod::Aitken => 2 * m,
            ClassicMethod::Levin(_) if m == 0 => 0,
            ClassicMethod::Levin(v) => m + 1 + v.lookahead(),
        }
    }
}

/// Triangular grid of a classic method: cell `(n, m)` exists iff
/// `1 <= n` and `n + stencil(m) <= budget`.
pub fn classic_cells(
    sums: &PartialSums,
    method: ClassicMethod,
    budget: usize,
    max_m: usize,
) -> Result<BTreeMap<(usize, usize), Cell>> {
    sums.require(budget)?;
    // A window truncated at s_budget keeps cells from seeing data past it.
    let window = PartialSums::from_sums(sums.sums()[..=budget].to_vec(), sums.precision());
    let eps = match method {
        ClassicMethod::Epsilon => Some(epsilon_table(&window, (2 * max_m).min(budget))?),
        _ => None,
    };
    let mut cells = BTreeMap::new();
    for m in 0..=max_m {
        let reach = method.stencil(m);
        if reach >= budget {
            break;
        }
        for n in 1..=budget - reach {
            let cell = match method {
                ClassicMethod::Epsilon => eps
                    .as_ref()
                    .and_then(|t| t.even(n, m))
                    .cloned()
                    .ok_or(Error::Degenerate { n, m }),
                ClassicMethod::Levin(v) => levin(&window, LevinSpec::new(v), m, n),
                ClassicMethod::Aitken => aitken(&window, m, n),
            };
            cells.insert((n, m), cell);
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{parse_number, relative_error, PrecisionConfig};
    use crate::qtransform::q_direct;
    use crate::series::{partial_sums, SeriesDef};
    use proptest::prelude::*;

    fn p() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn num(s: &str) -> HPComplex {
        parse_number(s, &p()).unwrap()
    }

    fn geometric(x: &str) -> SeriesDef {
        SeriesDef::new(vec![num("2")], vec![num("2")], num(x), p()).unwrap()
    }

    #[test]
    fn epsilon_is_exact_on_geometric_sums() {
        let sums = partial_sums(&geometric("1/2"), 8).unwrap();
        let t = epsilon_table(&sums, 4).unwrap();
        assert_eq!(t.get(3, 0), Some(sums.s(3)));
        assert!(relative_error(t.even(0, 1).unwrap(), &num("2")).unwrap() < 1e-38);
        assert_eq!(t.max_column(), 4);
        assert!(!t.contains(6, 4));
        // Column 4 divides by differences of the constant column 2.
        assert!(t.get(0, 4).is_none());
        assert!(t.unavailable().any(|k| k == (0, 4)));
    }

    #[test]
    fn epsilon_needs_enough_sums() {
        let sums = partial_sums(&geometric("1/2"), 3).unwrap();
        assert!(epsilon_table(&sums, 4).is_err());
    }

    #[test]
    fn epsilon_even_columns_match_q_for_p1() {
        let s = SeriesDef::new(vec![num("1/3")], vec![num("4/3")], num("-1"), p()).unwrap();
        let sums = partial_sums(&s, 20).unwrap();
        let t = epsilon_table(&sums, 8).unwrap();
        for m in 1..=4 {
            for n in 0..=6 {
                let q = q_direct(&s, &sums, m, n).unwrap();
                let e = t.even(n, m).unwrap();
                assert!(
                    relative_error(e, &q).unwrap() < p().tolerance(6),
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn levin_t_is_exact_on_geometric_sums() {
        let sums = partial_sums(&geometric("-0.35"), 10).unwrap();
        let limit = HPComplex::one(42) / num("1.35");
        for n in 0..5 {
            let v = levin(&sums, LevinSpec::new(LevinVariant::T), 1, n).unwrap();
            assert!(relative_error(&v, &limit).unwrap() < 1e-38);
        }
        assert_eq!(
            &levin(&sums, LevinSpec::new(LevinVariant::U), 0, 4).unwrap(),
            sums.s(4)
        );
    }

    #[test]
    fn levin_u_on_example2_is_finite() {
        let s = crate::presets::Preset::Ex2.series(p());
        let sums = partial_sums(&s, 25).unwrap();
        let v = levin(&sums, LevinSpec::new(LevinVariant::U), 4, 1).unwrap();
        assert!(v.is_finite());
        let limit = crate::presets::Preset::Ex2.limit(p());
        assert!(relative_error(&v, &limit).unwrap() < relative_error(sums.s(6), &limit).unwrap());
    }

    #[test]
    fn levin_rejects_vanishing_estimates() {
        // a_n = 0 from n = 3 on.
        let s = SeriesDef::new(vec![num("-2")], vec![num("3")], num("1/2"), p()).unwrap();
        let sums = partial_sums(&s, 8).unwrap();
        match levin(&sums, LevinSpec::new(LevinVariant::T), 3, 1) {
            Err(Error::Domain(msg)) => assert!(msg.contains("ω_3"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(levin(&sums, LevinSpec::new(LevinVariant::D), 8, 1).is_err());
    }

    #[test]
    fn aitken_basics() {
        let sums = partial_sums(&geometric("0.6"), 10).unwrap();
        assert_eq!(&aitken(&sums, 0, 3).unwrap(), sums.s(3));
        let v = aitken(&sums, 1, 2).unwrap();
        assert!(relative_error(&v, &num("2.5")).unwrap() < 1e-38);

        let s = crate::presets::Preset::Ex1.series(p());
        let sums = partial_sums(&s, 15).unwrap();
        assert!(aitken(&sums, 3, 1).unwrap().is_finite());
        assert!(aitken(&sums, 8, 1).is_err());
    }

    #[test]
    fn aitken_equals_the_second_epsilon_column() {
        let s = crate::presets::Preset::Ex3.series(p());
        let sums = partial_sums(&s, 14).unwrap();
        let t = epsilon_table(&sums, 2).unwrap();
        for n in 0..12 {
            let a = aitken(&sums, 1, n).unwrap();
            assert!(relative_error(&a, t.even(n, 1).unwrap()).unwrap() < p().tolerance(8));
        }
    }

    #[test]
    fn classic_grid_respects_the_budget() {
        let s = crate::presets::Preset::Ex1.series(p());
        let sums = partial_sums(&s, 15).unwrap();
        for method in [
            ClassicMethod::Epsilon,
            ClassicMethod::Aitken,
            ClassicMethod::Levin(LevinVariant::T),
            ClassicMethod::Levin(LevinVariant::V),
        ] {
            let cells = classic_cells(&sums, method, 15, 7).unwrap();
            for &(n, m) in cells.keys() {
                assert!(n >= 1 && n + method.stencil(m) <= 15);
            }
            let expected: usize = (0..=7)
                .map(|m| 15usize.saturating_sub(method.stencil(m)))
                .sum();
            assert_eq!(cells.len(), expected, "{method:?}");
        }
    }

    fn random_sums(values: &[(f64, f64)]) -> PartialSums {
        let seq = values
            .iter()
            .map(|&(re, im)| HPComplex::from_parts_f64(re, im, 42))
            .collect();
        PartialSums::from_sums(seq, p())
    }

    proptest! {
        #[test]
        fn transforms_are_translative(
            values in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 12),
            c in (-5.0f64..5.0, -5.0f64..5.0),
        ) {
            let base = random_sums(&values);
            let shift = HPComplex::from_parts_f64(c.0, c.1, 42);
            let moved = base.shifted(&shift);
            let close = |a: Result<HPComplex>, b: Result<HPComplex>| match (a, b) {
                (Ok(a), Ok(b)) => {
                    let expected = &a + &shift;
                    (&b - &expected).abs_f64() <= 1e-25 * (1.0 + expected.abs_f64())
                }
                (Err(_), _) | (_, Err(_)) => true,
            };
            let (e0, e1) = (epsilon_table(&base, 4).unwrap(), epsilon_table(&moved, 4).unwrap());
            for n in 0..=7 {
                if let (Some(a), Some(b)) = (e0.even(n, 2), e1.even(n, 2)) {
                    prop_assert!(close(Ok(a.clone()), Ok(b.clone())));
                }
            }
            prop_assert!(close(aitken(&base, 2, 1), aitken(&moved, 2, 1)));
            // The shift leaves the differences, hence every ω, unchanged.
            for v in LevinVariant::ALL {
                prop_assert!(close(levin(&base, LevinSpec::new(v), 3, 2), levin(&moved, LevinSpec::new(v), 3, 2)));
            }
        }
    }
}
