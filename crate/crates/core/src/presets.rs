//! The three worked series with known sums.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::numerics::{parse_with_digits, HPComplex, PrecisionConfig};
use crate::series::SeriesDef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Preset {
    /// `3F2(3, -1/2, 1; 4, 1; -1)`, an alternating series with sum
    /// `(44√2 - 16)/35`.
    Ex1,
    /// `3F2(1/6, 1/3, 1; 1/2, 1; 25/27)`, linearly convergent with sum `3√3/4`.
    Ex2,
    /// A complex-parameter series at `x = 1`, logarithmically convergent.
    Ex3,
}

/// Sum of [`Preset::Ex3`] to 16 digits.
pub const EX3_LIMIT: &str = "0.7808031959823745-0.2060305207425406i";

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Ex1, Preset::Ex2, Preset::Ex3];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Ex1 => "ex1",
            Preset::Ex2 => "ex2",
            Preset::Ex3 => "ex3",
        }
    }

    /// `(alpha, beta, x)` as literals.
    pub fn literals(
        self,
    ) -> (
        &'static [&'static str],
        &'static [&'static str],
        &'static str,
    ) {
        match self {
            Preset::Ex1 => (&["3", "-1/2"], &["4", "1"], "-1"),
            Preset::Ex2 => (&["1/6", "1/3"], &["1/2", "1"], "25/27"),
            Preset::Ex3 => (&["1.7+2.5i", "1.5+2.0i"], &["1.3-3.0i", "3.2-4.0i"], "1"),
        }
    }

    pub fn series(self, precision: PrecisionConfig) -> SeriesDef {
        let d = precision.working();
        let parse = |s: &str| parse_with_digits(s, d).expect("preset literal");
        let (alpha, beta, x) = self.literals();
        SeriesDef::new(
            alpha.iter().map(|s| parse(s)).collect(),
            beta.iter().map(|s| parse(s)).collect(),
            parse(x),
            precision,
        )
        .expect("preset parameters are valid")
    }

    /// The known sum at the working precision. For `ex3` only 16 digits are
    /// known.
    pub fn limit(self, precision: PrecisionConfig) -> HPComplex {
        let d = precision.working();
        let int = |v| HPComplex::from_i64(v, d);
        match self {
            Preset::Ex1 => (int(44) * int(2).sqrt() - int(16)) / int(35),
            Preset::Ex2 => int(3) * int(3).sqrt() / int(4),
            Preset::Ex3 => parse_with_digits(EX3_LIMIT, d).expect("preset literal"),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown preset `{s}` (expected ex1, ex2 or ex3)")))
    }
}
