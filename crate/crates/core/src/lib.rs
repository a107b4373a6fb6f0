//! Summation of slowly convergent `p+1F_p` hypergeometric series by the
//! `Q^(m)` transformation, at arbitrary precision.
//!
//! ```
//! use hypersum::{partial_sums, q_direct, Preset, PrecisionConfig};
//!
//! let precision = PrecisionConfig::default();
//! let series = Preset::Ex1.series(precision);
//! let sums = partial_sums(&series, 15).unwrap();
//! let q = q_direct(&series, &sums, 7, 1).unwrap();
//! let digits = hypersum::acc(&q, &Preset::Ex1.limit(precision), &precision).unwrap();
//! assert!(digits > 21.0);
//! ```

pub mod classic;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod numerics;
pub mod presets;
pub mod qtransform;
pub mod report;
pub mod series;

pub use diagnostics::{acc, AccuracyReport};
pub use error::{Error, Result};
pub use numerics::{format_number, parse_number, Exact, Field, HPComplex, PrecisionConfig};
pub use presets::Preset;
pub use qtransform::{q_direct, q_table, Path, QTable};
pub use series::{partial_sums, PartialSums, SeriesDef};
