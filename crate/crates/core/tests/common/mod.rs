#![allow(dead_code)]

use hypersum::{HPComplex, PrecisionConfig, SeriesDef};
use rand::rngs::StdRng;
use rand::Rng;

pub fn complex(rng: &mut StdRng, lo: f64, hi: f64, imag: f64) -> HPComplex {
    HPComplex::from_parts_f64(rng.gen_range(lo..hi), rng.gen_range(-imag..imag), 42)
}

/// A random series with lower parameters away from the poles and
/// `|x| <= max_x`.
pub fn random_series(rng: &mut StdRng, p: usize, max_x: f64) -> SeriesDef {
    let alpha = (0..p).map(|_| complex(rng, -2.5, 3.0, 2.0)).collect();
    let beta = (0..p).map(|_| complex(rng, 0.5, 4.0, 2.0)).collect();
    let r = rng.gen_range(0.05..max_x);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let x = HPComplex::from_parts_f64(r * phase.cos(), r * phase.sin(), 42);
    SeriesDef::new(alpha, beta, x, PrecisionConfig::default()).expect("valid random series")
}
