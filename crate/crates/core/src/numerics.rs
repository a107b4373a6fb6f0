//! Scalar arithmetic at a configurable number of significant decimal digits.
//!
//! [`HPComplex`] wraps an MPC complex number and remembers the decimal
//! precision it was created with. Binary operations run at the larger of
//! the two operand precisions. [`Exact`] is an exact rational used by the
//! verification routines, and [`Field`] lets the coefficient formulas run
//! unchanged over either scalar.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Round;
use rug::ops::PowAssign;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

/// Digits delivered to the user when nothing else is requested.
pub const DEFAULT_DIGITS: u32 = 32;
/// Extra internal digits carried on top of the requested ones.
pub const DEFAULT_GUARD: u32 = 10;
/// Smallest working precision accepted anywhere.
pub const MIN_PRECISION: u32 = 16;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Mantissa bits needed to carry `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32
}

/// Requested digits plus guard digits; arithmetic runs at their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionConfig {
    pub digits: u32,
    pub guard: u32,
}

impl PrecisionConfig {
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits == 0 {
            return Err(Error::domain("precision must be at least one digit"));
        }
        let config = PrecisionConfig { digits, guard };
        if config.working() < MIN_PRECISION {
            return Err(Error::domain(format!(
                "working precision {} is below the minimum of {MIN_PRECISION} digits",
                config.working()
            )));
        }
        Ok(config)
    }

    /// Working precision in decimal digits.
    pub fn working(&self) -> u32 {
        self.digits + self.guard
    }

    pub fn bits(&self) -> u32 {
        bits_for_digits(self.working())
    }

    /// Relative size below which a quantity counts as lost to rounding,
    /// `10^(k - digits)`.
    pub fn tolerance(&self, k: i32) -> f64 {
        10f64.powi(k - self.digits as i32)
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            digits: DEFAULT_DIGITS,
            guard: DEFAULT_GUARD,
        }
    }
}

/// A complex number carrying `digits` significant decimal digits.
#[derive(Clone, PartialEq)]
pub struct HPComplex {
    value: Complex,
    digits: u32,
}

impl HPComplex {
    fn from_complex(value: Complex, digits: u32) -> Self {
        HPComplex { value, digits }
    }

    fn bits(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    pub fn zero(digits: u32) -> Self {
        Self::from_i64(0, digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_i64(1, digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        Self::from_complex(Complex::with_val(bits_for_digits(digits), v), digits)
    }

    /// Exact conversion of a binary double.
    pub fn from_f64(v: f64, digits: u32) -> Self {
        Self::from_complex(Complex::with_val(bits_for_digits(digits), v), digits)
    }

    pub fn from_parts_f64(re: f64, im: f64, digits: u32) -> Self {
        Self::from_complex(Complex::with_val(bits_for_digits(digits), (re, im)), digits)
    }

    /// `num / den` by one rounded division.
    pub fn from_ratio(num: i64, den: i64, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        let q = Float::with_val(bits, num) / Float::with_val(bits, den);
        Self::from_complex(Complex::with_val(bits, q), digits)
    }

    pub fn from_integer(v: &Integer, digits: u32) -> Self {
        Self::from_complex(Complex::with_val(bits_for_digits(digits), v), digits)
    }

    pub fn from_exact(v: &Exact, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        Self::from_complex(Complex::with_val(bits, Float::with_val(bits, &v.0)), digits)
    }

    pub fn from_floats(re: Float, im: Float, digits: u32) -> Self {
        Self::from_complex(Complex::with_val(bits_for_digits(digits), (re, im)), digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// The same value rounded to a different precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        Self::from_complex(
            Complex::with_val(bits_for_digits(digits), &self.value),
            digits,
        )
    }

    pub fn real(&self) -> &Float {
        self.value.real()
    }

    pub fn imag(&self) -> &Float {
        self.value.imag()
    }

    pub fn re_f64(&self) -> f64 {
        self.value.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.value.imag().to_f64()
    }

    /// Complex modulus.
    pub fn abs(&self) -> Float {
        Float::with_val(self.bits(), self.value.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// `log10 |z|`, `-inf` for zero.
    pub fn abs_log10(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.abs().log10().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.value.real().is_zero() && self.value.imag().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.value.real().is_finite() && self.value.imag().is_finite()
    }

    pub fn is_real(&self) -> bool {
        self.value.imag().is_zero()
    }

    /// Exact comparison with an integer.
    pub fn equals_int(&self, v: i64) -> bool {
        self.is_real() && *self.value.real() == v
    }

    /// `Some(k)` when the value is exactly the integer `k <= 0`.
    pub fn as_nonpositive_integer(&self) -> Option<i64> {
        let re = self.value.real();
        if !self.is_real() || !re.is_integer() || *re > 0 {
            return None;
        }
        re.to_integer().and_then(|i| i.to_i64())
    }

    pub fn conj(&self) -> Self {
        Self::from_complex(
            Complex::with_val(self.bits(), self.value.conj_ref()),
            self.digits,
        )
    }

    pub fn recip(&self) -> Self {
        Self::from_complex(
            Complex::with_val(self.bits(), self.value.recip_ref()),
            self.digits,
        )
    }

    pub fn powi(&self, k: i64) -> Self {
        let mut out = Complex::with_val(self.bits(), &self.value);
        out.pow_assign(k);
        Self::from_complex(out, self.digits)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        Self::from_complex(
            Complex::with_val(self.bits(), self.value.sqrt_ref()),
            self.digits,
        )
    }

    fn binary(&self, rhs: &Self, op: impl FnOnce(u32, &Complex, &Complex) -> Complex) -> Self {
        let digits = self.digits.max(rhs.digits);
        let value = op(bits_for_digits(digits), &self.value, &rhs.value);
        Self::from_complex(value, digits)
    }
}

impl fmt::Debug for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HPComplex({}, {} digits)",
            format_number(self, self.digits),
            self.digits
        )
    }
}

impl fmt::Display for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_number(self, self.digits))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident, $op:tt) => {
        impl $trait<&HPComplex> for &HPComplex {
            type Output = HPComplex;
            fn $method(self, rhs: &HPComplex) -> HPComplex {
                self.binary(rhs, |bits, a, b| Complex::with_val(bits, a $op b))
            }
        }
        impl $trait<HPComplex> for HPComplex {
            type Output = HPComplex;
            fn $method(self, rhs: HPComplex) -> HPComplex {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HPComplex> for HPComplex {
            type Output = HPComplex;
            fn $method(self, rhs: &HPComplex) -> HPComplex {
                (&self).$method(rhs)
            }
        }
        impl $trait<HPComplex> for &HPComplex {
            type Output = HPComplex;
            fn $method(self, rhs: HPComplex) -> HPComplex {
                self.$method(&rhs)
            }
        }
        impl $assign_trait<&HPComplex> for HPComplex {
            fn $assign_method(&mut self, rhs: &HPComplex) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign, +);
forward_binop!(Sub, sub, SubAssign, sub_assign, -);
forward_binop!(Mul, mul, MulAssign, mul_assign, *);

impl Div<&HPComplex> for &HPComplex {
    type Output = HPComplex;
    fn div(self, rhs: &HPComplex) -> HPComplex {
        self.binary(rhs, |bits, a, b| Complex::with_val(bits, a / b))
    }
}

impl Div<HPComplex> for HPComplex {
    type Output = HPComplex;
    fn div(self, rhs: HPComplex) -> HPComplex {
        &self / &rhs
    }
}

impl Div<&HPComplex> for HPComplex {
    type Output = HPComplex;
    fn div(self, rhs: &HPComplex) -> HPComplex {
        &self / rhs
    }
}

impl Neg for &HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex::from_complex(Complex::with_val(self.bits(), -&self.value), self.digits)
    }
}

impl Neg for HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        -&self
    }
}

/// Exact rational scalar for verification runs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exact(pub Rational);

impl Exact {
    pub fn int(v: i64) -> Self {
        Exact(Rational::from(v))
    }

    /// `num / den`; panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Exact(Rational::from((num, den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The ring operations the coefficient formulas need.
///
/// Every constructor takes `&self` so that precision context travels with
/// the value; `lift(3)` on a 42-digit number yields a 42-digit three.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    fn lift(&self, v: i64) -> Self;
    fn lift_integer(&self, v: &Integer) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    /// `None` when `rhs` is exactly zero.
    fn over(&self, rhs: &Self) -> Option<Self>;
    fn negated(&self) -> Self;
    fn is_exact_zero(&self) -> bool;
    /// Approximate modulus as a double.
    fn magnitude(&self) -> f64;
}

impl Field for HPComplex {
    fn lift(&self, v: i64) -> Self {
        HPComplex::from_i64(v, self.digits)
    }
    fn lift_integer(&self, v: &Integer) -> Self {
        HPComplex::from_integer(v, self.digits)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn over(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.abs_f64()
    }
}

impl Field for Exact {
    fn lift(&self, v: i64) -> Self {
        Exact::int(v)
    }
    fn lift_integer(&self, v: &Integer) -> Self {
        Exact(Rational::from(v))
    }
    fn plus(&self, rhs: &Self) -> Self {
        Exact(Rational::from(&self.0 + &rhs.0))
    }
    fn minus(&self, rhs: &Self) -> Self {
        Exact(Rational::from(&self.0 - &rhs.0))
    }
    fn times(&self, rhs: &Self) -> Self {
        Exact(Rational::from(&self.0 * &rhs.0))
    }
    fn over(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(Exact(Rational::from(&self.0 / &rhs.0)))
        }
    }
    fn negated(&self) -> Self {
        Exact(Rational::from(-&self.0))
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.0.to_f64().abs()
    }
}

/// `x^k` by repeated multiplication, `k >= 0`.
pub(crate) fn field_pow<F: Field>(x: &F, k: usize) -> F {
    let mut out = x.lift(1);
    for _ in 0..k {
        out = out.times(x);
    }
    out
}

/// Parses a real, rational or complex literal at the working precision of
/// `precision`.
///
/// Accepted forms: `1.25`, `-3e-2`, `25/27`, `1.7+2.5i`, `1.3-3.0i`, `2i`,
/// `-i`. Whitespace is ignored. Each component may itself be a rational.
pub fn parse_number(text: &str, precision: &PrecisionConfig) -> Result<HPComplex> {
    parse_with_digits(text, precision.working())
}

pub(crate) fn parse_with_digits(text: &str, digits: u32) -> Result<HPComplex> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse {
            token: text.to_string(),
        });
    }
    let bits = bits_for_digits(digits);
    let zero = || Float::with_val(bits, 0);

    let (re, im) = match cleaned.strip_suffix('i') {
        Some(body) => {
            let split = body
                .char_indices()
                .filter(|&(k, c)| {
                    k > 0
                        && (c == '+' || c == '-')
                        && !matches!(body.as_bytes()[k - 1], b'e' | b'E')
                })
                .map(|(k, _)| k)
                .next_back();
            match split {
                Some(k) => (
                    parse_real(&body[..k], bits)?,
                    parse_imag_coeff(&body[k..], bits)?,
                ),
                None => (zero(), parse_imag_coeff(body, bits)?),
            }
        }
        None => (parse_real(&cleaned, bits)?, zero()),
    };
    Ok(HPComplex::from_floats(re, im, digits))
}

fn parse_imag_coeff(text: &str, bits: u32) -> Result<Float> {
    match text {
        "" | "+" => Ok(Float::with_val(bits, 1)),
        "-" => Ok(Float::with_val(bits, -1)),
        _ => parse_real(text, bits),
    }
}

fn parse_real(text: &str, bits: u32) -> Result<Float> {
    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let mut parts = body.split('/');
    let num = parse_decimal(parts.next().unwrap_or(""), bits)?;
    let value = match parts.next() {
        None => num,
        Some(den_text) => {
            if parts.next().is_some() {
                return Err(Error::Parse {
                    token: text.to_string(),
                });
            }
            let den = parse_decimal(den_text, bits)?;
            if den.is_zero() {
                return Err(Error::domain(format!("zero denominator in `{text}`")));
            }
            num / den
        }
    };
    Ok(if negative { -value } else { value })
}

/// Unsigned decimal with optional fraction and exponent.
fn parse_decimal(text: &str, bits: u32) -> Result<Float> {
    let bad = || Error::Parse {
        token: text.to_string(),
    };
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], Some(&text[k + 1..])),
        None => (text, None),
    };
    let mut seen_dot = false;
    let mut seen_digit = false;
    for c in mantissa.chars() {
        match c {
            '0'..='9' => seen_digit = true,
            '.' if !seen_dot => seen_dot = true,
            _ => return Err(bad()),
        }
    }
    if !seen_digit {
        return Err(bad());
    }
    if let Some(exp) = exponent {
        let digits = exp.strip_prefix(['+', '-']).unwrap_or(exp);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
    }
    let parsed = Float::parse(text).map_err(|_| bad())?;
    Ok(Float::with_val(bits, parsed))
}

/// Round-to-nearest decimal rendering with `digits` significant digits per
/// component. Complex values print as `a+bi` / `a-bi`; real values print
/// without an imaginary part.
pub fn format_number(z: &HPComplex, digits: u32) -> String {
    let digits = digits.max(1) as usize;
    let re = format_real(z.real(), digits);
    if z.is_real() {
        return re;
    }
    let im = z.imag();
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    let im_abs = Float::with_val(im.prec(), im.abs_ref());
    format!("{re}{sign}{}i", format_real(&im_abs, digits))
}

fn format_real(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x.is_sign_negative() {
            "-inf".to_string()
        } else {
            "inf".to_string()
        };
    }
    let (negative, mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    // value = 0.MANTISSA * 10^exp
    let exp = exp.unwrap_or(0);
    let lead = exp - 1;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-5..21).contains(&lead) {
        if exp <= 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp) as usize));
            out.push_str(&mantissa);
        } else if exp as usize >= mantissa.len() {
            out.push_str(&mantissa);
            out.extend(std::iter::repeat_n('0', exp as usize - mantissa.len()));
        } else {
            let (int, frac) = mantissa.split_at(exp as usize);
            out.push_str(int);
            out.push('.');
            out.push_str(frac);
        }
    } else {
        let (first, rest) = mantissa.split_at(1);
        out.push_str(first);
        if !rest.is_empty() {
            out.push('.');
            out.push_str(rest);
        }
        out.push('e');
        out.push_str(&lead.to_string());
    }
    out
}

/// `|z/s - 1|` with the complex modulus.
pub fn relative_error(z: &HPComplex, s: &HPComplex) -> Result<f64> {
    if s.is_zero() {
        return Err(Error::domain("relative error against a zero reference"));
    }
    let one = HPComplex::one(z.digits.max(s.digits));
    Ok((z / s - one).abs_f64())
}
