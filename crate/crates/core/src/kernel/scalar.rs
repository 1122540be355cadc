//! Scalar fields.
//!
//! Everything in the crate is generic over [`Field`]. Two implementations are
//! provided: [`Qi`], the Gaussian rationals Q(i) with exact big-integer
//! arithmetic, and [`Complex64`] for floating-point runs. Exact mode is the
//! default; numeric mode exists for root finding and spectra.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arithmetic mode of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Numeric => f.write_str("numeric"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "numeric" => Ok(Mode::Numeric),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// A commutative field with the handful of extras the crate needs.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + AddAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    fn from_complex_ratio(re: &BigRational, im: &BigRational) -> Self;

    /// Exact zero test. In numeric mode this is a bit-level comparison.
    fn is_zero(&self) -> bool;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Approximate modulus, for tolerances and reporting.
    fn modulus(&self) -> f64;

    /// A non-negative real size in the same field: `|re| + |im|` for exact
    /// scalars (so that zero stays decidable), the modulus for floats.
    fn size(&self) -> Self;

    /// Total order on values returned by [`Field::size`] and, more
    /// generally, lexicographic on (re, im). Used for canonical sorting.
    fn canonical_cmp(&self, other: &Self) -> Ordering;

    fn to_complex(&self) -> Complex64;

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc *= self;
        }
        acc
    }
}

/// Exact element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Qi {
    pub re: BigRational,
    pub im: BigRational,
}

impl Qi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Qi { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Qi { re, im: BigRational::zero() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Qi::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Debug for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders as `p/q+r/s i` with the imaginary part always present, e.g. `1/2+0i`.
impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

impl FromStr for Qi {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let body = s.strip_suffix('i').ok_or_else(|| format!("`{s}`: missing imaginary unit"))?;
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, ch)| ch == '+' || ch == '-')
            .map(|(k, _)| k)
            .last()
            .ok_or_else(|| format!("`{s}`: expected re+im i"))?;
        let (re, im) = body.split_at(split);
        let re = parse_ratio(re)?;
        let im = parse_ratio(im.strip_prefix('+').unwrap_or(im))?;
        Ok(Qi { re, im })
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator `{num}`"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator `{den}`"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

fn qi_mul(a: &Qi, b: &Qi) -> Qi {
    match (a.im.is_zero(), b.im.is_zero()) {
        (true, true) => Qi::real(&a.re * &b.re),
        (true, false) => Qi::new(&a.re * &b.re, &a.re * &b.im),
        (false, true) => Qi::new(&a.re * &b.re, &a.im * &b.re),
        (false, false) => Qi::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re),
    }
}

impl Add<&Qi> for Qi {
    type Output = Qi;
    fn add(mut self, rhs: &Qi) -> Qi {
        self += rhs;
        self
    }
}

impl Add for Qi {
    type Output = Qi;
    fn add(self, rhs: Qi) -> Qi {
        self + &rhs
    }
}

impl Sub<&Qi> for Qi {
    type Output = Qi;
    fn sub(mut self, rhs: &Qi) -> Qi {
        self -= rhs;
        self
    }
}

impl Sub for Qi {
    type Output = Qi;
    fn sub(self, rhs: Qi) -> Qi {
        self - &rhs
    }
}

impl Mul<&Qi> for Qi {
    type Output = Qi;
    fn mul(self, rhs: &Qi) -> Qi {
        qi_mul(&self, rhs)
    }
}

impl Mul for Qi {
    type Output = Qi;
    fn mul(self, rhs: Qi) -> Qi {
        qi_mul(&self, &rhs)
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&Qi> for Qi {
    fn add_assign(&mut self, rhs: &Qi) {
        if !rhs.re.is_zero() {
            self.re += &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl AddAssign for Qi {
    fn add_assign(&mut self, rhs: Qi) {
        *self += &rhs;
    }
}

impl SubAssign<&Qi> for Qi {
    fn sub_assign(&mut self, rhs: &Qi) {
        if !rhs.re.is_zero() {
            self.re -= &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&Qi> for Qi {
    fn mul_assign(&mut self, rhs: &Qi) {
        *self = qi_mul(self, rhs);
    }
}

impl Field for Qi {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Qi::real(BigRational::zero())
    }

    fn one() -> Self {
        Qi::real(BigRational::one())
    }

    fn from_i64(n: i64) -> Self {
        Qi::real(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_ratio(r: &BigRational) -> Self {
        Qi::real(r.clone())
    }

    fn from_complex_ratio(re: &BigRational, im: &BigRational) -> Self {
        Qi::new(re.clone(), im.clone())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.im.is_zero() {
            if self.re.is_zero() {
                return None;
            }
            return Some(Qi::real(self.re.recip()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Qi::new(&self.re / &norm, -(&self.im / &norm)))
    }

    fn modulus(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }

    fn size(&self) -> Self {
        Qi::real(self.re.abs() + self.im.abs())
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Field for Complex64 {
    const MODE: Mode = Mode::Numeric;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_ratio(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_complex_ratio(re: &BigRational, im: &BigRational) -> Self {
        Complex64::new(re.to_f64().unwrap_or(f64::NAN), im.to_f64().unwrap_or(f64::NAN))
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn size(&self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re).then_with(|| self.im.total_cmp(&other.im))
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}
