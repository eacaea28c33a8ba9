//! Binary fixed-point arithmetic on big integers, for constants wanted to
//! more digits than `f64` carries.
//!
//! A value is `mantissa / 2^bits`. All operands of one computation share
//! `bits`; every operation truncates toward negative infinity, and the
//! guard bits added by [`Fixed::bits_for_digits`] absorb the accumulated
//! error.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed {
    mantissa: BigInt,
    bits: u32,
}

const GUARD_BITS: u32 = 64;

impl Fixed {
    /// Working precision for `digits` significant decimal digits.
    pub fn bits_for_digits(digits: u32) -> u32 {
        (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        Fixed { mantissa: BigInt::from(v) << bits, bits }
    }

    pub fn from_ratio(r: &BigRational, bits: u32) -> Self {
        let num = r.numer() << bits;
        Fixed { mantissa: num.div_floor(r.denom()), bits }
    }

    /// Parse a plain decimal like `-0.125` or `3`.
    pub fn parse_decimal(s: &str, bits: u32) -> Option<Self> {
        Some(Self::from_ratio(&parse_ratio(s)?, bits))
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Fixed { mantissa: &self.mantissa + &o.mantissa, bits: self.bits }
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Fixed { mantissa: &self.mantissa - &o.mantissa, bits: self.bits }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Fixed { mantissa: (&self.mantissa * &o.mantissa) >> self.bits, bits: self.bits }
    }

    pub fn div(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        assert!(!o.mantissa.is_zero(), "division by zero");
        Fixed { mantissa: (&self.mantissa << self.bits).div_floor(&o.mantissa), bits: self.bits }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Fixed { mantissa: &self.mantissa * k, bits: self.bits }
    }

    pub fn div_int(&self, k: i64) -> Self {
        Fixed { mantissa: self.mantissa.div_floor(&BigInt::from(k)), bits: self.bits }
    }

    pub fn neg(&self) -> Self {
        Fixed { mantissa: -&self.mantissa, bits: self.bits }
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        let m = if k >= 0 { &self.mantissa << (k as usize) } else { &self.mantissa >> ((-k) as usize) };
        Fixed { mantissa: m, bits: self.bits }
    }

    pub fn to_f64(&self) -> f64 {
        let r = BigRational::new(self.mantissa.clone(), BigInt::one() << self.bits);
        r.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` significant digits, rounded to
    /// nearest, in plain or scientific form depending on magnitude.
    pub fn to_decimal(&self, digits: u32) -> String {
        if self.mantissa.is_zero() {
            return "0".into();
        }
        let neg = self.mantissa.is_negative();
        let a = self.mantissa.abs();
        // Decimal exponent e with 10^e <= |x| < 10^(e+1).
        let approx = a.bits() as f64 - self.bits as f64;
        let mut e = (approx * std::f64::consts::LOG10_2).floor() as i64 - 1;
        let scaled = |e: i64| -> BigInt {
            // round(|x| * 10^(digits-1-e))
            let p = digits as i64 - 1 - e;
            let (num, den) = if p >= 0 {
                (&a * BigInt::from(10u32).pow(p as u32), BigInt::one() << self.bits)
            } else {
                (a.clone(), (BigInt::one() << self.bits) * BigInt::from(10u32).pow((-p) as u32))
            };
            let twice: BigInt = num * 2 + &den;
            twice.div_floor(&(den * 2))
        };
        let limit = BigInt::from(10u32).pow(digits);
        let mut s = scaled(e);
        while s >= limit {
            e += 1;
            s = scaled(e);
        }
        let ds = s.to_string();
        let body = if (-5..digits as i64).contains(&e) {
            if e >= 0 {
                let (int, frac) = ds.split_at(e as usize + 1);
                if frac.is_empty() { int.to_string() } else { format!("{int}.{frac}") }
            } else {
                format!("0.{}{}", "0".repeat((-e - 1) as usize), ds)
            }
        } else {
            format!("{}.{}e{}", &ds[..1], &ds[1..], e)
        };
        if neg { format!("-{body}") } else { body }
    }

    /// `pi` by Machin's formula.
    pub fn pi(bits: u32) -> Self {
        let w = bits + 16;
        let t = atan_inv(5, w).mul_int(16).sub(&atan_inv(239, w).mul_int(4));
        t.rescale(bits)
    }

    /// `ln 2 = 2 atanh(1/3)`.
    pub fn ln2(bits: u32) -> Self {
        let w = bits + 16;
        atanh_inv(3, w).mul_int(2).rescale(bits)
    }

    pub fn exp(&self) -> Self {
        let w = self.bits + 32;
        let x = self.rescale(w);
        let ln2 = Self::ln2(w);
        let n = x.div(&ln2).round_to_int();
        let r = x.sub(&ln2.mul_int(n));
        // exp(r) = exp(r / 2^8)^(2^8), |r / 2^8| < 2^-9.
        let h = r.shl(-8);
        let one = Self::from_int(1, w);
        let (mut sum, mut term, mut k) = (one.clone(), one, 1i64);
        while !term.mantissa.is_zero() {
            term = term.mul(&h).div_int(k);
            sum = sum.add(&term);
            k += 1;
        }
        for _ in 0..8 {
            sum = sum.mul(&sum);
        }
        sum.shl(n).rescale(self.bits)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Self {
        assert!(self.mantissa.is_positive(), "ln of a non-positive value");
        let w = self.bits + 32;
        let x = self.rescale(w);
        // x = y 2^e with y in [1, 2).
        let e = x.mantissa.bits() as i64 - 1 - w as i64;
        let y = x.shl(-e);
        let one = Self::from_int(1, w);
        let z = y.sub(&one).div(&y.add(&one));
        let z2 = z.mul(&z);
        let (mut sum, mut pow, mut k) = (z.clone(), z, 1i64);
        loop {
            pow = pow.mul(&z2);
            let term = pow.div_int(2 * k + 1);
            if term.mantissa.is_zero() {
                break;
            }
            sum = sum.add(&term);
            k += 1;
        }
        sum.mul_int(2).add(&Self::ln2(w).mul_int(e)).rescale(self.bits)
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::from_int(1, self.bits);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn rescale(&self, bits: u32) -> Self {
        let m = if bits >= self.bits {
            &self.mantissa << (bits - self.bits)
        } else {
            &self.mantissa >> (self.bits - bits)
        };
        Fixed { mantissa: m, bits }
    }

    fn round_to_int(&self) -> i64 {
        let half = BigInt::one() << (self.bits - 1);
        ((&self.mantissa + half) >> self.bits).to_i64().expect("exponent out of range")
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        (self.bits == o.bits).then(|| self.mantissa.cmp(&o.mantissa))
    }
}

impl std::ops::Add for Fixed {
    type Output = Fixed;
    fn add(self, o: Fixed) -> Fixed {
        Fixed::add(&self, &o)
    }
}

/// `atan(1/n)` by its alternating series.
fn atan_inv(n: i64, bits: u32) -> Fixed {
    let n2 = BigInt::from(n * n);
    let mut pow = (BigInt::one() << bits) / n;
    let mut sum = pow.clone();
    let mut k = 1i64;
    while !pow.is_zero() {
        pow /= &n2;
        let term = &pow / (2 * k + 1);
        if k % 2 == 1 { sum -= term } else { sum += term }
        k += 1;
    }
    Fixed { mantissa: sum, bits }
}

/// `atanh(1/n)`.
fn atanh_inv(n: i64, bits: u32) -> Fixed {
    let n2 = BigInt::from(n * n);
    let mut pow = (BigInt::one() << bits) / n;
    let mut sum = pow.clone();
    let mut k = 1i64;
    while !pow.is_zero() {
        pow /= &n2;
        sum += &pow / (2 * k + 1);
        k += 1;
    }
    Fixed { mantissa: sum, bits }
}

/// Exact rational value of a decimal literal such as `-1.25e-3`.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().ok()? / 10;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow((-scale) as u32))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// `ln 2 / (2 pi + ln 2)`, `ln 2 / (2 pi)` and `c c1 / 4`, the thresholds
/// and assembled constant behind the lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdConstants {
    pub digits: u32,
    pub cheeger_threshold: String,
    pub arc_threshold: String,
    pub assembled: String,
}

/// Series used for `pi` and `ln 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantRoute {
    /// `pi = 16 atan(1/5) - 4 atan(1/239)`, `ln 2 = 2 atanh(1/3)`.
    Machin,
    /// `pi = 4 atan(1/2) + 4 atan(1/3)`, `ln 2 = 4 atanh(1/7) + 2 atanh(1/17)`.
    Euler,
}

impl ConstantRoute {
    pub fn pi(self, bits: u32) -> Fixed {
        match self {
            ConstantRoute::Machin => Fixed::pi(bits),
            ConstantRoute::Euler => {
                let w = bits + 16;
                atan_inv(2, w).add(&atan_inv(3, w)).mul_int(4).rescale(bits)
            }
        }
    }

    pub fn ln2(self, bits: u32) -> Fixed {
        match self {
            ConstantRoute::Machin => Fixed::ln2(bits),
            ConstantRoute::Euler => {
                let w = bits + 16;
                atanh_inv(7, w).mul_int(4).add(&atanh_inv(17, w).mul_int(2)).rescale(bits)
            }
        }
    }
}

/// `c` and `c1` are exact decimals; `None` for `c1` uses the Cheeger
/// threshold itself, the supremum of admissible `c1`.
pub fn threshold_constants(
    digits: u32,
    c: &BigRational,
    c1: Option<&BigRational>,
    route: ConstantRoute,
) -> ThresholdConstants {
    let bits = Fixed::bits_for_digits(digits);
    let pi = route.pi(bits);
    let ln2 = route.ln2(bits);
    let two_pi = pi.mul_int(2);
    let cheeger = ln2.div(&two_pi.add(&ln2));
    let arc = ln2.div(&two_pi);
    let c1 = c1.map(|r| Fixed::from_ratio(r, bits)).unwrap_or_else(|| cheeger.clone());
    let assembled = Fixed::from_ratio(c, bits).mul(&c1).div_int(4);
    ThresholdConstants {
        digits,
        cheeger_threshold: cheeger.to_decimal(digits),
        arc_threshold: arc.to_decimal(digits),
        assembled: assembled.to_decimal(digits),
    }
}

/// Sign of an exact rational, for callers comparing bounds exactly.
pub fn sign(r: &BigRational) -> Sign {
    r.numer().sign()
}
