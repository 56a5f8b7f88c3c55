//! Exact scalars over ℚ, 𝔽_p and the Gaussian rationals ℚ(i).
//!
//! A [`Scalar`] always knows which [`Field`] it belongs to. Arithmetic between
//! scalars of different fields is a programming error and panics; every public
//! constructor that accepts caller-supplied scalars (matrices, polynomials,
//! configurations) checks field agreement up front and reports
//! [`LabError::FieldMismatch`] instead.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// The ambient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// Integers modulo a prime. The modulus is validated by [`Field::prime`].
    Prime(u64),
    Gaussian,
}

impl Field {
    /// The prime field 𝔽_p. Fails unless `p` is prime.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(LabError::invalid(format!("{p} is not prime")))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => Scalar::Prime {
                residue: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
            Field::Gaussian => Scalar::Gaussian {
                re: BigRational::from_integer(v.into()),
                im: BigRational::zero(),
            },
        }
    }

    /// Embeds a rational number. Over 𝔽_p this fails when the denominator is
    /// divisible by `p`.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Gaussian => Ok(Scalar::Gaussian {
                re: q.clone(),
                im: BigRational::zero(),
            }),
            Field::Prime(p) => {
                let modulus = BigInt::from(p);
                let num = q.numer().mod_floor(&modulus).to_u64().unwrap();
                let den = q.denom().mod_floor(&modulus).to_u64().unwrap();
                if den == 0 {
                    return Err(LabError::invalid(format!(
                        "{q} has a denominator divisible by {p}"
                    )));
                }
                let inv = mod_inverse(den, p);
                Ok(Scalar::Prime {
                    residue: mul_mod(num, inv, p),
                    modulus: p,
                })
            }
        }
    }

    /// The Gaussian rational `re + im·i`.
    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Gaussian { re, im }
    }

    /// Parses the exact textual form used by configuration files:
    /// `"p/q"` or `"p"` for ℚ and 𝔽_p, and `"p/q+r/s i"`, `"p/q-r/s i"` or
    /// `"r/s i"` for ℚ(i).
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        match self {
            Field::Rational | Field::Prime(_) => {
                let q = parse_rational(text)?;
                self.from_rational(&q)
            }
            Field::Gaussian => {
                let (re, im) = parse_gaussian(text)?;
                Ok(Scalar::Gaussian { re, im })
            }
        }
    }

    /// Configuration-file tag: `rational`, `fp:<prime>` or `gaussian_rational`.
    pub fn tag(self) -> String {
        self.to_string()
    }

    pub fn parse_tag(tag: &str) -> Result<Field> {
        match tag.trim() {
            "rational" => Ok(Field::Rational),
            "gaussian_rational" => Ok(Field::Gaussian),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| LabError::invalid(format!("unknown field tag `{other}`")))?;
                Field::prime(p)
            }
        }
    }

    /// Number of elements for finite fields.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(p),
            _ => None,
        }
    }

    pub fn check(self, s: &Scalar) -> Result<()> {
        let found = s.field();
        if found == self {
            Ok(())
        } else {
            Err(LabError::FieldMismatch {
                expected: self,
                found,
            })
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "fp:{p}"),
            Field::Gaussian => write!(f, "gaussian_rational"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.tag())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let tag = String::deserialize(d)?;
        Field::parse_tag(&tag).map_err(serde::de::Error::custom)
    }
}

/// An exact element of a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
    Gaussian { re: BigRational, im: BigRational },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
            Scalar::Gaussian { .. } => Field::Gaussian,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
            Scalar::Gaussian { re, im } => re.is_zero() && im.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { residue, .. } => *residue == 1,
            Scalar::Gaussian { re, im } => re.is_one() && im.is_zero(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: mod_inverse(*residue, *modulus),
                modulus: *modulus,
            },
            Scalar::Gaussian { re, im } => {
                let norm = re * re + im * im;
                Scalar::Gaussian {
                    re: re / &norm,
                    im: -(im / &norm),
                }
            }
        })
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Sign of a rational scalar; `None` for the other fields.
    pub fn signum(&self) -> Option<i32> {
        self.as_rational().map(|q| {
            if q.is_zero() {
                0
            } else if q.is_positive() {
                1
            } else {
                -1
            }
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
            Scalar::Gaussian { re, im } => {
                if im.is_zero() {
                    write!(f, "{re}")
                } else if im.is_negative() {
                    write!(f, "{re}-{} i", -im)
                } else {
                    write!(f, "{re}+{im} i")
                }
            }
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!(
        "scalar arithmetic across fields ({} vs {})",
        a.field(),
        b.field()
    )
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime {
                    residue: a,
                    modulus,
                },
                Scalar::Prime {
                    residue: b,
                    modulus: m2,
                },
            ) if modulus == m2 => Scalar::Prime {
                residue: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            (Scalar::Gaussian { re: a, im: b }, Scalar::Gaussian { re: c, im: d }) => {
                Scalar::Gaussian {
                    re: a + c,
                    im: b + d,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: if *residue == 0 { 0 } else { modulus - residue },
                modulus: *modulus,
            },
            Scalar::Gaussian { re, im } => Scalar::Gaussian { re: -re, im: -im },
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Gaussian { re: a, im: b }, Scalar::Gaussian { re: c, im: d }) => {
                Scalar::Gaussian {
                    re: a - c,
                    im: b - d,
                }
            }
            _ => self + &(-rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime {
                    residue: a,
                    modulus,
                },
                Scalar::Prime {
                    residue: b,
                    modulus: m2,
                },
            ) if modulus == m2 => Scalar::Prime {
                residue: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            (Scalar::Gaussian { re: a, im: b }, Scalar::Gaussian { re: c, im: d }) => {
                Scalar::Gaussian {
                    re: a * c - b * d,
                    im: a * d + b * c,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            _ => self * &rhs.inv().expect("division by zero scalar"),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime, so Fermat applies.
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || LabError::invalid(format!("`{text}` is not an exact rational"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

fn parse_gaussian(text: &str) -> Result<(BigRational, BigRational)> {
    let bad = || LabError::invalid(format!("`{text}` is not an exact Gaussian rational"));
    let Some(body) = text.strip_suffix('i') else {
        return Ok((parse_rational(text)?, BigRational::zero()));
    };
    let body = body.trim_end();
    // Split at the last sign that is not the leading one.
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let imag_of = |s: &str| -> Result<BigRational> {
        match s.trim() {
            "" | "+" => Ok(BigRational::one()),
            "-" => Ok(-BigRational::one()),
            s => parse_rational(s.strip_prefix('+').unwrap_or(s)),
        }
    };
    match split {
        Some(i) if !body[..i].trim_end().ends_with('/') => {
            let re = parse_rational(&body[..i]).map_err(|_| bad())?;
            let im = imag_of(&body[i..]).map_err(|_| bad())?;
            Ok((re, im))
        }
        _ => Ok((BigRational::zero(), imag_of(body).map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rationals_are_reduced() {
        let a = Field::Rational.parse_scalar("6/-4").unwrap();
        assert_eq!(a, Scalar::Rational(q(-3, 2)));
        assert_eq!(a.to_string(), "-3/2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(101).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(
            a,
            Scalar::Prime {
                residue: 100,
                modulus: 101
            }
        );
        let inv = f.from_i64(7).inv().unwrap();
        assert!((&inv * &f.from_i64(7)).is_one());
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_i64(51));
        assert!(Field::prime(100).is_err());
        assert!(f.from_rational(&q(1, 101)).is_err());
    }

    #[test]
    fn large_prime_modulus() {
        let p = 18_446_744_073_709_551_557; // largest 64-bit prime
        let f = Field::prime(p).unwrap();
        assert_eq!(
            f.from_i64(-1),
            Scalar::Prime {
                residue: p - 1,
                modulus: p
            }
        );
        let x = f.from_i64(123_456_789);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn gaussian_parse_and_inverse() {
        let g = Field::Gaussian;
        let z = g.parse_scalar("1/2-3/4 i").unwrap();
        assert_eq!(z, Field::gaussian(q(1, 2), q(-3, 4)));
        assert_eq!(z.to_string(), "1/2-3/4 i");
        assert_eq!(
            g.parse_scalar("-2 i").unwrap(),
            Field::gaussian(q(0, 1), q(-2, 1))
        );
        assert_eq!(
            g.parse_scalar("i").unwrap(),
            Field::gaussian(q(0, 1), q(1, 1))
        );
        assert_eq!(
            g.parse_scalar("-5/3").unwrap(),
            Field::gaussian(q(-5, 3), q(0, 1))
        );
        assert!((&z * &z.inv().unwrap()).is_one());
        let i = g.parse_scalar("i").unwrap();
        assert_eq!(&i * &i, g.from_i64(-1));
    }

    #[test]
    fn field_tags_round_trip() {
        for tag in ["rational", "fp:101", "gaussian_rational"] {
            assert_eq!(Field::parse_tag(tag).unwrap().tag(), tag);
        }
        assert!(Field::parse_tag("fp:91").is_err());
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..5000u64 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "{n}");
        }
    }

    #[test]
    #[should_panic(expected = "across fields")]
    fn mixed_field_arithmetic_panics() {
        let _ = &Field::Rational.one() + &Field::Gaussian.one();
    }
}
