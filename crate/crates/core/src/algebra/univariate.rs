//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use num_rational::BigRational;

use super::field::{Field, Scalar};
use super::matrix::ExactRing;
use crate::error::{LabError, Result};

/// Coefficients are stored lowest degree first with no trailing zeros, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Result<Self> {
        for c in &coeffs {
            field.check(c)?;
        }
        Ok(Self::from_trusted(field, coeffs))
    }

    pub(crate) fn from_trusted(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_trusted(c.field(), vec![c])
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    /// The monomial `c·t^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Self::from_trusted(field, coeffs)
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Self {
        Self::from_trusted(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Rational coefficients, lowest degree first.
    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        Self::from_trusted(
            Field::Rational,
            coeffs.into_iter().map(Scalar::Rational).collect(),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * t) + c)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_trusted(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_trusted(
            self.field,
            (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_trusted(
            self.field,
            (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::from_trusted(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::from_trusted(self.field, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.field), |acc, _| acc.mul(self))
    }

    /// Euclidean division. Fails on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(dd) = divisor.degree() else {
            return Err(LabError::invalid("division by the zero polynomial"));
        };
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &lead_inv;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
        }
        Ok((
            Self::from_trusted(self.field, quot),
            Self::from_trusted(self.field, rem),
        ))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_quotient(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().unwrap()),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).unwrap().1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::from_trusted(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &self.field.from_i64(k as i64))
                .collect(),
        )
    }

    /// The product of the distinct irreducible factors, made monic.
    ///
    /// Uses `f / gcd(f, f')`, which is exact in characteristic zero. Over 𝔽_p
    /// the derivative can vanish on p-th powers; callers only rely on this
    /// for rational polynomials.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.is_zero() {
            return self.monic();
        }
        self.exact_quotient(&g).unwrap().monic()
    }

    /// Rational coefficients, if this polynomial is over ℚ.
    pub fn to_rationals(&self) -> Option<Vec<BigRational>> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect()
    }
}

impl ExactRing for UniPoly {
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        UniPoly::mul(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        UniPoly::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        UniPoly::neg(self)
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        self.exact_quotient(rhs)
            .expect("fraction-free elimination produced an inexact division")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}
