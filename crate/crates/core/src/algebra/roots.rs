//! Real root isolation for rational univariate polynomials.
//!
//! Polynomials are converted to primitive integer form and reduced to their
//! squarefree part; root counts come from Sturm sequences built with a
//! sign-corrected primitive pseudo-remainder sequence, and intervals are
//! refined by exact sign evaluation at rational points.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::univariate::UniPoly;
use crate::error::{LabError, Result};

/// A closed interval `[lo, hi]` containing exactly one real root. When
/// `lo == hi` the root is that rational number; otherwise the endpoints are
/// not roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }
}

/// Isolates every distinct real root of `u` in an interval of length at most
/// `width`. Intervals are pairwise disjoint and sorted increasingly.
pub fn isolate_real_roots(u: &UniPoly, width: &BigRational) -> Result<Vec<RootInterval>> {
    if !width.is_positive() {
        return Err(LabError::invalid("isolation width must be positive"));
    }
    let coeffs = u
        .to_rationals()
        .ok_or_else(|| LabError::invalid("real root isolation needs rational coefficients"))?;
    if u.is_zero() {
        return Err(LabError::invalid(
            "the zero polynomial has no isolated roots",
        ));
    }
    let f = IntPoly::from_rationals(&coeffs).squarefree();
    let mut roots = f.isolate();
    for r in &mut roots {
        f.refine(r, width);
    }
    f.separate(&mut roots);
    Ok(roots)
}

/// Primitive integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Clears denominators and divides out the content; both scalings are by
    /// positive numbers, so signs are preserved everywhere.
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let l = coeffs
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints = coeffs
            .iter()
            .map(|q| q.numer() * (&l / q.denom()))
            .collect();
        Self::primitive(ints)
    }

    pub fn from_uni(u: &UniPoly) -> Self {
        Self::from_rationals(&u.to_rationals().expect("rational polynomial"))
    }

    fn primitive(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let g = coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in &mut coeffs {
                *c /= &g;
            }
        }
        IntPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn to_uni(&self) -> UniPoly {
        UniPoly::from_rationals(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        Self::from_uni(&self.to_uni().squarefree_part())
    }

    /// Sign of the value at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let Some(n) = self.degree() else {
            return Ordering::Equal;
        };
        let (p, q) = (x.numer(), x.denom());
        let mut acc = self.coeffs[n].clone();
        let mut qpow = BigInt::one();
        for i in (0..n).rev() {
            qpow *= q;
            acc = acc * p + &self.coeffs[i] * &qpow;
        }
        acc.sign_cmp()
    }

    fn derivative(&self) -> Self {
        Self::primitive(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// `-prem(self, g)` scaled by a positive constant to be primitive.
    fn negated_remainder(&self, g: &Self) -> Self {
        let dg = g.degree().unwrap();
        let lc = g.coeffs[dg].clone();
        let mut r = self.coeffs.clone();
        let mut steps = 0u32;
        while r.len() > dg {
            let c = r.last().unwrap().clone();
            let shift = r.len() - 1 - dg;
            for v in r.iter_mut() {
                *v *= &lc;
            }
            for (j, gc) in g.coeffs.iter().enumerate() {
                r[shift + j] -= &c * gc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps += 1;
        }
        // r = lc^steps · f mod g; a negative multiplier flips the sign.
        let flip = lc.is_negative() && steps % 2 == 1;
        if !flip {
            for v in r.iter_mut() {
                *v = -v.clone();
            }
        }
        Self::primitive(r)
    }

    fn sturm_sequence(&self) -> Vec<IntPoly> {
        let mut seq = vec![self.clone()];
        if self.degree().unwrap_or(0) == 0 {
            return seq;
        }
        seq.push(self.derivative());
        loop {
            let n = seq.len();
            if seq[n - 1].degree().unwrap_or(0) == 0 {
                break;
            }
            let next = seq[n - 2].negated_remainder(&seq[n - 1]);
            if next.is_zero() {
                break;
            }
            seq.push(next);
        }
        seq
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    fn root_bound(&self) -> BigRational {
        let n = self.degree().unwrap();
        let lead = self.coeffs[n].abs();
        let max = self.coeffs[..n]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        BigRational::from_integer(max.div_ceil(&lead) + BigInt::from(2))
    }

    /// Isolating intervals for a squarefree polynomial, without width
    /// refinement.
    pub fn isolate(&self) -> Vec<RootInterval> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sturm = Sturm::new(self);
        let b = self.root_bound();
        let a = -b.clone();
        let mut out = Vec::new();
        let mut stack = vec![(a.clone(), b.clone(), sturm.count(&a, &b))];
        let two = BigRational::from_integer(2.into());
        while let Some((a, b, k)) = stack.pop() {
            match k {
                0 => {}
                1 => out.push(RootInterval { lo: a, hi: b }),
                _ => {
                    let m = (&a + &b) / &two;
                    if self.sign_at(&m) == Ordering::Equal {
                        out.push(RootInterval {
                            lo: m.clone(),
                            hi: m.clone(),
                        });
                        let mut delta = (&b - &a) / BigRational::from_integer(4.into());
                        let (l, r) = loop {
                            let (l, r) = (&m - &delta, &m + &delta);
                            if self.sign_at(&l) != Ordering::Equal
                                && self.sign_at(&r) != Ordering::Equal
                                && sturm.count(&l, &r) == 1
                            {
                                break (l, r);
                            }
                            delta /= &two;
                        };
                        let kl = sturm.count(&a, &l);
                        let kr = sturm.count(&r, &b);
                        stack.push((a, l, kl));
                        stack.push((r, b, kr));
                    } else {
                        let kl = sturm.count(&a, &m);
                        stack.push((m.clone(), b, k - kl));
                        stack.push((a, m, kl));
                    }
                }
            }
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }

    /// Shrinks an isolating interval of a simple root until its width is at
    /// most `width`, bisecting on the sign change.
    pub fn refine(&self, r: &mut RootInterval, width: &BigRational) {
        let two = BigRational::from_integer(2.into());
        let lo_sign = self.sign_at(&r.lo);
        while !r.is_exact() && &r.width() > width {
            let m = (&r.lo + &r.hi) / &two;
            match self.sign_at(&m) {
                Ordering::Equal => {
                    r.lo = m.clone();
                    r.hi = m;
                }
                s if s == lo_sign => r.lo = m,
                _ => r.hi = m,
            }
        }
    }

    /// Halves the interval once.
    pub fn bisect_once(&self, r: &mut RootInterval) {
        let w = r.width() / BigRational::from_integer(2.into());
        if !r.is_exact() {
            self.refine(r, &w);
        }
    }

    /// Shrinks sorted neighbouring intervals until no two share an endpoint.
    pub fn separate(&self, roots: &mut [RootInterval]) {
        for i in 1..roots.len() {
            while roots[i - 1].hi >= roots[i].lo {
                let (left, right) = roots.split_at_mut(i);
                self.bisect_once(&mut left[i - 1]);
                self.bisect_once(&mut right[0]);
            }
        }
    }

    /// Exact rational root inside a non-degenerate isolating interval, if
    /// any. A rational root `p/q` of a primitive integer polynomial has `q`
    /// dividing the leading coefficient, so once the interval is narrower
    /// than `1/lc²` the simplest rational in it is the only candidate.
    pub fn rational_root_in(&self, r: &RootInterval) -> Option<BigRational> {
        if r.is_exact() {
            return Some(r.lo.clone());
        }
        let lc = self.coeffs.last()?.abs();
        let limit = BigRational::new(BigInt::one(), &lc * &lc * BigInt::from(2));
        let mut r = r.clone();
        self.refine(&mut r, &limit);
        if r.is_exact() {
            return Some(r.lo);
        }
        let cand = simplest_between(&r.lo, &r.hi);
        (self.sign_at(&cand) == Ordering::Equal).then_some(cand)
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Sturm sequence of a squarefree polynomial.
pub(crate) struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(f: &IntPoly) -> Self {
        Sturm {
            seq: f.sturm_sequence(),
        }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct roots in `(a, b]`; `a` must not be a root.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }

    /// Whether the polynomial has a root in the closed interval `[a, b]`.
    pub fn has_root_in_closed(&self, a: &BigRational, b: &BigRational) -> bool {
        let f = &self.seq[0];
        if f.sign_at(a) == Ordering::Equal || f.sign_at(b) == Ordering::Equal {
            return true;
        }
        a != b && self.count(a, b) > 0
    }
}

/// The rational with the smallest denominator (then smallest magnitude)
/// strictly between `a` and `b`, `a < b`.
pub fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    assert!(a < b, "empty interval");
    if a.is_negative() && b.is_positive() {
        return BigRational::zero();
    }
    if !b.is_positive() {
        return -simplest_in(&-b.clone(), Some(&-a.clone()));
    }
    simplest_in(a, Some(b))
}

// Simplest rational in the open interval (a, b) with 0 <= a < b, b = None
// meaning +infinity.
fn simplest_in(a: &BigRational, b: Option<&BigRational>) -> BigRational {
    let fl = a.floor();
    let next = &fl + BigRational::one();
    match b {
        None => next,
        Some(b) if &next < b => next,
        Some(b) => {
            // a and b share the integer part `fl` (b may equal fl + 1).
            let lo = a - &fl;
            let hi = b - &fl;
            let inner_lo = hi.recip();
            let inner_hi = if lo.is_zero() { None } else { Some(lo.recip()) };
            fl + simplest_in(&inner_lo, inner_hi.as_ref()).recip()
        }
    }
}
