//! Sparse bivariate polynomials `Σ c_ij x^i y^j` over a [`Field`].
//!
//! Monomials are ordered graded-lexicographically with `x > y`: higher total
//! degree first, then higher power of `x`. The canonical form of a nonzero
//! polynomial has leading coefficient 1 under this order.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Field, Scalar};
use super::matrix::bareiss_determinant;
use super::univariate::UniPoly;
use crate::error::{LabError, Result};

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Exponent = (u32, u32);

/// The variable eliminated by [`resultant`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    X,
    Y,
}

/// Grlex sort key, larger is leading.
fn grlex((i, j): Exponent) -> (u32, u32) {
    (i + j, i)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BivariatePolynomial {
    field: Field,
    terms: BTreeMap<Exponent, Scalar>,
}

impl BivariatePolynomial {
    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn new(field: Field, terms: impl IntoIterator<Item = (Exponent, Scalar)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            field.check(&c)?;
            accumulate(&mut out, e, c);
        }
        Ok(BivariatePolynomial { field, terms: out })
    }

    pub(crate) fn from_map(field: Field, mut terms: BTreeMap<Exponent, Scalar>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        BivariatePolynomial { field, terms }
    }

    /// Integer coefficients given as `(i, j, c)` for `c·x^i y^j`.
    pub fn from_i64_terms(field: Field, terms: &[(u32, u32, i64)]) -> Self {
        let mut out = BTreeMap::new();
        for &(i, j, c) in terms {
            accumulate(&mut out, (i, j), field.from_i64(c));
        }
        BivariatePolynomial { field, terms: out }
    }

    pub fn zero(field: Field) -> Self {
        BivariatePolynomial {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_map(c.field(), BTreeMap::from([((0, 0), c)]))
    }

    pub fn x(field: Field) -> Self {
        Self::from_map(field, BTreeMap::from([((1, 0), field.one())]))
    }

    pub fn y(field: Field) -> Self {
        Self::from_map(field, BTreeMap::from([((0, 1), field.one())]))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &Scalar)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: Exponent) -> Scalar {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant polynomials, including zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    /// Total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, v: Variable) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| if v == Variable::X { i } else { j })
            .max()
    }

    /// Leading exponent and coefficient under grlex.
    pub fn leading_term(&self) -> Option<(Exponent, &Scalar)> {
        self.terms
            .iter()
            .max_by_key(|(&e, _)| grlex(e))
            .map(|(&e, c)| (e, c))
    }

    /// The homogeneous part of top total degree.
    pub fn top_form(&self) -> Self {
        let Some(d) = self.total_degree() else {
            return self.clone();
        };
        Self::from_map(
            self.field,
            self.terms
                .iter()
                .filter(|(&(i, j), _)| i + j == d)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        )
    }

    /// Scaled to leading coefficient 1 under grlex; zero stays zero.
    pub fn canonical(&self) -> Self {
        match self.leading_term() {
            Some((_, lc)) if !lc.is_one() => self.scale(&lc.inv().unwrap()),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_map(
            self.field,
            self.terms.iter().map(|(&e, c)| (e, c * s)).collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.terms.clone();
        for (&e, c) in &rhs.terms {
            accumulate(&mut out, e, c.clone());
        }
        BivariatePolynomial {
            field: self.field,
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        Self::from_map(
            self.field,
            self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                accumulate(&mut out, (i1 + i2, j1 + j2), a * b);
            }
        }
        BivariatePolynomial {
            field: self.field,
            terms: out,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(self.field.one()), |acc, _| acc.mul(self))
    }

    fn mul_monomial(&self, (a, b): Exponent, c: &Scalar) -> Self {
        Self::from_map(
            self.field,
            self.terms
                .iter()
                .map(|(&(i, j), v)| ((i + a, j + b), v * c))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        // Horner in y over x-polynomials keeps the multiplication count low.
        let ycoeffs = self.to_y_coeffs();
        ycoeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, cx| &(&acc * y) + &cx.eval(x))
    }

    /// Partial evaluation `y ↦ f(x0, y)`.
    pub fn eval_x(&self, x0: &Scalar) -> UniPoly {
        let mut coeffs =
            vec![self.field.zero(); self.degree_in(Variable::Y).map_or(0, |d| d as usize + 1)];
        for (&(i, j), c) in &self.terms {
            coeffs[j as usize] = &coeffs[j as usize] + &(c * &x0.pow(i));
        }
        UniPoly::from_trusted(self.field, coeffs)
    }

    /// Partial evaluation `x ↦ f(x, y0)`.
    pub fn eval_y(&self, y0: &Scalar) -> UniPoly {
        self.swap_variables().eval_x(y0)
    }

    pub fn swap_variables(&self) -> Self {
        Self::from_map(
            self.field,
            self.terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.clone()))
                .collect(),
        )
    }

    /// Coefficients as a polynomial in `y` over `F[x]`, lowest power of `y`
    /// first.
    pub fn to_y_coeffs(&self) -> Vec<UniPoly> {
        let Some(dy) = self.degree_in(Variable::Y) else {
            return Vec::new();
        };
        let mut raw = vec![Vec::<Scalar>::new(); dy as usize + 1];
        for (&(i, j), c) in &self.terms {
            let slot = &mut raw[j as usize];
            if slot.len() <= i as usize {
                slot.resize(i as usize + 1, self.field.zero());
            }
            slot[i as usize] = c.clone();
        }
        raw.into_iter()
            .map(|cs| UniPoly::from_trusted(self.field, cs))
            .collect()
    }

    pub fn from_y_coeffs(field: Field, coeffs: &[UniPoly]) -> Self {
        let mut terms = BTreeMap::new();
        for (j, cx) in coeffs.iter().enumerate() {
            for (i, c) in cx.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.insert((i as u32, j as u32), c.clone());
                }
            }
        }
        BivariatePolynomial { field, terms }
    }

    pub fn derivative(&self, v: Variable) -> Self {
        Self::from_map(
            self.field,
            self.terms
                .iter()
                .filter_map(|(&(i, j), c)| match v {
                    Variable::X if i > 0 => Some(((i - 1, j), c * &self.field.from_i64(i as i64))),
                    Variable::Y if j > 0 => Some(((i, j - 1), c * &self.field.from_i64(j as i64))),
                    _ => None,
                })
                .collect(),
        )
    }

    /// Substitutes `x ↦ new_x`, `y ↦ new_y`.
    pub fn compose(&self, new_x: &Self, new_y: &Self) -> Self {
        let dx = self.degree_in(Variable::X).unwrap_or(0) as usize;
        let dy = self.degree_in(Variable::Y).unwrap_or(0) as usize;
        let mut xp = vec![Self::constant(self.field.one())];
        for k in 0..dx {
            xp.push(xp[k].mul(new_x));
        }
        let mut yp = vec![Self::constant(self.field.one())];
        for k in 0..dy {
            yp.push(yp[k].mul(new_y));
        }
        self.terms
            .iter()
            .fold(Self::zero(self.field), |acc, (&(i, j), c)| {
                acc.add(&xp[i as usize].mul(&yp[j as usize]).scale(c))
            })
    }

    /// Substitutes the affine map `x ↦ a·x + b·y + c`, `y ↦ d·x + e·y + f`,
    /// given as `[a, b, c, d, e, f]`.
    pub fn substitute_affine(&self, m: &[Scalar; 6]) -> Self {
        let lin = |a: &Scalar, b: &Scalar, c: &Scalar| {
            Self::from_map(
                self.field,
                BTreeMap::from([
                    ((1, 0), a.clone()),
                    ((0, 1), b.clone()),
                    ((0, 0), c.clone()),
                ]),
            )
        };
        self.compose(&lin(&m[0], &m[1], &m[2]), &lin(&m[3], &m[4], &m[5]))
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.inv().unwrap();
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((e, c)) = rem.leading_term() {
            if e.0 < lm.0 || e.1 < lm.1 {
                return None;
            }
            let shift = (e.0 - lm.0, e.1 - lm.1);
            let t = c * &lc_inv;
            rem = rem.sub(&divisor.mul_monomial(shift, &t));
            quot.insert(shift, t);
        }
        Some(Self::from_map(self.field, quot))
    }

    /// Whether `self` divides `other` exactly.
    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }

    /// Coefficient map keyed by `"i,j"` with exact scalar strings, the form
    /// used by configuration files.
    pub fn to_text_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(&(i, j), c)| (format!("{i},{j}"), c.to_string()))
            .collect()
    }

    pub fn from_text_map<'a>(
        field: Field,
        map: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, v) in map {
            let bad = || LabError::invalid(format!("bad exponent key `{k}`, expected \"i,j\""));
            let (i, j) = k.split_once(',').ok_or_else(bad)?;
            let i: u32 = i.trim().parse().map_err(|_| bad())?;
            let j: u32 = j.trim().parse().map_err(|_| bad())?;
            accumulate(&mut terms, (i, j), field.parse_scalar(v)?);
        }
        Ok(BivariatePolynomial { field, terms })
    }
}

fn accumulate(terms: &mut BTreeMap<Exponent, Scalar>, e: Exponent, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&e) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                terms.remove(&e);
            }
        }
        None => {
            terms.insert(e, c);
        }
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(&e, _)| std::cmp::Reverse(grlex(e)));
        for (k, (&(i, j), c)) in terms.into_iter().enumerate() {
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let part = |v: &str, p: u32| match p {
                        0 => None,
                        1 => Some(v.to_string()),
                        _ => Some(format!("{v}^{p}")),
                    };
                    [part("x", i), part("y", j)]
                        .into_iter()
                        .flatten()
                        .collect::<Vec<_>>()
                        .join("*")
                }
            };
            let (neg, mag) = match c.signum() {
                Some(-1) => (true, (-c).to_string()),
                Some(_) => (false, c.to_string()),
                None => (false, format!("({c})")),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if c.is_one() || (neg && (-c).is_one()) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.field, self)
    }
}

fn uni_content(coeffs: &[UniPoly], field: Field) -> UniPoly {
    coeffs
        .iter()
        .fold(UniPoly::zero(field), |acc, c| acc.gcd(c))
}

fn primitive_part(coeffs: &[UniPoly], field: Field) -> Vec<UniPoly> {
    let content = uni_content(coeffs, field);
    if content.is_zero() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|c| c.exact_quotient(&content).unwrap())
        .collect()
}

/// Pseudo-remainder of `a` by `b` as polynomials in `y` over `F[x]`, up to a
/// factor from `F[x]`.
fn pseudo_remainder(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let n = b.len() - 1;
    let lc = &b[n];
    let mut r = a.to_vec();
    while r.len() > n && !r.is_empty() {
        let top = r.last().unwrap().clone();
        let shift = r.len() - 1 - n;
        for v in r.iter_mut() {
            *v = v.mul(lc);
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].sub(&top.mul(bc));
        }
        r.pop();
        while r.last().is_some_and(UniPoly::is_zero) {
            r.pop();
        }
    }
    r
}

/// Greatest common divisor in canonical form. A constant result means the
/// inputs share no component.
pub fn poly_gcd(f: &BivariatePolynomial, g: &BivariatePolynomial) -> Result<BivariatePolynomial> {
    if f.is_zero() || g.is_zero() {
        return Err(LabError::invalid("gcd of the zero polynomial"));
    }
    if f.field != g.field {
        return Err(LabError::FieldMismatch {
            expected: f.field,
            found: g.field,
        });
    }
    let field = f.field;
    let fy = f.to_y_coeffs();
    let gy = g.to_y_coeffs();
    let content = uni_content(&fy, field).gcd(&uni_content(&gy, field));
    let mut a = primitive_part(&fy, field);
    let mut b = primitive_part(&gy, field);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let primitive_gcd = loop {
        if b.len() <= 1 {
            // A primitive polynomial of degree 0 in y is a unit.
            break vec![UniPoly::one(field)];
        }
        let r = pseudo_remainder(&a, &b);
        if r.is_empty() {
            break primitive_part(&b, field);
        }
        a = b;
        b = primitive_part(&r, field);
    };
    let scaled: Vec<UniPoly> = primitive_gcd.iter().map(|c| c.mul(&content)).collect();
    Ok(BivariatePolynomial::from_y_coeffs(field, &scaled).canonical())
}

/// Sylvester resultant eliminating `var`; the result is a polynomial in the
/// other variable. `Res(f, g) = lc(f)^n · Π g(roots of f)` with `n` the
/// degree of `g` in `var`, so `Res(g, f) = (-1)^{mn} Res(f, g)`.
pub fn resultant(
    f: &BivariatePolynomial,
    g: &BivariatePolynomial,
    var: Variable,
) -> Result<UniPoly> {
    if f.field != g.field {
        return Err(LabError::FieldMismatch {
            expected: f.field,
            found: g.field,
        });
    }
    if var == Variable::X {
        return resultant(&f.swap_variables(), &g.swap_variables(), Variable::Y);
    }
    let field = f.field;
    let a = f.to_y_coeffs();
    let b = g.to_y_coeffs();
    if a.len() < 2 || b.len() < 2 {
        return Err(LabError::invalid(
            "resultant needs positive degree in the eliminated variable",
        ));
    }
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let zero = UniPoly::zero(field);
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    Ok(bareiss_determinant(rows, &UniPoly::one(field)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_i64_terms(Field::Rational, terms)
    }

    fn uq(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_i64s(Field::Rational, coeffs)
    }

    #[test]
    fn canonical_form_uses_grlex_leading_term() {
        // -2y^2 + 4x - 6: leading monomial y^2 (degree 2).
        let f = q(&[(0, 2, -2), (1, 0, 4), (0, 0, -6)]);
        assert_eq!(f.canonical(), q(&[(0, 2, 1), (1, 0, -2), (0, 0, 3)]));
        // x*y beats y^2 in grlex with x > y.
        let g = q(&[(0, 2, 1), (1, 1, 3)]);
        assert_eq!(g.leading_term().unwrap().0, (1, 1));
    }

    #[test]
    fn gcd_common_factor() {
        let xy = q(&[(1, 1, 1)]);
        let x_xy = q(&[(2, 0, 1), (1, 1, 1)]);
        assert_eq!(poly_gcd(&xy, &x_xy).unwrap(), q(&[(1, 0, 1)]));
    }

    #[test]
    fn gcd_with_itself_is_canonical() {
        let f = q(&[(2, 0, 3), (0, 1, -6), (0, 0, 9)]);
        assert_eq!(poly_gcd(&f, &f).unwrap(), f.canonical());
    }

    #[test]
    fn gcd_circle_parabola_is_constant() {
        let circle = q(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        let parabola = q(&[(2, 0, 1), (0, 1, -1)]);
        assert!(poly_gcd(&circle, &parabola).unwrap().is_constant());
        // Independent check: the resultant in y is a nonzero univariate.
        assert!(!resultant(&circle, &parabola, Variable::Y)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn gcd_rejects_zero() {
        assert!(poly_gcd(
            &BivariatePolynomial::zero(Field::Rational),
            &q(&[(1, 0, 1)])
        )
        .is_err());
    }

    #[test]
    fn gcd_x_only_content() {
        // (x - 1) y and (x - 1)(x + 2)
        let f = q(&[(1, 1, 1), (0, 1, -1)]);
        let g = q(&[(2, 0, 1), (1, 0, 1), (0, 0, -2)]);
        assert_eq!(poly_gcd(&f, &g).unwrap(), q(&[(1, 0, 1), (0, 0, -1)]));
    }

    #[test]
    fn resultant_linear_in_y() {
        let f = q(&[(0, 1, 1), (2, 0, -1)]);
        let g = q(&[(0, 1, 1), (1, 0, -1)]);
        assert_eq!(resultant(&f, &g, Variable::Y).unwrap(), uq(&[0, -1, 1]));
    }

    #[test]
    fn resultant_of_shared_factor_vanishes() {
        let f = q(&[(2, 0, 1), (0, 2, 1), (1, 1, 3), (0, 0, -1)]);
        assert!(resultant(&f, &f, Variable::Y).unwrap().is_zero());
    }

    #[test]
    fn resultant_circle_against_xy() {
        // Res_y(x^2 + y^2 - 1, x*y) = x^2 (x^2 - 1), from the 3x3 Sylvester
        // determinant [[1,0,x^2-1],[x,0,0],[0,x,0]].
        let circle = q(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        let xy = q(&[(1, 1, 1)]);
        assert_eq!(
            resultant(&circle, &xy, Variable::Y).unwrap(),
            uq(&[0, 0, -1, 0, 1])
        );
    }

    #[test]
    fn resultant_needs_positive_degree() {
        let f = q(&[(1, 0, 1)]);
        let g = q(&[(0, 1, 1)]);
        assert!(resultant(&f, &g, Variable::Y).is_err());
        assert!(resultant(&f, &g, Variable::X).is_err());
        // Res_x(x - y, x + y) = det [[1, -y], [1, y]] = 2y
        let a = q(&[(1, 0, 1), (0, 1, -1)]);
        let b = q(&[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(resultant(&a, &b, Variable::X).unwrap(), uq(&[0, 2]));
    }

    #[test]
    fn exact_division() {
        let a = q(&[(1, 0, 1), (0, 1, 1)]);
        let b = q(&[(1, 0, 1), (0, 1, -1), (0, 0, 2)]);
        let ab = a.mul(&b);
        assert_eq!(ab.exact_div(&a).unwrap(), b);
        assert!(ab.exact_div(&q(&[(1, 0, 1)])).is_none());
    }

    #[test]
    fn affine_substitution() {
        // x^2 + y under x -> x + y, y -> 2
        let f = q(&[(2, 0, 1), (0, 1, 1)]);
        let one = Field::Rational.one();
        let zero = Field::Rational.zero();
        let two = Field::Rational.from_i64(2);
        let g = f.substitute_affine(&[
            one.clone(),
            one.clone(),
            zero.clone(),
            zero.clone(),
            zero,
            two,
        ]);
        assert_eq!(g, q(&[(2, 0, 1), (1, 1, 2), (0, 2, 1), (0, 0, 2)]));
    }

    #[test]
    fn display_is_readable() {
        let f = q(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        assert_eq!(f.to_string(), "x^2 + y^2 - 1");
        let g = q(&[(1, 1, -3), (0, 1, 2)]);
        assert_eq!(g.to_string(), "-3*x*y + 2*y");
    }

    #[test]
    fn text_map_round_trip() {
        let f = BivariatePolynomial::from_text_map(
            Field::Gaussian,
            [("2,0", "1"), ("0,1", "1/2-3 i"), ("0,0", "-7/3")],
        )
        .unwrap();
        let map = f.to_text_map();
        let back = BivariatePolynomial::from_text_map(
            Field::Gaussian,
            map.iter().map(|(k, v)| (k.as_str(), v.as_str())),
        )
        .unwrap();
        assert_eq!(f, back);
    }

    fn arb_poly(field: Field) -> impl Strategy<Value = BivariatePolynomial> {
        proptest::collection::vec((0u32..=3, 0u32..=3, -3i64..=3), 1..7).prop_map(move |ts| {
            let ts: Vec<_> = ts.into_iter().filter(|&(i, j, _)| i + j <= 3).collect();
            BivariatePolynomial::from_i64_terms(field, &ts)
        })
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        prop::sample::select(vec![
            Field::Rational,
            Field::Prime(101),
            Field::Prime(7),
            Field::Gaussian,
        ])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn gcd_divides_both(
            (f, g, h) in field_strategy().prop_flat_map(|fl| (arb_poly(fl), arb_poly(fl), arb_poly(fl)))
        ) {
            prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
            let fh = f.mul(&h);
            let gh = g.mul(&h);
            let d = poly_gcd(&fh, &gh).unwrap();
            prop_assert!(d.divides(&fh));
            prop_assert!(d.divides(&gh));
            // The planted common factor divides the gcd.
            prop_assert!(h.divides(&d));
        }

        #[test]
        fn resultant_vanishes_iff_shared_y_component(
            (f, g) in field_strategy().prop_flat_map(|fl| (arb_poly(fl), arb_poly(fl)))
        ) {
            let dy = |p: &BivariatePolynomial| p.degree_in(Variable::Y).unwrap_or(0);
            prop_assume!(dy(&f) >= 1 && dy(&g) >= 1);
            let r = resultant(&f, &g, Variable::Y).unwrap();
            let d = poly_gcd(&f, &g).unwrap();
            prop_assert_eq!(r.is_zero(), dy(&d) >= 1);
            // Swapping the arguments changes the sign by (-1)^{mn}.
            let r2 = resultant(&g, &f, Variable::Y).unwrap();
            let sign = if (dy(&f) * dy(&g)) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(r2, r.scale(&f.field().from_i64(sign)));
        }
    }
}
