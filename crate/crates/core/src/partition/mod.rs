//! Polynomial partitioning of the real plane.
//!
//! A partition is an ordered list of factors `Q_1, …, Q_s` with rational
//! coefficients. A point off `Z(Q)` lies in the cell named by its sign vector
//! `(sign Q_1(p), …, sign Q_s(p))`; points on `Z(Q)` form the boundary set.
//! Cells here are sign classes, which may be disconnected; every bound proved
//! for connected cells holds for them as well.

mod build;
mod count;
mod crossing;
mod degree;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::algebra::{BivariatePolynomial, Field};
use crate::error::{LabError, Result};
use crate::incidence::PlanePoint;

pub use build::build_partition;
pub use count::{
    dyadic_ledger, incidence_count_partitioned, DyadicStep, PartitionLedger, PartitionedCount,
};
pub use crossing::{curve_cells, BoundaryRelation, CrossingProfile};
pub use degree::{
    choose_partition_degree, harnack_bound, level_degree, levels_for_degree, max_degree,
    PartitionDegree,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Pos,
}

/// One sign per factor, in factor order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<Sign>);

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .0
            .iter()
            .map(|s| if *s == Sign::Pos { "+" } else { "-" })
            .collect();
        write!(f, "({})", s.join(","))
    }
}

/// Where a point sits relative to a partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Cell(SignVector),
    Boundary,
}

/// Exact signs of every factor at `(x, y)`, or `None` on `Z(Q)`.
pub(crate) fn sign_vector(
    factors: &[BivariatePolynomial],
    x: &crate::algebra::Scalar,
    y: &crate::algebra::Scalar,
) -> Option<SignVector> {
    factors
        .iter()
        .map(|f| match f.eval(x, y).signum() {
            Some(1) => Some(Sign::Pos),
            Some(-1) => Some(Sign::Neg),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .map(SignVector)
}

/// A partitioning polynomial together with the decomposition it induces on
/// the point set it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    points: Vec<PlanePoint>,
    factors: Vec<BivariatePolynomial>,
    levels: u32,
    cells: BTreeMap<SignVector, Vec<usize>>,
    boundary: Vec<usize>,
}

impl PartitionResult {
    /// Decomposes `points` by the given factors. `levels` is the number of
    /// bisection rounds the factors came from (a round may add no factor when
    /// every part is already a single point).
    pub fn from_factors(
        points: Vec<PlanePoint>,
        factors: Vec<BivariatePolynomial>,
        levels: u32,
    ) -> Result<Self> {
        for p in &points {
            if p.field() != Field::Rational {
                return Err(LabError::invalid("partitioning needs rational points"));
            }
        }
        for f in &factors {
            if f.field() != Field::Rational || f.is_constant() {
                return Err(LabError::invalid(format!(
                    "{f} is not a nonconstant rational factor"
                )));
            }
        }
        let mut cells: BTreeMap<SignVector, Vec<usize>> = BTreeMap::new();
        let mut boundary = Vec::new();
        for (i, p) in points.iter().enumerate() {
            match sign_vector(&factors, &p.x, &p.y) {
                Some(s) => cells.entry(s).or_default().push(i),
                None => boundary.push(i),
            }
        }
        Ok(PartitionResult {
            points,
            factors,
            levels,
            cells,
            boundary,
        })
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn factors(&self) -> &[BivariatePolynomial] {
        &self.factors
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// `Q`, the product of the factors.
    pub fn q(&self) -> BivariatePolynomial {
        self.factors.iter().fold(
            BivariatePolynomial::constant(Field::Rational.one()),
            |acc, f| acc.mul(f),
        )
    }

    /// `deg Q`.
    pub fn degree(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| f.total_degree().unwrap_or(0) as u64)
            .sum()
    }

    /// Nonempty cells and the indices of their points.
    pub fn cells(&self) -> &BTreeMap<SignVector, Vec<usize>> {
        &self.cells
    }

    /// Indices of points on `Z(Q)`.
    pub fn boundary_points(&self) -> &[usize] {
        &self.boundary
    }

    pub fn max_occupancy(&self) -> usize {
        self.cells.values().map(Vec::len).max().unwrap_or(0)
    }

    /// `⌈|P| / 2^t⌉`.
    pub fn occupancy_bound(&self) -> usize {
        let n = self.points.len();
        if self.levels >= usize::BITS {
            return n.min(1);
        }
        n.div_ceil(1 << self.levels)
    }

    /// Factors as `"i,j" → coefficient` maps.
    pub fn factor_text(&self) -> Vec<BTreeMap<String, String>> {
        self.factors
            .iter()
            .map(BivariatePolynomial::to_text_map)
            .collect()
    }

    /// Re-derives the guarantees from scratch: occupancy, degree, and the
    /// cell/boundary split.
    pub fn audit(&self) -> Result<()> {
        let fresh = Self::from_factors(self.points.clone(), self.factors.clone(), self.levels)?;
        if fresh != *self {
            return Err(LabError::Consistency(
                "stored cells disagree with factor signs".into(),
            ));
        }
        if self.max_occupancy() > self.occupancy_bound() {
            return Err(LabError::ConstructionFailure(format!(
                "a cell holds {} points, above ⌈|P|/2^t⌉ = {}",
                self.max_occupancy(),
                self.occupancy_bound()
            )));
        }
        if self.degree() > max_degree(self.levels) {
            return Err(LabError::ConstructionFailure(format!(
                "deg Q = {} exceeds D_max({}) = {}",
                self.degree(),
                self.levels,
                max_degree(self.levels)
            )));
        }
        Ok(())
    }
}

/// Cell of `p`, or the boundary when some factor vanishes there.
pub fn locate(p: &PlanePoint, part: &PartitionResult) -> Location {
    match sign_vector(&part.factors, &p.x, &p.y) {
        Some(s) => Location::Cell(s),
        None => Location::Boundary,
    }
}

/// Multiplies by a positive rational so the coefficients become coprime
/// integers; signs are unchanged.
pub(crate) fn primitive_positive(f: &BivariatePolynomial) -> BivariatePolynomial {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut l = BigInt::one();
    let mut g = BigInt::zero();
    for (_, c) in f.terms() {
        let q = c.as_rational().expect("rational polynomial");
        l = l.lcm(q.denom());
    }
    for (_, c) in f.terms() {
        let q = c.as_rational().unwrap();
        g = g.gcd(&(q.numer() * (&l / q.denom())));
    }
    if g.is_zero() {
        return f.clone();
    }
    let s = BigRational::new(l, g.abs());
    f.scale(&crate::algebra::Scalar::Rational(s))
}
