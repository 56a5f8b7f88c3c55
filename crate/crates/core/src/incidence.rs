//! Points, curves, incidence counting and the bound expressions.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{poly_gcd, BivariatePolynomial, Field, Scalar};
use crate::error::{LabError, Result};
use crate::veronese::{degrees_of_freedom, CurveFamily, ProjectivePoint};

/// An affine point of the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanePoint {
    pub x: Scalar,
    pub y: Scalar,
}

impl PlanePoint {
    pub fn new(x: Scalar, y: Scalar) -> Result<Self> {
        x.field().check(&y)?;
        Ok(PlanePoint { x, y })
    }

    pub fn from_i64(field: Field, x: i64, y: i64) -> Self {
        PlanePoint {
            x: field.from_i64(x),
            y: field.from_i64(y),
        }
    }

    pub fn field(&self) -> Field {
        self.x.field()
    }

    pub fn to_projective(&self) -> ProjectivePoint {
        ProjectivePoint::affine(self.x.clone(), self.y.clone()).expect("z = 1")
    }

    /// Rational coordinates, when the point lives over ℚ.
    pub fn as_rational(&self) -> Option<(&BigRational, &BigRational)> {
        Some((self.x.as_rational()?, self.y.as_rational()?))
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A plane curve given by a nonconstant polynomial in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneCurve {
    poly: BivariatePolynomial,
}

impl PlaneCurve {
    pub fn new(poly: BivariatePolynomial) -> Result<Self> {
        if poly.is_constant() {
            return Err(LabError::invalid(format!(
                "constant polynomial {poly} is not a curve"
            )));
        }
        Ok(PlaneCurve {
            poly: poly.canonical(),
        })
    }

    pub fn poly(&self) -> &BivariatePolynomial {
        &self.poly
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    pub fn degree(&self) -> u32 {
        self.poly.total_degree().expect("nonzero")
    }

    pub fn contains(&self, p: &PlanePoint) -> bool {
        self.poly.eval(&p.x, &p.y).is_zero()
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Whether `p` lies on `c`.
pub fn on_curve(p: &PlanePoint, c: &PlaneCurve) -> Result<bool> {
    if p.field() != c.field() {
        return Err(LabError::FieldMismatch {
            expected: c.field(),
            found: p.field(),
        });
    }
    Ok(c.contains(p))
}

/// Distinct points and distinct curves of degree ≤ `d` over one field.
///
/// Construction does not check that curves are component-disjoint; see
/// [`PointConfiguration::validated`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    field: Field,
    d: u32,
    points: Vec<PlanePoint>,
    curves: Vec<PlaneCurve>,
}

impl PointConfiguration {
    pub fn new(
        field: Field,
        d: u32,
        points: Vec<PlanePoint>,
        curves: Vec<PlaneCurve>,
    ) -> Result<Self> {
        degrees_of_freedom(d)?;
        let mut seen = HashSet::new();
        for p in &points {
            if p.field() != field {
                return Err(LabError::FieldMismatch {
                    expected: field,
                    found: p.field(),
                });
            }
            if !seen.insert(p) {
                return Err(LabError::invalid(format!("duplicate point {p}")));
            }
        }
        let mut seen = HashSet::new();
        for c in &curves {
            if c.field() != field {
                return Err(LabError::FieldMismatch {
                    expected: field,
                    found: c.field(),
                });
            }
            if c.degree() > d {
                return Err(LabError::invalid(format!("curve {c} has degree above {d}")));
            }
            if !seen.insert(c) {
                return Err(LabError::invalid(format!("duplicate curve {c}")));
            }
        }
        Ok(PointConfiguration {
            field,
            d,
            points,
            curves,
        })
    }

    /// As [`Self::new`], additionally requiring pairwise component-disjoint
    /// curves.
    pub fn validated(
        field: Field,
        d: u32,
        points: Vec<PlanePoint>,
        curves: Vec<PlaneCurve>,
    ) -> Result<Self> {
        let cfg = Self::new(field, d, points, curves)?;
        let report = validate_curve_set(&cfg.curves, d);
        if !report.passes() {
            return Err(LabError::invalid(format!("curve set rejected: {report}")));
        }
        Ok(cfg)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// `A` for this configuration's degree bound.
    pub fn dof(&self) -> usize {
        degrees_of_freedom(self.d)
            .expect("checked at construction")
            .dof()
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn curves(&self) -> &[PlaneCurve] {
        &self.curves
    }

    pub fn with_points(&self, points: Vec<PlanePoint>) -> Result<Self> {
        Self::new(self.field, self.d, points, self.curves.clone())
    }

    pub fn with_curves(&self, curves: Vec<PlaneCurve>) -> Result<Self> {
        Self::new(self.field, self.d, self.points.clone(), curves)
    }
}

/// Outcome of [`validate_curve_set`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveSetValidation {
    /// Indices of curves of degree above the bound.
    pub degree_violations: Vec<usize>,
    /// Index pairs `(i, j)`, `i < j`, sharing a component, with their gcd.
    pub shared_components: Vec<(usize, usize, BivariatePolynomial)>,
}

impl CurveSetValidation {
    pub fn passes(&self) -> bool {
        self.degree_violations.is_empty() && self.shared_components.is_empty()
    }
}

impl fmt::Display for CurveSetValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return write!(f, "ok");
        }
        let mut parts = Vec::new();
        if !self.degree_violations.is_empty() {
            parts.push(format!("degree too high: {:?}", self.degree_violations));
        }
        for (i, j, g) in &self.shared_components {
            parts.push(format!("curves {i} and {j} share {g}"));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Two curves share a component iff their gcd is nonconstant.
pub fn shared_component(a: &PlaneCurve, b: &PlaneCurve) -> Option<BivariatePolynomial> {
    if a.degree() == 1 && b.degree() == 1 {
        return (a == b).then(|| a.poly.clone());
    }
    let g = poly_gcd(&a.poly, &b.poly).expect("curves are nonzero and share a field");
    (!g.is_constant()).then_some(g)
}

/// Checks degrees and pairwise component-disjointness.
pub fn validate_curve_set(curves: &[PlaneCurve], d: u32) -> CurveSetValidation {
    let degree_violations = curves
        .iter()
        .enumerate()
        .filter(|(_, c)| c.degree() > d)
        .map(|(i, _)| i)
        .collect();
    let pairs: Vec<(usize, usize)> = (0..curves.len())
        .flat_map(|i| (i + 1..curves.len()).map(move |j| (i, j)))
        .collect();
    let shared_components = pairs
        .into_par_iter()
        .filter_map(|(i, j)| shared_component(&curves[i], &curves[j]).map(|g| (i, j, g)))
        .collect();
    CurveSetValidation {
        degree_violations,
        shared_components,
    }
}

/// True iff exactly one curve of the configuration contains all of `gamma`,
/// which must have `d² + 1` points.
pub fn bezout_uniqueness_check(cfg: &PointConfiguration, gamma: &[PlanePoint]) -> Result<bool> {
    let threshold = degrees_of_freedom(cfg.d)?.bezout_threshold();
    if gamma.len() != threshold {
        return Err(LabError::invalid(format!(
            "expected {threshold} points, got {}",
            gamma.len()
        )));
    }
    let containing = cfg
        .curves
        .iter()
        .filter(|c| gamma.iter().all(|p| c.contains(p)))
        .count();
    Ok(containing == 1)
}

/// Which bound expression a verdict refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `|P|^A + |L|`.
    Initial,
    /// `|L|² + |P|`.
    Trivial,
    /// `|P|^{A/(2A−1)} |L|^{(2A−2)/(2A−1)} + |P| + |L|`.
    Main,
    /// `|P|^k + |L|` for a declared family of dimension `k`.
    Family,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] = [Self::Initial, Self::Trivial, Self::Main, Self::Family];

    pub fn name(self) -> &'static str {
        match self {
            Self::Initial => "initial",
            Self::Trivial => "trivial",
            Self::Main => "main",
            Self::Family => "family",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| LabError::invalid(format!("unknown bound `{s}`")))
    }
}

/// Multipliers applied to each right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundConstants {
    pub initial: BigRational,
    pub trivial: BigRational,
    pub main: BigRational,
    pub family: BigRational,
}

impl BoundConstants {
    pub fn uniform(c: BigRational) -> Self {
        BoundConstants {
            initial: c.clone(),
            trivial: c.clone(),
            main: c.clone(),
            family: c,
        }
    }

    pub fn get(&self, kind: BoundKind) -> &BigRational {
        match kind {
            BoundKind::Initial => &self.initial,
            BoundKind::Trivial => &self.trivial,
            BoundKind::Main => &self.main,
            BoundKind::Family => &self.family,
        }
    }
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self::uniform(BigRational::one())
    }
}

/// One bound evaluated against an incidence count.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundVerdict {
    pub kind: BoundKind,
    pub constant: BigRational,
    /// The right-hand side without its constant. Informational only; the
    /// verdict is decided exactly.
    pub rhs: f64,
    pub passes: bool,
    /// Smallest passing constant, rounded up to a multiple of 10⁻⁶.
    pub c_min: MicroUnits,
}

/// A nonnegative decimal with six fractional digits, stored as millionths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MicroUnits(pub u64);

impl MicroUnits {
    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::from(MICRO))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / MICRO as f64
    }
}

impl fmt::Display for MicroUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:06}", self.0 / MICRO, self.0 % MICRO)
    }
}

impl std::str::FromStr for MicroUnits {
    type Err = LabError;

    /// Parses a nonnegative decimal with at most six fractional digits.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || LabError::invalid(format!("`{s}` is not a decimal with at most six places"));
        let (whole, frac) = s.trim().split_once('.').unwrap_or((s.trim(), ""));
        if whole.is_empty()
            || frac.len() > 6
            || !(whole.chars().chain(frac.chars())).all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let whole: u64 = whole.parse().map_err(|_| bad())?;
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            format!("{frac:0<6}").parse().map_err(|_| bad())?
        };
        whole
            .checked_mul(MICRO)
            .and_then(|w| w.checked_add(frac))
            .map(MicroUnits)
            .ok_or_else(bad)
    }
}

impl Serialize for MicroUnits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MicroUnits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

const MICRO: u64 = 1_000_000;

/// The shape of a configuration that the bounds depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundInputs {
    pub incidences: u64,
    pub n_points: u64,
    pub n_curves: u64,
    pub a: u32,
    /// Family dimension, when a family is declared.
    pub k: Option<u32>,
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl BoundInputs {
    /// The right-hand side of `kind` as an exact rational; `None` for the
    /// main bound, whose leading term is irrational in general.
    fn rational_rhs(&self, kind: BoundKind) -> Option<BigRational> {
        let (p, l) = (big(self.n_points), big(self.n_curves));
        match kind {
            BoundKind::Initial => Some(num_traits::pow(p, self.a as usize) + l),
            BoundKind::Trivial => Some(num_traits::pow(l, 2) + p),
            BoundKind::Family => Some(num_traits::pow(p, self.k? as usize) + l),
            BoundKind::Main => None,
        }
    }

    fn rhs_f64(&self, kind: BoundKind) -> Option<f64> {
        let (p, l, a) = (self.n_points as f64, self.n_curves as f64, self.a as f64);
        Some(match kind {
            BoundKind::Initial => p.powf(a) + l,
            BoundKind::Trivial => l * l + p,
            BoundKind::Family => p.powi(self.k? as i32) + l,
            BoundKind::Main => {
                let e = 2.0 * a - 1.0;
                if p == 0.0 || l == 0.0 {
                    p + l
                } else {
                    (a / e * p.ln() + (2.0 * a - 2.0) / e * l.ln()).exp() + p + l
                }
            }
        })
    }

    /// Exact test of `I ≤ c · rhs(kind)`.
    pub fn passes(&self, kind: BoundKind, c: &BigRational) -> Option<bool> {
        let i = big(self.incidences);
        if let Some(rhs) = self.rational_rhs(kind) {
            return Some(i <= c * rhs);
        }
        if kind == BoundKind::Family {
            return None;
        }
        // I ≤ c·(X + P + L) with X^{2A−1} = P^A L^{2A−2}.
        let slack = &i - c * (big(self.n_points) + big(self.n_curves));
        if !slack.is_positive() {
            return Some(true);
        }
        let e = 2 * self.a as usize - 1;
        let lhs = num_traits::pow(slack, e);
        let rhs = num_traits::pow(c.clone(), e)
            * num_traits::pow(big(self.n_points), self.a as usize)
            * num_traits::pow(big(self.n_curves), 2 * self.a as usize - 2);
        Some(lhs <= rhs)
    }

    /// Smallest multiple of 10⁻⁶ that passes.
    pub fn c_min(&self, kind: BoundKind) -> Option<MicroUnits> {
        let i = big(self.incidences);
        let micro = big(MICRO);
        if let Some(rhs) = self.rational_rhs(kind) {
            if rhs.is_zero() {
                return Some(MicroUnits(0));
            }
            let q = (i * micro / rhs).ceil().to_integer();
            return Some(MicroUnits(q.to_u64().expect("fits")));
        }
        if kind == BoundKind::Family {
            return None;
        }
        // c = I/(P+L) always passes because X ≥ 0.
        let pl = big(self.n_points) + big(self.n_curves);
        if pl.is_zero() {
            return Some(MicroUnits(0));
        }
        let mut hi = (i * micro / pl).ceil().to_integer().to_u64().expect("fits");
        let mut lo = 0u64;
        let at = |k: u64| self.passes(kind, &MicroUnits(k).to_rational()).unwrap();
        if at(0) {
            return Some(MicroUnits(0));
        }
        // Invariant: lo fails, hi passes.
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if at(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(MicroUnits(hi))
    }

    pub fn verdict(&self, kind: BoundKind, c: &BigRational) -> Option<BoundVerdict> {
        Some(BoundVerdict {
            kind,
            constant: c.clone(),
            rhs: self.rhs_f64(kind)?,
            passes: self.passes(kind, c)?,
            c_min: self.c_min(kind)?,
        })
    }
}

/// Incidence count with its per-curve profile and any bound verdicts.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceReport {
    pub incidence_count: u64,
    /// `|l ∩ P|` for each curve, in configuration order.
    pub per_curve: Vec<u64>,
    pub verdicts: Vec<BoundVerdict>,
}

impl IncidenceReport {
    pub fn verdict(&self, kind: BoundKind) -> Option<&BoundVerdict> {
        self.verdicts.iter().find(|v| v.kind == kind)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.passes)
    }
}

/// Counts `|{(p, l) : p ∈ l}|` over all pairs.
pub fn incidence_count_bruteforce(cfg: &PointConfiguration) -> IncidenceReport {
    let per_curve: Vec<u64> = cfg
        .curves
        .par_iter()
        .map(|c| cfg.points.iter().filter(|p| c.contains(p)).count() as u64)
        .collect();
    IncidenceReport {
        incidence_count: per_curve.iter().sum(),
        per_curve,
        verdicts: Vec::new(),
    }
}

/// Counts incidences and evaluates the initial, trivial and main bounds, plus
/// the family bound when `family` is given.
pub fn evaluate_bounds(
    cfg: &PointConfiguration,
    constants: &BoundConstants,
    family: Option<&CurveFamily>,
) -> Result<IncidenceReport> {
    if let Some(fam) = family {
        if let Some(c) = cfg.curves.iter().find(|c| !fam.contains(c.poly())) {
            return Err(LabError::InvalidFamily(format!(
                "curve {c} is not in family {}",
                fam.name()
            )));
        }
    }
    let mut report = incidence_count_bruteforce(cfg);
    let inputs = BoundInputs {
        incidences: report.incidence_count,
        n_points: cfg.points.len() as u64,
        n_curves: cfg.curves.len() as u64,
        a: cfg.dof() as u32,
        k: family.map(|f| f.k() as u32),
    };
    report.verdicts = BoundKind::ALL
        .into_iter()
        .filter_map(|k| inputs.verdict(k, constants.get(k)))
        .collect();
    Ok(report)
}
