//! Curve space of plane curves of degree at most `d`.
//!
//! A projective point `[x:y:z]` is lifted to the vector of its degree-`d`
//! monomials. A curve of degree ≤ `d` is a coefficient vector in the same
//! coordinates, and "the curve passes through `p`" is the linear condition
//! `⟨coefficients, lift(p)⟩ = 0`. Coordinates are ordered by descending power
//! of `x`, then of `y` (grlex with `x > y > z` restricted to degree `d`).

use std::fmt;

use crate::algebra::{BivariatePolynomial, ExactMatrix, Field, Scalar};
use crate::error::{LabError, Result};

/// The degree bound `d` and the number of degrees of freedom
/// `A = C(d+2, 2) − 1` of a degree-≤`d` curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveSpaceParams {
    d: u32,
    a: usize,
}

impl CurveSpaceParams {
    pub fn new(d: u32) -> Result<Self> {
        if d < 1 {
            return Err(LabError::invalid("degree bound must be at least 1"));
        }
        let d_us = d as usize;
        Ok(CurveSpaceParams {
            d,
            a: (d_us + 2) * (d_us + 1) / 2 - 1,
        })
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// `A`, the projective dimension of the space of curves.
    pub fn dof(&self) -> usize {
        self.a
    }

    /// Number of lift coordinates, `A + 1`.
    pub fn lift_len(&self) -> usize {
        self.a + 1
    }

    /// `d² + 1`: this many points on a curve pin it down among curves that
    /// share no component.
    pub fn bezout_threshold(&self) -> usize {
        (self.d * self.d + 1) as usize
    }
}

/// `A = C(d+2, 2) − 1` together with the Bézout threshold.
pub fn degrees_of_freedom(d: u32) -> Result<CurveSpaceParams> {
    CurveSpaceParams::new(d)
}

/// Exponents `(i, j, k)` of `x^i y^j z^k`, `i + j + k = d`, in lift order.
pub fn veronese_exponents(d: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push((i, j, d - i - j));
        }
    }
    out
}

/// A point of the projective plane over one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: [Scalar; 3],
}

impl ProjectivePoint {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Result<Self> {
        let field = x.field();
        field.check(&y)?;
        field.check(&z)?;
        if x.is_zero() && y.is_zero() && z.is_zero() {
            return Err(LabError::invalid("[0:0:0] is not a projective point"));
        }
        Ok(ProjectivePoint { coords: [x, y, z] })
    }

    /// The affine point `(x, y)` as `[x:y:1]`.
    pub fn affine(x: Scalar, y: Scalar) -> Result<Self> {
        let one = x.field().one();
        Self::new(x, y, one)
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[Scalar; 3] {
        &self.coords
    }

    pub fn scaled(&self, s: &Scalar) -> Result<Self> {
        let [x, y, z] = &self.coords;
        Self::new(x * s, y * s, z * s)
    }

    /// Equality as projective points (proportional coordinates).
    pub fn same_point(&self, other: &Self) -> bool {
        let (a, b) = (&self.coords, &other.coords);
        (0..3).all(|i| (i + 1..3).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.coords;
        write!(f, "[{x}:{y}:{z}]")
    }
}

/// `ν_d(p)`: the degree-`d` monomials of `p`. It is also the normal vector of
/// the hyperplane `H_p` of curves through `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPoint {
    pub source: ProjectivePoint,
    pub coordinates: Vec<Scalar>,
}

pub fn veronese_lift(p: &ProjectivePoint, d: u32) -> Result<LiftedPoint> {
    CurveSpaceParams::new(d)?;
    let [x, y, z] = p.coords();
    let coordinates = veronese_exponents(d)
        .into_iter()
        .map(|(i, j, k)| &(&x.pow(i) * &y.pow(j)) * &z.pow(k))
        .collect();
    Ok(LiftedPoint {
        source: p.clone(),
        coordinates,
    })
}

/// Coefficient vector of an affine polynomial of degree ≤ `d` in lift
/// coordinates: the coefficient of `x^i y^j` goes to `x^i y^j z^{d-i-j}`.
pub fn curve_coordinates(f: &BivariatePolynomial, d: u32) -> Result<Vec<Scalar>> {
    if f.total_degree().unwrap_or(0) > d {
        return Err(LabError::invalid(format!("{f} has degree above {d}")));
    }
    Ok(veronese_exponents(d)
        .into_iter()
        .map(|(i, j, _)| f.coeff((i, j)))
        .collect())
}

/// Inverse of [`curve_coordinates`].
pub fn curve_from_coordinates(field: Field, coords: &[Scalar], d: u32) -> BivariatePolynomial {
    BivariatePolynomial::from_map(
        field,
        veronese_exponents(d)
            .into_iter()
            .zip(coords)
            .map(|((i, j, _), c)| ((i, j), c.clone()))
            .collect(),
    )
}

/// Value of the degree-`d` homogenization of `f` at `p`.
pub fn eval_projective(f: &BivariatePolynomial, d: u32, p: &ProjectivePoint) -> Scalar {
    let [x, y, z] = p.coords();
    f.terms().fold(f.field().zero(), |acc, ((i, j), c)| {
        let k = d.saturating_sub(i + j);
        &acc + &(&(c * &x.pow(i)) * &(&y.pow(j) * &z.pow(k)))
    })
}

fn check_points(points: &[ProjectivePoint]) -> Result<Option<Field>> {
    let Some(first) = points.first() else {
        return Ok(None);
    };
    let field = first.field();
    for (n, p) in points.iter().enumerate() {
        if p.field() != field {
            return Err(LabError::FieldMismatch {
                expected: field,
                found: p.field(),
            });
        }
        if points[..n].iter().any(|q| q.same_point(p)) {
            return Err(LabError::invalid(format!("duplicate point {p}")));
        }
    }
    Ok(Some(field))
}

fn lift_matrix(
    points: &[ProjectivePoint],
    params: CurveSpaceParams,
    field: Field,
) -> Result<ExactMatrix> {
    let rows = points
        .iter()
        .map(|p| veronese_lift(p, params.d).map(|l| l.coordinates))
        .collect::<Result<Vec<_>>>()?;
    ExactMatrix::from_rows(field, params.lift_len(), rows)
}

/// `m_d(Γ)`: the projective dimension of the space of degree-≤`d` curves
/// through every point of `Γ`; `-1` when no curve passes through all of them.
pub fn curve_space_dim(points: &[ProjectivePoint], d: u32) -> Result<i64> {
    let params = CurveSpaceParams::new(d)?;
    let Some(field) = check_points(points)? else {
        return Ok(params.a as i64);
    };
    let rank = lift_matrix(points, params, field)?.rank();
    Ok(params.a as i64 - rank as i64)
}

/// A basis of the degree-≤`d` curves through `Γ`, each in canonical form.
/// Its length is `m_d(Γ) + 1`.
pub fn curves_through(
    points: &[ProjectivePoint],
    d: u32,
    field: Field,
) -> Result<Vec<BivariatePolynomial>> {
    let params = CurveSpaceParams::new(d)?;
    if let Some(f) = check_points(points)? {
        if f != field {
            return Err(LabError::FieldMismatch {
                expected: field,
                found: f,
            });
        }
    }
    let m = lift_matrix(points, params, field)?;
    Ok(m.kernel()
        .into_iter()
        .map(|v| curve_from_coordinates(field, &v, d).canonical())
        .collect())
}

/// A good `A`-tuple of a `(d²+1)`-point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodTuple {
    /// Positions in the input, increasing.
    pub indices: Vec<usize>,
    pub points: Vec<ProjectivePoint>,
}

/// Picks `A` of the `d² + 1` points with the same curve-space dimension as
/// the whole set. Points are scanned in input order and kept when they raise
/// the rank of the lift matrix; if fewer than `A` are kept, the earliest
/// unused points fill the tuple.
///
/// Any `A` points lie on some curve, so when `Γ` lies on none (possible for
/// `d ≥ 3`) no tuple can match; the greedy tuple is still returned.
pub fn extract_good_tuple(points: &[ProjectivePoint], d: u32) -> Result<GoodTuple> {
    let params = CurveSpaceParams::new(d)?;
    if points.len() != params.bezout_threshold() {
        return Err(LabError::invalid(format!(
            "expected {} points, got {}",
            params.bezout_threshold(),
            points.len()
        )));
    }
    let field = check_points(points)?.expect("d^2 + 1 >= 2 points");
    let lifts = points
        .iter()
        .map(|p| veronese_lift(p, d).map(|l| l.coordinates))
        .collect::<Result<Vec<_>>>()?;
    let mut kept: Vec<usize> = Vec::new();
    let mut rank = 0;
    for i in 0..points.len() {
        if kept.len() == params.a {
            break;
        }
        let rows = kept.iter().chain([&i]).map(|&k| lifts[k].clone()).collect();
        let r = ExactMatrix::from_rows(field, params.lift_len(), rows)?.rank();
        if r > rank {
            rank = r;
            kept.push(i);
        }
    }
    let pad: Vec<usize> = (0..points.len()).filter(|i| !kept.contains(i)).collect();
    let missing = params.a - kept.len();
    kept.extend(pad.into_iter().take(missing));
    kept.sort_unstable();
    Ok(GoodTuple {
        points: kept.iter().map(|&i| points[i].clone()).collect(),
        indices: kept,
    })
}

/// A linear family of curves: every nonzero combination of `span`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFamily {
    name: String,
    d: u32,
    field: Field,
    span: Vec<BivariatePolynomial>,
}

impl CurveFamily {
    /// Fails with [`LabError::InvalidFamily`] if the basis is dependent or
    /// exceeds degree `d`.
    pub fn new(
        name: impl Into<String>,
        d: u32,
        field: Field,
        span: Vec<BivariatePolynomial>,
    ) -> Result<Self> {
        let params = CurveSpaceParams::new(d)?;
        let name = name.into();
        if span.is_empty() {
            return Err(LabError::InvalidFamily(format!("{name}: empty span")));
        }
        let mut rows = Vec::new();
        for f in &span {
            if f.field() != field {
                return Err(LabError::FieldMismatch {
                    expected: field,
                    found: f.field(),
                });
            }
            rows.push(
                curve_coordinates(f, d)
                    .map_err(|e| LabError::InvalidFamily(format!("{name}: {e}")))?,
            );
        }
        let rank = ExactMatrix::from_rows(field, params.lift_len(), rows)?.rank();
        if rank < span.len() {
            return Err(LabError::InvalidFamily(format!(
                "{name}: basis of {} curves spans only dimension {rank}",
                span.len()
            )));
        }
        Ok(CurveFamily {
            name,
            d,
            field,
            span,
        })
    }

    /// Circles `a(x² + y²) + bx + cy + e`.
    pub fn circles(field: Field) -> Self {
        let b = |t: &[(u32, u32, i64)]| BivariatePolynomial::from_i64_terms(field, t);
        Self::new(
            "circles",
            2,
            field,
            vec![
                b(&[(2, 0, 1), (0, 2, 1)]),
                b(&[(1, 0, 1)]),
                b(&[(0, 1, 1)]),
                b(&[(0, 0, 1)]),
            ],
        )
        .expect("independent basis")
    }

    /// Parabolas with vertical axis, `ax² + bx + c − ey`.
    pub fn vertical_parabolas(field: Field) -> Self {
        let b = |t: &[(u32, u32, i64)]| BivariatePolynomial::from_i64_terms(field, t);
        Self::new(
            "vertical_parabolas",
            2,
            field,
            vec![
                b(&[(2, 0, 1)]),
                b(&[(1, 0, 1)]),
                b(&[(0, 0, 1)]),
                b(&[(0, 1, 1)]),
            ],
        )
        .expect("independent basis")
    }

    /// All curves of degree ≤ `d` through `base`.
    pub fn pencil_through(base: &ProjectivePoint, d: u32) -> Result<Self> {
        let span = curves_through(std::slice::from_ref(base), d, base.field())?;
        Self::new("pencil_through_point", d, base.field(), span)
    }

    /// Looks a family up by name; pencils pass through the origin.
    pub fn by_name(name: &str, d: u32, field: Field) -> Result<Self> {
        match name {
            "circles" => Ok(Self::circles(field)),
            "vertical_parabolas" => Ok(Self::vertical_parabolas(field)),
            "pencil_through_point" | "pencil" => {
                let o = ProjectivePoint::affine(field.zero(), field.zero())?;
                Self::pencil_through(&o, d)
            }
            other => Err(LabError::InvalidFamily(format!("unknown family `{other}`"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn span(&self) -> &[BivariatePolynomial] {
        &self.span
    }

    /// Projective dimension of the family.
    pub fn k(&self) -> usize {
        self.span.len() - 1
    }

    /// The member `Σ c_i · span_i`.
    pub fn member(&self, coeffs: &[Scalar]) -> BivariatePolynomial {
        self.span
            .iter()
            .zip(coeffs)
            .fold(BivariatePolynomial::zero(self.field), |acc, (f, c)| {
                acc.add(&f.scale(c))
            })
    }

    /// Whether `f` is a combination of the basis of full degree `d` (see
    /// [`family_restrict`] for why lower-degree combinations are excluded).
    pub fn contains(&self, f: &BivariatePolynomial) -> bool {
        if f.field() != self.field || f.total_degree() != Some(self.d) {
            return false;
        }
        let Ok(target) = curve_coordinates(f, self.d) else {
            return false;
        };
        let mut rows: Vec<Vec<Scalar>> = self
            .span
            .iter()
            .map(|g| curve_coordinates(g, self.d).unwrap())
            .collect();
        rows.push(target);
        let cols = rows[0].len();
        ExactMatrix::from_rows(self.field, cols, rows)
            .unwrap()
            .rank()
            == self.span.len()
    }
}

/// Projective dimension of the family members through every point of `Γ`,
/// counting only members of full degree `d` (a member whose degree-`d` part
/// vanishes contains the line at infinity and is not a curve of the family's
/// kind). `-1` when there is no such member.
pub fn family_restrict(family: &CurveFamily, points: &[ProjectivePoint]) -> Result<i64> {
    if let Some(f) = check_points(points)? {
        if f != family.field {
            return Err(LabError::FieldMismatch {
                expected: family.field,
                found: f,
            });
        }
    }
    let field = family.field;
    let n = family.span.len();
    let solutions = if points.is_empty() {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect()
    } else {
        let rows = points
            .iter()
            .map(|p| {
                family
                    .span
                    .iter()
                    .map(|f| eval_projective(f, family.d, p))
                    .collect()
            })
            .collect();
        ExactMatrix::from_rows(field, n, rows)?.kernel()
    };
    let full_degree = solutions.iter().any(|c| {
        let m = family.member(c);
        m.total_degree() == Some(family.d)
    });
    Ok(if full_degree {
        solutions.len() as i64 - 1
    } else {
        -1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BivariatePolynomial as Poly;

    fn qp(x: i64, y: i64) -> ProjectivePoint {
        let f = Field::Rational;
        ProjectivePoint::affine(f.from_i64(x), f.from_i64(y)).unwrap()
    }

    fn qpoly(t: &[(u32, u32, i64)]) -> Poly {
        Poly::from_i64_terms(Field::Rational, t)
    }

    #[test]
    fn degrees_of_freedom_values() {
        let cases = [(1, 2, 2), (2, 5, 5), (3, 9, 10)];
        for (d, a, bez) in cases {
            let p = degrees_of_freedom(d).unwrap();
            assert_eq!((p.dof(), p.bezout_threshold()), (a, bez));
        }
        assert!(degrees_of_freedom(0).is_err());
    }

    #[test]
    fn dof_against_bezout_threshold() {
        for d in 1..40 {
            let p = degrees_of_freedom(d).unwrap();
            assert!(p.dof() <= p.bezout_threshold());
            assert_eq!(p.dof() == p.bezout_threshold(), d <= 2, "d = {d}");
        }
    }

    #[test]
    fn lift_examples() {
        let f = Field::Rational;
        let l = veronese_lift(&qp(2, 3), 1).unwrap();
        assert_eq!(l.coordinates, vec![f.from_i64(2), f.from_i64(3), f.one()]);
        let l = veronese_lift(&qp(1, 2), 2).unwrap();
        let want: Vec<_> = [1, 2, 1, 4, 2, 1].iter().map(|&v| f.from_i64(v)).collect();
        assert_eq!(l.coordinates, want);
        let l = veronese_lift(&qp(0, 0), 2).unwrap();
        let want: Vec<_> = [0, 0, 0, 0, 0, 1].iter().map(|&v| f.from_i64(v)).collect();
        assert_eq!(l.coordinates, want);
        assert!(ProjectivePoint::new(f.zero(), f.zero(), f.zero()).is_err());
    }

    #[test]
    fn lift_scales_by_dth_power() {
        let f = Field::prime(101).unwrap();
        let p = ProjectivePoint::new(f.from_i64(3), f.from_i64(7), f.from_i64(5)).unwrap();
        let s = f.from_i64(6);
        for d in 1..=3 {
            let a = veronese_lift(&p, d).unwrap().coordinates;
            let b = veronese_lift(&p.scaled(&s).unwrap(), d)
                .unwrap()
                .coordinates;
            let sd = s.pow(d);
            assert!(a.iter().zip(&b).all(|(u, v)| &(u * &sd) == v));
        }
    }

    #[test]
    fn curve_space_dims() {
        assert_eq!(curve_space_dim(&[], 2).unwrap(), 5);
        assert_eq!(curve_space_dim(&[qp(3, 4)], 2).unwrap(), 4);
        assert_eq!(
            curve_space_dim(&[qp(0, 0), qp(1, 1), qp(2, 2)], 1).unwrap(),
            0
        );
        assert_eq!(
            curve_space_dim(&[qp(0, 0), qp(1, 1), qp(2, 3)], 1).unwrap(),
            -1
        );
        assert!(curve_space_dim(&[qp(1, 1), qp(1, 1)], 1).is_err());
    }

    #[test]
    fn curves_through_examples() {
        let f = Field::Rational;
        let lines = curves_through(&[qp(0, 0), qp(1, 1)], 1, f).unwrap();
        assert_eq!(lines, vec![qpoly(&[(0, 1, 1), (1, 0, -1)]).canonical()]);
        let lines = curves_through(&[qp(0, 0), qp(1, 0), qp(2, 0)], 1, f).unwrap();
        assert_eq!(lines, vec![qpoly(&[(0, 1, 1)])]);
        // Five points on the unit circle with rational coordinates.
        let h = |s: &str| f.parse_scalar(s).unwrap();
        let pts: Vec<_> = [
            ("1", "0"),
            ("0", "1"),
            ("-1", "0"),
            ("3/5", "4/5"),
            ("-5/13", "12/13"),
        ]
        .iter()
        .map(|(x, y)| ProjectivePoint::affine(h(x), h(y)).unwrap())
        .collect();
        let conics = curves_through(&pts, 2, f).unwrap();
        let circle = qpoly(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        assert_eq!(conics, vec![circle]);
        for p in &pts {
            assert!(eval_projective(&conics[0], 2, p).is_zero());
        }
    }

    #[test]
    fn good_tuple_when_sizes_coincide() {
        let pts = vec![qp(0, 0), qp(1, 1)];
        let g = extract_good_tuple(&pts, 1).unwrap();
        assert_eq!(g.points, pts);
        assert!(extract_good_tuple(&pts[..1], 1).is_err());
    }

    #[test]
    fn good_tuple_pads_rank_deficient_sets() {
        // Five collinear points, d = 2: rank 3 < A = 5, so two are padding.
        let pts: Vec<_> = (0..5).map(|i| qp(i, 2 * i)).collect();
        let g = extract_good_tuple(&pts, 2).unwrap();
        assert_eq!(g.indices, vec![0, 1, 2, 3, 4]);
        let pts: Vec<_> = (0..10).map(|i| qp(i, 0)).collect();
        let g = extract_good_tuple(&pts, 3).unwrap();
        assert_eq!(g.indices.len(), 9);
        assert_eq!(
            curve_space_dim(&g.points, 3).unwrap(),
            curve_space_dim(&pts, 3).unwrap()
        );
    }

    #[test]
    fn circle_family_restrictions() {
        let fam = CurveFamily::circles(Field::Rational);
        assert_eq!(fam.k(), 3);
        assert_eq!(family_restrict(&fam, &[]).unwrap(), 3);
        assert_eq!(family_restrict(&fam, &[qp(5, 5)]).unwrap(), 2);
        assert_eq!(
            family_restrict(&fam, &[qp(0, 0), qp(1, 0), qp(0, 1)]).unwrap(),
            0
        );
        assert_eq!(
            family_restrict(&fam, &[qp(0, 0), qp(1, 0), qp(2, 0)]).unwrap(),
            -1
        );
    }

    #[test]
    fn pencil_family() {
        let o = qp(0, 0);
        let fam = CurveFamily::pencil_through(&o, 1).unwrap();
        assert_eq!(fam.k(), 1);
        assert!(fam.contains(&qpoly(&[(1, 0, 2), (0, 1, -3)])));
        assert!(!fam.contains(&qpoly(&[(1, 0, 1), (0, 0, 1)])));
        let circles = CurveFamily::circles(Field::Rational);
        assert!(circles.contains(&qpoly(&[(2, 0, 2), (0, 2, 2), (1, 0, 1)])));
        assert!(!circles.contains(&qpoly(&[(1, 0, 1)])));
        assert_eq!(family_restrict(&fam, &[qp(2, 3)]).unwrap(), 0);
        let fam2 = CurveFamily::pencil_through(&o, 2).unwrap();
        assert_eq!(fam2.k(), degrees_of_freedom(2).unwrap().dof() - 1);
    }

    #[test]
    fn dependent_family_rejected() {
        let f = Field::Rational;
        let err = CurveFamily::new("bad", 1, f, vec![qpoly(&[(1, 0, 1)]), qpoly(&[(1, 0, 2)])])
            .unwrap_err();
        assert!(matches!(err, LabError::InvalidFamily(_)));
        assert!(CurveFamily::by_name("ellipses", 2, f).is_err());
    }
}
