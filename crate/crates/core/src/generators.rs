//! Seeded construction of test configurations.
//!
//! All randomness comes from ChaCha8 seeded with the spec's 64-bit seed, so a
//! spec always produces the same configuration on every platform.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{BivariatePolynomial, ExactMatrix, Field, Scalar};
use crate::error::{LabError, Result};
use crate::incidence::{shared_component, PlaneCurve, PlanePoint, PointConfiguration};
use crate::veronese::{degrees_of_freedom, eval_projective, veronese_exponents, CurveFamily};

/// How many candidates a generator may reject before giving up.
const MAX_REJECTIONS: usize = 10_000;

fn default_range() -> i64 {
    20
}

/// A reproducible recipe for a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Uniform points and curves with random coefficients.
    Random {
        field: Field,
        d: u32,
        points: usize,
        curves: usize,
        seed: u64,
        /// Integer coordinates and coefficients are drawn from `[-range, range]`.
        #[serde(default = "default_range")]
        range: i64,
    },
    /// The Szemerédi–Trotter grid with `2k³` points and `k³` lines.
    GridLines { k: u32 },
    /// Curves with many known points each.
    OnCurves {
        field: Field,
        d: u32,
        curves: usize,
        points_per_curve: usize,
        seed: u64,
    },
    /// Members of a linear family through random points.
    Family {
        field: Field,
        family: String,
        #[serde(default)]
        d: Option<u32>,
        points: usize,
        curves: usize,
        seed: u64,
    },
}

/// A generated configuration plus what the generator knows about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub config: PointConfiguration,
    pub family: Option<CurveFamily>,
    /// Points produced more than once and merged.
    pub collisions: Vec<PlanePoint>,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Generated> {
        match self {
            GeneratorSpec::Random {
                field,
                d,
                points,
                curves,
                seed,
                range,
            } => gen_random_config(*field, *d, *points, *curves, *seed, *range).map(plain),
            GeneratorSpec::GridLines { k } => gen_grid_lines(*k).map(plain),
            GeneratorSpec::OnCurves {
                field,
                d,
                curves,
                points_per_curve,
                seed,
            } => gen_on_curves(*field, *d, *curves, *points_per_curve, *seed),
            GeneratorSpec::Family {
                field,
                family,
                d,
                points,
                curves,
                seed,
            } => {
                let fam = CurveFamily::by_name(
                    family,
                    d.unwrap_or(default_family_degree(family)),
                    *field,
                )?;
                gen_family_config(&fam, *points, *curves, *seed)
            }
        }
    }
}

fn default_family_degree(name: &str) -> u32 {
    match name {
        "circles" | "vertical_parabolas" => 2,
        _ => 1,
    }
}

fn plain(config: PointConfiguration) -> Generated {
    Generated {
        config,
        family: None,
        collisions: Vec::new(),
    }
}

fn random_scalar(rng: &mut ChaCha8Rng, field: Field, range: i64) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-range..=range)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
        Field::Gaussian => Field::gaussian(
            BigRational::from_integer(rng.gen_range(-range..=range).into()),
            BigRational::from_integer(rng.gen_range(-range..=range).into()),
        ),
    }
}

/// A random parameter value; over ℚ and ℚ(i) it has a small denominator so
/// that sampled points are not all integral.
fn random_parameter(rng: &mut ChaCha8Rng, field: Field, range: i64) -> Scalar {
    let frac = |rng: &mut ChaCha8Rng| {
        BigRational::new(
            BigInt::from(rng.gen_range(-range..=range)),
            BigInt::from(rng.gen_range(1..=4)),
        )
    };
    match field {
        Field::Rational => Scalar::Rational(frac(rng)),
        Field::Prime(_) => random_scalar(rng, field, range),
        Field::Gaussian => Field::gaussian(frac(rng), frac(rng)),
    }
}

fn exhausted(what: &str) -> LabError {
    LabError::ConstructionFailure(format!("ran out of distinct {what}"))
}

fn random_points(
    rng: &mut ChaCha8Rng,
    field: Field,
    n: usize,
    range: i64,
) -> Result<Vec<PlanePoint>> {
    let available = match field {
        Field::Prime(p) => (p as u128).pow(2),
        Field::Rational => (2 * range as u128 + 1).pow(2),
        Field::Gaussian => (2 * range as u128 + 1).pow(4),
    };
    if n as u128 > available {
        return Err(exhausted("points"));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = PlanePoint::new(
            random_scalar(rng, field, range),
            random_scalar(rng, field, range),
        )?;
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Adds `c` to `accepted` unless it shares a component with one of them.
fn accept_disjoint(accepted: &mut Vec<PlaneCurve>, c: PlaneCurve) -> bool {
    if accepted.iter().any(|a| shared_component(a, &c).is_some()) {
        return false;
    }
    accepted.push(c);
    true
}

/// Random points and random pairwise component-disjoint curves of degree
/// ≤ `d`.
pub fn gen_random_config(
    field: Field,
    d: u32,
    n_points: usize,
    n_curves: usize,
    seed: u64,
    range: i64,
) -> Result<PointConfiguration> {
    degrees_of_freedom(d)?;
    if range < 1 {
        return Err(LabError::invalid("range must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_points(&mut rng, field, n_points, range)?;
    let exps = veronese_exponents(d);
    let mut curves = Vec::with_capacity(n_curves);
    let mut rejected = 0;
    while curves.len() < n_curves {
        let poly = BivariatePolynomial::new(
            field,
            exps.iter()
                .map(|&(i, j, _)| ((i, j), random_scalar(&mut rng, field, range))),
        )?;
        let ok = PlaneCurve::new(poly).is_ok_and(|c| accept_disjoint(&mut curves, c));
        if !ok {
            rejected += 1;
            if rejected > MAX_REJECTIONS {
                return Err(exhausted("curves"));
            }
        }
    }
    PointConfiguration::validated(field, d, points, curves)
}

/// `P = {0..k−1} × {0..2k²−1}` and the lines `y = mx + b` with
/// `0 ≤ m < k`, `0 ≤ b < k²`. Each line meets exactly `k` points.
pub fn gen_grid_lines(k: u32) -> Result<PointConfiguration> {
    if k < 1 {
        return Err(LabError::invalid("k must be at least 1"));
    }
    let f = Field::Rational;
    let k = k as i64;
    let points = (0..k)
        .flat_map(|x| (0..2 * k * k).map(move |y| PlanePoint::from_i64(f, x, y)))
        .collect();
    let lines = (0..k)
        .flat_map(|m| (0..k * k).map(move |b| (m, b)))
        .map(|(m, b)| {
            PlaneCurve::new(BivariatePolynomial::from_i64_terms(
                f,
                &[(0, 1, 1), (1, 0, -m), (0, 0, -b)],
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    PointConfiguration::new(f, 1, points, lines)
}

/// `m` curves of degree exactly `d ≤ 3`, each carrying `n` of its points.
///
/// Each curve passes through a random base point `p0` and is written in
/// local coordinates `u = p − p0` as `f = q_k(u) + q_{k+1}(u)` with
/// homogeneous parts of degrees `k` and `k + 1` (`k = 0` for lines, where
/// `q_0` is absent, `k = 1` for conics, `k = 2` for cubics singular at `p0`).
/// On the line `u = s·(1, t)` the curve has the single extra point
/// `s = −q_k(1, t) / q_{k+1}(1, t)`, so every parameter `t` gives an exact
/// point. Points shared between curves are merged and reported.
pub fn gen_on_curves(field: Field, d: u32, m: usize, n: usize, seed: u64) -> Result<Generated> {
    if !(1..=3).contains(&d) {
        return Err(LabError::invalid(
            "on-curve sampling supports degrees 1 to 3",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = 12;
    let mut curves: Vec<PlaneCurve> = Vec::with_capacity(m);
    let mut points: Vec<PlanePoint> = Vec::new();
    let mut seen: HashSet<PlanePoint> = HashSet::new();
    let mut collisions = Vec::new();
    let mut rejected = 0;
    let mut reject = || {
        rejected += 1;
        if rejected > MAX_REJECTIONS {
            Err(exhausted("curves or curve points"))
        } else {
            Ok(())
        }
    };
    while curves.len() < m {
        let p0 = PlanePoint::new(
            random_scalar(&mut rng, field, range),
            random_scalar(&mut rng, field, range),
        )?;
        let form = |rng: &mut ChaCha8Rng, deg: u32| -> Vec<Scalar> {
            (0..=deg)
                .map(|_| random_scalar(rng, field, range))
                .collect()
        };
        // q[a] is the coefficient of u1^(deg−a) u2^a.
        let low = if d == 1 {
            Vec::new()
        } else {
            form(&mut rng, d - 1)
        };
        let high = form(&mut rng, d);
        let eval_form = |q: &[Scalar], t: &Scalar| {
            q.iter()
                .enumerate()
                .fold(field.zero(), |acc, (a, c)| &acc + &(c * &t.pow(a as u32)))
        };
        if high.iter().all(Scalar::is_zero) || (d > 1 && low.iter().all(Scalar::is_zero)) {
            reject()?;
            continue;
        }
        let poly = local_curve(field, &p0, &low, &high, d);
        let Ok(curve) = PlaneCurve::new(poly) else {
            reject()?;
            continue;
        };
        let mut on: Vec<PlanePoint> = Vec::with_capacity(n);
        let mut on_seen = HashSet::new();
        if d > 1 {
            on_seen.insert(p0.clone());
            on.push(p0.clone());
        }
        let mut tries = 0;
        while on.len() < n && tries < 50 * n + 100 {
            tries += 1;
            let t = random_parameter(&mut rng, field, range);
            let (u1, u2);
            if d == 1 {
                // Lines: q_1(1, t) = 0 fixes the direction; walk along it.
                let dir = (high[1].clone(), -&high[0]);
                u1 = &dir.0 * &t;
                u2 = &dir.1 * &t;
            } else {
                let den = eval_form(&high, &t);
                if den.is_zero() {
                    continue;
                }
                let s = &(-&eval_form(&low, &t)) / &den;
                u1 = s.clone();
                u2 = &s * &t;
            }
            let p = PlanePoint::new(&p0.x + &u1, &p0.y + &u2)?;
            debug_assert!(curve.contains(&p));
            if on_seen.insert(p.clone()) {
                on.push(p);
            }
        }
        if on.len() < n || !accept_disjoint(&mut curves, curve) {
            reject()?;
            continue;
        }
        for p in on {
            if seen.insert(p.clone()) {
                points.push(p);
            } else {
                collisions.push(p);
            }
        }
    }
    Ok(Generated {
        config: PointConfiguration::validated(field, d, points, curves)?,
        family: None,
        collisions,
    })
}

/// `q_low(x − x0, y − y0) + q_high(x − x0, y − y0)` expanded.
fn local_curve(
    field: Field,
    p0: &PlanePoint,
    low: &[Scalar],
    high: &[Scalar],
    d: u32,
) -> BivariatePolynomial {
    let u1 = BivariatePolynomial::x(field).sub(&BivariatePolynomial::constant(p0.x.clone()));
    let u2 = BivariatePolynomial::y(field).sub(&BivariatePolynomial::constant(p0.y.clone()));
    let form = |q: &[Scalar], deg: u32| {
        q.iter()
            .enumerate()
            .fold(BivariatePolynomial::zero(field), |acc, (a, c)| {
                acc.add(&u1.pow(deg - a as u32).mul(&u2.pow(a as u32)).scale(c))
            })
    };
    let mut f = form(high, d);
    if d > 1 {
        f = f.add(&form(low, d - 1));
    }
    f
}

/// Basis of the family members through all of `points`.
pub fn family_members_through(
    family: &CurveFamily,
    points: &[PlanePoint],
) -> Result<Vec<BivariatePolynomial>> {
    let field = family.field();
    let n = family.span().len();
    let rows: Vec<Vec<Scalar>> = points
        .iter()
        .map(|p| {
            let pp = p.to_projective();
            family
                .span()
                .iter()
                .map(|f| eval_projective(f, family.degree(), &pp))
                .collect()
        })
        .collect();
    let kernel = if rows.is_empty() {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect()
    } else {
        ExactMatrix::from_rows(field, n, rows)?.kernel()
    };
    Ok(kernel.iter().map(|c| family.member(c)).collect())
}

/// Random points, and family members each through `k` of them (the unique
/// member when those points are generic), kept when of full degree and
/// component-disjoint from the others.
pub fn gen_family_config(
    family: &CurveFamily,
    n_points: usize,
    n_curves: usize,
    seed: u64,
) -> Result<Generated> {
    let field = family.field();
    let d = family.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = 6 + (n_points as f64).sqrt() as i64;
    let mut points = random_points(&mut rng, field, n_points, range)?;
    let k = family.k();
    let mut curves: Vec<PlaneCurve> = Vec::with_capacity(n_curves);
    let mut rejected = 0;
    while curves.len() < n_curves {
        let through: Vec<PlanePoint> = if points.len() >= k {
            points.choose_multiple(&mut rng, k).cloned().collect()
        } else {
            random_points(&mut rng, field, k, range)?
        };
        let members = family_members_through(family, &through)?;
        let ok = match members.as_slice() {
            [m] if m.total_degree() == Some(d) => {
                PlaneCurve::new(m.clone()).is_ok_and(|c| accept_disjoint(&mut curves, c))
            }
            _ => false,
        };
        if !ok {
            rejected += 1;
            if rejected > MAX_REJECTIONS {
                return Err(exhausted("family members"));
            }
        }
    }
    points.sort_by_key(|p| p.to_string());
    Ok(Generated {
        config: PointConfiguration::validated(field, d, points, curves)?,
        family: Some(family.clone()),
        collisions: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{incidence_count_bruteforce, validate_curve_set};
    use crate::veronese::family_restrict;

    #[test]
    fn empty_random_config() {
        let cfg = gen_random_config(Field::Rational, 2, 0, 0, 1, 20).unwrap();
        assert!(cfg.points().is_empty() && cfg.curves().is_empty());
    }

    #[test]
    fn random_config_is_deterministic() {
        let spec = GeneratorSpec::Random {
            field: Field::Rational,
            d: 2,
            points: 30,
            curves: 10,
            seed: 7,
            range: 20,
        };
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
    }

    #[test]
    fn random_config_over_f101() {
        let f = Field::prime(101).unwrap();
        let cfg = gen_random_config(f, 2, 50, 20, 3, 20).unwrap();
        assert_eq!((cfg.points().len(), cfg.curves().len()), (50, 20));
        assert!(validate_curve_set(cfg.curves(), 2).passes());
    }

    #[test]
    fn tiny_field_exhausts() {
        let f = Field::prime(2).unwrap();
        assert!(gen_random_config(f, 1, 5, 0, 0, 20).is_err());
    }

    #[test]
    fn grid_lines_closed_form() {
        for k in 1..=4u64 {
            let cfg = gen_grid_lines(k as u32).unwrap();
            assert_eq!(cfg.points().len() as u64, 2 * k.pow(3));
            assert_eq!(cfg.curves().len() as u64, k.pow(3));
            let r = incidence_count_bruteforce(&cfg);
            assert_eq!(r.incidence_count, k.pow(4));
            assert!(r.per_curve.iter().all(|&c| c == k));
        }
    }

    #[test]
    fn single_line_with_five_points() {
        let g = gen_on_curves(Field::Rational, 1, 1, 5, 9).unwrap();
        assert_eq!(incidence_count_bruteforce(&g.config).incidence_count, 5);
    }

    #[test]
    fn conics_carry_their_points() {
        for field in [Field::Rational, Field::prime(101).unwrap(), Field::Gaussian] {
            let g = gen_on_curves(field, 2, 3, 6, 4).unwrap();
            let r = incidence_count_bruteforce(&g.config);
            assert!(r.incidence_count >= 18);
            assert!(r.per_curve.iter().all(|&c| c >= 6));
            assert_eq!(g.config.points().len() + g.collisions.len(), 18);
        }
    }

    #[test]
    fn cubics_are_exact_degree() {
        let g = gen_on_curves(Field::Rational, 3, 2, 10, 5).unwrap();
        assert!(g.config.curves().iter().all(|c| c.degree() == 3));
        assert!(incidence_count_bruteforce(&g.config)
            .per_curve
            .iter()
            .all(|&c| c >= 10));
    }

    #[test]
    fn family_dimensions() {
        let f = Field::Rational;
        let circles = CurveFamily::circles(f);
        let g = gen_family_config(&circles, 10, 1, 2).unwrap();
        assert_eq!(g.family.unwrap().k(), 3);
        let o = PlanePoint::from_i64(f, 0, 0).to_projective();
        let pencil = CurveFamily::pencil_through(&o, 1).unwrap();
        let g = gen_family_config(&pencil, 20, 5, 2).unwrap();
        assert_eq!(g.family.as_ref().unwrap().k(), 1);
        let origin = PlanePoint::from_i64(f, 0, 0);
        assert!(g.config.curves().iter().all(|c| c.contains(&origin)));
    }

    #[test]
    fn parabola_family_validates() {
        let fam = CurveFamily::vertical_parabolas(Field::Rational);
        let g = gen_family_config(&fam, 40, 10, 11).unwrap();
        assert!(validate_curve_set(g.config.curves(), 2).passes());
        for c in g.config.curves() {
            assert!(fam.contains(c.poly()));
            let on: Vec<_> = g
                .config
                .points()
                .iter()
                .filter(|p| c.contains(p))
                .map(PlanePoint::to_projective)
                .collect();
            // Three points on a parabola pin it down.
            if on.len() >= 3 {
                assert_eq!(family_restrict(&fam, &on).unwrap(), 0);
            }
        }
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = GeneratorSpec::Family {
            field: Field::Rational,
            family: "circles".into(),
            d: None,
            points: 5,
            curves: 2,
            seed: 1,
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<GeneratorSpec>(&text).unwrap(), spec);
    }
}
