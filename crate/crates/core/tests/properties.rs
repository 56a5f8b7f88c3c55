//! Randomized properties of curve spaces, root isolation and incidence
//! counting, each checked against an independent computation.

use incidence_lab::algebra::{isolate_real_roots, BivariatePolynomial, Field, Scalar, UniPoly};
use incidence_lab::generators::{gen_on_curves, gen_random_config};
use incidence_lab::incidence::{
    incidence_count_bruteforce, PlaneCurve, PlanePoint, PointConfiguration,
};
use incidence_lab::veronese::{
    curve_space_dim, curves_through, degrees_of_freedom, eval_projective, extract_good_tuple,
    ProjectivePoint,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn fields() -> [Field; 3] {
    [Field::Rational, Field::prime(101).unwrap(), Field::Gaussian]
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(fields().to_vec())
}

fn proj(field: Field, x: i64, y: i64, z: i64) -> ProjectivePoint {
    ProjectivePoint::new(field.from_i64(x), field.from_i64(y), field.from_i64(z)).unwrap()
}

fn point_strategy(field: Field) -> impl Strategy<Value = ProjectivePoint> {
    (-6i64..=6, -6i64..=6, 0i64..=2)
        .prop_filter("not the zero vector", move |&(x, y, z)| {
            let p = match field {
                Field::Prime(p) => p as i64,
                _ => i64::MAX,
            };
            (x.rem_euclid(p), y.rem_euclid(p), z.rem_euclid(p)) != (0, 0, 0)
        })
        .prop_map(move |(x, y, z)| proj(field, x, y, z))
}

fn field_points(n: std::ops::Range<usize>) -> impl Strategy<Value = (Field, Vec<ProjectivePoint>)> {
    field_strategy()
        .prop_flat_map(move |f| (Just(f), prop::collection::vec(point_strategy(f), n.clone())))
        .prop_map(|(f, pts)| {
            let mut distinct: Vec<ProjectivePoint> = Vec::new();
            for p in pts {
                if !distinct.iter().any(|q| q.same_point(&p)) {
                    distinct.push(p);
                }
            }
            (f, distinct)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_points_never_raises_m((_field, pts) in field_points(1..12), d in 1u32..=3) {
        let mut prev = curve_space_dim(&[], d).unwrap();
        for k in 1..=pts.len() {
            let m = curve_space_dim(&pts[..k], d).unwrap();
            prop_assert!(m <= prev);
            prop_assert!(m >= prev - 1);
            prev = m;
        }
    }

    #[test]
    fn rescaling_points_keeps_m((field, pts) in field_points(1..10), d in 1u32..=3, s in 2i64..9) {
        let scaled: Vec<_> = pts.iter().map(|p| p.scaled(&field.from_i64(s)).unwrap()).collect();
        prop_assert_eq!(curve_space_dim(&pts, d).unwrap(), curve_space_dim(&scaled, d).unwrap());
    }

    #[test]
    fn good_tuple_curves_pass_through_everything((field, pts) in field_points(2..14), d in 1u32..=3) {
        let params = degrees_of_freedom(d).unwrap();
        let a = params.dof();
        prop_assume!(pts.len() >= params.bezout_threshold());
        let pts = &pts[..params.bezout_threshold()];
        let good = extract_good_tuple(pts, d).unwrap();
        prop_assert_eq!(good.points.len(), a);
        let m = curve_space_dim(pts, d).unwrap();
        // Any A points lie on a curve, so only sets on a curve have a good tuple.
        prop_assume!(m >= 0);
        prop_assert_eq!(curve_space_dim(&good.points, d).unwrap(), m);
        let basis = curves_through(&good.points, d, field).unwrap();
        prop_assert_eq!(basis.len() as i64, m + 1);
        for f in &basis {
            for p in pts {
                prop_assert!(eval_projective(f, d, p).is_zero());
            }
        }
        if m == 0 {
            prop_assert_eq!(curves_through(pts, d, field).unwrap().len(), 1);
        }
    }
}

#[test]
fn dof_against_bezout() {
    for d in 1..=12u32 {
        let p = degrees_of_freedom(d).unwrap();
        assert!(p.dof() <= p.bezout_threshold());
        assert_eq!(p.dof() == p.bezout_threshold(), d <= 2);
    }
}

/// The nodal cubic `y² = x²(x + 1)`, parametrized by `t ↦ (t² − 1, t(t² − 1))`.
fn nodal_cubic_points(field: Field, ts: &[i64]) -> Vec<ProjectivePoint> {
    ts.iter()
        .map(|&t| proj(field, t * t - 1, t * (t * t - 1), 1))
        .collect()
}

#[test]
fn nodal_cubic_every_nine_subset() {
    for field in [Field::Rational, Field::prime(101).unwrap()] {
        let pts = nodal_cubic_points(field, &[0, 2, 3, -2, 4, -3, 5, 6, -4, 7]);
        assert_eq!(curve_space_dim(&pts, 3).unwrap(), 0);
        let cubic =
            BivariatePolynomial::from_i64_terms(field, &[(0, 2, 1), (3, 0, -1), (2, 0, -1)]);
        assert!(pts.iter().all(|p| eval_projective(&cubic, 3, p).is_zero()));
        let good = extract_good_tuple(&pts, 3).unwrap();
        let mut good_subsets = 0;
        for skip in 0..pts.len() {
            let sub: Vec<_> = pts
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, p)| p.clone())
                .collect();
            if curve_space_dim(&sub, 3).unwrap() == 0 {
                good_subsets += 1;
                let only = curves_through(&sub, 3, field).unwrap();
                assert_eq!(only, vec![cubic.canonical()]);
            }
            if good.indices.iter().all(|&i| i != skip) {
                assert_eq!(
                    curve_space_dim(&sub, 3).unwrap(),
                    0,
                    "the extracted tuple is good"
                );
            }
        }
        assert!(good_subsets >= 1);
    }
}

#[test]
fn cubics_from_generator_support_good_tuples() {
    for field in [Field::Rational, Field::prime(101).unwrap()] {
        let g = gen_on_curves(field, 3, 2, 10, 17).unwrap();
        for c in g.config.curves() {
            let on: Vec<_> = g
                .config
                .points()
                .iter()
                .filter(|p| c.contains(p))
                .map(PlanePoint::to_projective)
                .collect();
            let gamma = &on[..10];
            let good = extract_good_tuple(gamma, 3).unwrap();
            assert_eq!(
                curve_space_dim(&good.points, 3).unwrap(),
                curve_space_dim(gamma, 3).unwrap()
            );
            for f in curves_through(&good.points, 3, field).unwrap() {
                assert!(gamma.iter().all(|p| eval_projective(&f, 3, p).is_zero()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// `Π (t − r_i) · (t² + c)` with `c > 0` has exactly the distinct `r_i`
    /// as real roots.
    #[test]
    fn isolation_counts_distinct_roots(roots in prop::collection::vec(-20i64..=20, 0..7), c in 1i64..5, rep in 1usize..3) {
        let f = Field::Rational;
        let mut u = UniPoly::from_i64s(f, &[c, 0, 1]);
        for r in &roots {
            for _ in 0..rep {
                u = u.mul(&UniPoly::from_i64s(f, &[-r, 1]));
            }
        }
        let width = BigRational::new(BigInt::from(1), BigInt::from(1000));
        let found = isolate_real_roots(&u, &width).unwrap();
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(found.len(), distinct.len());
        for (iv, r) in found.iter().zip(&distinct) {
            let r = BigRational::from_integer(BigInt::from(*r));
            prop_assert!(iv.lo <= r && r <= iv.hi);
        }
    }
}

/// Applies `p ↦ M p + v` to points and `f ↦ f ∘ (M p + v)^{-1}` to curves.
fn transform(cfg: &PointConfiguration, m: [[i64; 2]; 2], v: [i64; 2]) -> PointConfiguration {
    let f = cfg.field();
    let s = |k: i64| f.from_i64(k);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    assert_eq!(det.abs(), 1);
    // Inverse of a unimodular matrix: adjugate times det (= 1/det).
    let inv = [
        [m[1][1] * det, -m[0][1] * det],
        [-m[1][0] * det, m[0][0] * det],
    ];
    let points = cfg
        .points()
        .iter()
        .map(|p| {
            let x = &(&s(m[0][0]) * &p.x) + &(&(&s(m[0][1]) * &p.y) + &s(v[0]));
            let y = &(&s(m[1][0]) * &p.x) + &(&(&s(m[1][1]) * &p.y) + &s(v[1]));
            PlanePoint::new(x, y).unwrap()
        })
        .collect();
    // p = inv (q − v): x ↦ inv00 x + inv01 y − (inv v)_0, likewise for y.
    let c0 = -(inv[0][0] * v[0] + inv[0][1] * v[1]);
    let c1 = -(inv[1][0] * v[0] + inv[1][1] * v[1]);
    let map: [Scalar; 6] = [
        s(inv[0][0]),
        s(inv[0][1]),
        s(c0),
        s(inv[1][0]),
        s(inv[1][1]),
        s(c1),
    ];
    let curves = cfg
        .curves()
        .iter()
        .map(|c| PlaneCurve::new(c.poly().substitute_affine(&map)).unwrap())
        .collect();
    PointConfiguration::new(f, cfg.degree(), points, curves).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_survive_unimodular_maps(
        fi in 0usize..3, d in 1u32..=3, seed in any::<u64>(),
        a in -3i64..=3, b in -3i64..=3, swap in any::<bool>(), v in (-5i64..=5, -5i64..=5),
    ) {
        let field = fields()[fi];
        let cfg = gen_on_curves(field, d, 3, 5, seed).unwrap().config;
        // Products of elementary matrices are unimodular.
        let mut m = [[1, a], [0, 1]];
        m = [[m[0][0], m[0][1]], [b * m[0][0] + m[1][0], b * m[0][1] + m[1][1]]];
        if swap {
            m = [m[1], m[0]];
        }
        let moved = transform(&cfg, m, [v.0, v.1]);
        prop_assert_eq!(
            incidence_count_bruteforce(&moved).per_curve,
            incidence_count_bruteforce(&cfg).per_curve
        );
    }
}

/// Point `(a, b)` ↔ line `y = a x − b`; incidence is preserved both ways.
#[test]
fn point_line_duality() {
    for field in fields() {
        for seed in 0..40u64 {
            let cfg = gen_random_config(field, 1, 25, 12, seed, 4).unwrap();
            let lines: Vec<_> = cfg
                .curves()
                .iter()
                .filter(|c| !c.poly().coeff((0, 1)).is_zero())
                .cloned()
                .collect();
            let cfg = cfg.with_curves(lines).unwrap();
            // y·c01 + x·c10 + c00 = 0  ⇔  y = m x + k with m = −c10/c01, k = −c00/c01.
            let dual_points: Vec<_> = cfg
                .curves()
                .iter()
                .map(|c| {
                    let c01 = c.poly().coeff((0, 1));
                    let m = &(-&c.poly().coeff((1, 0))) / &c01;
                    let k = &(-&c.poly().coeff((0, 0))) / &c01;
                    PlanePoint::new(m, -k).unwrap()
                })
                .collect();
            let dual_lines: Vec<_> = cfg
                .points()
                .iter()
                .map(|p| {
                    let poly = BivariatePolynomial::new(
                        field,
                        [
                            ((0, 1), field.one()),
                            ((1, 0), -&p.x),
                            ((0, 0), p.y.clone()),
                        ],
                    )
                    .unwrap();
                    PlaneCurve::new(poly).unwrap()
                })
                .collect();
            let dual = PointConfiguration::new(field, 1, dual_points, dual_lines).unwrap();
            assert_eq!(
                incidence_count_bruteforce(&dual).incidence_count,
                incidence_count_bruteforce(&cfg).incidence_count,
                "{field} seed {seed}"
            );
        }
    }
}

/// `I ≤ |P|² + |L|` and `I ≤ |L|² + |P|` for lines, with constant 1.
#[test]
fn line_bounds_hold_with_constant_one() {
    for field in fields() {
        for seed in 0..500u64 {
            let n_points = 1 + (seed % 23) as usize;
            let n_curves = 1 + (seed * 7 % 19) as usize;
            let cfg = gen_random_config(field, 1, n_points, n_curves, seed, 3).unwrap();
            let i = incidence_count_bruteforce(&cfg).incidence_count;
            let (p, l) = (n_points as u64, n_curves as u64);
            assert!(
                i <= p * p + l && i <= l * l + p,
                "{field} seed {seed}: I = {i}"
            );
        }
    }
}
