//! Which cells a curve passes through.
//!
//! After a shear `x ↦ x + λy` that makes the curve's leading coefficient in
//! `y` a nonzero constant, the real branches of the curve over any interval
//! of `x` free of critical values are disjoint graphs `y = φ_i(x)`. Critical
//! values are the real roots of the discriminant in `y` and of the
//! resultants against each factor, so every factor keeps its sign along each
//! branch over such an interval. One rational fiber per interval therefore
//! sees every arc's cell. Isolated real points can only sit over critical
//! values; the rational ones (the only ones that can carry a rational point)
//! are sampled too.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;

use super::{PartitionResult, Sign, SignVector};
use crate::algebra::roots::{IntPoly, Sturm};
use crate::algebra::{
    poly_gcd, resultant, simplest_between, BivariatePolynomial, Field, RootInterval, Scalar,
    UniPoly, Variable,
};
use crate::error::{LabError, Result};
use crate::incidence::PlaneCurve;

use super::degree::harnack_bound;

/// How a curve relates to `Z(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryRelation {
    /// The curve shares the component `shared` with the listed factors; the
    /// remaining part of the curve (if any) is what `visited` describes.
    Contained {
        shared: BivariatePolynomial,
        factors: Vec<usize>,
    },
    /// No common component with any factor.
    Transverse,
}

/// The cells a curve visits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingProfile {
    pub curve: PlaneCurve,
    pub relation: BoundaryRelation,
    /// Sign vectors of the cells met by the curve off `Z(Q)`.
    pub visited: BTreeSet<SignVector>,
    /// Number of distinct real critical abscissae (in sheared coordinates)
    /// that separated the sampled fibers.
    pub critical_abscissae: usize,
}

impl CrossingProfile {
    pub fn is_contained(&self) -> bool {
        matches!(self.relation, BoundaryRelation::Contained { .. })
    }

    /// `d·deg Q + harnack(d)` for the curve's degree `d`.
    pub fn crossing_bound(&self, deg_q: u64) -> u64 {
        let d = self.curve.degree();
        d as u64 * deg_q + harnack_bound(d).expect("curves have degree ≥ 1")
    }

    pub fn within_crossing_bound(&self, deg_q: u64) -> bool {
        self.visited.len() as u64 <= self.crossing_bound(deg_q)
    }
}

/// Splits a rational curve against a partition: shared components with the
/// factors are reported as contained, and the cells met by the rest of the
/// curve are found by exact sampling.
pub fn curve_cells(c: &PlaneCurve, part: &PartitionResult) -> Result<CrossingProfile> {
    if c.field() != Field::Rational {
        return Err(LabError::invalid("crossing profiles need a rational curve"));
    }
    let mut h = c.poly().clone();
    let mut shared = BivariatePolynomial::constant(Field::Rational.one());
    let mut shared_factors = Vec::new();
    for (k, f) in part.factors().iter().enumerate() {
        loop {
            let g = poly_gcd(&h, f)?;
            if g.is_constant() {
                break;
            }
            h = h.exact_div(&g).expect("gcd divides");
            shared = shared.mul(&g);
            if !shared_factors.contains(&k) {
                shared_factors.push(k);
            }
        }
    }
    let relation = if shared_factors.is_empty() {
        BoundaryRelation::Transverse
    } else {
        BoundaryRelation::Contained {
            shared: shared.canonical(),
            factors: shared_factors,
        }
    };
    let (visited, critical_abscissae) = if h.is_constant() {
        (BTreeSet::new(), 0)
    } else {
        visited_cells(&h, part.factors())?
    };
    Ok(CrossingProfile {
        curve: c.clone(),
        relation,
        visited,
        critical_abscissae,
    })
}

fn rat(q: BigRational) -> Scalar {
    Scalar::Rational(q)
}

fn visited_cells(
    h: &BivariatePolynomial,
    factors: &[BivariatePolynomial],
) -> Result<(BTreeSet<SignVector>, usize)> {
    let top = h.top_form();
    let one = Field::Rational.one();
    let lambda = (0i64..)
        .flat_map(|k| [k, -k - 1])
        .map(|k| Field::Rational.from_i64(k))
        .find(|l| !top.eval(l, &one).is_zero())
        .expect("a nonzero form has a non-root");
    let zero = Field::Rational.zero();
    let shear = [
        one.clone(),
        lambda,
        zero.clone(),
        zero.clone(),
        one.clone(),
        zero.clone(),
    ];
    let hs = h.substitute_affine(&shear);
    let fs: Vec<BivariatePolynomial> = factors
        .iter()
        .map(|f| f.substitute_affine(&shear))
        .collect();

    let g = poly_gcd(&hs, &hs.derivative(Variable::Y))?;
    let hsf = if g.is_constant() {
        hs
    } else {
        hs.exact_div(&g).expect("gcd divides")
    };

    let mut critical = Vec::new();
    if hsf.degree_in(Variable::Y).unwrap_or(0) >= 2 {
        critical.push(resultant(&hsf, &hsf.derivative(Variable::Y), Variable::Y)?);
    }
    for f in &fs {
        if f.degree_in(Variable::Y).unwrap_or(0) >= 1 {
            critical.push(resultant(&hsf, f, Variable::Y)?);
        } else {
            critical.push(f.eval_y(&zero));
        }
    }
    let roots = merged_roots(critical);

    let mut xs: Vec<BigRational> = Vec::new();
    match (roots.first(), roots.last()) {
        (Some((_, first)), Some((_, last))) => {
            xs.push(first.lo.floor() - BigRational::one());
            for w in roots.windows(2) {
                xs.push(simplest_between(&w[0].1.hi, &w[1].1.lo));
            }
            xs.push(last.hi.ceil() + BigRational::one());
            for (p, r) in &roots {
                if let Some(x) = p.rational_root_in(r) {
                    xs.push(x);
                }
            }
        }
        _ => xs.push(BigRational::from_integer(0.into())),
    }
    let mut visited = BTreeSet::new();
    for x in xs {
        visited.extend(fiber_cells(&hsf, &fs, &rat(x)));
    }
    Ok((visited, roots.len()))
}

/// Real roots of all the critical polynomials, as sorted, pairwise disjoint
/// isolating intervals tagged with a polynomial that vanishes there.
fn merged_roots(polys: Vec<UniPoly>) -> Vec<(IntPoly, RootInterval)> {
    // Make the squarefree parts pairwise coprime so that no root repeats.
    let mut base: Vec<UniPoly> = Vec::new();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        let mut p = p.squarefree_part();
        for q in &base {
            let g = p.gcd(q);
            if g.degree().unwrap_or(0) >= 1 {
                p = p.exact_quotient(&g).expect("gcd divides");
            }
        }
        if p.degree().unwrap_or(0) >= 1 {
            base.push(p);
        }
    }
    let ints: Vec<IntPoly> = base.iter().map(IntPoly::from_uni).collect();
    let mut items: Vec<(usize, RootInterval)> = ints
        .iter()
        .enumerate()
        .flat_map(|(k, p)| p.isolate().into_iter().map(move |r| (k, r)))
        .collect();
    loop {
        items.sort_by(|a, b| a.1.lo.cmp(&b.1.lo).then(a.1.hi.cmp(&b.1.hi)));
        let Some(i) = (1..items.len()).find(|&i| items[i - 1].1.hi >= items[i].1.lo) else {
            break;
        };
        let (left, right) = items.split_at_mut(i);
        let (a, b) = (&mut left[i - 1], &mut right[0]);
        ints[a.0].bisect_once(&mut a.1);
        ints[b.0].bisect_once(&mut b.1);
    }
    items
        .into_iter()
        .map(|(k, r)| (ints[k].clone(), r))
        .collect()
}

/// Sign vectors of the points of `h = 0` on the vertical line `x = x0` that
/// are off `Z(Q)`.
fn fiber_cells(
    h: &BivariatePolynomial,
    factors: &[BivariatePolynomial],
    x0: &Scalar,
) -> Vec<SignVector> {
    let qs: Vec<UniPoly> = factors.iter().map(|f| f.eval_x(x0)).collect();
    if qs.iter().any(UniPoly::is_zero) {
        // The whole line lies in Z(Q).
        return Vec::new();
    }
    let mut free = h.eval_x(x0).squarefree_part();
    for q in &qs {
        if !q.is_constant() {
            let g = free.gcd(q);
            if g.degree().unwrap_or(0) >= 1 {
                free = free.exact_quotient(&g).expect("gcd divides");
            }
        }
    }
    if free.is_constant() {
        return Vec::new();
    }
    let fi = IntPoly::from_uni(&free);
    let sturms: Vec<Option<Sturm>> = qs
        .iter()
        .map(|q| (!q.is_constant()).then(|| Sturm::new(&IntPoly::from_uni(q).squarefree())))
        .collect();
    fi.isolate()
        .into_iter()
        .map(|mut r| {
            SignVector(
                qs.iter()
                    .zip(&sturms)
                    .map(|(q, sturm)| {
                        if let Some(st) = sturm {
                            while !r.is_exact() && st.has_root_in_closed(&r.lo, &r.hi) {
                                fi.bisect_once(&mut r);
                            }
                        }
                        match q.eval(&rat(r.lo.clone())).signum().map(|s| s.cmp(&0)) {
                            Some(Ordering::Greater) => Sign::Pos,
                            Some(Ordering::Less) => Sign::Neg,
                            _ => unreachable!("common roots with the factors were removed"),
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}
