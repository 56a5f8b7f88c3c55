//! Iterated polynomial ham-sandwich bisection.
//!
//! Level `j` must cut every current part (at most `2^{j−1}` of them) roughly
//! in half with one curve of degree `r_j`. Lifting points by the degree-`r_j`
//! monomials turns this into finding a hyperplane through the origin of
//! `ℝ^{A_r + 1}` that bisects each lifted part. The hyperplane is searched in
//! floating point by a piecewise-linear Newton iteration on the part medians
//! (each step is the minimum-norm correction that zeroes the midpoint of the
//! two middle values of every part), then rounded to integer coefficients and
//! checked with exact arithmetic. If that search misses (typically on
//! degenerate inputs such as grids), hyperplanes through `dim − 1` lifted
//! points are tried: all of them when there are few, a seeded sample
//! otherwise. Only the exact check decides.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::degree::level_degree;
use super::{primitive_positive, PartitionResult};
use crate::algebra::{BivariatePolynomial, ExactMatrix, Field, Scalar};
use crate::error::{LabError, Result};
use crate::incidence::PlanePoint;
use crate::veronese::veronese_exponents;

const ATTEMPTS: u64 = 48;
const ITERATIONS: usize = 120;
const ROUNDING_BITS: [u32; 6] = [8, 12, 16, 24, 32, 46];
/// Candidate budget for the exhaustive and the sampled exact search.
const EXACT_CANDIDATES: usize = 20_000;

/// Builds a `t`-level partition of `points` (rational coordinates, distinct).
///
/// After level `j` every part of size `S` has been split so that each open
/// side of the new factor holds at most `⌈S/2⌉` of its points; points on the
/// factor move to the boundary. The result is audited exactly before it is
/// returned, and a failed search is reported as
/// [`LabError::ConstructionFailure`].
pub fn build_partition(points: &[PlanePoint], t: u32) -> Result<PartitionResult> {
    let coords = points
        .iter()
        .map(|p| {
            p.as_rational()
                .map(|(x, y)| (x.clone(), y.clone()))
                .ok_or_else(|| LabError::invalid("partitioning needs rational points"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::new();
    if !coords.iter().all(|c| seen.insert(c)) {
        return Err(LabError::invalid("duplicate point"));
    }
    let frame = Frame::new(&coords);
    let norm: Vec<(BigRational, BigRational)> = coords.iter().map(|c| frame.apply(c)).collect();
    let norm_f: Vec<(f64, f64)> = norm
        .iter()
        .map(|(x, y)| (x.to_f64().unwrap(), y.to_f64().unwrap()))
        .collect();

    let mut parts: Vec<Vec<usize>> = if points.is_empty() {
        Vec::new()
    } else {
        vec![(0..points.len()).collect()]
    };
    let mut factors = Vec::new();
    for j in 1..=t {
        if parts.iter().all(|p| p.len() < 2) {
            break;
        }
        let exps: Vec<(u32, u32)> = veronese_exponents(level_degree(j))
            .into_iter()
            .map(|(a, b, _)| (a, b))
            .collect();
        let lifted = Lifted::new(&exps, &norm, &norm_f, &parts);
        let coeffs = lifted
            .bisect(j)
            .or_else(|| lifted.exact_search(j))
            .ok_or_else(|| {
                LabError::ConstructionFailure(format!(
                    "no bisecting curve of degree {} found for level {j} ({} parts)",
                    level_degree(j),
                    parts.len()
                ))
            })?;
        let mut next = Vec::new();
        for part in &parts {
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for &i in part {
                match lifted.exact_value(&coeffs, i).signum() {
                    s if s.is_positive() => pos.push(i),
                    s if s.is_negative() => neg.push(i),
                    _ => {}
                }
            }
            next.extend([pos, neg].into_iter().filter(|p| !p.is_empty()));
        }
        parts = next;
        let g = BivariatePolynomial::new(
            Field::Rational,
            exps.iter()
                .zip(&coeffs)
                .map(|(&e, c)| (e, Scalar::Rational(BigRational::from_integer(c.clone())))),
        )?;
        factors.push(primitive_positive(&frame.pull_back(&g)));
    }
    let result = PartitionResult::from_factors(points.to_vec(), factors, t)?;
    result.audit()?;
    Ok(result)
}

/// Normalizing similarity `p ↦ (p − c)/s` with rational `c` and `s` a power
/// of two, mapping the points into `[−1, 1]²`.
struct Frame {
    cx: BigRational,
    cy: BigRational,
    s: BigRational,
}

impl Frame {
    fn new(coords: &[(BigRational, BigRational)]) -> Self {
        let two = BigRational::from_integer(2.into());
        let mid = |f: fn(&(BigRational, BigRational)) -> &BigRational| {
            let lo = coords.iter().map(f).min();
            let hi = coords.iter().map(f).max();
            match (lo, hi) {
                (Some(lo), Some(hi)) => ((lo + hi) / &two).floor(),
                _ => BigRational::zero(),
            }
        };
        let cx = mid(|c| &c.0);
        let cy = mid(|c| &c.1);
        let m = coords
            .iter()
            .flat_map(|(x, y)| [(x - &cx).abs(), (y - &cy).abs()])
            .max()
            .unwrap_or_else(BigRational::zero);
        let mut s = BigRational::one();
        if m.is_positive() {
            while s < m {
                s *= &two;
            }
            while &s / &two >= m {
                s /= &two;
            }
        }
        Frame { cx, cy, s }
    }

    fn apply(&self, (x, y): &(BigRational, BigRational)) -> (BigRational, BigRational) {
        ((x - &self.cx) / &self.s, (y - &self.cy) / &self.s)
    }

    /// `g` in normalized coordinates, rewritten in original coordinates.
    fn pull_back(&self, g: &BivariatePolynomial) -> BivariatePolynomial {
        let r = |q: BigRational| Scalar::Rational(q);
        let inv = self.s.recip();
        let zero = BigRational::zero();
        g.substitute_affine(&[
            r(inv.clone()),
            r(zero.clone()),
            r(-&self.cx * &inv),
            r(zero),
            r(inv.clone()),
            r(-&self.cy * &inv),
        ])
    }
}

/// Monomial values of the points of the active parts at one level.
struct Lifted<'a> {
    parts: Vec<&'a Vec<usize>>,
    exact: std::collections::HashMap<usize, Vec<BigRational>>,
    float: Vec<Vec<Vec<f64>>>,
    dim: usize,
}

impl<'a> Lifted<'a> {
    fn new(
        exps: &[(u32, u32)],
        norm: &[(BigRational, BigRational)],
        norm_f: &[(f64, f64)],
        parts: &'a [Vec<usize>],
    ) -> Self {
        let exact = parts
            .iter()
            .flatten()
            .map(|&i| {
                let (x, y) = &norm[i];
                let lift = exps
                    .iter()
                    .map(|&(a, b)| {
                        num_traits::pow(x.clone(), a as usize)
                            * num_traits::pow(y.clone(), b as usize)
                    })
                    .collect();
                (i, lift)
            })
            .collect();
        let active: Vec<&Vec<usize>> = parts.iter().filter(|p| p.len() >= 2).collect();
        let float = active
            .iter()
            .map(|part| {
                part.iter()
                    .map(|&i| {
                        let (xf, yf) = norm_f[i];
                        exps.iter()
                            .map(|&(a, b)| xf.powi(a as i32) * yf.powi(b as i32))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Lifted {
            parts: active,
            exact,
            float,
            dim: exps.len(),
        }
    }

    fn exact_value(&self, c: &[BigInt], i: usize) -> BigRational {
        c.iter()
            .zip(&self.exact[&i])
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| m * BigRational::from_integer(c.clone()))
            .sum()
    }

    /// Ranks `(lo, hi)` of the order statistics that must straddle zero:
    /// each open side may hold at most `⌈S/2⌉` points.
    fn ranks(s: usize) -> (usize, usize) {
        let c = s.div_ceil(2);
        (s - 1 - c, c)
    }

    fn exact_ok(&self, c: &[BigInt]) -> bool {
        self.parts.iter().all(|part| {
            let cap = part.len().div_ceil(2);
            let (mut pos, mut neg) = (0, 0);
            for &i in part.iter() {
                let v = self.exact_value(c, i);
                if v.is_positive() {
                    pos += 1;
                } else if v.is_negative() {
                    neg += 1;
                }
            }
            pos <= cap && neg <= cap
        })
    }

    fn round(&self, c: &DVector<f64>) -> Option<Vec<BigInt>> {
        let max = c.amax();
        if max == 0.0 || !max.is_finite() {
            return None;
        }
        ROUNDING_BITS.iter().find_map(|&bits| {
            let scale = (1u64 << bits) as f64 / max;
            let ints: Vec<BigInt> = c
                .iter()
                .map(|v| BigInt::from((v * scale).round() as i64))
                .collect();
            (ints.iter().any(|v| !v.is_zero()) && self.exact_ok(&ints)).then_some(ints)
        })
    }

    fn bisect(&self, level: u32) -> Option<Vec<BigInt>> {
        let n = self.dim;
        let m = self.parts.len();
        for attempt in 0..ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(((level as u64) << 32) | attempt);
            let mut c = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            c.normalize_mut();
            for it in 0..ITERATIONS {
                let mut w = DMatrix::zeros(m, n);
                let mut f = DVector::zeros(m);
                let mut straddles = true;
                for (k, rows) in self.float.iter().enumerate() {
                    let vals: Vec<f64> = rows.iter().map(|r| dot(r, &c)).collect();
                    let (lo, hi) = Self::ranks(rows.len());
                    let mut idx: Vec<usize> = (0..rows.len()).collect();
                    idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
                    let (a, b) = (idx[lo], idx[hi]);
                    straddles &= vals[a] < 0.0 && vals[b] > 0.0;
                    for col in 0..n {
                        w[(k, col)] = 0.5 * (rows[a][col] + rows[b][col]);
                    }
                    f[k] = 0.5 * (vals[a] + vals[b]);
                }
                if straddles {
                    if let Some(ints) = self.round(&c) {
                        return Some(ints);
                    }
                }
                let step = w.svd(true, true).solve(&(-f), 1e-12).ok()?;
                c += step;
                if it % 30 == 29 {
                    // Break cycles between rank patterns.
                    for v in c.iter_mut() {
                        *v += 1e-3 * rng.gen_range(-1.0..1.0);
                    }
                }
                let norm = c.norm();
                if !norm.is_finite() || norm < 1e-300 {
                    break;
                }
                c /= norm;
            }
        }
        None
    }
}

impl Lifted<'_> {
    /// Normals of hyperplanes through the lifts of `subset`.
    fn through(&self, subset: &[usize]) -> Vec<Vec<BigInt>> {
        let rows = subset
            .iter()
            .map(|i| {
                self.exact[i]
                    .iter()
                    .cloned()
                    .map(Scalar::Rational)
                    .collect()
            })
            .collect();
        let Ok(m) = ExactMatrix::from_rows(Field::Rational, self.dim, rows) else {
            return Vec::new();
        };
        m.kernel().iter().map(|v| integral(v)).collect()
    }

    fn exact_search(&self, level: u32) -> Option<Vec<BigInt>> {
        let pool: Vec<usize> = self.parts.iter().flat_map(|p| p.iter().copied()).collect();
        let k = self.dim - 1;
        if pool.len() <= k {
            return self.through(&pool).into_iter().find(|c| self.exact_ok(c));
        }
        let try_subset =
            |subset: &[usize]| self.through(subset).into_iter().find(|c| self.exact_ok(c));
        if binomial_at_most(pool.len(), k, EXACT_CANDIDATES) {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let subset: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
                if let Some(c) = try_subset(&subset) {
                    return Some(c);
                }
                // Next k-combination in lexicographic order.
                let mut i = k;
                while i > 0 && idx[i - 1] == pool.len() - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    return None;
                }
                idx[i - 1] += 1;
                for l in i..k {
                    idx[l] = idx[l - 1] + 1;
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 | level as u64);
        (0..EXACT_CANDIDATES).find_map(|_| {
            let subset: Vec<usize> = rand::seq::index::sample(&mut rng, pool.len(), k)
                .into_iter()
                .map(|i| pool[i])
                .collect();
            try_subset(&subset)
        })
    }
}

/// A rational vector scaled to a primitive integer vector.
fn integral(v: &[Scalar]) -> Vec<BigInt> {
    use num_integer::Integer;
    let qs: Vec<&BigRational> = v
        .iter()
        .map(|s| s.as_rational().expect("rational lift"))
        .collect();
    let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs
        .iter()
        .map(|q| (*q * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Whether `C(n, k) ≤ cap`.
fn binomial_at_most(n: usize, k: usize, cap: usize) -> bool {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return false;
        }
    }
    true
}

fn dot(row: &[f64], c: &DVector<f64>) -> f64 {
    row.iter().zip(c.iter()).map(|(a, b)| a * b).sum()
}
