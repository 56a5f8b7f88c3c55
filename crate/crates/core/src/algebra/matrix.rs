//! Dense exact matrices: rank, kernel and determinant by fraction-free
//! (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::field::{Field, Scalar};
use crate::error::{LabError, Result};

/// The ring operations fraction-free elimination needs. `exact_div` is only
/// ever called where the division is known to be exact.
pub(crate) trait ExactRing: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, rhs: &Self) -> Self;
}

impl ExactRing for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

/// Bareiss elimination to row echelon form, in place. Returns the pivot
/// columns and the number of row swaps performed.
pub(crate) fn bareiss_echelon<R: ExactRing>(
    rows: &mut [Vec<R>],
    cols: usize,
    one: &R,
) -> (Vec<usize>, usize) {
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut prev = one.clone();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let v = pivot.mul(&row[j]).sub(&factor.mul(&pivot_row[j]));
                row[j] = v.exact_div(&prev);
            }
            row[c] = one.sub(one);
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    (pivots, swaps)
}

/// Determinant of a square matrix over an exact ring.
pub(crate) fn bareiss_determinant<R: ExactRing>(mut rows: Vec<Vec<R>>, one: &R) -> R {
    let n = rows.len();
    if n == 0 {
        return one.clone();
    }
    let (pivots, swaps) = bareiss_echelon(&mut rows, n, one);
    if pivots.len() < n {
        return one.sub(one);
    }
    let det = rows[n - 1][n - 1].clone();
    if swaps % 2 == 1 {
        det.neg()
    } else {
        det
    }
}

/// A dense matrix whose entries all belong to one declared field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    /// Row-major constructor. Every entry must lie in `field`.
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(LabError::invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            field.check(e)?;
        }
        Ok(ExactMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LabError::invalid(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Self::new(field, n, cols, rows.into_iter().flatten().collect())
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        let mut rows: Vec<Vec<Scalar>> = self
            .entries
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(|r| r.to_vec())
            .collect();
        if self.cols == 0 {
            rows = vec![Vec::new(); self.rows];
        }
        if self.field == Field::Rational {
            // Integer rows keep every Bareiss intermediate a minor of the
            // integer matrix, so nothing but integers is ever stored.
            for row in &mut rows {
                clear_denominators(row);
            }
        }
        rows
    }

    fn echelon(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let mut rows = self.row_vecs();
        let (pivots, _) = bareiss_echelon(&mut rows, self.cols, &self.field.one());
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// A basis of the right kernel. The vector for each non-pivot column `f`
    /// has a 1 in position `f` and zeros in the other non-pivot positions.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (rows, pivots) = self.echelon();
        let zero = self.field.zero();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![zero.clone(); self.cols];
                x[f] = self.field.one();
                for (i, &p) in pivots.iter().enumerate().rev() {
                    let mut acc = zero.clone();
                    for j in p + 1..self.cols {
                        if !x[j].is_zero() && !rows[i][j].is_zero() {
                            acc = &acc + &(&rows[i][j] * &x[j]);
                        }
                    }
                    x[p] = -(&acc / &rows[i][p]);
                }
                x
            })
            .collect()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(LabError::invalid("determinant of a non-square matrix"));
        }
        let rows = self.row_vecs();
        let mut det = bareiss_determinant(rows, &self.field.one());
        if self.field == Field::Rational {
            // Undo the row scaling applied by `row_vecs`.
            for r in 0..self.rows {
                let row = &self.entries[r * self.cols..(r + 1) * self.cols];
                det = &det / &Scalar::Rational(BigRational::from_integer(denominator_lcm(row)));
            }
        }
        Ok(det)
    }

    /// `self · v`.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(LabError::invalid(
                "vector length does not match column count",
            ));
        }
        for s in v {
            self.field.check(s)?;
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols).fold(self.field.zero(), |acc, c| &acc + &(self.get(r, c) * &v[c]))
            })
            .collect())
    }
}

/// Matrix rank.
pub fn mat_rank(m: &ExactMatrix) -> usize {
    m.rank()
}

/// Kernel basis; its length is `cols − rank`.
pub fn mat_kernel(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    m.kernel()
}

fn denominator_lcm(row: &[Scalar]) -> BigInt {
    row.iter()
        .filter_map(Scalar::as_rational)
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

fn clear_denominators(row: &mut [Scalar]) {
    let l = denominator_lcm(row);
    if l.is_one() {
        return;
    }
    let scale = Scalar::Rational(BigRational::from_integer(l));
    for e in row.iter_mut() {
        *e = &*e * &scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> ExactMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let f = Field::Rational;
        ExactMatrix::from_rows(
            f,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn annihilates(m: &ExactMatrix, v: &[Scalar]) -> bool {
        m.apply(v).unwrap().iter().all(Scalar::is_zero)
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let m = ExactMatrix::identity(Field::Rational, 2);
        assert!(mat_kernel(&m).is_empty());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn zero_row_kernel_is_everything() {
        let m = qm(&[&[0, 0, 0]]);
        assert_eq!(mat_kernel(&m).len(), 3);
    }

    #[test]
    fn dependent_rows_kernel() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = mat_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(annihilates(&m, v));
        }
        // By hand: x = -2y - 3z, free y and z.
        let f = Field::Rational;
        assert_eq!(k[0], vec![f.from_i64(-2), f.one(), f.zero()]);
        assert_eq!(k[1], vec![f.from_i64(-3), f.zero(), f.one()]);
    }

    #[test]
    fn mixed_fields_rejected() {
        let err = ExactMatrix::new(
            Field::Rational,
            1,
            2,
            vec![Field::Rational.one(), Field::Gaussian.one()],
        )
        .unwrap_err();
        assert!(matches!(err, LabError::FieldMismatch { .. }));
    }

    #[test]
    fn determinant_with_fractions() {
        let f = Field::Rational;
        let h = |s: &str| f.parse_scalar(s).unwrap();
        let m =
            ExactMatrix::from_rows(f, 2, vec![vec![h("1/2"), h("1/3")], vec![h("1/4"), h("1")]])
                .unwrap();
        // 1/2 - 1/12 = 5/12
        assert_eq!(m.determinant().unwrap(), h("5/12"));
        let s = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(s.determinant().unwrap(), f.from_i64(-1));
    }

    #[test]
    fn prime_field_rank() {
        let f = Field::prime(7).unwrap();
        // [[1,2],[3,6]] is singular over every field; [[1,2],[3,13]] only mod 7.
        let m = ExactMatrix::from_rows(
            f,
            2,
            vec![
                vec![f.from_i64(1), f.from_i64(2)],
                vec![f.from_i64(3), f.from_i64(13)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..5, cols in 1usize..6,
                        vals in proptest::collection::vec(-3i64..4, 30),
                        p in prop::sample::select(vec![0u64, 5, 101])) {
            let field = if p == 0 { Field::Rational } else { Field::prime(p).unwrap() };
            let entries = (0..rows * cols).map(|i| field.from_i64(vals[i % vals.len()] * (i as i64 % 3))).collect();
            let m = ExactMatrix::new(field, rows, cols, entries).unwrap();
            let kernel = m.kernel();
            prop_assert_eq!(m.rank() + kernel.len(), cols);
            for v in &kernel {
                prop_assert!(annihilates(&m, v));
            }
            // Independence: the kernel vectors stacked have full rank.
            if !kernel.is_empty() {
                let k = ExactMatrix::from_rows(field, cols, kernel.clone()).unwrap();
                prop_assert_eq!(k.rank(), kernel.len());
            }
        }
    }
}
