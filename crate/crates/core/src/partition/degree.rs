use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{LabError, Result};

/// Degree of the factor added at level `j ≥ 1`: the least `r` whose curve
/// space has projective dimension `C(r+2, 2) − 1 ≥ 2^{j−1}`, enough to bisect
/// `2^{j−1}` sets at once.
pub fn level_degree(j: u32) -> u32 {
    assert!(j >= 1, "levels are numbered from 1");
    let target = 1u128 << (j - 1).min(120);
    let mut r: u32 = 1;
    while ((r as u128 + 2) * (r as u128 + 1) / 2 - 1) < target {
        r += 1;
    }
    r
}

/// `D_max(t) = Σ_{j=1..t} r_j`, the degree of a `t`-level partition.
pub fn max_degree(t: u32) -> u64 {
    (1..=t).map(|j| level_degree(j) as u64).sum()
}

/// Largest `t` with `D_max(t) ≤ degree`.
pub fn levels_for_degree(degree: u64) -> u32 {
    let mut t = 0;
    while max_degree(t + 1) <= degree {
        t += 1;
    }
    t
}

/// Outcome of [`choose_partition_degree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionDegree {
    /// Outside `|P|^{1/2} ≤ |L| ≤ |P|^A`; the initial bounds apply directly.
    Skip,
    Partition {
        degree: u64,
        levels: u32,
    },
}

/// `D = max(1, min(⌊|P|^{A/(2A−1)} |L|^{−1/(2A−1)}⌋, ⌊|L|/2⌋))` and the
/// number of bisection levels that fit in degree `D`.
pub fn choose_partition_degree(
    num_points: u64,
    num_curves: u64,
    a: u32,
) -> Result<PartitionDegree> {
    if num_points == 0 || num_curves == 0 || a == 0 {
        return Err(LabError::invalid(
            "partition degree needs nonempty P, L and A ≥ 1",
        ));
    }
    let p = BigInt::from(num_points);
    let l = BigInt::from(num_curves);
    let p_pow_a = num_traits::pow(p.clone(), a as usize);
    if &l * &l < p || l > p_pow_a {
        return Ok(PartitionDegree::Skip);
    }
    // D^{2A−1} ≤ P^A / L, and D is an integer, so the floor division is exact
    // enough.
    let root = (p_pow_a / &l).nth_root(2 * a - 1);
    let degree = root.to_u64().unwrap_or(u64::MAX).min(num_curves / 2).max(1);
    Ok(PartitionDegree::Partition {
        degree,
        levels: levels_for_degree(degree),
    })
}

/// Harnack's bound on the number of connected components of a real plane
/// curve of degree `d`: `1 + (d−1)(d−2)/2`.
pub fn harnack_bound(d: u32) -> Result<u64> {
    if d < 1 {
        return Err(LabError::invalid("degree must be at least 1"));
    }
    let d = d as u64;
    Ok(1 + (d - 1) * d.saturating_sub(2) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_degrees() {
        let r: Vec<u32> = (1..=7).map(level_degree).collect();
        assert_eq!(r, vec![1, 1, 2, 3, 5, 7, 10]);
        let dmax: Vec<u64> = (0..=5).map(max_degree).collect();
        assert_eq!(dmax, vec![0, 1, 2, 4, 7, 12]);
    }

    #[test]
    fn level_degree_is_minimal() {
        for j in 1..=20 {
            let r = level_degree(j) as u64;
            let dim = |r: u64| (r + 2) * (r + 1) / 2 - 1;
            assert!(dim(r) >= 1 << (j - 1));
            assert!(r == 1 || dim(r - 1) < 1 << (j - 1));
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(
            choose_partition_degree(1000, 1000, 2).unwrap(),
            PartitionDegree::Partition {
                degree: 10,
                levels: 4
            }
        );
        assert_eq!(
            choose_partition_degree(1000, 30, 2).unwrap(),
            PartitionDegree::Skip
        );
        match choose_partition_degree(10_000, 10_000, 5).unwrap() {
            PartitionDegree::Partition { degree, .. } => assert_eq!(degree, 59),
            PartitionDegree::Skip => panic!("expected a partition"),
        }
        assert!(choose_partition_degree(0, 5, 2).is_err());
    }

    #[test]
    fn degree_capped_by_half_of_curves() {
        // |P| = 100, |L| = 10: the formula gives ⌊(10^4/10)^{1/3}⌋ = 10 > 5.
        assert_eq!(
            choose_partition_degree(100, 10, 2).unwrap(),
            PartitionDegree::Partition {
                degree: 5,
                levels: 3
            }
        );
        // Too many curves.
        assert_eq!(
            choose_partition_degree(3, 10, 2).unwrap(),
            PartitionDegree::Skip
        );
    }

    #[test]
    fn harnack_values() {
        let h: Vec<u64> = (1..=4).map(|d| harnack_bound(d).unwrap()).collect();
        assert_eq!(h, vec![1, 1, 2, 4]);
        assert!(harnack_bound(0).is_err());
    }
}
