//! Incidence counting through a partition, and the iterated version that
//! peels off the curves lying in `Z(Q)`.

use rayon::prelude::*;

use super::crossing::{curve_cells, CrossingProfile};
use super::degree::{choose_partition_degree, PartitionDegree};
use super::{build_partition, PartitionResult};
use crate::error::{LabError, Result};
use crate::incidence::{incidence_count_bruteforce, IncidenceReport, PointConfiguration};

/// The split `I(P_cell, L_cell) + I(P_alg, L_cell) + I(P_alg, L_alg)`, plus
/// `I(P_cell, L_alg)` for curves that have a component in `Z(Q)` and another
/// one outside it (zero when every curve is irreducible).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionLedger {
    pub cell_cell: u64,
    pub alg_cell: u64,
    pub alg_alg: u64,
    pub cell_alg: u64,
    pub n_cell_curves: usize,
    pub n_alg_curves: usize,
    /// `Σ_i |L_i|`, the number of (cell, curve) pairs with the curve meeting
    /// the cell.
    pub sum_li: u64,
    pub deg_q: u64,
    pub max_cell: usize,
    /// One profile per curve, in configuration order.
    pub profiles: Vec<CrossingProfile>,
}

impl PartitionLedger {
    pub fn total(&self) -> u64 {
        self.cell_cell + self.alg_cell + self.alg_alg + self.cell_alg
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionedCount {
    pub report: IncidenceReport,
    pub ledger: PartitionLedger,
}

/// Counts incidences cell by cell and checks the total against brute force.
///
/// Fails with [`LabError::Consistency`] if the two counts differ.
pub fn incidence_count_partitioned(
    cfg: &PointConfiguration,
    part: &PartitionResult,
) -> Result<PartitionedCount> {
    if cfg.points() != part.points() {
        return Err(LabError::invalid(
            "the partition was built for a different point set",
        ));
    }
    let profiles = cfg
        .curves()
        .par_iter()
        .map(|c| curve_cells(c, part))
        .collect::<Result<Vec<_>>>()?;
    let points = cfg.points();
    let boundary = part.boundary_points();
    let rows: Vec<(u64, u64)> = cfg
        .curves()
        .par_iter()
        .zip(&profiles)
        .map(|(c, prof)| {
            let in_cells = prof
                .visited
                .iter()
                .filter_map(|s| part.cells().get(s))
                .flatten()
                .filter(|&&i| c.contains(&points[i]))
                .count() as u64;
            let on_boundary = boundary.iter().filter(|&&i| c.contains(&points[i])).count() as u64;
            (in_cells, on_boundary)
        })
        .collect();
    let mut ledger = PartitionLedger {
        cell_cell: 0,
        alg_cell: 0,
        alg_alg: 0,
        cell_alg: 0,
        n_cell_curves: 0,
        n_alg_curves: 0,
        sum_li: profiles.iter().map(|p| p.visited.len() as u64).sum(),
        deg_q: part.degree(),
        max_cell: part.max_occupancy(),
        profiles: Vec::new(),
    };
    for (prof, &(cells, alg)) in profiles.iter().zip(&rows) {
        if prof.is_contained() {
            ledger.n_alg_curves += 1;
            ledger.cell_alg += cells;
            ledger.alg_alg += alg;
        } else {
            ledger.n_cell_curves += 1;
            ledger.cell_cell += cells;
            ledger.alg_cell += alg;
        }
    }
    ledger.profiles = profiles;
    let per_curve: Vec<u64> = rows.iter().map(|(a, b)| a + b).collect();
    let brute = incidence_count_bruteforce(cfg);
    if brute.per_curve != per_curve {
        return Err(LabError::Consistency(format!(
            "partitioned count {} disagrees with brute force {}",
            ledger.total(),
            brute.incidence_count
        )));
    }
    Ok(PartitionedCount {
        report: IncidenceReport {
            incidence_count: ledger.total(),
            per_curve,
            verdicts: Vec::new(),
        },
        ledger,
    })
}

/// One round of the iteration in [`dyadic_ledger`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicStep {
    pub points: usize,
    pub curves: usize,
    /// `None` for the closing brute-force round.
    pub degree: Option<u64>,
    pub levels: u32,
    /// Curves with a component in `Z(Q)`, carried to the next round.
    pub alg_curves: usize,
    /// Incidences settled in this round.
    pub incidences: u64,
}

/// Partitions, settles every incidence that involves a cell, and recurses on
/// the boundary points and the curves inside `Z(Q)`, until the configuration
/// leaves the regime `|P|^{1/2} ≤ |L| ≤ |P|^A` or is down to one curve (then
/// brute force finishes), or runs out of points or curves. The per-round
/// counts must sum to the brute-force total, and each round must at least
/// halve the curves.
pub fn dyadic_ledger(cfg: &PointConfiguration) -> Result<Vec<DyadicStep>> {
    let a = cfg.dof() as u32;
    let mut cur = cfg.clone();
    let mut trace = Vec::new();
    while !cur.points().is_empty() && !cur.curves().is_empty() {
        let (p, l) = (cur.points().len(), cur.curves().len());
        // With a single curve `D ≤ |L|/2` is impossible; finish directly.
        let degree = match choose_partition_degree(p as u64, l as u64, a)? {
            PartitionDegree::Partition { .. } if l < 2 => PartitionDegree::Skip,
            other => other,
        };
        match degree {
            PartitionDegree::Skip => {
                trace.push(DyadicStep {
                    points: p,
                    curves: l,
                    degree: None,
                    levels: 0,
                    alg_curves: 0,
                    incidences: incidence_count_bruteforce(&cur).incidence_count,
                });
                break;
            }
            PartitionDegree::Partition { degree, levels } => {
                let part = build_partition(cur.points(), levels)?;
                let counted = incidence_count_partitioned(&cur, &part)?;
                let ledger = &counted.ledger;
                if 2 * ledger.n_alg_curves > l {
                    return Err(LabError::Consistency(format!(
                        "{} of {l} curves lie in Z(Q); the round does not halve L",
                        ledger.n_alg_curves
                    )));
                }
                trace.push(DyadicStep {
                    points: p,
                    curves: l,
                    degree: Some(degree),
                    levels,
                    alg_curves: ledger.n_alg_curves,
                    incidences: ledger.cell_cell + ledger.alg_cell + ledger.cell_alg,
                });
                let alg_points = part
                    .boundary_points()
                    .iter()
                    .map(|&i| cur.points()[i].clone())
                    .collect();
                let alg_curves = ledger
                    .profiles
                    .iter()
                    .filter(|p| p.is_contained())
                    .map(|p| p.curve.clone())
                    .collect();
                cur = PointConfiguration::new(cur.field(), cur.degree(), alg_points, alg_curves)?;
            }
        }
    }
    let total: u64 = trace.iter().map(|s| s.incidences).sum();
    let brute = incidence_count_bruteforce(cfg).incidence_count;
    if total != brute {
        return Err(LabError::Consistency(format!(
            "dyadic ledger sums to {total}, brute force gives {brute}"
        )));
    }
    Ok(trace)
}
