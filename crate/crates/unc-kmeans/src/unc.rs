//! Useful-nearest-center tracking and deterministic seed selection.
//!
//! A chosen center C is *useless* for a data point P when some other chosen
//! center Cx is strictly closer to P than C is, and strictly closer to C than
//! P is to C. A center that is not useless for P is *useful*, and every point
//! maintains the set of its useful nearest centers with cached distances.
//!
//! Seed selection is fully deterministic: the first center is the point with
//! the smallest first coordinate, and each following center is the point
//! whose useful-center distances maximize `(mean / max) × Σ ln(distance)`.
//! Ties always break to the lowest dataset index.

use crate::dataset::{distance, sq_dist, Dataset, Point};
use crate::error::{Error, Result};
use crate::seeds::{InitMethod, Seeds};

/// True when some member of `others` simultaneously beats `center` on both
/// dominance inequalities for `p` (strictly).
pub fn is_useless(p: &Point, center: &Point, others: &[Point]) -> Result<bool> {
    let d_pc = distance(p, center)?;
    for other in others {
        let d_px = distance(p, other)?;
        let d_cx = distance(center, other)?;
        if d_px < d_pc && d_cx < d_pc {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Oracle form of the useful set: indices of the centers that no other
/// current center dominates for `p`. Quadratic in the number of centers;
/// the incremental [`UncState`] is the production path and is guaranteed to
/// contain this set after every update.
pub fn unc_exact(p: &Point, centers: &[Point]) -> Result<Vec<usize>> {
    if centers.is_empty() {
        return Err(Error::ContractViolation(
            "unc_exact needs at least one center".into(),
        ));
    }
    let to_p: Vec<f64> = centers
        .iter()
        .map(|c| distance(p, c))
        .collect::<Result<_>>()?;
    let mut useful = Vec::new();
    'candidates: for i in 0..centers.len() {
        for j in 0..centers.len() {
            if j == i {
                continue;
            }
            if to_p[j] < to_p[i] && distance(&centers[i], &centers[j])? < to_p[i] {
                continue 'candidates;
            }
        }
        useful.push(i);
    }
    Ok(useful)
}

/// One member of a point's useful set: the center's ordinal among the chosen
/// centers and the cached distance from the point to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsefulCenter {
    pub center: usize,
    pub distance: f64,
}

/// Incrementally maintained useful-center sets for every point of a dataset.
///
/// Adding a center touches each point once and compares it only against the
/// point's current useful set, so a full selection of k seeds costs
/// O(n·k·Ū) distance work (Ū = mean useful-set size) instead of the O(n·k²)
/// of re-deriving the sets from scratch.
#[derive(Debug, Clone)]
pub struct UncState<'a> {
    dataset: &'a Dataset,
    centers: Vec<Point>,
    // row i holds distances from center i to centers 0..i
    center_distances: Vec<Vec<f64>>,
    useful: Vec<Vec<UsefulCenter>>,
}

impl<'a> UncState<'a> {
    /// State with no centers chosen yet; every useful set is empty.
    pub fn new(dataset: &'a Dataset) -> Self {
        Self {
            dataset,
            centers: Vec::new(),
            center_distances: Vec::new(),
            useful: vec![Vec::new(); dataset.len()],
        }
    }

    /// Folds one more center into every point's useful set: ignored where
    /// dominated, otherwise inserted, evicting members it now dominates.
    /// The distance from each point to the new center is computed once.
    pub fn add_center(&mut self, center: Point) -> Result<()> {
        if center.dim() != self.dataset.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dataset.dim(),
                right: center.dim(),
            });
        }
        let new_index = self.centers.len();
        let to_new: Vec<f64> = self
            .centers
            .iter()
            .map(|c| distance(c, &center))
            .collect::<Result<_>>()?;
        for (point, members) in self.dataset.points().iter().zip(&mut self.useful) {
            let d_new = sq_dist(point.coords(), center.coords()).sqrt();
            let dominated = members
                .iter()
                .any(|m| m.distance < d_new && to_new[m.center] < d_new);
            if dominated {
                continue;
            }
            members.retain(|m| !(d_new < m.distance && to_new[m.center] < m.distance));
            members.push(UsefulCenter {
                center: new_index,
                distance: d_new,
            });
        }
        self.center_distances.push(to_new);
        self.centers.push(center);
        Ok(())
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    /// Current useful set of one point, in insertion order.
    pub fn useful_centers(&self, point: usize) -> &[UsefulCenter] {
        &self.useful[point]
    }

    /// Cached distance between two chosen centers.
    pub fn center_distance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else if i > j {
            self.center_distances[i][j]
        } else {
            self.center_distances[j][i]
        }
    }
}

/// Candidate score over a point's useful-center distances:
/// `(mean / max) × Σ ln(distance)`. All three statistics run over the same
/// set. Distances must be strictly positive (the selection loop filters out
/// points that coincide with a center).
pub fn unc_score(distances: &[f64]) -> Result<f64> {
    if distances.is_empty() {
        return Err(Error::ContractViolation(
            "unc_score needs at least one distance".into(),
        ));
    }
    if let Some(d) = distances.iter().find(|d| **d <= 0.0) {
        return Err(Error::ContractViolation(format!(
            "unc_score distances must be positive, got {d}"
        )));
    }
    Ok(score_distances(distances.iter().copied()))
}

fn score_distances(distances: impl Iterator<Item = f64>) -> f64 {
    let mut count = 0usize;
    let mut sum = 0.0;
    let mut max = f64::NEG_INFINITY;
    let mut log_sum = 0.0;
    for d in distances {
        count += 1;
        sum += d;
        if d > max {
            max = d;
        }
        log_sum += d.ln();
    }
    (sum / count as f64 / max) * log_sum
}

/// Deterministic seed selection: smallest first coordinate, then repeated
/// argmax of the score. A point is eligible while it is not already a seed
/// and sits at a strictly positive distance from every member of its useful
/// set. No randomness is involved anywhere.
pub fn select_seeds_unc(dataset: &Dataset, k: usize) -> Result<Seeds> {
    if k < 1 {
        return Err(Error::ContractViolation("k must be at least 1".into()));
    }
    let distinct = dataset.distinct_count();
    if k > distinct {
        return Err(Error::InsufficientDistinctPoints { k, distinct });
    }
    let n = dataset.len();
    let mut first = 0usize;
    for i in 1..n {
        if dataset.point(i).coords()[0] < dataset.point(first).coords()[0] {
            first = i;
        }
    }
    let mut chosen = Vec::with_capacity(k);
    let mut is_seed = vec![false; n];
    let mut state = UncState::new(dataset);
    chosen.push(first);
    is_seed[first] = true;
    state.add_center(dataset.point(first).clone())?;
    while chosen.len() < k {
        let mut best: Option<(f64, usize)> = None;
        for p in 0..n {
            if is_seed[p] {
                continue;
            }
            let members = state.useful_centers(p);
            if members.iter().any(|m| m.distance <= 0.0) {
                continue;
            }
            let score = score_distances(members.iter().map(|m| m.distance));
            if best.map_or(true, |(b, _)| score > b) {
                best = Some((score, p));
            }
        }
        // a distinct position away from every center always remains under
        // the k <= distinct precondition
        let (_, next) = best.ok_or_else(|| {
            Error::ContractViolation("no eligible seed candidate remains".into())
        })?;
        chosen.push(next);
        is_seed[next] = true;
        state.add_center(dataset.point(next).clone())?;
    }
    Ok(Seeds::from_indices(dataset, chosen, InitMethod::Unc))
}
