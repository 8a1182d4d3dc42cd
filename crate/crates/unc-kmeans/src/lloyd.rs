//! Lloyd refinement: alternate nearest-center assignment and centroid
//! update until no label changes.

use crate::dataset::{sq_dist, ssedm, Assignment, Dataset, Point};
use crate::error::{Error, Result};
use crate::seeds::Seeds;

/// Outcome of one refinement run.
#[derive(Debug, Clone)]
pub struct ClusteringResult {
    /// Final center positions; the assignment maps every point to its
    /// nearest entry (ties to the lowest center index).
    pub centers: Vec<Point>,
    pub assignment: Assignment,
    /// Objective value of `assignment`, with means derived from it.
    pub ssedm: f64,
    /// Completed assign+update rounds.
    pub iterations: usize,
    /// Whether an assignment round repeated the previous labels before the
    /// iteration budget ran out.
    pub converged: bool,
}

/// Labels every point with its nearest center; ties break to the lowest
/// center index.
pub fn assign(dataset: &Dataset, centers: &[Point]) -> Result<Assignment> {
    if centers.is_empty() {
        return Err(Error::ContractViolation(
            "assign needs at least one center".into(),
        ));
    }
    if let Some(c) = centers.iter().find(|c| c.dim() != dataset.dim()) {
        return Err(Error::DimensionMismatch {
            left: dataset.dim(),
            right: c.dim(),
        });
    }
    let labels = dataset
        .points()
        .iter()
        .map(|p| {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (i, c) in centers.iter().enumerate() {
                let d = sq_dist(p.coords(), c.coords());
                if d < best_d {
                    best = i;
                    best_d = d;
                }
            }
            best
        })
        .collect();
    Assignment::new(labels, centers.len())
}

/// Moves every center to the mean of its cluster. An empty cluster is
/// repaired by relocating its center onto the point farthest from its own
/// assigned center (distances measured against `old_centers`, the centers
/// the assignment was computed from); a point consumed by one repair is
/// skipped by later repairs in the same round.
pub fn update_centers(
    dataset: &Dataset,
    assignment: &Assignment,
    old_centers: &[Point],
) -> Result<Vec<Point>> {
    if assignment.len() != dataset.len() {
        return Err(Error::ContractViolation(format!(
            "assignment covers {} points, dataset has {}",
            assignment.len(),
            dataset.len()
        )));
    }
    let k = assignment.k();
    if old_centers.len() != k {
        return Err(Error::ContractViolation(format!(
            "{} old centers for k = {k}",
            old_centers.len()
        )));
    }
    let dim = dataset.dim();
    let mut sums = vec![0.0f64; k * dim];
    let mut counts = vec![0usize; k];
    for (p, &label) in dataset.points().iter().zip(assignment.labels()) {
        counts[label] += 1;
        for (s, c) in sums[label * dim..(label + 1) * dim].iter_mut().zip(p.coords()) {
            *s += c;
        }
    }
    let mut centers: Vec<Point> = Vec::with_capacity(k);
    for i in 0..k {
        if counts[i] > 0 {
            let coords = sums[i * dim..(i + 1) * dim]
                .iter()
                .map(|s| s / counts[i] as f64)
                .collect();
            centers.push(Point::from_coords_unchecked(coords));
        } else {
            centers.push(old_centers[i].clone()); // placeholder until repaired
        }
    }
    if counts.iter().any(|&c| c == 0) {
        let mut consumed = vec![false; dataset.len()];
        for i in 0..k {
            if counts[i] > 0 {
                continue;
            }
            let mut farthest = None;
            let mut farthest_d = f64::NEG_INFINITY;
            for (p, (&label, point)) in assignment
                .labels()
                .iter()
                .zip(dataset.points())
                .enumerate()
            {
                if consumed[p] {
                    continue;
                }
                let d = sq_dist(point.coords(), old_centers[label].coords());
                if d > farthest_d {
                    farthest = Some(p);
                    farthest_d = d;
                }
            }
            let p = farthest.ok_or_else(|| {
                Error::ContractViolation("more empty clusters than points".into())
            })?;
            consumed[p] = true;
            centers[i] = dataset.point(p).clone();
        }
    }
    Ok(centers)
}

/// Runs assign/update rounds from the given seeds until an assignment
/// repeats (converged) or `max_iter` rounds complete. The reported SSEDM is
/// recomputed from the final assignment alone.
pub fn run_lloyd(dataset: &Dataset, seeds: &Seeds, max_iter: usize) -> Result<ClusteringResult> {
    if max_iter < 1 {
        return Err(Error::ContractViolation("max_iter must be at least 1".into()));
    }
    if seeds.k() > dataset.len() {
        return Err(Error::ContractViolation(format!(
            "{} seeds for {} points",
            seeds.k(),
            dataset.len()
        )));
    }
    let mut centers = seeds.centers().to_vec();
    let mut labels = assign(dataset, &centers)?;
    let mut iterations = 0usize;
    let mut converged = false;
    loop {
        let new_centers = update_centers(dataset, &labels, &centers)?;
        let new_labels = assign(dataset, &new_centers)?;
        iterations += 1;
        let stable = new_labels == labels;
        centers = new_centers;
        labels = new_labels;
        if stable {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }
    }
    let objective = ssedm(dataset, &labels)?;
    Ok(ClusteringResult {
        centers,
        assignment: labels,
        ssedm: objective,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::InitMethod;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn seeds_at(dataset: &Dataset, indices: &[usize]) -> Seeds {
        Seeds::from_indices(dataset, indices.to_vec(), InitMethod::Maxmin)
    }

    fn pairs_dataset() -> Dataset {
        Dataset::from_rows("pairs", vec![vec![0.0], vec![1.0], vec![10.0], vec![11.0]])
            .unwrap()
    }

    #[test]
    fn assign_labels_nearest_center() {
        let ds = pairs_dataset();
        let asg = assign(&ds, &[pt(&[0.0]), pt(&[10.0])]).unwrap();
        assert_eq!(asg.labels(), [0, 0, 1, 1]);
    }

    #[test]
    fn assign_tie_goes_to_lowest_center() {
        let ds = Dataset::from_rows("d", vec![vec![5.0]]).unwrap();
        let asg = assign(&ds, &[pt(&[0.0]), pt(&[10.0])]).unwrap();
        assert_eq!(asg.labels(), [0]);
    }

    #[test]
    fn assign_single_center_labels_everything_zero() {
        let ds = pairs_dataset();
        let asg = assign(&ds, &[pt(&[3.0])]).unwrap();
        assert_eq!(asg.labels(), [0, 0, 0, 0]);
    }

    #[test]
    fn update_moves_centers_to_means() {
        let ds = pairs_dataset();
        let asg = Assignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let centers =
            update_centers(&ds, &asg, &[pt(&[0.0]), pt(&[10.0])]).unwrap();
        assert_eq!(centers[0].coords(), &[0.5]);
        assert_eq!(centers[1].coords(), &[10.5]);
    }

    #[test]
    fn empty_cluster_takes_farthest_point() {
        let ds = pairs_dataset();
        let asg = Assignment::new(vec![0, 0, 0, 0], 2).unwrap();
        let centers = update_centers(&ds, &asg, &[pt(&[0.0]), pt(&[99.0])]).unwrap();
        // cluster 1 received nothing; point 3 sits farthest from center 0
        assert_eq!(centers[1].coords(), &[11.0]);
        assert_eq!(centers[0].coords(), &[5.5]);
    }

    #[test]
    fn singleton_clusters_keep_their_points() {
        let ds = Dataset::from_rows("d", vec![vec![2.0], vec![9.0]]).unwrap();
        let asg = Assignment::new(vec![0, 1], 2).unwrap();
        let centers = update_centers(&ds, &asg, &[pt(&[2.0]), pt(&[9.0])]).unwrap();
        assert_eq!(centers[0].coords(), &[2.0]);
        assert_eq!(centers[1].coords(), &[9.0]);
    }

    #[test]
    fn converges_to_pair_means_in_one_round() {
        let ds = pairs_dataset();
        let result = run_lloyd(&ds, &seeds_at(&ds, &[1, 2]), 300).unwrap();
        assert!(result.converged);
        assert_eq!(result.iterations, 1);
        assert_eq!(result.centers[0].coords(), &[0.5]);
        assert_eq!(result.centers[1].coords(), &[10.5]);
        assert_eq!(result.ssedm, 1.0);
        assert_eq!(result.assignment.labels(), [0, 0, 1, 1]);
    }

    #[test]
    fn stable_partition_is_a_fixed_point() {
        let ds = pairs_dataset();
        let first = run_lloyd(&ds, &seeds_at(&ds, &[0, 2]), 300).unwrap();
        assert!(first.converged);
        // rerun from the converged centers: nothing may move
        let again = {
            let centers = first.centers.clone();
            let labels = assign(&ds, &centers).unwrap();
            let updated = update_centers(&ds, &labels, &centers).unwrap();
            (labels, updated)
        };
        assert_eq!(again.0, first.assignment);
        assert_eq!(again.1, first.centers);
    }

    #[test]
    fn iteration_budget_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..2).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let ds = Dataset::from_rows("r", rows).unwrap();
        let result = run_lloyd(&ds, &seeds_at(&ds, &[0, 1, 2, 3]), 1).unwrap();
        assert_eq!(result.iterations, 1);
    }

    #[test]
    fn reported_ssedm_matches_reassignment_invariants() {
        let ds = pairs_dataset();
        let result = run_lloyd(&ds, &seeds_at(&ds, &[0, 3]), 300).unwrap();
        // labels really are nearest-center labels for the reported centers
        let relabeled = assign(&ds, &result.centers).unwrap();
        assert_eq!(relabeled, result.assignment);
        let recomputed = ssedm(&ds, &result.assignment).unwrap();
        assert!((recomputed - result.ssedm).abs() <= 1e-9 * (1.0 + recomputed));
    }

    proptest! {
        // the objective never increases across rounds, and runs terminate
        #[test]
        fn rounds_never_increase_ssedm(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(4..60);
            let m = rng.gen_range(1..4);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..m).map(|_| rng.gen_range(-10.0..10.0)).collect())
                .collect();
            let ds = Dataset::from_rows("r", rows).unwrap();
            let k = rng.gen_range(1..=ds.distinct_count().min(6));
            let seeds = crate::baseline::maxmin_init(
                &ds,
                k,
                &mut crate::rng::RngStream::new(seed, 0),
            )
            .unwrap();
            let mut centers = seeds.centers().to_vec();
            let mut labels = assign(&ds, &centers).unwrap();
            let mut previous = f64::INFINITY;
            for _ in 0..300 {
                centers = update_centers(&ds, &labels, &centers).unwrap();
                let new_labels = assign(&ds, &centers).unwrap();
                let objective = ssedm(&ds, &new_labels).unwrap();
                prop_assert!(objective <= previous + 1e-9 * (1.0 + previous.abs().min(1e300)));
                previous = objective;
                if new_labels == labels {
                    break;
                }
                labels = new_labels;
            }
        }
    }
}
