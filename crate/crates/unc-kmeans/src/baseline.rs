//! Comparison initializers: uniform random selection, k-means++ D² sampling,
//! and Maxmin (farthest-point-first).
//!
//! All three keep the shortest squared distance from every point to the
//! centers chosen so far, refreshed with one distance computation per point
//! per round, so selecting k centers costs O(n·k).

use rand::Rng;

use crate::dataset::{sq_dist, Dataset};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::seeds::{InitMethod, Seeds};

fn check_k(dataset: &Dataset, k: usize) -> Result<usize> {
    if k < 1 {
        return Err(Error::ContractViolation("k must be at least 1".into()));
    }
    let distinct = dataset.distinct_count();
    if k > distinct {
        return Err(Error::InsufficientDistinctPoints { k, distinct });
    }
    Ok(distinct)
}

fn check_first(dataset: &Dataset, first: usize) -> Result<()> {
    if first >= dataset.len() {
        return Err(Error::ContractViolation(format!(
            "first center index {first} out of range for {} points",
            dataset.len()
        )));
    }
    Ok(())
}

/// k rows drawn uniformly without replacement. A draw landing on a position
/// already held (a duplicate row) is discarded and redrawn, so the result
/// always spans k distinct positions.
pub fn random_init(dataset: &Dataset, k: usize, rng: &mut RngStream) -> Result<Seeds> {
    let distinct = check_k(dataset, k)?;
    let mut pool: Vec<usize> = (0..dataset.len()).collect();
    let mut held: Vec<usize> = Vec::with_capacity(k);
    while held.len() < k {
        if pool.is_empty() {
            return Err(Error::InsufficientDistinctPoints { k, distinct });
        }
        let j = rng.gen_range(0..pool.len());
        let candidate = pool.swap_remove(j);
        let pos = dataset.point(candidate).coords();
        if held.iter().any(|&h| dataset.point(h).coords() == pos) {
            continue;
        }
        held.push(candidate);
    }
    Ok(Seeds::from_indices(dataset, held, InitMethod::Random))
}

/// k-means++: first center uniform over the data, every next center drawn
/// with probability proportional to the squared distance to its nearest
/// chosen center. Points coincident with a chosen center have weight zero
/// and can never be drawn.
pub fn kmeanspp_init(dataset: &Dataset, k: usize, rng: &mut RngStream) -> Result<Seeds> {
    check_k(dataset, k)?;
    let first = rng.gen_range(0..dataset.len());
    kmeanspp_from(dataset, k, first, rng)
}

/// k-means++ with the first center pinned to a given row; the remaining
/// centers follow the same D² sampling. Useful for distribution tests.
pub fn kmeanspp_init_with_first(
    dataset: &Dataset,
    k: usize,
    first: usize,
    rng: &mut RngStream,
) -> Result<Seeds> {
    check_k(dataset, k)?;
    check_first(dataset, first)?;
    kmeanspp_from(dataset, k, first, rng)
}

fn kmeanspp_from(
    dataset: &Dataset,
    k: usize,
    first: usize,
    rng: &mut RngStream,
) -> Result<Seeds> {
    let mut chosen = vec![first];
    let mut d2 = distances_sq_to(dataset, first);
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            // unreachable while k <= distinct positions; guarded regardless
            return Err(Error::InsufficientDistinctPoints {
                k,
                distinct: dataset.distinct_count(),
            });
        }
        // inversion sampling: walk the weights until the draw is spent
        let mut target = rng.gen::<f64>() * total;
        let mut pick = None;
        for (i, &w) in d2.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            if target < w {
                pick = Some(i);
                break;
            }
            target -= w;
        }
        let next = match pick {
            Some(i) => i,
            // rounding at the upper boundary: take the last positive weight
            None => d2.iter().rposition(|&w| w > 0.0).expect("total > 0"),
        };
        chosen.push(next);
        update_d2(dataset, &mut d2, next);
    }
    Ok(Seeds::from_indices(dataset, chosen, InitMethod::KMeansPlusPlus))
}

/// Maxmin: first center uniform over the data, every next center the point
/// with the largest distance to its nearest chosen center (ties break to
/// the lowest row).
pub fn maxmin_init(dataset: &Dataset, k: usize, rng: &mut RngStream) -> Result<Seeds> {
    check_k(dataset, k)?;
    let first = rng.gen_range(0..dataset.len());
    maxmin_from(dataset, k, first)
}

/// Maxmin with the first center pinned; the rest of the selection is
/// deterministic.
pub fn maxmin_init_with_first(dataset: &Dataset, k: usize, first: usize) -> Result<Seeds> {
    check_k(dataset, k)?;
    check_first(dataset, first)?;
    maxmin_from(dataset, k, first)
}

fn maxmin_from(dataset: &Dataset, k: usize, first: usize) -> Result<Seeds> {
    let mut chosen = vec![first];
    let mut d2 = distances_sq_to(dataset, first);
    while chosen.len() < k {
        let mut best = 0usize;
        let mut best_w = f64::NEG_INFINITY;
        for (i, &w) in d2.iter().enumerate() {
            if w > best_w {
                best = i;
                best_w = w;
            }
        }
        if best_w <= 0.0 {
            return Err(Error::InsufficientDistinctPoints {
                k,
                distinct: dataset.distinct_count(),
            });
        }
        chosen.push(best);
        update_d2(dataset, &mut d2, best);
    }
    Ok(Seeds::from_indices(dataset, chosen, InitMethod::Maxmin))
}

fn distances_sq_to(dataset: &Dataset, index: usize) -> Vec<f64> {
    let center = dataset.point(index).coords();
    dataset
        .points()
        .iter()
        .map(|p| sq_dist(p.coords(), center))
        .collect()
}

fn update_d2(dataset: &Dataset, d2: &mut [f64], new_center: usize) {
    let center = dataset.point(new_center).coords();
    for (w, p) in d2.iter_mut().zip(dataset.points()) {
        let d = sq_dist(p.coords(), center);
        if d < *w {
            *w = d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn line() -> Dataset {
        Dataset::from_rows("line", vec![vec![0.0], vec![1.0], vec![10.0]]).unwrap()
    }

    fn stream(seed: u64) -> RngStream {
        RngStream::new(seed, 0)
    }

    #[test]
    fn random_init_with_n_equal_k_is_forced() {
        let ds = line();
        let seeds = random_init(&ds, 3, &mut stream(5)).unwrap();
        let mut idx = seeds.source_indices().to_vec();
        idx.sort_unstable();
        assert_eq!(idx, [0, 1, 2]);
    }

    #[test]
    fn random_init_rejects_duplicate_only_dataset() {
        let ds = Dataset::from_rows("dup", vec![vec![7.0]; 3]).unwrap();
        assert!(matches!(
            random_init(&ds, 2, &mut stream(1)),
            Err(Error::InsufficientDistinctPoints { .. })
        ));
    }

    #[test]
    fn random_init_single_draw_covers_all_rows() {
        let ds = Dataset::from_rows(
            "d",
            (0..5).map(|i| vec![i as f64]).collect::<Vec<_>>(),
        )
        .unwrap();
        let mut counts = [0usize; 5];
        let mut rng = stream(99);
        for _ in 0..5000 {
            let s = random_init(&ds, 1, &mut rng).unwrap();
            counts[s.source_indices()[0]] += 1;
        }
        // crude uniformity: every row within 3 sigma of 1000
        for &c in &counts {
            assert!((c as f64 - 1000.0).abs() < 3.0 * (1000.0f64 * 0.8).sqrt() + 60.0, "{counts:?}");
        }
    }

    #[test]
    fn kmeanspp_second_center_frequencies_follow_d_squared() {
        // centers at 0; candidates 1 and 2 carry weights 1 and 4
        let ds = Dataset::from_rows("d", vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let mut rng = stream(7);
        let mut picked_two = 0usize;
        let trials = 20_000;
        for _ in 0..trials {
            let s = kmeanspp_init_with_first(&ds, 2, 0, &mut rng).unwrap();
            if s.source_indices()[1] == 2 {
                picked_two += 1;
            }
        }
        let freq = picked_two as f64 / trials as f64;
        assert!((freq - 0.8).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn kmeanspp_never_picks_duplicate_of_chosen_center() {
        let ds = Dataset::from_rows("d", vec![vec![0.0], vec![0.0], vec![1.0]]).unwrap();
        let mut rng = stream(3);
        for _ in 0..200 {
            let s = kmeanspp_init_with_first(&ds, 2, 0, &mut rng).unwrap();
            assert_eq!(s.source_indices()[1], 2);
        }
    }

    #[test]
    fn kmeanspp_far_point_dominates_sampling() {
        // after a center at 0, P(10) = 100/101
        let ds = line();
        let mut rng = stream(11);
        let trials = 20_000;
        let far = (0..trials)
            .filter(|_| {
                kmeanspp_init_with_first(&ds, 2, 0, &mut rng).unwrap().source_indices()[1] == 2
            })
            .count();
        let freq = far as f64 / trials as f64;
        assert!((freq - 100.0 / 101.0).abs() < 0.005, "freq {freq}");
    }

    #[test]
    fn maxmin_picks_farthest_then_only_candidate() {
        let ds = line();
        let s = maxmin_init_with_first(&ds, 2, 0).unwrap();
        assert_eq!(s.source_indices(), [0, 2]);
        let s = maxmin_init_with_first(&ds, 3, 0).unwrap();
        assert_eq!(s.source_indices(), [0, 2, 1]);
    }

    #[test]
    fn maxmin_with_n_equal_k_selects_everything() {
        let ds = line();
        let mut idx = maxmin_init_with_first(&ds, 3, 1).unwrap().source_indices().to_vec();
        idx.sort_unstable();
        assert_eq!(idx, [0, 1, 2]);
    }

    #[test]
    fn same_stream_replays_identical_seeds() {
        let ds = Dataset::from_rows(
            "d",
            (0..40).map(|i| vec![(i * 7 % 13) as f64, (i % 5) as f64]).collect::<Vec<_>>(),
        )
        .unwrap();
        for init in [random_init, kmeanspp_init, maxmin_init] {
            let a = init(&ds, 4, &mut RngStream::new(21, 2)).unwrap();
            let b = init(&ds, 4, &mut RngStream::new(21, 2)).unwrap();
            assert_eq!(a, b);
        }
    }

    fn gridded_dataset(seed: u64) -> Dataset {
        // small integer grid so duplicate rows are common
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..40);
        let m = rng.gen_range(1..3);
        Dataset::from_rows(
            "grid",
            (0..n)
                .map(|_| (0..m).map(|_| rng.gen_range(0..4) as f64).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    proptest! {
        // every initializer returns k distinct indices at k distinct positions
        #[test]
        fn initializers_return_distinct_positions(seed in any::<u64>(), k_raw in 1usize..8) {
            use rand::Rng;
            let ds = gridded_dataset(seed);
            let k = k_raw.min(ds.distinct_count());
            let mut rng = RngStream::new(seed, 1);
            let unc = crate::unc::select_seeds_unc(&ds, k).unwrap();
            for seeds in [
                random_init(&ds, k, &mut rng).unwrap(),
                kmeanspp_init(&ds, k, &mut rng).unwrap(),
                maxmin_init(&ds, k, &mut rng).unwrap(),
                unc,
            ] {
                prop_assert_eq!(seeds.k(), k);
                let mut idx = seeds.source_indices().to_vec();
                idx.sort_unstable();
                idx.dedup();
                prop_assert_eq!(idx.len(), k);
                let mut pos: Vec<Vec<u64>> = seeds
                    .centers()
                    .iter()
                    .map(|c| c.coords().iter().map(|x| x.to_bits()).collect())
                    .collect();
                pos.sort();
                pos.dedup();
                prop_assert_eq!(pos.len(), k);
                let _ = rng.gen::<u64>();
            }
        }

        // the maintained D(x) table always equals a from-scratch recomputation
        #[test]
        fn d2_maintenance_matches_recomputation(seed in any::<u64>(), k_raw in 2usize..6) {
            let ds = gridded_dataset(seed);
            let k = k_raw.min(ds.distinct_count());
            let mut rng = RngStream::new(seed, 9);
            let seeds = kmeanspp_init(&ds, k, &mut rng).unwrap();
            let mut d2 = distances_sq_to(&ds, seeds.source_indices()[0]);
            for step in 1..k {
                update_d2(&ds, &mut d2, seeds.source_indices()[step]);
                for (i, p) in ds.points().iter().enumerate() {
                    let exact = seeds.source_indices()[..=step]
                        .iter()
                        .map(|&c| sq_dist(p.coords(), ds.point(c).coords()))
                        .fold(f64::INFINITY, f64::min);
                    prop_assert_eq!(d2[i], exact);
                }
            }
        }
    }
}
