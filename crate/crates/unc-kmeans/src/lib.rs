//! k-means seeding by useful-nearest-center selection, with the standard
//! baselines and a reproducible benchmark harness.
//!
//! The library covers the full desk-scale clustering pipeline:
//!
//! - [`dataset`] — points, delimited-text loading, Euclidean geometry, and
//!   the SSEDM objective (within-cluster sum of squared distances to the
//!   mean).
//! - [`unc`] — deterministic seed selection driven by each point's set of
//!   useful nearest centers, plus the exact oracle form of that set.
//! - [`baseline`] — uniform random, k-means++ D² sampling, and Maxmin
//!   initializers.
//! - [`lloyd`] — assign/update refinement with empty-cluster repair.
//! - [`bench`] — seeded repeated-run experiments, JSON/CSV reports, and the
//!   `bench` CLI.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example cluster_iris          # seed + refine the bundled iris data
//! cargo run --example useful_centers        # dominance geometry walkthrough
//! cargo run --example compare_initializers  # all four seeders side by side
//! cargo run --example load_and_scale        # CSV options and feature scaling
//! cargo run --example benchmark_report      # programmatic experiment + reports
//! ```
//!
//! The same pipeline is scriptable through the thin CLI:
//!
//! ```bash
//! cargo run --bin bench -- --data crates/unc-kmeans/data/iris.csv \
//!     --drop-col 4 --k 3 --init unc,kmeanspp,maxmin,random --runs 50 \
//!     --seed 42 --out report.json
//! ```
//!
//! ## Quick start
//!
//! ```
//! use unc_kmeans::{select_seeds_unc, run_lloyd, Dataset};
//!
//! let dataset = Dataset::from_rows(
//!     "toy",
//!     vec![
//!         vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0],
//!         vec![9.0, 9.0], vec![10.0, 9.0], vec![9.0, 10.0],
//!     ],
//! )?;
//! let seeds = select_seeds_unc(&dataset, 2)?;
//! let result = run_lloyd(&dataset, &seeds, 300)?;
//! assert!(result.converged);
//! assert!(result.ssedm < 3.0);
//! # Ok::<(), unc_kmeans::Error>(())
//! ```
//!
//! Seeding is reproducible by construction: the useful-nearest-center
//! selector uses no randomness at all, and the seeded initializers draw
//! from pinned [`rng::RngStream`] streams.

pub mod baseline;
pub mod bench;
pub mod dataset;
pub mod error;
pub mod lloyd;
pub mod rng;
pub mod seeds;
pub mod unc;

pub use baseline::{
    kmeanspp_init, kmeanspp_init_with_first, maxmin_init, maxmin_init_with_first, random_init,
};
pub use bench::{run_experiment, write_report, ExperimentConfig, ExperimentReport, ReportFormat};
pub use dataset::{
    centroid, distance, load_csv, ssedm, Assignment, CsvOptions, Dataset, Point, Scaling,
};
pub use error::{Error, Result};
pub use lloyd::{assign, run_lloyd, update_centers, ClusteringResult};
pub use rng::RngStream;
pub use seeds::{InitMethod, Seeds};
pub use unc::{is_useless, select_seeds_unc, unc_exact, unc_score, UncState, UsefulCenter};
