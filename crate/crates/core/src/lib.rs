//! Partitions of point sets whose convex hulls contain the vertices of a
//! prescribed polytope: regular polygons, products of polygons, prisms,
//! axis-parallel boxes, and colored variants.
//!
//! A labeling of the points by a finite abelian group `G` produces one
//! witness point per group element. The witnesses form the polytope exactly
//! when a set of Fourier coefficients of the witness coordinates vanishes.
//! The crate turns that condition into a colorful Carathéodory problem,
//! solves it by pivoting, and certifies the answer spectrally.
//!
//! ```
//! use polytverb::{find_partition, generate_points, FindOptions, ProblemKind};
//!
//! let cloud = generate_points(2, 5, 1, 1.0).unwrap();
//! let kind = ProblemKind::Polygon { r: 3 };
//! let result = find_partition(&cloud, &kind, &FindOptions::default()).unwrap();
//! assert!(result.certificate.is_valid());
//! ```

pub mod cli;
pub mod engine;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod hull;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod problem;
pub mod reduction;
pub mod solver;
pub mod svg;

pub use engine::{find_partition, verify_result, CountPolicy, FindOptions, PartitionResult, VerifyReport};
pub use error::{Error, Result};
pub use fourier::{FiniteAbelianGroup, GroupElement, Spectrum};
pub use geometry::{
    certify_polytope, generate_points, CoordinateDecomposition, CoordinateView, PlaneFrame, PointCloud,
    PolytopeCertificate, PolytopeKind, Tolerances,
};
pub use oracle::{polytopal_partition_exists, tverberg_partition_exists, OracleOptions, OracleOutcome};
pub use problem::{build_target, required_points, AnnihilationTarget, ProblemKind, ProblemSetup};
pub use reduction::{build_map_table, MapTable};
pub use solver::{solve, SolverOptions, SolverReport, SolverStatus};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/fourier.md")]
    struct Fourier;
    #[doc = include_str!("../../../book/src/targets.md")]
    struct Targets;
    #[doc = include_str!("../../../book/src/reduction.md")]
    struct Reduction;
    #[doc = include_str!("../../../book/src/solver.md")]
    struct Solver;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
