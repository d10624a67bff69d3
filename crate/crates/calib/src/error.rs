//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalibError {
    /// Zero-norm vector where a direction was required.
    #[error("degenerate point: zero norm, spherical coordinates undefined")]
    DegeneratePoint,

    /// A vector expected to be unit length was not.
    #[error("normal vector is not unit length (norm = {norm})")]
    NormalizationError { norm: f64 },

    /// Plane/plane/ring intersection system is numerically singular.
    #[error("degenerate intersection for targets ({i}, {j}): condition number {cond:.3e}")]
    DegenerateIntersection { i: usize, j: usize, cond: f64 },

    /// Scene construction produced a target violating the placement rules.
    #[error("target placement failure: {0}")]
    PlacementError(String),

    /// Simulation was requested on a scene without targets.
    #[error("scene contains no targets")]
    EmptyScene,

    /// Parsing was requested on an empty point set.
    #[error("no input points")]
    EmptyInput,

    /// Target fitting did not converge; the payload carries the best cost seen.
    #[error("target fit failed to converge (best cost {best_cost})")]
    FitFailed { best_cost: f64 },

    /// Plane fit on rank-deficient (collinear) data.
    #[error("rank-deficient point set: no unique plane")]
    RankDeficient,

    /// The translation block of the quadratic form is singular, e.g. fewer
    /// than three independent target normals constrain the problem.
    #[error("translation unobservable: normal span has rank {rank}")]
    TranslationUnobservable { rank: usize },

    /// The semidefinite relaxation did not certify a global optimum.
    #[error("solution not certified: duality gap {gap:.3e}")]
    NotCertified { gap: f64 },

    /// f(s) is flat over the scale bracket; the scene cannot pin down s.
    #[error("scale unidentifiable: f(s) varies by {variation:.3e} over the bracket")]
    ScaleUnidentifiable { variation: f64 },

    /// Iterative refinement stopped making progress.
    #[error("refinement oscillated: vertex displacement non-decreasing for {stalled_iters} iterations")]
    ConvergenceWarning { stalled_iters: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CalibError>;
