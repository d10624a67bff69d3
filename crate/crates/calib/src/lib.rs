//! LiDAR intrinsic calibration with shape-preserving Sim(3) transforms.
//!
//! The calibration parameter of each point collection (a ring of a spinning
//! LiDAR, a quarter arc, or a grid cell of a solid-state sensor) is modeled
//! as an element of Sim(3) — rotation, translation and a uniform scale. The
//! optimum is the transform minimizing the squared point-to-plane distance of
//! the collection against a set of planar calibration targets.
//!
//! The crate provides:
//!
//! * [`liegroup`] — value types for SO(3)/SE(3)/Sim(3) and the spherical
//!   coordinate maps used by the physics-based baselines.
//! * [`scene`] — planar targets, scene generators (oriented tetrahedron,
//!   complex validation scenes, the degenerate three-target configuration)
//!   and the target-placement checks that guarantee a unique calibration.
//! * [`simulator`] — ray-cast returns for spinning and optical-phased-array
//!   models, with per-collection perturbations and systematic range offsets.
//! * [`parsing`] — splitting raw returns into point collections and
//!   estimating target planes from data.
//! * [`cost`] — point-to-plane metrics and the quadratic forms consumed by
//!   the global solver.
//! * [`solvers`] — the two spherical-coordinate baseline calibrators, the
//!   global Sim(3) solver (scalar bisection over scale with a certified
//!   semidefinite inner solve on SE(3)), and the alternating
//!   plane/parameter refinement loop.

pub mod cost;
pub mod error;
pub mod liegroup;
mod optim;
pub mod parsing;
pub mod scene;
pub mod simulator;
pub mod solvers;

pub use error::CalibError;
pub use liegroup::{RigidTransform, Rotation, SimilarityTransform, SphericalPoint};
pub use scene::{PlacementReport, PlanarTarget, Scene};
pub use simulator::{LabeledReturn, LidarModel, Perturbation};
pub use solvers::{CalibrationResult, SdpCertificate};
