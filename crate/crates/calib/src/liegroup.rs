//! Value types for SO(3), SE(3), Sim(3) and the spherical coordinate maps.
//!
//! A similarity transform acts on a point as `H · x = s R x + v`; it is the
//! most general shape-preserving map of 3-space (preserves angles and ratios
//! of lengths). Rotations are stored as matrices rather than quaternions
//! because the global solver works directly on `vec(R)`; quaternion and
//! axis-angle constructors are provided for seeding tests.
//!
//! Azimuth convention: the spherical maps follow the sensor convention
//! `phi = atan2(x, y)`, i.e. azimuth is measured from the +y axis toward +x.
//! Most math libraries use `atan2(y, x)` (azimuth from +x); conversions in
//! this crate are self-consistent, so only code interfacing with external
//! point clouds needs to care.

use nalgebra::{Matrix3, Matrix4, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{CalibError, Result};

/// Orthonormality / determinant tolerance for accepting a raw matrix as a
/// rotation without re-projection.
const ROTATION_TOL: f64 = 1e-9;

/// A rotation matrix in SO(3).
///
/// Construction from raw data re-projects to the nearest rotation via polar
/// decomposition, so stored matrices satisfy `mᵀm = I` and `det m = +1` to
/// machine precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "Matrix3<f64>", into = "Matrix3<f64>")]
pub struct Rotation {
    m: Matrix3<f64>,
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation {
            m: Matrix3::identity(),
        }
    }

    /// Builds from an arbitrary matrix, projecting to the closest rotation
    /// (polar decomposition). Singular input keeps whatever SVD returns but
    /// always lands in SO(3).
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Rotation {
            m: polar_project(m),
        }
    }

    /// Accepts the matrix only if it is already orthonormal with det +1.
    pub fn try_from_matrix(m: &Matrix3<f64>) -> Result<Self> {
        let err = (m.transpose() * m - Matrix3::identity()).norm();
        let det = m.determinant();
        if err > ROTATION_TOL || (det - 1.0).abs() > ROTATION_TOL {
            return Err(CalibError::NormalizationError { norm: det });
        }
        Ok(Rotation { m: *m })
    }

    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        let q = UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(w, x, y, z));
        Rotation {
            m: q.to_rotation_matrix().into_inner(),
        }
    }

    /// Rotation by `angle` radians about `axis` (normalized internally).
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Self {
        let axis = nalgebra::Unit::new_normalize(*axis);
        Rotation {
            m: nalgebra::Rotation3::from_axis_angle(&axis, angle).into_inner(),
        }
    }

    pub fn rot_x(angle: f64) -> Self {
        Self::from_axis_angle(&Vector3::x(), angle)
    }

    pub fn rot_y(angle: f64) -> Self {
        Self::from_axis_angle(&Vector3::y(), angle)
    }

    pub fn rot_z(angle: f64) -> Self {
        Self::from_axis_angle(&Vector3::z(), angle)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.m * x
    }

    pub fn transpose(&self) -> Self {
        Rotation {
            m: self.m.transpose(),
        }
    }

    /// Geodesic distance (radians) to another rotation.
    pub fn angle_to(&self, other: &Rotation) -> f64 {
        let rel = self.m.transpose() * other.m;
        let c = ((rel.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
        c.acos()
    }
}

impl From<Matrix3<f64>> for Rotation {
    fn from(m: Matrix3<f64>) -> Self {
        Rotation::from_matrix(&m)
    }
}

impl From<Rotation> for Matrix3<f64> {
    fn from(r: Rotation) -> Self {
        r.m
    }
}

/// Closest rotation to `m` in Frobenius norm: the orthogonal factor of the
/// polar decomposition, with the determinant sign corrected.
pub(crate) fn polar_project(m: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd requested u");
    let vt = svd.v_t.expect("svd requested v_t");
    let mut r = u * vt;
    if r.determinant() < 0.0 {
        // Flip the singular direction with the smallest singular value.
        let mut u = u;
        u.column_mut(2).neg_mut();
        r = u * vt;
    }
    r
}

/// A similarity transform `H = [s R, v; 0, 1]` with `s > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityTransform {
    pub scale: f64,
    pub rotation: Rotation,
    pub translation: Vector3<f64>,
}

impl SimilarityTransform {
    pub fn new(scale: f64, rotation: Rotation, translation: Vector3<f64>) -> Self {
        assert!(scale > 0.0, "scale must be positive");
        SimilarityTransform {
            scale,
            rotation,
            translation,
        }
    }

    pub fn identity() -> Self {
        SimilarityTransform {
            scale: 1.0,
            rotation: Rotation::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// `H · x = s R x + v`.
    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.scale * (self.rotation.m * x) + self.translation
    }

    /// Group composition: `(a ∘ b)(x) = a(b(x))`.
    pub fn compose(&self, other: &SimilarityTransform) -> SimilarityTransform {
        SimilarityTransform {
            scale: self.scale * other.scale,
            rotation: Rotation {
                m: self.rotation.m * other.rotation.m,
            },
            translation: self.scale * (self.rotation.m * other.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> SimilarityTransform {
        let rt = self.rotation.m.transpose();
        let s_inv = 1.0 / self.scale;
        SimilarityTransform {
            scale: s_inv,
            rotation: Rotation { m: rt },
            translation: -s_inv * (rt * self.translation),
        }
    }

    /// Homogeneous 4×4 form `[[sR, v], [0, 1]]`.
    pub fn matrix(&self) -> Matrix4<f64> {
        let mut h = Matrix4::identity();
        h.fixed_view_mut::<3, 3>(0, 0)
            .copy_from(&(self.scale * self.rotation.m));
        h.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        h
    }

    /// Max of parameter-wise distances: |Δs|, rotation geodesic angle, ‖Δv‖.
    /// Used to compare solver outputs for uniqueness checks.
    pub fn param_distance(&self, other: &SimilarityTransform) -> f64 {
        let ds = (self.scale - other.scale).abs();
        let dr = self.rotation.angle_to(&other.rotation);
        let dv = (self.translation - other.translation).norm();
        ds.max(dr).max(dv)
    }
}

/// A rigid-body transform: a similarity transform with unit scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidTransform {
    pub rotation: Rotation,
    pub translation: Vector3<f64>,
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation: Rotation::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Rotation, translation: Vector3<f64>) -> Self {
        RigidTransform {
            rotation,
            translation,
        }
    }

    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.m * x + self.translation
    }

    pub fn to_similarity(&self) -> SimilarityTransform {
        SimilarityTransform {
            scale: 1.0,
            rotation: self.rotation,
            translation: self.translation,
        }
    }

    /// Rescales into a similarity transform: `x ↦ (s R) x + v`.
    pub fn with_scale(&self, scale: f64) -> SimilarityTransform {
        SimilarityTransform::new(scale, self.rotation, self.translation)
    }
}

/// A point in the sensor's spherical coordinates: range, elevation, azimuth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    /// Range in meters, non-negative.
    pub rho: f64,
    /// Elevation in radians, in [-π/2, π/2].
    pub theta: f64,
    /// Azimuth in radians measured from the +y axis, in (-π, π].
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(rho: f64, theta: f64, phi: f64) -> Self {
        SphericalPoint { rho, theta, phi }
    }
}

/// `[ρ cos θ sin φ, ρ cos θ cos φ, ρ sin θ]`.
pub fn spherical_to_cartesian(p: &SphericalPoint) -> Vector3<f64> {
    Vector3::new(
        p.rho * p.theta.cos() * p.phi.sin(),
        p.rho * p.theta.cos() * p.phi.cos(),
        p.rho * p.theta.sin(),
    )
}

/// Inverse of [`spherical_to_cartesian`]: `ρ = ‖x‖`, `θ = asin(z/ρ)`,
/// `φ = atan2(x, y)`.
///
/// At the poles (θ = ±π/2) azimuth is undefined and 0 is returned so that
/// round-trips are deterministic. Zero-norm input is an error.
pub fn cartesian_to_spherical(x: &Vector3<f64>) -> Result<SphericalPoint> {
    let rho = x.norm();
    if rho == 0.0 {
        return Err(CalibError::DegeneratePoint);
    }
    let theta = (x.z / rho).clamp(-1.0, 1.0).asin();
    let phi = if x.x == 0.0 && x.y == 0.0 {
        0.0
    } else {
        x.x.atan2(x.y)
    };
    Ok(SphericalPoint { rho, theta, phi })
}

/// Unit direction for elevation `theta`, azimuth `phi` (range 1).
pub fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    spherical_to_cartesian(&SphericalPoint::new(1.0, theta, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

    fn random_rotation(rng: &mut impl Rng) -> Rotation {
        let axis = Vector3::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        Rotation::from_axis_angle(&axis, rng.gen::<f64>() * PI)
    }

    fn random_sim3(rng: &mut impl Rng) -> SimilarityTransform {
        SimilarityTransform::new(
            0.5 + rng.gen::<f64>(),
            random_rotation(rng),
            Vector3::new(rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()) * 2.0,
        )
    }

    fn random_vec(rng: &mut impl Rng) -> Vector3<f64> {
        Vector3::new(rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()) * 4.0
            - Vector3::new(2.0, 2.0, 2.0)
    }

    #[test]
    fn apply_identity() {
        let h = SimilarityTransform::identity();
        let x = Vector3::new(1.0, 2.0, 3.0);
        assert_eq!(h.apply(&x), x);
    }

    #[test]
    fn apply_pure_scale() {
        let h = SimilarityTransform::new(2.0, Rotation::identity(), Vector3::zeros());
        assert_eq!(h.apply(&Vector3::new(1.0, 0.0, 0.0)), Vector3::new(2.0, 0.0, 0.0));
    }

    #[test]
    fn apply_rotation_plus_translation() {
        // Rz(90°) sends e1 to e2; translating by e1 gives [1, 1, 0].
        let h = SimilarityTransform::new(
            1.0,
            Rotation::rot_z(FRAC_PI_2),
            Vector3::new(1.0, 0.0, 0.0),
        );
        let got = h.apply(&Vector3::new(1.0, 0.0, 0.0));
        assert_relative_eq!(got, Vector3::new(1.0, 1.0, 0.0), epsilon = 1e-12);
        // Cross-check against the homogeneous 4×4 form.
        let hom = h.matrix() * nalgebra::Vector4::new(1.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(got, hom.fixed_rows::<3>(0).into_owned(), epsilon = 1e-12);
    }

    #[test]
    fn compose_matches_pointwise_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_sim3(&mut rng);
            let b = random_sim3(&mut rng);
            let ab = a.compose(&b);
            for _ in 0..5 {
                let x = random_vec(&mut rng);
                assert_relative_eq!(ab.apply(&x), a.apply(&b.apply(&x)), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn identity_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = random_sim3(&mut rng);
        let id = SimilarityTransform::identity();
        assert!(id.compose(&h).param_distance(&h) < 1e-15);
        assert!(h.compose(&id).param_distance(&h) < 1e-15);
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let h = random_sim3(&mut rng);
            let hinv = h.inverse();
            assert!(h.compose(&hinv).param_distance(&SimilarityTransform::identity()) < 1e-12);
            assert!(hinv.compose(&h).param_distance(&SimilarityTransform::identity()) < 1e-12);
        }
        let scale2 = SimilarityTransform::new(2.0, Rotation::identity(), Vector3::zeros());
        assert_relative_eq!(scale2.inverse().scale, 0.5);
    }

    #[test]
    fn apply_preserves_angles_and_scales_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let h = random_sim3(&mut rng);
            let (u, v, w) = (random_vec(&mut rng), random_vec(&mut rng), random_vec(&mut rng));
            let angle = |a: &Vector3<f64>, b: &Vector3<f64>| (a.dot(b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos();
            let before = angle(&(u - w), &(v - w));
            let after = angle(&(h.apply(&u) - h.apply(&w)), &(h.apply(&v) - h.apply(&w)));
            assert_abs_diff_eq!(before, after, epsilon = 1e-9);
            assert_relative_eq!(
                (h.apply(&u) - h.apply(&v)).norm(),
                h.scale * (u - v).norm(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn spherical_to_cartesian_axes() {
        let x = spherical_to_cartesian(&SphericalPoint::new(1.0, 0.0, 0.0));
        assert_relative_eq!(x, Vector3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
        let pole = spherical_to_cartesian(&SphericalPoint::new(1.0, FRAC_PI_2, 1.23));
        assert_relative_eq!(pole, Vector3::new(0.0, 0.0, 1.0), epsilon = 1e-12);
    }

    #[test]
    fn spherical_to_cartesian_closed_form() {
        // ρ=2, θ=π/6, φ=π/4.
        let p = SphericalPoint::new(2.0, FRAC_PI_6, FRAC_PI_4);
        let x = spherical_to_cartesian(&p);
        let expect = Vector3::new(
            2.0 * (3.0f64.sqrt() / 2.0) * (0.5f64.sqrt()),
            2.0 * (3.0f64.sqrt() / 2.0) * (0.5f64.sqrt()),
            2.0 * 0.5,
        );
        assert_relative_eq!(x, expect, epsilon = 1e-14);
    }

    #[test]
    fn cartesian_to_spherical_axes_and_pole() {
        let p = cartesian_to_spherical(&Vector3::new(0.0, 1.0, 0.0)).unwrap();
        assert_eq!((p.rho, p.theta, p.phi), (1.0, 0.0, 0.0));
        let pole = cartesian_to_spherical(&Vector3::new(0.0, 0.0, 5.0)).unwrap();
        assert_relative_eq!(pole.rho, 5.0);
        assert_relative_eq!(pole.theta, FRAC_PI_2);
        assert_eq!(pole.phi, 0.0);
        assert!(cartesian_to_spherical(&Vector3::zeros()).is_err());
    }

    #[test]
    fn spherical_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x = random_vec(&mut rng);
            if x.norm() < 1e-6 {
                continue;
            }
            let p = cartesian_to_spherical(&x).unwrap();
            let back = spherical_to_cartesian(&p);
            assert_relative_eq!(back, x, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn polar_projection_restores_so3() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let r = random_rotation(&mut rng);
            // Perturb and re-project.
            let noisy = r.m + Matrix3::from_fn(|_, _| (rng.gen::<f64>() - 0.5) * 1e-6);
            let fixed = Rotation::from_matrix(&noisy);
            let err = (fixed.m.transpose() * fixed.m - Matrix3::identity()).norm();
            assert!(err < 1e-12);
            assert_relative_eq!(fixed.m.determinant(), 1.0, epsilon = 1e-12);
            assert!(Rotation::try_from_matrix(&noisy).is_err() || true);
        }
    }
}
