//! Circumscribing circles and spheres.
//!
//! Fits interpolate exactly through a well-conditioned seed subset (three
//! points for a circle, four for a sphere) and then report the largest
//! deviation of the remaining points, so that near misses are flagged
//! rather than averaged away.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::config::SHAPE_RTOL;
use crate::error::{Error, Result};
use crate::Vec3;

/// Points are co-circular / co-spherical when the fit deviation is at most
/// this fraction of the radius.
pub const FIT_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleFit {
    pub center: Vec3,
    pub radius: f64,
    /// Unit plane normal, oriented so its last non-negligible component is positive.
    pub normal: Vec3,
    /// Largest distance from any input point to the fitted circle.
    pub max_deviation: f64,
}

impl CircleFit {
    pub fn is_cocircular(&self) -> bool {
        self.max_deviation <= FIT_RTOL * self.radius
    }

    /// Orthonormal in-plane basis `(u, v)` with `u × v = normal`.
    pub fn plane_basis(&self, toward: &Vec3) -> (Vec3, Vec3) {
        let d = toward - self.center;
        let u = (d - self.normal * d.dot(&self.normal)).normalize();
        let v = self.normal.cross(&u);
        (u, v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereFit {
    pub center: Vec3,
    pub radius: f64,
    /// Largest `| |p - center| - radius |` over the input.
    pub max_deviation: f64,
    /// The points lie on a circle; such sets are not called co-spherical.
    pub is_planar: bool,
}

impl SphereFit {
    pub fn is_cospherical(&self) -> bool {
        !self.is_planar && self.max_deviation <= FIT_RTOL * self.radius
    }
}

fn orient(n: Vec3) -> Vec3 {
    let key = [n.z, n.y, n.x]
        .into_iter()
        .find(|c| c.abs() > 1e-12)
        .unwrap_or(1.0);
    if key < 0.0 {
        -n
    } else {
        n
    }
}

/// Indices of a well-spread triangle: the first point, the point farthest
/// from it, and the point farthest from the line through those two.
fn seed_triangle(points: &[Vec3]) -> Option<(usize, usize, usize, Vec3)> {
    let a = 0;
    let b = (0..points.len()).max_by(|&i, &j| {
        let di = (points[i] - points[a]).norm();
        let dj = (points[j] - points[a]).norm();
        di.total_cmp(&dj)
    })?;
    let ab = points[b] - points[a];
    if ab.norm() == 0.0 {
        return None;
    }
    let (c, cross) = (0..points.len())
        .map(|k| (k, ab.cross(&(points[k] - points[a]))))
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    let ac = points[c] - points[a];
    if cross.norm() <= SHAPE_RTOL * ab.norm() * ac.norm().max(ab.norm()) {
        return None;
    }
    Some((a, b, c, orient(cross.normalize())))
}

/// Normal of the best-conditioned plane through three of the points, or
/// `None` for collinear input.
pub(crate) fn best_normal(points: &[Vec3]) -> Option<Vec3> {
    seed_triangle(points).map(|t| t.3)
}

fn circumcenter(a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    let u = a - c;
    let v = b - c;
    let w = u.cross(&v);
    c + (v * u.norm_squared() - u * v.norm_squared()).cross(&w) / (2.0 * w.norm_squared())
}

pub fn fit_circumcircle(points: &[Vec3]) -> Result<CircleFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(
            "a circumcircle needs at least three points".into(),
        ));
    }
    let (a, b, c, normal) = seed_triangle(points).ok_or(Error::NoCircumcircle)?;
    let center = circumcenter(&points[a], &points[b], &points[c]);
    let radius = (points[a] - center).norm();
    let max_deviation = points
        .iter()
        .map(|p| {
            let d = p - center;
            let height = d.dot(&normal);
            let radial = (d - normal * height).norm();
            (height * height + (radial - radius).powi(2)).sqrt()
        })
        .fold(0.0, f64::max);
    Ok(CircleFit {
        center,
        radius,
        normal,
        max_deviation,
    })
}

pub fn fit_circumsphere(points: &[Vec3]) -> Result<SphereFit> {
    if points.len() < 4 {
        return Err(Error::InvalidArgument(
            "a circumsphere needs at least four points".into(),
        ));
    }
    let (a, b, c, normal) = seed_triangle(points).ok_or(Error::NoCircumsphere)?;
    let scale = (points[b] - points[a]).norm();
    let (d, height) = (0..points.len())
        .map(|k| (k, (points[k] - points[a]).dot(&normal).abs()))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty");

    if height <= SHAPE_RTOL * scale {
        let circle = fit_circumcircle(points)?;
        if !circle.is_cocircular() {
            return Err(Error::NoCircumsphere);
        }
        return Ok(SphereFit {
            center: circle.center,
            radius: circle.radius,
            max_deviation: circle.max_deviation,
            is_planar: true,
        });
    }

    // 2 (p_k - p_a) · x = |p_k - p_a|², with x relative to p_a.
    let origin = points[a];
    let rows = [b, c, d].map(|k| points[k] - origin);
    let m = Matrix3::from_rows(&[rows[0].transpose(), rows[1].transpose(), rows[2].transpose()]) * 2.0;
    let rhs = Vec3::new(rows[0].norm_squared(), rows[1].norm_squared(), rows[2].norm_squared());
    let rel = m.lu().solve(&rhs).ok_or(Error::NoCircumsphere)?;
    let center = origin + rel;
    let radius = rel.norm();
    let max_deviation = points
        .iter()
        .map(|p| ((p - center).norm() - radius).abs())
        .fold(0.0, f64::max);
    Ok(SphereFit {
        center,
        radius,
        max_deviation,
        is_planar: false,
    })
}
