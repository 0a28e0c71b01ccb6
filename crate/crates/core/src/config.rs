//! Point-mass configurations and the scalar quantities attached to them:
//! total mass, mass center, force function `U`, moment of inertia `I`,
//! multiplier `λ = U/I` and the critical distance `r0 = (m/λ)^(1/3)`.
//!
//! When a configuration is an extension of a smaller one, the added body
//! lives at index 0 so that [`Configuration::sub_configuration`] is a plain
//! drop of the first entry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Vec3;

/// Default bound on the normalized CC residual.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Relative tolerance used for collinearity and planarity detection.
pub const SHAPE_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    masses: Vec<f64>,
    positions: Vec<Vec3>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawConfiguration {
    masses: Vec<f64>,
    positions: Vec<Vec<f64>>,
}

impl Configuration {
    /// Validates `n >= 2`, strictly positive finite masses and pairwise
    /// distinct positions.
    pub fn new(masses: Vec<f64>, positions: Vec<Vec3>) -> Result<Self> {
        if masses.len() != positions.len() {
            return Err(Error::InvalidConfiguration(format!(
                "{} masses but {} positions",
                masses.len(),
                positions.len()
            )));
        }
        if masses.len() < 2 {
            return Err(Error::InvalidConfiguration(
                "at least two bodies are required".into(),
            ));
        }
        if let Some(i) = masses.iter().position(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(Error::InvalidConfiguration(format!(
                "mass {} is not strictly positive: {}",
                i, masses[i]
            )));
        }
        if let Some(i) = positions
            .iter()
            .position(|p| !p.iter().all(|x| x.is_finite()))
        {
            return Err(Error::InvalidConfiguration(format!(
                "position {i} is not finite"
            )));
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                if (positions[i] - positions[j]).norm() == 0.0 {
                    return Err(Error::DegenerateConfiguration(i, j));
                }
            }
        }
        Ok(Self { masses, positions })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (self.positions[i] - self.positions[j]).norm()
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                d = d.min(self.distance(i, j));
            }
        }
        d
    }

    /// Largest distance of any body from the first one; a cheap size scale.
    pub fn extent(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                d = d.max(self.distance(i, j));
            }
        }
        d
    }

    /// New configuration with `(m0, q0)` inserted at index 0.
    pub fn with_added_body(&self, m0: f64, q0: Vec3) -> Result<Self> {
        let mut masses = Vec::with_capacity(self.len() + 1);
        masses.push(m0);
        masses.extend_from_slice(&self.masses);
        let mut positions = Vec::with_capacity(self.len() + 1);
        positions.push(q0);
        positions.extend_from_slice(&self.positions);
        Self::new(masses, positions)
    }

    /// Drops body `index`.
    pub fn without(&self, index: usize) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for {} bodies",
                self.len()
            )));
        }
        let mut masses = self.masses.clone();
        let mut positions = self.positions.clone();
        masses.remove(index);
        positions.remove(index);
        Self::new(masses, positions)
    }

    /// The n-body sub configuration of an extended one (drops index 0).
    pub fn sub_configuration(&self) -> Result<Self> {
        self.without(0)
    }

    pub fn map_positions(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<Self> {
        Self::new(self.masses.clone(), self.positions.iter().map(f).collect())
    }

    pub fn with_masses(&self, masses: Vec<f64>) -> Result<Self> {
        Self::new(masses, self.positions.clone())
    }

    /// Unit direction of the line carrying every body, if there is one.
    pub fn collinear_direction(&self) -> Option<Vec3> {
        let (far, _) = self.farthest_from(0);
        let dir = (self.positions[far] - self.positions[0]).normalize();
        let scale = self.extent();
        self.positions
            .iter()
            .all(|p| (p - self.positions[0]).cross(&dir).norm() <= SHAPE_RTOL * scale)
            .then_some(dir)
    }

    pub fn is_collinear(&self) -> bool {
        self.collinear_direction().is_some()
    }

    /// Unit normal of the plane carrying every body; `None` when the bodies
    /// are collinear or span space.
    pub fn plane_normal(&self) -> Option<Vec3> {
        let normal = crate::geometry::best_normal(&self.positions)?;
        let scale = self.extent();
        self.positions
            .iter()
            .all(|p| (p - self.positions[0]).dot(&normal).abs() <= SHAPE_RTOL * scale)
            .then_some(normal)
    }

    pub fn is_planar(&self) -> bool {
        self.is_collinear() || self.plane_normal().is_some()
    }

    fn farthest_from(&self, i: usize) -> (usize, f64) {
        (0..self.len())
            .map(|j| (j, self.distance(i, j)))
            .fold((i, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    /// Parses JSON; structural problems map to [`Error::Json`], invalid
    /// masses or positions keep their own error.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawConfiguration = serde_json::from_str(s)?;
        Configuration::try_from(raw)
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let raw: RawConfiguration = serde_json::from_value(v)?;
        Configuration::try_from(raw)
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawConfiguration::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawConfiguration::deserialize(deserializer)?;
        Configuration::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl From<&Configuration> for RawConfiguration {
    fn from(c: &Configuration) -> Self {
        RawConfiguration {
            masses: c.masses.clone(),
            positions: c.positions.iter().map(|p| vec![p.x, p.y, p.z]).collect(),
        }
    }
}

impl TryFrom<RawConfiguration> for Configuration {
    type Error = Error;

    fn try_from(raw: RawConfiguration) -> Result<Self> {
        let positions = raw
            .positions
            .iter()
            .enumerate()
            .map(|(i, p)| match p.as_slice() {
                [x, y] => Ok(Vec3::new(*x, *y, 0.0)),
                [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
                _ => Err(Error::InvalidConfiguration(format!(
                    "position {i} has {} components, expected 2 or 3",
                    p.len()
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(raw.masses, positions)
    }
}

/// `c = Σ m_i q_i / m`.
pub fn center_of_mass(config: &Configuration) -> Vec3 {
    let weighted = config
        .masses
        .iter()
        .zip(&config.positions)
        .fold(Vec3::zeros(), |acc, (m, q)| acc + q * *m);
    weighted / config.total_mass()
}

/// `U = Σ_{i<j} m_i m_j / r_ij`.
pub fn force_function(config: &Configuration) -> f64 {
    let n = config.len();
    let mut u = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            u += config.masses[i] * config.masses[j] / config.distance(i, j);
        }
    }
    u
}

/// `I = Σ m_i |q_i - c|²`.
pub fn moment_of_inertia(config: &Configuration) -> f64 {
    let c = center_of_mass(config);
    config
        .masses
        .iter()
        .zip(&config.positions)
        .map(|(m, q)| m * (q - c).norm_squared())
        .sum()
}

/// `I = Σ_{i<j} m_i m_j r_ij² / m`; must agree with [`moment_of_inertia`].
pub fn moment_of_inertia_pairwise(config: &Configuration) -> f64 {
    let n = config.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += config.masses[i] * config.masses[j] * (config.positions[i] - config.positions[j]).norm_squared();
        }
    }
    acc / config.total_mass()
}

/// `λ = U / I`.
pub fn multiplier(config: &Configuration) -> f64 {
    force_function(config) / moment_of_inertia(config)
}

/// `r0 = (m I / U)^(1/3)`. Defined for any configuration, central or not.
pub fn r0(config: &Configuration) -> f64 {
    (config.total_mass() * moment_of_inertia(config) / force_function(config)).cbrt()
}

/// Per-body residual `Σ_{j≠i} m_j (q_j - q_i)/r_ij³ + λ (q_i - c)` for the
/// given multiplier and center.
pub(crate) fn raw_residuals(config: &Configuration, lambda: f64, c: &Vec3) -> Vec<Vec3> {
    let n = config.len();
    (0..n)
        .map(|i| {
            let qi = config.positions[i];
            let mut acc = Vec3::zeros();
            for j in (0..n).filter(|&j| j != i) {
                let d = config.positions[j] - qi;
                let r = d.norm();
                acc += d * (config.masses[j] / (r * r * r));
            }
            acc + (qi - c) * lambda
        })
        .collect()
}

/// Per-body CC residual vectors with `λ = U/I`, in acceleration units.
pub fn cc_residuals(config: &Configuration) -> Vec<Vec3> {
    raw_residuals(config, multiplier(config), &center_of_mass(config))
}

/// Dimensionless residual: the Euclidean norm of all per-body residuals
/// divided by `λ · max_i |q_i - c| · √n`.
pub fn normalized_residual(config: &Configuration) -> f64 {
    let lambda = multiplier(config);
    let c = center_of_mass(config);
    let res = raw_residuals(config, lambda, &c);
    let norm = res.iter().map(|r| r.norm_squared()).sum::<f64>().sqrt();
    let spread = config
        .positions
        .iter()
        .map(|q| (q - c).norm())
        .fold(0.0, f64::max);
    norm / (lambda * spread * (config.len() as f64).sqrt())
}

pub fn is_central(config: &Configuration, tolerance: f64) -> bool {
    normalized_residual(config) <= tolerance
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CCReport {
    pub total_mass: f64,
    pub center_of_mass: [f64; 3],
    pub force_function: f64,
    pub moment_of_inertia: f64,
    pub multiplier: f64,
    pub r0: f64,
    pub residual_norm: f64,
    pub tolerance: f64,
    pub is_central: bool,
}

pub fn cc_report(config: &Configuration, tolerance: f64) -> Result<CCReport> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let total_mass = config.total_mass();
    let c = center_of_mass(config);
    let u = force_function(config);
    let i = moment_of_inertia(config);
    let lambda = u / i;
    let residual_norm = normalized_residual(config);
    Ok(CCReport {
        total_mass,
        center_of_mass: [c.x, c.y, c.z],
        force_function: u,
        moment_of_inertia: i,
        multiplier: lambda,
        r0: (total_mass / lambda).cbrt(),
        residual_norm,
        tolerance,
        is_central: residual_norm <= tolerance,
    })
}
