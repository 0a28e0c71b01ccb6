//! Extending an n-body central configuration to an (n+1)-body
//! non-collinear one by adding a single body.
//!
//! With `c` the mass center, `r` the radius of the circumscribing circle or
//! sphere and `r0 = (m/λ)^(1/3)`, exactly five mechanisms exist:
//!
//! | way | sub configuration        | condition          | added body           |
//! |-----|--------------------------|--------------------|----------------------|
//! | I   | co-circular              | `c` = center       | at the center        |
//! | II  | co-circular              | `c` ≠ center, r=r0 | at the center        |
//! | III | co-circular              | `r < r0`           | on the axis, `h = √(r0²-r²)` |
//! | IV  | co-spherical             | `c` = center       | at the center        |
//! | V   | co-spherical             | `c` ≠ center, r=r0 | at the center        |
//!
//! In every case the added mass is arbitrary.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{self, Configuration, DEFAULT_TOLERANCE, SHAPE_RTOL};
use crate::error::{Error, Result};
use crate::geometry::{self, FIT_RTOL};
use crate::Vec3;

/// Relative tolerance for `c = center` and `r = r0`.
pub const EQUALITY_RTOL: f64 = 1e-10;

/// Relative tolerance for `r̄0 = r0` after an extension.
pub const R0_INVARIANCE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Way {
    I,
    II,
    III,
    IV,
    V,
}

impl fmt::Display for Way {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Way::I => "I",
            Way::II => "II",
            Way::III => "III",
            Way::IV => "IV",
            Way::V => "V",
        };
        f.write_str(s)
    }
}

impl FromStr for Way {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Way::I),
            "II" | "2" => Ok(Way::II),
            "III" | "3" => Ok(Way::III),
            "IV" | "4" => Ok(Way::IV),
            "V" | "5" => Ok(Way::V),
            _ => Err(Error::InvalidArgument(format!("unknown extension way {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApexChoice {
    #[default]
    Plus,
    Minus,
}

impl FromStr for ApexChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(ApexChoice::Plus),
            "minus" | "-" => Ok(ApexChoice::Minus),
            _ => Err(Error::InvalidArgument(format!("apex must be plus or minus, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionPlan {
    pub way: Way,
    /// One point for ways I, II, IV, V; the two mirror apexes `center ± h n`
    /// (plus first) for way III.
    pub added_positions: Vec<Vec3>,
    pub mass_free: bool,
    /// Apex height for way III, zero otherwise.
    pub height: f64,
    pub r: f64,
    pub r0: f64,
}

impl ExtensionPlan {
    fn at_center(way: Way, center: Vec3, r: f64, r0: f64) -> Self {
        ExtensionPlan {
            way,
            added_positions: vec![center],
            mass_free: true,
            height: 0.0,
            r,
            r0,
        }
    }

    pub fn position(&self, apex: ApexChoice) -> Vec3 {
        match (self.way, apex) {
            (Way::III, ApexChoice::Minus) => self.added_positions[1],
            _ => self.added_positions[0],
        }
    }
}

fn require_central(config: &Configuration) -> Result<()> {
    let res = config::normalized_residual(config);
    if res <= DEFAULT_TOLERANCE {
        Ok(())
    } else {
        Err(Error::NotCentral(res))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CExtensionCheck {
    /// All bodies are equidistant from the mass center.
    pub extends: bool,
    /// `(max - min) / max` of `|q_i - c|`.
    pub max_spread: f64,
}

/// Whether a body added at the mass center keeps the configuration central
/// (for every added mass).
pub fn check_c_extension(config: &Configuration) -> Result<CExtensionCheck> {
    require_central(config)?;
    let c = config::center_of_mass(config);
    let (lo, hi) = config
        .positions()
        .iter()
        .map(|q| (q - c).norm())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
    let max_spread = (hi - lo) / hi;
    Ok(CExtensionCheck {
        extends: max_spread <= EQUALITY_RTOL,
        max_spread,
    })
}

/// A vector perpendicular to `dir`, in the xy-plane when possible.
fn perpendicular(dir: &Vec3) -> Vec3 {
    let candidate = Vec3::z().cross(dir);
    if candidate.norm() > 1e-8 {
        candidate.normalize()
    } else {
        Vec3::x().cross(dir).normalize()
    }
}

fn classify_two_body(config: &Configuration) -> Vec<ExtensionPlan> {
    let [m1, m2] = [config.masses()[0], config.masses()[1]];
    let [q1, q2] = [config.positions()[0], config.positions()[1]];
    let d = (q2 - q1).norm();
    let r0 = config::r0(config);
    let mid = (q1 + q2) / 2.0;
    let mut plans = Vec::new();
    if (m1 - m2).abs() <= EQUALITY_RTOL * m1.max(m2) {
        plans.push(ExtensionPlan::at_center(Way::I, mid, d / 2.0, r0));
    }
    // The circumscribed circle is not unique; the one with r = r0 = d has
    // its center at the apex of an equilateral triangle on the segment.
    let apex = mid + perpendicular(&(q2 - q1).normalize()) * (d * 3f64.sqrt() / 2.0);
    plans.push(ExtensionPlan::at_center(Way::II, apex, r0, r0));
    plans
}

/// Every way in which the (central, non-collinear) configuration extends.
///
/// Two-body configurations are accepted as a special case: their
/// circumscribed circle is not unique, and the extensions are the
/// midpoint (way I, equal masses only) and the equilateral triangle (way II).
pub fn classify_extensions(config: &Configuration) -> Result<Vec<ExtensionPlan>> {
    require_central(config)?;
    if config.len() == 2 {
        return Ok(classify_two_body(config));
    }
    if config.is_collinear() {
        return Err(Error::CollinearInput);
    }
    let c = config::center_of_mass(config);
    let r0 = config::r0(config);
    let mut plans = Vec::new();

    if config.plane_normal().is_some() {
        let circle = geometry::fit_circumcircle(config.positions())?;
        if !circle.is_cocircular() {
            return Err(Error::NotCocircularOrCospherical(circle.max_deviation / circle.radius));
        }
        let r = circle.radius;
        let centered = (c - circle.center).norm() <= EQUALITY_RTOL * r;
        if centered {
            plans.push(ExtensionPlan::at_center(Way::I, circle.center, r, r0));
        } else if (r - r0).abs() <= EQUALITY_RTOL * r0 {
            plans.push(ExtensionPlan::at_center(Way::II, circle.center, r, r0));
        }
        if r0 - r > EQUALITY_RTOL * r0 {
            let h = (r0 * r0 - r * r).sqrt();
            plans.push(ExtensionPlan {
                way: Way::III,
                added_positions: vec![circle.center + circle.normal * h, circle.center - circle.normal * h],
                mass_free: true,
                height: h,
                r,
                r0,
            });
        }
    } else {
        let sphere = geometry::fit_circumsphere(config.positions())?;
        if !sphere.is_cospherical() {
            return Err(Error::NotCocircularOrCospherical(sphere.max_deviation / sphere.radius));
        }
        let r = sphere.radius;
        if (c - sphere.center).norm() <= EQUALITY_RTOL * r {
            plans.push(ExtensionPlan::at_center(Way::IV, sphere.center, r, r0));
        } else if (r - r0).abs() <= EQUALITY_RTOL * r0 {
            plans.push(ExtensionPlan::at_center(Way::V, sphere.center, r, r0));
        }
    }
    Ok(plans)
}

/// Adds `m0` at the plan's position; the result is the (n+1)-body
/// configuration with the new body at index 0.
pub fn build_extension(
    config: &Configuration,
    plan: &ExtensionPlan,
    m0: f64,
    apex: ApexChoice,
) -> Result<Configuration> {
    if !(m0.is_finite() && m0 > 0.0) {
        return Err(Error::InvalidArgument(format!("added mass must be positive, got {m0}")));
    }
    let scale = plan.r.max(plan.r0);
    let matches = |p: &ExtensionPlan| {
        p.way == plan.way
            && p.added_positions.len() == plan.added_positions.len()
            && p
                .added_positions
                .iter()
                .zip(&plan.added_positions)
                .all(|(a, b)| (a - b).norm() <= FIT_RTOL * scale)
    };
    if !classify_extensions(config)?.iter().any(matches) {
        return Err(Error::MismatchedPlan);
    }
    config.with_added_body(m0, plan.position(apex))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R0Sample {
    pub m0: f64,
    pub rbar0: f64,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R0InvarianceReport {
    pub way: Way,
    pub r0: f64,
    pub samples: Vec<R0Sample>,
    pub max_relative_deviation: f64,
    pub holds: bool,
}

/// For ways II, III and V the extended configuration has `r̄0 = r0`
/// whatever the added mass.
pub fn rbar0_invariance(
    config: &Configuration,
    plan: &ExtensionPlan,
    m0_samples: &[f64],
) -> Result<R0InvarianceReport> {
    if matches!(plan.way, Way::I | Way::IV) {
        return Err(Error::InvarianceNotApplicable(plan.way.to_string()));
    }
    let r0 = config::r0(config);
    let samples = m0_samples
        .iter()
        .map(|&m0| {
            let extended = build_extension(config, plan, m0, ApexChoice::Plus)?;
            let rbar0 = config::r0(&extended);
            Ok(R0Sample {
                m0,
                rbar0,
                relative_deviation: (rbar0 - r0).abs() / r0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_relative_deviation = samples.iter().map(|s| s.relative_deviation).fold(0.0, f64::max);
    Ok(R0InvarianceReport {
        way: plan.way,
        r0,
        samples,
        max_relative_deviation,
        holds: max_relative_deviation <= R0_INVARIANCE_RTOL,
    })
}

/// True iff the configuration and every subset obtained by removing one
/// body are central.
pub fn fully_stacked_check(config: &Configuration) -> Result<bool> {
    if config.len() < 3 {
        return Err(Error::InvalidArgument(
            "fully stacked check needs at least three bodies".into(),
        ));
    }
    if !config::is_central(config, DEFAULT_TOLERANCE) {
        return Ok(false);
    }
    for i in 0..config.len() {
        if !config::is_central(&config.without(i)?, DEFAULT_TOLERANCE) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PyramidReport {
    pub apex_index: usize,
    pub base_central: bool,
    pub base_cocircular: bool,
    pub r: f64,
    pub r0: f64,
    pub r_below_r0: bool,
    /// Distance of the apex from the axis through the circle center.
    pub axis_offset: f64,
    pub height: f64,
    pub expected_height: f64,
    pub is_central: bool,
}

/// Centrality of a pyramid through its base: the base must be central and
/// co-circular with `r < r0`, and the apex must sit on the axis at height
/// `√(r0² - r²)`. The apex mass is irrelevant.
pub fn pyramidal_check(config: &Configuration) -> Result<PyramidReport> {
    if config.len() < 4 {
        return Err(Error::NotPyramidal("needs at least four bodies".into()));
    }
    let scale = config.extent();
    let apex_index = (0..config.len())
        .find(|&i| {
            let Ok(base) = config.without(i) else { return false };
            if base.is_collinear() {
                return false;
            }
            base.plane_normal().is_some_and(|n| {
                (config.positions()[i] - base.positions()[0]).dot(&n).abs() > SHAPE_RTOL * scale
            })
        })
        .ok_or_else(|| Error::NotPyramidal("no body lies off a plane holding all the others".into()))?;

    let base = config.without(apex_index)?;
    let base_central = config::is_central(&base, DEFAULT_TOLERANCE);
    let circle = geometry::fit_circumcircle(base.positions())?;
    let r = circle.radius;
    let r0 = config::r0(&base);
    let d = config.positions()[apex_index] - circle.center;
    let height = d.dot(&circle.normal).abs();
    let axis_offset = (d - circle.normal * d.dot(&circle.normal)).norm();
    let r_below_r0 = r0 - r > EQUALITY_RTOL * r0;
    let expected_height = (r0 * r0 - r * r).max(0.0).sqrt();
    let geometric_ok = axis_offset <= FIT_RTOL * r0 && (height - expected_height).abs() <= FIT_RTOL * r0;
    let base_cocircular = circle.is_cocircular();
    Ok(PyramidReport {
        apex_index,
        base_central,
        base_cocircular,
        r,
        r0,
        r_below_r0,
        axis_offset,
        height,
        expected_height,
        is_central: base_central && base_cocircular && r_below_r0 && geometric_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{cc_report, normalized_residual};
    use crate::special::{named_config, NamedConfig};
    use approx::assert_relative_eq;

    fn triangle(masses: [f64; 3]) -> Configuration {
        named_config(&NamedConfig::EquilateralTriangle { masses, side: 1.0 }).unwrap()
    }

    fn square(masses: [f64; 4]) -> Configuration {
        named_config(&NamedConfig::Square { masses, side: 1.0 }).unwrap()
    }

    fn tetrahedron(masses: [f64; 4]) -> Configuration {
        named_config(&NamedConfig::RegularTetrahedron { masses, edge: 1.0 }).unwrap()
    }

    fn ways(plans: &[ExtensionPlan]) -> Vec<Way> {
        plans.iter().map(|p| p.way).collect()
    }

    #[test]
    fn c_extension_examples() {
        assert!(check_c_extension(&triangle([1.0; 3])).unwrap().extends);
        assert!(!check_c_extension(&triangle([1.0, 2.0, 3.0])).unwrap().extends);
        assert!(check_c_extension(&square([1.0; 4])).unwrap().extends);
        assert!(matches!(
            check_c_extension(&square([1.0, 1.0, 1.0, 2.0])),
            Err(Error::NotCentral(_))
        ));
    }

    #[test]
    fn classify_triangles() {
        let plans = classify_extensions(&triangle([1.0; 3])).unwrap();
        assert_eq!(ways(&plans), vec![Way::I, Way::III]);
        let iii = &plans[1];
        assert_relative_eq!(iii.height, (2.0f64 / 3.0).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(iii.r, 1.0 / 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(iii.r0, 1.0, max_relative = 1e-14);
        assert_relative_eq!(iii.added_positions[0], -iii.added_positions[1], epsilon = 1e-15);

        let plans = classify_extensions(&triangle([1.0, 2.0, 3.0])).unwrap();
        assert_eq!(ways(&plans), vec![Way::III]);
        assert_relative_eq!(plans[0].height, (2.0f64 / 3.0).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn classify_tetrahedra_and_squares() {
        assert_eq!(ways(&classify_extensions(&tetrahedron([1.0; 4])).unwrap()), vec![Way::IV]);
        assert!(classify_extensions(&tetrahedron([1.0, 1.0, 1.0, 2.0])).unwrap().is_empty());

        let plans = classify_extensions(&square([1.0; 4])).unwrap();
        assert_eq!(ways(&plans), vec![Way::I, Way::III]);
        let r0 = (8.0 / (4.0 + 2f64.sqrt())).cbrt();
        assert_relative_eq!(plans[1].height, (r0 * r0 - 0.5).sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn classify_errors() {
        let line = Configuration::new(
            vec![1.0; 3],
            vec![Vec3::new(-1.0, 0.0, 0.0), Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(classify_extensions(&line), Err(Error::CollinearInput));
        assert!(matches!(
            classify_extensions(&square([1.0, 1.0, 1.0, 2.0])),
            Err(Error::NotCentral(_))
        ));
        // Square with equal masses plus a center body is central but not co-circular.
        let sc = named_config(&NamedConfig::SquarePlusCenter { masses: [1.0; 4], side: 1.0, m0: 1.0 }).unwrap();
        assert!(matches!(classify_extensions(&sc), Err(Error::NotCocircularOrCospherical(_))));
    }

    #[test]
    fn two_body_extensions() {
        let two = named_config(&NamedConfig::TwoBody { masses: [1.0, 1.0], distance: 1.0 }).unwrap();
        let plans = classify_extensions(&two).unwrap();
        assert_eq!(ways(&plans), vec![Way::I, Way::II]);
        for m0 in [0.2, 1.0, 9.0] {
            let tri = build_extension(&two, &plans[1], m0, ApexChoice::Plus).unwrap();
            assert_relative_eq!(tri.distance(0, 1), 1.0, max_relative = 1e-14);
            assert_relative_eq!(tri.distance(0, 2), 1.0, max_relative = 1e-14);
            assert!(normalized_residual(&tri) < 1e-10);
            let mid = build_extension(&two, &plans[0], m0, ApexChoice::Plus).unwrap();
            assert!(normalized_residual(&mid) < 1e-10);
        }
        let unequal = named_config(&NamedConfig::TwoBody { masses: [1.0, 4.0], distance: 2.0 }).unwrap();
        assert_eq!(ways(&classify_extensions(&unequal).unwrap()), vec![Way::II]);
        let report = rbar0_invariance(&two, &plans[1], &[0.1, 1.0, 10.0]).unwrap();
        assert!(report.holds);
        assert_relative_eq!(report.samples[0].rbar0, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn build_examples() {
        let tri = triangle([1.0, 2.0, 3.0]);
        let plan = classify_extensions(&tri).unwrap().remove(0);
        let tet = build_extension(&tri, &plan, 7.0, ApexChoice::Plus).unwrap();
        assert_eq!(tet.masses(), &[7.0, 1.0, 2.0, 3.0]);
        for i in 0..4 {
            for j in i + 1..4 {
                assert_relative_eq!(tet.distance(i, j), 1.0, max_relative = 1e-13);
            }
        }
        assert!(normalized_residual(&tet) <= 1e-10);

        let sq = square([1.0; 4]);
        let plan = classify_extensions(&sq).unwrap().remove(0);
        let five = build_extension(&sq, &plan, 0.618, ApexChoice::Plus).unwrap();
        assert!(cc_report(&five, 1e-10).unwrap().is_central);

        assert_eq!(
            build_extension(&square([1.0; 4]), &classify_extensions(&tri).unwrap()[0], 1.0, ApexChoice::Plus),
            Err(Error::MismatchedPlan)
        );
        assert!(build_extension(&sq, &plan, -1.0, ApexChoice::Plus).is_err());
    }

    #[test]
    fn rbar0_examples() {
        let tri = triangle([1.0; 3]);
        let plans = classify_extensions(&tri).unwrap();
        let rep = rbar0_invariance(&tri, &plans[1], &[0.1, 1.0, 10.0]).unwrap();
        assert!(rep.holds, "{rep:?}");
        for s in &rep.samples {
            assert_relative_eq!(s.rbar0, 1.0, max_relative = 1e-12);
        }
        assert_eq!(
            rbar0_invariance(&tri, &plans[0], &[1.0]),
            Err(Error::InvarianceNotApplicable("I".into()))
        );

        let sq = square([1.0; 4]);
        let plan = classify_extensions(&sq).unwrap().remove(1);
        let rep = rbar0_invariance(&sq, &plan, &[0.5, 2.0]).unwrap();
        assert!(rep.holds);
        assert!((rep.samples[0].rbar0 - 1.13898).abs() < 1e-5);
    }

    #[test]
    fn fully_stacked_examples() {
        assert!(fully_stacked_check(&triangle([2.0, 3.0, 5.0])).unwrap());
        assert!(fully_stacked_check(&tetrahedron([0.3, 1.0, 2.0, 7.0])).unwrap());
        let sc = named_config(&NamedConfig::SquarePlusCenter { masses: [1.0; 4], side: 1.0, m0: 1.0 }).unwrap();
        // Dropping the center leaves the central square; dropping a corner does not.
        assert!(config::is_central(&sc.without(0).unwrap(), DEFAULT_TOLERANCE));
        assert!(!config::is_central(&sc.without(1).unwrap(), DEFAULT_TOLERANCE));
        assert!(!fully_stacked_check(&sc).unwrap());
    }

    #[test]
    fn pyramidal_examples() {
        let tet = tetrahedron([1.0, 2.0, 3.0, 4.0]);
        let rep = pyramidal_check(&tet).unwrap();
        assert!(rep.is_central, "{rep:?}");
        assert_eq!(rep.apex_index, 0);

        let sq = square([1.0; 4]);
        let plan = classify_extensions(&sq).unwrap().remove(1);
        let good = build_extension(&sq, &plan, 2.0, ApexChoice::Minus).unwrap();
        assert!(pyramidal_check(&good).unwrap().is_central);
        assert!(config::is_central(&good, DEFAULT_TOLERANCE));

        let low = sq.with_added_body(2.0, Vec3::new(0.0, 0.0, plan.height / 2.0)).unwrap();
        let rep = pyramidal_check(&low).unwrap();
        assert!(!rep.is_central);
        assert!(!config::is_central(&low, DEFAULT_TOLERANCE));

        assert!(matches!(pyramidal_check(&sq), Err(Error::NotPyramidal(_))));
        let sc = named_config(&NamedConfig::SquarePlusCenter { masses: [1.0; 4], side: 1.0, m0: 1.0 }).unwrap();
        assert!(matches!(pyramidal_check(&sc), Err(Error::NotPyramidal(_))));
    }
}
