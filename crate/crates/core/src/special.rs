//! Regular polygons with equal masses, the pyramids and bi-pyramids built
//! on them, and named fixture generators.
//!
//! For the unit-radius regular n-gon with unit masses, `r0³ = n / A(n)` with
//! `A(n) = ¼ Σ_{k=1}^{n-1} csc(kπ/n)`, so the ratio `r0/r = (n/A(n))^(1/3)`
//! decides which pyramidal constructions exist:
//!
//! * `r0/r > 1`: a pyramid over the n-gon is central (n ≤ 472);
//! * `r0/r > √2`: an apex mass can put the pyramid's mass center at the
//!   sphere center (n ≤ 8);
//! * `r0/r = 2/√3` would make the pyramid's `R0` equal its sphere radius;
//!   the ratio crosses that value between n = 52 and n = 53.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::{self, Configuration};
use crate::error::{Error, Result};
use crate::extension::{self, ApexChoice, Way};
use crate::geometry;
use crate::sum::NeumaierSum;
use crate::Vec3;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `2/√3`.
pub const TWO_OVER_SQRT_3: f64 = 1.154_700_538_379_251_5;

/// `A(n) = ¼ Σ_{k=1}^{n-1} csc(kπ/n)`, accumulated with compensation.
pub fn a_of_n(n: usize) -> f64 {
    let nf = n as f64;
    let acc: NeumaierSum = (1..n)
        .map(|k| {
            // csc(kπ/n) = csc((n-k)π/n); the smaller argument is exact-er.
            let kk = k.min(n - k) as f64;
            1.0 / (PI * kk / nf).sin()
        })
        .collect();
    acc.value() / 4.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NgonReport {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: f64,
    /// `n / A(n) = (r0/r)³`.
    pub n_over_a: f64,
    /// `r0 / r`.
    pub ratio: f64,
    pub pyramidal_ok: bool,
    pub pyramidal_margin: f64,
    pub masscenter_pyramid_ok: bool,
    pub masscenter_margin: f64,
    /// Sign of `ratio - 2/√3`.
    pub r0_eq_r_side: i8,
    pub r0_eq_r_margin: f64,
}

pub fn ngon_report(n: usize) -> Result<NgonReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n-gon needs n >= 2, got {n}")));
    }
    let a = a_of_n(n);
    let n_over_a = n as f64 / a;
    let ratio = n_over_a.cbrt();
    let sign = |x: f64| if x > 0.0 { 1 } else if x < 0.0 { -1 } else { 0 };
    Ok(NgonReport {
        n,
        a,
        n_over_a,
        ratio,
        pyramidal_ok: ratio > 1.0,
        pyramidal_margin: ratio - 1.0,
        masscenter_pyramid_ok: ratio > SQRT_2,
        masscenter_margin: ratio - SQRT_2,
        r0_eq_r_side: sign(ratio - TWO_OVER_SQRT_3),
        r0_eq_r_margin: ratio - TWO_OVER_SQRT_3,
    })
}

pub fn ngon_table(from: usize, to: usize) -> Result<Vec<NgonReport>> {
    if from > to {
        return Err(Error::InvalidArgument(format!("empty range {from}..={to}")));
    }
    (from..=to).map(ngon_report).collect()
}

pub const NGON_CSV_HEADER: &str =
    "n,A,n_over_A,ratio,pyramidal_ok,masscenter_pyramid_ok,r0_eq_r_side";

pub fn write_ngon_csv<W: Write>(rows: &[NgonReport], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{NGON_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{:.17e},{:.17e},{:.17e},{},{},{}",
            r.n, r.a, r.n_over_a, r.ratio, r.pyramidal_ok, r.masscenter_pyramid_ok, r.r0_eq_r_side
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCheck {
    pub n: usize,
    pub a_over_n: f64,
    /// `(γ + ln(2n/π)) / 2π`.
    pub leading: f64,
    /// `A(n)/n - leading`.
    pub remainder: f64,
    /// First correction `-(2-1) B₂² π / (2 · 2! · n²)` with `B₂ = 1/6`.
    pub first_correction: f64,
    pub within_bound: bool,
}

pub fn ngon_asymptotic_check(n: usize) -> Result<AsymptoticCheck> {
    if n < 100 {
        return Err(Error::InvalidArgument(format!(
            "asymptotic check needs n >= 100, got {n}"
        )));
    }
    let nf = n as f64;
    let a_over_n = a_of_n(n) / nf;
    let leading = (EULER_GAMMA + (2.0 * nf / PI).ln()) / (2.0 * PI);
    let b2 = 1.0 / 6.0;
    let first_correction = -(b2 * b2) * PI / (2.0 * 2.0 * nf * nf);
    let remainder = a_over_n - leading;
    Ok(AsymptoticCheck {
        n,
        a_over_n,
        leading,
        remainder,
        first_correction,
        within_bound: remainder.abs() < 2.0 * first_correction.abs(),
    })
}

/// Unit-radius regular n-gon with the given masses, vertex k at angle 2πk/n.
fn ngon_positions(n: usize, radius: f64) -> Vec<Vec3> {
    (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            Vec3::new(radius * t.cos(), radius * t.sin(), 0.0)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiPyramid {
    pub n: usize,
    /// Mass `a` at each pole.
    pub polar_mass: f64,
    /// n unit masses on the unit equator followed by the poles `(0,0,±1)`.
    pub configuration: Configuration,
    /// `A(n) + a/√2`.
    pub equatorial_multiplier: f64,
    /// `n/(2√2) + a/4`.
    pub polar_multiplier: f64,
    /// `R0 = (m̄/λ)^(1/3)` of the whole bi-pyramid; the sphere radius is 1.
    pub big_r0: f64,
}

pub fn bipyramid_polar_mass(n: usize) -> f64 {
    let nf = n as f64;
    (nf / (2.0 * SQRT_2) - a_of_n(n)) / (FRAC_1_SQRT_2 - 0.25)
}

pub fn build_bipyramid(n: usize) -> Result<BiPyramid> {
    if !(3..=8).contains(&n) {
        return Err(Error::NoPositivePolarMass(n));
    }
    let a = bipyramid_polar_mass(n);
    if a <= 0.0 {
        return Err(Error::NoPositivePolarMass(n));
    }
    let mut masses = vec![1.0; n];
    masses.extend([a, a]);
    let mut positions = ngon_positions(n, 1.0);
    positions.extend([Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)]);
    let configuration = Configuration::new(masses, positions)?;
    let big_r0 = config::r0(&configuration);
    Ok(BiPyramid {
        n,
        polar_mass: a,
        equatorial_multiplier: a_of_n(n) + a * FRAC_1_SQRT_2,
        polar_multiplier: n as f64 / (2.0 * SQRT_2) + a / 4.0,
        configuration,
        big_r0,
    })
}

/// Pyramid over the unit-radius, unit-mass regular n-gon with apex at
/// height `h = √(r0² - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PyramidMassCenter {
    pub n: usize,
    pub height: f64,
    /// Height of the circumscribing sphere's center above the base plane.
    pub sphere_center_height: f64,
    /// Sphere radius `R`.
    pub sphere_radius: f64,
    /// Apex mass placing the pyramid's mass center at the sphere center;
    /// non-positive when no such mass exists.
    pub apex_mass: f64,
}

impl PyramidMassCenter {
    pub fn feasible(&self) -> bool {
        self.apex_mass > 0.0
    }
}

pub fn pyramid_mass_center(n: usize) -> Result<PyramidMassCenter> {
    let rep = ngon_report(n)?;
    if !rep.pyramidal_ok || n < 3 {
        return Err(Error::InvalidArgument(format!(
            "no pyramid over the regular {n}-gon (r0/r = {})",
            rep.ratio
        )));
    }
    let h = (rep.ratio * rep.ratio - 1.0).sqrt();
    // 1 + z² = (h - z)²
    let z = (h * h - 1.0) / (2.0 * h);
    Ok(PyramidMassCenter {
        n,
        height: h,
        sphere_center_height: z,
        sphere_radius: (1.0 + z * z).sqrt(),
        apex_mass: n as f64 * z / (h - z),
    })
}

/// Exact-coordinate generators for the fixtures used throughout.
///
/// Variants with an added body (`*PlusCenter`, `PyramidOver`) store it at
/// index 0. Masses are taken as given; a mass pattern that is not central
/// produces a configuration that `cc_report` flags as non-central.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedConfig {
    TwoBody { masses: [f64; 2], distance: f64 },
    /// Centered at the origin, one vertex on the +y axis.
    EquilateralTriangle { masses: [f64; 3], side: f64 },
    /// Vertices `(±s/2, ±s/2, 0)`, counterclockwise from `(s/2, s/2, 0)`.
    Square { masses: [f64; 4], side: f64 },
    RegularNgon { masses: Vec<f64>, radius: f64 },
    NgonPlusCenter { masses: Vec<f64>, radius: f64, m0: f64 },
    SquarePlusCenter { masses: [f64; 4], side: f64, m0: f64 },
    /// Centered at the origin.
    RegularTetrahedron { masses: [f64; 4], edge: f64 },
    TetrahedronPlusCenter { masses: [f64; 4], edge: f64, m0: f64 },
    /// Apex `m0` over a co-circular central base with `r < r0`.
    PyramidOver { base: Configuration, m0: f64, apex: ApexChoice },
}

pub const NAMED_KINDS: [&str; 9] = [
    "two_body",
    "equilateral_triangle",
    "square",
    "regular_ngon",
    "ngon_plus_center",
    "square_plus_center",
    "regular_tetrahedron",
    "tetrahedron_plus_center",
    "pyramid_over",
];

fn square_positions(side: f64) -> Vec<Vec3> {
    let h = side / 2.0;
    vec![
        Vec3::new(h, h, 0.0),
        Vec3::new(-h, h, 0.0),
        Vec3::new(-h, -h, 0.0),
        Vec3::new(h, -h, 0.0),
    ]
}

fn tetrahedron_positions(edge: f64) -> Vec<Vec3> {
    let s = edge / (2.0 * SQRT_2);
    vec![
        Vec3::new(s, s, s),
        Vec3::new(s, -s, -s),
        Vec3::new(-s, s, -s),
        Vec3::new(-s, -s, s),
    ]
}

fn prepend(m0: f64, q0: Vec3, masses: &[f64], positions: Vec<Vec3>) -> Result<Configuration> {
    Configuration::new(masses.to_vec(), positions)?.with_added_body(m0, q0)
}

pub fn named_config(kind: &NamedConfig) -> Result<Configuration> {
    match kind {
        NamedConfig::TwoBody { masses, distance } => Configuration::new(
            masses.to_vec(),
            vec![Vec3::zeros(), Vec3::new(*distance, 0.0, 0.0)],
        ),
        NamedConfig::EquilateralTriangle { masses, side } => {
            let r = side / 3f64.sqrt();
            let positions = (0..3)
                .map(|k| {
                    let t = PI / 2.0 + 2.0 * PI * k as f64 / 3.0;
                    Vec3::new(r * t.cos(), r * t.sin(), 0.0)
                })
                .collect();
            Configuration::new(masses.to_vec(), positions)
        }
        NamedConfig::Square { masses, side } => Configuration::new(masses.to_vec(), square_positions(*side)),
        NamedConfig::RegularNgon { masses, radius } => {
            Configuration::new(masses.clone(), ngon_positions(masses.len(), *radius))
        }
        NamedConfig::NgonPlusCenter { masses, radius, m0 } => {
            prepend(*m0, Vec3::zeros(), masses, ngon_positions(masses.len(), *radius))
        }
        NamedConfig::SquarePlusCenter { masses, side, m0 } => {
            prepend(*m0, Vec3::zeros(), masses, square_positions(*side))
        }
        NamedConfig::RegularTetrahedron { masses, edge } => {
            Configuration::new(masses.to_vec(), tetrahedron_positions(*edge))
        }
        NamedConfig::TetrahedronPlusCenter { masses, edge, m0 } => {
            prepend(*m0, Vec3::zeros(), masses, tetrahedron_positions(*edge))
        }
        NamedConfig::PyramidOver { base, m0, apex } => {
            let plans = extension::classify_extensions(base)?;
            let plan = plans
                .iter()
                .find(|p| p.way == Way::III)
                .ok_or_else(|| Error::InvalidArgument("base admits no pyramidal extension".into()))?;
            extension::build_extension(base, plan, *m0, *apex)
        }
    }
}

/// Sphere radius `R` and `R0` of the pyramid over the unit regular n-gon
/// with the given apex mass.
pub fn pyramid_r_and_r0(n: usize, apex_mass: f64) -> Result<(f64, f64)> {
    let base = named_config(&NamedConfig::RegularNgon {
        masses: vec![1.0; n],
        radius: 1.0,
    })?;
    let pyramid = named_config(&NamedConfig::PyramidOver {
        base,
        m0: apex_mass,
        apex: ApexChoice::Plus,
    })?;
    let sphere = geometry::fit_circumsphere(pyramid.positions())?;
    Ok((sphere.radius, config::r0(&pyramid)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{cc_report, center_of_mass, normalized_residual, DEFAULT_TOLERANCE};
    use approx::assert_relative_eq;

    #[test]
    fn a_of_small_n() {
        assert_relative_eq!(a_of_n(2), 0.25, max_relative = 1e-15);
        assert_relative_eq!(a_of_n(3), 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(a_of_n(4), (2.0 * SQRT_2 + 1.0) / 4.0, max_relative = 1e-15);
        let rep = ngon_report(3).unwrap();
        assert_relative_eq!(rep.ratio, 3f64.sqrt(), max_relative = 1e-15);
        assert!(ngon_report(1).is_err());
    }

    #[test]
    fn ratio_matches_direct_r0() {
        for n in [2usize, 3, 5, 6, 12, 40] {
            let c = named_config(&NamedConfig::RegularNgon { masses: vec![1.0; n], radius: 1.0 }).unwrap();
            assert_relative_eq!(config::r0(&c), ngon_report(n).unwrap().ratio, max_relative = 1e-13);
        }
    }

    #[test]
    fn threshold_values_472_473() {
        // Independent 40-digit reference values for n/A(n).
        let r472 = ngon_report(472).unwrap();
        let r473 = ngon_report(473).unwrap();
        assert_relative_eq!(r472.n_over_a, 1.000_091_359_666_594_8, max_relative = 1e-13);
        assert_relative_eq!(r473.n_over_a, 0.999_754_575_171_147_2, max_relative = 1e-13);
        assert!(r472.pyramidal_ok && !r473.pyramidal_ok);
        assert!(ngon_report(8).unwrap().masscenter_pyramid_ok);
        assert!(!ngon_report(9).unwrap().masscenter_pyramid_ok);
        assert_eq!(ngon_report(52).unwrap().r0_eq_r_side, 1);
        assert_eq!(ngon_report(53).unwrap().r0_eq_r_side, -1);
    }

    #[test]
    fn ratio_strictly_decreasing() {
        let rows = ngon_table(3, 600).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].ratio < w[0].ratio, "n = {}", w[1].n);
            assert!(w[1].a > w[0].a);
        }
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_ngon_csv(&ngon_table(471, 474).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], NGON_CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("472,") && lines[2].contains(",true,"));
        assert!(lines[3].starts_with("473,") && lines[3].contains(",false,false,"));
    }

    #[test]
    fn asymptotic_expansion() {
        let c = ngon_asymptotic_check(10_000).unwrap();
        assert!((c.a_over_n - c.leading).abs() < 1e-8);
        let c100 = ngon_asymptotic_check(100).unwrap();
        let c1000 = ngon_asymptotic_check(1000).unwrap();
        assert!(c100.within_bound && c1000.within_bound);
        let decay = c100.remainder / c1000.remainder;
        assert!((50.0..200.0).contains(&decay), "decay ratio {decay}");
        assert!(ngon_asymptotic_check(99).is_err());
    }

    #[test]
    fn bipyramids() {
        // a(3) from A(3) = 1/√3 by hand: (3/(2√2) - 1/√3) / (1/√2 - 1/4).
        let hand = (3.0 / (2.0 * SQRT_2) - 1.0 / 3f64.sqrt()) / (FRAC_1_SQRT_2 - 0.25);
        let b = build_bipyramid(3).unwrap();
        assert_relative_eq!(b.polar_mass, hand, max_relative = 1e-14);
        assert!((b.polar_mass - 1.0573).abs() < 1e-3);
        // n = 4 is the equal-mass regular octahedron.
        assert_relative_eq!(build_bipyramid(4).unwrap().polar_mass, 1.0, max_relative = 1e-14);
        for n in 3..=8 {
            let b = build_bipyramid(n).unwrap();
            assert!(b.polar_mass > 0.0);
            let rep = cc_report(&b.configuration, 1e-12).unwrap();
            assert!(rep.is_central, "n = {n}: {}", rep.residual_norm);
            assert_relative_eq!(b.equatorial_multiplier, b.polar_multiplier, max_relative = 1e-13);
            assert_relative_eq!(b.equatorial_multiplier, rep.multiplier, max_relative = 1e-13);
            assert!(center_of_mass(&b.configuration).norm() < 1e-15);
            assert!(b.big_r0 > 1.0);

            let with_center = b.configuration.with_added_body(3.7, Vec3::zeros()).unwrap();
            assert!(normalized_residual(&with_center) < 1e-12);
        }
        assert_eq!(build_bipyramid(9), Err(Error::NoPositivePolarMass(9)));
        assert_eq!(build_bipyramid(2), Err(Error::NoPositivePolarMass(2)));
        assert!(bipyramid_polar_mass(8) < 0.06);
    }

    #[test]
    fn pyramid_mass_center_condition() {
        for n in 3..=8 {
            let p = pyramid_mass_center(n).unwrap();
            assert!(p.feasible(), "n = {n}");
            // Build it and check both centers coincide.
            let base = named_config(&NamedConfig::RegularNgon { masses: vec![1.0; n], radius: 1.0 }).unwrap();
            let pyr = named_config(&NamedConfig::PyramidOver { base, m0: p.apex_mass, apex: ApexChoice::Plus }).unwrap();
            let sphere = geometry::fit_circumsphere(pyr.positions()).unwrap();
            assert!((center_of_mass(&pyr) - sphere.center).norm() < 1e-12);
            assert_relative_eq!(sphere.radius, p.sphere_radius, max_relative = 1e-12);
        }
        for n in [9, 10, 50, 472] {
            assert!(!pyramid_mass_center(n).unwrap().feasible(), "n = {n}");
        }
        assert!(pyramid_mass_center(473).is_err());
    }

    #[test]
    fn pyramid_big_r0_never_equals_sphere_radius() {
        for n in (3..=60).chain([100, 300, 472]) {
            let (big_r, big_r0) = pyramid_r_and_r0(n, 1.3).unwrap();
            assert!((big_r - big_r0).abs() > 1e-6 * big_r, "n = {n}");
            assert_relative_eq!(big_r0, ngon_report(n).unwrap().ratio, max_relative = 1e-11);
        }
    }

    #[test]
    fn named_generators() {
        let sq = named_config(&NamedConfig::SquarePlusCenter { masses: [1.0; 4], side: 1.0, m0: 5.0 }).unwrap();
        assert!(cc_report(&sq, DEFAULT_TOLERANCE).unwrap().is_central);
        for m0 in [0.01, 1.0, 40.0] {
            let t = named_config(&NamedConfig::TetrahedronPlusCenter { masses: [1.0; 4], edge: 2.0, m0 }).unwrap();
            assert!(cc_report(&t, DEFAULT_TOLERANCE).unwrap().is_central);
        }
        let hex = named_config(&NamedConfig::RegularNgon { masses: vec![1.0; 6], radius: 1.0 }).unwrap();
        assert!(cc_report(&hex, DEFAULT_TOLERANCE).unwrap().is_central);
        let lopsided = named_config(&NamedConfig::RegularNgon { masses: vec![1.0, 1.0, 1.0, 1.0, 1.0, 2.0], radius: 1.0 }).unwrap();
        assert!(!cc_report(&lopsided, DEFAULT_TOLERANCE).unwrap().is_central);
        let tri = named_config(&NamedConfig::EquilateralTriangle { masses: [1.0, 2.0, 3.0], side: 1.0 }).unwrap();
        assert_relative_eq!(tri.distance(0, 1), 1.0, max_relative = 1e-15);
        assert_relative_eq!(tri.distance(1, 2), 1.0, max_relative = 1e-15);
        let tet = named_config(&NamedConfig::RegularTetrahedron { masses: [1.0; 4], edge: 1.0 }).unwrap();
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            assert_relative_eq!(tet.distance(i, j), 1.0, max_relative = 1e-15);
        }
    }
}
