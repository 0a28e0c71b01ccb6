//! Co-circular central configurations.
//!
//! Bodies sit at `q_i = r (cos θ_i, sin θ_i)` with `θ_1 = 0`. With
//! `S_kj = 1/r_kj³ - 1/r0³` the CC equations on the circle read
//! `Σ_{k≠j} m_k S_kj (q_k - q_j) = 0`. Exterior sides always have
//! `S > 0` (shorter than `r0`) and every vertex has a diagonal with
//! `S < 0` (longer than `r0`).

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config::{self, Configuration, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::geometry;
use crate::Vec3;

/// Tolerance for the kite / isosceles trapezoid detection, in radians.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Solved configurations must pass `cc_report` at this tolerance.
pub const SOLVE_TOLERANCE: f64 = 1e-12;

pub const MAX_ITERATIONS: usize = 100;
const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct CocircularCC {
    angles: Vec<f64>,
    masses: Vec<f64>,
    radius: f64,
    r0: f64,
}

#[derive(Serialize)]
struct CocircularOut<'a> {
    masses: &'a [f64],
    positions: Vec<[f64; 3]>,
    angles: &'a [f64],
    radius: f64,
    r0: f64,
}

#[derive(Deserialize)]
struct CocircularIn {
    masses: Vec<f64>,
    angles: Vec<f64>,
    radius: f64,
}

impl Serialize for CocircularCC {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CocircularOut {
            masses: &self.masses,
            positions: self.positions().iter().map(|p| [p.x, p.y, p.z]).collect(),
            angles: &self.angles,
            radius: self.radius,
            r0: self.r0,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CocircularCC {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CocircularIn::deserialize(d)?;
        CocircularCC::new(raw.angles, raw.masses, raw.radius).map_err(serde::de::Error::custom)
    }
}

fn on_circle(angles: &[f64], radius: f64) -> Vec<Vec3> {
    angles
        .iter()
        .map(|t| Vec3::new(radius * t.cos(), radius * t.sin(), 0.0))
        .collect()
}

impl CocircularCC {
    /// Builds the configuration on the circle of the given radius centered
    /// at the origin. Centrality is not required here; see [`Self::is_central`].
    pub fn new(angles: Vec<f64>, masses: Vec<f64>, radius: f64) -> Result<Self> {
        if angles.len() != masses.len() {
            return Err(Error::InvalidConfiguration(format!(
                "{} angles but {} masses",
                angles.len(),
                masses.len()
            )));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        if angles.first() != Some(&0.0) {
            return Err(Error::InvalidArgument("the first angle must be 0".into()));
        }
        if angles.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater))
            || angles.iter().any(|t| t.partial_cmp(&TAU) != Some(Ordering::Less))
        {
            return Err(Error::InvalidArgument(
                "angles must be strictly increasing in [0, 2π)".into(),
            ));
        }
        let config = Configuration::new(masses.clone(), on_circle(&angles, radius))?;
        Ok(Self {
            r0: config::r0(&config),
            angles,
            masses,
            radius,
        })
    }

    /// Expresses a planar co-circular configuration in circle coordinates.
    /// Returns the permutation `perm` with `result body k = input body perm[k]`.
    pub fn from_configuration(config: &Configuration) -> Result<(Self, Vec<usize>)> {
        let fit = geometry::fit_circumcircle(config.positions())?;
        if !fit.is_cocircular() {
            return Err(Error::NotCocircularOrCospherical(fit.max_deviation / fit.radius));
        }
        let (u, v) = fit.plane_basis(&config.positions()[0]);
        let mut tagged: Vec<(f64, usize)> = config
            .positions()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = p - fit.center;
                let t = d.dot(&v).atan2(d.dot(&u)).rem_euclid(TAU);
                (if i == 0 { 0.0 } else { t }, i)
            })
            .collect();
        tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
        let perm: Vec<usize> = tagged.iter().map(|t| t.1).collect();
        let angles = tagged.iter().map(|t| t.0).collect();
        let masses = perm.iter().map(|&i| config.masses()[i]).collect();
        Ok((Self::new(angles, masses, fit.radius)?, perm))
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn positions(&self) -> Vec<Vec3> {
        on_circle(&self.angles, self.radius)
    }

    pub fn configuration(&self) -> Configuration {
        Configuration::new(self.masses.clone(), self.positions()).expect("validated on construction")
    }

    /// Chord length `2 r sin(|θ_k - θ_j| / 2)`.
    pub fn chord(&self, k: usize, j: usize) -> f64 {
        2.0 * self.radius * ((self.angles[k] - self.angles[j]).abs() / 2.0).sin()
    }

    /// `S_kj = 1/r_kj³ - 1/r0³`; absent on the diagonal.
    pub fn s(&self, k: usize, j: usize) -> Option<f64> {
        (k != j).then(|| self.chord(k, j).powi(-3) - self.r0.powi(-3))
    }

    pub fn s_matrix(&self) -> Vec<Vec<Option<f64>>> {
        let n = self.len();
        (0..n).map(|k| (0..n).map(|j| self.s(k, j)).collect()).collect()
    }

    pub fn normalized_residual(&self) -> f64 {
        config::normalized_residual(&self.configuration())
    }

    pub fn is_central(&self, tolerance: f64) -> bool {
        self.normalized_residual() <= tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeMargin {
    pub i: usize,
    pub j: usize,
    pub length: f64,
    /// Positive when the inequality holds: `r0 - length` for exterior
    /// sides, `length - r0` for the longest diagonal at a vertex.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideDiagonalReport {
    pub n: usize,
    pub radius: f64,
    pub r0: f64,
    pub sides: Vec<EdgeMargin>,
    /// Longest diagonal incident to each vertex.
    pub longest_diagonals: Vec<EdgeMargin>,
    pub diagonals_below_r0: usize,
    pub sides_below_r0: bool,
    pub every_vertex_has_long_diagonal: bool,
    /// Exterior-side entries of the S-matrix are positive and every row has
    /// a negative entry.
    pub s_sign_pattern: bool,
}

impl SideDiagonalReport {
    pub fn holds(&self) -> bool {
        self.sides_below_r0 && self.every_vertex_has_long_diagonal && self.s_sign_pattern
    }
}

fn require_central(cc: &CocircularCC) -> Result<()> {
    let res = cc.normalized_residual();
    if res > DEFAULT_TOLERANCE {
        return Err(Error::NotCentral(res));
    }
    Ok(())
}

pub fn side_diagonal_report(cc: &CocircularCC) -> Result<SideDiagonalReport> {
    let n = cc.len();
    if n < 4 {
        return Err(Error::NoDiagonals);
    }
    require_central(cc)?;
    let r0 = cc.r0;
    let adjacent = |i: usize, j: usize| (i + 1) % n == j || (j + 1) % n == i;

    let sides: Vec<EdgeMargin> = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let length = cc.chord(i, j);
            EdgeMargin { i, j, length, margin: r0 - length }
        })
        .collect();
    let longest_diagonals: Vec<EdgeMargin> = (0..n)
        .map(|i| {
            let (j, length) = (0..n)
                .filter(|&j| j != i && !adjacent(i, j))
                .map(|j| (j, cc.chord(i, j)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("n >= 4 leaves a diagonal");
            EdgeMargin { i, j, length, margin: length - r0 }
        })
        .collect();
    let mut diagonals_below_r0 = 0;
    for i in 0..n {
        for j in i + 1..n {
            if !adjacent(i, j) && cc.chord(i, j) < r0 {
                diagonals_below_r0 += 1;
            }
        }
    }
    let s_sign_pattern = (0..n).all(|i| {
        cc.s(i, (i + 1) % n).is_some_and(|s| s > 0.0)
            && (0..n).any(|j| cc.s(i, j).is_some_and(|s| s < 0.0))
    });
    Ok(SideDiagonalReport {
        n,
        radius: cc.radius,
        r0,
        sides_below_r0: sides.iter().all(|e| e.margin > 0.0),
        every_vertex_has_long_diagonal: longest_diagonals.iter().all(|e| e.margin > 0.0),
        sides,
        longest_diagonals,
        diagonals_below_r0,
        s_sign_pattern,
    })
}

/// Largest angular gap between consecutive bodies, wrap-around included.
pub fn max_gap(cc: &CocircularCC) -> f64 {
    let a = &cc.angles;
    let wrap = TAU - a[a.len() - 1] + a[0];
    a.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

/// True when no closed semicircle contains all the bodies.
pub fn semicircle_check(cc: &CocircularCC) -> bool {
    max_gap(cc) < PI
}

/// `r0 - r`.
pub fn radius_vs_r0(cc: &CocircularCC) -> f64 {
    cc.r0 - cc.radius
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symmetry {
    /// A reflection through two opposite bodies maps the set to itself.
    pub kite: bool,
    /// A reflection through no body maps the set to itself.
    pub isosceles_trapezoid: bool,
}

fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn reflects_onto_itself(angles: &[f64], axis: f64, tol: f64) -> bool {
    angles
        .iter()
        .all(|t| angles.iter().any(|s| angle_dist(2.0 * axis - t, *s) <= tol))
}

/// Reflection symmetries of a four-body co-circular set, geometry only.
pub fn detect_symmetry(cc: &CocircularCC, tol: f64) -> Result<Symmetry> {
    if cc.len() != 4 {
        return Err(Error::InvalidArgument("symmetry detection needs four bodies".into()));
    }
    let a = &cc.angles;
    let kite = (0..2).any(|i| reflects_onto_itself(a, a[i], tol));
    let isosceles_trapezoid = (0..2).any(|i| {
        let mid = (a[i] + a[i + 1]) / 2.0;
        reflects_onto_itself(a, mid, tol)
    });
    Ok(Symmetry { kite, isosceles_trapezoid })
}

/// Pins that make the four-body system locally well posed. The solution
/// set near a generic co-circular CC is two-dimensional after fixing
/// `θ1 = 0` and `m1 = 1`, so each variant pins two further quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `θ2`, `θ3` held at the seed.
    FixedAngles,
    /// `m2`, `m3` held at the seed.
    FixedMasses,
    /// Reflection swapping bodies 1↔2 and 3↔4: `θ4 = θ2 - θ3 + 2π`,
    /// `m2 = 1`, `m4 = m3`; `θ2` held at the seed.
    Trapezoid,
    /// Reflection through bodies 1 and 3: `θ3 = π`, `θ4 = 2π - θ2`,
    /// `m4 = m2`; `θ2` held at the seed.
    Kite,
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "fixed_angles" | "angles" => Ok(Self::FixedAngles),
            "fixed_masses" | "masses" => Ok(Self::FixedMasses),
            "trapezoid" | "isosceles_trapezoid" => Ok(Self::Trapezoid),
            "kite" => Ok(Self::Kite),
            other => Err(Error::InvalidArgument(format!("unknown constraint '{other}'"))),
        }
    }
}

/// Unknowns `x = (θ2, θ3, θ4, m2, m3, m4)` with `θ1 = 0`, `m1 = 1` on the
/// unit circle. The residual stacks the planar vectors
/// `Σ_{k≠j} m_k S_kj (q_k - q_j)` for `j = 1..4`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FourBodySystem;

impl FourBodySystem {
    pub const UNKNOWNS: usize = 6;
    pub const EQUATIONS: usize = 8;

    pub fn residual(&self, x: &[f64; 6]) -> [f64; 8] {
        let th = [0.0, x[0], x[1], x[2]];
        let m = [1.0, x[3], x[4], x[5]];
        let q: Vec<(f64, f64)> = th.iter().map(|t| (t.cos(), t.sin())).collect();
        let mut u = 0.0;
        let mut i_num = 0.0;
        let mut r3 = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in a + 1..4 {
                let r = ((q[a].0 - q[b].0).powi(2) + (q[a].1 - q[b].1).powi(2)).sqrt();
                u += m[a] * m[b] / r;
                i_num += m[a] * m[b] * r * r;
                r3[a][b] = r.powi(-3);
                r3[b][a] = r3[a][b];
            }
        }
        // 1/r0³ = λ/m = U / (m I) with m I = Σ m_a m_b r_ab².
        let inv_r0_cubed = u / i_num;
        let mut out = [0.0; 8];
        for j in 0..4 {
            for k in 0..4 {
                if k != j {
                    let s = r3[k][j] - inv_r0_cubed;
                    out[2 * j] += m[k] * s * (q[k].0 - q[j].0);
                    out[2 * j + 1] += m[k] * s * (q[k].1 - q[j].1);
                }
            }
        }
        out
    }

    pub fn jacobian_forward(&self, x: &[f64; 6]) -> DMatrix<f64> {
        let f0 = self.residual(x);
        let mut jac = DMatrix::zeros(8, 6);
        for c in 0..6 {
            let h = 1e-7 * (1.0 + x[c].abs());
            let mut xp = *x;
            xp[c] += h;
            let fp = self.residual(&xp);
            for r in 0..8 {
                jac[(r, c)] = (fp[r] - f0[r]) / h;
            }
        }
        jac
    }

    pub fn jacobian_central(&self, x: &[f64; 6], h: f64) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(8, 6);
        for c in 0..6 {
            let (mut xp, mut xm) = (*x, *x);
            xp[c] += h;
            xm[c] -= h;
            let (fp, fm) = (self.residual(&xp), self.residual(&xm));
            for r in 0..8 {
                jac[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        jac
    }
}

/// Affine parametrization `x = base + P y` of the unknowns left free by a
/// constraint.
fn parametrize(constraint: Constraint, seed: &[f64; 6]) -> ([f64; 6], DMatrix<f64>, DVector<f64>) {
    let mut base = [0.0; 6];
    let mut p = DMatrix::zeros(6, 4);
    let y: Vec<f64>;
    match constraint {
        Constraint::FixedAngles => {
            base[0] = seed[0];
            base[1] = seed[1];
            for k in 0..4 {
                p[(k + 2, k)] = 1.0;
            }
            y = seed[2..].to_vec();
        }
        Constraint::FixedMasses => {
            base[3] = seed[3];
            base[4] = seed[4];
            for (k, row) in [0, 1, 2, 5].into_iter().enumerate() {
                p[(row, k)] = 1.0;
            }
            y = [0, 1, 2, 5].map(|i| seed[i]).to_vec();
        }
        Constraint::Trapezoid => {
            p = DMatrix::zeros(6, 2);
            base[0] = seed[0];
            base[2] = seed[0] + TAU;
            base[3] = 1.0;
            p[(1, 0)] = 1.0;
            p[(2, 0)] = -1.0;
            p[(4, 1)] = 1.0;
            p[(5, 1)] = 1.0;
            y = vec![seed[1], 0.5 * (seed[4] + seed[5])];
        }
        Constraint::Kite => {
            p = DMatrix::zeros(6, 2);
            base[0] = seed[0];
            base[1] = PI;
            base[2] = TAU - seed[0];
            p[(3, 0)] = 1.0;
            p[(5, 0)] = 1.0;
            p[(4, 1)] = 1.0;
            y = vec![0.5 * (seed[3] + seed[5]), seed[4]];
        }
    }
    (base, p, DVector::from_vec(y))
}

fn expand(base: &[f64; 6], p: &DMatrix<f64>, y: &DVector<f64>) -> [f64; 6] {
    let d = p * y;
    std::array::from_fn(|i| base[i] + d[i])
}

fn admissible(x: &[f64; 6]) -> bool {
    0.0 < x[0] && x[0] < x[1] && x[1] < x[2] && x[2] < TAU && x[3..].iter().all(|m| m.is_finite())
}

fn norm(f: &[f64; 8]) -> f64 {
    f.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub cc: CocircularCC,
    pub constraint: Constraint,
    pub iterations: usize,
    /// Euclidean norm of the stacked circle equations at the solution.
    pub residual_norm: f64,
    /// Normalized CC residual of the solved configuration.
    pub cc_residual: f64,
}

/// Damped Gauss-Newton for a four-body co-circular CC. The seed is rotated
/// and rescaled so that `θ1 = 0` and `m1 = 1` on the unit circle; the
/// solution keeps the seed's radius and mass scale.
pub fn solve_cocircular_4body(seed: &CocircularCC, constraint: Constraint) -> Result<SolveOutcome> {
    if seed.len() != 4 {
        return Err(Error::InvalidArgument(format!("seed has {} bodies, need 4", seed.len())));
    }
    let mass_scale = seed.masses[0];
    let x0: [f64; 6] = [
        seed.angles[1],
        seed.angles[2],
        seed.angles[3],
        seed.masses[1] / mass_scale,
        seed.masses[2] / mass_scale,
        seed.masses[3] / mass_scale,
    ];
    let sys = FourBodySystem;
    let (base, p, mut y) = parametrize(constraint, &x0);
    let mut x = expand(&base, &p, &y);
    if !admissible(&x) {
        return Err(Error::InvalidArgument("seed violates the constraint's angle ordering".into()));
    }
    let mut f = sys.residual(&x);
    let mut fnorm = norm(&f);
    let mut iterations = 0;
    while fnorm > 1e-15 {
        if iterations == MAX_ITERATIONS {
            return Err(Error::NewtonDiverged { iterations, residual: fnorm });
        }
        iterations += 1;
        let jac = sys.jacobian_forward(&x) * &p;
        let rhs = -DVector::from_column_slice(&f);
        let step = jac
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let y_try = &y + &step * t;
            let x_try = expand(&base, &p, &y_try);
            if admissible(&x_try) {
                let f_try = sys.residual(&x_try);
                let n_try = norm(&f_try);
                if n_try < fnorm {
                    accepted = Some((y_try, x_try, f_try, n_try));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((y_new, x_new, f_new, n_new)) => {
                let small = (&y_new - &y).norm() <= 1e-15 * (1.0 + y.norm());
                y = y_new;
                x = x_new;
                f = f_new;
                fnorm = n_new;
                if small {
                    break;
                }
            }
            // No decrease: we are at the floating-point floor or stuck.
            None => break,
        }
    }
    if let Some(k) = (3..6).find(|&k| x[k] <= 0.0) {
        return Err(Error::NegativeMass { index: k - 1, value: x[k] * mass_scale });
    }
    let angles = vec![0.0, x[0], x[1], x[2]];
    let masses = vec![mass_scale, x[3] * mass_scale, x[4] * mass_scale, x[5] * mass_scale];
    let cc = CocircularCC::new(angles, masses, seed.radius)?;
    let cc_residual = cc.normalized_residual();
    if cc_residual > SOLVE_TOLERANCE {
        return Err(Error::NewtonDiverged { iterations, residual: cc_residual });
    }
    Ok(SolveOutcome {
        cc,
        constraint,
        iterations,
        residual_norm: fnorm,
        cc_residual,
    })
}

/// The unit-radius square with unit masses.
pub fn unit_square() -> CocircularCC {
    CocircularCC::new(vec![0.0, PI / 2.0, PI, 1.5 * PI], vec![1.0; 4], 1.0).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{a_of_n, named_config, NamedConfig};
    use approx::assert_relative_eq;

    fn ngon(n: usize) -> CocircularCC {
        let angles = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
        CocircularCC::new(angles, vec![1.0; n], 1.0).unwrap()
    }

    #[test]
    fn square_report() {
        let sq = named_config(&NamedConfig::Square { masses: [1.0; 4], side: 1.0 }).unwrap();
        let (cc, perm) = CocircularCC::from_configuration(&sq).unwrap();
        assert_eq!(perm, vec![0, 1, 2, 3]);
        assert_relative_eq!(cc.radius(), 0.5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(cc.r0(), (8.0 / (4.0 + 2f64.sqrt())).cbrt(), max_relative = 1e-14);
        let rep = side_diagonal_report(&cc).unwrap();
        assert!(rep.holds());
        for e in &rep.sides {
            assert_relative_eq!(e.length, 1.0, max_relative = 1e-14);
        }
        for e in &rep.longest_diagonals {
            assert_relative_eq!(e.length, 2f64.sqrt(), max_relative = 1e-14);
        }
        assert!(semicircle_check(&cc));
        assert!(radius_vs_r0(&cc) > 0.0);
    }

    #[test]
    fn s_matrix_is_symmetric() {
        let cc = ngon(6);
        let s = cc.s_matrix();
        for (k, row) in s.iter().enumerate() {
            assert!(row[k].is_none());
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, s[j][k]);
            }
        }
    }

    #[test]
    fn large_ngons() {
        let hex = side_diagonal_report(&ngon(6)).unwrap();
        assert!(hex.holds());
        let big = ngon(100);
        let rep = side_diagonal_report(&big).unwrap();
        assert!(rep.holds());
        assert!(rep.diagonals_below_r0 > 0);
        assert_relative_eq!(big.r0(), (100.0 / a_of_n(100)).cbrt(), max_relative = 1e-12);
        assert!(radius_vs_r0(&ngon(500)) < 0.0);
        assert!(radius_vs_r0(&ngon(5)) > 0.0);
    }

    #[test]
    fn report_errors() {
        let tri = CocircularCC::new(vec![0.0, 2.0, 4.0], vec![1.0; 3], 1.0).unwrap();
        assert_eq!(side_diagonal_report(&tri), Err(Error::NoDiagonals));
        let bad = CocircularCC::new(vec![0.0, 1.0, 2.0, 4.0], vec![1.0; 4], 1.0).unwrap();
        assert!(matches!(side_diagonal_report(&bad), Err(Error::NotCentral(_))));
        assert!(CocircularCC::new(vec![0.1, 1.0], vec![1.0; 2], 1.0).is_err());
        assert!(CocircularCC::new(vec![0.0, 1.0, 0.5], vec![1.0; 3], 1.0).is_err());
    }

    #[test]
    fn cluster_in_semicircle() {
        let span = 0.9 * PI;
        let cc = CocircularCC::new((0..4).map(|k| span * k as f64 / 3.0).collect(), vec![1.0; 4], 1.0).unwrap();
        assert!(!semicircle_check(&cc));
        assert!(!cc.is_central(DEFAULT_TOLERANCE));
    }

    #[test]
    fn square_is_a_fixed_point() {
        let out = solve_cocircular_4body(&unit_square(), Constraint::FixedAngles).unwrap();
        assert!(out.iterations <= 1);
        for (a, b) in out.cc.angles().iter().zip(unit_square().angles()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn trapezoid_and_kite() {
        let t2 = PI / 2.0 + 0.05;
        let seed = CocircularCC::new(vec![0.0, t2, PI, 1.5 * PI], vec![1.0; 4], 1.0).unwrap();
        let trap = solve_cocircular_4body(&seed, Constraint::Trapezoid).unwrap().cc;
        assert_relative_eq!(trap.angles()[2], 3.193_006_56, epsilon = 1e-7);
        assert_relative_eq!(trap.masses()[2], trap.masses()[3], max_relative = 1e-14);
        assert_relative_eq!(trap.masses()[2], 0.829_114, epsilon = 1e-5);
        assert!(detect_symmetry(&trap, SYMMETRY_TOL).unwrap().isosceles_trapezoid);

        let kite = solve_cocircular_4body(&seed, Constraint::Kite).unwrap().cc;
        assert_relative_eq!(kite.angles()[3], 4.662_388_98, epsilon = 1e-7);
        assert_relative_eq!(kite.masses()[1], kite.masses()[3], max_relative = 1e-14);
        assert!(detect_symmetry(&kite, SYMMETRY_TOL).unwrap().kite);
        for cc in [&trap, &kite] {
            assert!(side_diagonal_report(cc).unwrap().holds());
            assert!(radius_vs_r0(cc) > 0.0);
        }
    }

    #[test]
    fn jacobians_agree_at_square() {
        let x = [PI / 2.0, PI, 1.5 * PI, 1.0, 1.0, 1.0];
        let fwd = FourBodySystem.jacobian_forward(&x);
        let cen = FourBodySystem.jacobian_central(&x, 1e-5);
        assert!((&fwd - &cen).norm() <= 1e-4 * cen.norm());
        assert_eq!(cen.rank(1e-6 * cen.norm()), 4);
    }

    #[test]
    fn serde_round_trip() {
        let cc = ngon(5);
        let json = serde_json::to_string(&cc).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v["positions"].is_array() && v["r0"].is_number());
        let back: CocircularCC = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cc);
    }
}
