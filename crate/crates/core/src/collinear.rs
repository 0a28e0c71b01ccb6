//! Collinear central configurations.
//!
//! Two bodies extend to three collinear ones in exactly three ways (Euler's
//! solutions, one per ordering). For n ≥ 3 no collinear extension exists:
//! the reduced equations force the distinct offsets `y_i = x_i - x0` to be
//! roots of `-m0 z³ + α z + β = 0` (bodies left of the new one) or
//! `m0 z³ + α z + β = 0` (bodies to its right), and together these cubics
//! have at most two such roots. [`cubic_root_profile`] counts them and
//! [`collinear_nonextension_witness`] checks the reduced equations directly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{self, Configuration, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::Vec3;

/// Roots closer than `DISTINCT_RTOL · (1 + |z|)` count once.
pub const DISTINCT_RTOL: f64 = 1e-9;

/// Discriminant of `a z³ + b z² + c z + d`.
pub fn cubic_discriminant(a: f64, b: f64, c: f64, d: f64) -> f64 {
    18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * a * c.powi(3) - 27.0 * a * a * d * d
}

fn polish(t: f64, p: f64, q: f64) -> f64 {
    let mut t = t;
    for _ in 0..3 {
        let f = t * t * t + p * t + q;
        let df = 3.0 * t * t + p;
        if df == 0.0 {
            break;
        }
        let next = t - f / df;
        let fnext = next * next * next + p * next + q;
        if fnext.abs() < f.abs() {
            t = next;
        } else {
            break;
        }
    }
    t
}

/// Roots of the depressed cubic `t³ + p t + q = 0`. Real roots have an
/// exactly zero imaginary part and come first, in increasing order.
pub fn depressed_cubic_roots(p: f64, q: f64) -> [Complex64; 3] {
    let real = |x: f64| Complex64::new(x, 0.0);
    if q == 0.0 {
        return if p < 0.0 {
            let s = (-p).sqrt();
            [real(-s), real(0.0), real(s)]
        } else {
            let s = p.sqrt();
            [real(0.0), Complex64::new(0.0, s), Complex64::new(0.0, -s)]
        };
    }
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    if disc >= 0.0 && p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
        let mut roots = [0, 1, 2].map(|k| polish(m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos(), p, q));
        roots.sort_by(f64::total_cmp);
        return roots.map(real);
    }
    // One real root (Cardano, with the cancellation-free branch).
    let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
    let a = -(q.signum()) * (q.abs() / 2.0 + s).cbrt();
    let b = if a != 0.0 { -p / (3.0 * a) } else { 0.0 };
    let t1 = polish(a + b, p, q);
    // t³ + p t + q = (t - t1)(t² + t1 t + t1² + p)
    let half = Complex64::new(-3.0 * t1 * t1 - 4.0 * p, 0.0).sqrt() / 2.0;
    let mid = real(-t1 / 2.0);
    [real(t1), mid + half, mid - half]
}

fn distinct_real(roots: &[Complex64; 3]) -> Vec<f64> {
    let mut xs: Vec<f64> = roots.iter().filter(|z| z.im == 0.0).map(|z| z.re).collect();
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(3);
    for x in xs {
        match out.last() {
            Some(&prev) if (x - prev).abs() <= DISTINCT_RTOL * (1.0 + prev.abs()) => {}
            _ => out.push(x),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicRootProfile {
    pub alpha: f64,
    pub beta: f64,
    pub m0: f64,
    /// `Δ₁ = 4 m0 α³ - 27 m0² β²` of `-m0 z³ + α z + β`.
    pub discriminant_minus: f64,
    /// `Δ₂ = -4 m0 α³ - 27 m0² β²` of `m0 z³ + α z + β`.
    pub discriminant_plus: f64,
    pub roots_minus: [Complex64; 3],
    pub roots_plus: [Complex64; 3],
    /// Distinct negative real roots of `-m0 z³ + α z + β = 0`.
    pub negative_roots_of_minus: usize,
    /// Distinct positive real roots of `m0 z³ + α z + β = 0`.
    pub positive_roots_of_plus: usize,
}

impl CubicRootProfile {
    pub fn total(&self) -> usize {
        self.negative_roots_of_minus + self.positive_roots_of_plus
    }
}

pub fn cubic_root_profile(alpha: f64, beta: f64, m0: f64) -> Result<CubicRootProfile> {
    if !(m0.is_finite() && m0 > 0.0) {
        return Err(Error::InvalidArgument(format!("m0 must be positive, got {m0}")));
    }
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidArgument("alpha and beta must be finite".into()));
    }
    // -m0 z³ + α z + β = 0  ⇔  z³ - (α/m0) z - β/m0 = 0
    let roots_minus = depressed_cubic_roots(-alpha / m0, -beta / m0);
    // m0 z³ + α z + β = 0  ⇔  z³ + (α/m0) z + β/m0 = 0
    let roots_plus = depressed_cubic_roots(alpha / m0, beta / m0);
    let negative_roots_of_minus = distinct_real(&roots_minus).into_iter().filter(|z| *z < 0.0).count();
    let positive_roots_of_plus = distinct_real(&roots_plus).into_iter().filter(|z| *z > 0.0).count();
    Ok(CubicRootProfile {
        alpha,
        beta,
        m0,
        discriminant_minus: cubic_discriminant(-m0, 0.0, alpha, beta),
        discriminant_plus: cubic_discriminant(m0, 0.0, alpha, beta),
        roots_minus,
        roots_plus,
        negative_roots_of_minus,
        positive_roots_of_plus,
    })
}

/// Euler's quintic for bodies `A < B < C` on a line with `|AB| = 1` and
/// `|BC| = z`; it has exactly one positive root.
fn euler_quintic(ma: f64, mb: f64, mc: f64, z: f64) -> (f64, f64) {
    let c = [
        -(mb + mc),
        -(2.0 * mb + 3.0 * mc),
        -(mb + 3.0 * mc),
        3.0 * ma + mb,
        3.0 * ma + 2.0 * mb,
        ma + mb,
    ];
    let mut f = 0.0;
    let mut df = 0.0;
    for ck in c.iter().rev() {
        df = df * z + f;
        f = f * z + ck;
    }
    (f, df)
}

/// Positive root of Euler's quintic: bracket, bisect, then one Newton step.
pub fn euler_ratio(ma: f64, mb: f64, mc: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while euler_quintic(ma, mb, mc, hi).0 < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if euler_quintic(ma, mb, mc, mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    let (f, df) = euler_quintic(ma, mb, mc, z);
    if df > 0.0 {
        let next = z - f / df;
        if next > 0.0 && euler_quintic(ma, mb, mc, next).0.abs() <= f.abs() {
            return next;
        }
    }
    z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EulerInterval {
    /// `x0 < x1`
    Left,
    /// `x1 < x0 < x2`
    Middle,
    /// `x2 < x0`
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerSolution {
    pub interval: EulerInterval,
    pub x0: f64,
    /// Masses `(m0, m1, m2)` at `(x0, x1, x2)` on the x-axis.
    pub configuration: Configuration,
}

/// The three collinear central configurations obtained by adding `m0` to
/// the two-body configuration `(m1 at x1, m2 at x2)`.
pub fn euler_solve(m1: f64, m2: f64, m0: f64, x1: f64, x2: f64) -> Result<[EulerSolution; 3]> {
    for (name, m) in [("m1", m1), ("m2", m2), ("m0", m0)] {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {m}")));
        }
    }
    if !(x1.is_finite() && x2.is_finite() && x1 < x2) {
        return Err(Error::InvalidArgument(format!("need x1 < x2, got {x1}, {x2}")));
    }
    let len = x2 - x1;
    let build = |interval, x0: f64| -> Result<EulerSolution> {
        let configuration = Configuration::new(
            vec![m0, m1, m2],
            vec![Vec3::new(x0, 0.0, 0.0), Vec3::new(x1, 0.0, 0.0), Vec3::new(x2, 0.0, 0.0)],
        )?;
        Ok(EulerSolution { interval, x0, configuration })
    };
    // Ordering (m0, m1, m2): |m0 m1| = len / z.
    let z = euler_ratio(m0, m1, m2);
    let left = build(EulerInterval::Left, x1 - len / z)?;
    // Ordering (m1, m0, m2): |m1 m0| = len / (1 + z).
    let z = euler_ratio(m1, m0, m2);
    let middle = build(EulerInterval::Middle, x1 + len / (1.0 + z))?;
    // Ordering (m1, m2, m0): |m2 m0| = z len.
    let z = euler_ratio(m1, m2, m0);
    let right = build(EulerInterval::Right, x2 + z * len)?;
    Ok([left, middle, right])
}

/// Coordinates along the line carrying a collinear configuration. A
/// configuration already on the x-axis keeps its x coordinates.
pub fn line_coordinates(config: &Configuration) -> Result<Vec<f64>> {
    let dir = config.collinear_direction().ok_or(Error::NotCollinear)?;
    let key = [dir.x, dir.y, dir.z].into_iter().find(|c| c.abs() > 1e-12).unwrap_or(1.0);
    let dir = if key < 0.0 { -dir } else { dir };
    let p = config.positions()[0];
    let foot = p - dir * p.dot(&dir);
    Ok(config.positions().iter().map(|q| (q - foot).dot(&dir)).collect())
}

fn line_u_i(xs: &[f64], ms: &[f64]) -> (f64, f64) {
    let m: f64 = ms.iter().sum();
    let mut u = 0.0;
    let mut s = 0.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let r = (xs[i] - xs[j]).abs();
            u += ms[i] * ms[j] / r;
            s += ms[i] * ms[j] * r * r;
        }
    }
    (u, s / m)
}

/// Residuals of the reduced equations for adding `m0` at `x0` to a
/// collinear central configuration:
/// `(λ - λ̄)(x_i - x0) + m0 (x_i - x0)/|x_i - x0|³ + (λ - λ̄ m/m̄)(x0 - c)`.
pub fn reduced_residuals(config: &Configuration, m0: f64, x0: f64) -> Result<Vec<f64>> {
    if !(m0.is_finite() && m0 > 0.0) {
        return Err(Error::InvalidArgument(format!("m0 must be positive, got {m0}")));
    }
    let xs = line_coordinates(config)?;
    let ms = config.masses();
    if xs.contains(&x0) {
        return Err(Error::InvalidArgument(format!("x0 = {x0} coincides with a body")));
    }
    let m: f64 = ms.iter().sum();
    let c = xs.iter().zip(ms).map(|(x, mi)| x * mi).sum::<f64>() / m;
    let (u, i) = line_u_i(&xs, ms);
    let lambda = u / i;

    let mut xs_bar = vec![x0];
    xs_bar.extend_from_slice(&xs);
    let mut ms_bar = vec![m0];
    ms_bar.extend_from_slice(ms);
    let (u_bar, i_bar) = line_u_i(&xs_bar, &ms_bar);
    let lambda_bar = u_bar / i_bar;
    let m_bar = m + m0;

    Ok(xs
        .iter()
        .map(|x| {
            let y = x - x0;
            (lambda - lambda_bar) * y + m0 * y / y.abs().powi(3) + (lambda - lambda_bar * m / m_bar) * (x0 - c)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub n: usize,
    pub m0: f64,
    pub multiplier: f64,
    /// `λ · max_i |x_i - c| · m0 / m̄`; every term of the reduced equations
    /// carries a factor of order `m0 / m̄`.
    pub scale: f64,
    pub points_evaluated: usize,
    /// Minimum over the grid of `max_i |residual_i| / scale`.
    pub min_max_residual: f64,
    pub argmin_x0: f64,
    pub bounded_away: bool,
}

/// Lower bound on the normalized witness residual accepted as "bounded
/// away from zero".
pub const WITNESS_FLOOR: f64 = 0.01;

/// Uniform grid over three spans either side of the configuration.
pub fn default_witness_grid(config: &Configuration, points: usize) -> Result<Vec<f64>> {
    let xs = line_coordinates(config)?;
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let (a, b) = (lo - 3.0 * span, hi + 3.0 * span);
    Ok(match points {
        0 => Vec::new(),
        1 => vec![(a + b) / 2.0],
        _ => (0..points).map(|k| a + (b - a) * k as f64 / (points - 1) as f64).collect(),
    })
}

/// Sweeps candidate positions for a collinear extension of a collinear
/// central configuration with n ≥ 3 and reports how far the reduced
/// equations stay from being solvable.
pub fn collinear_nonextension_witness(config: &Configuration, m0: f64, x0_grid: &[f64]) -> Result<WitnessReport> {
    let xs = line_coordinates(config)?;
    if config.len() == 2 {
        return Err(Error::ExtensionPossible);
    }
    let res = config::normalized_residual(config);
    if res > DEFAULT_TOLERANCE {
        return Err(Error::NotCentral(res));
    }
    let lambda = config::multiplier(config);
    let m = config.total_mass();
    let c = xs.iter().zip(config.masses()).map(|(x, mi)| x * mi).sum::<f64>() / m;
    let spread = xs.iter().map(|x| (x - c).abs()).fold(0.0, f64::max);
    let span = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max) - xs.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = lambda * spread * m0 / (m + m0);

    let mut best = f64::INFINITY;
    let mut argmin = f64::NAN;
    let mut evaluated = 0;
    for &x0 in x0_grid {
        if xs.iter().any(|x| (x - x0).abs() <= 1e-9 * span) {
            continue;
        }
        let worst = reduced_residuals(config, m0, x0)?.into_iter().map(f64::abs).fold(0.0, f64::max) / scale;
        evaluated += 1;
        if worst < best {
            best = worst;
            argmin = x0;
        }
    }
    Ok(WitnessReport {
        n: config.len(),
        m0,
        multiplier: lambda,
        scale,
        points_evaluated: evaluated,
        min_max_residual: best,
        argmin_x0: argmin,
        bounded_away: evaluated > 0 && best > WITNESS_FLOOR,
    })
}

/// The symmetric equal-mass four-body collinear central configuration
/// `(-1, -a, a, 1)`, found by safeguarded Newton on the inner position.
pub fn symmetric_four_body() -> Configuration {
    // Acceleration balance: inner/a = outer/1 for unit masses.
    let f = |a: f64| {
        let inner = -1.0 / (a + 1.0).powi(2) - 1.0 / (2.0 * a).powi(2) + 1.0 / (1.0 - a).powi(2);
        let outer = -1.0 / (1.0 + a).powi(2) - 1.0 / (1.0 - a).powi(2) - 0.25;
        inner / a - outer
    };
    let (mut lo, mut hi) = (1e-3, 1.0 - 1e-3);
    debug_assert!(f(lo) * f(hi) < 0.0);
    let mut a = 0.5 * (lo + hi);
    for _ in 0..100 {
        let fa = f(a);
        if fa == 0.0 {
            break;
        }
        if fa * f(lo) < 0.0 {
            hi = a;
        } else {
            lo = a;
        }
        let h = 1e-7 * a;
        let df = (f(a + h) - f(a - h)) / (2.0 * h);
        let newton = a - fa / df;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - a).abs() <= 1e-16 * a {
            a = next;
            break;
        }
        a = next;
    }
    Configuration::new(
        vec![1.0; 4],
        [-1.0, -a, a, 1.0].iter().map(|x| Vec3::new(*x, 0.0, 0.0)).collect(),
    )
    .expect("distinct positions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eval(p: f64, q: f64, z: Complex64) -> Complex64 {
        z * z * z + z * p + q
    }

    #[test]
    fn discriminant_formula() {
        assert_eq!(cubic_discriminant(1.0, 0.0, 0.0, -1.0), -27.0);
        // (z-1)(z-2)(z-3) = z³ - 6z² + 11z - 6 has Δ = 4.
        assert_eq!(cubic_discriminant(1.0, -6.0, 11.0, -6.0), 4.0);
    }

    #[test]
    fn roots_solve_the_cubic() {
        for (p, q) in [(-3.0, 1.0), (1.0, 1.0), (-3.0, 2.0), (0.0, -8.0), (-1.0, 0.0), (2.0, 0.0), (-7.0, 6.0)] {
            for z in depressed_cubic_roots(p, q) {
                assert!(eval(p, q, z).norm() < 1e-12, "p={p} q={q} z={z}");
            }
        }
        let r = depressed_cubic_roots(-7.0, 6.0);
        assert_eq!(r.map(|z| z.re), [-3.0, 1.0, 2.0]);
    }

    #[test]
    fn profile_examples() {
        // α = 0, β = -m0: -m0 z³ - m0 = 0 gives z = -1; m0 z³ - m0 = 0 gives z = 1.
        let p = cubic_root_profile(0.0, -2.0, 2.0).unwrap();
        assert_eq!(p.negative_roots_of_minus, 1);
        assert_eq!(p.positive_roots_of_plus, 1);
        assert_eq!(p.total(), 2);
        assert!(cubic_root_profile(1.0, 1.0, 0.0).is_err());
        // Double root at z = 1 of z³ - 3z + 2: counted once.
        let p = cubic_root_profile(-3.0, 2.0, 1.0).unwrap();
        assert_eq!(p.positive_roots_of_plus, 1);
    }

    #[test]
    fn vieta_relations() {
        let (alpha, beta, m0) = (-2.5, 0.7, 1.3);
        let p = cubic_root_profile(alpha, beta, m0).unwrap();
        let sum: Complex64 = p.roots_plus.iter().sum();
        let prod: Complex64 = p.roots_plus.iter().product();
        assert!(sum.norm() < 1e-10);
        assert!((prod - Complex64::new(-beta / m0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn euler_symmetric_cases() {
        for m0 in [0.1, 1.0, 17.0] {
            let sols = euler_solve(1.0, 1.0, m0, 0.0, 1.0).unwrap();
            assert_relative_eq!(sols[1].x0, 0.5, epsilon = 1e-13);
            assert_relative_eq!(sols[0].x0, 1.0 - sols[2].x0, epsilon = 1e-12);
        }
    }

    #[test]
    fn euler_solutions_are_central() {
        let sols = euler_solve(1.0, 2.0, 3.0, 0.0, 1.0).unwrap();
        assert!(sols[0].x0 < 0.0);
        assert!(sols[1].x0 > 0.0 && sols[1].x0 < 1.0);
        assert!(sols[2].x0 > 1.0);
        for s in &sols {
            let r = config::normalized_residual(&s.configuration);
            assert!(r <= 1e-12, "{:?}: {r}", s.interval);
        }
        assert!(euler_solve(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(euler_solve(1.0, 0.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn euler_matches_bisection_oracle() {
        // Independent oracle: bisect the collinear CC condition directly on
        // the middle interval via the normalized residual's affine test.
        let (m1, m2, m0) = (1.0, 2.0, 3.0);
        let g = |x0: f64| {
            let xs = [x0, 0.0, 1.0];
            let ms = [m0, m1, m2];
            let acc = |i: usize| (0..3).filter(|&j| j != i).map(|j| ms[j] * (xs[j] - xs[i]).signum() / (xs[j] - xs[i]).powi(2)).sum::<f64>();
            (acc(0) - acc(1)) / (xs[0] - xs[1]) - (acc(2) - acc(1)) / (xs[2] - xs[1])
        };
        let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
        assert!(g(lo) * g(hi) < 0.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let sols = euler_solve(m1, m2, m0, 0.0, 1.0).unwrap();
        assert_relative_eq!(sols[1].x0, 0.5 * (lo + hi), epsilon = 1e-12);
    }

    #[test]
    fn reduced_equations_vanish_at_euler_points() {
        let two = Configuration::new(vec![1.0, 2.0], vec![Vec3::zeros(), Vec3::x()]).unwrap();
        for s in euler_solve(1.0, 2.0, 0.7, 0.0, 1.0).unwrap() {
            let res = reduced_residuals(&two, 0.7, s.x0).unwrap();
            for r in res {
                assert!(r.abs() < 1e-12, "{:?}: {r}", s.interval);
            }
        }
        assert_eq!(
            collinear_nonextension_witness(&two, 1.0, &[0.5]),
            Err(Error::ExtensionPossible)
        );
    }

    #[test]
    fn four_body_fixture_is_central() {
        let c = symmetric_four_body();
        assert!(config::normalized_residual(&c) < 1e-13);
        assert_relative_eq!(c.positions()[2].x, 0.316_243_493_007, epsilon = 1e-10);
    }

    #[test]
    fn witness_stays_away_from_zero() {
        let euler = euler_solve(1.0, 1.0, 1.0, -1.0, 1.0).unwrap()[1].configuration.clone();
        for base in [euler, symmetric_four_body()] {
            let grid = default_witness_grid(&base, 1000).unwrap();
            for m0 in [0.01, 0.1, 1.0, 10.0, 100.0] {
                let rep = collinear_nonextension_witness(&base, m0, &grid).unwrap();
                assert!(rep.bounded_away, "{rep:?}");
            }
        }
    }

    #[test]
    fn line_coordinates_of_tilted_line() {
        let d = Vec3::new(1.0, 2.0, 2.0) / 3.0;
        let off = Vec3::new(2.0, -1.0, 0.0);
        let c = Configuration::new(vec![1.0; 3], vec![off, off + d * 2.0, off + d * 5.0]).unwrap();
        let xs = line_coordinates(&c).unwrap();
        assert_relative_eq!(xs[1] - xs[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(xs[2] - xs[0], 5.0, epsilon = 1e-14);
        let sq = crate::special::named_config(&crate::special::NamedConfig::Square { masses: [1.0; 4], side: 1.0 }).unwrap();
        assert_eq!(line_coordinates(&sq), Err(Error::NotCollinear));
    }
}
