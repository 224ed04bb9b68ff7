//! Norms in `A(Z)` of finitely supported functions.
//!
//! `||f||_{A(Z)} = (1/2pi) int_0^{2pi} |sum_j f(j) e^{-ij theta}| d theta`.
//! The transform is sampled on a uniform grid with an FFT and integrated with
//! the trapezoid rule. Where the sampled transform swings through (or near)
//! zero between two grid points the integrand has a kink, and the trapezoid
//! panel is replaced by the exact integral of the modulus of the linear
//! interpolant. That leaves a clean `O(h^2)` error, so successive doublings
//! are Richardson-extrapolated and the doubling stops once two consecutive
//! extrapolated estimates agree to `abs_tol`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourier::{a_norm_abelian_oracle, GroupFunction, NormError};
use crate::group::build_cyclic;

/// Hard cap on the quadrature grid.
pub const MAX_POINTS: usize = 1 << 24;
const CHUNK: usize = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZlineError {
    #[error("function has empty support")]
    EmptySupport,
    #[error("support must be strictly increasing")]
    UnsortedSupport,
    #[error("stored values must be nonzero and finite")]
    BadValue,
    #[error("support and values differ in length")]
    LengthMismatch,
    #[error("quadrature did not reach tolerance {tol:e} within {points} points (last change {last_change:e})")]
    NoConvergence { tol: f64, points: usize, last_change: f64 },
    #[error("invalid quadrature configuration: {0}")]
    BadConfig(String),
    #[error("Z_{n} is too small for support width {width}: reduction would wrap around")]
    ModulusTooSmall { n: usize, width: usize },
    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// A finitely supported function on the integers.
#[derive(Debug, Clone, PartialEq)]
pub struct ZFunction {
    support: Vec<i64>,
    values: Vec<Complex64>,
}

impl ZFunction {
    pub fn new(support: Vec<i64>, values: Vec<Complex64>) -> Result<Self, ZlineError> {
        if support.len() != values.len() {
            return Err(ZlineError::LengthMismatch);
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ZlineError::UnsortedSupport);
        }
        if values.iter().any(|v| !v.is_finite() || *v == Complex64::new(0.0, 0.0)) {
            return Err(ZlineError::BadValue);
        }
        Ok(ZFunction { support, values })
    }

    /// Characteristic function of the integer interval `lo..=hi`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        let support: Vec<i64> = (lo..=hi).collect();
        let values = vec![Complex64::new(1.0, 0.0); support.len()];
        ZFunction { support, values }
    }

    pub fn indicator(set: &[i64]) -> Result<Self, ZlineError> {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        let values = vec![Complex64::new(1.0, 0.0); s.len()];
        Self::new(s, values)
    }

    pub fn delta() -> Self {
        Self::interval(0, 0)
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_abs_index(&self) -> usize {
        self.support.iter().map(|j| j.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn shifted(&self, by: i64) -> Self {
        ZFunction { support: self.support.iter().map(|j| j + by).collect(), values: self.values.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureScheme {
    TrapezoidUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub scheme: QuadratureScheme,
    /// Initial grid size; raised to a power of two and to `4 (max|j| + 1)`.
    pub points: usize,
    pub abs_tol: f64,
    pub max_points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { scheme: QuadratureScheme::TrapezoidUniform, points: 16, abs_tol: 1e-8, max_points: MAX_POINTS }
    }
}

impl QuadratureConfig {
    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureConfig { abs_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub points: usize,
}

/// `||f||_{A(Z)}` by refined trapezoid quadrature of the transform modulus.
pub fn az_norm(f: &ZFunction, cfg: &QuadratureConfig) -> Result<Quadrature, ZlineError> {
    if f.support.is_empty() {
        return Err(ZlineError::EmptySupport);
    }
    if cfg.abs_tol.is_nan() || cfg.abs_tol <= 0.0 {
        return Err(ZlineError::BadConfig("abs_tol must be positive".into()));
    }
    let max_points = cfg.max_points.min(MAX_POINTS);
    let mut n = cfg.points.max(4 * (f.max_abs_index() + 1)).max(8).next_power_of_two();
    if n > max_points {
        return Err(ZlineError::BadConfig(format!("support needs at least {n} points, cap is {max_points}")));
    }
    let center = (f.support[0] + f.support[f.support.len() - 1]) as f64 / 2.0;
    let mut planner = FftPlanner::<f64>::new();

    let mut prev_raw: Option<f64> = None;
    let mut prev_extrap: Option<f64> = None;
    let mut prev_change = f64::INFINITY;
    loop {
        let raw = corrected_trapezoid(f, n, center, &mut planner);
        if let Some(coarse) = prev_raw {
            let extrap = (4.0 * raw - coarse) / 3.0;
            if let Some(last) = prev_extrap {
                let change = (extrap - last).abs();
                if change < cfg.abs_tol && prev_change < cfg.abs_tol {
                    return Ok(Quadrature { value: extrap, points: n });
                }
                prev_change = change;
            }
            prev_extrap = Some(extrap);
        }
        prev_raw = Some(raw);
        if n * 2 > max_points {
            return Err(ZlineError::NoConvergence { tol: cfg.abs_tol, points: n, last_change: prev_change });
        }
        n *= 2;
    }
}

/// Samples `p(theta_k) = sum_j f(j) e^{-i j theta_k}` on `n` equispaced points.
fn sample_transform(f: &ZFunction, n: usize, planner: &mut FftPlanner<f64>) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (&j, &v) in f.support.iter().zip(&f.values) {
        buf[j.rem_euclid(n as i64) as usize] += v;
    }
    planner.plan_fft_forward(n).process(&mut buf);
    buf
}

fn corrected_trapezoid(f: &ZFunction, n: usize, center: f64, planner: &mut FftPlanner<f64>) -> f64 {
    let samples = sample_transform(f, n, planner);
    let step = std::f64::consts::TAU / n as f64;
    // Remove the linear phase of the support midpoint so symmetric data is real.
    let demod = |k: usize| samples[k % n] * Complex64::from_polar(1.0, center * step * k as f64);
    let partial: Vec<f64> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(CHUNK)
        .map(|ks| {
            let panels: Vec<f64> = ks.iter().map(|&k| panel(demod(k), demod(k + 1))).collect();
            pairwise_sum(&panels)
        })
        .collect();
    pairwise_sum(&partial) / n as f64
}

/// Integral over one unit panel of `|z|` along the segment from `z0` to `z1`.
fn panel(z0: Complex64, z1: Complex64) -> f64 {
    let trapezoid = 0.5 * (z0.norm() + z1.norm());
    if (z0.conj() * z1).re >= 0.0 {
        return trapezoid;
    }
    segment_modulus_integral(z0, z1)
}

/// `int_0^1 |z0 + t (z1 - z0)| dt` in closed form.
fn segment_modulus_integral(z0: Complex64, z1: Complex64) -> f64 {
    let d = z1 - z0;
    let a = d.norm_sqr();
    if a == 0.0 {
        return z0.norm();
    }
    let cross = (z0.conj() * d).im;
    let b = (z0.conj() * d).re;
    let u0 = b / a;
    let u1 = 1.0 + u0;
    let r = cross.abs() / a;
    let antiderivative = |u: f64| {
        if r == 0.0 {
            0.5 * u * u.abs()
        } else {
            let s = (u * u + r * r).sqrt();
            0.5 * (u * s + r * r * (u / r).asinh())
        }
    };
    a.sqrt() * (antiderivative(u1) - antiderivative(u0))
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        len if len <= 8 => xs.iter().sum(),
        len => {
            let (a, b) = xs.split_at(len / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `L^1` norm of the Dirichlet kernel `D_k`, i.e. `||chi_{-k..k}||_{A(Z)}`.
pub fn dirichlet_norm(k: u64, cfg: &QuadratureConfig) -> Result<Quadrature, ZlineError> {
    let k = k as i64;
    az_norm(&ZFunction::interval(-k, k), cfg)
}

/// Norm in `A(Z_n)` of `f` reduced mod `n`, by the character oracle.
pub fn circulant_approx(f: &ZFunction, n: usize) -> Result<f64, ZlineError> {
    let width = f.max_abs_index() + 1;
    if n <= 2 * width {
        return Err(ZlineError::ModulusTooSmall { n, width });
    }
    let g = Arc::new(build_cyclic(n).map_err(NormError::from)?);
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for (&j, &v) in f.support.iter().zip(&f.values) {
        values[j.rem_euclid(n as i64) as usize] = v;
    }
    let u = GroupFunction::new(&g, values)?;
    Ok(a_norm_abelian_oracle(&u)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual of the fit.
    pub residual: f64,
}

/// Least-squares fit `norm ~ slope * ln k + intercept`.
pub fn log_growth_fit(k_values: &[f64], norms: &[f64]) -> Result<LogFit, ZlineError> {
    if k_values.len() != norms.len() {
        return Err(ZlineError::DegenerateFit("length mismatch".into()));
    }
    if k_values.len() < 4 {
        return Err(ZlineError::DegenerateFit("need at least 4 points".into()));
    }
    if k_values.iter().any(|&k| k.is_nan() || k <= 0.0) || k_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZlineError::DegenerateFit("k values must be positive and increasing".into()));
    }
    let m = k_values.len() as f64;
    let xs: Vec<f64> = k_values.iter().map(|k| k.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / m;
    let mean_y = norms.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(norms).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = xs.iter().zip(norms).map(|(x, y)| (y - slope * x - intercept).abs()).fold(0.0, f64::max);
    Ok(LogFit { slope, intercept, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// `(1/2pi) int |1 + 2 cos x| dx = 1/3 + 2 sqrt(3)/pi`, split at the roots `+-2pi/3`.
    fn d1_closed_form() -> f64 {
        1.0 / 3.0 + 2.0 * 3f64.sqrt() / std::f64::consts::PI
    }

    /// Plain midpoint rule on the closed-form Dirichlet kernel at 2^20 points.
    fn brute_dirichlet(k: i64) -> f64 {
        let n = 1usize << 20;
        let h = std::f64::consts::TAU / n as f64;
        let d = (2 * k + 1) as f64;
        (0..n)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                ((d * x / 2.0).sin() / (x / 2.0).sin()).abs()
            })
            .sum::<f64>()
            / n as f64
    }

    #[test]
    fn delta_has_norm_one() {
        let q = az_norm(&ZFunction::delta(), &QuadratureConfig::default()).unwrap();
        assert_abs_diff_eq!(q.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn modulation_invariance() {
        let cfg = QuadratureConfig::default();
        let a = az_norm(&ZFunction::interval(0, 6), &cfg).unwrap().value;
        let b = az_norm(&ZFunction::interval(11, 17), &cfg).unwrap().value;
        let c = az_norm(&ZFunction::interval(-40, -34), &cfg).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        assert_abs_diff_eq!(a, c, epsilon = 1e-8);
    }

    #[test]
    fn d1_matches_oracles() {
        let cfg = QuadratureConfig::with_tol(1e-10);
        let q = az_norm(&ZFunction::interval(-1, 1), &cfg).unwrap();
        assert_abs_diff_eq!(q.value, d1_closed_form(), epsilon = 1e-9);
        assert_abs_diff_eq!(q.value, brute_dirichlet(1), epsilon = 1e-8);
        assert_eq!(dirichlet_norm(1, &cfg).unwrap(), q);
        assert_abs_diff_eq!(dirichlet_norm(0, &cfg).unwrap().value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn dirichlet_against_brute_force() {
        let cfg = QuadratureConfig::default();
        for k in [2, 5, 16, 40] {
            let q = dirichlet_norm(k, &cfg).unwrap();
            assert_abs_diff_eq!(q.value, brute_dirichlet(k as i64), epsilon = 1e-7);
        }
    }

    #[test]
    fn complex_valued_function() {
        // f = delta_0 + i delta_1: |1 + i e^{-i t}|, brute-forced by the midpoint rule
        let f = ZFunction::new(vec![0, 1], vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]).unwrap();
        let n = 1 << 16;
        let h = std::f64::consts::TAU / n as f64;
        let brute = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) * h;
                (Complex64::new(1.0, 0.0) + Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, -t)).norm()
            })
            .sum::<f64>()
            / n as f64;
        let q = az_norm(&f, &QuadratureConfig::default()).unwrap();
        assert_abs_diff_eq!(q.value, brute, epsilon = 1e-8);
    }

    #[test]
    fn segment_integral_cases() {
        // radial segment through the origin: |t - 1/2| over [0,1] = 1/4
        let v = segment_modulus_integral(Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0));
        assert_abs_diff_eq!(v, 0.25, epsilon = 1e-15);
        // constant
        assert_abs_diff_eq!(segment_modulus_integral(Complex64::new(0.0, 2.0), Complex64::new(0.0, 2.0)), 2.0);
        // segment from -1+i to 1+i: int_{-1}^{1} sqrt(u^2+1) du / 2
        let exact = (2f64.sqrt() + 1f64.asinh()) / 2.0;
        let v = segment_modulus_integral(Complex64::new(-1.0, 1.0), Complex64::new(1.0, 1.0));
        assert_abs_diff_eq!(v, exact, epsilon = 1e-14);
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(ZFunction::new(vec![1, 0], vec![Complex64::new(1.0, 0.0); 2]), Err(ZlineError::UnsortedSupport));
        assert_eq!(ZFunction::new(vec![0], vec![Complex64::new(0.0, 0.0)]), Err(ZlineError::BadValue));
        let empty = ZFunction { support: vec![], values: vec![] };
        assert_eq!(az_norm(&empty, &QuadratureConfig::default()), Err(ZlineError::EmptySupport));
        let tight = QuadratureConfig { max_points: 64, abs_tol: 1e-14, ..QuadratureConfig::default() };
        assert!(matches!(az_norm(&ZFunction::interval(-5, 5), &tight), Err(ZlineError::NoConvergence { .. })));
        assert!(matches!(circulant_approx(&ZFunction::interval(-3, 3), 8), Err(ZlineError::ModulusTooSmall { .. })));
    }

    #[test]
    fn circulant_examples() {
        assert_abs_diff_eq!(circulant_approx(&ZFunction::delta(), 7).unwrap(), 1.0, epsilon = 1e-12);
        let z5 = circulant_approx(&ZFunction::interval(0, 1), 5).unwrap();
        assert_abs_diff_eq!(z5, 2.0 * (1.0 + 5f64.sqrt()) / 5.0, epsilon = 1e-12);
        // refinement: error at 2n smaller than at n
        let k = 3;
        let exact = dirichlet_norm(k, &QuadratureConfig::with_tol(1e-11)).unwrap().value;
        let f = ZFunction::interval(-(k as i64), k as i64);
        let e1 = (circulant_approx(&f, 16).unwrap() - exact).abs();
        let e2 = (circulant_approx(&f, 32).unwrap() - exact).abs();
        let e3 = (circulant_approx(&f, 64).unwrap() - exact).abs();
        assert!(e2 < e1 && e3 < e2, "{e1} {e2} {e3}");
    }

    #[test]
    fn log_fit() {
        let ks = [1.0, 2.0, 4.0, 8.0, 16.0];
        let flat = log_growth_fit(&ks, &[3.0; 5]).unwrap();
        assert_abs_diff_eq!(flat.slope, 0.0, epsilon = 1e-15);
        let ys: Vec<f64> = ks.iter().map(|k: &f64| 0.4 * k.ln() + 1.25).collect();
        let fit = log_growth_fit(&ks, &ys).unwrap();
        assert_abs_diff_eq!(fit.slope, 0.4, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.intercept, 1.25, epsilon = 1e-9);
        assert!(fit.residual < 1e-12);
        assert!(log_growth_fit(&ks[..3], &ys[..3]).is_err());
        assert!(log_growth_fit(&[1.0, 1.0, 2.0, 3.0], &[0.0; 4]).is_err());
    }
}
