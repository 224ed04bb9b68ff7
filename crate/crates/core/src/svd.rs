//! One-sided (Hestenes) Jacobi SVD for small dense square matrices.
//!
//! Columns are orthogonalized pairwise by unitary plane rotations applied from
//! the right. At convergence the column norms are the singular values. The
//! accumulated right factor is kept so a reconstruction residual can be
//! reported.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvdError {
    #[error("Jacobi SVD did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
}

/// Entry type of a matrix the Jacobi iteration can act on.
pub trait Scalar:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn conj(self) -> Self;
    fn abs_sqr(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn is_finite(self) -> bool;

    fn abs(self) -> f64 {
        self.abs_sqr().sqrt()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn conj(self) -> Self {
        self
    }
    fn abs_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
    fn abs(self) -> f64 {
        self.norm()
    }
}

/// Square matrix stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> ColMatrix<T> {
    /// Builds the matrix from `entry(row, col)`.
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for c in 0..n {
            for r in 0..n {
                data.push(entry(r, c));
            }
        }
        ColMatrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[col * self.n + row]
    }

    fn col(&self, c: usize) -> &[T] {
        &self.data[c * self.n..(c + 1) * self.n]
    }

    fn two_cols_mut(&mut self, i: usize, j: usize) -> (&mut [T], &mut [T]) {
        debug_assert!(i < j);
        let n = self.n;
        let (lo, hi) = self.data.split_at_mut(j * n);
        (&mut lo[i * n..(i + 1) * n], &mut hi[..n])
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c)).collect()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `max |A - U S V^*|` divided by the Frobenius norm of `A` (0 for `A = 0`).
    pub residual: f64,
    pub sweeps: usize,
}

/// Sweep cap per unit of dimension.
pub const SWEEPS_PER_DIM: usize = 100;

fn rotation_threshold(n: usize) -> f64 {
    f64::EPSILON * (n.max(1) as f64)
}

/// Runs the Jacobi sweeps on `work` (replaced by `A V`), optionally rotating `v`.
fn orthogonalize<T: Scalar>(work: &mut ColMatrix<T>, mut v: Option<&mut ColMatrix<T>>) -> Result<usize, SvdError> {
    let n = work.n;
    if work.data.iter().any(|x| !x.is_finite()) {
        return Err(SvdError::NonFinite);
    }
    let threshold = rotation_threshold(n);
    let max_sweeps = SWEEPS_PER_DIM * n.max(1);
    let mut norms: Vec<f64> = (0..n).map(|c| work.col(c).iter().map(|x| x.abs_sqr()).sum()).collect();
    // columns below this squared norm are rounding noise of a rank-deficient matrix
    let negligible = (f64::EPSILON * n.max(1) as f64).powi(2) * norms.iter().sum::<f64>();
    for sweep in 1..=max_sweeps {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let (alpha, beta) = (norms[i], norms[j]);
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let (ci, cj) = work.two_cols_mut(i, j);
                let gamma = ci.iter().zip(cj.iter()).fold(T::zero(), |acc, (&a, &b)| acc + a.conj() * b);
                let g = gamma.abs();
                if g <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // phase so that the off-diagonal entry becomes real and positive
                let phase_conj = gamma.conj().scale(1.0 / g);
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(ci, cj, c, s, phase_conj);
                if let Some(v) = v.as_deref_mut() {
                    let (vi, vj) = v.two_cols_mut(i, j);
                    rotate(vi, vj, c, s, phase_conj);
                }
                norms[i] = work.col(i).iter().map(|x| x.abs_sqr()).sum();
                norms[j] = work.col(j).iter().map(|x| x.abs_sqr()).sum();
            }
        }
        if !rotated {
            return Ok(sweep);
        }
    }
    Err(SvdError::NoConvergence { sweeps: max_sweeps })
}

#[inline]
fn rotate<T: Scalar>(ci: &mut [T], cj: &mut [T], c: f64, s: f64, phase_conj: T) {
    for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
        let bj = *b * phase_conj;
        let ai = *a;
        *a = ai.scale(c) - bj.scale(s);
        *b = ai.scale(s) + bj.scale(c);
    }
}

fn column_norms_desc<T: Scalar>(work: &ColMatrix<T>) -> Vec<f64> {
    let mut sv: Vec<f64> = (0..work.n).map(|c| work.col(c).iter().map(|x| x.abs_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Singular values only, without the right factor or residual.
pub fn singular_values<T: Scalar>(a: &ColMatrix<T>) -> Result<Vec<f64>, SvdError> {
    let mut work = a.clone();
    orthogonalize(&mut work, None)?;
    Ok(column_norms_desc(&work))
}

/// Singular values with a reconstruction residual.
pub fn decompose<T: Scalar>(a: &ColMatrix<T>) -> Result<Svd, SvdError> {
    let n = a.n;
    let mut work = a.clone();
    let mut v = ColMatrix::<T>::identity(n);
    let sweeps = orthogonalize(&mut work, Some(&mut v))?;

    // A V = W with orthogonal columns, so A = W V^*.
    let frob: f64 = a.data.iter().map(|x| x.abs_sqr()).sum::<f64>().sqrt();
    let mut max_err: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + work.get(r, k) * v.get(c, k).conj();
            }
            max_err = max_err.max((acc - a.get(r, c)).abs());
        }
    }
    let residual = if frob > 0.0 { max_err / frob } else { 0.0 };
    Ok(Svd { singular_values: column_norms_desc(&work), residual, sweeps })
}
