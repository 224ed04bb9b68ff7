//! Fourier-algebra norms on finite groups.
//!
//! For a function `u` on a finite group `G` of order `n`, the norm in `A(G)`
//! is `(1/n)` times the trace norm of the group matrix `K[x][y] = u(x y^-1)`.
//! On a finite group this single number is also the `B(G)` norm and the
//! completely bounded multiplier norm.
//!
//! Abelian groups get a second, independent route: `(1/n) sum_chi |u^(chi)|`
//! over the dual group, with characters built from a chain of cyclic
//! extensions of the group table.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, Quotient, Subgroup};
use crate::svd::{self, ColMatrix, SvdError};

/// Default relative tolerance on the SVD reconstruction residual.
pub const DEFAULT_SVD_TOL: f64 = 1e-12;
/// Largest group order handled by the trace-norm route.
pub const MAX_SVD_ORDER: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error(transparent)]
    Svd(#[from] SvdError),
    #[error("SVD residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("group of order {order} is too large for the trace-norm route (max {max})")]
    TooLarge { order: usize, max: usize },
    #[error("the character oracle needs an abelian group; {0} is not abelian")]
    NotAbelian(String),
    #[error("function values must be finite")]
    NonFinite,
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl NormError {
    /// True when the failure is numerical rather than a bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, NormError::Svd(SvdError::NoConvergence { .. }) | NormError::ResidualTooLarge { .. })
    }
}

/// A complex-valued function on a finite group.
#[derive(Debug, Clone)]
pub struct GroupFunction {
    group: Arc<FiniteGroup>,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: &Arc<FiniteGroup>, values: Vec<Complex64>) -> Result<Self, NormError> {
        if values.len() != group.order() {
            return Err(NormError::WrongLength { expected: group.order(), got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(NormError::NonFinite);
        }
        Ok(GroupFunction { group: Arc::clone(group), values })
    }

    pub fn from_real(group: &Arc<FiniteGroup>, values: &[f64]) -> Result<Self, NormError> {
        Self::new(group, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Characteristic function of `set`.
    pub fn indicator(group: &Arc<FiniteGroup>, set: &[usize]) -> Result<Self, NormError> {
        let mut values = vec![Complex64::new(0.0, 0.0); group.order()];
        for &x in set {
            group.check_element(x)?;
            values[x] = Complex64::new(1.0, 0.0);
        }
        Ok(GroupFunction { group: Arc::clone(group), values })
    }

    pub fn delta_identity(group: &Arc<FiniteGroup>) -> Self {
        Self::indicator(group, &[0]).expect("identity is an element")
    }

    pub fn constant(group: &Arc<FiniteGroup>, c: Complex64) -> Self {
        GroupFunction { group: Arc::clone(group), values: vec![c; group.order()] }
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        Self::constant(group, Complex64::new(0.0, 0.0))
    }

    /// Independent standard complex Gaussian values.
    pub fn random_gaussian<R: Rng + ?Sized>(group: &Arc<FiniteGroup>, rng: &mut R) -> Self {
        let values = (0..group.order())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        GroupFunction { group: Arc::clone(group), values }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, x: usize) -> Complex64 {
        self.values[x]
    }

    /// True iff every value is exactly 0 or 1.
    pub fn is_idempotent(&self) -> bool {
        self.values.iter().all(|&v| v == Complex64::new(0.0, 0.0) || v == Complex64::new(1.0, 0.0))
    }

    /// Support of an idempotent, `None` otherwise.
    pub fn support_set(&self) -> Option<Vec<usize>> {
        self.is_idempotent().then(|| (0..self.values.len()).filter(|&x| self.values[x].re == 1.0).collect())
    }

    fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self, NormError> {
        if !self.group.same_as(&other.group) {
            return Err(GroupError::GroupMismatch.into());
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(GroupFunction { group: Arc::clone(&self.group), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self, NormError> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self, NormError> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GroupFunction { group: Arc::clone(&self.group), values: self.values.iter().map(|&v| v * c).collect() }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    TraceNorm,
    CharacterOracle,
}

/// A computed norm together with the spectrum it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub group: String,
    pub subset: Option<Vec<usize>>,
    pub value: f64,
    pub method: NormMethod,
    pub singular_values: Vec<f64>,
    pub residual: f64,
    /// The same value is the `B(G)` and cb-multiplier norm because `G` is finite.
    pub cb_identification: String,
}

const FINITE_GROUP_MARKER: &str = "finite_group";

/// `K[x][y] = u(x y^-1)`, returned as rows.
pub fn group_matrix(u: &GroupFunction) -> Vec<Vec<Complex64>> {
    let g = &u.group;
    (0..g.order()).map(|x| (0..g.order()).map(|y| u.values[g.mul(x, g.inv(y))]).collect()).collect()
}

fn check_svd_size(g: &FiniteGroup) -> Result<(), NormError> {
    if g.order() > MAX_SVD_ORDER {
        return Err(NormError::TooLarge { order: g.order(), max: MAX_SVD_ORDER });
    }
    Ok(())
}

/// `A(G)` norm via the trace norm of the group matrix.
pub fn a_norm(u: &GroupFunction, svd_tol: f64) -> Result<NormReport, NormError> {
    let g = &u.group;
    check_svd_size(g)?;
    let n = g.order();
    let entry = |x: usize, y: usize| u.values[g.mul(x, g.inv(y))];
    let decomposition = if u.is_real() {
        svd::decompose(&ColMatrix::from_fn(n, |x, y| entry(x, y).re))?
    } else {
        svd::decompose(&ColMatrix::from_fn(n, entry))?
    };
    if decomposition.residual > svd_tol {
        return Err(NormError::ResidualTooLarge { residual: decomposition.residual, tol: svd_tol });
    }
    let value = decomposition.singular_values.iter().sum::<f64>() / n as f64;
    Ok(NormReport {
        group: g.label().to_string(),
        subset: u.support_set(),
        value,
        method: NormMethod::TraceNorm,
        singular_values: decomposition.singular_values,
        residual: decomposition.residual,
        cb_identification: FINITE_GROUP_MARKER.into(),
    })
}

/// Norm value only; skips the residual computation. Used by the search loops.
pub fn a_norm_value(u: &GroupFunction) -> Result<f64, NormError> {
    let g = &u.group;
    check_svd_size(g)?;
    let n = g.order();
    let entry = |x: usize, y: usize| u.values[g.mul(x, g.inv(y))];
    let sv = if u.is_real() {
        svd::singular_values(&ColMatrix::from_fn(n, |x, y| entry(x, y).re))?
    } else {
        svd::singular_values(&ColMatrix::from_fn(n, entry))?
    };
    Ok(sv.iter().sum::<f64>() / n as f64)
}

/// Norm of the characteristic function of `set` (which must be in range).
pub fn indicator_norm(g: &FiniteGroup, set: &[usize]) -> Result<f64, NormError> {
    check_svd_size(g)?;
    let n = g.order();
    let mut inside = vec![false; n];
    for &x in set {
        g.check_element(x)?;
        inside[x] = true;
    }
    let sv = svd::singular_values(&ColMatrix::from_fn(n, |x, y| {
        if inside[g.mul(x, g.inv(y))] {
            1.0
        } else {
            0.0
        }
    }))?;
    Ok(sv.iter().sum::<f64>() / n as f64)
}

// ---------------------------------------------------------------------------
// Character oracle

/// Dual group of a finite abelian group.
///
/// Elements are written in coordinates along a chain
/// `{e} = H_0 < H_1 < ... < H_r = G` with `H_i = <H_{i-1}, g_i>` cyclic over
/// `H_{i-1}`; a character is fixed by its values on the `g_i`, stored as
/// exponents of `exp(2 pi i / L)` where `L` is the group exponent.
#[derive(Debug, Clone)]
pub struct DualGroup {
    exponent: usize,
    coords: Vec<Vec<usize>>,
    characters: Vec<Vec<usize>>,
}

impl DualGroup {
    pub fn new(g: &FiniteGroup) -> Result<Self, NormError> {
        if !g.is_abelian() {
            return Err(NormError::NotAbelian(g.label().to_string()));
        }
        let n = g.order();
        let orders: Vec<usize> = (0..n).map(|x| g.element_order(x)).collect();
        let exponent = orders.iter().copied().max().unwrap_or(1);

        let mut inside = vec![false; n];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut coords: Vec<Vec<usize>> = vec![Vec::new(); n];
        // (step m_i, coordinates of g_i^{m_i} in H_{i-1})
        let mut relations: Vec<(usize, Vec<usize>)> = Vec::new();

        while members.len() < n {
            let gen = (0..n)
                .filter(|&x| !inside[x])
                .max_by_key(|&x| (orders[x], std::cmp::Reverse(x)))
                .expect("group not exhausted");
            let mut step = 1;
            let mut power = gen;
            while !inside[power] {
                power = g.mul(power, gen);
                step += 1;
            }
            let rel = coords[power].clone();
            let old = members.clone();
            for &h in &old {
                coords[h].push(0);
            }
            let mut gj = gen;
            for j in 1..step {
                for &h in &old {
                    let x = g.mul(h, gj);
                    debug_assert!(!inside[x]);
                    inside[x] = true;
                    let mut c = coords[h].clone();
                    *c.last_mut().expect("just pushed") = j;
                    coords[x] = c;
                    members.push(x);
                }
                gj = g.mul(gj, gen);
            }
            relations.push((step, rel));
        }

        let mut characters: Vec<Vec<usize>> = vec![Vec::new()];
        for (step, rel) in &relations {
            let mut next = Vec::with_capacity(characters.len() * step);
            for chi in &characters {
                let target = rel.iter().zip(chi).map(|(c, b)| c * b).sum::<usize>() % exponent;
                for root in roots_of(*step, target, exponent) {
                    let mut ext = chi.clone();
                    ext.push(root);
                    next.push(ext);
                }
            }
            characters = next;
        }
        debug_assert_eq!(characters.len(), n);
        Ok(DualGroup { exponent, coords, characters })
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    /// `chi_k(x)` as an exponent of `exp(2 pi i / L)`.
    pub fn character_exponent(&self, k: usize, x: usize) -> usize {
        self.coords[x].iter().zip(&self.characters[k]).map(|(c, b)| c * b).sum::<usize>() % self.exponent
    }

    /// `|sum_x u(x) chi(x)|` for every character.
    pub fn transform_moduli(&self, values: &[Complex64]) -> Vec<f64> {
        let roots: Vec<Complex64> =
            (0..self.exponent).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / self.exponent as f64)).collect();
        let support: Vec<usize> = (0..values.len()).filter(|&x| values[x] != Complex64::new(0.0, 0.0)).collect();
        (0..self.characters.len())
            .map(|k| support.iter().map(|&x| values[x] * roots[self.character_exponent(k, x)]).sum::<Complex64>().norm())
            .collect()
    }
}

/// All `b` in `Z_L` with `m b = a (mod L)`; there are exactly `m` of them when `m | L`.
fn roots_of(m: usize, a: usize, l: usize) -> Vec<usize> {
    debug_assert_eq!(l % m, 0);
    let g = gcd(m, l);
    if !a.is_multiple_of(g) {
        return Vec::new();
    }
    let (mm, ll, aa) = (m / g, l / g, a / g);
    let b0 = if ll == 1 { 0 } else { aa * mod_inverse(mm % ll, ll) % ll };
    (0..g).map(|t| b0 + t * ll).collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: usize, m: usize) -> usize {
    let (mut old_r, mut r) = (a as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i64) as usize
}

/// `A(G)` norm of `u` on an abelian group through its Fourier coefficients.
pub fn a_norm_abelian_oracle(u: &GroupFunction) -> Result<NormReport, NormError> {
    let dual = DualGroup::new(&u.group)?;
    Ok(oracle_report(u, &dual))
}

/// Same as [`a_norm_abelian_oracle`] with a precomputed dual group.
pub fn oracle_report(u: &GroupFunction, dual: &DualGroup) -> NormReport {
    let mut moduli = dual.transform_moduli(&u.values);
    moduli.sort_by(|a, b| b.total_cmp(a));
    let value = moduli.iter().sum::<f64>() / u.group.order() as f64;
    NormReport {
        group: u.group.label().to_string(),
        subset: u.support_set(),
        value,
        method: NormMethod::CharacterOracle,
        singular_values: moduli,
        residual: 0.0,
        cb_identification: FINITE_GROUP_MARKER.into(),
    }
}

// ---------------------------------------------------------------------------
// Quotients and restriction

/// `u o pi` for `u` on the quotient group.
pub fn pullback_function(q: &Quotient, u: &GroupFunction) -> Result<GroupFunction, NormError> {
    if !u.group.same_as(q.group()) {
        return Err(GroupError::GroupMismatch.into());
    }
    let values = q.projection().iter().map(|&p| u.values[p]).collect();
    Ok(GroupFunction { group: Arc::clone(q.source()), values })
}

/// `u|_H` as a function on `H` viewed as a group (see [`Subgroup::to_group`]).
pub fn restrict(u: &GroupFunction, h: &Subgroup) -> Result<GroupFunction, NormError> {
    if !u.group.same_as(h.parent()) {
        return Err(GroupError::GroupMismatch.into());
    }
    let group = Arc::new(h.to_group());
    let values = h.members().iter().map(|&x| u.values[x]).collect();
    Ok(GroupFunction { group, values })
}
