//! Idempotents of large norm: exhaustive search over subset orbits, seeded
//! hill climbing, product witnesses, the norm-gap audit and growth tables.
//!
//! The norm of `chi_F` is unchanged by `F -> gFh` and `F -> F^-1`, so the
//! exhaustive routines evaluate one representative per orbit of that action.
//! The representative is the orbit's smallest bitmask.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourier::{indicator_norm, DualGroup, NormError};
use crate::group::{
    build_cyclic, build_product, build_symmetric, elems_of, is_coset, is_coset_mask, FiniteGroup, GroupError,
};

/// Largest order for [`brute_force_max`].
pub const MAX_EXHAUSTIVE_ORDER: usize = 24;
/// Largest order for [`gap_audit`].
pub const MAX_AUDIT_ORDER: usize = 16;
/// Two norms closer than this are treated as equal when ranking.
pub const NORM_EQ_TOL: f64 = 1e-10;
/// Smallest gain a hill-climbing step must make.
pub const CLIMB_MIN_GAIN: f64 = 1e-12;
pub const GAP_TOL: f64 = 1e-9;
pub const MAX_Z3_POWER: usize = 8;
pub const MAX_SYMMETRIC_GROWTH: usize = 5;

/// `(1 + sqrt 2) / 2`, the lower end of the norm gap above 1.
pub fn gap_threshold() -> f64 {
    (1.0 + std::f64::consts::SQRT_2) / 2.0
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("group of order {order} exceeds the limit {max} for this operation")]
    TooLarge { order: usize, max: usize },
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error("factor {index}: {reason}")]
    BadFactor { index: usize, reason: String },
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

type Result<T> = std::result::Result<T, SearchError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    LocalSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Among maxima equal to within [`NORM_EQ_TOL`], keep the smallest subset.
    SmallestCanonicalSubset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Maximum number of distinct norm evaluations.
    pub budget: u64,
    /// Number of hill climbs, each from a fresh random subset.
    pub restarts: u32,
    pub seed: u64,
    pub tie_break: TieBreak,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::LocalSearch,
            budget: 10_000,
            restarts: 8,
            seed: 0,
            tie_break: TieBreak::SmallestCanonicalSubset,
        }
    }
}

impl SearchConfig {
    fn check(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(SearchError::BadConfig("budget must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(SearchError::BadConfig("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub subset: Vec<usize>,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub group: String,
    pub best_subset: Vec<usize>,
    pub best_norm: f64,
    pub evaluations: u64,
    pub trace: Vec<TraceEntry>,
    pub exhausted: bool,
}

// ---------------------------------------------------------------------------
// Norm evaluation

/// Indicator norms, through characters on abelian groups and singular values otherwise.
pub(crate) struct Evaluator {
    group: Arc<FiniteGroup>,
    dual: Option<DualGroup>,
}

impl Evaluator {
    pub(crate) fn new(group: &Arc<FiniteGroup>) -> Result<Self> {
        let dual = if group.is_abelian() { Some(DualGroup::new(group)?) } else { None };
        Ok(Evaluator { group: Arc::clone(group), dual })
    }

    pub(crate) fn norm(&self, set: &[usize]) -> Result<f64> {
        match &self.dual {
            Some(dual) => {
                let mut values = vec![Complex64::new(0.0, 0.0); self.group.order()];
                for &x in set {
                    self.group.check_element(x)?;
                    values[x] = Complex64::new(1.0, 0.0);
                }
                let total: f64 = dual.transform_moduli(&values).iter().sum();
                Ok(total / self.group.order() as f64)
            }
            None => Ok(indicator_norm(&self.group, set)?),
        }
    }

    fn norm_mask(&self, mask: u64) -> Result<f64> {
        self.norm(&elems_of(mask))
    }
}

// ---------------------------------------------------------------------------
// Orbits of subsets under two-sided translation and inversion

/// The permutations `x -> g x h` and `x -> g x^-1 h`, as byte lookup tables on bitmasks.
pub(crate) struct OrbitAction {
    bytes: usize,
    /// `tables[(p * bytes + b) * 256 + v]` is the image of byte `b` with value `v` under permutation `p`.
    tables: Vec<u64>,
    perms: usize,
}

impl OrbitAction {
    pub(crate) fn new(g: &FiniteGroup) -> Result<Self> {
        let n = g.order();
        if n > MAX_EXHAUSTIVE_ORDER {
            return Err(SearchError::TooLarge { order: n, max: MAX_EXHAUSTIVE_ORDER });
        }
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut perms: Vec<Vec<u8>> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for invert in [false, true] {
                    let p: Vec<u8> = (0..n)
                        .map(|x| {
                            let y = if invert { g.inv(x) } else { x };
                            g.mul(g.mul(a, y), b) as u8
                        })
                        .collect();
                    if seen.insert(p.clone()) {
                        perms.push(p);
                    }
                }
            }
        }
        let bytes = n.div_ceil(8).max(1);
        let mut tables = vec![0u64; perms.len() * bytes * 256];
        for (pi, p) in perms.iter().enumerate() {
            for b in 0..bytes {
                for v in 0..256usize {
                    let mut image = 0u64;
                    for bit in 0..8 {
                        let x = 8 * b + bit;
                        if v >> bit & 1 == 1 && x < n {
                            image |= 1 << p[x];
                        }
                    }
                    tables[(pi * bytes + b) * 256 + v] = image;
                }
            }
        }
        Ok(OrbitAction { bytes, tables, perms: perms.len() })
    }

    #[inline]
    fn image(&self, p: usize, mask: u64) -> u64 {
        let base = p * self.bytes * 256;
        (0..self.bytes).fold(0, |acc, b| acc | self.tables[base + b * 256 + (mask >> (8 * b) & 0xff) as usize])
    }

    pub(crate) fn is_canonical(&self, mask: u64) -> bool {
        (0..self.perms).all(|p| self.image(p, mask) >= mask)
    }

    pub(crate) fn canonical(&self, mask: u64) -> u64 {
        (0..self.perms).map(|p| self.image(p, mask)).min().unwrap_or(mask)
    }

    /// One orbit image of `mask`, chosen by `which`.
    fn image_of(&self, which: usize, mask: u64) -> u64 {
        self.image(which % self.perms, mask)
    }
}

const MASK_CHUNK: u64 = 1 << 15;

/// Canonical masks of all nonempty subsets of an `n`-element group, ascending.
fn canonical_masks(action: &OrbitAction, n: usize) -> Vec<u64> {
    let end = 1u64 << n;
    let chunks: Vec<u64> = (0..end.div_ceil(MASK_CHUNK)).collect();
    chunks
        .par_iter()
        .map(|&c| {
            let lo = (c * MASK_CHUNK).max(1);
            let hi = ((c + 1) * MASK_CHUNK).min(end);
            (lo..hi).filter(|&m| action.is_canonical(m)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

fn evaluate_masks(eval: &Evaluator, masks: &[u64]) -> Result<Vec<f64>> {
    masks.par_iter().map(|&m| eval.norm_mask(m)).collect()
}

// ---------------------------------------------------------------------------
// Exhaustive and local search

/// Exact maximum of `||chi_F||` over nonempty `F`, one evaluation per orbit.
pub fn brute_force_max(g: &Arc<FiniteGroup>) -> Result<SearchResult> {
    let n = g.order();
    let action = OrbitAction::new(g)?;
    let eval = Evaluator::new(g)?;
    let masks = canonical_masks(&action, n);
    let norms = evaluate_masks(&eval, &masks)?;

    let mut best: Option<(u64, f64)> = None;
    let mut trace = Vec::new();
    for (&m, &v) in masks.iter().zip(&norms) {
        if best.is_none_or(|(_, b)| v > b + NORM_EQ_TOL) {
            best = Some((m, v));
            trace.push(TraceEntry { subset: elems_of(m), norm: v });
        }
    }
    let (mask, norm) = best.expect("every group has a nonempty subset");
    Ok(SearchResult {
        group: g.label().to_string(),
        best_subset: elems_of(mask),
        best_norm: norm,
        evaluations: masks.len() as u64,
        trace,
        exhausted: true,
    })
}

/// Bitset over group elements, used as the memo key in local search.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn flip(&mut self, x: usize) {
        self.0[x / 64] ^= 1 << (x % 64);
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn elems(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.0.iter().enumerate() {
            out.extend(elems_of(w).into_iter().map(|b| 64 * i + b));
        }
        out
    }
}

struct Climber<'a> {
    eval: &'a Evaluator,
    memo: HashMap<Bits, f64>,
    evaluations: u64,
    budget: u64,
}

impl Climber<'_> {
    fn remaining(&self) -> u64 {
        self.budget - self.evaluations
    }

    /// Norms of `sets`, evaluating unseen ones in parallel. Stops at the budget,
    /// returning only the prefix that could be afforded.
    fn norms(&mut self, sets: &[Bits]) -> Result<Vec<f64>> {
        let mut fresh: Vec<&Bits> = Vec::new();
        let mut take = sets.len();
        let mut queued: HashSet<&Bits> = HashSet::new();
        for (i, s) in sets.iter().enumerate() {
            if !self.memo.contains_key(s) && !queued.contains(s) {
                if fresh.len() as u64 == self.remaining() {
                    take = i;
                    break;
                }
                queued.insert(s);
                fresh.push(s);
            }
        }
        let values: Vec<f64> = fresh.par_iter().map(|s| self.eval.norm(&s.elems())).collect::<Result<_>>()?;
        self.evaluations += fresh.len() as u64;
        for (s, v) in fresh.into_iter().zip(values) {
            self.memo.insert(s.clone(), v);
        }
        Ok(sets[..take].iter().map(|s| self.memo[s]).collect())
    }
}

/// Seeded multi-restart hill climbing over single-element flips.
///
/// Each climb starts from a random nonempty subset and moves to the best
/// neighbor while it gains more than [`CLIMB_MIN_GAIN`]; ties go to the
/// smallest flipped element.
pub fn local_search_max(g: &Arc<FiniteGroup>, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.check()?;
    let n = g.order();
    let eval = Evaluator::new(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut climber = Climber { eval: &eval, memo: HashMap::new(), evaluations: 0, budget: cfg.budget };
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut trace = Vec::new();
    let mut record = |set: &Bits, v: f64, trace: &mut Vec<TraceEntry>| {
        let elems = set.elems();
        let replace = match &best {
            None => true,
            Some((_, b)) if v > b + NORM_EQ_TOL => true,
            Some((subset, b)) => (v - b).abs() <= NORM_EQ_TOL && elems < *subset,
        };
        if !replace {
            return;
        }
        if best.as_ref().is_none_or(|(_, b)| v > b + NORM_EQ_TOL) {
            trace.push(TraceEntry { subset: elems.clone(), norm: v });
        }
        best = Some((elems, v));
    };

    'restarts: for _ in 0..cfg.restarts {
        let mut current = Bits::empty(n);
        for x in 0..n {
            if rng.gen_bool(0.5) {
                current.flip(x);
            }
        }
        if current.is_empty() {
            current.flip(rng.gen_range(0..n));
        }
        let Some(&start) = climber.norms(std::slice::from_ref(&current))?.first() else {
            break;
        };
        record(&current, start, &mut trace);
        let mut value = start;
        loop {
            let neighbors: Vec<Bits> = (0..n)
                .map(|x| {
                    let mut s = current.clone();
                    s.flip(x);
                    s
                })
                .filter(|s| !s.is_empty())
                .collect();
            let values = climber.norms(&neighbors)?;
            let mut step: Option<(usize, f64)> = None;
            for (i, &v) in values.iter().enumerate() {
                if v > value + CLIMB_MIN_GAIN && step.is_none_or(|(_, s)| v > s) {
                    step = Some((i, v));
                }
            }
            let truncated = values.len() < neighbors.len();
            match step {
                Some((i, v)) => {
                    current = neighbors[i].clone();
                    value = v;
                    record(&current, v, &mut trace);
                }
                None if truncated => break 'restarts,
                None => break,
            }
            if truncated {
                break 'restarts;
            }
        }
    }
    let (best_subset, best_norm) = best.unwrap_or_else(|| (vec![0], 1.0));
    Ok(SearchResult {
        group: g.label().to_string(),
        best_subset,
        best_norm,
        evaluations: climber.evaluations,
        trace,
        exhausted: false,
    })
}

/// Dispatches on `cfg.strategy`.
pub fn search(g: &Arc<FiniteGroup>, cfg: &SearchConfig) -> Result<SearchResult> {
    match cfg.strategy {
        Strategy::Exhaustive => brute_force_max(g),
        Strategy::LocalSearch => local_search_max(g, cfg),
    }
}

// ---------------------------------------------------------------------------
// Product witnesses

#[derive(Debug, Clone)]
pub struct ProductWitness {
    pub group: Arc<FiniteGroup>,
    /// The rectangle `A_1 x ... x A_n`, in the product's indexing.
    pub subset: Vec<usize>,
    pub factor_norms: Vec<f64>,
    /// Product of the factor norms.
    pub norm: f64,
}

/// Builds `A_1 x ... x A_n` inside `G_1 x ... x G_n` from non-coset factors.
pub fn product_witness(factors: &[(Arc<FiniteGroup>, Vec<usize>)]) -> Result<ProductWitness> {
    if factors.is_empty() {
        return Err(SearchError::BadConfig("no factors".into()));
    }
    let mut factor_norms = Vec::with_capacity(factors.len());
    for (index, (g, set)) in factors.iter().enumerate() {
        if g.order() < 3 {
            return Err(SearchError::BadFactor { index, reason: format!("order {} is below 3", g.order()) });
        }
        if is_coset(g, set)?.is_coset() || set.is_empty() {
            return Err(SearchError::BadFactor { index, reason: format!("{set:?} is empty or a coset") });
        }
        factor_norms.push(Evaluator::new(g)?.norm(set)?);
    }
    let groups: Vec<FiniteGroup> = factors.iter().map(|(g, _)| (**g).clone()).collect();
    let group = Arc::new(build_product(&groups)?);
    let mut subset = vec![0usize];
    for (g, set) in factors {
        let mut sorted = set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        subset = subset.iter().flat_map(|&acc| sorted.iter().map(move |&a| acc * g.order() + a)).collect();
    }
    subset.sort_unstable();
    let norm = factor_norms.iter().product();
    Ok(ProductWitness { group, subset, factor_norms, norm })
}

// ---------------------------------------------------------------------------
// Norm-gap audit

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapViolation {
    pub subset: Vec<usize>,
    pub norm: f64,
    pub is_coset: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapAuditReport {
    pub group: String,
    pub order: usize,
    pub subsets_checked: u64,
    pub orbits: u64,
    pub coset_count: u64,
    pub noncoset_count: u64,
    pub min_noncoset_norm: Option<f64>,
    pub min_noncoset_subset: Option<Vec<usize>>,
    pub max_coset_deviation: f64,
    pub threshold: f64,
    pub tolerance: f64,
    pub violations: Vec<GapViolation>,
}

/// Classifies every nonempty subset as coset or not and checks both sides of the gap.
pub fn gap_audit(g: &Arc<FiniteGroup>) -> Result<GapAuditReport> {
    let n = g.order();
    if n > MAX_AUDIT_ORDER {
        return Err(SearchError::TooLarge { order: n, max: MAX_AUDIT_ORDER });
    }
    let action = OrbitAction::new(g)?;
    let eval = Evaluator::new(g)?;
    let reps = canonical_masks(&action, n);
    let rep_norms = evaluate_masks(&eval, &reps)?;
    let lookup: HashMap<u64, f64> = reps.iter().copied().zip(rep_norms).collect();

    let threshold = gap_threshold();
    let classified: Vec<(u64, bool, f64)> = (1..1u64 << n)
        .into_par_iter()
        .map(|m| (m, is_coset_mask(g, m), lookup[&action.canonical(m)]))
        .collect();

    let mut report = GapAuditReport {
        group: g.label().to_string(),
        order: n,
        subsets_checked: classified.len() as u64,
        orbits: reps.len() as u64,
        coset_count: 0,
        noncoset_count: 0,
        min_noncoset_norm: None,
        min_noncoset_subset: None,
        max_coset_deviation: 0.0,
        threshold,
        tolerance: GAP_TOL,
        violations: Vec::new(),
    };
    for (m, coset, v) in classified {
        if coset {
            report.coset_count += 1;
            report.max_coset_deviation = report.max_coset_deviation.max((v - 1.0).abs());
            if (v - 1.0).abs() > GAP_TOL {
                report.violations.push(GapViolation { subset: elems_of(m), norm: v, is_coset: true });
            }
        } else {
            report.noncoset_count += 1;
            if report.min_noncoset_norm.is_none_or(|b| v < b) {
                report.min_noncoset_norm = Some(v);
                report.min_noncoset_subset = Some(elems_of(m));
            }
            if v < threshold - GAP_TOL {
                report.violations.push(GapViolation { subset: elems_of(m), norm: v, is_coset: false });
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Growth tables

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cyclic,
    Z3power,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthConfig {
    pub family: Family,
    pub min_n: usize,
    pub max_n: usize,
    /// Cyclic groups up to this order are searched exhaustively, larger ones use intervals.
    pub exhaustive_cap: usize,
    pub search: SearchConfig,
}

impl GrowthConfig {
    pub fn new(family: Family, min_n: usize, max_n: usize) -> Self {
        GrowthConfig {
            family,
            min_n,
            max_n,
            exhaustive_cap: 16,
            search: SearchConfig { budget: 400, restarts: 4, ..SearchConfig::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub group: String,
    pub order: usize,
    pub subset: Vec<usize>,
    pub norm: f64,
    pub method: String,
}

/// `{0, 1, ..., floor(n/2)}` in `Z_n` and its norm.
pub fn cyclic_interval_norm(n: usize) -> Result<(Vec<usize>, f64)> {
    let g = Arc::new(build_cyclic(n)?);
    let set: Vec<usize> = (0..=n / 2).collect();
    let v = Evaluator::new(&g)?.norm(&set)?;
    Ok((set, v))
}

pub fn growth_table(cfg: &GrowthConfig) -> Result<Vec<GrowthRow>> {
    if cfg.min_n == 0 || cfg.min_n > cfg.max_n {
        return Err(SearchError::BadConfig(format!("bad range {}..={}", cfg.min_n, cfg.max_n)));
    }
    let cap = match cfg.family {
        Family::Cyclic => crate::group::MAX_ORDER,
        Family::Z3power => MAX_Z3_POWER,
        Family::Symmetric => MAX_SYMMETRIC_GROWTH,
    };
    if cfg.max_n > cap {
        return Err(SearchError::BadConfig(format!("n = {} exceeds the family cap {cap}", cfg.max_n)));
    }
    (cfg.min_n..=cfg.max_n)
        .map(|n| match cfg.family {
            Family::Cyclic => {
                let g = Arc::new(build_cyclic(n)?);
                if n <= cfg.exhaustive_cap.min(MAX_EXHAUSTIVE_ORDER) {
                    let r = brute_force_max(&g)?;
                    Ok(row(n, &g, r.best_subset, r.best_norm, "exhaustive"))
                } else {
                    let (set, v) = cyclic_interval_norm(n)?;
                    Ok(row(n, &g, set, v, "interval"))
                }
            }
            Family::Z3power => {
                let z3 = Arc::new(build_cyclic(3)?);
                let w = product_witness(&vec![(z3, vec![0, 1]); n])?;
                Ok(row(n, &w.group, w.subset, w.norm, "product_witness"))
            }
            Family::Symmetric => {
                let g = Arc::new(build_symmetric(n)?);
                let r = local_search_max(&g, &cfg.search)?;
                Ok(row(n, &g, r.best_subset, r.best_norm, "local_search"))
            }
        })
        .collect()
}

fn row(n: usize, g: &FiniteGroup, subset: Vec<usize>, norm: f64, method: &str) -> GrowthRow {
    GrowthRow { n, group: g.label().to_string(), order: g.order(), subset, norm, method: method.into() }
}

// ---------------------------------------------------------------------------
// Orbit pruning spot check

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpotCheck {
    pub pairs: usize,
    pub max_diff: f64,
}

/// Compares the norm of random subsets, random orbit images and canonical representatives.
pub fn orbit_spot_check(g: &Arc<FiniteGroup>, pairs: usize, seed: u64) -> Result<OrbitSpotCheck> {
    let n = g.order();
    let action = OrbitAction::new(g)?;
    let eval = Evaluator::new(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let samples: Vec<(u64, u64, u64)> = (0..pairs)
        .map(|_| {
            let m = rng.gen_range(1..=full);
            let image = action.image_of(rng.gen_range(0..usize::MAX), m);
            (m, image, action.canonical(m))
        })
        .collect();
    let diffs: Vec<f64> = samples
        .par_iter()
        .map(|&(m, image, canon)| {
            let a = eval.norm_mask(m)?;
            Ok((a - eval.norm_mask(image)?).abs().max((a - eval.norm_mask(canon)?).abs()))
        })
        .collect::<Result<_>>()?;
    Ok(OrbitSpotCheck { pairs, max_diff: diffs.into_iter().fold(0.0, f64::max) })
}
