//! Piecewise affine maps and the homomorphisms `A(H) -> B(G)` they induce.
//!
//! An affine piece carries a subgroup `K <= G`, elements `t0 in G`, `s0 in H`
//! and a homomorphism `theta: K -> H`. On the left coset `C = t0^-1 K` it
//! defines `alpha(t) = s0 theta(t0 t)`. A piecewise map attaches disjoint sets
//! `Y_i` to pieces with `Y_i` inside `C_i`, and induces
//! `rho(u)(t) = u(alpha_i(t))` for `t` in `Y_i`, zero elsewhere.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourier::{a_norm, a_norm_value, indicator_norm, GroupFunction, NormError, DEFAULT_SVD_TOL};
use crate::group::{enumerate_homs, enumerate_subgroups, normalize_subset, FiniteGroup, GroupError, Subgroup};

/// Pointwise tolerance for the homomorphism checks.
pub const HOM_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomError {
    #[error("element {t} is outside the host coset of the piece")]
    OutsideCoset { t: usize },
    #[error("theta is not a homomorphism: theta({a} {b}) != theta({a}) theta({b})")]
    ThetaNotHom { a: usize, b: usize },
    #[error("theta has {got} images for a subgroup of order {expected}")]
    ThetaLength { expected: usize, got: usize },
    #[error("element {elem} lies in more than one piece")]
    Overlap { elem: usize },
    #[error("piece {piece}: element {elem} of Y_i is outside its host coset")]
    PieceOutsideCoset { piece: usize, elem: usize },
    #[error("F must be nonempty")]
    EmptySet,
    #[error("the map is not rank-one")]
    NotRankOne,
    #[error("function lives on {got}, expected {expected}")]
    GroupMismatch { expected: String, got: String },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("malformed map: {0}")]
    Malformed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

type Result<T> = std::result::Result<T, HomError>;

/// `alpha(t) = s0 theta(t0 t)` on `C = t0^-1 K`.
#[derive(Debug, Clone)]
pub struct AffinePiece {
    k: Subgroup,
    t0: usize,
    s0: usize,
    /// `theta[i]` is the image of `k.members()[i]`.
    theta: Vec<usize>,
    target: Arc<FiniteGroup>,
}

impl AffinePiece {
    /// Validated piece; `theta` must be a homomorphism `K -> target`.
    pub fn new(k: Subgroup, t0: usize, s0: usize, theta: Vec<usize>, target: &Arc<FiniteGroup>) -> Result<Self> {
        let piece = Self::new_unchecked(k, t0, s0, theta, target)?;
        if let Some((a, b)) = piece.theta_violation() {
            return Err(HomError::ThetaNotHom { a, b });
        }
        Ok(piece)
    }

    /// Range checks only. Lets tests and diagnostics build broken pieces.
    pub fn new_unchecked(
        k: Subgroup,
        t0: usize,
        s0: usize,
        theta: Vec<usize>,
        target: &Arc<FiniteGroup>,
    ) -> Result<Self> {
        k.parent().check_element(t0)?;
        target.check_element(s0)?;
        if theta.len() != k.order() {
            return Err(HomError::ThetaLength { expected: k.order(), got: theta.len() });
        }
        for &y in &theta {
            target.check_element(y)?;
        }
        Ok(AffinePiece { k, t0, s0, theta, target: Arc::clone(target) })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.k
    }

    pub fn t0(&self) -> usize {
        self.t0
    }

    pub fn s0(&self) -> usize {
        self.s0
    }

    pub fn theta(&self) -> &[usize] {
        &self.theta
    }

    fn theta_at(&self, x: usize) -> usize {
        self.theta[self.k.position(x).expect("x in K")]
    }

    /// First pair `a, b` in `K` with `theta(ab) != theta(a) theta(b)`.
    pub fn theta_violation(&self) -> Option<(usize, usize)> {
        self.theta_violations().into_iter().next()
    }

    fn theta_violations(&self) -> Vec<(usize, usize)> {
        let g = self.k.parent();
        let mut out = Vec::new();
        for &a in self.k.members() {
            for &b in self.k.members() {
                let lhs = self.theta_at(g.mul(a, b));
                if lhs != self.target.mul(self.theta_at(a), self.theta_at(b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn in_coset(&self, t: usize) -> bool {
        t < self.k.parent().order() && self.k.contains(self.k.parent().mul(self.t0, t))
    }

    /// `C = t0^-1 K`, sorted.
    pub fn coset(&self) -> Vec<usize> {
        let g = self.k.parent();
        let mut c = g.left_translate(g.inv(self.t0), self.k.members());
        c.sort_unstable();
        c
    }
}

/// `s0 theta(t0 t)` for `t` in the piece's coset.
pub fn affine_eval(piece: &AffinePiece, t: usize) -> Result<usize> {
    if !piece.in_coset(t) {
        return Err(HomError::OutsideCoset { t });
    }
    let k = piece.k.parent().mul(piece.t0, t);
    Ok(piece.target.mul(piece.s0, piece.theta_at(k)))
}

#[derive(Debug, Clone)]
pub struct MapPiece {
    pub y: Vec<usize>,
    pub affine: AffinePiece,
}

/// `Y = Y_1 u ... u Y_m` with an affine piece on each `Y_i`.
#[derive(Debug, Clone)]
pub struct PiecewiseAffineMap {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    pieces: Vec<MapPiece>,
}

impl PiecewiseAffineMap {
    /// Validated map: homomorphic `theta`s, disjoint `Y_i`, each inside its coset.
    pub fn new(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, pieces: Vec<MapPiece>) -> Result<Self> {
        let map = Self::new_unchecked(source, target, pieces)?;
        let mut seen = BTreeSet::new();
        for (i, p) in map.pieces.iter().enumerate() {
            if let Some((a, b)) = p.affine.theta_violation() {
                return Err(HomError::ThetaNotHom { a, b });
            }
            for &t in &p.y {
                if !seen.insert(t) {
                    return Err(HomError::Overlap { elem: t });
                }
                if !p.affine.in_coset(t) {
                    return Err(HomError::PieceOutsideCoset { piece: i, elem: t });
                }
            }
        }
        Ok(map)
    }

    /// Group and range checks only.
    pub fn new_unchecked(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        mut pieces: Vec<MapPiece>,
    ) -> Result<Self> {
        for p in &mut pieces {
            if !p.affine.k.parent().same_as(source) || !p.affine.target.same_as(target) {
                return Err(HomError::GroupMismatch {
                    expected: format!("{} -> {}", source.label(), target.label()),
                    got: format!("{} -> {}", p.affine.k.parent().label(), p.affine.target.label()),
                });
            }
            p.y = normalize_subset(source, &p.y)?;
        }
        Ok(PiecewiseAffineMap { source: Arc::clone(source), target: Arc::clone(target), pieces })
    }

    pub fn source_group(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target_group(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn pieces(&self) -> &[MapPiece] {
        &self.pieces
    }

    /// The domain `Y` of the map, sorted.
    pub fn domain_set(&self) -> Vec<usize> {
        self.pieces.iter().flat_map(|p| p.y.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn from_specs(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, specs: &[PieceSpec]) -> Result<Self> {
        Self::new(source, target, Self::pieces_from_specs(source, target, specs)?)
    }

    /// Like [`PiecewiseAffineMap::from_specs`] without the structural checks.
    pub fn from_specs_unchecked(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        specs: &[PieceSpec],
    ) -> Result<Self> {
        Self::new_unchecked(source, target, Self::pieces_from_specs(source, target, specs)?)
    }

    fn pieces_from_specs(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        specs: &[PieceSpec],
    ) -> Result<Vec<MapPiece>> {
        specs
            .iter()
            .map(|s| {
                if s.k.len() != s.theta.len() {
                    return Err(HomError::ThetaLength { expected: s.k.len(), got: s.theta.len() });
                }
                let k = Subgroup::new(source, &s.k)?;
                if k.order() != s.k.len() {
                    return Err(HomError::Malformed("K lists a member twice".into()));
                }
                let mut theta = vec![0; k.order()];
                for (&x, &img) in s.k.iter().zip(&s.theta) {
                    theta[k.position(x).expect("member")] = img;
                }
                let affine = AffinePiece::new_unchecked(k, s.t0, s.s0, theta, target)?;
                Ok(MapPiece { y: s.y.clone(), affine })
            })
            .collect()
    }

    pub fn to_specs(&self) -> Vec<PieceSpec> {
        self.pieces
            .iter()
            .map(|p| PieceSpec {
                y: p.y.clone(),
                k: p.affine.k.members().to_vec(),
                t0: p.affine.t0,
                s0: p.affine.s0,
                theta: p.affine.theta.clone(),
            })
            .collect()
    }
}

/// One piece in the JSON map format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    #[serde(rename = "Y_i")]
    pub y: Vec<usize>,
    #[serde(rename = "K")]
    pub k: Vec<usize>,
    pub t0: usize,
    pub s0: usize,
    /// Images of the members of `K`, in the order `K` is listed.
    pub theta: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MapFile {
    Bare(Vec<PieceSpec>),
    Wrapped { pieces: Vec<PieceSpec> },
}

/// Parses either a bare array of pieces or `{"pieces": [...]}`.
pub fn parse_piece_specs(text: &str) -> Result<Vec<PieceSpec>> {
    match serde_json::from_str::<MapFile>(text) {
        Ok(MapFile::Bare(p)) | Ok(MapFile::Wrapped { pieces: p }) => Ok(p),
        Err(e) => Err(HomError::Malformed(e.to_string())),
    }
}

/// The homomorphism `A(H) -> B(G)` induced by a piecewise affine map.
#[derive(Debug, Clone)]
pub struct InducedHom {
    map: PiecewiseAffineMap,
    rank_one: Option<Vec<usize>>,
}

impl InducedHom {
    pub fn new(map: PiecewiseAffineMap) -> Self {
        InducedHom { map, rank_one: None }
    }

    pub fn map(&self) -> &PiecewiseAffineMap {
        &self.map
    }

    /// The set `F` when this is `rho_F`.
    pub fn rank_one_set(&self) -> Option<&[usize]> {
        self.rank_one.as_deref()
    }

    /// The group whose functions are transformed.
    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.map.target
    }

    /// The group carrying the images.
    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.map.source
    }
}

/// `rho(u)`: `u o alpha_i` on each `Y_i`, zero off `Y`.
pub fn induce(rho: &InducedHom, u: &GroupFunction) -> Result<GroupFunction> {
    let h = rho.domain();
    if !u.group().same_as(h) {
        return Err(HomError::GroupMismatch { expected: h.label().into(), got: u.group().label().into() });
    }
    let g = rho.codomain();
    let mut values = vec![Complex64::new(0.0, 0.0); g.order()];
    for p in &rho.map.pieces {
        for &t in &p.y {
            values[t] = u.value(affine_eval(&p.affine, t)?);
        }
    }
    Ok(GroupFunction::new(g, values)?)
}

/// `rho_F(u) = u(e) chi_F`, as one piece with `K = G` and trivial `theta`.
pub fn rho_f(f: &[usize], g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>) -> Result<InducedHom> {
    let f = normalize_subset(g, f)?;
    if f.is_empty() {
        return Err(HomError::EmptySet);
    }
    let affine = AffinePiece::new(Subgroup::whole(g), g.identity(), h.identity(), vec![h.identity(); g.order()], h)?;
    let map = PiecewiseAffineMap::new(g, h, vec![MapPiece { y: f.clone(), affine }])?;
    Ok(InducedHom { map, rank_one: Some(f) })
}

/// `||rho_F|| = ||chi_F||`.
pub fn hom_norm_exact_rank_one(rho: &InducedHom) -> Result<f64> {
    let f = rho.rank_one.as_ref().ok_or(HomError::NotRankOne)?;
    let chi = GroupFunction::indicator(rho.codomain(), f)?;
    Ok(a_norm(&chi, DEFAULT_SVD_TOL)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub trials: usize,
    /// Index of the probe attaining the bound; probe 0 is the point mass at `e`.
    pub best_probe: usize,
}

/// Probes in a fixed order: `delta_e`, then complex Gaussians, each scaled to norm 1.
fn probes(h: &Arc<FiniteGroup>, trials: usize, seed: u64) -> Vec<GroupFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![GroupFunction::delta_identity(h)];
    while out.len() < trials {
        out.push(GroupFunction::random_gaussian(h, &mut rng));
    }
    out.truncate(trials);
    out
}

/// `max ||rho(u)||` over seeded probes `u` with `||u|| = 1`.
pub fn hom_norm_lower_sample(rho: &InducedHom, trials: usize, seed: u64) -> Result<LowerBound> {
    if trials == 0 {
        return Err(HomError::NoTrials);
    }
    let values: Vec<f64> = probes(rho.domain(), trials, seed)
        .par_iter()
        .map(|u| {
            let scale = a_norm_value(u)?;
            let image = induce(rho, u)?;
            Ok(a_norm_value(&image)? / scale)
        })
        .collect::<Result<_>>()?;
    let (best_probe, value) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    Ok(LowerBound { value, trials, best_probe })
}

/// `sum_i ||chi_{Y_i}||`.
pub fn hom_norm_upper(rho: &InducedHom) -> Result<f64> {
    let g = rho.codomain();
    let mut total = 0.0;
    for p in &rho.map.pieces {
        if !p.y.is_empty() {
            total += indicator_norm(g, &p.y)?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomViolation {
    pub piece: Option<usize>,
    pub t: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomCheck {
    pub trials: usize,
    pub max_multiplicative_error: f64,
    pub max_linearity_error: f64,
    pub violations: Vec<HomViolation>,
    pub passed: bool,
}

/// Checks `rho(uv) = rho(u) rho(v)` and linearity on seeded random `u, v`,
/// plus the structure that makes `rho` a homomorphism for every input: each
/// `theta` multiplicative, pieces disjoint and inside their cosets.
///
/// A broken `theta` is reported at `t = t0^-1 (ab)`, the point of `C` whose
/// value is read through the bad image `theta(ab)`.
pub fn verify_homomorphism(rho: &InducedHom, trials: usize, seed: u64) -> Result<HomCheck> {
    let mut violations = Vec::new();
    let g = rho.codomain();
    let mut owner = vec![None; g.order()];
    for (i, p) in rho.map.pieces.iter().enumerate() {
        let mut reported = BTreeSet::new();
        for (a, b) in p.affine.theta_violations() {
            let t = g.mul(g.inv(p.affine.t0), g.mul(a, b));
            if reported.insert(t) {
                violations.push(HomViolation {
                    piece: Some(i),
                    t,
                    detail: format!("theta({a} {b}) != theta({a}) theta({b})"),
                });
            }
        }
        for &t in &p.y {
            if !p.affine.in_coset(t) {
                violations.push(HomViolation { piece: Some(i), t, detail: "outside the host coset".into() });
            }
            if let Some(j) = owner[t].replace(i) {
                violations.push(HomViolation { piece: Some(i), t, detail: format!("also in piece {j}") });
            }
        }
    }

    let h = rho.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_mult: f64 = 0.0;
    let mut max_lin: f64 = 0.0;
    let structural_ok = violations.is_empty();
    for _ in 0..trials {
        let u = GroupFunction::random_gaussian(h, &mut rng);
        let v = GroupFunction::random_gaussian(h, &mut rng);
        let c = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        if !structural_ok {
            continue;
        }
        let (ru, rv) = (induce(rho, &u)?, induce(rho, &v)?);
        let product = induce(rho, &u.mul(&v)?)?;
        let mult = pointwise_worst(&product, &ru.mul(&rv)?);
        let combo = induce(rho, &u.add(&v.scale(c))?)?;
        let lin = pointwise_worst(&combo, &ru.add(&rv.scale(c))?);
        for (err, what) in [(mult, "rho(uv) != rho(u) rho(v)"), (lin, "rho is not linear")] {
            if err.1 > HOM_CHECK_TOL {
                violations.push(HomViolation { piece: None, t: err.0, detail: format!("{what}: {:e}", err.1) });
            }
        }
        max_mult = max_mult.max(mult.1);
        max_lin = max_lin.max(lin.1);
    }
    let passed = violations.is_empty();
    Ok(HomCheck { trials, max_multiplicative_error: max_mult, max_linearity_error: max_lin, violations, passed })
}

fn pointwise_worst(a: &GroupFunction, b: &GroupFunction) -> (usize, f64) {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc })
}

/// A random validated map `G -> H` with one to three pieces.
pub fn random_piecewise_map<R: Rng + ?Sized>(
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    rng: &mut R,
) -> Result<PiecewiseAffineMap> {
    let subgroups = enumerate_subgroups(g)?;
    let pieces_wanted = rng.gen_range(1..=3);
    let mut used = vec![false; g.order()];
    let mut pieces = Vec::new();
    for _ in 0..pieces_wanted {
        let k = subgroups.choose(rng).expect("the trivial subgroup").clone();
        let homs = enumerate_homs(&Arc::new(k.to_group()), h);
        let theta = homs.choose(rng).expect("the trivial homomorphism").map().to_vec();
        let t0 = rng.gen_range(0..g.order());
        let s0 = rng.gen_range(0..h.order());
        let affine = AffinePiece::new(k, t0, s0, theta, h)?;
        let y: Vec<usize> = affine.coset().into_iter().filter(|&t| !used[t] && rng.gen_bool(0.6)).collect();
        if y.is_empty() {
            continue;
        }
        y.iter().for_each(|&t| used[t] = true);
        pieces.push(MapPiece { y, affine });
    }
    if pieces.is_empty() {
        let t = rng.gen_range(0..g.order());
        let affine = AffinePiece::new(Subgroup::trivial(g), g.inv(t), rng.gen_range(0..h.order()), vec![0], h)?;
        pieces.push(MapPiece { y: vec![t], affine });
    }
    PiecewiseAffineMap::new(g, h, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_cyclic, build_symmetric, GroupHom};
    use approx::assert_abs_diff_eq;

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    fn z6_piece() -> (Arc<FiniteGroup>, Arc<FiniteGroup>, AffinePiece) {
        let g = arc(build_cyclic(6).unwrap());
        let h = arc(build_cyclic(3).unwrap());
        let k = Subgroup::new(&g, &[0, 2, 4]).unwrap();
        let piece = AffinePiece::new(k, 1, 2, vec![0, 1, 2], &h).unwrap();
        (g, h, piece)
    }

    #[test]
    fn affine_eval_examples() {
        let (_, _, piece) = z6_piece();
        assert_eq!(piece.coset(), vec![1, 3, 5]);
        assert_eq!(affine_eval(&piece, 3).unwrap(), 1);
        assert_eq!(affine_eval(&piece, 2), Err(HomError::OutsideCoset { t: 2 }));

        let g = arc(build_symmetric(3).unwrap());
        let incl = AffinePiece::new(Subgroup::whole(&g), 0, 0, (0..6).collect(), &g).unwrap();
        assert!((0..6).all(|t| affine_eval(&incl, t).unwrap() == t));
        let constant = AffinePiece::new(Subgroup::whole(&g), 4, 3, vec![0; 6], &g).unwrap();
        assert!((0..6).all(|t| affine_eval(&constant, t).unwrap() == 3));
    }

    #[test]
    fn identity_pullback() {
        let g = arc(build_symmetric(3).unwrap());
        let id = GroupHom::identity(&g);
        let affine = AffinePiece::new(Subgroup::whole(&g), 0, 0, id.map().to_vec(), &g).unwrap();
        let rho = InducedHom::new(PiecewiseAffineMap::new(&g, &g, vec![MapPiece { y: (0..6).collect(), affine }]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = GroupFunction::random_gaussian(&g, &mut rng);
        let image = induce(&rho, &u).unwrap();
        assert_eq!(image.max_abs_diff(&u), 0.0);
        assert_eq!(induce(&rho, &GroupFunction::zero(&g)).unwrap().max_abs_diff(&GroupFunction::zero(&g)), 0.0);
        assert_abs_diff_eq!(hom_norm_upper(&rho).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hom_norm_lower_sample(&rho, 5, 0).unwrap().value, 1.0, epsilon = 1e-12);
        assert!(verify_homomorphism(&rho, 10, 0).unwrap().passed);
    }

    #[test]
    fn rho_f_examples() {
        let g = arc(build_cyclic(5).unwrap());
        let h = arc(build_symmetric(3).unwrap());
        let expected = 2.0 * (1.0 + 5f64.sqrt()) / 5.0;
        for (f, norm) in [(vec![0, 1, 2, 3, 4], 1.0), (vec![0], 1.0), (vec![0, 1], expected)] {
            let rho = rho_f(&f, &g, &h).unwrap();
            assert_abs_diff_eq!(hom_norm_exact_rank_one(&rho).unwrap(), norm, epsilon = 1e-10);
            assert_abs_diff_eq!(hom_norm_upper(&rho).unwrap(), norm, epsilon = 1e-10);
            let lower = hom_norm_lower_sample(&rho, 8, 3).unwrap();
            assert_abs_diff_eq!(lower.value, norm, epsilon = 1e-9);
            assert!(verify_homomorphism(&rho, 5, 1).unwrap().passed);
        }
        let rho = rho_f(&[0, 1], &g, &h).unwrap();
        let image = induce(&rho, &GroupFunction::delta_identity(&h)).unwrap();
        assert_eq!(image.support_set(), Some(vec![0, 1]));
        assert_eq!(rho_f(&[], &g, &h).unwrap_err(), HomError::EmptySet);
    }

    #[test]
    fn two_coset_pieces_upper_bound() {
        let g = arc(build_cyclic(6).unwrap());
        let h = arc(build_cyclic(3).unwrap());
        let k = Subgroup::new(&g, &[0, 2, 4]).unwrap();
        let p1 = AffinePiece::new(k, 0, 0, vec![0, 1, 2], &h).unwrap();
        let p2 = AffinePiece::new(Subgroup::trivial(&g), 5, 1, vec![0], &h).unwrap();
        let map = PiecewiseAffineMap::new(&g, &h, vec![MapPiece { y: vec![0, 2, 4], affine: p1 }, MapPiece { y: vec![1], affine: p2 }])
            .unwrap();
        let rho = InducedHom::new(map);
        assert_abs_diff_eq!(hom_norm_upper(&rho).unwrap(), 2.0, epsilon = 1e-10);
        assert!(hom_norm_exact_rank_one(&rho).is_err());
        let lower = hom_norm_lower_sample(&rho, 30, 9).unwrap();
        assert!(lower.value <= 2.0 + 1e-9);
        assert!(verify_homomorphism(&rho, 20, 2).unwrap().passed);
    }

    #[test]
    fn corrupted_theta_is_located() {
        let (g, h, good) = z6_piece();
        // theta(2) = 1 but theta(4) should be 2; set it to 0
        let bad = AffinePiece::new_unchecked(good.subgroup().clone(), 1, 2, vec![0, 1, 0], &h).unwrap();
        assert!(matches!(bad.theta_violation(), Some((2, 2))));
        let specs = vec![PieceSpec { y: vec![1, 3, 5], k: vec![0, 2, 4], t0: 1, s0: 2, theta: vec![0, 1, 0] }];
        assert!(PiecewiseAffineMap::from_specs(&g, &h, &specs).is_err());
        let map = PiecewiseAffineMap::from_specs_unchecked(&g, &h, &specs).unwrap();
        let check = verify_homomorphism(&InducedHom::new(map), 10, 0).unwrap();
        assert!(!check.passed);
        // theta(2+2) is read at t = -1 + 4 = 3
        assert!(check.violations.iter().any(|v| v.t == 3 && v.piece == Some(0)));
    }

    #[test]
    fn specs_round_trip() {
        let text = r#"[{"Y_i":[1,3],"K":[4,0,2],"t0":1,"s0":2,"theta":[2,0,1]}]"#;
        let specs = parse_piece_specs(text).unwrap();
        let wrapped = parse_piece_specs(&format!(r#"{{"pieces":{text}}}"#)).unwrap();
        assert_eq!(specs, wrapped);
        let (g, h, _) = z6_piece();
        let map = PiecewiseAffineMap::from_specs(&g, &h, &specs).unwrap();
        assert_eq!(map.to_specs()[0].theta, vec![0, 1, 2]);
        assert!(parse_piece_specs("{}").is_err());
        let overlap = r#"[{"Y_i":[1],"K":[0],"t0":5,"s0":0,"theta":[0]},{"Y_i":[1],"K":[0],"t0":5,"s0":0,"theta":[0]}]"#;
        let overlap = parse_piece_specs(overlap).unwrap();
        assert_eq!(PiecewiseAffineMap::from_specs(&g, &h, &overlap).unwrap_err(), HomError::Overlap { elem: 1 });
    }

    #[test]
    fn random_maps_are_homomorphisms() {
        let g = arc(build_cyclic(12).unwrap());
        let h = arc(build_cyclic(4).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let rho = InducedHom::new(random_piecewise_map(&g, &h, &mut rng).unwrap());
            let check = verify_homomorphism(&rho, 5, 0).unwrap();
            assert!(check.passed, "{check:?}");
        }
    }
}
