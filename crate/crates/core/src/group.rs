//! Finite groups as indexed Cayley tables, with subgroups, cosets, quotients
//! and homomorphisms.
//!
//! Elements are dense indices `0..n` and the identity is always index `0`.
//! Subsets of groups of order at most 64 can be handled as `u64` bitmasks
//! (see [`mask_of`] and [`elems_of`]); everything else uses sorted index lists.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest group order for which a multiplication table is materialized.
pub const MAX_ORDER: usize = 8192;
/// Largest order of a product of cyclic groups, whose table stays implicit.
pub const MAX_ABELIAN_ORDER: usize = 1 << 16;
/// Largest closure explored while generating a permutation group.
pub const MAX_CLOSURE: usize = 1_000_000;
/// Associativity is checked on every triple up to this order, sampled above.
pub const EXHAUSTIVE_ASSOC_ORDER: usize = 512;
/// Number of sampled triples for the associativity check of large groups.
pub const SAMPLED_ASSOC_TRIPLES: usize = 100_000;
/// Subgroup enumeration is restricted to groups of at most this order.
pub const MAX_ENUMERATION_ORDER: usize = 64;

const ASSOC_SEED: u64 = 0x5eed_a550c;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("group order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("permutation closure exceeds {max} elements")]
    ClosureTooLarge { max: usize },
    #[error("symmetric group S_{n} is not supported (n <= {max})")]
    SymmetricTooLarge { n: usize, max: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("Cayley table invalid: {0}")]
    InvalidTable(String),
    #[error("element {elem} out of range for group of order {order}")]
    ElementOutOfRange { elem: usize, order: usize },
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal (conjugation by {0} moves it)")]
    NotNormal(usize),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("objects belong to different groups")]
    GroupMismatch,
    #[error("operation requires |G| <= {max}, got {order}")]
    TooLargeForEnumeration { order: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, GroupError>;

#[derive(Debug, Clone, PartialEq)]
enum Table {
    Dense(Vec<u32>),
    /// `Z_{m_0} x Z_{m_1} x ...`, mixed radix with the first factor slowest.
    Abelian(Vec<usize>),
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    table: Table,
    inv: Vec<u32>,
    label: String,
}

impl FiniteGroup {
    /// Builds a group from a row-major Cayley table, validating every group axiom.
    pub fn from_table(cayley: Vec<Vec<usize>>, label: impl Into<String>) -> Result<Self> {
        let n = cayley.len();
        if n == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if n > MAX_ORDER {
            return Err(GroupError::OrderTooLarge { order: n, max: MAX_ORDER });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (x, row) in cayley.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {x} has length {}", row.len())));
            }
            for &z in row {
                if z >= n {
                    return Err(GroupError::ElementOutOfRange { elem: z, order: n });
                }
                flat.push(z as u32);
            }
        }
        let inv = inverse_table(n, |x, y| flat[x * n + y] as usize)?;
        let g = FiniteGroup { order: n, table: Table::Dense(flat), inv, label: label.into() };
        g.validate()?;
        Ok(g)
    }

    fn from_dense(n: usize, flat: Vec<u32>, label: String) -> Result<Self> {
        let inv = inverse_table(n, |x, y| flat[x * n + y] as usize)?;
        Ok(FiniteGroup { order: n, table: Table::Dense(flat), inv, label })
    }

    fn abelian(moduli: Vec<usize>, label: String) -> Result<Self> {
        let order = checked_order(moduli.iter().copied(), MAX_ABELIAN_ORDER)?;
        let mut g = FiniteGroup { order, table: Table::Abelian(moduli), inv: Vec::new(), label };
        g.inv = (0..order).map(|x| g.abelian_inverse(x) as u32).collect();
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Table::Dense(t) => t[x * self.order + y] as usize,
            Table::Abelian(moduli) => {
                let mut acc = 0;
                let mut place = 1;
                let (mut a, mut b) = (x, y);
                for &m in moduli.iter().rev() {
                    let digit = (a % m + b % m) % m;
                    acc += digit * place;
                    place *= m;
                    a /= m;
                    b /= m;
                }
                acc
            }
        }
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    fn abelian_inverse(&self, x: usize) -> usize {
        let Table::Abelian(moduli) = &self.table else { unreachable!() };
        let mut acc = 0;
        let mut place = 1;
        let mut a = x;
        for &m in moduli.iter().rev() {
            let digit = (m - a % m) % m;
            acc += digit * place;
            place *= m;
            a /= m;
        }
        acc
    }

    /// Row `x` of the Cayley table.
    pub fn row(&self, x: usize) -> Vec<usize> {
        (0..self.order).map(|y| self.mul(x, y)).collect()
    }

    pub fn cayley(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| self.row(x)).collect()
    }

    pub fn pow(&self, x: usize, mut k: usize) -> usize {
        let mut base = x;
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Order of the element `x`, found among the divisors of `|G|`.
    pub fn element_order(&self, x: usize) -> usize {
        divisors(self.order)
            .into_iter()
            .find(|&d| self.pow(x, d) == 0)
            .expect("element order divides the group order")
    }

    /// Sorted list of element orders; used as a cheap isomorphism profile.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        if matches!(self.table, Table::Abelian(_)) {
            return true;
        }
        (0..self.order).all(|x| (x + 1..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Checks the Latin-square, identity, inverse and associativity laws.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        let mut seen = vec![0u32; n];
        for x in 0..n {
            let stamp = x as u32 + 1;
            for y in 0..n {
                let z = self.mul(x, y);
                if z >= n {
                    return Err(GroupError::ElementOutOfRange { elem: z, order: n });
                }
                if seen[z] == stamp {
                    return Err(GroupError::InvalidTable(format!("row {x} repeats {z}")));
                }
                seen[z] = stamp;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for y in 0..n {
            let stamp = y as u32 + 1;
            for x in 0..n {
                let z = self.mul(x, y);
                if seen[z] == stamp {
                    return Err(GroupError::InvalidTable(format!("column {y} repeats {z}")));
                }
                seen[z] = stamp;
            }
        }
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(GroupError::InvalidTable(format!("index 0 is not an identity at {x}")));
            }
            if self.mul(x, self.inv(x)) != 0 {
                return Err(GroupError::InvalidTable(format!("bad inverse for {x}")));
            }
        }
        let assoc = |x: usize, y: usize, z: usize| {
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                Err(GroupError::InvalidTable(format!("not associative at ({x},{y},{z})")))
            } else {
                Ok(())
            }
        };
        if n <= EXHAUSTIVE_ASSOC_ORDER {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        assoc(x, y, z)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOC_SEED);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                assoc(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange { elem: x, order: self.order })
        }
    }

    /// Structural equality used to detect group mismatches.
    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        std::ptr::eq(self, other)
            || (self.order == other.order
                && (0..self.order).all(|x| (0..self.order).all(|y| self.mul(x, y) == other.mul(x, y))))
    }

    /// `{ g x : x in set }`
    pub fn left_translate(&self, g: usize, set: &[usize]) -> Vec<usize> {
        sorted(set.iter().map(|&x| self.mul(g, x)))
    }

    /// `{ x g : x in set }`
    pub fn right_translate(&self, set: &[usize], g: usize) -> Vec<usize> {
        sorted(set.iter().map(|&x| self.mul(x, g)))
    }

    /// `{ x^-1 : x in set }`
    pub fn inverse_set(&self, set: &[usize]) -> Vec<usize> {
        sorted(set.iter().map(|&x| self.inv(x)))
    }

    /// Smallest subset containing `gens` and closed under multiplication.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Checks whether `set` is a subgroup (contains the identity and is closed).
    pub fn is_subgroup_set(&self, set: &[usize]) -> bool {
        if set.first() != Some(&0) {
            return false;
        }
        let mut inside = vec![false; self.order];
        for &x in set {
            if x >= self.order {
                return false;
            }
            inside[x] = true;
        }
        set.iter().all(|&x| set.iter().all(|&y| inside[self.mul(x, y)]))
    }
}

fn checked_order(factors: impl Iterator<Item = usize>, max: usize) -> Result<usize> {
    let mut order: usize = 1;
    for m in factors {
        if m == 0 {
            return Err(GroupError::EmptyGroup);
        }
        order = order.checked_mul(m).filter(|&o| o <= max).ok_or(GroupError::OrderTooLarge { order: usize::MAX, max })?;
    }
    Ok(order)
}

fn inverse_table(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Vec<u32>> {
    (0..n)
        .map(|x| {
            (0..n)
                .find(|&y| mul(x, y) == 0)
                .map(|y| y as u32)
                .ok_or_else(|| GroupError::InvalidTable(format!("{x} has no inverse")))
        })
        .collect()
}

pub(crate) fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn sorted(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v
}

/// Normalizes an element list: sorted, deduplicated, range-checked.
pub fn normalize_subset(g: &FiniteGroup, elems: &[usize]) -> Result<Vec<usize>> {
    for &x in elems {
        g.check_element(x)?;
    }
    let mut v = elems.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Bitmask of a subset of a group of order at most 64.
pub fn mask_of(elems: &[usize]) -> u64 {
    elems.iter().fold(0u64, |m, &x| m | (1u64 << x))
}

/// Sorted element list of a bitmask.
pub fn elems_of(mut mask: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        v.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    v
}

// ---------------------------------------------------------------------------
// Constructions

/// The cyclic group `Z_n`.
pub fn build_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(GroupError::EmptyGroup);
    }
    FiniteGroup::abelian(vec![n], format!("Z_{n}"))
}

/// Direct product with mixed-radix indexing, first factor slowest-varying.
pub fn build_product(factors: &[FiniteGroup]) -> Result<FiniteGroup> {
    if factors.is_empty() {
        return Err(GroupError::EmptyGroup);
    }
    let order = checked_order(factors.iter().map(|f| f.order), MAX_ABELIAN_ORDER)?;
    let label = factors.iter().map(|f| f.label.as_str()).collect::<Vec<_>>().join(" x ");

    let cyclic_moduli: Option<Vec<usize>> = factors
        .iter()
        .map(|f| match &f.table {
            Table::Abelian(m) => Some(m.clone()),
            Table::Dense(_) => None,
        })
        .collect::<Option<Vec<_>>>()
        .map(|parts| parts.concat());
    if let Some(moduli) = cyclic_moduli {
        return FiniteGroup::abelian(moduli, label);
    }
    if order > MAX_ORDER {
        return Err(GroupError::OrderTooLarge { order, max: MAX_ORDER });
    }

    let digits = |mut x: usize| {
        let mut d = vec![0; factors.len()];
        for (i, f) in factors.iter().enumerate().rev() {
            d[i] = x % f.order;
            x /= f.order;
        }
        d
    };
    let all_digits: Vec<Vec<usize>> = (0..order).map(digits).collect();
    let mut flat = Vec::with_capacity(order * order);
    for dx in &all_digits {
        for dy in &all_digits {
            let z = factors
                .iter()
                .enumerate()
                .fold(0, |acc, (i, f)| acc * f.order + f.mul(dx[i], dy[i]));
            flat.push(z as u32);
        }
    }
    FiniteGroup::from_dense(order, flat, label)
}

/// Dihedral group of order `2n`; element `k + n f` is `r^k s^f`.
pub fn build_dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(GroupError::EmptyGroup);
    }
    let order = checked_order([2, n].into_iter(), MAX_ORDER)?;
    let mut flat = Vec::with_capacity(order * order);
    for x in 0..order {
        let (a, f) = (x % n, x / n);
        for y in 0..order {
            let (b, g) = (y % n, y / n);
            let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
            flat.push((k + n * ((f + g) % 2)) as u32);
        }
    }
    FiniteGroup::from_dense(order, flat, format!("D_{n}"))
}

/// Largest `n` accepted by [`build_symmetric`]; `S_8` would need a 40320^2 table.
pub const MAX_SYMMETRIC_DEGREE: usize = 7;

/// The symmetric group `S_n`, generated by a transposition and an `n`-cycle.
pub fn build_symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(GroupError::EmptyGroup);
    }
    if n > MAX_SYMMETRIC_DEGREE {
        return Err(GroupError::SymmetricTooLarge { n, max: MAX_SYMMETRIC_DEGREE });
    }
    let mut gens = Vec::new();
    if n >= 2 {
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        gens.push(swap);
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    } else {
        gens.push(vec![0]);
    }
    let mut g = build_from_permutations(&gens)?;
    g.label = format!("S_{n}");
    Ok(g)
}

/// Group generated by 0-based permutations (`p[i]` is the image of `i`).
///
/// Products compose right to left: `(p q)(i) = p(q(i))`. Elements are numbered
/// in breadth-first order from the identity.
pub fn build_from_permutations(generators: &[Vec<usize>]) -> Result<FiniteGroup> {
    let degree = generators.first().map_or(0, Vec::len);
    for p in generators {
        if p.len() != degree {
            return Err(GroupError::InvalidPermutation("generators act on different sets".into()));
        }
        let mut seen = vec![false; degree];
        for &i in p {
            if i >= degree || std::mem::replace(&mut seen[i], true) {
                return Err(GroupError::InvalidPermutation(format!("{p:?} is not a permutation")));
            }
        }
    }
    let identity: Vec<usize> = (0..degree).collect();
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };

    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elems = vec![identity];
    let mut head = 0;
    while head < elems.len() {
        for gen in generators {
            let next = compose(&elems[head], gen);
            if !index.contains_key(&next) {
                if elems.len() >= MAX_CLOSURE {
                    return Err(GroupError::ClosureTooLarge { max: MAX_CLOSURE });
                }
                index.insert(next.clone(), elems.len());
                elems.push(next);
            }
        }
        head += 1;
    }
    let n = elems.len();
    if n > MAX_ORDER {
        return Err(GroupError::OrderTooLarge { order: n, max: MAX_ORDER });
    }
    let mut flat = Vec::with_capacity(n * n);
    for p in &elems {
        for q in &elems {
            flat.push(index[&compose(p, q)] as u32);
        }
    }
    FiniteGroup::from_dense(n, flat, format!("Perm(deg {degree}, order {n})"))
}

// ---------------------------------------------------------------------------
// Subgroups and cosets

/// A validated subgroup; `members` is sorted and starts with the identity.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &Arc<FiniteGroup>, elems: &[usize]) -> Result<Self> {
        let members = normalize_subset(parent, elems)?;
        if !parent.is_subgroup_set(&members) {
            return Err(GroupError::NotSubgroup(format!("{members:?} is not closed or lacks the identity")));
        }
        if !parent.order().is_multiple_of(members.len()) {
            return Err(GroupError::NotSubgroup(format!(
                "order {} does not divide {}",
                members.len(),
                parent.order()
            )));
        }
        Ok(Subgroup { parent: Arc::clone(parent), members })
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Subgroup { parent: Arc::clone(parent), members: vec![0] }
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Subgroup { parent: Arc::clone(parent), members: (0..parent.order()).collect() }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Position of `x` in `members`, which is its index in [`Subgroup::to_group`].
    pub fn position(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    /// The subgroup as a group in its own right, element `i` being `members[i]`.
    pub fn to_group(&self) -> FiniteGroup {
        let k = self.members.len();
        let mut flat = Vec::with_capacity(k * k);
        for &x in &self.members {
            for &y in &self.members {
                flat.push(self.position(self.parent.mul(x, y)).expect("closed") as u32);
            }
        }
        let label = format!("{}<{}>", self.parent.label(), k);
        FiniteGroup::from_dense(k, flat, label).expect("subgroup table is a group")
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    fn normality_witness(&self) -> Option<usize> {
        let g = &self.parent;
        (0..g.order()).find(|&a| {
            let ai = g.inv(a);
            self.members.iter().any(|&x| !self.contains(g.mul(g.mul(a, x), ai)))
        })
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.parent.same_as(&other.parent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CosetSide {
    Left,
    Right,
}

/// `F = rep * H` (left) or `F = H * rep` (right).
#[derive(Debug, Clone)]
pub struct CosetWitness {
    pub subgroup: Subgroup,
    pub side: CosetSide,
    pub representative: usize,
}

#[derive(Debug, Clone)]
pub enum CosetCheck {
    Empty,
    NotCoset,
    Coset(CosetWitness),
}

impl CosetCheck {
    pub fn is_coset(&self) -> bool {
        matches!(self, CosetCheck::Coset(_))
    }
}

/// Decides whether `set` is a left or right coset of some subgroup.
pub fn is_coset(g: &Arc<FiniteGroup>, set: &[usize]) -> Result<CosetCheck> {
    let set = normalize_subset(g, set)?;
    let Some(&a) = set.first() else {
        return Ok(CosetCheck::Empty);
    };
    if !g.order().is_multiple_of(set.len()) {
        return Ok(CosetCheck::NotCoset);
    }
    let ai = g.inv(a);
    let left = g.left_translate(ai, &set);
    if g.is_subgroup_set(&left) {
        let subgroup = Subgroup { parent: Arc::clone(g), members: left };
        return Ok(CosetCheck::Coset(CosetWitness { subgroup, side: CosetSide::Left, representative: a }));
    }
    let right = g.right_translate(&set, ai);
    if g.is_subgroup_set(&right) {
        let subgroup = Subgroup { parent: Arc::clone(g), members: right };
        return Ok(CosetCheck::Coset(CosetWitness { subgroup, side: CosetSide::Right, representative: a }));
    }
    Ok(CosetCheck::NotCoset)
}

/// Bitmask variant of the coset test for groups of order at most 64.
pub(crate) fn is_coset_mask(g: &FiniteGroup, mask: u64) -> bool {
    if mask == 0 || !g.order().is_multiple_of(mask.count_ones() as usize) {
        return false;
    }
    let set = elems_of(mask);
    let ai = g.inv(set[0]);
    let left = mask_of(&set.iter().map(|&x| g.mul(ai, x)).collect::<Vec<_>>());
    elems_of(left).iter().all(|&x| elems_of(left).iter().all(|&y| left >> g.mul(x, y) & 1 == 1))
}

/// Every subgroup of `g`, found by closing cyclic subgroups under pairwise joins.
pub fn enumerate_subgroups(g: &Arc<FiniteGroup>) -> Result<Vec<Subgroup>> {
    let n = g.order();
    if n > MAX_ENUMERATION_ORDER {
        return Err(GroupError::TooLargeForEnumeration { order: n, max: MAX_ENUMERATION_ORDER });
    }
    let mut found: HashSet<u64> = HashSet::new();
    let mut frontier: Vec<u64> = Vec::new();
    for x in 0..n {
        let m = mask_of(&g.closure(&[x]));
        if found.insert(m) {
            frontier.push(m);
        }
    }
    let cyclic: Vec<u64> = found.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &h in &frontier {
            for &c in &cyclic {
                if h | c == h {
                    continue;
                }
                let joined = mask_of(&g.closure(&elems_of(h | c)));
                if found.insert(joined) {
                    next.push(joined);
                }
            }
        }
        frontier = next;
    }
    let mut masks: Vec<u64> = found.into_iter().collect();
    masks.sort_by_key(|&m| (m.count_ones(), elems_of(m)));
    Ok(masks
        .into_iter()
        .map(|m| Subgroup { parent: Arc::clone(g), members: elems_of(m) })
        .collect())
}

// ---------------------------------------------------------------------------
// Quotients

#[derive(Debug, Clone)]
pub struct Quotient {
    source: Arc<FiniteGroup>,
    kernel: Subgroup,
    group: Arc<FiniteGroup>,
    projection: Vec<usize>,
}

impl Quotient {
    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn project(&self, x: usize) -> usize {
        self.projection[x]
    }
}

/// `G / N` for a normal subgroup `N`; cosets are numbered by first appearance.
pub fn quotient(g: &Arc<FiniteGroup>, normal: &Subgroup) -> Result<Quotient> {
    if !normal.parent.same_as(g) {
        return Err(GroupError::GroupMismatch);
    }
    if let Some(a) = normal.normality_witness() {
        return Err(GroupError::NotNormal(a));
    }
    let n = g.order();
    let mut projection = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if projection[x] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(x);
        for &k in normal.members() {
            projection[g.mul(x, k)] = idx;
        }
    }
    let q = reps.len();
    let mut flat = Vec::with_capacity(q * q);
    for &a in &reps {
        for &b in &reps {
            flat.push(projection[g.mul(a, b)] as u32);
        }
    }
    let label = format!("{}/{}", g.label(), normal.order());
    let group = Arc::new(FiniteGroup::from_dense(q, flat, label)?);
    Ok(Quotient { source: Arc::clone(g), kernel: normal.clone(), group, projection })
}

/// Preimage of a subset of the quotient under the projection.
pub fn pullback_set(q: &Quotient, set: &[usize]) -> Result<Vec<usize>> {
    let set = normalize_subset(&q.group, set)?;
    let mut inside = vec![false; q.group.order()];
    set.iter().for_each(|&x| inside[x] = true);
    Ok((0..q.source.order()).filter(|&x| inside[q.projection[x]]).collect())
}

// ---------------------------------------------------------------------------
// Homomorphisms

#[derive(Debug, Clone)]
pub struct GroupHom {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(domain: &Arc<FiniteGroup>, codomain: &Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if let Some((x, y)) = hom_violation(domain, codomain, &map)? {
            return Err(GroupError::NotHomomorphism(format!("fails at ({x}, {y})")));
        }
        Ok(GroupHom { domain: Arc::clone(domain), codomain: Arc::clone(codomain), map })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupHom { domain: Arc::clone(g), codomain: Arc::clone(g), map: (0..g.order()).collect() }
    }

    pub fn trivial(domain: &Arc<FiniteGroup>, codomain: &Arc<FiniteGroup>) -> Self {
        GroupHom { domain: Arc::clone(domain), codomain: Arc::clone(codomain), map: vec![0; domain.order()] }
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

/// First pair `(x, y)` with `map[xy] != map[x] map[y]`, after size and range checks.
pub fn hom_violation(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    map: &[usize],
) -> Result<Option<(usize, usize)>> {
    if map.len() != domain.order() {
        return Err(GroupError::NotHomomorphism(format!(
            "table has {} entries for a domain of order {}",
            map.len(),
            domain.order()
        )));
    }
    for &y in map {
        codomain.check_element(y)?;
    }
    for x in 0..domain.order() {
        for y in 0..domain.order() {
            if map[domain.mul(x, y)] != codomain.mul(map[x], map[y]) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// All homomorphisms `domain -> codomain`, by assigning images to a generating set.
pub fn enumerate_homs(domain: &Arc<FiniteGroup>, codomain: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let gens = generating_set(domain);
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    loop {
        if let Some(map) = extend_on_generators(domain, codomain, &gens, &images) {
            out.push(GroupHom { domain: Arc::clone(domain), codomain: Arc::clone(codomain), map });
        }
        // odometer over codomain^gens
        let mut i = 0;
        loop {
            if i == images.len() {
                return out;
            }
            images[i] += 1;
            if images[i] < codomain.order() {
                break;
            }
            images[i] = 0;
            i += 1;
        }
    }
}

/// Greedy generating set: repeatedly add the smallest element outside the closure.
pub fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    while let Some(x) = (0..g.order()).find(|&x| !inside[x]) {
        gens.push(x);
        inside.iter_mut().for_each(|b| *b = false);
        g.closure(&gens).into_iter().for_each(|y| inside[y] = true);
    }
    gens
}

fn extend_on_generators(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; domain.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = domain.mul(x, g);
            let fy = codomain.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    match hom_violation(domain, codomain, &map) {
        Ok(None) => Some(map),
        _ => None,
    }
}
