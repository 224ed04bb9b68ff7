#![allow(dead_code)]

use std::sync::Arc;

use idemnorm::group::{
    build_cyclic, build_dihedral, build_from_permutations, build_product, build_symmetric, FiniteGroup,
};

pub fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
    Arc::new(g)
}

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    arc(build_cyclic(n).unwrap())
}

pub fn product(moduli: &[usize]) -> Arc<FiniteGroup> {
    let factors: Vec<FiniteGroup> = moduli.iter().map(|&m| build_cyclic(m).unwrap()).collect();
    arc(build_product(&factors).unwrap())
}

pub fn dihedral(n: usize) -> Arc<FiniteGroup> {
    arc(build_dihedral(n).unwrap())
}

pub fn symmetric(n: usize) -> Arc<FiniteGroup> {
    arc(build_symmetric(n).unwrap())
}

/// Quaternion group from `i = (1234)(5678)`, `j = (1537)(2846)`.
pub fn quaternion() -> Arc<FiniteGroup> {
    arc(build_from_permutations(&[vec![1, 2, 3, 0, 5, 6, 7, 4], vec![4, 7, 6, 5, 2, 1, 0, 3]]).unwrap())
}

/// `A_4` from `(123)` and `(12)(34)`.
pub fn alternating4() -> Arc<FiniteGroup> {
    arc(build_from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap())
}

/// Dicyclic group of order 12 from `(123)` and `(23)(4567)`.
pub fn dicyclic12() -> Arc<FiniteGroup> {
    arc(build_from_permutations(&[vec![1, 2, 0, 3, 4, 5, 6], vec![0, 2, 1, 4, 5, 6, 3]]).unwrap())
}

/// One representative of every isomorphism class of order at most 10.
pub fn groups_up_to_10() -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out: Vec<(String, Arc<FiniteGroup>)> = (1..=10).map(|n| (format!("Z{n}"), cyclic(n))).collect();
    out.push(("Z2xZ2".into(), product(&[2, 2])));
    out.push(("Z2xZ4".into(), product(&[2, 4])));
    out.push(("Z2xZ2xZ2".into(), product(&[2, 2, 2])));
    out.push(("D4".into(), dihedral(4)));
    out.push(("Q8".into(), quaternion()));
    out.push(("Z3xZ3".into(), product(&[3, 3])));
    out.push(("S3".into(), symmetric(3)));
    out.push(("D5".into(), dihedral(5)));
    out
}

/// [`groups_up_to_10`] plus every group of order 11 and 12.
pub fn groups_up_to_12() -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out = groups_up_to_10();
    out.push(("Z11".into(), cyclic(11)));
    out.push(("Z12".into(), cyclic(12)));
    out.push(("Z2xZ6".into(), product(&[2, 6])));
    out.push(("A4".into(), alternating4()));
    out.push(("D6".into(), dihedral(6)));
    out.push(("Dic3".into(), dicyclic12()));
    out
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Cyclic factor lists for every abelian group of order `n`, one per isomorphism class.
pub fn abelian_types(n: usize) -> Vec<Vec<usize>> {
    let mut types = vec![vec![]];
    let mut rest = n;
    let mut p = 2;
    while rest > 1 {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            let mut next = Vec::new();
            for t in &types {
                for part in partitions(e, e) {
                    let mut moduli = t.clone();
                    moduli.extend(part.iter().map(|&k| p.pow(k as u32)));
                    next.push(moduli);
                }
            }
            types = next;
        }
        p += 1;
    }
    for t in &mut types {
        if t.is_empty() {
            t.push(1);
        }
    }
    types
}

/// Every abelian group of order at most `max`, as products of cyclic groups.
pub fn abelian_groups_up_to(max: usize) -> Vec<(Vec<usize>, Arc<FiniteGroup>)> {
    (1..=max).flat_map(abelian_types).map(|m| (m.clone(), product(&m))).collect()
}

/// Members of the first enumerated subgroup of order `k`.
pub fn subgroup_of_order(g: &Arc<FiniteGroup>, k: usize) -> Vec<usize> {
    idemnorm::group::enumerate_subgroups(g)
        .unwrap()
        .into_iter()
        .find(|h| h.order() == k)
        .map(|h| h.members().to_vec())
        .expect("a subgroup of that order")
}
