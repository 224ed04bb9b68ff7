mod common;

use std::sync::{Arc, OnceLock};

use idemnorm::fourier::{
    a_norm, a_norm_abelian_oracle, group_matrix, pullback_function, restrict, GroupFunction, DEFAULT_SVD_TOL,
};
use idemnorm::group::{
    build_product, elems_of, enumerate_subgroups, is_coset, normalize_subset, pullback_set, quotient, FiniteGroup,
    Subgroup,
};
use idemnorm::hom::{
    hom_norm_exact_rank_one, hom_norm_lower_sample, hom_norm_upper, induce, random_piecewise_map, rho_f, InducedHom,
};
use idemnorm::search::{brute_force_max, gap_audit, orbit_spot_check, product_witness};
use idemnorm::zline::{az_norm, QuadratureConfig, ZFunction};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn small() -> &'static [(String, Arc<FiniteGroup>)] {
    static GROUPS: OnceLock<Vec<(String, Arc<FiniteGroup>)>> = OnceLock::new();
    GROUPS.get_or_init(groups_up_to_12)
}

fn abelian64() -> &'static [(Vec<usize>, Arc<FiniteGroup>)] {
    static GROUPS: OnceLock<Vec<(Vec<usize>, Arc<FiniteGroup>)>> = OnceLock::new();
    GROUPS.get_or_init(|| abelian_groups_up_to(64))
}

fn norm(u: &GroupFunction) -> f64 {
    a_norm(u, DEFAULT_SVD_TOL).unwrap().value
}

fn random_subset(g: &FiniteGroup, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let set: Vec<usize> = (0..g.order()).filter(|_| rng.gen_bool(0.5)).collect();
    if set.is_empty() {
        vec![rng.gen_range(0..g.order())]
    } else {
        set
    }
}

fn random_subgroup(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> Subgroup {
    let all = enumerate_subgroups(g).unwrap();
    all[rng.gen_range(0..all.len())].clone()
}

fn random_normal(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> Subgroup {
    let normal: Vec<Subgroup> = enumerate_subgroups(g).unwrap().into_iter().filter(Subgroup::is_normal).collect();
    normal[rng.gen_range(0..normal.len())].clone()
}

fn kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let (n, m) = (a.len(), b.len());
    (0..n * m).map(|r| (0..n * m).map(|c| a[r / m][c / m] * b[r % m][c % m]).collect()).collect()
}

fn group_and_seed() -> impl Strategy<Value = (usize, u64)> {
    (0..small().len(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_and_inversion_invariance((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_subset(g, &mut rng);
        let a = rng.gen_range(0..g.order());
        let base = norm(&GroupFunction::indicator(g, &f).unwrap());
        for moved in [g.left_translate(a, &f), g.right_translate(&f, a), g.inverse_set(&f)] {
            let v = norm(&GroupFunction::indicator(g, &moved).unwrap());
            prop_assert!((v - base).abs() <= 1e-10, "{} vs {}", v, base);
        }
    }

    #[test]
    fn abelian_oracle_agrees(gi in 0..abelian64().len(), seed in any::<u64>()) {
        let (moduli, g) = &abelian64()[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = GroupFunction::random_gaussian(g, &mut rng);
        let d = (norm(&u) - a_norm_abelian_oracle(&u).unwrap().value).abs();
        prop_assert!(d <= 1e-10, "{:?}: {}", moduli, d);
    }

    #[test]
    fn rectangles_are_kronecker_products(i in 0..18usize, j in 0..18usize, seed in any::<u64>()) {
        let (a, b) = (&small()[i].1, &small()[j].1);
        let p = arc(build_product(&[(**a).clone(), (**b).clone()]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (fa, fb) = (random_subset(a, &mut rng), random_subset(b, &mut rng));
        let rect: Vec<usize> = fa.iter().flat_map(|&x| fb.iter().map(move |&y| x * b.order() + y)).collect();
        let (ua, ub) = (GroupFunction::indicator(a, &fa).unwrap(), GroupFunction::indicator(b, &fb).unwrap());
        let up = GroupFunction::indicator(&p, &rect).unwrap();
        prop_assert_eq!(group_matrix(&up), kron(&group_matrix(&ua), &group_matrix(&ub)));
        let d = (norm(&up) - norm(&ua) * norm(&ub)).abs();
        prop_assert!(d <= 1e-10, "{}", d);
    }

    #[test]
    fn sub_additive_and_sub_multiplicative((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = GroupFunction::random_gaussian(g, &mut rng);
        let v = GroupFunction::random_gaussian(g, &mut rng);
        let (nu, nv) = (norm(&u), norm(&v));
        prop_assert!(norm(&u.add(&v).unwrap()) <= nu + nv + 1e-10);
        prop_assert!(norm(&u.mul(&v).unwrap()) <= nu * nv + 1e-10);
    }

    #[test]
    fn quotient_pullback_is_isometric((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = quotient(g, &random_normal(g, &mut rng)).unwrap();
        let u = GroupFunction::random_gaussian(q.group(), &mut rng);
        let d = (norm(&pullback_function(&q, &u).unwrap()) - norm(&u)).abs();
        prop_assert!(d <= 1e-10, "{}", d);
    }

    #[test]
    fn restriction_is_contractive((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_subgroup(g, &mut rng);
        let u = GroupFunction::random_gaussian(g, &mut rng);
        prop_assert!(norm(&restrict(&u, &h).unwrap()) <= norm(&u) + 1e-10);
    }

    #[test]
    fn cosets_of_enumerated_subgroups((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_subgroup(g, &mut rng);
        let a = rng.gen_range(0..g.order());
        let left = g.left_translate(a, h.members());
        prop_assert!(is_coset(g, &left).unwrap().is_coset());
        prop_assert!(is_coset(g, &g.right_translate(h.members(), a)).unwrap().is_coset());
        prop_assert!((norm(&GroupFunction::indicator(g, &left).unwrap()) - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn lagrange_rules_out_cosets((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_subset(g, &mut rng);
        if !g.order().is_multiple_of(f.len()) {
            prop_assert!(!is_coset(g, &f).unwrap().is_coset());
        }
    }

    #[test]
    fn pullback_set_round_trip((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_normal(g, &mut rng);
        let q = quotient(g, &n).unwrap();
        let f = random_subset(q.group(), &mut rng);
        let lifted = pullback_set(&q, &f).unwrap();
        prop_assert_eq!(lifted.len(), f.len() * n.order());
        let image: Vec<usize> = lifted.iter().map(|&x| q.project(x)).collect();
        prop_assert_eq!(normalize_subset(q.group(), &image).unwrap(), f.clone());
        let up = norm(&GroupFunction::indicator(g, &lifted).unwrap());
        let down = norm(&GroupFunction::indicator(q.group(), &f).unwrap());
        prop_assert!((up - down).abs() <= 1e-10);
    }

    #[test]
    fn orbit_representatives_share_norms((gi, seed) in group_and_seed()) {
        let check = orbit_spot_check(&small()[gi].1, 200, seed).unwrap();
        prop_assert!(check.max_diff <= 1e-10, "{}", check.max_diff);
    }

    #[test]
    fn induce_is_multiplicative_and_bounds_sandwich(gi in 0..18usize, hi in 0..18usize, seed in any::<u64>()) {
        let (g, h) = (&small()[gi].1, &small()[hi].1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = InducedHom::new(random_piecewise_map(g, h, &mut rng).unwrap());
        let u = GroupFunction::random_gaussian(h, &mut rng);
        let v = GroupFunction::random_gaussian(h, &mut rng);
        let lhs = induce(&rho, &u.mul(&v).unwrap()).unwrap();
        let rhs = induce(&rho, &u).unwrap().mul(&induce(&rho, &v).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        let lower = hom_norm_lower_sample(&rho, 8, seed).unwrap().value;
        let upper = hom_norm_upper(&rho).unwrap();
        prop_assert!(lower <= upper + 1e-9, "{} > {}", lower, upper);
    }

    #[test]
    fn rank_one_bounds_sandwich((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = &small()[rng.gen_range(0..small().len())].1;
        let rho = rho_f(&random_subset(g, &mut rng), g, h).unwrap();
        let exact = hom_norm_exact_rank_one(&rho).unwrap();
        let lower = hom_norm_lower_sample(&rho, 6, seed).unwrap().value;
        prop_assert!(lower <= exact + 1e-9 && exact <= hom_norm_upper(&rho).unwrap() + 1e-9);
    }

    #[test]
    fn exhaustive_maximum_dominates_witnesses((gi, seed) in group_and_seed()) {
        let g = &small()[gi].1;
        let best = brute_force_max(g).unwrap().best_norm;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let f = random_subset(g, &mut rng);
            prop_assert!(norm(&GroupFunction::indicator(g, &f).unwrap()) <= best + 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn az_norm_coefficient_bounds(values in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..12), lo in -40i64..40) {
        let support: Vec<i64> = (lo..lo + values.len() as i64).collect();
        let values: Vec<Complex64> = values.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let f = match ZFunction::new(support, values.clone()) {
            Ok(f) => f,
            Err(_) => return Ok(()),
        };
        let cfg = QuadratureConfig::with_tol(1e-9);
        let v = az_norm(&f, &cfg).unwrap().value;
        let l1: f64 = values.iter().map(|c| c.norm()).sum();
        let sup = values.iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!(v <= l1 + 1e-8 && v >= sup - 1e-8, "{} not in [{}, {}]", v, sup, l1);
    }

    #[test]
    fn az_norm_translation_invariant(values in prop::collection::vec(-2.0f64..2.0, 1..10), by in -1000i64..1000) {
        let support: Vec<i64> = (0..values.len() as i64).collect();
        let f = match ZFunction::new(support, values.iter().map(|&x| Complex64::new(x, 0.0)).collect()) {
            Ok(f) => f,
            Err(_) => return Ok(()),
        };
        let cfg = QuadratureConfig::with_tol(1e-9);
        let a = az_norm(&f, &cfg).unwrap().value;
        let b = az_norm(&f.shifted(by), &cfg).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9, "{} vs {}", a, b);
    }
}

#[test]
fn gap_audit_is_clean_up_to_order_12() {
    for (name, g) in small() {
        let report = gap_audit(g).unwrap();
        assert!(report.violations.is_empty(), "{name}: {:?}", report.violations);
        assert_eq!(report.subsets_checked, (1u64 << g.order()) - 1);
    }
}

#[test]
fn rank_one_identity_up_to_order_12() {
    for (name, g) in small().iter().filter(|(_, g)| g.order() > 10) {
        for m in 1u64..1 << g.order() {
            let f = elems_of(m);
            let exact = hom_norm_exact_rank_one(&rho_f(&f, g, g).unwrap()).unwrap();
            let direct = idemnorm::fourier::indicator_norm(g, &f).unwrap();
            assert!((exact - direct).abs() <= 1e-10, "{name} {f:?}");
        }
    }
}

#[test]
fn rank_one_growth_on_z3_powers() {
    let z3 = cyclic(3);
    for n in 1..=5 {
        let w = product_witness(&vec![(Arc::clone(&z3), vec![0, 1]); n]).unwrap();
        let rho = rho_f(&w.subset, &w.group, &z3).unwrap();
        let exact = hom_norm_exact_rank_one(&rho).unwrap();
        assert!((exact - (4.0f64 / 3.0).powi(n as i32)).abs() <= 1e-10 * exact, "n = {n}: {exact}");
        assert!((exact - w.norm).abs() <= 1e-10);
    }
}

#[test]
fn quotient_preserves_witness_norms() {
    for (name, g) in small() {
        let best = brute_force_max(g).unwrap();
        for n in enumerate_subgroups(g).unwrap().into_iter().filter(Subgroup::is_normal) {
            let q = quotient(g, &n).unwrap();
            let down = brute_force_max(q.group()).unwrap();
            let lifted = pullback_set(&q, &down.best_subset).unwrap();
            let up = norm(&GroupFunction::indicator(g, &lifted).unwrap());
            assert!((up - down.best_norm).abs() <= 1e-10, "{name} / {:?}", n.members());
            assert!(up <= best.best_norm + 1e-10);
        }
    }
}

#[test]
fn catalog_sanity() {
    let orders: Vec<usize> = small().iter().map(|(_, g)| g.order()).collect();
    assert_eq!(orders.len(), 24);
    for (name, g) in small() {
        g.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    assert_eq!(quaternion().order(), 8);
    assert!(!quaternion().is_abelian());
    assert_eq!(quaternion().order_profile().iter().filter(|&&o| o == 2).count(), 1);
    assert_eq!(alternating4().order(), 12);
    assert_eq!(dicyclic12().order(), 12);
    assert_eq!(dicyclic12().order_profile().iter().filter(|&&o| o == 2).count(), 1);
    assert_eq!(abelian_groups_up_to(32).len(), 55);
}
