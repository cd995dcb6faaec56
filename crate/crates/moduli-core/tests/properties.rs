use moduli_core::basis::orbit_basis;
use moduli_core::catalog::{canonical_class, logan, weierstrass, Generator};
use moduli_core::certify::{certify, solve, verify, Coords, InequalitySystem, Relation, Row, Verdict};
use moduli_core::maps::{forgetful_pullback, permute};
use moduli_core::rational::{int, ratio};
use moduli_core::singularity::{age, units};
use moduli_core::{DivisorClass, SpaceContext, Q};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn small_q() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
}

fn pos_q() -> impl Strategy<Value = Q> {
    (1i64..=20, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
}

fn pointed() -> impl Strategy<Value = SpaceContext> {
    (2u32..=5, 1u32..=4).prop_map(|(g, n)| SpaceContext::pointed(g, n).unwrap())
}

fn class_on(ctx: SpaceContext) -> impl Strategy<Value = DivisorClass> {
    let basis = orbit_basis(&ctx);
    prop::collection::vec(small_q(), basis.len())
        .prop_map(move |cs| DivisorClass::from_terms(&ctx, basis.iter().cloned().zip(cs)).unwrap())
}

fn two_classes() -> impl Strategy<Value = (DivisorClass, DivisorClass)> {
    pointed().prop_flat_map(|ctx| (class_on(ctx.clone()), class_on(ctx)))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn addition_is_a_group((a, b) in two_classes()) {
        prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
        prop_assert_eq!(a.try_add(&b).unwrap().try_sub(&b).unwrap(), a.clone());
        prop_assert!(a.try_sub(&a).unwrap().is_zero());
    }

    #[test]
    fn scaling_distributes((a, b) in two_classes(), k in small_q()) {
        let lhs = a.try_add(&b).unwrap().scale(&k);
        let rhs = a.scale(&k).try_add(&b.scale(&k)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn forgetful_pullback_is_linear((a, b) in two_classes(), k in small_q(), pick in 0u32..8) {
        let which = pick % (a.ctx().n() + 1) + 1;
        let sum = a.scale(&k).try_add(&b).unwrap();
        let lhs = forgetful_pullback(&sum, which).unwrap();
        let rhs = forgetful_pullback(&a, which).unwrap().scale(&k).try_add(&forgetful_pullback(&b, which).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn permutations_compose(ctx in pointed(), seed in any::<u64>()) {
        let n = ctx.n() as usize;
        let a = DivisorClass::from_terms(
            &ctx,
            orbit_basis(&ctx).into_iter().enumerate().map(|(i, s)| (s, int((seed.rotate_left(i as u32) % 17) as i64 - 8))),
        ).unwrap();
        let id: Vec<u32> = (1..=n as u32).collect();
        prop_assert_eq!(permute(&a, &id).unwrap(), a.clone());
        let rev: Vec<u32> = (1..=n as u32).rev().collect();
        prop_assert_eq!(permute(&permute(&a, &rev).unwrap(), &rev).unwrap(), a);
    }

    #[test]
    fn weierstrass_class_is_symmetric(g in 2u32..=6, perm in (1usize..=4).prop_flat_map(permutation)) {
        let ctx = SpaceContext::pointed(g, perm.len() as u32).unwrap();
        let w = weierstrass(&ctx, false).unwrap().class;
        prop_assert_eq!(permute(&w, &perm).unwrap(), w);
    }

    #[test]
    fn logan_class_follows_its_weights(
        (weights, perm) in (1usize..=4)
            .prop_flat_map(|n| (prop::collection::vec(1u32..=3, n), permutation(n)))
    ) {
        let mut weights = weights;
        if weights.iter().sum::<u32>() < 2 {
            weights[0] = 2;
        }
        let g: u32 = weights.iter().sum();
        let mut moved = vec![0; weights.len()];
        for (l, &w) in weights.iter().enumerate() {
            moved[perm[l] as usize - 1] = w;
        }
        let lhs = permute(&logan(g, &weights).unwrap().class, &perm).unwrap();
        prop_assert_eq!(lhs, logan(g, &moved).unwrap().class);
    }

    #[test]
    fn age_of_inverse_unit(weights in prop::collection::vec(0u64..12, 1..8), m in 2u64..13) {
        let nontrivial = weights.iter().filter(|&&a| a % m != 0).count() as i64;
        for u in units(m) {
            let sum = age(&weights, m, u).unwrap() + age(&weights, m, m - u).unwrap();
            prop_assert_eq!(sum, int(nontrivial));
        }
    }
}

fn nodal_setup(g: u32, n: u32) -> (DivisorClass, Vec<Generator>) {
    let ctx = SpaceContext::nodal(g, n).unwrap();
    let k = canonical_class(&ctx).unwrap();
    let w = weierstrass(&ctx, true).unwrap();
    let bn = moduli_core::catalog::bn_glued_formal(g, n, &moduli_core::catalog::Scope::All).unwrap();
    (k, vec![bn, w])
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn certify_is_deterministic_and_verifies(g in 5u32..=9, n in 1u32..=6) {
        let (k, gens) = nodal_setup(g, n);
        let a = certify(&k, &gens, &Coords::Known).unwrap();
        let b = certify(&k, &gens, &Coords::Known).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(verify(&a, &k, &gens), a.verdict != Verdict::Infeasible);
    }

    #[test]
    fn scaling_a_generator_keeps_the_supremum(g in 5u32..=9, n in 1u32..=6, k1 in pos_q(), k2 in pos_q()) {
        let (k, gens) = nodal_setup(g, n);
        let scaled = vec![gens[0].scaled(&k1), gens[1].scaled(&k2)];
        let a = certify(&k, &gens, &Coords::Known).unwrap();
        let b = certify(&k, &scaled, &Coords::Known).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.sup_epsilon, b.sup_epsilon);
    }

    #[test]
    fn more_generators_never_hurt(g in 5u32..=9, n in 1u32..=6) {
        let (k, gens) = nodal_setup(g, n);
        let alone = certify(&k, &gens[1..], &Coords::Known).unwrap();
        let both = certify(&k, &gens, &Coords::Known).unwrap();
        prop_assert!(both.verdict >= alone.verdict);
        if let (Some(x), Some(y)) = (&alone.sup_epsilon, &both.sup_epsilon) {
            prop_assert!(y >= x);
        }
    }

    #[test]
    fn fewer_coordinates_never_hurt(g in 5u32..=9, n in 1u32..=6, skip in 0usize..64) {
        let (k, gens) = nodal_setup(g, n);
        let all = certify(&k, &gens, &Coords::Known).unwrap();
        let mut kept = all.coordinates.clone();
        kept.remove(skip % kept.len());
        let fewer = certify(&k, &gens, &Coords::Only(kept.into_iter().collect())).unwrap();
        prop_assert!(fewer.verdict >= all.verdict);
    }
}

fn system() -> impl Strategy<Value = InequalitySystem> {
    (1usize..=3, 1usize..=5).prop_flat_map(|(nx, nr)| {
        let row =
            (prop::collection::vec(small_q(), nx + 1), small_q(), any::<bool>()).prop_map(|(coeffs, bound, strict)| {
                Row {
                    coord: String::new(),
                    coeffs,
                    rel: if strict { Relation::Lt } else { Relation::Le },
                    bound,
                }
            });
        prop::collection::vec(row, nr).prop_map(move |rows| InequalitySystem {
            variables: (0..=nx).map(|j| format!("x{j}")).collect(),
            rows,
        })
    })
}

fn satisfies(sys: &InequalitySystem, p: &[Q]) -> bool {
    p.iter().all(|x| *x >= Q::from_integer(0.into()))
        && sys.rows.iter().all(|r| {
            let lhs: Q = r.coeffs.iter().zip(p).map(|(a, x)| a * x).sum();
            match r.rel {
                Relation::Le => lhs <= r.bound,
                Relation::Lt => lhs < r.bound,
            }
        })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn solver_points_satisfy_their_rows(sys in system()) {
        let sol = solve(&sys);
        match &sol.point {
            Some(p) => {
                prop_assert!(satisfies(&sys, p));
                if let (Some(sup), true) = (&sol.sup, sol.attained) {
                    prop_assert_eq!(p.last().unwrap(), sup);
                }
            }
            None => prop_assert_eq!(sol.verdict, Verdict::Infeasible),
        }
    }

    #[test]
    fn solver_supremum_is_not_exceeded(sys in system(), probe in prop::collection::vec(0i64..=6, 4)) {
        let sol = solve(&sys);
        let p: Vec<Q> = probe.iter().take(sys.variables.len()).map(|&v| ratio(v, 2)).collect();
        if satisfies(&sys, &p) {
            prop_assert_ne!(sol.verdict, Verdict::Infeasible);
            if let Some(sup) = &sol.sup {
                prop_assert!(p.last().unwrap() <= sup);
            }
        }
    }
}
