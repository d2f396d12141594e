use klein_lattice::abelian::{h1_abelian, random_module, random_unimodular};
use klein_lattice::catalog::{real_structure_cases, SMALL_GROUPS};
use klein_lattice::cohomology::{cocycles, h1_finite, les_of_pointed_sets, twist_whole, GGroup, ShortExactSequence};
use klein_lattice::cone::PolyhedralCone;
use klein_lattice::group::FiniteGroup;
use klein_lattice::hodge::{anti_invariant_class, HodgeLattice, HodgeType};
use klein_lattice::isometry::{count_definite_isometries, definite_group_order, is_isometry, KleinIsometry};
use klein_lattice::lattice::{e8, IntegerLattice, Sublattice};
use klein_lattice::matrix::IntMatrix;
use klein_lattice::num::{int_vec, rat_vec, Int, IntVec};
use klein_lattice::smith::smith;
use klein_lattice::subgroups::subgroup_count_check;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn int_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols).prop_map(move |v| {
        IntMatrix::from_fn(rows, cols, |i, j| Int::from(v[i * cols + j]))
    })
}

fn symmetric(n: usize, bound: i64) -> impl Strategy<Value = IntegerLattice> {
    prop::collection::vec(-bound..=bound, n * n).prop_map(move |v| {
        let g = IntMatrix::from_fn(n, n, |i, j| Int::from(v[i.min(j) * n + i.max(j)]));
        IntegerLattice::new(g).expect("symmetric")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_diagonal_and_divisible(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| int_matrix(r, c, 6))) {
        let s = smith(&a);
        let d = s.u.mul(&a).mul(&s.v);
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                let expected = if i == j { s.diag[i].clone() } else { Int::zero() };
                prop_assert_eq!(d.get(i, j), &expected);
            }
        }
        for w in s.diag[..s.rank].windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn signature_is_a_congruence_invariant(l in (1usize..6).prop_flat_map(|n| symmetric(n, 4)), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_unimodular(&mut rng, l.rank());
        let moved = IntegerLattice::new(l.gram().congruence(&p)).unwrap();
        prop_assert_eq!(moved.signature(), l.signature());
        prop_assert_eq!(moved.classify_type(), l.classify_type());
    }

    #[test]
    fn orthogonal_complement_is_primitive_and_orthogonal(
        l in (2usize..6).prop_flat_map(|n| symmetric(n, 3)),
        coeffs in prop::collection::vec(-3i64..=3, 6),
    ) {
        let n = l.rank();
        let v: IntVec = int_vec(&coeffs[..n]);
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let s = l.saturation(&Sublattice::new(n, vec![v]).unwrap());
        let perp = l.orthogonal_complement(&s);
        prop_assert!(perp.is_primitive());
        for a in perp.basis() {
            for b in s.basis() {
                prop_assert!(l.pairing(a, b).is_zero());
            }
        }
    }

    #[test]
    fn double_description_round_trip(rays in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3..7)) {
        let rays: Vec<IntVec> = rays.iter().map(|r| int_vec(r)).collect();
        let c = PolyhedralCone::from_rays(3, &rays).unwrap();
        let back = PolyhedralCone::from_constraints(3, c.halfspaces(), c.equations()).unwrap();
        prop_assert!(back.contains_cone(&c) && c.contains_cone(&back));
        for r in &rays {
            prop_assert!(c.contains_int(r));
        }
    }

    #[test]
    fn twisting_back_restores_the_action(seed in any::<u64>(), which in 0usize..4) {
        let (g, a) = [("Z2", "S3"), ("Z2", "D4"), ("Z3", "Z7"), ("V4", "Q8")][which];
        let g = FiniteGroup::named(g).unwrap();
        let a = FiniteGroup::named(a).unwrap();
        let actions = klein_lattice::catalog::actions_up_to_conjugacy(&g, &a);
        let mid = GGroup::new(g, a, actions[(seed as usize) % actions.len()].clone()).unwrap();
        let all = cocycles(&mid);
        let phi = &all[(seed as usize / 7) % all.len()];
        let twisted = twist_whole(&mid, phi).unwrap();
        let inverse: Vec<usize> = phi.iter().map(|&x| mid.carrier().inv(x)).collect();
        let back = twist_whole(&twisted, &inverse).unwrap();
        prop_assert_eq!(back.action_table(), mid.action_table());
    }

    #[test]
    fn finite_and_abelian_h1_agree(seed in any::<u64>(), which in 0usize..3) {
        let g = FiniteGroup::named(["Z2", "Z3", "V4"][which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = random_module(&mut rng, &g, 3);
        prop_assume!(module.is_finite() && module.moduli().iter().product::<Int>() <= Int::from(64));
        let h1 = h1_abelian(&module);
        let brute = h1_finite(&module.to_ggroup().unwrap());
        prop_assert_eq!(h1.size(), Some(brute.len()));
    }

    #[test]
    fn hodge_and_anti_hodge_are_exclusive(seed in any::<u64>()) {
        // Signed permutations of <2>^3 + <-2>, acting on the period e1 + i e2.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = IntegerLattice::diagonal(&[2, 2, 2, -2]);
        let h = HodgeLattice::new(l.clone(), rat_vec(&[1, 0, 0, 0]), rat_vec(&[0, 1, 0, 0])).unwrap();
        let mut perm: Vec<usize> = vec![0, 1, 2];
        use rand::seq::SliceRandom;
        perm.shuffle(&mut rng);
        let signs: Vec<i64> = (0..4).map(|_| if rand::Rng::random_bool(&mut rng, 0.5) { 1 } else { -1 }).collect();
        let m = IntMatrix::from_fn(4, 4, |i, j| {
            let src = if j < 3 { perm[j] } else { 3 };
            if i == src { Int::from(signs[j]) } else { Int::zero() }
        });
        prop_assert!(is_isometry(&l, &m).unwrap());
        let t = h.hodge_type(&m).unwrap();
        let keeps_plane = perm[0] < 2 && perm[1] < 2;
        prop_assert_eq!(keeps_plane, !matches!(t, HodgeType::Neither));
    }

    #[test]
    fn anti_invariant_class_is_fixed_and_interior(case in 0usize..2, n in 2usize..7) {
        let c = &real_structure_cases()[case];
        let ext = klein_lattice::hilbert::hilbert_square_extension(&c.hodge, n, &c.sigma_star, Some(&c.kahler)).unwrap();
        let model = &ext.report.kahler.as_ref().unwrap().model;
        let class = anti_invariant_class(model, &ext.operator).unwrap();
        let fixed = ext.operator.dagger_matrix().to_rat().mul_vec(&class.ambient);
        prop_assert_eq!(&fixed, &class.ambient);
        prop_assert!(model.cone.relative_interior_contains(&class.coordinates));
    }
}

#[test]
fn identity_is_fixed_by_its_own_dagger() {
    let c = &real_structure_cases()[0];
    let class = anti_invariant_class(&c.kahler, &KleinIsometry::identity(4)).unwrap();
    let omega = c.kahler.cone.interior_point();
    let doubled: Vec<Int> = omega.iter().map(|x| x * 2).collect();
    assert_eq!(klein_lattice::num::to_int_vec(&class.coordinates), Some(doubled));
}

#[test]
fn subgroup_classes_match_automorphism_orbits() {
    let carriers = SMALL_GROUPS
        .iter()
        .copied()
        .chain(["A4", "D6", "Z2xS3", "Z12", "D8", "Z2xD4", "Z3xS3", "S4", "Z2xA4", "Z2xZ2xS3"]);
    let subs = ["Z2", "Z3", "Z4", "V4", "S3"].map(|s| FiniteGroup::named(s).unwrap());
    for name in carriers {
        let a = FiniteGroup::named(name).unwrap();
        assert!(a.order() <= 24);
        for g in &subs {
            let r = subgroup_count_check(&a, g);
            assert!(r.agree, "{name}: {r:?}");
        }
    }
}

#[test]
fn split_sequence_has_trivial_connecting_map() {
    let z2 = FiniteGroup::cyclic(2);
    let carrier = z2.direct_product(&z2);
    for (aut, label) in [(vec![0, 1, 2, 3], "trivial"), (vec![0, 2, 1, 3], "swap")] {
        let mid = GGroup::from_generator_action(z2.clone(), carrier.clone(), &[(1, aut)]).unwrap();
        let diagonal = vec![0, 3];
        let ses = ShortExactSequence::from_normal_subgroup(&mid, &diagonal).unwrap();
        let les = les_of_pointed_sets(&ses);
        assert!(les.is_exact(), "{label}");
        if label == "trivial" {
            assert!(les.connecting.iter().all(|&c| c == 0));
        }
    }
}

#[test]
fn e8_orbit_stabilizer_order() {
    assert_eq!(definite_group_order(&e8()).unwrap(), 696_729_600);
}

#[test]
#[ignore = "visits all 696729600 leaves; run with --ignored"]
fn e8_backtracking_count() {
    assert_eq!(count_definite_isometries(&e8()).unwrap(), 696_729_600);
}
