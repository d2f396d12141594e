//! Shipped example data: Hodge lattices with real structures, the Pell and
//! infinite dihedral groups, finite Klein groups, short exact sequences of
//! small groups, and generators for random lattice configurations.

use crate::cohomology::GGroup;
use crate::cone::PolyhedralCone;
use crate::domain::{dirichlet_domain, DomainCertificate, PositiveCone};
use crate::group::{permutation_closure, FiniteGroup};
use crate::hodge::{HodgeLattice, KahlerModel};
use crate::isometry::GeneratedGroup;
use crate::lattice::{builtin, k3_lattice, IntegerLattice, Sublattice};
use crate::matrix::IntMatrix;
use crate::num::{int_vec, rat_vec, Int, IntVec};
use crate::real_forms::KleinGroup;
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeSet;

/// A Hodge lattice, an anti-Hodge involution and a Kähler model preserved by
/// its dagger action.
#[derive(Debug, Clone)]
pub struct RealStructureCase {
    pub name: &'static str,
    pub hodge: HodgeLattice,
    pub sigma_star: IntMatrix,
    pub kahler: KahlerModel,
}

fn unit(n: usize, i: usize) -> IntVec {
    let mut v = vec![Int::zero(); n];
    v[i] = 1.into();
    v
}

fn toy(name: &'static str, sigma: &[i64], rays: &[IntVec]) -> RealStructureCase {
    let l = IntegerLattice::diagonal(&[2, 2, 2, -2]);
    let hodge = HodgeLattice::new(l.clone(), rat_vec(&[1, 0, 0, 0]), rat_vec(&[0, 1, 0, 0])).expect("valid period");
    let cone = PolyhedralCone::from_rays(2, rays).expect("cone");
    let kahler = KahlerModel::new(&l, cone, vec![unit(4, 2), unit(4, 3)]).expect("Kähler model");
    RealStructureCase { name, hodge, sigma_star: IntMatrix::diagonal(&int_vec(sigma)), kahler }
}

/// `U³ ⊕ E8(−1)²` with period `x = e1 + f1`, `y = e2 + f2` and the real
/// structure acting as `id` on the first `U` and `−id` elsewhere.
pub fn k3_case() -> RealStructureCase {
    let l = k3_lattice();
    let n = l.rank();
    let mut x = vec![0i64; n];
    x[0] = 1;
    x[1] = 1;
    let mut y = vec![0i64; n];
    y[2] = 1;
    y[3] = 1;
    let hodge = HodgeLattice::new(l.clone(), rat_vec(&x), rat_vec(&y)).expect("valid period");
    let mut diag = vec![-1i64; n];
    diag[0] = 1;
    diag[1] = 1;

    // NS basis: a = e1 − f1, a' = e2 − f2, e3, f3, then the E8(−1) basis.
    let mut embedding = Vec::with_capacity(20);
    let mut a = vec![Int::zero(); n];
    a[0] = 1.into();
    a[1] = (-1).into();
    embedding.push(a);
    let mut a2 = vec![Int::zero(); n];
    a2[2] = 1.into();
    a2[3] = (-1).into();
    embedding.push(a2);
    for i in 4..n {
        embedding.push(unit(n, i));
    }
    // Rays h ± a, h + a', e3 and h + b_i with h = e3 + f3, all of square 0.
    let h = {
        let mut v = vec![Int::zero(); 20];
        v[2] = 1.into();
        v[3] = 1.into();
        v
    };
    let plus = |i: usize, s: i64| {
        let mut v = h.clone();
        v[i] += s;
        v
    };
    let mut rays = vec![plus(0, 1), plus(0, -1), plus(1, 1), unit(20, 2)];
    rays.extend((4..20).map(|i| plus(i, 1)));
    let cone = PolyhedralCone::from_rays(20, &rays).expect("cone");
    let kahler = KahlerModel::new(&l, cone, embedding).expect("Kähler model");
    RealStructureCase { name: "k3-u-split", hodge, sigma_star: IntMatrix::diagonal(&int_vec(&diag)), kahler }
}

/// All shipped anti-Hodge involutions.
pub fn real_structure_cases() -> Vec<RealStructureCase> {
    vec![
        toy("toy-fix-ns", &[1, -1, -1, -1], &[int_vec(&[1, 0]), int_vec(&[1, 1])]),
        toy("toy-swap-rays", &[1, -1, -1, 1], &[int_vec(&[1, 1]), int_vec(&[1, -1])]),
        k3_case(),
    ]
}

/// The Pell unit `[[3,4],[2,3]]`, an isometry of `diag(2, −4)`.
pub fn pell_matrix() -> IntMatrix {
    IntMatrix::from_i64(&[&[3, 4], &[2, 3]])
}

pub fn pell_reflection() -> IntMatrix {
    IntMatrix::from_i64(&[&[1, 0], &[0, -1]])
}

pub fn pell_cone() -> PositiveCone {
    PositiveCone::new(IntegerLattice::diagonal(&[2, -4]), rat_vec(&[1, 0])).expect("hyperbolic")
}

pub fn pell_group(word_bound: usize) -> GeneratedGroup {
    GeneratedGroup::holomorphic(vec![pell_matrix()], word_bound)
}

pub fn dihedral_group(word_bound: usize) -> GeneratedGroup {
    GeneratedGroup::holomorphic(vec![pell_matrix(), pell_reflection()], word_bound)
}

/// Dirichlet domain of the Pell group around `(1, 0)`.
pub fn pell_certificate(word_bound: usize) -> DomainCertificate {
    dirichlet_domain(&pell_group(word_bound), &pell_cone(), &rat_vec(&[1, 0])).expect("Pell domain")
}

/// Named finite group with a character and a chosen anti-involution.
#[derive(Debug, Clone)]
pub struct KleinCase {
    pub name: String,
    pub group: KleinGroup,
    pub sigma: usize,
}

const KLEIN_CARRIERS: [&str; 12] =
    ["Z2", "V4", "Z4", "Z6", "S3", "D4", "Q8", "Z2xZ2xZ2", "Z4xZ2", "D6", "Z2xS3", "Z2xD4"];

/// Every surjective character of the carriers above that admits an
/// anti-holomorphic involution, each paired with every such involution.
pub fn klein_cases() -> Vec<KleinCase> {
    let z2 = FiniteGroup::cyclic(2);
    let mut out = Vec::new();
    for name in KLEIN_CARRIERS {
        let g = FiniteGroup::named(name).expect("known group");
        for (c, chi) in g.homomorphisms(&z2).into_iter().filter(|h| h.contains(&1)).enumerate() {
            let holomorphic: Vec<bool> = chi.iter().map(|&v| v == 0).collect();
            let kg = KleinGroup::new(g.clone(), holomorphic).expect("surjective character");
            for sigma in kg.anti_involutions() {
                out.push(KleinCase { name: format!("{name}/eps{c}/sigma{sigma}"), group: kg.clone(), sigma });
            }
        }
    }
    out
}

/// Groups of order at most 8 up to isomorphism.
pub const SMALL_GROUPS: [&str; 14] =
    ["1", "Z2", "Z3", "Z4", "V4", "Z5", "Z6", "S3", "Z7", "Z8", "Z4xZ2", "Z2xZ2xZ2", "D4", "Q8"];

pub const ACTING_GROUPS: [&str; 3] = ["Z2", "Z3", "V4"];

/// A `G`-group with a stable normal subgroup.
#[derive(Debug, Clone)]
pub struct CorpusSequence {
    pub label: String,
    pub mid: GGroup,
    pub normal: Vec<usize>,
}

/// Actions of `g` on `a` by automorphisms, one per `Aut(a)`-conjugacy class.
pub fn actions_up_to_conjugacy(g: &FiniteGroup, a: &FiniteGroup) -> Vec<Vec<Vec<usize>>> {
    let autos = a.automorphisms();
    let perms = permutation_closure(&autos).expect("automorphisms are permutations");
    let aut = FiniteGroup::from_permutations(&autos).expect("automorphism group");
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for hom in g.homomorphisms(&aut) {
        let canon = aut
            .elements()
            .map(|c| hom.iter().map(|&x| aut.conj(c, x)).collect::<Vec<_>>())
            .min()
            .expect("nonempty");
        if seen.insert(canon) {
            out.push(hom.iter().map(|&x| perms[x].clone()).collect());
        }
    }
    out
}

/// All sequences `1 → N → A → A/N → 1` of `G`-groups for `G` in
/// [`ACTING_GROUPS`], `A` in [`SMALL_GROUPS`], actions up to conjugacy
/// and every stable normal subgroup `N`.
pub fn cohomology_corpus() -> Vec<CorpusSequence> {
    let mut out = Vec::new();
    for gname in ACTING_GROUPS {
        let g = FiniteGroup::named(gname).expect("known group");
        for aname in SMALL_GROUPS {
            let a = FiniteGroup::named(aname).expect("known group");
            let normals: Vec<Vec<usize>> = a.subgroups().into_iter().filter(|s| a.is_normal(s)).collect();
            for (i, action) in actions_up_to_conjugacy(&g, &a).into_iter().enumerate() {
                let mid = GGroup::new(g.clone(), a.clone(), action).expect("action by automorphisms");
                for n in &normals {
                    let stable = g.elements().all(|x| n.iter().all(|&v| n.binary_search(&mid.act(x, v)).is_ok()));
                    if stable {
                        out.push(CorpusSequence {
                            label: format!("{gname} on {aname} (action {i}), N of order {}", n.len()),
                            mid: mid.clone(),
                            normal: n.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// A lattice with basis `v, b_1..b_k, h` whose first `k + 1` vectors span a
/// parabolic primitive sublattice `N` with radical `Zv`, `v·h ≠ 0` and
/// nondegenerate `G₀ = Gram(b)`.
pub fn random_parabolic_configuration<R: Rng>(rng: &mut R, k: usize) -> (IntegerLattice, Sublattice) {
    // G₀ = −TᵀT with T upper triangular and nonzero diagonal.
    let mut t = IntMatrix::zeros(k, k);
    for i in 0..k {
        let sign = if rng_sign(rng) { 1 } else { -1 };
        t.set(i, i, Int::from(sign * rng.random_range(1..=2i64)));
        for j in i + 1..k {
            t.set(i, j, Int::from(rng.random_range(-2..=2i64)));
        }
    }
    let g0 = t.transpose().mul(&t).neg();
    let n = k + 2;
    let c = rng.random_range(1..=3i64) * if rng_sign(rng) { 1 } else { -1 };
    let a: Vec<i64> = (0..k).map(|_| rng.random_range(-3..=3)).collect();
    let d = 2 * rng.random_range(-2..=2i64);
    let mut gram = IntMatrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            gram.set(i + 1, j + 1, g0.get(i, j).clone());
        }
        gram.set(i + 1, n - 1, Int::from(a[i]));
        gram.set(n - 1, i + 1, Int::from(a[i]));
    }
    gram.set(0, n - 1, Int::from(c));
    gram.set(n - 1, 0, Int::from(c));
    gram.set(n - 1, n - 1, Int::from(d));
    let l = IntegerLattice::new(gram).expect("symmetric");
    let s = Sublattice::new(n, (0..=k).map(|i| unit(n, i)).collect()).expect("coordinate sublattice");
    (l, s)
}

fn rng_sign<R: Rng>(rng: &mut R) -> bool {
    rng.random_bool(0.5)
}

/// `U ⊕ U` with `N = Z e1`, where an Eichler transvection fixes `N`.
pub fn transvection_control() -> (IntegerLattice, Sublattice) {
    let l = builtin("U+U").expect("builtin");
    let n = Sublattice::new(4, vec![int_vec(&[1, 0, 0, 0])]).expect("primitive vector");
    (l, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::hilbert_square_extension;
    use crate::isometry::{fixes_pointwise_implies_identity, FixVerdict};
    use crate::lattice::LatticeType;
    use rand::SeedableRng;

    #[test]
    fn shipped_real_structures_extend() {
        for case in real_structure_cases() {
            assert!(case.hodge.is_anti_hodge(&case.sigma_star).unwrap(), "{}", case.name);
            let ext = hilbert_square_extension(&case.hodge, 3, &case.sigma_star, Some(&case.kahler)).unwrap();
            assert!(ext.report.passes(), "{}: {:?}", case.name, ext.report);
        }
        let k3 = k3_case();
        assert_eq!(k3.hodge.neron_severi().rank(), 20);
        assert_eq!(k3.hodge.ns_type(), LatticeType::Hyperbolic);
    }

    #[test]
    fn parabolic_configurations_fix_only_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in 1..4 {
            let (l, n) = random_parabolic_configuration(&mut rng, k);
            assert_eq!(n.restricted_lattice(&l).classify_type(), LatticeType::Parabolic);
            assert_eq!(fixes_pointwise_implies_identity(&l, &n).unwrap(), FixVerdict::IdentityOnly);
        }
    }

    #[test]
    fn corpora_are_nonempty() {
        assert!(klein_cases().len() > 10);
        let z2_on_z4 = actions_up_to_conjugacy(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4));
        assert_eq!(z2_on_z4.len(), 2);
    }
}
