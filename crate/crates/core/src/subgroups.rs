//! Conjugacy classes of finite subgroups, for finite groups by exhaustive
//! enumeration and for integral matrix groups inside a word ball.

use crate::group::FiniteGroup;
use crate::isometry::{finite_order, Completeness, GeneratedGroup, WordBall};
use crate::matrix::IntMatrix;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// Smallest member of each conjugacy class of subgroups.
pub fn finite_subgroup_classes(a: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut reps: Vec<Vec<usize>> = a
        .subgroup_classes()
        .into_iter()
        .map(|class| class.into_iter().min().expect("nonempty class"))
        .collect();
    reps.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    reps
}

/// Subgroups of `A` isomorphic to `G` up to conjugacy, compared with
/// injective homomorphisms `G → A` up to conjugacy in `A` and up to
/// automorphisms of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupCountReport {
    pub subgroup_classes: usize,
    /// Injective classes in `Hom(G, A)/A`, the trivial-action `H¹(G, A)`.
    pub injective_hom_classes: usize,
    /// Orbits of `Aut(G) × A` on injective homomorphisms.
    pub injective_hom_orbits: usize,
    pub automorphisms_of_g: usize,
    pub agree: bool,
}

pub fn subgroup_count_check(a: &FiniteGroup, g: &FiniteGroup) -> SubgroupCountReport {
    let injective: Vec<Vec<usize>> = g
        .homomorphisms(a)
        .into_iter()
        .filter(|h| h.iter().collect::<BTreeSet<_>>().len() == h.len())
        .collect();
    let auts = g.automorphisms();
    let conj_canon = |h: &[usize]| -> Vec<usize> {
        a.elements().map(|x| h.iter().map(|&y| a.conj(x, y)).collect::<Vec<_>>()).min().expect("nonempty")
    };
    let hom_classes: BTreeSet<Vec<usize>> = injective.iter().map(|h| conj_canon(h)).collect();
    let orbits: BTreeSet<Vec<usize>> = injective
        .iter()
        .map(|h| {
            auts.iter()
                .map(|alpha| conj_canon(&alpha.iter().map(|&x| h[x]).collect::<Vec<_>>()))
                .min()
                .expect("identity automorphism")
        })
        .collect();
    let images: BTreeSet<Vec<usize>> = injective
        .iter()
        .map(|h| {
            let mut s = h.clone();
            s.sort_unstable();
            s
        })
        .collect();
    let subgroup_classes = a
        .subgroup_classes()
        .into_iter()
        .filter(|class| class.iter().any(|s| images.contains(s)))
        .count();
    SubgroupCountReport {
        subgroup_classes,
        injective_hom_classes: hom_classes.len(),
        injective_hom_orbits: orbits.len(),
        automorphisms_of_g: auts.len(),
        agree: subgroup_classes == orbits.len(),
    }
}

/// Finite subgroups of a matrix group found inside a word ball, one per
/// conjugacy class under conjugation by ball elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixSubgroupClasses {
    /// Sorted elements of each representative, classes ordered by size and
    /// then by the word length of their elements.
    pub representatives: Vec<Vec<IntMatrix>>,
    pub subgroups_found: usize,
    pub ball_size: usize,
    pub completeness: Completeness,
}

/// A single finite subgroup of `GL_n(Z)` has at most this many elements for
/// `n ≤ 4`; closures growing past it are treated as infinite.
pub const SUBGROUP_CLOSURE_CAP: usize = 1152;

/// Closure of `gens` if every element has finite order and it stays small.
fn torsion_closure(n: usize, gens: &[IntMatrix]) -> Option<Vec<IntMatrix>> {
    let id = IntMatrix::identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut all = vec![id];
    let mut i = 0;
    while i < all.len() {
        for g in gens {
            let m = g.mul(&all[i]);
            if !seen.contains(&m) {
                finite_order(&m)?;
                seen.insert(m.clone());
                all.push(m);
                if all.len() > SUBGROUP_CLOSURE_CAP {
                    return None;
                }
            }
        }
        i += 1;
    }
    all.sort();
    Some(all)
}

fn subgroup_key(ball: &WordBall, depth: usize, h: &[IntMatrix]) -> (usize, usize, usize, Vec<IntMatrix>) {
    let lengths: Vec<usize> = h.iter().map(|m| ball.get(m).map_or(depth + 1, |e| e.length)).collect();
    (h.len(), lengths.iter().copied().max().unwrap_or(0), lengths.iter().sum(), h.to_vec())
}

pub fn finite_subgroup_classes_matrix(dim: usize, group: &GeneratedGroup, depth: usize) -> MatrixSubgroupClasses {
    let ball = group.ball(dim, depth);
    finite_subgroup_classes_in(&ball, dim, depth, |_| true)
}

/// Same enumeration restricted to subgroups all of whose elements satisfy
/// `allowed`.
pub fn finite_subgroup_classes_in(
    ball: &WordBall,
    dim: usize,
    depth: usize,
    allowed: impl Fn(&IntMatrix) -> bool,
) -> MatrixSubgroupClasses {
    let torsion: Vec<&IntMatrix> = ball
        .matrices()
        .filter(|m| !m.is_identity() && allowed(m) && finite_order(m).is_some())
        .collect();
    let trivial = vec![IntMatrix::identity(dim)];
    let mut found: BTreeSet<Vec<IntMatrix>> = BTreeSet::from([trivial.clone()]);
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for &t in &torsion {
            if h.binary_search(t).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(t.clone());
            let Some(k) = torsion_closure(dim, &gens) else {
                continue;
            };
            if k.iter().all(&allowed) && found.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }

    let subgroups: Vec<Vec<IntMatrix>> = found.into_iter().collect();
    let index: HashMap<&Vec<IntMatrix>, usize> = subgroups.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..subgroups.len()).collect();
    let conjugators: Vec<(IntMatrix, IntMatrix)> = ball
        .matrices()
        .map(|g| (g.clone(), g.inverse_unimodular().expect("unimodular")))
        .collect();
    for (i, h) in subgroups.iter().enumerate() {
        for (g, ginv) in &conjugators {
            let mut c: Vec<IntMatrix> = h.iter().map(|x| g.mul(x).mul(ginv)).collect();
            c.sort();
            if let Some(&j) = index.get(&c) {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..subgroups.len() {
        let r = root(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    let mut representatives: Vec<Vec<IntMatrix>> = classes
        .values()
        .map(|members| {
            members
                .iter()
                .map(|&i| &subgroups[i])
                .min_by_key(|h| subgroup_key(ball, depth, h))
                .expect("nonempty class")
                .clone()
        })
        .collect();
    representatives.sort_by_key(|h| subgroup_key(ball, depth, h));
    MatrixSubgroupClasses {
        representatives,
        subgroups_found: subgroups.len(),
        ball_size: ball.len(),
        completeness: Completeness::BoundedSearch { depth },
    }
}

fn root(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Some ball element `g` with `g A g^-1 = B` for sorted subgroups.
pub fn conjugating_element(ball: &WordBall, a: &[IntMatrix], b: &[IntMatrix]) -> Option<IntMatrix> {
    if a.len() != b.len() {
        return None;
    }
    ball.matrices()
        .find(|g| {
            let ginv = g.inverse_unimodular().expect("unimodular");
            let mut c: Vec<IntMatrix> = a.iter().map(|x| g.mul(x).mul(&ginv)).collect();
            c.sort();
            c == b
        })
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_classes() {
        assert_eq!(finite_subgroup_classes(&FiniteGroup::symmetric(3)).len(), 4);
        assert_eq!(finite_subgroup_classes(&FiniteGroup::trivial()).len(), 1);
        let d4 = FiniteGroup::dihedral(4);
        let r = subgroup_count_check(&d4, &FiniteGroup::named("V4").unwrap());
        assert_eq!(r.subgroup_classes, 2);
        assert!(r.agree);
        assert!(r.injective_hom_classes > r.subgroup_classes);
    }

    #[test]
    fn infinite_dihedral() {
        let m = IntMatrix::from_i64(&[&[3, 4], &[2, 3]]);
        let r = IntMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        let g = GeneratedGroup::holomorphic(vec![m, r.clone()], 12);
        let classes = finite_subgroup_classes_matrix(2, &g, 12);
        assert_eq!(classes.representatives.len(), 3);
        assert_eq!(classes.representatives[1], {
            let mut v = vec![IntMatrix::identity(2), r];
            v.sort();
            v
        });
    }
}
