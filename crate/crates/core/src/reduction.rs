//! Finite subgroups of a group acting on a cone with a fundamental domain:
//! moving a finite subgroup so that it fixes a point of the domain, and
//! enumerating subgroups inside the finite set of elements `φ` with
//! `φΣ ∩ Σ ≠ 0`.

use crate::cone::ConeError;
use crate::domain::{siegel_intersections, DomainCertificate, DomainError};
use crate::filtration::{filtration_semidirect, FiltrationError, Representatives, SemidirectAbelian};
use crate::isometry::{Completeness, GeneratedGroup, KleinIsometry};
use crate::matrix::IntMatrix;
use crate::num::{self, RatVec};
use crate::subgroups::{conjugating_element, finite_subgroup_classes_in};
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("the fixed point could not be reduced into the domain within {bound} letters")]
    ReductionFailure { bound: usize },
    #[error("the listed elements are not closed under composition")]
    NotClosed,
    #[error("the averaged point is zero or has the wrong size")]
    DegeneratePoint,
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyReduction {
    /// `x = Σ g y`, fixed by every element.
    #[serde(with = "num::json_rat_vec")]
    pub fixed_point: RatVec,
    /// `h` with `h x` in the domain.
    pub conjugator: IntMatrix,
    #[serde(with = "num::json_rat_vec")]
    pub reduced_point: RatVec,
    /// `h g h⁻¹` for every listed element, as dagger matrices.
    pub conjugated: Vec<IntMatrix>,
    /// `φΣ ∩ Σ ≠ 0` for each conjugated element.
    pub meets_domain: Vec<bool>,
    pub all_in_s: bool,
}

/// Conjugates a finite group so that it fixes a point of the domain.
pub fn prop_key_reduction(
    group: &[KleinIsometry],
    cert: &DomainCertificate,
    y: &[num::Rat],
    max_steps: usize,
) -> Result<KeyReduction, ReductionError> {
    let daggers: Vec<IntMatrix> = group.iter().map(KleinIsometry::dagger_matrix).collect();
    let members: HashSet<&IntMatrix> = daggers.iter().collect();
    if daggers.iter().any(|a| daggers.iter().any(|b| !members.contains(&a.mul(b)))) {
        return Err(ReductionError::NotClosed);
    }
    let dim = cert.xi.len();
    if y.len() != dim {
        return Err(ReductionError::DegeneratePoint);
    }
    let mut x = vec![num::Rat::zero(); dim];
    for g in &daggers {
        for (a, b) in x.iter_mut().zip(g.to_rat().mul_vec(y)) {
            *a += b;
        }
    }
    if num::is_zero_vec(&x) {
        return Err(ReductionError::DegeneratePoint);
    }
    let r = cert.reduce(&x, max_steps).ok_or(ReductionError::ReductionFailure { bound: max_steps })?;
    let hinv = r.element.inverse_unimodular().expect("group elements are unimodular");
    let conjugated: Vec<IntMatrix> = daggers.iter().map(|g| r.element.mul(g).mul(&hinv)).collect();
    let meets_domain = conjugated
        .iter()
        .map(|phi| Ok(!cert.domain.transform(phi).intersect(&cert.domain)?.is_zero()))
        .collect::<Result<Vec<bool>, ConeError>>()?;
    let all_in_s = meets_domain.iter().all(|&b| b);
    Ok(KeyReduction {
        fixed_point: x,
        conjugator: r.element,
        reduced_point: r.point,
        conjugated,
        meets_domain,
        all_in_s,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeSubgroupClasses {
    /// Elements `φ` up to the word bound with `φΣ ∩ Σ ≠ 0`.
    pub s_elements: Vec<IntMatrix>,
    /// Sorted elements of each class representative, all inside `S`.
    pub representatives: Vec<Vec<IntMatrix>>,
    pub subgroups_found: usize,
    pub completeness: Completeness,
}

/// Conjugacy classes of finite subgroups of `group`, every one of which has
/// a conjugate inside `S`.
pub fn classify_finite_subgroups_on_cone(
    group: &GeneratedGroup,
    cert: &DomainCertificate,
) -> Result<ConeSubgroupClasses, ReductionError> {
    let siegel = siegel_intersections(&cert.cone, &cert.domain, &cert.domain, group)?;
    let dim = cert.xi.len();
    let s: HashSet<IntMatrix> = siegel.elements.iter().cloned().collect();
    let depth = siegel.word_bound;
    let ball = group.ball(dim, depth);
    let classes = finite_subgroup_classes_in(&ball, dim, depth, |m| s.contains(m));
    let mut s_elements = siegel.elements;
    s_elements.sort();
    Ok(ConeSubgroupClasses {
        s_elements,
        representatives: classes.representatives,
        subgroups_found: classes.subgroups_found,
        completeness: Completeness::BoundedSearch { depth },
    })
}

/// Classes from the cohomology of `Z^r ⋊ Q`, realised as matrix subgroups by
/// sending the kernel basis to `translations` and `Q` to `lifts`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCrossCheck {
    pub cone_classes: Vec<Vec<IntMatrix>>,
    pub cohomology_classes: Vec<Vec<IntMatrix>>,
    /// For each cone class, the index of the conjugate cohomology class.
    pub matching: Vec<Option<usize>>,
    pub agree: bool,
}

/// Image in the matrix group of `(k, q) ∈ Z^r ⋊ Q`.
fn realise(translations: &[IntMatrix], lifts: &[IntMatrix], k: &[num::Int], q: usize) -> IntMatrix {
    let dim = lifts[0].nrows();
    let mut m = IntMatrix::identity(dim);
    for (t, e) in translations.iter().zip(k) {
        let e: i64 = e.try_into().expect("small exponent");
        let base = if e < 0 { t.inverse_unimodular().expect("unimodular") } else { t.clone() };
        m = m.mul(&base.pow(e.unsigned_abs()));
    }
    m.mul(&lifts[q])
}

pub fn cross_check_classes(
    data: &SemidirectAbelian,
    translations: &[IntMatrix],
    lifts: &[IntMatrix],
    group: &GeneratedGroup,
    cert: &DomainCertificate,
) -> Result<ClassCrossCheck, ReductionError> {
    let cone = classify_finite_subgroups_on_cone(group, cert)?;
    let report = filtration_semidirect(data)?;
    let Representatives::Semidirect(cocycles) = report.representatives else {
        unreachable!("semidirect filtration returns semidirect cocycles");
    };
    let dim = cert.xi.len();
    let cohomology_classes: Vec<Vec<IntMatrix>> = cocycles
        .iter()
        .map(|c| {
            let mut h: Vec<IntMatrix> = (0..c.quotient_part.len())
                .map(|g| realise(translations, lifts, &c.kernel_part[g], c.quotient_part[g]))
                .collect();
            h.sort();
            h.dedup();
            h
        })
        .collect();
    let ball = group.ball(dim, group.word_bound);
    let matching: Vec<Option<usize>> = cone
        .representatives
        .iter()
        .map(|a| cohomology_classes.iter().position(|b| conjugating_element(&ball, a, b).is_some()))
        .collect();
    let hit: HashSet<usize> = matching.iter().flatten().copied().collect();
    let agree = cone.representatives.len() == cohomology_classes.len()
        && matching.iter().all(Option::is_some)
        && hit.len() == cohomology_classes.len();
    Ok(ClassCrossCheck { cone_classes: cone.representatives, cohomology_classes, matching, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{dirichlet_domain, PositiveCone};
    use crate::filtration::infinite_dihedral_example;
    use crate::lattice::IntegerLattice;
    use crate::num::rat_vec;

    fn pell() -> (IntMatrix, IntMatrix, DomainCertificate) {
        let m = IntMatrix::from_i64(&[&[3, 4], &[2, 3]]);
        let r = IntMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        let c = PositiveCone::new(IntegerLattice::diagonal(&[2, -4]), rat_vec(&[1, 0])).unwrap();
        let cert = dirichlet_domain(&GeneratedGroup::holomorphic(vec![m.clone()], 20), &c, &rat_vec(&[1, 0])).unwrap();
        (m, r, cert)
    }

    #[test]
    fn key_reduction() {
        let (m, r, cert) = pell();
        let id = KleinIsometry::identity(2);
        let k = prop_key_reduction(std::slice::from_ref(&id), &cert, &rat_vec(&[7, 3]), 20).unwrap();
        assert!(k.all_in_s);
        let refl = vec![id.clone(), KleinIsometry::holomorphic(r.clone())];
        let k = prop_key_reduction(&refl, &cert, &rat_vec(&[5, 2]), 20).unwrap();
        assert!(k.all_in_s);
        assert!(k.conjugated.contains(&r));
        let other = vec![id, KleinIsometry::holomorphic(m.mul(&r))];
        let k2 = prop_key_reduction(&other, &cert, &rat_vec(&[5, 2]), 20).unwrap();
        assert!(k2.all_in_s);
        assert!(!k2.conjugated.contains(&r));
        let far = vec![KleinIsometry::identity(2), KleinIsometry::holomorphic(m.pow(6).mul(&r))];
        assert!(prop_key_reduction(&far, &cert, &rat_vec(&[5, 2]), 40).unwrap().all_in_s);
        let bad = vec![KleinIsometry::holomorphic(m.clone())];
        assert_eq!(prop_key_reduction(&bad, &cert, &rat_vec(&[5, 2]), 20), Err(ReductionError::NotClosed));
    }

    #[test]
    fn dihedral_classes_agree() {
        let (m, r, cert) = pell();
        let dihedral = GeneratedGroup::holomorphic(vec![m.clone(), r.clone()], 20);
        let classes = classify_finite_subgroups_on_cone(&dihedral, &cert).unwrap();
        assert_eq!(classes.representatives.len(), 3);
        assert_eq!(classes.s_elements.len(), 6);
        let check =
            cross_check_classes(&infinite_dihedral_example(), std::slice::from_ref(&m), &[IntMatrix::identity(2), r], &dihedral, &cert)
                .unwrap();
        assert!(check.agree, "{check:?}");
        let cyclic = GeneratedGroup::holomorphic(vec![m], 20);
        assert_eq!(classify_finite_subgroups_on_cone(&cyclic, &cert).unwrap().representatives.len(), 1);
    }
}
