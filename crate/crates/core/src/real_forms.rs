//! Anti-involutions of a finite Klein group up to conjugation by its
//! holomorphic part, counted directly and through H¹.

use crate::cohomology::{h1_finite, inner_twist_bijection, involution_action, CohomologyError, GGroup};
use crate::group::{is_homomorphism, FiniteGroup};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealFormError {
    #[error("sign character is not a surjective homomorphism onto ±1")]
    BadCharacter,
    #[error("chosen element is not an anti-holomorphic involution")]
    NoAntiInvolution,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// A finite group `K` with a surjective character `ε: K → {±1}`, given as
/// `holomorphic[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KleinGroup {
    pub group: FiniteGroup,
    pub holomorphic: Vec<bool>,
}

impl KleinGroup {
    pub fn new(group: FiniteGroup, holomorphic: Vec<bool>) -> Result<Self, RealFormError> {
        let as_map: Vec<usize> = holomorphic.iter().map(|&h| usize::from(!h)).collect();
        if holomorphic.len() != group.order()
            || !is_homomorphism(&group, &FiniteGroup::cyclic(2), &as_map)
            || holomorphic.iter().all(|&h| h)
        {
            return Err(RealFormError::BadCharacter);
        }
        Ok(KleinGroup { group, holomorphic })
    }

    /// Elements of `A = ker ε`, sorted.
    pub fn holomorphic_part(&self) -> Vec<usize> {
        self.group.elements().filter(|&k| self.holomorphic[k]).collect()
    }

    pub fn anti_involutions(&self) -> Vec<usize> {
        self.group
            .elements()
            .filter(|&k| !self.holomorphic[k] && self.group.mul(k, k) == 0)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealStructureReport {
    /// Smallest member of each `A`-conjugacy class of anti-involutions.
    pub classes: Vec<usize>,
    /// Class reached by `φ ↦ φ(σ)·σ` for each class of `H¹(Z/2, A)`.
    pub via_h1: Vec<usize>,
    /// Number of `K`-conjugacy classes of anti-involutions, read off
    /// `H¹(Z/2, K_triv)` through the inner twist of `K` by `σ`.
    pub via_inner_twist: usize,
    pub h1_matches: bool,
    /// `K`-conjugate anti-involutions are already `A`-conjugate.
    pub conjugacy_descends: bool,
}

impl RealStructureReport {
    pub fn agree(&self) -> bool {
        self.h1_matches && self.conjugacy_descends && self.via_inner_twist == self.classes.len()
    }
}

fn class_rep(k: &FiniteGroup, by: &[usize], x: usize) -> usize {
    by.iter().map(|&a| k.conj(a, x)).min().expect("nonempty conjugating set")
}

pub fn real_structure_classifier(kg: &KleinGroup, sigma: usize) -> Result<RealStructureReport, RealFormError> {
    let k = &kg.group;
    if sigma >= k.order() || kg.holomorphic[sigma] || k.mul(sigma, sigma) != 0 {
        return Err(RealFormError::NoAntiInvolution);
    }
    let a = kg.holomorphic_part();
    let all: Vec<usize> = k.elements().collect();
    let anti = kg.anti_involutions();
    let classes: BTreeSet<usize> = anti.iter().map(|&x| class_rep(k, &a, x)).collect();
    let classes: Vec<usize> = classes.into_iter().collect();

    let action = involution_action(k, &a, sigma)?;
    let h1 = h1_finite(&action);
    let (_, embed) = k.subgroup_as_group(&a);
    let via_h1: Vec<usize> = h1
        .representatives
        .iter()
        .map(|phi| class_rep(k, &a, k.mul(embed[phi[1]], sigma)))
        .collect();
    let h1_matches = via_h1.iter().copied().collect::<BTreeSet<_>>() == classes.iter().copied().collect()
        && via_h1.len() == classes.len();

    let on_k = involution_action(k, &all, sigma)?;
    let twist = inner_twist_bijection(&on_k)?;
    let trivial = GGroup::trivial_action(FiniteGroup::cyclic(2), k.clone());
    let h_triv = h1_finite(&trivial);
    debug_assert_eq!(twist.trivial_size, h_triv.len());
    let via_inner_twist = h_triv
        .representatives
        .iter()
        .filter(|phi| !kg.holomorphic[phi[1]])
        .count();

    let k_classes: BTreeSet<usize> = anti.iter().map(|&x| class_rep(k, &all, x)).collect();
    let conjugacy_descends = k_classes.len() == classes.len();

    Ok(RealStructureReport { classes, via_h1, via_inner_twist, h1_matches: h1_matches && twist.bijective, conjugacy_descends })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_four() {
        let k = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        // (a, b) has index 2a + b; ε is the second coordinate
        let kg = KleinGroup::new(k, vec![true, false, true, false]).unwrap();
        let r = real_structure_classifier(&kg, 1).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert!(r.agree());
        assert_eq!(real_structure_classifier(&kg, 2), Err(RealFormError::NoAntiInvolution));
    }

    #[test]
    fn dihedral_and_cyclic() {
        let d4 = FiniteGroup::dihedral(4);
        let kg = KleinGroup::new(d4.clone(), d4.elements().map(|x| x < 4).collect()).unwrap();
        let r = real_structure_classifier(&kg, 4).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert!(r.agree());
        let z2 = KleinGroup::new(FiniteGroup::cyclic(2), vec![true, false]).unwrap();
        let r = real_structure_classifier(&z2, 1).unwrap();
        assert_eq!(r.classes, vec![1]);
        assert!(r.agree());
        assert!(KleinGroup::new(FiniteGroup::cyclic(3), vec![true, false, false]).is_err());
    }
}
