//! The real structure induced on the Hilbert scheme of points: the lattice
//! `L ⊕ Zδ` with `δ² = −2(n−1)` and the operator `σ* ⊕ (−id)`.

use crate::cone::PolyhedralCone;
use crate::hodge::{
    anti_invariant_class, kaut_star_criterion, mon2_khdg_member, torelli_anti_check, HodgeError, HodgeLattice,
    InvariantClass, KahlerModel, KautVerdict, Monodromy, TorelliVerdict,
};
use crate::isometry::{is_isometry, KleinIsometry, Sign};
use crate::lattice::IntegerLattice;
use crate::matrix::IntMatrix;
use crate::num::{Int, IntVec, Rat};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub n: usize,
    pub involution: bool,
    pub isometry: bool,
    pub anti_hodge: bool,
    /// The operator acts on the discriminant group as `−id`.
    pub discriminant_minus_id: bool,
    /// `φ† = −φ` lies in `Mon²_KHdg` for discriminant scalars `{−1}`.
    pub monodromy: bool,
    /// Present when a Kähler model of the surface was supplied.
    pub kahler: Option<HilbertKahlerReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertKahlerReport {
    pub model: KahlerModel,
    pub invariant_class: InvariantClass,
    /// `φ(c) = −c` for the plain pull-back.
    pub class_anti_invariant: bool,
    pub torelli: TorelliVerdict,
    pub criterion: KautVerdict,
}

impl HilbertReport {
    pub fn passes(&self) -> bool {
        self.involution
            && self.isometry
            && self.anti_hodge
            && self.discriminant_minus_id
            && self.monodromy
            && self.kahler.as_ref().is_none_or(|k| {
                k.class_anti_invariant
                    && k.torelli.holds == Some(true)
                    && matches!(k.criterion, KautVerdict::KleinRealizable { sign: Sign::Minus })
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertExtension {
    pub hodge: HodgeLattice,
    pub operator: KleinIsometry,
    pub report: HilbertReport,
}

pub fn hilbert_monodromy() -> Monodromy {
    Monodromy::DiscriminantCriterion { allowed_scalars: vec![-1], orientation_preserving: true }
}

/// Kähler model on `NS(S) ⊕ Zδ` from one on the surface: the rays
/// `(r, 0)` together with `(m·w, −1)` where `w` is the sum of the rays and `m`
/// the least integer with `m² q(w) ≥ 2(n−1)`.
pub fn hilbert_kahler_model(
    surface: &IntegerLattice,
    k: &KahlerModel,
    n: usize,
) -> Result<KahlerModel, HodgeError> {
    let w = k.cone.interior_point();
    let qw = surface.norm(&k.ambient(&w));
    if !qw.is_positive() {
        return Err(HodgeError::InvalidKahlerModel("sum of rays is not a positive class".into()));
    }
    let need = Int::from(2 * (n - 1));
    let mut m = Int::one();
    while &m * &m * &qw < need {
        m += 1;
    }
    let mut rays: Vec<IntVec> = k
        .cone
        .rays()
        .iter()
        .map(|r| {
            let mut v = r.clone();
            v.push(Int::zero());
            v
        })
        .collect();
    let mut last: IntVec = w.iter().map(|c| c * &m).collect();
    last.push(-Int::one());
    rays.push(last);
    let cone = PolyhedralCone::from_rays(k.rank() + 1, &rays)?;
    let mut embedding: Vec<IntVec> = k
        .embedding
        .iter()
        .map(|v| {
            let mut e = v.clone();
            e.push(Int::zero());
            e
        })
        .collect();
    let mut delta = vec![Int::zero(); surface.rank() + 1];
    delta[surface.rank()] = Int::one();
    embedding.push(delta);
    let extended = surface.direct_sum(&IntegerLattice::diagonal(&[-2 * (n as i64 - 1)]));
    KahlerModel::new(&extended, cone, embedding)
}

pub fn hilbert_square_extension(
    h: &HodgeLattice,
    n: usize,
    sigma_star: &IntMatrix,
    kahler: Option<&KahlerModel>,
) -> Result<HilbertExtension, HodgeError> {
    if n < 2 {
        return Err(HodgeError::InvalidInput("n must be at least 2".into()));
    }
    let l = h.lattice();
    if sigma_star.nrows() != l.rank() || !sigma_star.is_square() {
        return Err(HodgeError::DimensionMismatch { expected: l.rank(), found: sigma_star.nrows() });
    }
    if !is_isometry(l, sigma_star)? || !sigma_star.mul(sigma_star).is_identity() || !h.is_anti_hodge(sigma_star)? {
        return Err(HodgeError::InvalidInput("σ* is not an anti-Hodge involutive isometry".into()));
    }
    let extended = l.direct_sum(&IntegerLattice::diagonal(&[-2 * (n as i64 - 1)]));
    let pad = |v: &[Rat]| {
        let mut w = v.to_vec();
        w.push(Rat::zero());
        w
    };
    let hodge = HodgeLattice::new(extended.clone(), pad(h.period_re()), pad(h.period_im()))?;
    let phi = sigma_star.direct_sum(&IntMatrix::identity(1).neg());
    let operator = KleinIsometry::new(phi.clone(), Sign::Minus);
    let dagger = operator.dagger_matrix();

    let involution = phi.mul(&phi).is_identity();
    let isometry = is_isometry(&extended, &phi)?;
    let anti_hodge = hodge.is_anti_hodge(&phi)?;
    let discriminant_minus_id = extended.discriminant_group()?.acts_as_scalar(&extended, &phi, -1);
    let mon = hilbert_monodromy();
    let monodromy = mon2_khdg_member(&dagger, &hodge, &mon)?;

    let kahler = match kahler {
        None => None,
        Some(k) => {
            k.check_against(h)?;
            let model = hilbert_kahler_model(l, k, n)?;
            let invariant_class = anti_invariant_class(&model, &operator)?;
            let class_anti_invariant = {
                let image = phi.to_rat().mul_vec(&invariant_class.ambient);
                image.iter().zip(&invariant_class.ambient).all(|(a, b)| *a == -b.clone())
            };
            let torelli = torelli_anti_check(&phi, &hodge, &hodge, &model, &model, &mon)?;
            let criterion = kaut_star_criterion(&dagger, &hodge, &model, &mon)?;
            Some(HilbertKahlerReport { model, invariant_class, class_anti_invariant, torelli, criterion })
        }
    };
    let report = HilbertReport { n, involution, isometry, anti_hodge, discriminant_minus_id, monodromy, kahler };
    Ok(HilbertExtension { hodge, operator, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int_vec, rat_vec};

    fn toy() -> (HodgeLattice, KahlerModel) {
        let l = IntegerLattice::diagonal(&[2, 2, 2, -2]);
        let h = HodgeLattice::new(l.clone(), rat_vec(&[1, 0, 0, 0]), rat_vec(&[0, 1, 0, 0])).unwrap();
        let cone = PolyhedralCone::from_rays(2, &[int_vec(&[1, 0]), int_vec(&[1, 1])]).unwrap();
        let k = KahlerModel::new(&l, cone, vec![int_vec(&[0, 0, 1, 0]), int_vec(&[0, 0, 0, 1])]).unwrap();
        (h, k)
    }

    #[test]
    fn toy_extension_passes() {
        let (h, k) = toy();
        let sigma = IntMatrix::diagonal(&int_vec(&[1, -1, -1, -1]));
        for n in 2..=6 {
            let ext = hilbert_square_extension(&h, n, &sigma, Some(&k)).unwrap();
            assert!(ext.report.passes(), "n = {n}: {:?}", ext.report);
            assert_eq!(*ext.hodge.lattice().gram().get(4, 4), Int::from(-2 * (n as i64 - 1)));
        }
    }

    #[test]
    fn rejects_holomorphic_input() {
        let (h, _) = toy();
        let r = hilbert_square_extension(&h, 2, &IntMatrix::identity(4), None);
        assert!(matches!(r, Err(HodgeError::InvalidInput(_))));
        assert!(hilbert_square_extension(&h, 1, &IntMatrix::identity(4), None).is_err());
    }
}
