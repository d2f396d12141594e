//! Marked Hodge lattices with rational periods and the lattice-side
//! criteria for holomorphic and anti-holomorphic maps.

use crate::cone::{ConeError, PolyhedralCone};
use crate::isometry::{is_isometry, IsometryError, KleinIsometry, Sign, WordBall};
use crate::lattice::{IntegerLattice, LatticeError, LatticeType, Sublattice, SublatticeIndex};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::num::{self, Int, IntVec, Rat, RatVec};
use crate::smith::integer_kernel;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HodgeError {
    #[error("invalid period: {0}")]
    InvalidPeriod(String),
    #[error("expected a vector or matrix of size {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("map is not an isometry")]
    NotAnIsometry,
    #[error("invalid Kähler model: {0}")]
    InvalidKahlerModel(String),
    #[error("the map does not preserve the cone")]
    NotPreserved,
    #[error("no invariant interior point found")]
    NoInvariantInteriorPoint,
    #[error("monodromy membership undecided within word bound {bound}")]
    Undecidable { bound: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
}

/// A lattice with the period `σ = x + iy`, where `q(x) = q(y) > 0` and
/// `<x, y> = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HodgeLatticeJson")]
pub struct HodgeLattice {
    lattice: IntegerLattice,
    #[serde(with = "num::json_rat_vec")]
    period_re: RatVec,
    #[serde(with = "num::json_rat_vec")]
    period_im: RatVec,
}

#[derive(Deserialize)]
struct HodgeLatticeJson {
    lattice: IntegerLattice,
    #[serde(with = "num::json_rat_vec")]
    period_re: RatVec,
    #[serde(with = "num::json_rat_vec")]
    period_im: RatVec,
}

impl TryFrom<HodgeLatticeJson> for HodgeLattice {
    type Error = HodgeError;

    fn try_from(j: HodgeLatticeJson) -> Result<Self, HodgeError> {
        HodgeLattice::new(j.lattice, j.period_re, j.period_im)
    }
}

/// How `φ` moves the period line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HodgeType {
    /// `φx = a x − b y`, `φy = b x + a y`, so `φσ = (a + ib) σ`.
    Hodge {
        #[serde(with = "num::json_rat")]
        a: Rat,
        #[serde(with = "num::json_rat")]
        b: Rat,
    },
    /// `φx = a x + b y`, `φy = b x − a y`, so `φσ = (a + ib) σ̄`.
    AntiHodge {
        #[serde(with = "num::json_rat")]
        a: Rat,
        #[serde(with = "num::json_rat")]
        b: Rat,
    },
    Neither,
}

impl HodgeLattice {
    pub fn new(lattice: IntegerLattice, period_re: RatVec, period_im: RatVec) -> Result<Self, HodgeError> {
        let n = lattice.rank();
        for v in [&period_re, &period_im] {
            if v.len() != n {
                return Err(HodgeError::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        let qx = lattice.norm_rat(&period_re);
        if qx != lattice.norm_rat(&period_im) {
            return Err(HodgeError::InvalidPeriod("q(x) differs from q(y)".into()));
        }
        if !lattice.pairing_rat(&period_re, &period_im).is_zero() {
            return Err(HodgeError::InvalidPeriod("x and y are not orthogonal".into()));
        }
        if !qx.is_positive() {
            return Err(HodgeError::InvalidPeriod("q(x) is not positive".into()));
        }
        Ok(HodgeLattice { lattice, period_re, period_im })
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn period_re(&self) -> &[Rat] {
        &self.period_re
    }

    pub fn period_im(&self) -> &[Rat] {
        &self.period_im
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    fn period_functionals(&self) -> Vec<IntVec> {
        let g = self.lattice.gram().to_rat();
        [&self.period_re, &self.period_im]
            .iter()
            .map(|v| num::clear_denominators(&g.mul_vec(v)))
            .collect()
    }

    /// `{v : <v, x> = <v, y> = 0}`.
    pub fn neron_severi(&self) -> Sublattice {
        let basis = integer_kernel(&IntMatrix::from_rows(&self.period_functionals()));
        Sublattice::new(self.rank(), basis).expect("kernel basis")
    }

    pub fn transcendental(&self) -> Sublattice {
        self.lattice.orthogonal_complement(&self.neron_severi())
    }

    /// Index of `NS ⊕ T` in the lattice when NS is nondegenerate.
    pub fn ns_t_index(&self) -> Option<Int> {
        let ns = self.neron_severi();
        if ns.rank() > 0 && !ns.restricted_lattice(&self.lattice).is_nondegenerate() {
            return None;
        }
        let mut basis = ns.basis().to_vec();
        basis.extend(self.transcendental().basis().iter().cloned());
        match self.lattice.sublattice_index(&Sublattice::new(self.rank(), basis).ok()?) {
            SublatticeIndex::Finite(i) => Some(i),
            SublatticeIndex::Infinite => None,
        }
    }

    pub fn ns_type(&self) -> LatticeType {
        let ns = self.neron_severi();
        if ns.rank() == 0 {
            return LatticeType::Elliptic;
        }
        ns.restricted_lattice(&self.lattice).classify_type()
    }

    pub fn is_projective_type(&self) -> bool {
        self.ns_type() == LatticeType::Hyperbolic
    }

    pub fn hodge_type(&self, phi: &IntMatrix) -> Result<HodgeType, HodgeError> {
        hodge_type_between(phi, self, self)
    }

    pub fn is_hodge_isometry(&self, phi: &IntMatrix) -> Result<bool, HodgeError> {
        Ok(matches!(self.hodge_type(phi)?, HodgeType::Hodge { .. }))
    }

    pub fn is_anti_hodge(&self, phi: &IntMatrix) -> Result<bool, HodgeError> {
        Ok(matches!(self.hodge_type(phi)?, HodgeType::AntiHodge { .. }))
    }

    /// Rows are a basis of a maximal positive definite subspace.
    pub fn positive_frame(&self) -> Vec<RatVec> {
        positive_frame(&self.lattice)
    }
}

/// Type of `φ: source → target` with respect to the two periods.
pub fn hodge_type_between(phi: &IntMatrix, source: &HodgeLattice, target: &HodgeLattice) -> Result<HodgeType, HodgeError> {
    let (n, m) = (target.rank(), source.rank());
    if phi.nrows() != n || phi.ncols() != m {
        return Err(HodgeError::DimensionMismatch { expected: n, found: phi.nrows() });
    }
    let frame = RatMatrix::from_cols(n, &[target.period_re.clone(), target.period_im.clone()]);
    let pr = phi.to_rat();
    let Some(c) = frame.solve(&pr.mul_vec(&source.period_re)) else {
        return Ok(HodgeType::Neither);
    };
    let Some(d) = frame.solve(&pr.mul_vec(&source.period_im)) else {
        return Ok(HodgeType::Neither);
    };
    // φx = c0 x + c1 y, φy = d0 x + d1 y
    if d[0] == -c[1].clone() && d[1] == c[0] {
        return Ok(HodgeType::Hodge { a: c[0].clone(), b: -c[1].clone() });
    }
    if d[0] == c[1] && d[1] == -c[0].clone() {
        return Ok(HodgeType::AntiHodge { a: c[0].clone(), b: c[1].clone() });
    }
    Ok(HodgeType::Neither)
}

/// Orthogonal basis vectors of positive norm spanning a maximal positive
/// definite subspace, by symmetric elimination over the rationals.
pub fn positive_frame(l: &IntegerLattice) -> Vec<RatVec> {
    let n = l.rank();
    let mut work: Vec<RatVec> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::from_integer(1.into()) } else { Rat::zero() }).collect())
        .collect();
    let mut out = Vec::new();
    while !work.is_empty() {
        let pivot = match work.iter().position(|v| !l.norm_rat(v).is_zero()) {
            Some(p) => p,
            None => {
                let pair = (0..work.len())
                    .flat_map(|i| (i + 1..work.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| !l.pairing_rat(&work[i], &work[j]).is_zero());
                let Some((i, j)) = pair else { break };
                let sum: RatVec = work[i].iter().zip(&work[j]).map(|(a, b)| a + b).collect();
                work[i] = sum;
                i
            }
        };
        let p = work.swap_remove(pivot);
        let qp = l.norm_rat(&p);
        for v in work.iter_mut() {
            let c = l.pairing_rat(v, &p) / &qp;
            for (a, b) in v.iter_mut().zip(&p) {
                *a -= &c * b;
            }
        }
        if qp.is_positive() {
            out.push(p);
        }
    }
    out
}

/// `+1` if `m` preserves the orientation of maximal positive definite
/// subspaces, `-1` if it reverses it.
pub fn orientation_character(l: &IntegerLattice, m: &IntMatrix) -> i64 {
    let frame = positive_frame(l);
    let mr = m.to_rat();
    let images: Vec<RatVec> = frame.iter().map(|p| mr.mul_vec(p)).collect();
    let k = frame.len();
    let pairing = RatMatrix::from_fn(k, k, |i, j| l.pairing_rat(&frame[i], &images[j]));
    if pairing.det().is_positive() {
        1
    } else {
        -1
    }
}

/// Declared description of `Mon²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Monodromy {
    /// Orientation-preserving isometries.
    FullOrthogonalPlus,
    /// Isometries acting on the discriminant group as one of the allowed
    /// scalars, orientation-preserving when required.
    DiscriminantCriterion {
        allowed_scalars: Vec<i64>,
        #[serde(default = "default_true")]
        orientation_preserving: bool,
    },
    /// The group generated by these isometries, searched up to a word bound.
    ExplicitGenerators { generators: Vec<IntMatrix>, word_bound: usize },
}

fn default_true() -> bool {
    true
}

impl Monodromy {
    pub fn contains(&self, l: &IntegerLattice, phi: &IntMatrix) -> Result<bool, HodgeError> {
        if !is_isometry(l, phi)? {
            return Ok(false);
        }
        match self {
            Monodromy::FullOrthogonalPlus => Ok(orientation_character(l, phi) == 1),
            Monodromy::DiscriminantCriterion { allowed_scalars, orientation_preserving } => {
                if *orientation_preserving && orientation_character(l, phi) != 1 {
                    return Ok(false);
                }
                let disc = l.discriminant_group()?;
                Ok(allowed_scalars.iter().any(|&s| disc.acts_as_scalar(l, phi, s)))
            }
            Monodromy::ExplicitGenerators { generators, word_bound } => {
                for g in generators {
                    if !is_isometry(l, g)? {
                        return Err(HodgeError::InvalidInput("monodromy generator is not an isometry".into()));
                    }
                }
                if WordBall::new(l.rank(), generators, *word_bound).contains(phi) {
                    Ok(true)
                } else {
                    Err(HodgeError::Undecidable { bound: *word_bound })
                }
            }
        }
    }
}

/// `φ ∈ Mon²_Hdg`, or `φ` anti-Hodge with `−φ ∈ Mon²`.
pub fn mon2_khdg_member(phi: &IntMatrix, h: &HodgeLattice, mon: &Monodromy) -> Result<bool, HodgeError> {
    if !is_isometry(h.lattice(), phi)? {
        return Err(HodgeError::NotAnIsometry);
    }
    match h.hodge_type(phi)? {
        HodgeType::Hodge { .. } => mon.contains(h.lattice(), phi),
        HodgeType::AntiHodge { .. } => mon.contains(h.lattice(), &phi.neg()),
        HodgeType::Neither => Ok(false),
    }
}

/// Polyhedral model of a Kähler (or movable) cone inside `NS ⊗ R`:
/// `cone` lives in the coordinates of `embedding`, a basis of NS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KahlerModel {
    pub cone: PolyhedralCone,
    #[serde(with = "num::json_int_rows")]
    pub embedding: Vec<IntVec>,
}

impl KahlerModel {
    pub fn new(l: &IntegerLattice, cone: PolyhedralCone, embedding: Vec<IntVec>) -> Result<Self, HodgeError> {
        let bad = |m: &str| Err(HodgeError::InvalidKahlerModel(m.to_string()));
        if embedding.iter().any(|v| v.len() != l.rank()) {
            return bad("embedding vectors have the wrong length");
        }
        if cone.dim() != embedding.len() {
            return bad("cone dimension differs from the embedding rank");
        }
        if Sublattice::new(l.rank(), embedding.clone()).is_err() {
            return bad("embedding vectors are dependent");
        }
        if !cone.is_full_dimensional() {
            return bad("cone is not full-dimensional");
        }
        let model = KahlerModel { cone, embedding };
        if model.cone.rays().iter().any(|r| l.norm(&model.ambient(r)).is_negative()) {
            return bad("a ray has negative square");
        }
        Ok(model)
    }

    /// Model whose embedding is the Néron–Severi basis of `h`.
    pub fn on_neron_severi(h: &HodgeLattice, cone: PolyhedralCone) -> Result<Self, HodgeError> {
        Self::new(h.lattice(), cone, h.neron_severi().basis().to_vec())
    }

    pub fn check_against(&self, h: &HodgeLattice) -> Result<(), HodgeError> {
        let ns = h.neron_severi();
        if self.embedding.iter().all(|v| ns.spans_rationally(v)) {
            Ok(())
        } else {
            Err(HodgeError::InvalidKahlerModel("embedding leaves the Néron–Severi lattice".into()))
        }
    }

    pub fn rank(&self) -> usize {
        self.embedding.len()
    }

    fn embedding_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(self.embedding.first().map_or(0, Vec::len), &self.embedding)
    }

    pub fn ambient(&self, coords: &[Int]) -> IntVec {
        self.embedding_matrix().mul_vec(coords)
    }

    pub fn ambient_rat(&self, coords: &[Rat]) -> RatVec {
        self.embedding_matrix().to_rat().mul_vec(coords)
    }

    /// Coordinates of an ambient vector lying in the span of the embedding.
    pub fn coordinates(&self, v: &[Rat]) -> Option<RatVec> {
        let e = self.embedding_matrix().to_rat();
        let c = e.solve(v)?;
        (e.mul_vec(&c) == v).then_some(c)
    }

    /// `φ(K)` in the coordinates of `target`, when `φ` maps the span into
    /// the span of the target embedding.
    pub fn image_in(&self, phi: &IntMatrix, target: &KahlerModel) -> Option<PolyhedralCone> {
        let rays: Option<Vec<IntVec>> = self
            .cone
            .rays()
            .iter()
            .map(|r| {
                let img = num::to_rat_vec(&phi.mul_vec(&self.ambient(r)));
                target.coordinates(&img).map(|c| num::clear_denominators(&c))
            })
            .collect();
        PolyhedralCone::from_rays(target.rank(), &rays?).ok()
    }

    /// Matrix of `φ` in the coordinates of this model, if it preserves the span.
    pub fn restrict(&self, phi: &IntMatrix) -> Option<RatMatrix> {
        let cols: Option<Vec<RatVec>> = self
            .embedding
            .iter()
            .map(|v| self.coordinates(&num::to_rat_vec(&phi.mul_vec(v))))
            .collect();
        Some(RatMatrix::from_cols(self.rank(), &cols?))
    }
}

/// The four lattice conditions for an anti-holomorphic isomorphism `X → Y`
/// with pull-back `φ: H²(Y) → H²(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorelliVerdict {
    /// `None` when the monodromy search was inconclusive.
    pub parallel_transport: Option<bool>,
    pub isometry: bool,
    pub anti_hodge: bool,
    /// `φ(K_Y) ∩ (−K_X) ≠ ∅`.
    pub kahler_condition: bool,
    pub holds: Option<bool>,
}

pub fn torelli_anti_check(
    phi: &IntMatrix,
    source: &HodgeLattice,
    target: &HodgeLattice,
    k_source: &KahlerModel,
    k_target: &KahlerModel,
    mon: &Monodromy,
) -> Result<TorelliVerdict, HodgeError> {
    let (n, m) = (target.rank(), source.rank());
    if phi.nrows() != n || phi.ncols() != m {
        return Err(HodgeError::DimensionMismatch { expected: n, found: phi.nrows() });
    }
    let isometry = phi.is_square() && target.lattice().gram().congruence(phi) == *source.lattice().gram();
    let anti_hodge = matches!(hodge_type_between(phi, source, target)?, HodgeType::AntiHodge { .. });
    let parallel_transport = match mon.contains(target.lattice(), phi) {
        Ok(b) => Some(b),
        Err(HodgeError::Undecidable { .. }) => None,
        Err(e) => return Err(e),
    };
    let minus_target = k_target.cone.transform(&IntMatrix::identity(k_target.rank()).neg());
    let kahler_condition = match k_source.image_in(phi, k_target) {
        Some(img) => img.interiors_meet(&minus_target)?,
        None => false,
    };
    let definite = isometry && anti_hodge && kahler_condition;
    let holds = match parallel_transport {
        Some(p) => Some(p && definite),
        None if !definite => Some(false),
        None => None,
    };
    Ok(TorelliVerdict { parallel_transport, isometry, anti_hodge, kahler_condition, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KautVerdict {
    KleinRealizable { sign: Sign },
    NotRealizable { reason: String },
    Undecided { reason: String },
}

/// Whether the operator `φ` (dagger convention) is `f†` for a Klein
/// automorphism `f`: `φ ∈ Mon²_KHdg` and `φ(K) ∩ K ≠ ∅`.
pub fn kaut_star_criterion(
    phi: &IntMatrix,
    h: &HodgeLattice,
    k: &KahlerModel,
    mon: &Monodromy,
) -> Result<KautVerdict, HodgeError> {
    match mon2_khdg_member(phi, h, mon) {
        Err(HodgeError::Undecidable { bound }) => {
            return Ok(KautVerdict::Undecided { reason: format!("monodromy search exhausted at word bound {bound}") })
        }
        Err(e) => return Err(e),
        Ok(false) => return Ok(KautVerdict::NotRealizable { reason: "not in Mon²_KHdg".into() }),
        Ok(true) => {}
    }
    let meets = match k.image_in(phi, k) {
        Some(img) => img.interiors_meet(&k.cone)?,
        None => false,
    };
    if !meets {
        return Ok(KautVerdict::NotRealizable { reason: "no Kähler class is sent to a Kähler class".into() });
    }
    let sign = match h.hodge_type(phi)? {
        HodgeType::Hodge { .. } => Sign::Plus,
        _ => Sign::Minus,
    };
    Ok(KautVerdict::KleinRealizable { sign })
}

/// A class `c` in the interior of `K` with `φ†(c) = c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantClass {
    #[serde(with = "num::json_rat_vec")]
    pub coordinates: RatVec,
    #[serde(with = "num::json_rat_vec")]
    pub ambient: RatVec,
}

/// `c = ω + φ†ω` for an interior point `ω`; requires `φ†(K) = K`.
pub fn anti_invariant_class(k: &KahlerModel, phi: &KleinIsometry) -> Result<InvariantClass, HodgeError> {
    let d = phi.dagger_matrix();
    let image = k.image_in(&d, k).ok_or(HodgeError::NotPreserved)?;
    if image != k.cone {
        return Err(HodgeError::NotPreserved);
    }
    let dk = k.restrict(&d).ok_or(HodgeError::NotPreserved)?;
    let omega = num::to_rat_vec(&k.cone.interior_point());
    let moved = dk.mul_vec(&omega);
    let c: RatVec = omega.iter().zip(&moved).map(|(a, b)| a + b).collect();
    if !k.cone.relative_interior_contains(&c) || dk.mul_vec(&c) != c {
        return Err(HodgeError::NoInvariantInteriorPoint);
    }
    Ok(InvariantClass { ambient: k.ambient_rat(&c), coordinates: c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int_vec, rat_vec};

    fn toy() -> HodgeLattice {
        HodgeLattice::new(IntegerLattice::diagonal(&[2, 2, 2, -2]), rat_vec(&[1, 0, 0, 0]), rat_vec(&[0, 1, 0, 0])).unwrap()
    }

    #[test]
    fn periods_and_ns() {
        let h = toy();
        assert_eq!(h.neron_severi().rank(), 2);
        assert!(h.is_projective_type());
        assert_eq!(h.ns_t_index(), Some(Int::from(1)));
        assert!(HodgeLattice::new(IntegerLattice::diagonal(&[2, 2]), rat_vec(&[1, 0]), rat_vec(&[1, 1])).is_err());
        let small = HodgeLattice::new(IntegerLattice::diagonal(&[2, 2]), rat_vec(&[1, 0]), rat_vec(&[0, 1])).unwrap();
        assert_eq!(small.neron_severi().rank(), 0);
        assert_eq!(small.transcendental().rank(), 2);
        let neg = HodgeLattice::new(IntegerLattice::diagonal(&[2, 2, -2]), rat_vec(&[1, 0, 0]), rat_vec(&[0, 1, 0])).unwrap();
        assert!(!neg.is_projective_type());
        let par = IntegerLattice::from_i64(&[&[2, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -2]]).unwrap();
        let par = HodgeLattice::new(par, rat_vec(&[1, 0, 0, 0]), rat_vec(&[0, 1, 0, 0])).unwrap();
        assert_eq!(par.ns_type(), LatticeType::Parabolic);
    }

    #[test]
    fn hodge_types() {
        let h = toy();
        let id = IntMatrix::identity(4);
        assert_eq!(h.hodge_type(&id).unwrap(), HodgeType::Hodge { a: Rat::from_integer(1.into()), b: Rat::zero() });
        let conj = IntMatrix::diagonal(&int_vec(&[1, -1, -1, -1]));
        assert!(h.is_anti_hodge(&conj).unwrap());
        let rot = IntMatrix::from_i64(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(h.is_hodge_isometry(&rot).unwrap());
        let mix = IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(h.hodge_type(&mix).unwrap(), HodgeType::Neither);
    }

    #[test]
    fn orientation() {
        let l = IntegerLattice::diagonal(&[2, 2, 2, -2]);
        assert_eq!(orientation_character(&l, &IntMatrix::identity(4)), 1);
        assert_eq!(orientation_character(&l, &IntMatrix::identity(4).neg()), -1);
        assert_eq!(orientation_character(&l, &IntMatrix::diagonal(&int_vec(&[1, -1, -1, -1]))), 1);
        assert_eq!(orientation_character(&l, &IntMatrix::diagonal(&int_vec(&[1, 1, 1, -1]))), 1);
    }

    #[test]
    fn quadrant_swap() {
        let l = IntegerLattice::diagonal(&[2, 2]);
        let cone = PolyhedralCone::from_rays(2, &[int_vec(&[1, 0]), int_vec(&[0, 1])]).unwrap();
        let k = KahlerModel::new(&l, cone, vec![int_vec(&[1, 0]), int_vec(&[0, 1])]).unwrap();
        let swap = KleinIsometry::holomorphic(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]));
        let c = anti_invariant_class(&k, &swap).unwrap();
        assert_eq!(c.coordinates[0], c.coordinates[1]);
    }

    #[test]
    fn kaut_criterion_on_toy() {
        let h = toy();
        let cone = PolyhedralCone::from_rays(2, &[int_vec(&[1, 0]), int_vec(&[1, 1])]).unwrap();
        let k = KahlerModel::on_neron_severi(&h, cone).unwrap();
        let mon = Monodromy::FullOrthogonalPlus;
        let id = IntMatrix::identity(4);
        assert_eq!(kaut_star_criterion(&id, &h, &k, &mon).unwrap(), KautVerdict::KleinRealizable { sign: Sign::Plus });
        // pull-back of a real structure; its dagger operator is its negative
        let sigma = IntMatrix::diagonal(&int_vec(&[1, -1, -1, -1]));
        let r = kaut_star_criterion(&sigma.neg(), &h, &k, &mon).unwrap();
        assert_eq!(r, KautVerdict::KleinRealizable { sign: Sign::Minus });
        let v = torelli_anti_check(&sigma, &h, &h, &k, &k, &mon).unwrap();
        assert_eq!(v.holds, Some(true));
        let v = torelli_anti_check(&id, &h, &h, &k, &k, &mon).unwrap();
        assert!(!v.anti_hodge);
        let minus = id.neg();
        assert!(matches!(kaut_star_criterion(&minus, &h, &k, &mon).unwrap(), KautVerdict::NotRealizable { .. }));
    }
}
