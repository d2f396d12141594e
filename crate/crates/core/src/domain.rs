//! Positive cones of hyperbolic lattices, Dirichlet fundamental domains,
//! Siegel-set intersections and sampled verification of domains.

use crate::cone::{ConeError, PolyhedralCone};
use crate::isometry::{self, Completeness, Gamma, GeneratedGroup, IsometryError, WordBall};
use crate::lattice::IntegerLattice;
use crate::matrix::IntMatrix;
use crate::num::{self, json_int_vec, json_rat_vec, Int, IntVec, Rat, RatVec};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("lattice is not hyperbolic")]
    NotHyperbolic,
    #[error("component base must have positive square")]
    NonPositiveBase,
    #[error("point is not in the open positive cone")]
    NotInCone,
    #[error("generator {index} does not preserve the positive cone")]
    GeneratorLeavesCone { index: usize },
    #[error("base point has a stabilizer of order {order}")]
    NontrivialStabilizer { order: usize },
    #[error("result still changing at word bound {bound}")]
    NonStabilizing { bound: usize },
    #[error("no point with trivial stabilizer among the first {tried} candidates (coordinate bound {bound})")]
    SearchExhausted { bound: i64, tried: usize },
    #[error("sample point {point:?} could not be moved into the domain")]
    CoverageFailure { point: Vec<String> },
    #[error("interior of the domain meets its translate by {element:?}")]
    DisjointnessFailure { element: IntMatrix },
    #[error("cone is not contained in the rational closure of the positive cone")]
    NotInPositiveCone,
    #[error("domain construction supports rank at most {max}, got {rank}")]
    UnsupportedRank { rank: usize, max: usize },
    #[error(transparent)]
    Isometry(#[from] IsometryError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// Largest rank accepted for domain construction.
pub const MAX_DOMAIN_RANK: usize = 4;

/// Default number of orbit layers explored.
pub const DEFAULT_WORD_BOUND: usize = 20;

/// The component of `{q > 0}` containing `base`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveCone {
    pub lattice: IntegerLattice,
    #[serde(with = "json_rat_vec")]
    pub component_base: RatVec,
}

impl PositiveCone {
    pub fn new(lattice: IntegerLattice, component_base: RatVec) -> Result<Self, DomainError> {
        if !lattice.is_hyperbolic() {
            return Err(DomainError::NotHyperbolic);
        }
        if component_base.len() != lattice.rank() {
            return Err(ConeError::DimensionMismatch { expected: lattice.rank(), found: component_base.len() }.into());
        }
        if !lattice.norm_rat(&component_base).is_positive() {
            return Err(DomainError::NonPositiveBase);
        }
        Ok(PositiveCone { lattice, component_base })
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.lattice.norm_rat(x).is_positive() && self.lattice.pairing_rat(x, &self.component_base).is_positive()
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.contains(&num::to_rat_vec(x))
    }

    /// For rank at most two the rational closure is polyhedral exactly when
    /// the isotropic lines are rational; it is then the cone they span.
    pub fn polyhedral_closure(&self) -> Option<PolyhedralCone> {
        let g = self.lattice.gram();
        let orient = |v: IntVec| {
            if self.lattice.pairing_rat(&num::to_rat_vec(&v), &self.component_base).is_negative() {
                v.iter().map(|x| -x).collect()
            } else {
                v
            }
        };
        match self.rank() {
            1 => Some(PolyhedralCone::from_rays(1, &[orient(vec![Int::from(1)])]).ok()?),
            2 => {
                let (a, b, c) = (g.get(0, 0).clone(), g.get(0, 1).clone(), g.get(1, 1).clone());
                let disc = &b * &b - &a * &c;
                let s = disc.sqrt();
                if &s * &s != disc {
                    return None;
                }
                let (r1, r2) = if a.is_zero() {
                    (vec![Int::from(1), Int::zero()], vec![c.clone(), Int::from(-2) * &b])
                } else {
                    (vec![-&b + &s, a.clone()], vec![-&b - &s, a.clone()])
                };
                let rays = [orient(num::primitive(&r1)), orient(num::primitive(&r2))];
                PolyhedralCone::from_rays(2, &rays).ok()
            }
            _ => None,
        }
    }
}

/// `x = 0`, or `x` on the positive side of `base` with `q(x) >= 0`. Rational
/// input means an isotropic `x` already spans a rational ray of the closure.
pub fn rational_closure_member(c: &PositiveCone, x: &[Rat]) -> bool {
    if num::is_zero_vec(x) {
        return true;
    }
    c.lattice.pairing_rat(x, &c.component_base).is_positive() && !c.lattice.norm_rat(x).is_negative()
}

fn check_group(c: &PositiveCone, g: &GeneratedGroup) -> Result<(), DomainError> {
    g.check_on(&c.lattice)?;
    for (index, k) in g.generators.iter().enumerate() {
        let image = k.dagger_matrix().to_rat().mul_vec(&c.component_base);
        if !c.contains(&image) {
            return Err(DomainError::GeneratorLeavesCone { index });
        }
    }
    Ok(())
}

/// A group element whose bisector supports a facet of the domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetElement {
    #[serde(with = "json_int_vec")]
    pub halfspace: IntVec,
    pub element: IntMatrix,
    pub word_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringEvidence {
    pub samples: usize,
    pub seed: u64,
    pub coordinate_bound: i64,
    pub max_steps: usize,
    /// Longest reduction word needed over all samples.
    pub longest_reduction: usize,
    /// Samples already inside the domain.
    pub already_inside: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessEvidence {
    pub depth: usize,
    pub elements_checked: usize,
}

/// A Dirichlet domain with the data needed to reproduce and check it.
/// Covering is sampled, not proved globally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainCertificate {
    pub cone: PositiveCone,
    #[serde(with = "json_int_vec")]
    pub xi: IntVec,
    pub group: GeneratedGroup,
    pub domain: PolyhedralCone,
    /// Whether the domain was cut down by the polyhedral closure of the
    /// positive cone; otherwise membership also requires the closure test.
    pub closure_intersected: bool,
    pub facet_elements: Vec<FacetElement>,
    pub word_bound: usize,
    /// Smallest depth whose halfspaces already give the final domain.
    pub first_complete_depth: usize,
    /// Smallest depth at which the domain agrees with the previous depth
    /// and stays unchanged up to the bound.
    pub confirmed_depth: usize,
    pub stabilizer_completeness: Completeness,
    #[serde(default)]
    pub covering_evidence: Option<CoveringEvidence>,
    #[serde(default)]
    pub disjointness_evidence: Option<DisjointnessEvidence>,
}

/// Result of reducing a point into a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Acting matrix `h` with `h x` in the domain.
    pub element: IntMatrix,
    pub steps: usize,
    pub point: RatVec,
}

impl DomainCertificate {
    pub fn lattice(&self) -> &IntegerLattice {
        &self.cone.lattice
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.domain.contains(x) && (self.closure_intersected || rational_closure_member(&self.cone, x))
    }

    fn xi_pairing(&self, x: &[Rat]) -> Rat {
        self.lattice().pairing_rat(&num::to_rat_vec(&self.xi), x)
    }

    /// Moves: generators, their inverses and the facet elements with inverses.
    fn moves(&self) -> Vec<(IntMatrix, usize)> {
        let mut out: Vec<(IntMatrix, usize)> = Vec::new();
        let mut push = |m: IntMatrix, len: usize| {
            if !out.iter().any(|(x, _)| x == &m) {
                out.push((m, len));
            }
        };
        for g in self.group.action_matrices() {
            let inv = g.inverse_unimodular().expect("isometries are unimodular");
            push(g, 1);
            push(inv, 1);
        }
        for f in &self.facet_elements {
            let inv = f.element.inverse_unimodular().expect("isometries are unimodular");
            push(f.element.clone(), f.word_length);
            push(inv, f.word_length);
        }
        out
    }

    /// Greedy descent of `<xi, .>` over the orbit of `x`, using at most
    /// `max_steps` letters. `None` when stuck outside the domain.
    pub fn reduce(&self, x: &[Rat], max_steps: usize) -> Option<Reduction> {
        let moves = self.moves();
        let dim = self.xi.len();
        let mut point = x.to_vec();
        let mut element = IntMatrix::identity(dim);
        let mut steps = 0;
        loop {
            if self.contains(&point) {
                return Some(Reduction { element, steps, point });
            }
            let current = self.xi_pairing(&point);
            let best = moves
                .iter()
                .map(|(m, len)| {
                    let y = m.to_rat().mul_vec(&point);
                    (self.xi_pairing(&y), y, m, *len)
                })
                .filter(|(v, ..)| *v < current)
                .min_by(|a, b| a.0.cmp(&b.0));
            let (_, y, m, len) = best?;
            steps += len;
            if steps > max_steps {
                return None;
            }
            point = y;
            element = m.mul(&element);
        }
    }

    /// Membership of an isometry preserving the cone in the group: reduce
    /// `g xi` into the domain by `w`; `g` belongs exactly when `w g = 1`,
    /// since `xi` is the only orbit point of itself inside the domain.
    pub fn is_member(&self, g: &IntMatrix, max_steps: usize) -> Option<bool> {
        let gx = g.to_rat().mul_vec(&num::to_rat_vec(&self.xi));
        let r = self.reduce(&gx, max_steps)?;
        Some(r.element.mul(g).is_identity())
    }
}

fn halfspace_for(l: &IntegerLattice, xi: &[Int], image: &[Int]) -> IntVec {
    let diff: IntVec = image.iter().zip(xi).map(|(a, b)| a - b).collect();
    num::primitive(&l.functional(&diff))
}

fn implied(cone: &PolyhedralCone, h: &[Int]) -> bool {
    cone.rays().iter().all(|r| !num::dot(h, r).is_negative())
        && cone.lines().iter().all(|l| num::dot(h, l).is_zero())
}

/// Builds `D = {x in C+ : <xi, x> <= <g xi, x>}` over the word ball.
pub fn dirichlet_domain(
    group: &GeneratedGroup,
    c: &PositiveCone,
    xi: &[Rat],
) -> Result<DomainCertificate, DomainError> {
    let rank = c.rank();
    if rank > MAX_DOMAIN_RANK {
        return Err(DomainError::UnsupportedRank { rank, max: MAX_DOMAIN_RANK });
    }
    if xi.len() != rank || !c.contains(xi) {
        return Err(DomainError::NotInCone);
    }
    check_group(c, group)?;
    let stab = isometry::stabilizer(&c.lattice, &Gamma::Generated(group.clone()), xi)?;
    if stab.elements.len() > 1 {
        return Err(DomainError::NontrivialStabilizer { order: stab.elements.len() });
    }
    let xi_int = num::clear_denominators(xi);
    let bound = group.word_bound.max(1);
    let ball = group.ball(rank, bound);
    let closure = c.polyhedral_closure();
    let mut cone = closure.clone().unwrap_or_else(|| PolyhedralCone::full(rank));
    let mut sources: Vec<FacetElement> = Vec::new();
    let mut history = vec![cone.clone()];
    for depth in 1..=bound {
        for e in ball.elements.iter().filter(|e| e.length == depth) {
            let image = e.matrix.mul_vec(&xi_int);
            if image == xi_int {
                return Err(DomainError::NontrivialStabilizer { order: 2 });
            }
            let h = halfspace_for(&c.lattice, &xi_int, &image);
            if !sources.iter().any(|s| s.halfspace == h) {
                sources.push(FacetElement { halfspace: h.clone(), element: e.matrix.clone(), word_length: depth });
            }
            if !implied(&cone, &h) {
                cone = cone.intersect(&PolyhedralCone::from_halfspaces(rank, &[h])?)?;
            }
        }
        history.push(cone.clone());
    }
    let (first, confirmed) = stabilization_depths(&history).ok_or(DomainError::NonStabilizing { bound })?;
    let facet_elements = cone
        .halfspaces()
        .iter()
        .filter_map(|h| sources.iter().find(|s| &s.halfspace == h).cloned())
        .collect();
    Ok(DomainCertificate {
        cone: c.clone(),
        xi: xi_int,
        group: group.clone(),
        domain: cone,
        closure_intersected: closure.is_some(),
        facet_elements,
        word_bound: bound,
        first_complete_depth: first,
        confirmed_depth: confirmed,
        stabilizer_completeness: stab.completeness,
        covering_evidence: None,
        disjointness_evidence: None,
    })
}

/// `(first, confirmed)` for a history indexed by depth `0..=bound`: the
/// first depth equal to the final value, and that depth plus one. `None`
/// when the last two entries differ.
fn stabilization_depths<T: PartialEq>(history: &[T]) -> Option<(usize, usize)> {
    let bound = history.len() - 1;
    if bound >= 1 && history[bound - 1] != history[bound] {
        return None;
    }
    let first = (0..=bound).find(|&d| history[d..].iter().all(|h| *h == history[bound]))?;
    Some((first, first + 1))
}

/// First point of a deterministic search whose stabilizer is certified
/// trivial: the component base, then integer points ordered by max-norm
/// and lexicographically.
pub fn find_trivial_stabilizer_point(gamma: &Gamma, c: &PositiveCone, bound: i64) -> Result<RatVec, DomainError> {
    let rank = c.rank();
    let mut tried = 0usize;
    let mut accept = |x: &RatVec| -> Result<bool, DomainError> {
        if !c.contains(x) {
            return Ok(false);
        }
        tried += 1;
        let s = isometry::stabilizer(&c.lattice, gamma, x)?;
        Ok(s.elements.len() == 1 && s.completeness == Completeness::Certified)
    };
    if accept(&c.component_base)? {
        return Ok(c.component_base.clone());
    }
    for k in 1..=bound {
        let side = (2 * k + 1) as usize;
        for idx in 0..side.pow(rank as u32) {
            let mut rem = idx;
            let mut coords = vec![0i64; rank];
            for v in coords.iter_mut().rev() {
                *v = (rem % side) as i64 - k;
                rem /= side;
            }
            if coords.iter().map(|v| v.abs()).max() != Some(k) {
                continue;
            }
            let x = num::int_vec(&coords);
            if num::content(&x) != Int::from(1) {
                continue;
            }
            let x = num::to_rat_vec(&x);
            if accept(&x)? {
                return Ok(x);
            }
        }
    }
    Err(DomainError::SearchExhausted { bound, tried })
}

/// Distinct nonzero intersections `g P1 ∩ P2` over the word ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiegelReport {
    pub intersections: Vec<PolyhedralCone>,
    /// Elements with a nonzero intersection, in breadth-first order.
    pub elements: Vec<IntMatrix>,
    pub sizes_by_depth: Vec<usize>,
    pub word_bound: usize,
    pub first_complete_depth: usize,
    pub confirmed_depth: usize,
}

pub fn siegel_intersections(
    c: &PositiveCone,
    p1: &PolyhedralCone,
    p2: &PolyhedralCone,
    group: &GeneratedGroup,
) -> Result<SiegelReport, DomainError> {
    for p in [p1, p2] {
        let inside = p.rays().iter().all(|r| rational_closure_member(c, &num::to_rat_vec(r)));
        if p.dim() != c.rank() || !p.is_pointed() || !inside {
            return Err(DomainError::NotInPositiveCone);
        }
    }
    let bound = group.word_bound.max(1);
    let ball = group.ball(c.rank(), bound);
    siegel_over_ball(p1, p2, &ball, bound)
}

fn siegel_over_ball(
    p1: &PolyhedralCone,
    p2: &PolyhedralCone,
    ball: &WordBall,
    bound: usize,
) -> Result<SiegelReport, DomainError> {
    let mut intersections: Vec<PolyhedralCone> = Vec::new();
    let mut elements = Vec::new();
    let mut sizes = Vec::new();
    for depth in 0..=bound {
        for e in ball.elements.iter().filter(|e| e.length == depth) {
            let i = p1.transform(&e.matrix).intersect(p2)?;
            if i.is_zero() {
                continue;
            }
            elements.push(e.matrix.clone());
            if !intersections.contains(&i) {
                intersections.push(i);
            }
        }
        sizes.push(intersections.len());
    }
    let (first, confirmed) = stabilization_depths(&sizes).ok_or(DomainError::NonStabilizing { bound })?;
    intersections.sort();
    Ok(SiegelReport {
        intersections,
        elements,
        sizes_by_depth: sizes,
        word_bound: bound,
        first_complete_depth: first,
        confirmed_depth: confirmed,
    })
}

/// Sampling and disjointness parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub coordinate_bound: i64,
    /// Longest reduction word allowed for a sample.
    pub max_steps: usize,
    pub disjointness_depth: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: 1000, seed: 0, coordinate_bound: 1000, max_steps: DEFAULT_WORD_BOUND, disjointness_depth: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub covering: CoveringEvidence,
    pub disjointness: DisjointnessEvidence,
}

/// Random integer points of the open positive cone, reproducible from the seed.
pub fn sample_cone_points(c: &PositiveCone, count: usize, seed: u64, coordinate_bound: i64) -> Vec<IntVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: IntVec = (0..c.rank())
            .map(|_| Int::from(rng.random_range(-coordinate_bound..=coordinate_bound)))
            .collect();
        if !c.lattice.norm(&v).is_positive() {
            continue;
        }
        if c.contains_int(&v) {
            out.push(v);
        } else {
            out.push(v.iter().map(|x| -x).collect());
        }
    }
    out
}

/// Covering by greedy reduction of seeded samples, then exact interior
/// disjointness for every nonidentity word up to the requested depth.
pub fn verify_fundamental_domain(
    cert: &DomainCertificate,
    opts: &VerifyOptions,
) -> Result<VerificationReport, DomainError> {
    let mut longest = 0;
    let mut inside = 0;
    for p in sample_cone_points(&cert.cone, opts.samples, opts.seed, opts.coordinate_bound) {
        let x = num::to_rat_vec(&p);
        match cert.reduce(&x, opts.max_steps) {
            Some(r) => {
                longest = longest.max(r.steps);
                inside += (r.steps == 0) as usize;
            }
            None => {
                return Err(DomainError::CoverageFailure { point: p.iter().map(|v| v.to_string()).collect() });
            }
        }
    }
    let ball = cert.group.ball(cert.cone.rank(), opts.disjointness_depth);
    let mut checked = 0;
    for e in &ball.elements {
        if e.matrix.is_identity() {
            continue;
        }
        checked += 1;
        if cert.domain.transform(&e.matrix).interiors_meet(&cert.domain)? {
            return Err(DomainError::DisjointnessFailure { element: e.matrix.clone() });
        }
    }
    Ok(VerificationReport {
        covering: CoveringEvidence {
            samples: opts.samples,
            seed: opts.seed,
            coordinate_bound: opts.coordinate_bound,
            max_steps: opts.max_steps,
            longest_reduction: longest,
            already_inside: inside,
        },
        disjointness: DisjointnessEvidence { depth: opts.disjointness_depth, elements_checked: checked },
    })
}

/// Attaches the verification evidence to the certificate.
pub fn verify_and_record(cert: &mut DomainCertificate, opts: &VerifyOptions) -> Result<VerificationReport, DomainError> {
    let report = verify_fundamental_domain(cert, opts)?;
    cert.covering_evidence = Some(report.covering.clone());
    cert.disjointness_evidence = Some(report.disjointness.clone());
    Ok(report)
}

/// Stabilizer of `x` decided by reduction against a verified certificate.
pub fn stabilizer_with_certificate(
    cert: &DomainCertificate,
    x: &[Rat],
    max_steps: usize,
) -> Result<Vec<IntMatrix>, DomainError> {
    let candidates = isometry::stabilizer_candidates(cert.lattice(), x)?;
    Ok(candidates
        .into_iter()
        .filter(|m| cert.is_member(m, max_steps).unwrap_or(false))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtin;
    use crate::num::{int_vec, rat_vec};

    fn pell() -> (PositiveCone, GeneratedGroup) {
        let c = PositiveCone::new(IntegerLattice::diagonal(&[2, -4]), rat_vec(&[1, 0])).unwrap();
        let g = GeneratedGroup::holomorphic(vec![IntMatrix::from_i64(&[&[3, 4], &[2, 3]])], 20);
        (c, g)
    }

    #[test]
    fn pell_domain_is_the_two_ray_sector() {
        let (c, g) = pell();
        let cert = dirichlet_domain(&g, &c, &rat_vec(&[1, 0])).unwrap();
        assert_eq!(cert.domain.rays(), &[int_vec(&[2, -1]), int_vec(&[2, 1])]);
        assert_eq!(cert.domain.halfspaces().len(), 2);
        assert_eq!(cert.first_complete_depth, 1);
        assert_eq!(cert.facet_elements.len(), 2);
        assert!(!cert.closure_intersected);
        let report = verify_fundamental_domain(&cert, &VerifyOptions { samples: 200, ..Default::default() }).unwrap();
        assert!(report.disjointness.elements_checked == 16);
    }

    #[test]
    fn trivial_group_gives_whole_cone() {
        let c = PositiveCone::new(builtin("U").unwrap(), rat_vec(&[1, 1])).unwrap();
        let g = GeneratedGroup::holomorphic(vec![], 5);
        let cert = dirichlet_domain(&g, &c, &rat_vec(&[1, 2])).unwrap();
        assert!(cert.closure_intersected);
        assert_eq!(cert.domain.rays(), &[int_vec(&[0, 1]), int_vec(&[1, 0])]);
        assert_eq!(cert.first_complete_depth, 0);
        verify_fundamental_domain(&cert, &VerifyOptions { samples: 50, ..Default::default() }).unwrap();
    }

    #[test]
    fn closure_membership() {
        let c = PositiveCone::new(builtin("U").unwrap(), rat_vec(&[1, 1])).unwrap();
        assert!(rational_closure_member(&c, &rat_vec(&[1, 0])));
        assert!(rational_closure_member(&c, &rat_vec(&[2, 3])));
        assert!(!rational_closure_member(&c, &rat_vec(&[1, -1])));
        assert!(!rational_closure_member(&c, &rat_vec(&[-1, 0])));
        assert!(rational_closure_member(&c, &rat_vec(&[0, 0])));
    }

    #[test]
    fn trivial_stabilizer_search() {
        let c = PositiveCone::new(builtin("U").unwrap(), rat_vec(&[1, 1])).unwrap();
        let x = find_trivial_stabilizer_point(&Gamma::OrthogonalPlus, &c, 3).unwrap();
        assert_ne!(x[0], x[1]);
        let (pc, pg) = pell();
        assert_eq!(find_trivial_stabilizer_point(&Gamma::Generated(pg), &pc, 3).unwrap(), rat_vec(&[1, 0]));
    }

    #[test]
    fn pell_siegel_set_has_three_members() {
        let (c, g) = pell();
        let cert = dirichlet_domain(&g, &c, &rat_vec(&[1, 0])).unwrap();
        let r = siegel_intersections(&c, &cert.domain, &cert.domain, &g).unwrap();
        assert_eq!(r.intersections.len(), 3);
        assert_eq!(r.elements.len(), 3);
        assert_eq!((r.first_complete_depth, r.confirmed_depth), (1, 2));
    }

    #[test]
    fn dihedral_domain_halves_the_sector() {
        let c = PositiveCone::new(IntegerLattice::diagonal(&[2, -4]), rat_vec(&[1, 0])).unwrap();
        let g = GeneratedGroup::holomorphic(
            vec![IntMatrix::from_i64(&[&[3, 4], &[2, 3]]), IntMatrix::from_i64(&[&[1, 0], &[0, -1]])],
            20,
        );
        assert!(matches!(
            dirichlet_domain(&g, &c, &rat_vec(&[1, 0])),
            Err(DomainError::NontrivialStabilizer { .. })
        ));
        let cert = dirichlet_domain(&g, &c, &rat_vec(&[3, 1])).unwrap();
        assert_eq!(cert.domain.rays(), &[int_vec(&[1, 0]), int_vec(&[2, 1])]);
        verify_fundamental_domain(&cert, &VerifyOptions { samples: 200, ..Default::default() }).unwrap();
        let s = siegel_intersections(&c, &cert.domain, &cert.domain, &g).unwrap();
        assert!(s.elements.len() >= 3);
        let refl = IntMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert_eq!(cert.is_member(&refl, 20), Some(true));
        assert_eq!(cert.is_member(&IntMatrix::from_i64(&[&[3, -4], &[-2, 3]]), 20), Some(true));
    }

    #[test]
    fn shrunken_domain_fails_coverage() {
        let (c, g) = pell();
        let mut cert = dirichlet_domain(&g, &c, &rat_vec(&[1, 0])).unwrap();
        cert.domain = PolyhedralCone::from_rays(2, &[int_vec(&[2, 1]), int_vec(&[1, 0])]).unwrap();
        assert!(matches!(
            verify_fundamental_domain(&cert, &VerifyOptions { samples: 100, disjointness_depth: 0, ..Default::default() }),
            Err(DomainError::CoverageFailure { .. })
        ));
    }
}
