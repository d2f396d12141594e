//! Non-abelian H¹ of a finite group with coefficients in a finite G-group:
//! cocycles, equivalence, twisting, the exact sequence of pointed sets of a
//! short exact sequence and the description of its fibers by orbits.

use crate::group::{for_each_tuple, is_bijection, is_homomorphism, FiniteGroup, GroupError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("element {0} does not act by an automorphism")]
    NotAutomorphism(usize),
    #[error("the action is not a homomorphism into the automorphism group")]
    NotAnAction,
    #[error("map is not a 1-cocycle")]
    NotCocycle,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not stable under the action")]
    NotStable,
    #[error("input is not a short exact sequence of G-groups: {0}")]
    NotExactInput(String),
    #[error("the action is not conjugation by an element of the carrier")]
    NotInner,
    #[error("acting groups differ")]
    ActingGroupMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Values on every element of the acting group.
pub type Cocycle = Vec<usize>;

/// A finite group `carrier` with an action of `acting` by automorphisms;
/// `action[g][a]` is `g·a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GGroup {
    acting: FiniteGroup,
    carrier: FiniteGroup,
    action: Vec<Vec<usize>>,
}

impl GGroup {
    pub fn new(acting: FiniteGroup, carrier: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self, CohomologyError> {
        if action.len() != acting.order() {
            return Err(CohomologyError::NotAnAction);
        }
        for (g, a) in action.iter().enumerate() {
            if !is_bijection(a) || !is_homomorphism(&carrier, &carrier, a) {
                return Err(CohomologyError::NotAutomorphism(g));
            }
        }
        if action[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(CohomologyError::NotAnAction);
        }
        for g in acting.elements() {
            for h in acting.elements() {
                let gh = acting.mul(g, h);
                if carrier.elements().any(|x| action[gh][x] != action[g][action[h][x]]) {
                    return Err(CohomologyError::NotAnAction);
                }
            }
        }
        Ok(GGroup { acting, carrier, action })
    }

    pub fn trivial_action(acting: FiniteGroup, carrier: FiniteGroup) -> Self {
        let id: Vec<usize> = carrier.elements().collect();
        let action = vec![id; acting.order()];
        GGroup { acting, carrier, action }
    }

    /// Action given by automorphisms for some elements of the acting group,
    /// extended to the group they generate.
    pub fn from_generator_action(
        acting: FiniteGroup,
        carrier: FiniteGroup,
        images: &[(usize, Vec<usize>)],
    ) -> Result<Self, CohomologyError> {
        let n = acting.order();
        let mut action: Vec<Option<Vec<usize>>> = vec![None; n];
        action[0] = Some(carrier.elements().collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (g, aut) in images {
                let y = acting.mul(*g, x);
                let ax = action[x].clone().expect("visited");
                let val: Vec<usize> = ax.iter().map(|&v| aut[v]).collect();
                match &action[y] {
                    None => {
                        action[y] = Some(val);
                        queue.push_back(y);
                    }
                    Some(existing) if *existing != val => return Err(CohomologyError::NotAnAction),
                    _ => {}
                }
            }
        }
        let action = action.into_iter().collect::<Option<Vec<_>>>().ok_or(CohomologyError::NotAnAction)?;
        Self::new(acting, carrier, action)
    }

    /// Action through a homomorphism `hom: acting -> carrier` followed by
    /// conjugation.
    pub fn conjugation(acting: FiniteGroup, carrier: FiniteGroup, hom: &[usize]) -> Result<Self, CohomologyError> {
        let action = acting
            .elements()
            .map(|g| carrier.elements().map(|x| carrier.conj(hom[g], x)).collect())
            .collect();
        Self::new(acting, carrier, action)
    }

    pub fn acting(&self) -> &FiniteGroup {
        &self.acting
    }

    pub fn carrier(&self) -> &FiniteGroup {
        &self.carrier
    }

    pub fn act(&self, g: usize, a: usize) -> usize {
        self.action[g][a]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn is_trivial_action(&self) -> bool {
        self.action.iter().all(|a| a.iter().enumerate().all(|(i, &x)| i == x))
    }

    pub fn invariants(&self) -> Vec<usize> {
        self.carrier
            .elements()
            .filter(|&a| self.acting.elements().all(|g| self.act(g, a) == a))
            .collect()
    }

    /// Restriction to a stable subgroup (sorted), re-indexed, with embedding.
    pub fn restrict(&self, sub: &[usize]) -> Result<(GGroup, Vec<usize>), CohomologyError> {
        let set: BTreeSet<usize> = sub.iter().copied().collect();
        if !self.carrier.is_subgroup(sub) {
            return Err(CohomologyError::NotExactInput("not a subgroup".into()));
        }
        if sub.iter().any(|&x| self.acting.elements().any(|g| !set.contains(&self.act(g, x)))) {
            return Err(CohomologyError::NotStable);
        }
        let (carrier, embed) = self.carrier.subgroup_as_group(sub);
        let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let action = self
            .acting
            .elements()
            .map(|g| embed.iter().map(|&x| pos[&self.act(g, x)]).collect())
            .collect();
        Ok((GGroup::new(self.acting.clone(), carrier, action)?, embed))
    }
}

pub fn is_cocycle(a: &GGroup, phi: &[usize]) -> bool {
    let g = &a.acting;
    let c = &a.carrier;
    phi.len() == g.order()
        && phi.iter().all(|&x| x < c.order())
        && g.elements().all(|s| {
            g.elements().all(|t| phi[g.mul(s, t)] == c.mul(phi[s], a.act(s, phi[t])))
        })
}

/// `g ↦ a^-1 φ(g) ᵍa`, the cocycle equivalent to `φ` through `a`.
pub fn act_on_cocycle(a: &GGroup, elem: usize, phi: &[usize]) -> Cocycle {
    let c = &a.carrier;
    a.acting
        .elements()
        .map(|g| c.mul(c.mul(c.inv(elem), phi[g]), a.act(g, elem)))
        .collect()
}

/// Some `a` with `a ψ(g) = φ(g) ᵍa` for all `g`.
pub fn cocycles_equivalent(a: &GGroup, phi: &[usize], psi: &[usize]) -> Option<usize> {
    a.carrier.elements().find(|&x| act_on_cocycle(a, x, phi) == psi)
}

/// Extends values on generators of the acting group to a cocycle.
pub fn extend_cocycle(a: &GGroup, gens: &[usize], values: &[usize]) -> Option<Cocycle> {
    let g = &a.acting;
    let c = &a.carrier;
    let mut phi = vec![usize::MAX; g.order()];
    phi[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &v) in gens.iter().zip(values) {
            let y = g.mul(s, x);
            let val = c.mul(v, a.act(s, phi[x]));
            if phi[y] == usize::MAX {
                phi[y] = val;
                queue.push_back(y);
            } else if phi[y] != val {
                return None;
            }
        }
    }
    (!phi.contains(&usize::MAX) && is_cocycle(a, &phi)).then_some(phi)
}

/// All cocycles, sorted.
pub fn cocycles(a: &GGroup) -> Vec<Cocycle> {
    let gens = a.acting.generators();
    let mut out = Vec::new();
    for_each_tuple(gens.len(), a.carrier.order(), |values| {
        if let Some(phi) = extend_cocycle(a, &gens, values) {
            out.push(phi);
        }
    });
    out.sort();
    out.dedup();
    out
}

/// `H¹(G, A)`: one representative per class (the smallest cocycle of the
/// class), sorted, so the trivial class comes first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H1Set {
    pub representatives: Vec<Cocycle>,
    pub base_point: usize,
    pub class_sizes: Vec<usize>,
    pub cocycle_count: usize,
}

impl H1Set {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Index of the class of `φ`.
    pub fn class_of(&self, a: &GGroup, phi: &[usize]) -> Option<usize> {
        let canon = canonical_cocycle(a, phi);
        self.representatives.binary_search(&canon).ok()
    }
}

fn canonical_cocycle(a: &GGroup, phi: &[usize]) -> Cocycle {
    a.carrier.elements().map(|x| act_on_cocycle(a, x, phi)).min().expect("nonempty carrier")
}

pub fn h1_finite(a: &GGroup) -> H1Set {
    let all = cocycles(a);
    let mut sizes: HashMap<Cocycle, usize> = HashMap::new();
    for phi in &all {
        *sizes.entry(canonical_cocycle(a, phi)).or_default() += 1;
    }
    let mut representatives: Vec<Cocycle> = sizes.keys().cloned().collect();
    representatives.sort();
    let class_sizes = representatives.iter().map(|r| sizes[r]).collect();
    H1Set { representatives, base_point: 0, class_sizes, cocycle_count: all.len() }
}

/// The action on a stable normal subgroup twisted by a cocycle of the
/// ambient G-group: `g·x = φ(g) ᵍx φ(g)^-1`.
pub fn twist(b: &GGroup, sub: &[usize], phi: &[usize]) -> Result<(GGroup, Vec<usize>), CohomologyError> {
    if !is_cocycle(b, phi) {
        return Err(CohomologyError::NotCocycle);
    }
    let mut sub = sub.to_vec();
    sub.sort_unstable();
    if !b.carrier.is_subgroup(&sub) || !b.carrier.is_normal(&sub) {
        return Err(CohomologyError::NotNormal);
    }
    let set: BTreeSet<usize> = sub.iter().copied().collect();
    if sub.iter().any(|&x| b.acting.elements().any(|g| !set.contains(&b.act(g, x)))) {
        return Err(CohomologyError::NotStable);
    }
    let (carrier, embed) = b.carrier.subgroup_as_group(&sub);
    let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let action = b
        .acting
        .elements()
        .map(|g| embed.iter().map(|&x| pos[&b.carrier.conj(phi[g], b.act(g, x))]).collect())
        .collect();
    Ok((GGroup::new(b.acting.clone(), carrier, action)?, embed))
}

/// Twist of the whole carrier.
pub fn twist_whole(b: &GGroup, phi: &[usize]) -> Result<GGroup, CohomologyError> {
    let all: Vec<usize> = b.carrier.elements().collect();
    Ok(twist(b, &all, phi)?.0)
}

/// `1 → A' → A → A'' → 1` of G-groups.
#[derive(Debug, Clone)]
pub struct ShortExactSequence {
    pub sub: GGroup,
    pub mid: GGroup,
    pub quot: GGroup,
    /// `A' → A`
    pub inc: Vec<usize>,
    /// `A → A''`
    pub proj: Vec<usize>,
}

impl ShortExactSequence {
    /// Checks homomorphisms, injectivity, surjectivity, exactness in the
    /// middle and equivariance.
    pub fn new(sub: GGroup, mid: GGroup, quot: GGroup, inc: Vec<usize>, proj: Vec<usize>) -> Result<Self, CohomologyError> {
        let bad = |m: &str| Err(CohomologyError::NotExactInput(m.to_string()));
        if sub.acting != mid.acting || quot.acting != mid.acting {
            return Err(CohomologyError::ActingGroupMismatch);
        }
        if !is_homomorphism(&sub.carrier, &mid.carrier, &inc) || !is_homomorphism(&mid.carrier, &quot.carrier, &proj) {
            return bad("maps are not homomorphisms");
        }
        let image: BTreeSet<usize> = inc.iter().copied().collect();
        if image.len() != inc.len() {
            return bad("first map is not injective");
        }
        let hit: BTreeSet<usize> = proj.iter().copied().collect();
        if hit.len() != quot.carrier.order() {
            return bad("second map is not surjective");
        }
        let kernel: BTreeSet<usize> = mid.carrier.elements().filter(|&a| proj[a] == 0).collect();
        if kernel != image {
            return bad("image differs from kernel");
        }
        for g in mid.acting.elements() {
            if sub.carrier.elements().any(|x| inc[sub.act(g, x)] != mid.act(g, inc[x]))
                || mid.carrier.elements().any(|a| proj[mid.act(g, a)] != quot.act(g, proj[a]))
            {
                return bad("maps are not equivariant");
            }
        }
        Ok(ShortExactSequence { sub, mid, quot, inc, proj })
    }

    /// The sequence `1 → N → A → A/N → 1` for a stable normal subgroup.
    pub fn from_normal_subgroup(mid: &GGroup, normal: &[usize]) -> Result<Self, CohomologyError> {
        let mut normal = normal.to_vec();
        normal.sort_unstable();
        if !mid.carrier.is_subgroup(&normal) || !mid.carrier.is_normal(&normal) {
            return Err(CohomologyError::NotNormal);
        }
        let (sub, inc) = mid.restrict(&normal)?;
        let (qgroup, proj) = mid.carrier.quotient(&normal);
        let mut reps = vec![usize::MAX; qgroup.order()];
        for a in mid.carrier.elements().rev() {
            reps[proj[a]] = a;
        }
        let action = mid
            .acting
            .elements()
            .map(|g| (0..qgroup.order()).map(|c| proj[mid.act(g, reps[c])]).collect())
            .collect();
        let quot = GGroup::new(mid.acting.clone(), qgroup, action)?;
        Self::new(sub, mid.clone(), quot, inc, proj)
    }

    fn lift(&self, c: usize) -> usize {
        self.mid.carrier.elements().find(|&a| self.proj[a] == c).expect("surjective")
    }

    fn pull_back_sub(&self, a: usize) -> usize {
        self.inc.iter().position(|&x| x == a).expect("element of the kernel")
    }

    /// `δ(c)(g) = b^-1 ᵍb` for a lift `b` of an invariant `c`.
    pub fn connecting(&self, c: usize) -> Cocycle {
        let b = self.lift(c);
        let m = &self.mid.carrier;
        self.mid
            .acting
            .elements()
            .map(|g| self.pull_back_sub(m.mul(m.inv(b), self.mid.act(g, b))))
            .collect()
    }

    pub fn push_cocycle(&self, phi: &[usize]) -> Cocycle {
        phi.iter().map(|&x| self.inc[x]).collect()
    }

    pub fn project_cocycle(&self, phi: &[usize]) -> Cocycle {
        phi.iter().map(|&x| self.proj[x]).collect()
    }
}

/// The six terms of the exact sequence with their maps and exactness at
/// each of the five inner nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub invariants_sub: Vec<usize>,
    pub invariants_mid: Vec<usize>,
    pub invariants_quot: Vec<usize>,
    pub h1_sub: usize,
    pub h1_mid: usize,
    pub h1_quot: usize,
    /// Class of `δ(c)` for each element of `invariants_quot`.
    pub connecting: Vec<usize>,
    /// Class map `H¹(A') → H¹(A)`.
    pub h1_sub_to_mid: Vec<usize>,
    /// Class map `H¹(A) → H¹(A'')`.
    pub h1_mid_to_quot: Vec<usize>,
    pub exact_at_invariants_sub: bool,
    pub exact_at_invariants_mid: bool,
    pub exact_at_invariants_quot: bool,
    pub exact_at_h1_sub: bool,
    pub exact_at_h1_mid: bool,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.exact_at_invariants_sub
            && self.exact_at_invariants_mid
            && self.exact_at_invariants_quot
            && self.exact_at_h1_sub
            && self.exact_at_h1_mid
    }
}

pub fn les_of_pointed_sets(ses: &ShortExactSequence) -> LesReport {
    let inv_sub = ses.sub.invariants();
    let inv_mid = ses.mid.invariants();
    let inv_quot = ses.quot.invariants();
    let h_sub = h1_finite(&ses.sub);
    let h_mid = h1_finite(&ses.mid);
    let h_quot = h1_finite(&ses.quot);
    let connecting: Vec<usize> = inv_quot
        .iter()
        .map(|&c| h_sub.class_of(&ses.sub, &ses.connecting(c)).expect("connecting cocycle"))
        .collect();
    let sub_to_mid: Vec<usize> = h_sub
        .representatives
        .iter()
        .map(|phi| h_mid.class_of(&ses.mid, &ses.push_cocycle(phi)).expect("pushed cocycle"))
        .collect();
    let mid_to_quot: Vec<usize> = h_mid
        .representatives
        .iter()
        .map(|phi| h_quot.class_of(&ses.quot, &ses.project_cocycle(phi)).expect("projected cocycle"))
        .collect();

    let exact_sub = inv_sub.iter().filter(|&&x| ses.inc[x] == 0).count() == 1;
    let image_inc: BTreeSet<usize> = inv_sub.iter().map(|&x| ses.inc[x]).collect();
    let kernel_proj: BTreeSet<usize> = inv_mid.iter().copied().filter(|&a| ses.proj[a] == 0).collect();
    let image_proj: BTreeSet<usize> = inv_mid.iter().map(|&a| ses.proj[a]).collect();
    let kernel_delta: BTreeSet<usize> = inv_quot
        .iter()
        .zip(&connecting)
        .filter(|(_, &k)| k == h_sub.base_point)
        .map(|(&c, _)| c)
        .collect();
    let image_delta: BTreeSet<usize> = connecting.iter().copied().collect();
    let kernel_push: BTreeSet<usize> = (0..h_sub.len()).filter(|&i| sub_to_mid[i] == h_mid.base_point).collect();
    let image_push: BTreeSet<usize> = sub_to_mid.iter().copied().collect();
    let kernel_project: BTreeSet<usize> = (0..h_mid.len()).filter(|&i| mid_to_quot[i] == h_quot.base_point).collect();

    LesReport {
        exact_at_invariants_sub: exact_sub,
        exact_at_invariants_mid: image_inc == kernel_proj,
        exact_at_invariants_quot: image_proj == kernel_delta,
        exact_at_h1_sub: image_delta == kernel_push,
        exact_at_h1_mid: image_push == kernel_project,
        invariants_sub: inv_sub,
        invariants_mid: inv_mid,
        invariants_quot: inv_quot,
        h1_sub: h_sub.len(),
        h1_mid: h_mid.len(),
        h1_quot: h_quot.len(),
        connecting,
        h1_sub_to_mid: sub_to_mid,
        h1_mid_to_quot: mid_to_quot,
    }
}

/// Comparison of one fiber of `H¹(A) → H¹(A'')` with the orbits of
/// `H¹(G, A'_φ)` under the twisted invariants of `A''`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberEntry {
    pub class: usize,
    pub fiber_size: usize,
    pub twisted_h1_size: usize,
    pub orbit_count: usize,
    pub bijection: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub fibers: Vec<FiberEntry>,
    pub all_bijective: bool,
}

/// For each class `[φ]` of `H¹(G, A)`, `ψ' ↦ ψ'·φ` maps `H¹(G, A'_φ)` onto
/// the fiber through `[φ]`, and its fibers are the orbits of `(A''_φ)^G`
/// acting by `ψ'(g) ↦ b^-1 ψ'(g) φ(g) ᵍb φ(g)^-1` for lifts `b`.
pub fn twist_fiber_check(ses: &ShortExactSequence) -> Result<FiberReport, CohomologyError> {
    let h_mid = h1_finite(&ses.mid);
    let h_quot = h1_finite(&ses.quot);
    let m = &ses.mid.carrier;
    let image_class: Vec<usize> = h_mid
        .representatives
        .iter()
        .map(|phi| h_quot.class_of(&ses.quot, &ses.project_cocycle(phi)).expect("projected cocycle"))
        .collect();
    let all_sub: Vec<usize> = {
        let mut v = ses.inc.clone();
        v.sort_unstable();
        v
    };
    let mut fibers = Vec::new();
    for (class, phi) in h_mid.representatives.iter().enumerate() {
        let fiber: BTreeSet<usize> =
            (0..h_mid.len()).filter(|&j| image_class[j] == image_class[class]).collect();
        let (sub_phi, embed) = twist(&ses.mid, &all_sub, phi)?;
        let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let h_sub_phi = h1_finite(&sub_phi);
        let images: Vec<usize> = h_sub_phi
            .representatives
            .iter()
            .map(|psi| {
                let prod: Cocycle = psi.iter().zip(phi).map(|(&x, &f)| m.mul(embed[x], f)).collect();
                h_mid.class_of(&ses.mid, &prod).expect("product is a cocycle")
            })
            .collect();

        let proj_phi = ses.project_cocycle(phi);
        let quot_phi = twist_whole(&ses.quot, &proj_phi)?;
        let mut parent: Vec<usize> = (0..h_sub_phi.len()).collect();
        for c in quot_phi.invariants() {
            let b = ses.lift(c);
            for (i, psi) in h_sub_phi.representatives.iter().enumerate() {
                let moved: Cocycle = ses
                    .mid
                    .acting
                    .elements()
                    .map(|g| {
                        let v = m.mul(
                            m.mul(m.mul(m.inv(b), embed[psi[g]]), phi[g]),
                            m.mul(ses.mid.act(g, b), m.inv(phi[g])),
                        );
                        pos[&v]
                    })
                    .collect();
                let j = h_sub_phi.class_of(&sub_phi, &moved).expect("action preserves cocycles");
                union(&mut parent, i, j);
            }
        }
        let orbit_of: Vec<usize> = (0..parent.len()).map(|i| find(&mut parent, i)).collect();
        let orbit_count = orbit_of.iter().collect::<BTreeSet<_>>().len();
        let image_set: BTreeSet<usize> = images.iter().copied().collect();
        let consistent = (0..images.len())
            .all(|i| (0..images.len()).all(|j| (images[i] == images[j]) == (orbit_of[i] == orbit_of[j])));
        fibers.push(FiberEntry {
            class,
            fiber_size: fiber.len(),
            twisted_h1_size: h_sub_phi.len(),
            orbit_count,
            bijection: image_set == fiber && consistent,
        });
    }
    let all_bijective = fibers.iter().all(|f| f.bijection);
    Ok(FiberReport { fibers, all_bijective })
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = i;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Explicit bijection `H¹(G, A) → H¹(G, A_triv)` for an action by
/// conjugation through a homomorphism `c: G → A`, given by `φ ↦ φ·c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InnerTwistReport {
    /// Values of `c` on the acting group.
    pub conjugator: Vec<usize>,
    pub inner_size: usize,
    pub trivial_size: usize,
    /// Class index in the trivial-action H¹ for each inner-action class.
    pub map: Vec<usize>,
    pub bijective: bool,
}

/// Homomorphism `c: G → A` with `g·x = c(g) x c(g)^-1`, if the action is inner.
pub fn inner_conjugator(a: &GGroup) -> Option<Vec<usize>> {
    a.acting
        .homomorphisms(&a.carrier)
        .into_iter()
        .filter(|c| {
            a.acting
                .elements()
                .all(|g| a.carrier.elements().all(|x| a.act(g, x) == a.carrier.conj(c[g], x)))
        })
        .min()
}

pub fn inner_twist_bijection(a: &GGroup) -> Result<InnerTwistReport, CohomologyError> {
    let c = inner_conjugator(a).ok_or(CohomologyError::NotInner)?;
    let trivial = GGroup::trivial_action(a.acting.clone(), a.carrier.clone());
    let h_inner = h1_finite(a);
    let h_triv = h1_finite(&trivial);
    let map: Vec<usize> = h_inner
        .representatives
        .iter()
        .map(|phi| {
            let twisted: Cocycle = phi.iter().zip(&c).map(|(&x, &t)| a.carrier.mul(x, t)).collect();
            h_triv.class_of(&trivial, &twisted).expect("φ·c is a homomorphism")
        })
        .collect();
    let bijective = map.len() == h_triv.len() && is_bijection(&map);
    Ok(InnerTwistReport { conjugator: c, inner_size: h_inner.len(), trivial_size: h_triv.len(), map, bijective })
}

/// `G = Z/2` acting on a normal subgroup of `ambient` by conjugation with
/// the involution `sigma`.
pub fn involution_action(ambient: &FiniteGroup, normal: &[usize], sigma: usize) -> Result<GGroup, CohomologyError> {
    let mut normal = normal.to_vec();
    normal.sort_unstable();
    if !ambient.is_subgroup(&normal) || !ambient.is_normal(&normal) {
        return Err(CohomologyError::NotNormal);
    }
    if ambient.mul(sigma, sigma) != 0 {
        return Err(CohomologyError::NotAnAction);
    }
    let (carrier, embed) = ambient.subgroup_as_group(&normal);
    let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let aut: Vec<usize> = embed.iter().map(|&x| pos[&ambient.conj(sigma, x)]).collect();
    GGroup::from_generator_action(FiniteGroup::cyclic(2), carrier, &[(1, aut)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteGroup {
        FiniteGroup::cyclic(2)
    }

    #[test]
    fn basic_h1_sizes() {
        let a = GGroup::trivial_action(z2(), z2());
        assert!(is_cocycle(&a, &[0, 1]));
        assert_eq!(cocycles_equivalent(&a, &[0, 1], &[0, 0]), None);
        assert_eq!(cocycles_equivalent(&a, &[0, 0], &[0, 0]), Some(0));
        assert_eq!(h1_finite(&a).len(), 2);
        let s3 = GGroup::trivial_action(z2(), FiniteGroup::symmetric(3));
        assert_eq!(h1_finite(&s3).len(), 2);
        let t = GGroup::trivial_action(FiniteGroup::symmetric(3), FiniteGroup::trivial());
        assert_eq!(h1_finite(&t).len(), 1);
        let z3 = GGroup::trivial_action(z2(), FiniteGroup::cyclic(3));
        assert!(!is_cocycle(&z3, &[0, 1]));
    }

    #[test]
    fn z4_sequence_is_exact() {
        let z4 = GGroup::trivial_action(z2(), FiniteGroup::cyclic(4));
        let ses = ShortExactSequence::from_normal_subgroup(&z4, &[0, 2]).unwrap();
        let r = les_of_pointed_sets(&ses);
        assert!(r.is_exact(), "{r:?}");
        assert!(twist_fiber_check(&ses).unwrap().all_bijective);
    }

    #[test]
    fn s3_sequence_fibers() {
        let s3 = FiniteGroup::symmetric(3);
        let a3: Vec<usize> = s3.elements().filter(|&x| s3.element_order(x) != 2).collect();
        let sigma = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
        let hom = vec![0, sigma];
        let conj = GGroup::conjugation(z2(), s3.clone(), &hom).unwrap();
        for a in [GGroup::trivial_action(z2(), s3.clone()), conj] {
            let ses = ShortExactSequence::from_normal_subgroup(&a, &a3).unwrap();
            assert!(les_of_pointed_sets(&ses).is_exact());
            assert!(twist_fiber_check(&ses).unwrap().all_bijective);
        }
        let not_normal = [0, sigma];
        assert!(matches!(
            ShortExactSequence::from_normal_subgroup(&GGroup::trivial_action(z2(), s3), &not_normal),
            Err(CohomologyError::NotNormal)
        ));
    }

    #[test]
    fn twisting_by_trivial_and_equivalent_cocycles() {
        let s3 = FiniteGroup::symmetric(3);
        let a = GGroup::trivial_action(z2(), s3.clone());
        assert_eq!(twist_whole(&a, &[0, 0]).unwrap().action_table(), a.action_table());
        let t = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
        let phi = vec![0, t];
        let psi = act_on_cocycle(&a, 1, &phi);
        let w = cocycles_equivalent(&a, &phi, &psi).unwrap();
        let ta = twist_whole(&a, &phi).unwrap();
        let tb = twist_whole(&a, &psi).unwrap();
        // x ↦ w^-1 x w intertwines the two twisted actions
        let iso: Vec<usize> = s3.elements().map(|x| s3.conj(s3.inv(w), x)).collect();
        for g in z2().elements() {
            for x in s3.elements() {
                assert_eq!(iso[ta.act(g, x)], tb.act(g, iso[x]));
            }
        }
    }

    #[test]
    fn inner_twist_examples() {
        let s3 = FiniteGroup::symmetric(3);
        let t = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
        let all: Vec<usize> = s3.elements().collect();
        let a = involution_action(&s3, &all, t).unwrap();
        let r = inner_twist_bijection(&a).unwrap();
        assert!(r.bijective);
        assert_eq!((r.inner_size, r.trivial_size), (2, 2));
        let d4 = FiniteGroup::dihedral(4);
        let rotations: Vec<usize> = (0..4).collect();
        let on_z4 = involution_action(&d4, &rotations, 4).unwrap();
        assert_eq!(inner_twist_bijection(&on_z4), Err(CohomologyError::NotInner));
        let all: Vec<usize> = d4.elements().collect();
        let r = inner_twist_bijection(&involution_action(&d4, &all, 4).unwrap()).unwrap();
        assert!(r.bijective);
    }
}
