//! Finiteness of H¹ along a filtration by normal subgroups: each layer's
//! fibers are counted through twisted coefficients of the layer below.

use crate::abelian::{h1_abelian, AbelianError, AbelianModule};
use crate::cohomology::{h1_finite, twist, twist_fiber_check, twist_whole, Cocycle, CohomologyError, GGroup, ShortExactSequence};
use crate::matrix::IntMatrix;
use crate::num::{self, Int, IntVec};
use num_traits::One;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiltrationError {
    #[error("filtration step {layer} is not a normal subgroup of the whole group")]
    NotNormal { layer: usize },
    #[error("filtration step {layer} is not stable under the action")]
    NotStable { layer: usize },
    #[error("filtration must decrease from the whole group to the trivial group")]
    BadChain,
    #[error("semidirect product data is inconsistent: {0}")]
    Inconsistent(String),
    #[error("H¹ of a twisted layer has a free part")]
    InfiniteLayer,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// Fiber of `H¹(G, A_i) → H¹(G, A_i/A_{i+1})` over one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCount {
    pub quotient_class: usize,
    /// `|H¹(G, (A_{i+1})_φ)|` for a cocycle `φ` in the fiber.
    pub twisted_h1: usize,
    /// Number of classes in the fiber.
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerReport {
    pub layer: usize,
    /// `None` for an infinite abelian quotient.
    pub quotient_order: Option<usize>,
    pub quotient_h1: usize,
    pub fibers: Vec<FiberCount>,
    /// Sum of the twisted `H¹` sizes over the fibers.
    pub bound: usize,
    /// `|H¹(G, A_i)|`.
    pub exact: usize,
}

/// A class of `H¹(G, N ⋊ Q)` as `g ↦ (f(g), ψ(g))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemidirectCocycle {
    #[serde(with = "num::json_int_rows")]
    pub kernel_part: Vec<IntVec>,
    pub quotient_part: Cocycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "cocycles", rename_all = "snake_case")]
pub enum Representatives {
    Finite(Vec<Cocycle>),
    Semidirect(Vec<SemidirectCocycle>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    /// Top layer first.
    pub layers: Vec<LayerReport>,
    pub h1_size: usize,
    pub representatives: Representatives,
    /// Product over the layers of the largest finite subgroup of each
    /// quotient; bounds the order of every finite subgroup.
    #[serde(with = "num::json_int")]
    pub finite_subgroup_order_bound: Int,
    /// Every fiber matched the orbit description.
    pub fibers_match_orbits: bool,
}

/// Finite G-group with `chain[0] = A ⊇ chain[1] ⊇ … ⊇ chain[n] = {1}`,
/// every step normal in `A` and stable under `G`.
pub fn filtration_finite(a: &GGroup, chain: &[Vec<usize>]) -> Result<FiltrationReport, FiltrationError> {
    let chain: Vec<Vec<usize>> = chain
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let whole: Vec<usize> = a.carrier().elements().collect();
    if chain.len() < 2 || chain[0] != whole || chain.last() != Some(&vec![0]) {
        return Err(FiltrationError::BadChain);
    }
    for (i, s) in chain.iter().enumerate() {
        if !a.carrier().is_subgroup(s) || !a.carrier().is_normal(s) {
            return Err(FiltrationError::NotNormal { layer: i });
        }
        if s.iter().any(|&x| a.acting().elements().any(|g| s.binary_search(&a.act(g, x)).is_err())) {
            return Err(FiltrationError::NotStable { layer: i });
        }
        if i > 0 && !s.iter().all(|x| chain[i - 1].binary_search(x).is_ok()) {
            return Err(FiltrationError::BadChain);
        }
    }

    let mut layers = Vec::new();
    let mut fibers_match_orbits = true;
    for i in 0..chain.len() - 1 {
        let (upper, embed) = a.restrict(&chain[i])?;
        let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let lower: Vec<usize> = chain[i + 1].iter().map(|x| pos[x]).collect();
        let ses = ShortExactSequence::from_normal_subgroup(&upper, &lower)?;
        let h_upper = h1_finite(&upper);
        let h_quot = h1_finite(&ses.quot);
        let mut fibers: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for phi in &h_upper.representatives {
            let q = h_quot.class_of(&ses.quot, &ses.project_cocycle(phi)).expect("projected cocycle");
            let entry = fibers.entry(q).or_insert_with(|| {
                let mut sub = ses.inc.clone();
                sub.sort_unstable();
                let twisted = twist(&upper, &sub, phi).expect("normal stable subgroup").0;
                (h1_finite(&twisted).len(), 0)
            });
            entry.1 += 1;
        }
        fibers_match_orbits &= twist_fiber_check(&ses)?.all_bijective;
        let fibers: Vec<FiberCount> = fibers
            .into_iter()
            .map(|(q, (t, c))| FiberCount { quotient_class: q, twisted_h1: t, classes: c })
            .collect();
        layers.push(LayerReport {
            layer: i,
            quotient_order: Some(ses.quot.carrier().order()),
            quotient_h1: h_quot.len(),
            bound: fibers.iter().map(|f| f.twisted_h1).sum(),
            exact: h_upper.len(),
            fibers,
        });
    }
    let h = h1_finite(a);
    Ok(FiltrationReport {
        layers,
        h1_size: h.len(),
        representatives: Representatives::Finite(h.representatives),
        finite_subgroup_order_bound: Int::from(a.carrier().order()),
        fibers_match_orbits,
    })
}

/// `N ⋊ Q` with `N` finitely generated abelian: `Q` acts on `N` through
/// `rho` (indexed by elements of `Q`) and `G` acts on both factors
/// compatibly. The filtration is `N ⋊ Q ⊇ N ⊇ 1`.
#[derive(Debug, Clone)]
pub struct SemidirectAbelian {
    pub kernel: AbelianModule,
    pub quotient: GGroup,
    pub rho: Vec<IntMatrix>,
}

impl SemidirectAbelian {
    pub fn new(kernel: AbelianModule, quotient: GGroup, rho: Vec<IntMatrix>) -> Result<Self, FiltrationError> {
        let bad = |m: &str| Err(FiltrationError::Inconsistent(m.to_string()));
        if kernel.acting() != quotient.acting() {
            return bad("acting groups differ");
        }
        let q = quotient.carrier();
        if rho.len() != q.order() {
            return bad("one matrix per element of the quotient is needed");
        }
        // ρ is an action of Q on N
        let as_module = AbelianModule::new(q.clone(), kernel.free_rank(), kernel.moduli().to_vec(), rho.clone())
            .map_err(|e| FiltrationError::Inconsistent(e.to_string()))?;
        let rho: Vec<IntMatrix> = q.elements().map(|x| as_module.matrix(x).clone()).collect();
        let same = |a: &IntMatrix, b: &IntMatrix| {
            (0..kernel.dim()).all(|j| {
                let col = |m: &IntMatrix| kernel.reduce(&m.col(j));
                col(a) == col(b)
            })
        };
        for g in kernel.acting().elements() {
            for x in q.elements() {
                let lhs = kernel.matrix(g).mul(&rho[x]);
                let rhs = rho[quotient.act(g, x)].mul(kernel.matrix(g));
                if !same(&lhs, &rhs) {
                    return bad("G-action is not compatible with the semidirect structure");
                }
            }
        }
        Ok(SemidirectAbelian { kernel, quotient, rho })
    }

    /// `N` with the action `g ↦ ρ(ψ(g)) α(g)`.
    pub fn twisted_kernel(&self, psi: &[usize]) -> Result<AbelianModule, FiltrationError> {
        let action = self
            .kernel
            .acting()
            .elements()
            .map(|g| self.rho[psi[g]].mul(self.kernel.matrix(g)))
            .collect();
        Ok(self.kernel.with_action(action)?)
    }

    fn mul(&self, a: &(IntVec, usize), b: &(IntVec, usize)) -> (IntVec, usize) {
        let moved = self.rho[a.1].mul_vec(&b.0);
        let sum: IntVec = a.0.iter().zip(&moved).map(|(x, y)| x + y).collect();
        (self.kernel.reduce(&sum), self.quotient.carrier().mul(a.1, b.1))
    }

    fn act(&self, g: usize, a: &(IntVec, usize)) -> (IntVec, usize) {
        (self.kernel.act(g, &a.0), self.quotient.act(g, a.1))
    }

    pub fn is_cocycle(&self, c: &SemidirectCocycle) -> bool {
        let g = self.kernel.acting();
        let val = |x: usize| (self.kernel.reduce(&c.kernel_part[x]), c.quotient_part[x]);
        g.elements().all(|s| g.elements().all(|t| val(g.mul(s, t)) == self.mul(&val(s), &self.act(s, &val(t)))))
    }
}

pub fn filtration_semidirect(data: &SemidirectAbelian) -> Result<FiltrationReport, FiltrationError> {
    let h_quot = h1_finite(&data.quotient);
    let mut reps = Vec::new();
    let mut fibers = Vec::new();
    for (qi, psi) in h_quot.representatives.iter().enumerate() {
        let twisted = data.twisted_kernel(psi)?;
        let h = h1_abelian(&twisted);
        let coords = h.elements().ok_or(FiltrationError::InfiniteLayer)?;
        let index: HashMap<&IntVec, usize> = coords.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let invariants = twist_whole(&data.quotient, psi)?.invariants();
        let mut parent: Vec<usize> = (0..coords.len()).collect();
        for &c in &invariants {
            let inv = data.rho[data.quotient.carrier().inv(c)].clone();
            for (i, cc) in coords.iter().enumerate() {
                let f = h.representative(&twisted, cc);
                let moved: Vec<IntVec> = f.iter().map(|v| twisted.reduce(&inv.mul_vec(v))).collect();
                let target = h.class_of(&twisted, &moved).expect("Q-action preserves cocycles");
                let j = index[&target];
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let roots: BTreeSet<usize> = (0..coords.len()).map(|i| find(&mut parent, i)).collect();
        for &r in &roots {
            reps.push(SemidirectCocycle { kernel_part: h.representative(&twisted, &coords[r]), quotient_part: psi.clone() });
        }
        fibers.push(FiberCount { quotient_class: qi, twisted_h1: coords.len(), classes: roots.len() });
    }
    let top = LayerReport {
        layer: 0,
        quotient_order: Some(data.quotient.carrier().order()),
        quotient_h1: h_quot.len(),
        bound: fibers.iter().map(|f| f.twisted_h1).sum(),
        exact: reps.len(),
        fibers,
    };
    let h_kernel = h1_abelian(&data.kernel).size().ok_or(FiltrationError::InfiniteLayer)?;
    let torsion: Int = data.kernel.moduli().iter().fold(Int::one(), |a, d| a * d);
    let bottom = LayerReport {
        layer: 1,
        quotient_order: if data.kernel.is_finite() { torsion.clone().try_into().ok() } else { None },
        quotient_h1: h_kernel,
        fibers: vec![FiberCount { quotient_class: 0, twisted_h1: h_kernel, classes: h_kernel }],
        bound: h_kernel,
        exact: h_kernel,
    };
    let fibers_match_orbits = reps.iter().all(|r| data.is_cocycle(r));
    Ok(FiltrationReport {
        layers: vec![top, bottom],
        h1_size: reps.len(),
        representatives: Representatives::Semidirect(reps),
        finite_subgroup_order_bound: torsion * Int::from(data.quotient.carrier().order()),
        fibers_match_orbits,
    })
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// `Z ⋊ Z/2 ≅ D∞` with `G = Z/2` acting trivially.
pub fn infinite_dihedral_example() -> SemidirectAbelian {
    use crate::group::FiniteGroup;
    let g = FiniteGroup::cyclic(2);
    let kernel = AbelianModule::trivial(g.clone(), 1, Vec::new()).expect("trivial module");
    let quotient = GGroup::trivial_action(g, FiniteGroup::cyclic(2));
    let rho = vec![IntMatrix::identity(1), IntMatrix::from_i64(&[&[-1]])];
    SemidirectAbelian::new(kernel, quotient, rho).expect("consistent data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn infinite_dihedral_has_three_classes() {
        let r = filtration_semidirect(&infinite_dihedral_example()).unwrap();
        assert_eq!(r.h1_size, 3);
        assert_eq!(r.finite_subgroup_order_bound, Int::from(2));
        assert!(r.fibers_match_orbits);
        assert_eq!(r.layers[0].fibers.iter().map(|f| f.classes).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn finite_chains() {
        let s3 = FiniteGroup::symmetric(3);
        let a = GGroup::trivial_action(FiniteGroup::cyclic(2), s3.clone());
        let all: Vec<usize> = s3.elements().collect();
        let r = filtration_finite(&a, &[all.clone(), vec![0]]).unwrap();
        assert_eq!(r.h1_size, h1_finite(&a).len());
        let a3: Vec<usize> = s3.elements().filter(|&x| s3.element_order(x) != 2).collect();
        let r = filtration_finite(&a, &[all.clone(), a3, vec![0]]).unwrap();
        assert!(r.fibers_match_orbits);
        assert!(r.layers.iter().all(|l| l.exact <= l.bound));
        let t = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
        assert_eq!(
            filtration_finite(&a, &[all, vec![0, t], vec![0]]),
            Err(FiltrationError::NotNormal { layer: 1 })
        );
    }
}
