//! H¹ of a finite group with coefficients in a finitely generated abelian
//! group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_t`, computed by integer linear algebra.

use crate::cohomology::GGroup;
use crate::group::{symmetric_permutations, FiniteGroup, MAX_ORDER};
use crate::matrix::IntMatrix;
use crate::num::{self, int, Int, IntVec};
use crate::smith::{integer_kernel, smith, solve_integer};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbelianError {
    #[error("expected {expected} action matrices of size {dim}, found a mismatch")]
    Shape { expected: usize, dim: usize },
    #[error("torsion modulus must be at least 2, found {0}")]
    BadModulus(Int),
    #[error("matrix of element {0} does not preserve the relations")]
    NotWellDefined(usize),
    #[error("the matrices do not define an action")]
    NotAnAction,
    #[error("map is not a 1-cocycle")]
    NotCocycle,
    #[error("module is infinite")]
    Infinite,
    #[error("module has more than {0} elements")]
    TooLarge(usize),
}

/// `Z^free_rank ⊕ Z/moduli[0] ⊕ …` with `G` acting by integer matrices on
/// the standard generators. `action[g]` is given for every element of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianModule {
    acting: FiniteGroup,
    free_rank: usize,
    #[serde(with = "num::json_int_vec")]
    moduli: Vec<Int>,
    action: Vec<IntMatrix>,
}

impl AbelianModule {
    pub fn new(acting: FiniteGroup, free_rank: usize, moduli: Vec<Int>, action: Vec<IntMatrix>) -> Result<Self, AbelianError> {
        let dim = free_rank + moduli.len();
        if action.len() != acting.order() || action.iter().any(|a| a.nrows() != dim || a.ncols() != dim) {
            return Err(AbelianError::Shape { expected: acting.order(), dim });
        }
        if let Some(d) = moduli.iter().find(|d| **d < int(2)) {
            return Err(AbelianError::BadModulus(d.clone()));
        }
        let mut m = AbelianModule { acting, free_rank, moduli, action };
        for g in 0..m.action.len() {
            if !m.preserves_relations(&m.action[g]) {
                return Err(AbelianError::NotWellDefined(g));
            }
            m.action[g] = m.reduce_matrix(&m.action[g]);
        }
        if !m.action[0].is_identity() {
            return Err(AbelianError::NotAnAction);
        }
        for g in m.acting.elements() {
            for h in m.acting.elements() {
                let gh = m.acting.mul(g, h);
                if m.reduce_matrix(&m.action[g].mul(&m.action[h])) != m.action[gh] {
                    return Err(AbelianError::NotAnAction);
                }
            }
        }
        Ok(m)
    }

    /// Action given on some elements of `G`, extended to the group they
    /// generate.
    pub fn from_generators(
        acting: FiniteGroup,
        free_rank: usize,
        moduli: Vec<Int>,
        images: &[(usize, IntMatrix)],
    ) -> Result<Self, AbelianError> {
        let dim = free_rank + moduli.len();
        let shell = AbelianModule { acting: acting.clone(), free_rank, moduli: moduli.clone(), action: Vec::new() };
        let mut action: Vec<Option<IntMatrix>> = vec![None; acting.order()];
        action[0] = Some(IntMatrix::identity(dim));
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (s, mat) in images {
                if mat.nrows() != dim || mat.ncols() != dim {
                    return Err(AbelianError::Shape { expected: acting.order(), dim });
                }
                let y = acting.mul(*s, x);
                let val = shell.reduce_matrix(&mat.mul(action[x].as_ref().expect("visited")));
                match &action[y] {
                    None => {
                        action[y] = Some(val);
                        queue.push_back(y);
                    }
                    Some(existing) if *existing != val => return Err(AbelianError::NotAnAction),
                    _ => {}
                }
            }
        }
        let action = action.into_iter().collect::<Option<Vec<_>>>().ok_or(AbelianError::NotAnAction)?;
        Self::new(acting, free_rank, moduli, action)
    }

    pub fn trivial(acting: FiniteGroup, free_rank: usize, moduli: Vec<Int>) -> Result<Self, AbelianError> {
        let dim = free_rank + moduli.len();
        let action = vec![IntMatrix::identity(dim); acting.order()];
        Self::new(acting, free_rank, moduli, action)
    }

    pub fn acting(&self) -> &FiniteGroup {
        &self.acting
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn moduli(&self) -> &[Int] {
        &self.moduli
    }

    pub fn dim(&self) -> usize {
        self.free_rank + self.moduli.len()
    }

    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Modulus of coordinate `k`, zero for free coordinates.
    pub fn modulus(&self, k: usize) -> Int {
        if k < self.free_rank {
            Int::zero()
        } else {
            self.moduli[k - self.free_rank].clone()
        }
    }

    fn preserves_relations(&self, a: &IntMatrix) -> bool {
        (self.free_rank..self.dim()).all(|j| {
            let dj = self.modulus(j);
            (0..self.dim()).all(|k| {
                let v = a.get(k, j) * &dj;
                let mk = self.modulus(k);
                if mk.is_zero() {
                    v.is_zero()
                } else {
                    v.is_multiple_of(&mk)
                }
            })
        })
    }

    fn reduce_matrix(&self, a: &IntMatrix) -> IntMatrix {
        IntMatrix::from_fn(a.nrows(), a.ncols(), |i, j| self.reduce_entry(i, a.get(i, j)))
    }

    fn reduce_entry(&self, k: usize, v: &Int) -> Int {
        let m = self.modulus(k);
        if m.is_zero() {
            v.clone()
        } else {
            v.mod_floor(&m)
        }
    }

    pub fn reduce(&self, v: &[Int]) -> IntVec {
        v.iter().enumerate().map(|(k, x)| self.reduce_entry(k, x)).collect()
    }

    pub fn act(&self, g: usize, v: &[Int]) -> IntVec {
        self.reduce(&self.action[g].mul_vec(v))
    }

    fn add(&self, a: &[Int], b: &[Int]) -> IntVec {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    fn sub(&self, a: &[Int], b: &[Int]) -> IntVec {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    fn is_zero(&self, v: &[Int]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// The same group with another action.
    pub fn with_action(&self, action: Vec<IntMatrix>) -> Result<Self, AbelianError> {
        Self::new(self.acting.clone(), self.free_rank, self.moduli.clone(), action)
    }

    pub fn is_cocycle(&self, f: &[IntVec]) -> bool {
        f.len() == self.acting.order()
            && f.iter().all(|v| v.len() == self.dim())
            && self.acting.elements().all(|g| {
                self.acting.elements().all(|h| {
                    let gh = self.acting.mul(g, h);
                    self.is_zero(&self.sub(&f[gh], &self.add(&f[g], &self.act(g, &f[h]))))
                })
            })
    }

    /// `g ↦ g·x − x`.
    pub fn coboundary(&self, x: &[Int]) -> Vec<IntVec> {
        self.acting.elements().map(|g| self.sub(&self.act(g, x), x)).collect()
    }

    /// Some `a` with `f − f' = ∂a`.
    pub fn cocycles_equivalent(&self, f: &[IntVec], f2: &[IntVec]) -> Option<IntVec> {
        let n = self.dim();
        let m = self.acting.order();
        let torsion = self.moduli.len();
        // unknowns: a (n), then one slack per torsion coordinate per element
        let mut rows = Vec::with_capacity(m * n);
        let mut rhs = Vec::with_capacity(m * n);
        for g in self.acting.elements() {
            for k in 0..n {
                let mut row = vec![Int::zero(); n + m * torsion];
                for j in 0..n {
                    row[j] = self.action[g].get(k, j).clone();
                }
                row[k] -= Int::one();
                if k >= self.free_rank {
                    row[n + g * torsion + (k - self.free_rank)] = -self.modulus(k);
                }
                rows.push(row);
                rhs.push(&f[g][k] - &f2[g][k]);
            }
        }
        let sol = solve_integer(&IntMatrix::from_rows(&rows), &rhs)?;
        Some(self.reduce(&sol[..n]))
    }

    fn element_count(&self) -> Result<usize, AbelianError> {
        if !self.is_finite() {
            return Err(AbelianError::Infinite);
        }
        let total = self.moduli.iter().try_fold(1usize, |acc, d| {
            d.to_usize().and_then(|d| acc.checked_mul(d)).filter(|&x| x <= MAX_ORDER)
        });
        total.ok_or(AbelianError::TooLarge(MAX_ORDER))
    }

    /// Element of a finite module with index `i` (mixed radix, first
    /// coordinate fastest).
    pub fn element(&self, mut i: usize) -> IntVec {
        self.moduli
            .iter()
            .map(|d| {
                let d = d.to_usize().expect("small modulus");
                let c = i % d;
                i /= d;
                Int::from(c)
            })
            .collect()
    }

    pub fn index_of(&self, v: &[Int]) -> usize {
        let v = self.reduce(v);
        let mut idx = 0usize;
        for (c, d) in v.iter().zip(&self.moduli).rev() {
            idx = idx * d.to_usize().expect("small modulus") + c.to_usize().expect("reduced coordinate");
        }
        idx
    }

    /// The finite module as a G-group with its multiplication table.
    pub fn to_ggroup(&self) -> Result<GGroup, AbelianError> {
        let count = self.element_count()?;
        let elems: Vec<IntVec> = (0..count).map(|i| self.element(i)).collect();
        let carrier = FiniteGroup::from_fn(count, |a, b| self.index_of(&self.add(&elems[a], &elems[b])))
            .map_err(|_| AbelianError::NotAnAction)?;
        let action = self
            .acting
            .elements()
            .map(|g| elems.iter().map(|v| self.index_of(&self.act(g, v))).collect())
            .collect();
        GGroup::new(self.acting.clone(), carrier, action).map_err(|_| AbelianError::NotAnAction)
    }
}

/// `H¹(G, M) ≅ Z^free_rank ⊕ Z/invariants[0] ⊕ …`, together with the data
/// needed to name the class of any cocycle.
#[derive(Debug, Clone, Serialize)]
pub struct AbelianH1 {
    pub free_rank: usize,
    #[serde(with = "num::json_int_vec")]
    pub invariants: Vec<Int>,
    /// One cocycle per cyclic factor, torsion factors first, each given by
    /// its values on all elements of `G`.
    #[serde(with = "num::json_int_rows_nested")]
    pub generators: Vec<Vec<IntVec>>,
    #[serde(skip)]
    cocycle_basis: IntMatrix,
    #[serde(skip)]
    coords: IntMatrix,
    /// Position in `coords · y` and modulus (zero for free factors).
    #[serde(skip)]
    factors: Vec<(usize, Int)>,
    #[serde(skip)]
    dim: usize,
}

impl AbelianH1 {
    pub fn order(&self) -> Option<Int> {
        (self.free_rank == 0).then(|| self.invariants.iter().fold(Int::one(), |a, d| a * d))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariants.is_empty()
    }

    /// Coordinates of the class of a cocycle, or `None` if it is not one.
    pub fn class_of(&self, module: &AbelianModule, f: &[IntVec]) -> Option<IntVec> {
        if !module.is_cocycle(f) {
            return None;
        }
        let flat: IntVec = f.iter().flatten().cloned().collect();
        let y = solve_integer(&self.cocycle_basis, &flat)?;
        let c = self.coords.mul_vec(&y);
        Some(
            self.factors
                .iter()
                .map(|(i, d)| if d.is_zero() { c[*i].clone() } else { c[*i].mod_floor(d) })
                .collect(),
        )
    }

    /// Cocycle with the given coordinates.
    pub fn representative(&self, module: &AbelianModule, coords: &[Int]) -> Vec<IntVec> {
        let m = module.acting().order();
        let mut out = vec![vec![Int::zero(); self.dim]; m];
        for (c, gen) in coords.iter().zip(&self.generators) {
            for g in 0..m {
                for k in 0..self.dim {
                    out[g][k] += c * &gen[g][k];
                }
            }
        }
        out.iter().map(|v| module.reduce(v)).collect()
    }

    /// All coordinate tuples of a finite H¹.
    pub fn elements(&self) -> Option<Vec<IntVec>> {
        if self.free_rank > 0 {
            return None;
        }
        let mut out: Vec<IntVec> = vec![Vec::new()];
        for d in &self.invariants {
            let d = d.to_usize()?;
            out = out
                .into_iter()
                .flat_map(|v| (0..d).map(move |c| {
                    let mut w = v.clone();
                    w.push(Int::from(c));
                    w
                }))
                .collect();
        }
        Some(out)
    }

    /// `|G|·c = 0` for every generator `c` and no free part.
    pub fn torsion_law_holds(&self, module: &AbelianModule) -> bool {
        let order = Int::from(module.acting().order());
        self.free_rank == 0
            && self.generators.iter().all(|gen| {
                let scaled: Vec<IntVec> =
                    gen.iter().map(|v| module.reduce(&v.iter().map(|x| x * &order).collect::<Vec<_>>())).collect();
                self.class_of(module, &scaled).is_some_and(|c| c.iter().all(Zero::is_zero))
            })
    }
}

/// Row basis of the lattice spanned by `rows`.
fn row_lattice_basis(rows: &[IntVec]) -> Vec<IntVec> {
    if rows.is_empty() {
        return Vec::new();
    }
    let s = smith(&IntMatrix::from_rows(rows));
    let vinv = s.v.inverse_unimodular().expect("unimodular");
    (0..s.rank).map(|i| vinv.row(i).iter().map(|x| x * &s.diag[i]).collect()).collect()
}

pub fn h1_abelian(module: &AbelianModule) -> AbelianH1 {
    let g = module.acting();
    let m = g.order();
    let n = module.dim();
    let big_n = m * n;
    let gens = g.generators();
    let var = |e: usize, k: usize| e * n + k;

    // f(sh) − f(s) − s·f(h) ∈ R for generators s and all h; slack columns
    // absorb the torsion relations.
    let mut constraint_rows: Vec<(IntVec, Option<Int>)> = Vec::new();
    for &s in &gens {
        for h in g.elements() {
            let sh = g.mul(s, h);
            for k in 0..n {
                let mut row = vec![Int::zero(); big_n];
                row[var(sh, k)] += Int::one();
                row[var(s, k)] -= Int::one();
                for j in 0..n {
                    row[var(h, j)] -= module.matrix(s).get(k, j);
                }
                let modulus = module.modulus(k);
                constraint_rows.push((row, (!modulus.is_zero()).then_some(modulus)));
            }
        }
    }
    let slack_count = constraint_rows.iter().filter(|(_, d)| d.is_some()).count();
    let mut slack = 0;
    let full_rows: Vec<IntVec> = constraint_rows
        .into_iter()
        .map(|(mut row, d)| {
            row.resize(big_n + slack_count, Int::zero());
            if let Some(d) = d {
                row[big_n + slack] = -d;
                slack += 1;
            }
            row
        })
        .collect();
    let kernel = if full_rows.is_empty() {
        (0..big_n + slack_count).map(|i| unit(big_n + slack_count, i)).collect()
    } else {
        integer_kernel(&IntMatrix::from_rows(&full_rows))
    };
    let projected: Vec<IntVec> = kernel.iter().map(|v| v[..big_n].to_vec()).collect();
    let z_basis = row_lattice_basis(&projected);
    let k = z_basis.len();

    let mut boundary: Vec<IntVec> = Vec::new();
    for j in 0..n {
        boundary.push(module.coboundary(&unit(n, j)).into_iter().flatten().collect());
    }
    for e in g.elements() {
        for t in module.free_rank()..n {
            let mut v = vec![Int::zero(); big_n];
            v[var(e, t)] = module.modulus(t);
            boundary.push(v);
        }
    }

    if k == 0 {
        return AbelianH1 {
            free_rank: 0,
            invariants: Vec::new(),
            generators: Vec::new(),
            cocycle_basis: IntMatrix::zeros(big_n, 0),
            coords: IntMatrix::zeros(0, 0),
            factors: Vec::new(),
            dim: n,
        };
    }
    let zmat = IntMatrix::from_cols(big_n, &z_basis);
    let xcols: Vec<IntVec> = boundary
        .iter()
        .map(|b| solve_integer(&zmat, b).expect("coboundaries are cocycles"))
        .collect();
    let x = IntMatrix::from_cols(k, &xcols);
    let s = smith(&x);
    let uinv = s.u.inverse_unimodular().expect("unimodular");
    let mut factors = Vec::new();
    let mut invariants = Vec::new();
    for (i, d) in s.diag[..s.rank.min(k)].iter().enumerate() {
        if !d.is_one() {
            factors.push((i, d.clone()));
            invariants.push(d.clone());
        }
    }
    let free_rank = k - s.rank;
    for i in s.rank..k {
        factors.push((i, Int::zero()));
    }
    let generators = factors
        .iter()
        .map(|(i, _)| {
            let flat = zmat.mul_vec(&uinv.col(*i));
            flat.chunks(n).map(|c| module.reduce(c)).collect()
        })
        .collect();
    AbelianH1 { free_rank, invariants, generators, cocycle_basis: zmat, coords: s.u, factors, dim: n }
}

fn unit(n: usize, i: usize) -> IntVec {
    (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()
}

/// Random module for `G` built from trivial, sign and permutation pieces
/// and cyclic torsion, with the free part in a random basis.
pub fn random_module<R: Rng>(rng: &mut R, acting: &FiniteGroup, max_dim: usize) -> AbelianModule {
    let signs = acting.homomorphisms(&FiniteGroup::cyclic(2));
    let mut free_blocks: Vec<Vec<IntMatrix>> = Vec::new();
    let mut torsion_blocks: Vec<(Int, Vec<IntMatrix>)> = Vec::new();
    let mut dim = 0;
    let target = rng.random_range(1..=max_dim);
    while dim < target {
        let room = target - dim;
        match rng.random_range(0..4) {
            0 => {
                free_blocks.push(vec![IntMatrix::identity(1); acting.order()]);
                dim += 1;
            }
            1 => {
                let eps = &signs[rng.random_range(0..signs.len())];
                free_blocks.push(eps.iter().map(|&e| IntMatrix::from_i64(&[&[if e == 0 { 1 } else { -1 }]])).collect());
                dim += 1;
            }
            2 if room >= 2 => {
                let k = rng.random_range(2..=room.min(3));
                let homs = acting.homomorphisms(&FiniteGroup::symmetric(k));
                let hom = &homs[rng.random_range(0..homs.len())];
                let perms = symmetric_permutations(k);
                free_blocks.push(hom.iter().map(|&p| permutation_matrix(&perms[p])).collect());
                dim += k;
            }
            _ => {
                let d = int(rng.random_range(2..=6));
                let eps = &signs[rng.random_range(0..signs.len())];
                torsion_blocks.push((d, eps.iter().map(|&e| IntMatrix::from_i64(&[&[if e == 0 { 1 } else { -1 }]])).collect()));
                dim += 1;
            }
        }
    }
    let free_rank: usize = free_blocks.iter().map(|b| b[0].nrows()).sum();
    let p = random_unimodular(rng, free_rank);
    let pinv = p.inverse_unimodular().expect("unimodular");
    let action = acting
        .elements()
        .map(|g| {
            let free = free_blocks
                .iter()
                .fold(IntMatrix::zeros(0, 0), |acc, b| acc.direct_sum(&b[g]));
            let free = p.mul(&free).mul(&pinv);
            torsion_blocks.iter().fold(free, |acc, (_, b)| acc.direct_sum(&b[g]))
        })
        .collect();
    let moduli = torsion_blocks.iter().map(|(d, _)| d.clone()).collect();
    AbelianModule::new(acting.clone(), free_rank, moduli, action).expect("sum of modules")
}

fn permutation_matrix(p: &[usize]) -> IntMatrix {
    IntMatrix::from_fn(p.len(), p.len(), |i, j| if p[j] == i { Int::one() } else { Int::zero() })
}

/// Product of a few random elementary matrices.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = int(rng.random_range(-2..=2));
        for col in 0..n {
            let v = p.get(i, col) + &c * p.get(j, col);
            p.set(i, col, v);
        }
    }
    p
}

impl AbelianH1 {
    /// Number of elements as a machine integer, if finite and small.
    pub fn size(&self) -> Option<usize> {
        self.order().and_then(|o| o.abs().to_usize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h1_finite;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sign_module(free: bool) -> AbelianModule {
        let z2 = FiniteGroup::cyclic(2);
        let minus = IntMatrix::from_i64(&[&[-1]]);
        let (r, t) = if free { (1, vec![]) } else { (0, vec![int(4)]) };
        AbelianModule::from_generators(z2, r, t, &[(1, minus)]).unwrap()
    }

    #[test]
    fn small_examples() {
        let z2 = FiniteGroup::cyclic(2);
        let triv = AbelianModule::trivial(z2.clone(), 1, vec![]).unwrap();
        assert!(h1_abelian(&triv).is_trivial());
        let sign = sign_module(true);
        let h = h1_abelian(&sign);
        assert_eq!(h.invariants, vec![int(2)]);
        assert_eq!(h.free_rank, 0);
        assert!(h.torsion_law_holds(&sign));
        let coords = h.class_of(&sign, &[vec![int(0)], vec![int(3)]]).unwrap();
        assert_eq!(coords, vec![int(1)]);
        let z4 = AbelianModule::trivial(z2, 0, vec![int(4)]).unwrap();
        let h = h1_abelian(&z4);
        assert_eq!(h.invariants, vec![int(2)]);
        assert_eq!(h1_finite(&z4.to_ggroup().unwrap()).len(), 2);
    }

    #[test]
    fn equivalence_witness() {
        let sign = sign_module(true);
        let f = vec![vec![int(0)], vec![int(1)]];
        let g = vec![vec![int(0)], vec![int(5)]];
        let a = sign.cocycles_equivalent(&f, &g).unwrap();
        let d = sign.coboundary(&a);
        assert_eq!(&f[1][0] - &g[1][0], d[1][0]);
        assert!(sign.cocycles_equivalent(&f, &[vec![int(0)], vec![int(2)]]).is_none());
    }

    #[test]
    fn matches_enumeration_on_finite_modules() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in ["Z2", "Z3", "V4", "S3"] {
            let g = FiniteGroup::named(name).unwrap();
            for _ in 0..4 {
                let m = random_module(&mut rng, &g, 2);
                let h = h1_abelian(&m);
                assert!(h.torsion_law_holds(&m));
                if m.is_finite() {
                    let brute = h1_finite(&m.to_ggroup().unwrap()).len();
                    assert_eq!(h.size(), Some(brute), "{name} {m:?}");
                }
            }
        }
    }
}
