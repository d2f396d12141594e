//! Lattice isometries, Klein isometries with their dagger action, finite
//! isometry groups of definite lattices, stabilizers of positive vectors and
//! the pointwise-fixing decision procedure for corank-one sublattices.

use crate::lattice::{IntegerLattice, Sublattice};
use crate::matrix::{rat_matrix_to_int, IntMatrix, Matrix, RatMatrix};
use crate::num::{self, Int, IntVec, Rat};
use crate::smith::{self, smith};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsometryError {
    #[error("matrix is {rows}x{cols} but the lattice has rank {rank}")]
    DimensionMismatch { rows: usize, cols: usize, rank: usize },
    #[error("lattice is not definite")]
    NotDefinite,
    #[error("sublattice is not primitive")]
    NotPrimitive,
    #[error("lattice is not hyperbolic")]
    NotHyperbolic,
    #[error("vector does not have positive square")]
    NonPositiveVector,
    #[error("matrix is not an isometry of the lattice")]
    NotAnIsometry,
    #[error("isometry group has order {order}, too large to list")]
    GroupTooLarge { order: u128 },
    #[error("entries too large for the enumeration kernel")]
    EntriesTooLarge,
}

/// `+1` for holomorphic, `-1` for anti-holomorphic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom("sign must be 1 or -1"))
    }
}

fn plus() -> Sign {
    Sign::Plus
}

/// `true` iff `m^T G m = G` and `m` is invertible over the integers.
pub fn is_isometry(l: &IntegerLattice, m: &IntMatrix) -> Result<bool, IsometryError> {
    check_dims(l, m)?;
    Ok(l.gram().congruence(m) == *l.gram() && m.is_unimodular())
}

fn check_dims(l: &IntegerLattice, m: &IntMatrix) -> Result<(), IsometryError> {
    if m.nrows() != l.rank() || m.ncols() != l.rank() {
        return Err(IsometryError::DimensionMismatch { rows: m.nrows(), cols: m.ncols(), rank: l.rank() });
    }
    Ok(())
}

/// An isometry of a fixed lattice, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Isometry {
    pub matrix: IntMatrix,
}

impl Isometry {
    pub fn new(l: &IntegerLattice, matrix: IntMatrix) -> Result<Self, IsometryError> {
        if !is_isometry(l, &matrix)? {
            return Err(IsometryError::NotAnIsometry);
        }
        Ok(Isometry { matrix })
    }
}

/// Pull-back matrix of a Klein automorphism together with its sign. The
/// dagger action is `sign * matrix`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KleinIsometry {
    pub matrix: IntMatrix,
    #[serde(default = "plus")]
    pub sign: Sign,
}

impl KleinIsometry {
    pub fn new(matrix: IntMatrix, sign: Sign) -> Self {
        KleinIsometry { matrix, sign }
    }

    pub fn holomorphic(matrix: IntMatrix) -> Self {
        KleinIsometry { matrix, sign: Sign::Plus }
    }

    pub fn identity(n: usize) -> Self {
        KleinIsometry::holomorphic(IntMatrix::identity(n))
    }

    pub fn dagger_matrix(&self) -> IntMatrix {
        match self.sign {
            Sign::Plus => self.matrix.clone(),
            Sign::Minus => self.matrix.neg(),
        }
    }

    pub fn inverse(&self) -> Option<KleinIsometry> {
        Some(KleinIsometry { matrix: self.matrix.inverse_unimodular()?, sign: self.sign })
    }

    pub fn is_isometry_of(&self, l: &IntegerLattice) -> Result<bool, IsometryError> {
        is_isometry(l, &self.matrix)
    }
}

pub fn dagger_apply(k: &KleinIsometry, v: &[Int]) -> IntVec {
    k.dagger_matrix().mul_vec(v)
}

pub fn dagger_apply_rat(k: &KleinIsometry, v: &[Rat]) -> Vec<Rat> {
    k.dagger_matrix().to_rat().mul_vec(v)
}

/// The Klein isometry of the composite `f ∘ g`. Pull-backs reverse order,
/// so its matrix is `g.matrix * f.matrix` and its dagger is `g† f†`.
pub fn dagger_compose(f: &KleinIsometry, g: &KleinIsometry) -> KleinIsometry {
    KleinIsometry { matrix: g.matrix.mul(&f.matrix), sign: f.sign.times(g.sign) }
}

/// Finitely many generators with a bound for word enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedGroup {
    pub generators: Vec<KleinIsometry>,
    pub word_bound: usize,
}

impl GeneratedGroup {
    pub fn new(generators: Vec<KleinIsometry>, word_bound: usize) -> Self {
        GeneratedGroup { generators, word_bound }
    }

    pub fn holomorphic(generators: Vec<IntMatrix>, word_bound: usize) -> Self {
        GeneratedGroup {
            generators: generators.into_iter().map(KleinIsometry::holomorphic).collect(),
            word_bound,
        }
    }

    /// Matrices by which the group acts (dagger matrices).
    pub fn action_matrices(&self) -> Vec<IntMatrix> {
        self.generators.iter().map(|g| g.dagger_matrix()).collect()
    }

    pub fn check_on(&self, l: &IntegerLattice) -> Result<(), IsometryError> {
        for g in &self.generators {
            if !g.is_isometry_of(l)? {
                return Err(IsometryError::NotAnIsometry);
            }
        }
        Ok(())
    }

    pub fn ball(&self, dim: usize, depth: usize) -> WordBall {
        WordBall::new(dim, &self.action_matrices(), depth)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.dagger_matrix().is_identity())
    }
}

/// The group used for stabilizer questions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gamma {
    /// All isometries preserving the positive component.
    OrthogonalPlus,
    Generated(GeneratedGroup),
}

/// Whether a finite answer is proved or only verified up to a word bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Completeness {
    Certified,
    BoundedSearch { depth: usize },
}

/// One element of a word ball with the length of a shortest word producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallElement {
    pub matrix: IntMatrix,
    pub length: usize,
    /// Indices into the symmetric generating set (generators then inverses).
    pub word: Vec<usize>,
}

/// All group elements of word length at most `depth`, in breadth-first order.
#[derive(Debug, Clone)]
pub struct WordBall {
    pub elements: Vec<BallElement>,
    index: HashMap<IntMatrix, usize>,
    pub symmetric_generators: Vec<IntMatrix>,
}

impl WordBall {
    pub fn new(n: usize, generators: &[IntMatrix], depth: usize) -> Self {
        let mut sym: Vec<IntMatrix> = Vec::new();
        for g in generators {
            if !sym.contains(g) {
                sym.push(g.clone());
            }
        }
        for g in generators {
            let inv = g.inverse_unimodular().expect("generators are unimodular");
            if !sym.contains(&inv) {
                sym.push(inv);
            }
        }
        let id = IntMatrix::identity(n);
        let mut elements = vec![BallElement { matrix: id.clone(), length: 0, word: Vec::new() }];
        let mut index = HashMap::new();
        index.insert(id, 0);
        let mut frontier = vec![0usize];
        for len in 1..=depth {
            let mut next = Vec::new();
            for &e in &frontier {
                for (s, g) in sym.iter().enumerate() {
                    let m = g.mul(&elements[e].matrix);
                    if index.contains_key(&m) {
                        continue;
                    }
                    let mut word = vec![s];
                    word.extend_from_slice(&elements[e].word);
                    index.insert(m.clone(), elements.len());
                    next.push(elements.len());
                    elements.push(BallElement { matrix: m, length: len, word });
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        WordBall { elements, index, symmetric_generators: sym }
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.index.contains_key(m)
    }

    pub fn get(&self, m: &IntMatrix) -> Option<&BallElement> {
        self.index.get(m).map(|&i| &self.elements[i])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn matrices(&self) -> impl Iterator<Item = &IntMatrix> {
        self.elements.iter().map(|e| &e.matrix)
    }

    pub fn up_to(&self, depth: usize) -> impl Iterator<Item = &BallElement> {
        self.elements.iter().filter(move |e| e.length <= depth)
    }
}

/// Closure of the generators under products, if it has at most `cap` elements.
pub fn finite_closure(n: usize, generators: &[IntMatrix], cap: usize) -> Option<Vec<IntMatrix>> {
    let id = IntMatrix::identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut all = vec![id];
    let mut i = 0;
    while i < all.len() {
        for g in generators {
            let m = g.mul(&all[i]);
            if seen.insert(m.clone()) {
                all.push(m);
                if all.len() > cap {
                    return None;
                }
            }
        }
        i += 1;
    }
    all.sort();
    Some(all)
}

// ---------------------------------------------------------------------------
// Torsion detection

/// Characteristic polynomial `det(x I - m)`, coefficients from degree 0 up.
pub fn characteristic_polynomial(m: &IntMatrix) -> Vec<Int> {
    let n = m.nrows();
    let a = m.to_rat();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk: RatMatrix = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = a.mul(&mk).add(&Matrix::identity(n).scale(&coeffs[n - k + 1]));
        coeffs[n - k] = -a.mul(&mk).trace() / Rat::from_integer(Int::from(k as i64));
    }
    coeffs.iter().map(|c| c.to_integer()).collect()
}

fn poly_trim(mut p: Vec<Int>) -> Vec<Int> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Division by a monic polynomial: `(quotient, remainder)`.
fn poly_divmod_monic(p: &[Int], d: &[Int]) -> (Vec<Int>, Vec<Int>) {
    let mut r = p.to_vec();
    let dd = d.len() - 1;
    if r.len() < d.len() {
        return (vec![Int::zero()], poly_trim(r));
    }
    let mut q = vec![Int::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in d.iter().enumerate() {
            r[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    (poly_trim(q), poly_trim(r[..dd.max(1)].to_vec()))
}

fn euler_phi(mut k: u64) -> u64 {
    let mut result = k;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            while k.is_multiple_of(p) {
                k /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if k > 1 {
        result -= result / k;
    }
    result
}

/// Cyclotomic polynomial `Φ_k`.
pub fn cyclotomic(k: u64) -> Vec<Int> {
    let mut p = vec![Int::zero(); k as usize + 1];
    p[0] = -Int::one();
    p[k as usize] = Int::one();
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = poly_divmod_monic(&p, &cyclotomic(d)).0;
        }
    }
    p
}

/// Order of `m` if finite. Uses the cyclotomic factorization of the
/// characteristic polynomial and confirms by exact powering.
pub fn finite_order(m: &IntMatrix) -> Option<u64> {
    let n = m.nrows() as u64;
    if n == 0 {
        return Some(1);
    }
    let mut p = characteristic_polynomial(m);
    let mut lcm: u64 = 1;
    let mut k = 1;
    while p.len() > 1 && k <= 2 * n * n + 2 {
        if euler_phi(k) <= n {
            let c = cyclotomic(k);
            loop {
                let (q, r) = poly_divmod_monic(&p, &c);
                if r.iter().all(|x| x.is_zero()) && p.len() >= c.len() {
                    p = q;
                    lcm = lcm.lcm(&k);
                } else {
                    break;
                }
            }
        }
        k += 1;
    }
    if p.len() > 1 || !m.pow(lcm).is_identity() {
        return None;
    }
    let mut order = lcm;
    for d in (1..=lcm).filter(|d| lcm.is_multiple_of(*d)) {
        if m.pow(d).is_identity() {
            order = d;
            break;
        }
    }
    Some(order)
}

// ---------------------------------------------------------------------------
// Definite lattices

/// Exact enumeration of `{v : v^T G v = c}` for positive definite `G`.
pub fn vectors_of_norm(g: &IntMatrix, c: &Int) -> Vec<IntVec> {
    let n = g.nrows();
    if c.is_negative() {
        return Vec::new();
    }
    if n == 0 {
        return if c.is_zero() { vec![Vec::new()] } else { Vec::new() };
    }
    // q(v) = sum_i d_i (v_i + sum_{j>i} l_ji v_j)^2
    let a = g.to_rat();
    let mut d = vec![Rat::zero(); n];
    let mut l: RatMatrix = Matrix::identity(n);
    for i in 0..n {
        let mut di = a.get(i, i).clone();
        for k in 0..i {
            di -= l.get(i, k) * l.get(i, k) * &d[k];
        }
        d[i] = di;
        for j in i + 1..n {
            let mut v = a.get(j, i).clone();
            for k in 0..i {
                v -= l.get(j, k) * l.get(i, k) * &d[k];
            }
            l.set(j, i, v / &d[i]);
        }
    }
    let target = Rat::from_integer(c.clone());
    let mut out = Vec::new();
    let mut v = vec![Int::zero(); n];
    enumerate_level(n - 1, &d, &l, &target, &Rat::zero(), &mut v, &mut out);
    out
}

fn enumerate_level(
    i: usize,
    d: &[Rat],
    l: &RatMatrix,
    target: &Rat,
    used: &Rat,
    v: &mut IntVec,
    out: &mut Vec<IntVec>,
) {
    let n = d.len();
    let mut shift = Rat::zero();
    for j in i + 1..n {
        shift += l.get(j, i) * Rat::from_integer(v[j].clone());
    }
    let room = (target - used) / &d[i];
    if room.is_negative() {
        return;
    }
    let root = room.ceil().to_integer().sqrt() + Int::one();
    let center = -shift.clone();
    let lo = center.floor().to_integer() - &root;
    let hi = center.ceil().to_integer() + &root;
    let mut t = lo;
    while t <= hi {
        let x = Rat::from_integer(t.clone()) + &shift;
        let term = &d[i] * &x * &x;
        let total = used + &term;
        if total <= *target {
            v[i] = t.clone();
            if i == 0 {
                if total == *target {
                    out.push(v.clone());
                }
            } else {
                enumerate_level(i - 1, d, l, target, &total, v, out);
            }
        }
        t += 1;
    }
    v[i] = Int::zero();
}

/// Search tables in machine integers for the backtracking kernel.
struct DefiniteSearch {
    n: usize,
    gram: Vec<Vec<i64>>,
    /// Candidate images of each basis vector.
    candidates: Vec<Vec<usize>>,
    vectors: Vec<Vec<i64>>,
    /// `gram * vectors[k]`.
    dual: Vec<Vec<i64>>,
}

impl DefiniteSearch {
    fn new(l: &IntegerLattice) -> Result<Self, IsometryError> {
        let g = if l.is_positive_definite() {
            l.gram().clone()
        } else if l.is_negative_definite() {
            l.gram().neg()
        } else {
            return Err(IsometryError::NotDefinite);
        };
        let n = g.nrows();
        let to64 = |x: &Int| x.to_i64().ok_or(IsometryError::EntriesTooLarge);
        let gram: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| to64(g.get(i, j))).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        let mut by_norm: HashMap<i64, Vec<usize>> = HashMap::new();
        let mut vectors = Vec::new();
        let mut dual = Vec::new();
        let mut candidates = Vec::new();
        for i in 0..n {
            let c = gram[i][i];
            if let Some(list) = by_norm.get(&c) {
                candidates.push(list.clone());
                continue;
            }
            let mut list = Vec::new();
            for v in vectors_of_norm(&g, &Int::from(c)) {
                let v64: Vec<i64> = v.iter().map(to64).collect::<Result<_, _>>()?;
                let gv: Vec<i64> = (0..n).map(|r| (0..n).map(|s| gram[r][s] * v64[s]).sum()).collect();
                list.push(vectors.len());
                vectors.push(v64);
                dual.push(gv);
            }
            by_norm.insert(c, list.clone());
            candidates.push(list);
        }
        Ok(DefiniteSearch { n, gram, candidates, vectors, dual })
    }

    fn compatible(&self, chosen: &[usize], col: usize, cand: usize) -> bool {
        chosen.iter().enumerate().all(|(i, &w)| {
            let p: i64 = self.vectors[cand].iter().zip(&self.dual[w]).map(|(a, b)| a * b).sum();
            p == self.gram[i][col]
        })
    }

    fn extend(&self, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let col = chosen.len();
        if col == self.n {
            return visit(chosen);
        }
        for &c in &self.candidates[col] {
            if self.compatible(chosen, col, c) {
                chosen.push(c);
                let stop = self.extend(chosen, visit);
                chosen.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }

    fn count_from(&self, prefix: &[usize]) -> u128 {
        let mut count = 0u128;
        let mut chosen = prefix.to_vec();
        self.extend(&mut chosen, &mut |_| {
            count += 1;
            false
        });
        count
    }

    fn has_completion(&self, prefix: &[usize]) -> bool {
        let mut chosen = prefix.to_vec();
        self.extend(&mut chosen, &mut |_| true)
    }

    fn matrix_of(&self, chosen: &[usize]) -> IntMatrix {
        Matrix::from_fn(self.n, self.n, |i, j| Int::from(self.vectors[chosen[j]][i]))
    }

    fn basis_index(&self, j: usize) -> Option<usize> {
        self.candidates[j].iter().copied().find(|&c| {
            self.vectors[c].iter().enumerate().all(|(i, &x)| x == if i == j { 1 } else { 0 })
        })
    }
}

/// Order of `O(L)` for a definite lattice by the orbit-stabilizer chain:
/// `|S_{j-1}| = |orbit of e_j under S_{j-1}| * |S_j|` where `S_j` fixes
/// `e_1..e_j`. Orbit points are the candidates admitting a completion.
pub fn definite_group_order(l: &IntegerLattice) -> Result<u128, IsometryError> {
    let s = DefiniteSearch::new(l)?;
    let mut order = 1u128;
    let mut prefix = Vec::new();
    for j in 0..s.n {
        let orbit = s.candidates[j]
            .par_iter()
            .filter(|&&c| {
                s.compatible(&prefix, j, c) && {
                    let mut p = prefix.clone();
                    p.push(c);
                    s.has_completion(&p)
                }
            })
            .count() as u128;
        order *= orbit;
        prefix.push(s.basis_index(j).expect("basis vector is its own candidate"));
    }
    Ok(order)
}

/// Number of isometries found by plain backtracking (every leaf visited).
pub fn count_definite_isometries(l: &IntegerLattice) -> Result<u128, IsometryError> {
    let s = DefiniteSearch::new(l)?;
    if s.n == 0 {
        return Ok(1);
    }
    Ok(s.candidates[0].par_iter().map(|&c| s.count_from(&[c])).sum())
}

/// Groups larger than this are counted but not listed.
pub const MAX_LISTED_GROUP: u128 = 200_000;

/// The full finite group `O(L)` of a definite lattice, sorted lexicographically.
pub fn isometry_group_definite(l: &IntegerLattice) -> Result<Vec<IntMatrix>, IsometryError> {
    let order = definite_group_order(l)?;
    if order > MAX_LISTED_GROUP {
        return Err(IsometryError::GroupTooLarge { order });
    }
    let s = DefiniteSearch::new(l)?;
    if s.n == 0 {
        return Ok(vec![IntMatrix::identity(0)]);
    }
    let mut all: Vec<IntMatrix> = s.candidates[0]
        .par_iter()
        .flat_map_iter(|&c| {
            let mut found = Vec::new();
            let mut chosen = vec![c];
            s.extend(&mut chosen, &mut |leaf| {
                found.push(s.matrix_of(leaf));
                false
            });
            found
        })
        .collect();
    all.sort();
    Ok(all)
}

// ---------------------------------------------------------------------------
// Pointwise fixing

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FixVerdict {
    IdentityOnly,
    Counterexample { matrix: IntMatrix },
    Undecided { reason: String },
}

/// Default coefficient bound for the corank >= 2 counterexample search.
pub const FIX_SEARCH_BOUND: i64 = 1;

/// Decides whether every isometry of `l` that is the identity on `n` is the
/// identity. Corank one is decided exactly by the block system on the last
/// column; larger corank runs a bounded search for reflections and Eichler
/// transvections fixing `n` and otherwise reports `Undecided`.
pub fn fixes_pointwise_implies_identity(
    l: &IntegerLattice,
    n: &Sublattice,
) -> Result<FixVerdict, IsometryError> {
    fixes_pointwise_with_bound(l, n, FIX_SEARCH_BOUND)
}

pub fn fixes_pointwise_with_bound(
    l: &IntegerLattice,
    n: &Sublattice,
    bound: i64,
) -> Result<FixVerdict, IsometryError> {
    if n.ambient_rank() != l.rank() {
        return Err(IsometryError::DimensionMismatch { rows: n.ambient_rank(), cols: n.ambient_rank(), rank: l.rank() });
    }
    if !n.is_primitive() {
        return Err(IsometryError::NotPrimitive);
    }
    match n.corank() {
        0 => Ok(FixVerdict::IdentityOnly),
        1 => Ok(corank_one(l, n)),
        c => {
            if let Some(m) = search_fixing_isometry(l, n, bound) {
                return Ok(FixVerdict::Counterexample { matrix: m });
            }
            Ok(FixVerdict::Undecided {
                reason: format!("corank {c}; no reflection or transvection with coefficients in [-{bound}, {bound}] fixes the sublattice"),
            })
        }
    }
}

/// Completes a primitive basis to a basis of the ambient lattice.
pub fn complete_basis(n: &Sublattice) -> Vec<IntVec> {
    let dim = n.ambient_rank();
    if n.rank() == 0 {
        return (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
    }
    let s = smith(&Matrix::from_rows(n.basis()));
    let vinv = s.v.inverse_unimodular().expect("unimodular");
    (n.rank()..dim).map(|i| vinv.row(i).to_vec()).collect()
}

/// Basis `b_1..b_k, h`; an isometry fixing N has last column `(w, z)` with
/// `A w = (1 - z) a` and `z = ±1`, where `A` is the Gram matrix of N and `a`
/// the pairings of N with `h`. `z = 1` needs `w ∈ rad(N) ∩ a^⊥`; `z = -1`
/// needs `A w = 2a`, which then satisfies the norm condition automatically.
fn corank_one(l: &IntegerLattice, n: &Sublattice) -> FixVerdict {
    let k = n.rank();
    let h = complete_basis(n).remove(0);
    let mut cols = n.basis().to_vec();
    cols.push(h);
    let p = Matrix::from_cols(l.rank(), &cols);
    let g = l.gram().congruence(&p);
    let idx: Vec<usize> = (0..k).collect();
    let a_block = g.select(&idx, &idx);
    let a: IntVec = (0..k).map(|i| g.get(i, k).clone()).collect();

    let build = |w: &IntVec, z: i64| {
        let mut mp = IntMatrix::identity(k + 1);
        for i in 0..k {
            mp.set(i, k, w[i].clone());
        }
        mp.set(k, k, Int::from(z));
        let pinv = p.inverse_unimodular().expect("completed basis is unimodular");
        p.mul(&mp).mul(&pinv)
    };

    let stacked = if k == 0 { Matrix::zeros(0, 0) } else { a_block.vstack(&Matrix::from_rows(std::slice::from_ref(&a))) };
    if k > 0 {
        if let Some(w) = smith::integer_kernel(&stacked).into_iter().next() {
            return FixVerdict::Counterexample { matrix: build(&w, 1) };
        }
    }
    let two_a: IntVec = a.iter().map(|x| x * 2).collect();
    let w = if k == 0 { Some(Vec::new()) } else { smith::solve_integer(&a_block, &two_a) };
    if let Some(w) = w {
        return FixVerdict::Counterexample { matrix: build(&w, -1) };
    }
    FixVerdict::IdentityOnly
}

fn fixes(l: &IntegerLattice, n: &Sublattice, m: &IntMatrix) -> bool {
    !m.is_identity()
        && is_isometry(l, m).unwrap_or(false)
        && n.basis().iter().all(|b| &m.mul_vec(b) == b)
}

fn search_fixing_isometry(l: &IntegerLattice, n: &Sublattice, bound: i64) -> Option<IntMatrix> {
    let perp = l.orthogonal_complement(n);
    let dim = l.rank();
    let basis = perp.basis();
    let mut vectors = Vec::new();
    let mut coeffs = vec![-bound; basis.len()];
    if basis.is_empty() {
        return None;
    }
    loop {
        let v: IntVec = (0..dim)
            .map(|i| basis.iter().zip(&coeffs).fold(Int::zero(), |acc, (b, &c)| acc + &b[i] * c))
            .collect();
        if !num::is_zero_vec(&v) {
            vectors.push(num::primitive_unsigned(&v));
        }
        let mut i = 0;
        while i < coeffs.len() && coeffs[i] == bound {
            coeffs[i] = -bound;
            i += 1;
        }
        if i == coeffs.len() {
            break;
        }
        coeffs[i] += 1;
    }
    vectors.sort();
    vectors.dedup();

    // Unipotent candidates first, then reflections.
    let isotropic: Vec<&IntVec> = vectors.iter().filter(|v| l.norm(v).is_zero()).collect();
    for e in isotropic {
        for a in &vectors {
            if !l.pairing(e, a).is_zero() {
                continue;
            }
            for sign in [1i64, -1] {
                let a: IntVec = a.iter().map(|x| x * sign).collect();
                if let Some(m) = eichler_transvection(l, e, &a) {
                    if fixes(l, n, &m) {
                        return Some(m);
                    }
                }
            }
        }
    }
    let g = l.gram().to_rat();
    let id: RatMatrix = Matrix::identity(dim);
    for r in &vectors {
        let q = l.norm(r);
        if q.is_zero() {
            continue;
        }
        // x - 2<x,r>/q(r) r
        let rr = num::to_rat_vec(r);
        let gr = g.vec_mul(&rr);
        let qr = Rat::from_integer(q);
        let refl = Matrix::from_fn(dim, dim, |i, j| {
            id.get(i, j) - Rat::from_integer(Int::from(2)) * &gr[j] * &rr[i] / &qr
        });
        if let Some(m) = rat_matrix_to_int(&refl) {
            if fixes(l, n, &m) {
                return Some(m);
            }
        }
    }
    None
}

/// `x ↦ x + <x,e> a - <x,a> e - q(a)/2 <x,e> e` for isotropic `e ⊥ a`, if integral.
pub fn eichler_transvection(l: &IntegerLattice, e: &[Int], a: &[Int]) -> Option<IntMatrix> {
    let dim = l.rank();
    let ge = l.functional(e);
    let ga = l.functional(a);
    let half_q = Rat::new(l.norm(a), Int::from(2));
    let m = Matrix::from_fn(dim, dim, |i, j| {
        let delta = if i == j { Rat::one() } else { Rat::zero() };
        delta + Rat::from_integer(&ge[j] * &a[i]) - Rat::from_integer(&ga[j] * &e[i])
            - &half_q * Rat::from_integer(&ge[j] * &e[i])
    });
    rat_matrix_to_int(&m)
}

// ---------------------------------------------------------------------------
// Stabilizers

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerResult {
    pub elements: Vec<IntMatrix>,
    pub completeness: Completeness,
}

/// Finite isometries of `l` fixing `x`: isometries of the negative definite
/// complement of `x`, extended by the identity on `x` and kept when integral.
pub fn stabilizer_candidates(l: &IntegerLattice, x: &[Rat]) -> Result<Vec<IntMatrix>, IsometryError> {
    check_positive(l, x)?;
    let xi = num::clear_denominators(x);
    let line = Sublattice::new(l.rank(), vec![xi.clone()]).expect("nonzero vector");
    let perp = l.orthogonal_complement(&line);
    let perp_lattice = perp.restricted_lattice(l);
    let group = isometry_group_definite(&perp_lattice)?;
    let mut cols = vec![xi];
    cols.extend(perp.basis().iter().cloned());
    let p = Matrix::from_cols(l.rank(), &cols).to_rat();
    let pinv = p.inverse().expect("x and its complement span L ⊗ Q");
    let mut out = Vec::new();
    for g in group {
        let block = IntMatrix::identity(1).direct_sum(&g).to_rat();
        if let Some(m) = rat_matrix_to_int(&p.mul(&block).mul(&pinv)) {
            out.push(m);
        }
    }
    out.sort();
    Ok(out)
}

fn check_positive(l: &IntegerLattice, x: &[Rat]) -> Result<(), IsometryError> {
    if x.len() != l.rank() {
        return Err(IsometryError::DimensionMismatch { rows: x.len(), cols: 1, rank: l.rank() });
    }
    if !l.is_hyperbolic() {
        return Err(IsometryError::NotHyperbolic);
    }
    if !l.norm_rat(x).is_positive() {
        return Err(IsometryError::NonPositiveVector);
    }
    Ok(())
}

/// Largest group closure attempted when deciding membership exactly.
pub const FINITE_CLOSURE_CAP: usize = 5_000;

/// How membership in a generated group is decided.
pub enum MembershipOracle {
    /// The group is finite and listed.
    Finite(HashSet<IntMatrix>),
    /// Infinite cyclic: the only element of finite order is the identity.
    TorsionFree,
    Bounded(WordBall),
}

impl MembershipOracle {
    pub fn for_group(dim: usize, g: &GeneratedGroup) -> Self {
        let gens = g.action_matrices();
        if let Some(all) = finite_closure(dim, &gens, FINITE_CLOSURE_CAP) {
            return MembershipOracle::Finite(all.into_iter().collect());
        }
        if gens.len() == 1 && finite_order(&gens[0]).is_none() {
            return MembershipOracle::TorsionFree;
        }
        MembershipOracle::Bounded(g.ball(dim, g.word_bound))
    }

    /// Membership of an element of finite order.
    pub fn contains_torsion(&self, m: &IntMatrix) -> bool {
        match self {
            MembershipOracle::Finite(s) => s.contains(m),
            MembershipOracle::TorsionFree => m.is_identity(),
            MembershipOracle::Bounded(b) => b.contains(m),
        }
    }

    pub fn completeness(&self, g: &GeneratedGroup) -> Completeness {
        match self {
            MembershipOracle::Bounded(_) => Completeness::BoundedSearch { depth: g.word_bound },
            _ => Completeness::Certified,
        }
    }
}

pub fn stabilizer(l: &IntegerLattice, gamma: &Gamma, x: &[Rat]) -> Result<StabilizerResult, IsometryError> {
    let candidates = stabilizer_candidates(l, x)?;
    match gamma {
        Gamma::OrthogonalPlus => Ok(StabilizerResult { elements: candidates, completeness: Completeness::Certified }),
        Gamma::Generated(g) => {
            g.check_on(l)?;
            if candidates.len() == 1 {
                return Ok(StabilizerResult { elements: candidates, completeness: Completeness::Certified });
            }
            let oracle = MembershipOracle::for_group(l.rank(), g);
            let elements = candidates.into_iter().filter(|m| oracle.contains_torsion(m)).collect();
            Ok(StabilizerResult { elements, completeness: oracle.completeness(g) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtin;
    use crate::num::{int, int_vec, rat_vec};

    #[test]
    fn characteristic_polynomial_and_orders() {
        let pell = IntMatrix::from_i64(&[&[3, 4], &[2, 3]]);
        assert_eq!(characteristic_polynomial(&pell), vec![int(1), int(-6), int(1)]);
        assert_eq!(finite_order(&pell), None);
        let rot = IntMatrix::from_i64(&[&[0, -1], &[1, -1]]);
        assert_eq!(finite_order(&rot), Some(3));
        let shear = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(finite_order(&shear), None);
        let minus = IntMatrix::from_i64(&[&[-1, 1], &[0, 1]]);
        assert_eq!(finite_order(&minus), Some(2));
        assert_eq!(cyclotomic(6), vec![int(1), int(-1), int(1)]);
    }

    #[test]
    fn norm_vectors_of_a2() {
        let a2 = builtin("A2").unwrap();
        assert_eq!(vectors_of_norm(a2.gram(), &int(2)).len(), 6);
        let e8 = builtin("E8").unwrap();
        assert_eq!(vectors_of_norm(e8.gram(), &int(2)).len(), 240);
    }

    #[test]
    fn small_definite_groups() {
        assert_eq!(isometry_group_definite(&IntegerLattice::diagonal(&[-2])).unwrap().len(), 2);
        assert_eq!(isometry_group_definite(&builtin("A2").unwrap()).unwrap().len(), 12);
        assert_eq!(definite_group_order(&builtin("A2(-1)").unwrap()).unwrap(), 12);
        assert_eq!(count_definite_isometries(&builtin("A3").unwrap()).unwrap(), 48);
        assert_eq!(
            isometry_group_definite(&builtin("U").unwrap()),
            Err(IsometryError::NotDefinite)
        );
    }

    #[test]
    fn corank_one_block_argument() {
        let l = IntegerLattice::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]).unwrap();
        let n = Sublattice::new(3, vec![int_vec(&[1, 0, 0]), int_vec(&[0, 0, 1])]).unwrap();
        assert_eq!(fixes_pointwise_implies_identity(&l, &n).unwrap(), FixVerdict::IdentityOnly);
        // <2> + <2>: the reflection in e2 fixes e1
        let l = IntegerLattice::diagonal(&[2, 2]);
        let n = Sublattice::new(2, vec![int_vec(&[1, 0])]).unwrap();
        match fixes_pointwise_implies_identity(&l, &n).unwrap() {
            FixVerdict::Counterexample { matrix } => {
                assert!(is_isometry(&l, &matrix).unwrap());
                assert_eq!(matrix, IntMatrix::from_i64(&[&[1, 0], &[0, -1]]));
            }
            other => panic!("{other:?}"),
        }
        let n = Sublattice::new(2, vec![int_vec(&[2, 0])]).unwrap();
        assert_eq!(fixes_pointwise_implies_identity(&l, &n), Err(IsometryError::NotPrimitive));
    }

    #[test]
    fn transvection_in_two_hyperbolic_planes() {
        let l = builtin("U+U").unwrap();
        let n = Sublattice::new(4, vec![int_vec(&[1, 0, 0, 0])]).unwrap();
        match fixes_pointwise_implies_identity(&l, &n).unwrap() {
            FixVerdict::Counterexample { matrix } => {
                assert!(is_isometry(&l, &matrix).unwrap());
                assert!(!matrix.is_identity());
                let d = matrix.sub(&IntMatrix::identity(4));
                assert!(d.mul(&d).mul(&d).is_zero(), "unipotent");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dagger_signs_compose() {
        let anti = KleinIsometry::new(IntMatrix::identity(2), Sign::Minus);
        let twice = dagger_compose(&anti, &anti);
        assert_eq!(twice, KleinIsometry::identity(2));
        assert_eq!(dagger_apply(&anti, &int_vec(&[1, 2])), int_vec(&[-1, -2]));
    }

    #[test]
    fn stabilizer_of_diagonal_in_u() {
        let u = builtin("U").unwrap();
        let s = stabilizer(&u, &Gamma::OrthogonalPlus, &rat_vec(&[1, 1])).unwrap();
        assert_eq!(s.elements.len(), 2);
        assert_eq!(s.completeness, Completeness::Certified);
        let pell = GeneratedGroup::holomorphic(vec![IntMatrix::from_i64(&[&[3, 4], &[2, 3]])], 20);
        let l = IntegerLattice::diagonal(&[2, -4]);
        let s = stabilizer(&l, &Gamma::Generated(pell), &rat_vec(&[1, 0])).unwrap();
        assert_eq!(s.elements, vec![IntMatrix::identity(2)]);
        assert_eq!(s.completeness, Completeness::Certified);
    }
}
