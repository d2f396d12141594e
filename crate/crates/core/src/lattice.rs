//! Integral quadratic lattices: signatures, radicals, complements,
//! saturation, discriminant groups and the hyperbolic / elliptic / parabolic
//! trichotomy.

use crate::matrix::{IntMatrix, Matrix, RatMatrix};
use crate::num::{self, rat_from_int, Int, IntVec, Rat, RatVec};
use crate::smith::{self, smith};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("declared rank {declared} does not match a {actual}x{actual} Gram matrix")]
    RankMismatch { declared: usize, actual: usize },
    #[error("lattice is degenerate (det = 0)")]
    DegenerateLattice,
    #[error("vector of length {got} in a rank-{expected} lattice")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sublattice basis vectors are linearly dependent")]
    DependentBasis,
    #[error("unknown built-in lattice `{0}`")]
    UnknownBuiltin(String),
    #[error("rescaling factor must be nonzero")]
    ZeroScale,
}

/// A free abelian group of finite rank with an integral symmetric bilinear form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    gram: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    rank: usize,
    gram: IntMatrix,
}

impl Serialize for IntegerLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LatticeJson { rank: self.rank(), gram: self.gram.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = LatticeJson::deserialize(d)?;
        if raw.gram.nrows() != raw.rank {
            return Err(serde::de::Error::custom(LatticeError::RankMismatch {
                declared: raw.rank,
                actual: raw.gram.nrows(),
            }));
        }
        IntegerLattice::new(raw.gram).map_err(serde::de::Error::custom)
    }
}

/// Counts of positive, zero and negative squares of the form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, zero: usize, negative: usize) -> Self {
        Signature { positive, zero, negative }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.zero + self.negative
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.zero, self.negative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeType {
    Hyperbolic,
    Elliptic,
    Parabolic,
    Other,
}

/// A sublattice given by a basis in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    #[serde(skip)]
    ambient_rank: usize,
    #[serde(with = "num::json_int_rows")]
    basis: Vec<IntVec>,
}

impl Sublattice {
    /// Checks lengths and linear independence.
    pub fn new(ambient_rank: usize, basis: Vec<IntVec>) -> Result<Self, LatticeError> {
        if let Some(v) = basis.iter().find(|v| v.len() != ambient_rank) {
            return Err(LatticeError::DimensionMismatch { expected: ambient_rank, got: v.len() });
        }
        if crate::matrix::rank_of_vectors(ambient_rank, &basis) != basis.len() {
            return Err(LatticeError::DependentBasis);
        }
        Ok(Sublattice { ambient_rank, basis })
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Sublattice { ambient_rank, basis: Vec::new() }
    }

    /// Re-attaches the ambient rank after deserialization.
    pub fn with_ambient_rank(mut self, ambient_rank: usize) -> Result<Self, LatticeError> {
        self.ambient_rank = ambient_rank;
        Sublattice::new(ambient_rank, self.basis)
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn corank(&self) -> usize {
        self.ambient_rank - self.basis.len()
    }

    /// Whether the quotient `ambient / span` is torsion-free.
    pub fn is_primitive(&self) -> bool {
        smith::is_saturated(&self.basis)
    }

    /// Gram matrix of the restricted form in the stored basis.
    pub fn gram_in(&self, l: &IntegerLattice) -> IntMatrix {
        let k = self.basis.len();
        Matrix::from_fn(k, k, |i, j| l.pairing(&self.basis[i], &self.basis[j]))
    }

    pub fn restricted_lattice(&self, l: &IntegerLattice) -> IntegerLattice {
        IntegerLattice { gram: self.gram_in(l) }
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> IntMatrix {
        Matrix::from_cols(self.ambient_rank, &self.basis)
    }

    /// Whether `v` lies in the rational span of the basis.
    pub fn spans_rationally(&self, v: &[Int]) -> bool {
        if self.basis.is_empty() {
            return num::is_zero_vec(v);
        }
        self.basis_matrix().to_rat().solve(&num::to_rat_vec(v)).is_some()
    }

    /// Whether `v` is an integral combination of the basis.
    pub fn contains(&self, v: &[Int]) -> bool {
        if self.basis.is_empty() {
            return num::is_zero_vec(v);
        }
        smith::solve_integer(&self.basis_matrix(), v).is_some()
    }

    /// Same subgroup of the ambient lattice, regardless of basis.
    pub fn same_span(&self, other: &Sublattice) -> bool {
        self.rank() == other.rank()
            && self.basis.iter().all(|v| other.contains(v))
            && other.basis.iter().all(|v| self.contains(v))
    }
}

/// Finite abelian group `L*/L` with generators lifted to `L ⊗ Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantGroup {
    #[serde(with = "num::json_int_vec")]
    pub invariant_factors: Vec<Int>,
    /// Row `i` is a rational vector (lattice coordinates) generating the
    /// `i`-th cyclic factor.
    #[serde(serialize_with = "ser_rat_rows", deserialize_with = "de_rat_rows")]
    pub lift_matrix: Vec<RatVec>,
    /// `coordinate_map * gram * w` gives the coordinates of a dual vector `w`
    /// with respect to the generators, read modulo the invariant factors.
    #[serde(skip)]
    coordinate_map: Option<IntMatrix>,
}

fn ser_rat_rows<S: serde::Serializer>(rows: &[RatVec], s: S) -> Result<S::Ok, S::Error> {
    let w: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(num::format_rat).collect()).collect();
    w.serialize(s)
}

fn de_rat_rows<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<RatVec>, D::Error> {
    let w: Vec<Vec<num::OwnedJsonRat>> = Vec::deserialize(d)?;
    Ok(w.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
}

impl DiscriminantGroup {
    pub fn order(&self) -> Int {
        self.invariant_factors.iter().fold(Int::one(), |a, d| a * d)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Coordinates of a dual vector `w ∈ L*` in terms of the generators,
    /// reduced into `[0, d_i)`.
    pub fn coordinates(&self, l: &IntegerLattice, w: &[Rat]) -> Option<IntVec> {
        let map = self.coordinate_map.as_ref()?;
        let gw = l.gram.to_rat().mul_vec(w);
        let gw = num::to_int_vec(&gw)?;
        let c = map.mul_vec(&gw);
        Some(c.iter().zip(&self.invariant_factors).map(|(x, d)| x.mod_floor(d)).collect())
    }

    /// Matrix of the induced action of an isometry `m` (acting on column
    /// vectors) on the discriminant group: column `j` holds the coordinates of
    /// `m · g_j`.
    pub fn induced_action(&self, l: &IntegerLattice, m: &IntMatrix) -> Option<IntMatrix> {
        let mr = m.to_rat();
        let cols: Option<Vec<IntVec>> = self
            .lift_matrix
            .iter()
            .map(|g| self.coordinates(l, &mr.mul_vec(g)))
            .collect();
        Some(Matrix::from_cols(self.invariant_factors.len(), &cols?))
    }

    /// Whether `m` acts on the discriminant group as multiplication by `s`.
    pub fn acts_as_scalar(&self, l: &IntegerLattice, m: &IntMatrix, s: i64) -> bool {
        let Some(action) = self.induced_action(l, m) else {
            return false;
        };
        let k = self.invariant_factors.len();
        (0..k).all(|i| {
            (0..k).all(|j| {
                let want = if i == j { Int::from(s) } else { Int::zero() };
                (action.get(i, j) - want).is_multiple_of(&self.invariant_factors[i])
            })
        })
    }
}

impl IntegerLattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(IntegerLattice { gram })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        IntegerLattice::new(IntMatrix::from_i64(rows))
    }

    /// Diagonal lattice `<d_1> ⊕ ... ⊕ <d_n>`.
    pub fn diagonal(d: &[i64]) -> Self {
        IntegerLattice { gram: Matrix::diagonal(&num::int_vec(d)) }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn pairing(&self, u: &[Int], v: &[Int]) -> Int {
        self.gram.bilinear(u, v)
    }

    pub fn pairing_rat(&self, u: &[Rat], v: &[Rat]) -> Rat {
        self.gram.to_rat().bilinear(u, v)
    }

    pub fn norm(&self, v: &[Int]) -> Int {
        self.pairing(v, v)
    }

    pub fn norm_rat(&self, v: &[Rat]) -> Rat {
        self.pairing_rat(v, v)
    }

    /// Dual-coordinate functional `w ↦ <v, w>` as an integer row.
    pub fn functional(&self, v: &[Int]) -> IntVec {
        self.gram.vec_mul(v)
    }

    pub fn det(&self) -> Int {
        self.gram.det()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn check_vector(&self, v: &[impl Clone]) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        signature_of(&self.gram.to_rat())
    }

    pub fn classify_type(&self) -> LatticeType {
        classify_signature(&self.signature())
    }

    pub fn is_positive_definite(&self) -> bool {
        let s = self.signature();
        s.positive == self.rank()
    }

    pub fn is_negative_definite(&self) -> bool {
        let s = self.signature();
        s.negative == self.rank()
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.classify_type() == LatticeType::Hyperbolic
    }

    /// Integer kernel of the Gram matrix.
    pub fn radical(&self) -> Sublattice {
        Sublattice { ambient_rank: self.rank(), basis: smith::integer_kernel(&self.gram) }
    }

    /// `{v : <v, s> = 0 for all s in S}`; always primitive.
    pub fn orthogonal_complement(&self, s: &Sublattice) -> Sublattice {
        if s.basis.is_empty() {
            return Sublattice { ambient_rank: self.rank(), basis: identity_basis(self.rank()) };
        }
        let rows: Vec<IntVec> = s.basis.iter().map(|b| self.functional(b)).collect();
        Sublattice { ambient_rank: self.rank(), basis: smith::integer_kernel(&Matrix::from_rows(&rows)) }
    }

    /// Primitive closure `(S ⊗ Q) ∩ L`.
    pub fn saturation(&self, s: &Sublattice) -> Sublattice {
        Sublattice { ambient_rank: self.rank(), basis: smith::saturate(self.rank(), &s.basis) }
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup, LatticeError> {
        if !self.is_nondegenerate() {
            return Err(LatticeError::DegenerateLattice);
        }
        let s = smith(&self.gram);
        let n = self.rank();
        let mut factors = Vec::new();
        let mut lifts = Vec::new();
        let mut rows = Vec::new();
        for i in 0..n {
            let d = &s.diag[i];
            if d.is_one() {
                continue;
            }
            factors.push(d.clone());
            let dr = rat_from_int(d);
            lifts.push(s.v.col(i).iter().map(|x| rat_from_int(x) / &dr).collect());
            rows.push(s.u.row(i).to_vec());
        }
        let coordinate_map = if rows.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(&rows)
        };
        Ok(DiscriminantGroup {
            invariant_factors: factors,
            lift_matrix: lifts,
            coordinate_map: Some(coordinate_map),
        })
    }

    pub fn direct_sum(&self, other: &IntegerLattice) -> IntegerLattice {
        IntegerLattice { gram: self.gram.direct_sum(&other.gram) }
    }

    pub fn rescale(&self, m: i64) -> Result<IntegerLattice, LatticeError> {
        if m == 0 {
            return Err(LatticeError::ZeroScale);
        }
        Ok(IntegerLattice { gram: self.gram.scale(&Int::from(m)) })
    }

    pub fn sublattice_index(&self, s: &Sublattice) -> SublatticeIndex {
        match smith::index_in_full_lattice(self.rank(), &s.basis) {
            Some(i) => SublatticeIndex::Finite(i),
            None => SublatticeIndex::Infinite,
        }
    }

    /// Span of standard basis vectors with the given indices.
    pub fn coordinate_sublattice(&self, indices: &[usize]) -> Sublattice {
        let basis = indices
            .iter()
            .map(|&i| (0..self.rank()).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        Sublattice { ambient_rank: self.rank(), basis }
    }

    pub fn sublattice(&self, basis: Vec<IntVec>) -> Result<Sublattice, LatticeError> {
        Sublattice::new(self.rank(), basis)
    }

    pub fn builtin(name: &str) -> Result<IntegerLattice, LatticeError> {
        builtin(name)
    }
}

fn identity_basis(n: usize) -> Vec<IntVec> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SublatticeIndex {
    Finite(#[serde(with = "num::json_int")] Int),
    Infinite,
}

pub fn classify_signature(s: &Signature) -> LatticeType {
    let rho = s.rank();
    match (s.positive, s.zero, s.negative) {
        (1, 0, n) if n + 1 == rho => LatticeType::Hyperbolic,
        (0, 0, n) if n == rho => LatticeType::Elliptic,
        (0, 1, n) if n + 1 == rho => LatticeType::Parabolic,
        _ => LatticeType::Other,
    }
}

/// Congruence diagonalization over Q. When no diagonal pivot is available but
/// an off-diagonal entry is, the pair is combined so that a nonzero square
/// appears (the hyperbolic-plane case).
pub fn signature_of(g: &RatMatrix) -> Signature {
    let n = g.nrows();
    let mut a = g.clone();
    let mut sig = Signature::new(0, 0, 0);
    let mut k = 0;
    while k < n {
        if let Some(p) = (k..n).find(|&i| !a.get(i, i).is_zero()) {
            symmetric_swap(&mut a, k, p);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a.get(i, j).is_zero())
        {
            // x_i <- x_i + x_j makes the (i, i) entry 2 a_ij.
            add_symmetric(&mut a, i, j);
            symmetric_swap(&mut a, k, i);
        } else {
            sig.zero += n - k;
            break;
        }
        let piv = a.get(k, k).clone();
        for i in k + 1..n {
            let f = a.get(i, k) / &piv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = a.get(i, j) - &f * a.get(k, j);
                a.set(i, j, v);
            }
            for j in k..n {
                let v = a.get(j, i) - &f * a.get(j, k);
                a.set(j, i, v);
            }
        }
        if piv.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        k += 1;
    }
    sig
}

fn symmetric_swap(a: &mut RatMatrix, i: usize, j: usize) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
}

/// Row and column `i` += row and column `j`.
fn add_symmetric(a: &mut RatMatrix, i: usize, j: usize) {
    let n = a.nrows();
    for c in 0..n {
        let v = a.get(i, c) + a.get(j, c);
        a.set(i, c, v);
    }
    for r in 0..n {
        let v = a.get(r, i) + a.get(r, j);
        a.set(r, i, v);
    }
}

pub fn hyperbolic_plane() -> IntegerLattice {
    IntegerLattice { gram: IntMatrix::from_i64(&[&[0, 1], &[1, 0]]) }
}

/// Cartan matrix of E8 (positive definite, even, unimodular).
pub fn e8() -> IntegerLattice {
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut g = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        g.set(i, i, Int::from(2));
    }
    for (a, b) in edges {
        g.set(a, b, Int::from(-1));
        g.set(b, a, Int::from(-1));
    }
    IntegerLattice { gram: g }
}

/// Cartan matrix of A_n.
pub fn a_n(n: usize) -> IntegerLattice {
    let g = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Int::from(2)
        } else if i.abs_diff(j) == 1 {
            Int::from(-1)
        } else {
            Int::zero()
        }
    });
    IntegerLattice { gram: g }
}

/// `U^3 ⊕ E8(-1)^2`, rank 22.
pub fn k3_lattice() -> IntegerLattice {
    let u = hyperbolic_plane();
    let e = e8().rescale(-1).expect("nonzero");
    u.direct_sum(&u).direct_sum(&u).direct_sum(&e).direct_sum(&e)
}

/// Named lattices: `U`, `E8`, `E8(-1)`, `K3`, `A<n>`, `A<n>(-1)`, `<k>`,
/// and sums joined by `+`, e.g. `U+U+<-2>`.
pub fn builtin(name: &str) -> Result<IntegerLattice, LatticeError> {
    let unknown = || LatticeError::UnknownBuiltin(name.to_string());
    let name = name.trim();
    if name.contains('+') {
        let mut parts = name.split('+');
        let first = builtin(parts.next().ok_or_else(unknown)?)?;
        return parts.try_fold(first, |acc, p| Ok(acc.direct_sum(&builtin(p)?)));
    }
    if let Some(inner) = name.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
        let k: i64 = inner.trim().parse().map_err(|_| unknown())?;
        return Ok(IntegerLattice::diagonal(&[k]));
    }
    let (base, scale) = match name.strip_suffix("(-1)") {
        Some(b) => (b, -1),
        None => (name, 1),
    };
    let lat = match base {
        "U" => hyperbolic_plane(),
        "E8" => e8(),
        "K3" if scale == 1 => return Ok(k3_lattice()),
        _ => {
            let n: usize = base.strip_prefix('A').and_then(|s| s.parse().ok()).ok_or_else(unknown)?;
            if n == 0 {
                return Err(unknown());
            }
            a_n(n)
        }
    };
    lat.rescale(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, int_vec};

    #[test]
    fn named_lattices() {
        assert_eq!(builtin("U").unwrap().det(), int(-1));
        assert_eq!(builtin("E8(-1)").unwrap().det(), int(1));
        assert_eq!(builtin("A1(-1)").unwrap(), IntegerLattice::diagonal(&[-2]));
        assert_eq!(builtin("K3").unwrap().rank(), 22);
        assert_eq!(builtin("U+<-2>").unwrap().rank(), 3);
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn json_shape() {
        let l = builtin("U").unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"rank":2,"gram":[[0,1],[1,0]]}"#);
        let back: IntegerLattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<IntegerLattice>(r#"{"rank":2,"gram":[[0,1],[2,0]]}"#).is_err());
        assert!(serde_json::from_str::<IntegerLattice>(r#"{"rank":3,"gram":[[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn discriminant_coordinates_of_generators() {
        let l = IntegerLattice::diagonal(&[2, -4]);
        let d = l.discriminant_group().unwrap();
        assert_eq!(d.order(), int(8));
        for (i, g) in d.lift_matrix.iter().enumerate() {
            let c = d.coordinates(&l, g).unwrap();
            for (j, x) in c.iter().enumerate() {
                assert_eq!(x, &int(if i == j { 1 } else { 0 }));
            }
        }
        let minus = IntMatrix::identity(2).neg();
        assert!(d.acts_as_scalar(&l, &minus, -1));
        assert!(!d.acts_as_scalar(&l, &minus, 1));
        let _ = int_vec(&[0]);
    }
}
