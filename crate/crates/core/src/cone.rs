//! Rational polyhedral cones kept in both representations.
//!
//! A cone is `lines + cone(rays)` and simultaneously
//! `{x : h·x >= 0 for h in halfspaces, e·x = 0 for e in equations}`, with the
//! standard dot product between vectors and functionals. Conversion is the
//! double description method with the combinatorial adjacency test.

use crate::matrix::{IntMatrix, Matrix, RatMatrix};
use crate::num::{self, Int, IntVec, Rat};
use crate::smith;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("expected vectors of dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no generators or constraints given")]
    EmptyInput,
}

/// Canonical form: every list is primitive and sorted; rays are reduced
/// modulo the lineality space and halfspaces modulo the equations, both by
/// orthogonal projection, so equal cones compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyhedralCone {
    dim: usize,
    rays: Vec<IntVec>,
    lines: Vec<IntVec>,
    halfspaces: Vec<IntVec>,
    equations: Vec<IntVec>,
}

fn check_dim(dim: usize, vs: &[IntVec]) -> Result<(), ConeError> {
    match vs.iter().find(|v| v.len() != dim) {
        Some(v) => Err(ConeError::DimensionMismatch { expected: dim, found: v.len() }),
        None => Ok(()),
    }
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    num::dot(a, b)
}

fn unit_vectors(dim: usize) -> Vec<IntVec> {
    (0..dim)
        .map(|i| (0..dim).map(|j| Int::from((i == j) as i64)).collect())
        .collect()
}

struct DdRay {
    v: IntVec,
    tight: Vec<bool>,
}

/// Extreme rays and a lineality basis of `{x : a·x >= 0, e·x = 0}`.
fn double_description(dim: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> (Vec<IntVec>, Vec<IntVec>) {
    let mut lines = if eqs.iter().all(|e| num::is_zero_vec(e)) {
        unit_vectors(dim)
    } else {
        smith::integer_kernel(&Matrix::from_rows(eqs))
    };
    let mut rays: Vec<DdRay> = Vec::new();
    for (k, a) in ineqs.iter().enumerate() {
        if let Some(pos) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lines.remove(pos);
            if dot(a, &l0).is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
            }
            let s0 = dot(a, &l0);
            let eliminate = |v: &IntVec| -> IntVec {
                let t = dot(a, v);
                num::primitive(&v.iter().zip(&l0).map(|(x, y)| &s0 * x - &t * y).collect::<Vec<_>>())
            };
            lines = lines.iter().map(eliminate).collect();
            for r in rays.iter_mut() {
                r.v = eliminate(&r.v);
                r.tight.push(true);
            }
            let mut tight = vec![true; k];
            tight.push(false);
            rays.push(DdRay { v: num::primitive(&l0), tight });
            continue;
        }
        let values: Vec<Int> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let mut next: Vec<DdRay> = Vec::new();
        for p in &pos {
            for n in &neg {
                if !adjacent(&rays, *p, *n) {
                    continue;
                }
                let v: IntVec = rays[*n]
                    .v
                    .iter()
                    .zip(&rays[*p].v)
                    .map(|(x, y)| &values[*p] * x - &values[*n] * y)
                    .collect();
                let mut tight: Vec<bool> =
                    rays[*p].tight.iter().zip(&rays[*n].tight).map(|(x, y)| *x && *y).collect();
                tight.push(true);
                next.push(DdRay { v: num::primitive(&v), tight });
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if !values[i].is_negative() {
                r.tight.push(values[i].is_zero());
                next.push(r);
            }
        }
        rays = next;
    }
    let mut out: Vec<IntVec> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    (out, lines)
}

/// Two extreme rays span a 2-face iff no third ray is tight on every
/// constraint tight on both.
fn adjacent(rays: &[DdRay], p: usize, n: usize) -> bool {
    let common: Vec<usize> = (0..rays[p].tight.len())
        .filter(|&j| rays[p].tight[j] && rays[n].tight[j])
        .collect();
    !rays.iter().enumerate().any(|(i, r)| i != p && i != n && common.iter().all(|&j| r.tight[j]))
}

/// Primitive integer rows of the reduced echelon form of a spanning set.
fn canonical_basis(vs: &[IntVec]) -> Vec<IntVec> {
    if vs.is_empty() {
        return Vec::new();
    }
    let m: RatMatrix = Matrix::from_rows(&vs.iter().map(|v| num::to_rat_vec(v)).collect::<Vec<_>>());
    let e = m.echelon();
    (0..e.pivots.len()).map(|i| num::clear_denominators(e.rref.row(i))).collect()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
fn project_away(v: &[Int], basis: &[IntVec]) -> IntVec {
    if basis.is_empty() {
        return v.to_vec();
    }
    let b: RatMatrix = Matrix::from_rows(&basis.iter().map(|x| num::to_rat_vec(x)).collect::<Vec<_>>());
    let gram = b.mul(&b.transpose());
    let rv = num::to_rat_vec(v);
    let coeffs = gram.solve(&b.mul_vec(&rv)).expect("independent basis");
    let proj = b.vec_mul(&coeffs);
    let diff: Vec<Rat> = rv.iter().zip(&proj).map(|(x, y)| x - y).collect();
    num::clear_denominators(&diff)
}

fn canonical_generators(vs: &[IntVec], modulo: &[IntVec]) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = vs
        .iter()
        .map(|v| project_away(v, modulo))
        .filter(|v| !num::is_zero_vec(v))
        .collect();
    out.sort();
    out.dedup();
    out
}

impl PolyhedralCone {
    fn assemble(dim: usize, rays: Vec<IntVec>, lines: Vec<IntVec>, halfspaces: Vec<IntVec>, equations: Vec<IntVec>) -> Self {
        let lines = canonical_basis(&lines);
        let equations = canonical_basis(&equations);
        let rays = canonical_generators(&rays, &lines);
        let halfspaces = canonical_generators(&halfspaces, &equations);
        PolyhedralCone { dim, rays, lines, halfspaces, equations }
    }

    /// Cone generated by rays and lines; no generators gives the zero cone.
    pub fn from_generators(dim: usize, rays: &[IntVec], lines: &[IntVec]) -> Result<Self, ConeError> {
        check_dim(dim, rays)?;
        check_dim(dim, lines)?;
        // The dual description of the generators is the H-representation.
        let mut as_ineqs = rays.to_vec();
        as_ineqs.extend(lines.iter().cloned());
        as_ineqs.extend(lines.iter().map(|l| l.iter().map(|x| -x).collect()));
        let (halfspaces, equations) = double_description(dim, &as_ineqs, &[]);
        let (rays, lines) = double_description(dim, &halfspaces, &equations);
        Ok(Self::assemble(dim, rays, lines, halfspaces, equations))
    }

    pub fn from_rays(dim: usize, rays: &[IntVec]) -> Result<Self, ConeError> {
        if rays.is_empty() {
            return Err(ConeError::EmptyInput);
        }
        Self::from_generators(dim, rays, &[])
    }

    pub fn from_constraints(dim: usize, halfspaces: &[IntVec], equations: &[IntVec]) -> Result<Self, ConeError> {
        check_dim(dim, halfspaces)?;
        check_dim(dim, equations)?;
        let (rays, lines) = double_description(dim, halfspaces, equations);
        let mut gens = rays.clone();
        gens.extend(lines.iter().cloned());
        gens.extend(lines.iter().map(|l| l.iter().map(|x| -x).collect()));
        let (facets, eqs) = double_description(dim, &gens, &[]);
        Ok(Self::assemble(dim, rays, lines, facets, eqs))
    }

    /// `{x : h·x >= 0}`; an empty list gives the whole space.
    pub fn from_halfspaces(dim: usize, halfspaces: &[IntVec]) -> Result<Self, ConeError> {
        Self::from_constraints(dim, halfspaces, &[])
    }

    pub fn full(dim: usize) -> Self {
        Self::from_constraints(dim, &[], &[]).expect("no inputs to mismatch")
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_generators(dim, &[], &[]).expect("no inputs to mismatch")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn lines(&self) -> &[IntVec] {
        &self.lines
    }

    pub fn halfspaces(&self) -> &[IntVec] {
        &self.halfspaces
    }

    pub fn equations(&self) -> &[IntVec] {
        &self.equations
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lines.is_empty()
    }

    /// Dual cone for the standard pairing.
    pub fn dual(&self) -> Self {
        PolyhedralCone {
            dim: self.dim,
            rays: self.halfspaces.clone(),
            lines: self.equations.clone(),
            halfspaces: self.rays.clone(),
            equations: self.lines.clone(),
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, ConeError> {
        if other.dim != self.dim {
            return Err(ConeError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Self::from_constraints(self.dim, &hs, &eqs)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.halfspaces.iter().all(|h| !rat_dot(h, x).is_negative())
            && self.equations.iter().all(|e| rat_dot(e, x).is_zero())
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.contains(&num::to_rat_vec(x))
    }

    /// Membership in the relative interior.
    pub fn relative_interior_contains(&self, x: &[Rat]) -> bool {
        self.contains(x) && self.halfspaces.iter().all(|h| rat_dot(h, x).is_positive())
    }

    /// A point of the relative interior: the sum of the rays.
    pub fn interior_point(&self) -> IntVec {
        let mut s = vec![Int::zero(); self.dim];
        for r in &self.rays {
            for (a, b) in s.iter_mut().zip(r) {
                *a += b;
            }
        }
        s
    }

    pub fn contains_cone(&self, other: &Self) -> bool {
        other.rays.iter().all(|r| self.contains_int(r))
            && other.lines.iter().all(|l| {
                self.contains_int(l) && self.contains_int(&l.iter().map(|x| -x).collect::<Vec<_>>())
            })
    }

    /// Image under an invertible linear map acting on column vectors.
    pub fn transform(&self, m: &IntMatrix) -> Self {
        let rays: Vec<IntVec> = self.rays.iter().map(|r| m.mul_vec(r)).collect();
        let lines: Vec<IntVec> = self.lines.iter().map(|l| m.mul_vec(l)).collect();
        let minv = m.to_rat().inverse().expect("invertible map");
        let covector = |h: &IntVec| num::clear_denominators(&minv.vec_mul(&num::to_rat_vec(h)));
        let halfspaces = self.halfspaces.iter().map(covector).collect();
        let equations = self.equations.iter().map(covector).collect();
        Self::assemble(self.dim, rays, lines, halfspaces, equations)
    }

    /// Whether the interiors of two full-dimensional cones meet.
    pub fn interiors_meet(&self, other: &Self) -> Result<bool, ConeError> {
        Ok(self.is_full_dimensional()
            && other.is_full_dimensional()
            && self.intersect(other)?.is_full_dimensional())
    }

    /// All faces, from the cone itself down to the lineality space, ordered
    /// by dimension (descending) and then by ray set.
    pub fn faces(&self) -> Vec<PolyhedralCone> {
        let mut seen: Vec<Vec<usize>> = vec![(0..self.rays.len()).collect()];
        let mut queue = vec![0usize];
        while let Some(i) = queue.pop() {
            let current = seen[i].clone();
            for h in &self.halfspaces {
                let sub: Vec<usize> = current.iter().copied().filter(|&r| dot(h, &self.rays[r]).is_zero()).collect();
                if sub.len() < current.len() && !seen.contains(&sub) {
                    seen.push(sub);
                    queue.push(seen.len() - 1);
                }
            }
        }
        let mut faces: Vec<PolyhedralCone> = seen
            .iter()
            .map(|s| {
                let rays: Vec<IntVec> = s.iter().map(|&r| self.rays[r].clone()).collect();
                Self::from_generators(self.dim, &rays, &self.lines).expect("dimensions match")
            })
            .collect();
        faces.sort_by(|a, b| b.dimension().cmp(&a.dimension()).then_with(|| a.rays.cmp(&b.rays)));
        faces
    }
}

fn rat_dot(h: &[Int], x: &[Rat]) -> Rat {
    h.iter().zip(x).fold(Rat::zero(), |acc, (a, b)| acc + Rat::from_integer(a.clone()) * b)
}

/// JSON form. Either generators or constraints may be given on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub rays: Option<Vec<IntVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub lines: Option<Vec<IntVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub halfspaces: Option<Vec<IntVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub equations: Option<Vec<IntVec>>,
}

mod opt_rows {
    use super::*;
    use crate::num::json_int_rows;

    pub fn serialize<S: serde::Serializer>(v: &Option<Vec<IntVec>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(rows) => json_int_rows::serialize(rows, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Vec<IntVec>>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "json_int_rows")] Vec<IntVec>);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

impl TryFrom<ConeJson> for PolyhedralCone {
    type Error = ConeError;

    fn try_from(j: ConeJson) -> Result<Self, ConeError> {
        let first = [&j.rays, &j.lines, &j.halfspaces, &j.equations]
            .iter()
            .find_map(|v| v.as_ref().and_then(|v| v.first().map(|x| x.len())));
        let dim = j.dim.or(first).ok_or(ConeError::EmptyInput)?;
        if j.rays.is_some() || j.lines.is_some() {
            PolyhedralCone::from_generators(dim, &j.rays.unwrap_or_default(), &j.lines.unwrap_or_default())
        } else if j.halfspaces.is_some() || j.equations.is_some() || j.dim.is_some() {
            PolyhedralCone::from_constraints(dim, &j.halfspaces.unwrap_or_default(), &j.equations.unwrap_or_default())
        } else {
            Err(ConeError::EmptyInput)
        }
    }
}

impl From<&PolyhedralCone> for ConeJson {
    fn from(c: &PolyhedralCone) -> Self {
        let nonempty = |v: &Vec<IntVec>| if v.is_empty() { None } else { Some(v.clone()) };
        ConeJson {
            dim: Some(c.dim),
            rays: Some(c.rays.clone()),
            lines: nonempty(&c.lines),
            halfspaces: Some(c.halfspaces.clone()),
            equations: nonempty(&c.equations),
        }
    }
}

impl Serialize for PolyhedralCone {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyhedralCone {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ConeJson::deserialize(d)?;
        PolyhedralCone::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int_vec, rat_vec};

    fn quadrant() -> PolyhedralCone {
        PolyhedralCone::from_rays(2, &[int_vec(&[1, 0]), int_vec(&[0, 1])]).unwrap()
    }

    #[test]
    fn quadrant_is_self_dual() {
        let q = quadrant();
        assert_eq!(q.halfspaces(), &[int_vec(&[0, 1]), int_vec(&[1, 0])]);
        assert_eq!(q.dual(), q);
        let x = PolyhedralCone::from_halfspaces(2, &[int_vec(&[1, 0])]).unwrap();
        let y = PolyhedralCone::from_halfspaces(2, &[int_vec(&[0, 1])]).unwrap();
        assert_eq!(x.lines().len(), 1);
        let both = x.intersect(&y).unwrap();
        assert_eq!(both, q);
        assert_eq!(both.rays().len(), 2);
    }

    #[test]
    fn simplicial_faces() {
        let c = PolyhedralCone::from_rays(3, &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0]), int_vec(&[0, 0, 1])]).unwrap();
        let faces = c.faces();
        let dims: Vec<usize> = faces.iter().map(|f| f.dimension()).collect();
        assert_eq!(dims, vec![3, 2, 2, 2, 1, 1, 1, 0]);
    }

    #[test]
    fn square_pyramid_round_trip() {
        let rays: Vec<IntVec> = [[1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1], [0, 0, 1]]
            .iter()
            .map(|r| int_vec(r))
            .collect();
        let c = PolyhedralCone::from_rays(3, &rays).unwrap();
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.halfspaces().len(), 4);
        let again = PolyhedralCone::from_halfspaces(3, c.halfspaces()).unwrap();
        assert_eq!(again, c);
        assert_eq!(c.faces().len(), 1 + 4 + 4 + 1);
        assert!(c.relative_interior_contains(&rat_vec(&[0, 0, 1])));
        assert!(!c.contains(&rat_vec(&[2, 0, 1])));
    }

    #[test]
    fn lower_dimensional_and_lineality() {
        let ray = PolyhedralCone::from_rays(2, &[int_vec(&[2, 4])]).unwrap();
        assert_eq!(ray.rays(), &[int_vec(&[1, 2])]);
        assert_eq!(ray.dimension(), 1);
        let half = PolyhedralCone::from_generators(2, &[int_vec(&[1, 5])], &[int_vec(&[0, 3])]).unwrap();
        assert_eq!(half.rays(), &[int_vec(&[1, 0])]);
        assert_eq!(half, PolyhedralCone::from_halfspaces(2, &[int_vec(&[1, 0])]).unwrap());
        assert!(PolyhedralCone::full(3).is_full_dimensional());
        assert!(PolyhedralCone::zero(3).is_zero());
        assert_eq!(PolyhedralCone::from_rays(2, &[]), Err(ConeError::EmptyInput));
        assert!(matches!(
            PolyhedralCone::from_rays(2, &[int_vec(&[1, 0, 0])]),
            Err(ConeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transform_and_json() {
        let q = quadrant();
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(q.transform(&swap), q);
        let shear = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let s = q.transform(&shear);
        assert_eq!(s, PolyhedralCone::from_rays(2, &[int_vec(&[1, 0]), int_vec(&[1, 1])]).unwrap());
        let text = serde_json::to_string(&s).unwrap();
        let back: PolyhedralCone = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let from_h: PolyhedralCone = serde_json::from_str(r#"{"halfspaces": [[1, 0], [0, 1]]}"#).unwrap();
        assert_eq!(from_h, q);
    }
}
