//! Finite groups given by multiplication tables, with the identity at index 0.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("multiplication table is not square or has out-of-range entries")]
    MalformedTable,
    #[error("no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("permutations have inconsistent degree or are not bijections")]
    BadPermutation,
    #[error("unknown group name `{0}`")]
    UnknownName(String),
    #[error("group too large: more than {0} elements")]
    TooLarge(usize),
    #[error("group description needs one of `name`, `table` or `permutations`")]
    MissingDescription,
}

/// Largest group built from permutation generators.
pub const MAX_ORDER: usize = 5040;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates the table and relabels so the identity is element 0.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::MalformedTable);
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inv = vec![0; n];
        for (a, slot) in inv.iter_mut().enumerate() {
            *slot = (0..n)
                .find(|&b| table[a][b] == e && table[b][a] == e)
                .ok_or(GroupError::NoInverse(a))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let g = FiniteGroup { mul: table, inv, labels: None };
        if e == 0 {
            return Ok(g);
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(0, e);
        Ok(g.relabel(&perm))
    }

    /// `perm[new] = old`.
    fn relabel(&self, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut pos = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            pos[old] = new;
        }
        let mul = (0..n)
            .map(|a| (0..n).map(|b| pos[self.mul[perm[a]][perm[b]]]).collect())
            .collect();
        let inv = (0..n).map(|a| pos[self.inv[perm[a]]]).collect();
        let labels = self.labels.as_ref().map(|l| perm.iter().map(|&o| l[o].clone()).collect());
        FiniteGroup { mul, inv, labels }
    }

    /// Table from a product rule on `0..n` with identity 0.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        Self::from_table((0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect())
    }

    /// Group generated by permutations of `0..degree`, composed right to
    /// left, elements in breadth-first order from the identity.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        let elements = permutation_closure(gens)?;
        let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
        let index: HashMap<&Vec<usize>, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let table = (0..n)
            .map(|a| (0..n).map(|b| index[&compose(&elements[a], &elements[b])]).collect())
            .collect();
        let mut g = Self::from_table(table)?;
        g.labels = Some(elements.iter().map(|p| format!("{p:?}")).collect());
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteGroup { mul: vec![vec![0]], inv: vec![0], labels: None }
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n.max(1), |a, b| (a + b) % n.max(1)).expect("cyclic group table")
    }

    /// Symmetries of an `n`-gon, order `2n`: element `s*n + k` is
    /// `r^k s^s` with `r` the rotation (index 1) and `s` a reflection
    /// (index `n`).
    pub fn dihedral(n: usize) -> Self {
        let n = n.max(1);
        Self::from_fn(2 * n, |a, b| {
            let (ka, sa) = (a % n, a / n);
            let (kb, sb) = (b % n, b / n);
            let k = if sa == 0 { (ka + kb) % n } else { (ka + n - kb) % n };
            ((sa ^ sb) * n) + k
        })
        .expect("dihedral group table")
    }

    /// Quaternion group: index `b + 4*neg` for the unit `±{1,i,j,k}[b]`.
    pub fn quaternion() -> Self {
        // (basis, sign) of e_a * e_b for a, b in {1, i, j, k}
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        Self::from_fn(8, |a, b| {
            let (basis, sign) = T[a % 4][b % 4];
            basis + 4 * (sign ^ (a / 4) ^ (b / 4))
        })
        .expect("quaternion table")
    }

    pub fn symmetric(n: usize) -> Self {
        Self::from_permutations(&symmetric_generators(n)).expect("symmetric group")
    }

    pub fn alternating(n: usize) -> Self {
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        if gens.is_empty() {
            return Self::trivial();
        }
        Self::from_permutations(&gens).expect("alternating group")
    }

    /// Element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let m = other.order();
        Self::from_fn(self.order() * m, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
        .expect("product of groups")
    }

    /// `Z<n>`, `C<n>`, `D<n>` (order 2n), `S<n>`, `A<n>`, `Q8`, `V4`, `1`,
    /// and products joined by `x`, e.g. `Z2xZ2`.
    pub fn named(name: &str) -> Result<Self, GroupError> {
        let parts: Vec<&str> = name.split(['x', '×']).map(str::trim).collect();
        if parts.len() > 1 {
            let mut g = Self::named(parts[0])?;
            for p in &parts[1..] {
                g = g.direct_product(&Self::named(p)?);
            }
            return Ok(g);
        }
        let unknown = || GroupError::UnknownName(name.to_string());
        match name {
            "1" | "trivial" => return Ok(Self::trivial()),
            "Q8" => return Ok(Self::quaternion()),
            "V4" => return Ok(Self::cyclic(2).direct_product(&Self::cyclic(2))),
            _ => {}
        }
        let (head, digits) = name.split_at(1);
        let n: usize = digits.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        match head {
            "Z" | "C" => Ok(Self::cyclic(n)),
            "D" if n == 2 => Ok(Self::cyclic(2).direct_product(&Self::cyclic(2))),
            "D" => Ok(Self::dihedral(n)),
            "S" if n <= 7 => Ok(Self::symmetric(n)),
            "A" if n <= 7 => Ok(Self::alternating(n)),
            _ => Err(unknown()),
        }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `a x a^-1`
    pub fn conj(&self, a: usize, x: usize) -> usize {
        self.mul(self.mul(a, x), self.inv(a))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements().filter(|&z| self.elements().all(|a| self.mul(a, z) == self.mul(z, a))).collect()
    }

    /// Smallest subgroup containing `set`, sorted.
    pub fn closure(&self, set: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            for &s in set {
                let x = self.mul(out[i], s);
                if !seen[x] {
                    seen[x] = true;
                    out.push(x);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// A small generating set chosen greedily by closure size.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = vec![0];
        while current.len() < self.order() {
            let best = self
                .elements()
                .filter(|x| current.binary_search(x).is_err())
                .max_by_key(|&x| {
                    let mut t = gens.clone();
                    t.push(x);
                    (self.closure(&t).len(), std::cmp::Reverse(x))
                })
                .expect("proper subgroup has an outside element");
            gens.push(best);
            current = self.closure(&gens);
        }
        gens
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        s.contains(&0) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let s: BTreeSet<usize> = sub.iter().copied().collect();
        self.elements().all(|a| s.iter().all(|&x| s.contains(&self.conj(a, x))))
    }

    pub fn conjugate_set(&self, a: usize, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.conj(a, x)).collect();
        out.sort_unstable();
        out
    }

    /// All subgroups, sorted by order and then elementwise.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let cyclic: BTreeSet<Vec<usize>> = self.elements().map(|a| self.closure(&[a])).collect();
        let mut frontier: Vec<Vec<usize>> = cyclic.iter().cloned().collect();
        found.extend(cyclic.iter().cloned());
        while let Some(h) = frontier.pop() {
            for c in &cyclic {
                if c.iter().all(|x| h.binary_search(x).is_ok()) {
                    continue;
                }
                let mut gens = h.clone();
                gens.extend(c.iter().copied());
                let k = self.closure(&gens);
                if found.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Conjugacy classes of subgroups; each class sorted, classes ordered
    /// by their first member.
    pub fn subgroup_classes(&self) -> Vec<Vec<Vec<usize>>> {
        let subs = self.subgroups();
        let mut assigned = vec![false; subs.len()];
        let mut classes = Vec::new();
        for i in 0..subs.len() {
            if assigned[i] {
                continue;
            }
            let conjugates: BTreeSet<Vec<usize>> =
                self.elements().map(|a| self.conjugate_set(a, &subs[i])).collect();
            for (j, s) in subs.iter().enumerate() {
                if conjugates.contains(s) {
                    assigned[j] = true;
                }
            }
            classes.push(conjugates.into_iter().collect());
        }
        classes
    }

    /// Extends generator images to a homomorphism into `target`, if any.
    pub fn extend_hom(&self, gens: &[usize], images: &[usize], target: &FiniteGroup) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(g, x);
                let val = target.mul(img, map[x]);
                if map[y] == usize::MAX {
                    map[y] = val;
                    queue.push_back(y);
                } else if map[y] != val {
                    return None;
                }
            }
        }
        if map.contains(&usize::MAX) {
            return None;
        }
        is_homomorphism(self, target, &map).then_some(map)
    }

    /// All homomorphisms to `target`, via images of `self.generators()`.
    pub fn homomorphisms(&self, target: &FiniteGroup) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let mut out = Vec::new();
        for_each_tuple(gens.len(), target.order(), |images| {
            if let Some(m) = self.extend_hom(&gens, images, target) {
                out.push(m);
            }
        });
        out.sort();
        out.dedup();
        out
    }

    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        self.homomorphisms(self).into_iter().filter(|m| is_bijection(m)).collect()
    }

    /// The subgroup as a group of its own, with the embedding `new -> old`.
    /// `sub` must be sorted, so the identity stays first.
    pub fn subgroup_as_group(&self, sub: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let pos: HashMap<usize, usize> = sub.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = sub.iter().map(|&a| sub.iter().map(|&b| pos[&self.mul(a, b)]).collect()).collect();
        let g = FiniteGroup::from_table(table).expect("subgroup of a group");
        (g, sub.to_vec())
    }

    /// Quotient by a normal subgroup with the projection; cosets are ordered
    /// by their smallest element.
    pub fn quotient(&self, normal: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for a in self.elements() {
            if coset_of[a] != usize::MAX {
                continue;
            }
            for &n in normal {
                coset_of[self.mul(a, n)] = reps.len();
            }
            reps.push(a);
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b)]).collect())
            .collect();
        (FiniteGroup::from_table(table).expect("quotient by a normal subgroup"), coset_of)
    }
}

/// Permutations generated by `gens`, in the element order used by
/// [`FiniteGroup::from_permutations`].
pub fn permutation_closure(gens: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, GroupError> {
    let degree = gens.first().map_or(0, |g| g.len());
    for g in gens {
        let mut seen = vec![false; degree];
        if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
            return Err(GroupError::BadPermutation);
        }
    }
    let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
    let id: Vec<usize> = (0..degree).collect();
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let p = compose(g, &elements[i]);
            if !index.contains_key(&p) {
                if elements.len() >= MAX_ORDER {
                    return Err(GroupError::TooLarge(MAX_ORDER));
                }
                index.insert(p.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(p);
            }
        }
    }
    Ok(elements)
}

/// Elements of `S_n` as permutations, indexed as in [`FiniteGroup::symmetric`].
pub fn symmetric_permutations(n: usize) -> Vec<Vec<usize>> {
    permutation_closure(&symmetric_generators(n)).expect("symmetric group")
}

pub fn symmetric_generators(n: usize) -> Vec<Vec<usize>> {
    if n < 2 {
        return vec![vec![0; n.min(1)]];
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    vec![swap, cycle]
}

pub fn is_homomorphism(from: &FiniteGroup, to: &FiniteGroup, map: &[usize]) -> bool {
    map.len() == from.order()
        && from
            .elements()
            .all(|a| from.elements().all(|b| map[from.mul(a, b)] == to.mul(map[a], map[b])))
}

pub fn is_bijection(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&x| x < map.len() && !std::mem::replace(&mut seen[x], true))
}

/// Calls `f` on every tuple in `0..base` of the given length.
pub fn for_each_tuple(len: usize, base: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; len];
    loop {
        f(&t);
        let mut i = 0;
        while i < len && t[i] + 1 == base {
            t[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
        t[i] += 1;
    }
}

/// JSON description: a name, a table or permutation generators.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Vec<usize>>>,
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = GroupError;

    fn try_from(j: GroupJson) -> Result<Self, GroupError> {
        if let Some(t) = j.table {
            FiniteGroup::from_table(t)
        } else if let Some(p) = j.permutations {
            FiniteGroup::from_permutations(&p)
        } else if let Some(n) = j.name {
            FiniteGroup::named(&n)
        } else {
            Err(GroupError::MissingDescription)
        }
    }
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GroupJson { table: Some(self.mul.clone()), ..Default::default() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GroupJson::deserialize(d)?;
        FiniteGroup::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups() {
        assert_eq!(FiniteGroup::named("S3").unwrap().order(), 6);
        assert_eq!(FiniteGroup::named("S4").unwrap().order(), 24);
        assert_eq!(FiniteGroup::named("A4").unwrap().order(), 12);
        assert_eq!(FiniteGroup::named("D4").unwrap().order(), 8);
        assert!(!FiniteGroup::named("D4").unwrap().is_abelian());
        assert!(FiniteGroup::named("Z2xZ4").unwrap().is_abelian());
        let q = FiniteGroup::quaternion();
        assert_eq!(q.elements().filter(|&a| q.element_order(a) == 4).count(), 6);
        assert_eq!(q.center(), vec![0, 4]);
        assert!(FiniteGroup::named("Y3").is_err());
    }

    #[test]
    fn subgroup_lattice_of_s3() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.subgroups().len(), 6);
        assert_eq!(s3.subgroup_classes().len(), 4);
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!(d4.subgroups().len(), 10);
        assert_eq!(d4.subgroup_classes().len(), 8);
        assert_eq!(FiniteGroup::symmetric(4).subgroup_classes().len(), 11);
    }

    #[test]
    fn homomorphisms_and_automorphisms() {
        let z2 = FiniteGroup::cyclic(2);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(z2.homomorphisms(&s3).len(), 4);
        assert_eq!(s3.automorphisms().len(), 6);
        assert_eq!(FiniteGroup::dihedral(4).automorphisms().len(), 8);
        assert_eq!(FiniteGroup::named("V4").unwrap().automorphisms().len(), 6);
    }

    #[test]
    fn table_relabels_identity() {
        let g = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
        let (q, proj) = FiniteGroup::cyclic(4).quotient(&[0, 2]);
        assert_eq!(q.order(), 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }
}
