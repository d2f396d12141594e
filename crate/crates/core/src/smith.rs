//! Smith normal form over the integers and the lattice operations built on it.

use crate::matrix::IntMatrix;
use crate::num::{Int, IntVec};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `u * a * v = diag(invariants..., 0...)` with `u`, `v` unimodular.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of the normal form, length `min(rows, cols)`; nonnegative and
    /// each nonzero entry divides the next.
    pub diag: Vec<Int>,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries.
    pub fn nonzero(&self) -> &[Int] {
        &self.diag[..self.rank]
    }

    /// Nonzero diagonal entries greater than one.
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.nonzero().iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut rank = 0;
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                add_row_multiple(&mut d, i, t, &q);
                add_row_multiple(&mut u, i, t, &q);
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                add_col_multiple(&mut d, j, t, &q);
                add_col_multiple(&mut v, j, t, &q);
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let piv = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&piv)));
            match offender {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &-Int::one());
                    add_row_multiple(&mut u, t, i, &-Int::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_zero() {
            break;
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        rank += 1;
    }
    let diag = (0..m.min(n)).map(|i| d.get(i, i).clone()).collect();
    Smith { u, v, diag, rank }
}

/// `row[i] -= q * row[t]`
fn add_row_multiple(a: &mut IntMatrix, i: usize, t: usize, q: &Int) {
    for j in 0..a.ncols() {
        let val = a.get(i, j) - q * a.get(t, j);
        a.set(i, j, val);
    }
}

/// `col[j] -= q * col[t]`
fn add_col_multiple(a: &mut IntMatrix, j: usize, t: usize, q: &Int) {
    for i in 0..a.nrows() {
        let val = a.get(i, j) - q * a.get(i, t);
        a.set(i, j, val);
    }
}

fn negate_row(a: &mut IntMatrix, i: usize) {
    for j in 0..a.ncols() {
        let val = -a.get(i, j).clone();
        a.set(i, j, val);
    }
}

/// Basis of `{x in Z^n : a x = 0}`. The result is saturated.
pub fn integer_kernel(a: &IntMatrix) -> Vec<IntVec> {
    let s = smith(a);
    (s.rank..a.ncols()).map(|j| s.v.col(j)).collect()
}

/// Some integer solution of `a x = b`.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Option<IntVec> {
    let s = smith(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![Int::zero(); a.ncols()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = c.div_rem(&s.diag[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Whether the span of `rows` (vectors in `Z^dim`) is a saturated subgroup.
pub fn is_saturated(rows: &[IntVec]) -> bool {
    if rows.is_empty() {
        return true;
    }
    smith(&IntMatrix::from_rows(rows)).nonzero().iter().all(|d| d.is_one())
}

/// Basis of `(span(rows) ⊗ Q) ∩ Z^dim`.
pub fn saturate(dim: usize, rows: &[IntVec]) -> Vec<IntVec> {
    if rows.is_empty() {
        return Vec::new();
    }
    let annihilator = integer_kernel(&IntMatrix::from_rows(rows));
    if annihilator.is_empty() {
        return (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
    }
    integer_kernel(&IntMatrix::from_rows(&annihilator))
}

/// Index of the lattice spanned by `rows` inside `Z^dim`, or `None` when the
/// span has lower rank.
pub fn index_in_full_lattice(dim: usize, rows: &[IntVec]) -> Option<Int> {
    if rows.is_empty() {
        return if dim == 0 { Some(Int::one()) } else { None };
    }
    let s = smith(&IntMatrix::from_rows(rows));
    if s.rank < dim {
        return None;
    }
    Some(s.nonzero().iter().fold(Int::one(), |acc, d| acc * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, int_vec};

    fn check(a: &IntMatrix) {
        let s = smith(a);
        let d = s.u.mul(a).mul(&s.v);
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                if i == j {
                    assert_eq!(d.get(i, j), &s.diag[i]);
                } else {
                    assert!(d.get(i, j).is_zero());
                }
            }
        }
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for w in s.nonzero().windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn normal_form_of_small_matrices() {
        let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        check(&a);
        assert_eq!(smith(&a).nonzero(), &[int(2), int(6), int(12)]);
        let b = IntMatrix::from_i64(&[&[0, 0], &[0, -2]]);
        check(&b);
        assert_eq!(smith(&b).nonzero(), &[int(2)]);
        check(&IntMatrix::from_i64(&[&[3, 5, 7, 9], &[2, 4, 6, 8]]));
    }

    #[test]
    fn kernel_and_saturation() {
        let a = IntMatrix::from_i64(&[&[2, -4]]);
        assert_eq!(integer_kernel(&a).len(), 1);
        let k = &integer_kernel(&a)[0];
        assert!(k == &int_vec(&[2, 1]) || k == &int_vec(&[-2, -1]));
        let sat = saturate(2, &[int_vec(&[2, 0])]);
        assert_eq!(sat.len(), 1);
        assert!(sat[0] == int_vec(&[1, 0]) || sat[0] == int_vec(&[-1, 0]));
        assert!(!is_saturated(&[int_vec(&[2, 0])]));
        assert_eq!(index_in_full_lattice(2, &[int_vec(&[2, 0]), int_vec(&[0, 1])]), Some(int(2)));
        assert_eq!(index_in_full_lattice(2, &[int_vec(&[2, 0])]), None);
    }

    #[test]
    fn integer_solve() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 4]]);
        assert_eq!(solve_integer(&a, &int_vec(&[2, 8])), Some(int_vec(&[1, 2])));
        assert_eq!(solve_integer(&a, &int_vec(&[1, 0])), None);
    }
}
