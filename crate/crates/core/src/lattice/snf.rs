//! Smith normal form `M = U·D·V` by elementary row and column operations.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::{Int, ZMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: ZMatrix,
    pub d: ZMatrix,
    pub v: ZMatrix,
}

impl Smith {
    /// Nonzero diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// `U`, `V` unimodular; `D` diagonal, nonnegative, `d_i | d_{i+1}`, zeros last.
pub fn smith_normal_form(m: &ZMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    // a = P·m·Q throughout; U = P⁻¹ and V = Q⁻¹ are kept directly by applying
    // the inverse operations on the other side.
    let mut u = ZMatrix::identity(rows);
    let mut v = ZMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t) else {
            break;
        };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                add_row(&mut a, &mut u, i, t, &-q);
                if !a.get(i, t).is_zero() {
                    swap_rows(&mut a, &mut u, t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                add_col(&mut a, &mut v, j, t, &-q);
                if !a.get(t, j).is_zero() {
                    swap_cols(&mut a, &mut v, t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = a.get(t, t).clone();
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => add_row(&mut a, &mut u, t, i, &Int::from(1)),
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            negate_row(&mut a, &mut u, t);
        }
    }
    Smith { u, d: a, v }
}

fn min_entry(a: &ZMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_rows(a: &mut ZMatrix, u: &mut ZMatrix, i: usize, j: usize) {
    if i != j {
        a.swap_rows(i, j);
        u.swap_cols(i, j);
    }
}

fn swap_cols(a: &mut ZMatrix, v: &mut ZMatrix, i: usize, j: usize) {
    if i != j {
        a.swap_cols(i, j);
        v.swap_rows(i, j);
    }
}

/// Row `i` += c·row `j`; `U` gets column `j` -= c·column `i`.
fn add_row(a: &mut ZMatrix, u: &mut ZMatrix, i: usize, j: usize, c: &Int) {
    for k in 0..a.cols() {
        let x = a.get(i, k) + c * a.get(j, k);
        a.set(i, k, x);
    }
    for k in 0..u.rows() {
        let x = u.get(k, j) - c * u.get(k, i);
        u.set(k, j, x);
    }
}

/// Column `i` += c·column `j`; `V` gets row `j` -= c·row `i`.
fn add_col(a: &mut ZMatrix, v: &mut ZMatrix, i: usize, j: usize, c: &Int) {
    for k in 0..a.rows() {
        let x = a.get(k, i) + c * a.get(k, j);
        a.set(k, i, x);
    }
    for k in 0..v.cols() {
        let x = v.get(j, k) - c * v.get(i, k);
        v.set(j, k, x);
    }
}

fn negate_row(a: &mut ZMatrix, u: &mut ZMatrix, i: usize) {
    for k in 0..a.cols() {
        let x = -a.get(i, k);
        a.set(i, k, x);
    }
    for k in 0..u.rows() {
        let x = -u.get(k, i);
        u.set(k, i, x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(m: &ZMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul_mat(&s.d).mul_mat(&s.v), *m);
        assert!(s.u.det().abs().is_one() && s.v.det().abs().is_one());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                assert!(i == j || s.d.get(i, j).is_zero());
            }
        }
        let f: Vec<Int> = (0..m.rows().min(m.cols()))
            .map(|i| s.d.get(i, i).clone())
            .collect();
        for w in f.windows(2) {
            assert!(!w[0].is_negative());
            assert!(if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            });
        }
        s
    }

    #[test]
    fn examples() {
        let s = check(&ZMatrix::identity(3));
        assert_eq!(
            (s.u, s.d, s.v),
            (
                ZMatrix::identity(3),
                ZMatrix::identity(3),
                ZMatrix::identity(3)
            )
        );
        assert_eq!(
            check(&ZMatrix::from_i64(2, 2, &[2, 0, 0, 3])).d,
            ZMatrix::from_i64(2, 2, &[1, 0, 0, 6])
        );
        assert_eq!(
            check(&ZMatrix::from_i64(2, 2, &[2, 4, 6, 8])).d,
            ZMatrix::from_i64(2, 2, &[2, 0, 0, 4])
        );
    }

    #[test]
    fn rectangular_and_singular() {
        check(&ZMatrix::from_i64(2, 3, &[2, 4, 4, -6, 6, 12]));
        check(&ZMatrix::from_i64(3, 2, &[0, 0, 0, 0, 0, 0]));
        let s = check(&ZMatrix::from_i64(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]));
        assert_eq!(s.invariant_factors(), vec![Int::from(1), Int::from(3)]);
    }
}
