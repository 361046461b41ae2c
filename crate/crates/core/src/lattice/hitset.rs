//! Lattice membership, basis completion, and the set of orbit indices that
//! land in a translated full-rank lattice.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::snf::smith_normal_form;
use crate::lattice::ProgressionSet;
use crate::linalg::{lcm_all, rank_of_vectors, Int, ZMatrix};

/// Is `x` in the group generated by `gens`?
pub fn lattice_member(dim: usize, gens: &[Vec<Int>], x: &[Int]) -> bool {
    if gens.is_empty() {
        return x.iter().all(Zero::is_zero);
    }
    let s = smith_normal_form(&ZMatrix::from_columns(dim, gens));
    let y = s.u.unimodular_inverse().expect("unimodular").mul_vec(x);
    y.iter().enumerate().all(|(i, yi)| {
        let d = if i < s.d.cols() {
            s.d.get(i, i).clone()
        } else {
            Int::zero()
        };
        if d.is_zero() {
            yi.is_zero()
        } else {
            yi.is_multiple_of(&d)
        }
    })
}

/// `H = {n : Φ^n x0 ∈ v0 + G}` for a full-rank lattice `G`, via the orbit of
/// `x0` modulo the product of the invariant factors.
pub fn lattice_hitting_set(
    phi: &ZMatrix,
    x0: &[Int],
    v0: &[Int],
    gens: &[Vec<Int>],
) -> Result<ProgressionSet> {
    let s = x0.len();
    if !phi.is_square() || phi.rows() != s || v0.len() != s || gens.iter().any(|g| g.len() != s) {
        return Err(Error::Invalid("dimensions disagree".into()));
    }
    if rank_of_vectors(s, gens) != s {
        return Err(Error::Invalid(
            "lattice generators must have full rank".into(),
        ));
    }
    let smith = smith_normal_form(&ZMatrix::from_columns(s, gens));
    let uinv = smith.u.unimodular_inverse().expect("unimodular");
    let factors = smith.invariant_factors();
    let q = lcm_all(factors.iter());
    let member = |y: &[Int]| {
        let diff: Vec<Int> = y.iter().zip(v0).map(|(a, b)| a - b).collect();
        uinv.mul_vec(&diff)
            .iter()
            .zip(&factors)
            .all(|(z, d)| z.is_multiple_of(d))
    };
    let mut seen: HashMap<Vec<Int>, u64> = HashMap::new();
    let mut orbit: Vec<Vec<Int>> = Vec::new();
    let mut y = ZMatrix::reduce_mod(x0, &q);
    let (pre, period) = loop {
        if let Some(&first) = seen.get(&y) {
            let n = orbit.len() as u64;
            break (first, n - first);
        }
        seen.insert(y.clone(), orbit.len() as u64);
        orbit.push(y.clone());
        y = ZMatrix::reduce_mod(&phi.mul_vec(&y), &q);
    };
    let hits: Vec<bool> = orbit.iter().map(|y| member(y)).collect();
    Ok(ProgressionSet::from_periodic(
        |n| hits[n as usize],
        pre,
        period,
    ))
}

/// Unit coordinate vectors completing independent `vs` to a basis of `ℤ^s`,
/// searched over coordinate subsets in lexicographic order; `None` if no
/// such completion exists.
pub fn extend_to_basis(dim: usize, vs: &[Vec<Int>]) -> Result<Option<Vec<usize>>> {
    if vs.iter().any(|v| v.len() != dim) {
        return Err(Error::Invalid("vector dimension disagrees".into()));
    }
    if rank_of_vectors(dim, vs) != vs.len() {
        return Err(Error::Invalid("vectors are linearly dependent".into()));
    }
    let need = dim - vs.len();
    let mut pick: Vec<usize> = (0..need).collect();
    loop {
        let mut cols = vs.to_vec();
        for &j in &pick {
            let mut e = vec![Int::zero(); dim];
            e[j] = Int::one();
            cols.push(e);
        }
        if ZMatrix::from_columns(dim, &cols).det().abs().is_one() {
            return Ok(Some(pick));
        }
        // next combination
        let mut i = need;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if pick[i] < dim - need + i {
                pick[i] += 1;
                for k in i + 1..need {
                    pick[k] = pick[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Vectors `w` such that `ℤ(vs) + ℤ(w)` has full rank and meets the span of
/// `vs` exactly in `ℤ(vs)`: the trailing columns of `U` in `S = U·D·V`.
pub fn snf_completion(dim: usize, vs: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    let r = rank_of_vectors(dim, vs);
    if r != vs.len() {
        return Err(Error::Invalid("vectors are linearly dependent".into()));
    }
    if vs.is_empty() {
        return Ok((0..dim).map(|j| unit(dim, j)).collect());
    }
    let s = smith_normal_form(&ZMatrix::from_columns(dim, vs));
    Ok((r..dim).map(|j| s.u.column(j)).collect())
}

pub(crate) fn unit(dim: usize, j: usize) -> Vec<Int> {
    let mut e = vec![Int::zero(); dim];
    e[j] = Int::one();
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    #[test]
    fn hitting_examples() {
        let h = lattice_hitting_set(
            &ZMatrix::identity(2),
            &ints(&[3, 4]),
            &ints(&[0, 0]),
            &[ints(&[1, 0]), ints(&[0, 1])],
        )
        .unwrap();
        assert_eq!(h.progressions, vec![(0, 1)]);
        let h = lattice_hitting_set(
            &ZMatrix::from_i64(1, 1, &[3]),
            &ints(&[1]),
            &ints(&[0]),
            &[ints(&[2])],
        )
        .unwrap();
        assert!(h.is_empty());
        let h = lattice_hitting_set(
            &ZMatrix::from_i64(1, 1, &[2]),
            &ints(&[1]),
            &ints(&[0]),
            &[ints(&[4])],
        )
        .unwrap();
        assert!(h.finite.is_empty());
        assert_eq!(h.progressions, vec![(2, 1)]);
        assert!(lattice_hitting_set(
            &ZMatrix::identity(2),
            &ints(&[1, 1]),
            &ints(&[0, 0]),
            &[ints(&[1, 0])]
        )
        .is_err());
    }

    #[test]
    fn basis_extension() {
        assert_eq!(extend_to_basis(2, &[ints(&[1, 0])]).unwrap(), Some(vec![1]));
        assert_eq!(extend_to_basis(2, &[ints(&[2, 1])]).unwrap(), Some(vec![0]));
        assert_eq!(extend_to_basis(2, &[ints(&[2, 0])]).unwrap(), None);
        let w = snf_completion(2, &[ints(&[2, 0])]).unwrap();
        assert_eq!(w.len(), 1);
        // ℤ((2,0)) + ℤ(w) meets the x-axis in 2ℤ only
        let mut g = vec![ints(&[2, 0])];
        g.extend(w);
        assert!(!lattice_member(2, &g, &ints(&[1, 0])));
        assert!(lattice_member(2, &g, &ints(&[4, 0])));
    }

    #[test]
    fn membership() {
        let g = [ints(&[2, 4]), ints(&[6, 8])];
        assert!(lattice_member(2, &g, &ints(&[8, 12])));
        assert!(!lattice_member(2, &g, &ints(&[1, 0])));
        assert!(lattice_member(2, &g, &ints(&[0, 4])));
        assert!(!lattice_member(2, &g, &ints(&[0, 2])));
    }
}
