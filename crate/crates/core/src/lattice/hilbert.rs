//! Hilbert bases of simplicial cones and the decomposition of an integer
//! cone into translates of simplicial integer cones.
//!
//! For generators `V` let `Δ` bound the entries of every primitive integer
//! dependency among them. In a representation `x = Σ λ_v v` minimizing a
//! generic positive weight, the generators with `λ_v ≥ Δ` are independent,
//! hence `ℕ(V)` is the union over bases `S ⊆ V` of the translates
//! `Σ_{v∉S} c_v v + ℕ(S)` with `0 ≤ c_v < Δ`.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::TranslatedCone;
use crate::linalg::{
    primitive_of_rationals, rank_of_vectors, to_integers, to_rationals, Int, QMatrix, Rational,
};

/// Coefficients of `x` in independent `gens`, if `x` is in their span.
pub fn coordinates(dim: usize, gens: &[Vec<Int>], x: &[Int]) -> Option<Vec<Rational>> {
    if gens.is_empty() {
        return x.iter().all(Zero::is_zero).then(Vec::new);
    }
    let cols: Vec<Vec<Rational>> = gens.iter().map(|g| to_rationals(g)).collect();
    let m = QMatrix::from_columns(dim, &cols);
    m.solve(&to_rationals(x))
}

/// `x ∈ ℕ(gens)` for independent `gens`.
pub fn simplicial_member(dim: usize, gens: &[Vec<Int>], x: &[Int]) -> bool {
    match coordinates(dim, gens, x) {
        Some(l) => l.iter().all(|c| c.is_integer() && !c.is_negative()),
        None => false,
    }
}

/// Integer points of `{Σ λ_i v_i : 0 ≤ λ_i ≤ 1}`, in lexicographic order.
pub fn hilbert_basis(gens: &[Vec<Int>], budget: u64) -> Result<Vec<Vec<Int>>> {
    let Some(dim) = gens.first().map(Vec::len) else {
        return Ok(Vec::new());
    };
    if rank_of_vectors(dim, gens) != gens.len() {
        return Err(Error::Invalid(
            "Hilbert basis needs independent generators".into(),
        ));
    }
    let lo: Vec<Int> = (0..dim)
        .map(|j| gens.iter().map(|g| g[j].clone().min(Int::zero())).sum())
        .collect();
    let hi: Vec<Int> = (0..dim)
        .map(|j| gens.iter().map(|g| g[j].clone().max(Int::zero())).sum())
        .collect();
    let size = lo.iter().zip(&hi).try_fold(1u64, |acc, (l, h)| {
        (h - l + 1u32).to_u64().and_then(|w| acc.checked_mul(w))
    });
    match size {
        Some(s) if s <= budget => {}
        _ => {
            return Err(Error::Refused(format!(
                "parallelepiped box exceeds the budget of {budget} points"
            )))
        }
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if let Some(l) = coordinates(dim, gens, &x) {
            if l.iter().all(|c| !c.is_negative() && *c <= Rational::one()) {
                out.push(x.clone());
            }
        }
        // odometer step
        let mut j = dim;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if x[j] < hi[j] {
                x[j] += 1;
                break;
            }
            x[j] = lo[j].clone();
        }
    }
}

/// Largest entry of a primitive integer dependency among `gens` (at least 1).
pub fn circuit_bound(dim: usize, gens: &[Vec<Int>]) -> Int {
    let r = rank_of_vectors(dim, gens);
    let mut best = Int::one();
    let n = gens.len();
    let mut subset = Vec::new();
    fn rec(
        dim: usize,
        gens: &[Vec<Int>],
        start: usize,
        max: usize,
        subset: &mut Vec<usize>,
        best: &mut Int,
    ) {
        if subset.len() >= 2 {
            let cols: Vec<Vec<Rational>> = subset.iter().map(|&i| to_rationals(&gens[i])).collect();
            let ns = QMatrix::from_columns(dim, &cols).nullspace();
            if ns.len() == 1 && ns[0].iter().all(|c| !c.is_zero()) {
                for c in primitive_of_rationals(&ns[0]) {
                    if c.abs() > *best {
                        *best = c.abs();
                    }
                }
            }
        }
        if subset.len() == max {
            return;
        }
        for i in start..gens.len() {
            subset.push(i);
            rec(dim, gens, i + 1, max, subset, best);
            subset.pop();
        }
    }
    rec(dim, gens, 0, (r + 1).min(n), &mut subset, &mut best);
    best
}

/// Finite points plus translates of simplicial integer cones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub points: Vec<Vec<Int>>,
    pub cones: Vec<TranslatedCone>,
    pub bound: Int,
}

impl Decomposition {
    pub fn contains(&self, x: &[Int]) -> bool {
        let dim = x.len();
        self.points.iter().any(|p| p == x)
            || self.cones.iter().any(|c| {
                let d: Vec<Int> = x.iter().zip(&c.apex).map(|(a, b)| a - b).collect();
                simplicial_member(dim, &c.generators, &d)
            })
    }
}

fn bases(dim: usize, gens: &[Vec<Int>], r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        dim: usize,
        gens: &[Vec<Int>],
        r: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..gens.len() {
            cur.push(i);
            let vs: Vec<Vec<Int>> = cur.iter().map(|&k| gens[k].clone()).collect();
            if rank_of_vectors(dim, &vs) == cur.len() {
                rec(dim, gens, r, i + 1, cur, out);
            }
            cur.pop();
        }
    }
    rec(dim, gens, r, 0, &mut cur, &mut out);
    out
}

/// Exact decomposition of `apex + ℕ(gens)`; refuses when the number of
/// translates would exceed `budget`.
pub fn integral_caratheodory(c: &TranslatedCone, budget: u64) -> Result<Decomposition> {
    let dim = c.dim();
    let gens: Vec<Vec<Int>> = c
        .generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if gens.is_empty() {
        return Ok(Decomposition {
            points: vec![c.apex.clone()],
            cones: vec![],
            bound: Int::one(),
        });
    }
    let r = rank_of_vectors(dim, &gens);
    let delta = circuit_bound(dim, &gens);
    let d = delta
        .to_u64()
        .ok_or_else(|| Error::Refused("circuit bound too large".into()))?;
    let frozen = gens.len() - r;
    let per_basis = d.checked_pow(frozen as u32).unwrap_or(u64::MAX);
    let all = bases(dim, &gens, r);
    if per_basis.saturating_mul(all.len() as u64) > budget {
        return Err(Error::Refused(format!(
            "decomposition needs more than {budget} translates"
        )));
    }
    let mut cones = Vec::new();
    for basis in all {
        let rest: Vec<usize> = (0..gens.len()).filter(|i| !basis.contains(i)).collect();
        let s: Vec<Vec<Int>> = basis.iter().map(|&i| gens[i].clone()).collect();
        let mut apexes: Vec<Vec<Int>> = Vec::new();
        let mut coef = vec![0u64; rest.len()];
        loop {
            let mut a = c.apex.clone();
            for (k, &i) in rest.iter().enumerate() {
                for (x, g) in a.iter_mut().zip(&gens[i]) {
                    *x += g * coef[k];
                }
            }
            apexes.push(a);
            let mut k = 0;
            while k < coef.len() && coef[k] + 1 == d {
                coef[k] = 0;
                k += 1;
            }
            if k == coef.len() {
                break;
            }
            coef[k] += 1;
        }
        apexes.sort();
        apexes.dedup();
        // drop translates contained in another translate of the same cone
        let keep: Vec<bool> = apexes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                !apexes.iter().enumerate().any(|(j, b)| {
                    j != i && {
                        let diff: Vec<Int> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                        simplicial_member(dim, &s, &diff)
                    }
                })
            })
            .collect();
        for (a, k) in apexes.into_iter().zip(keep) {
            if k {
                cones.push(TranslatedCone {
                    apex: a,
                    generators: s.clone(),
                });
            }
        }
    }
    Ok(Decomposition {
        points: vec![],
        cones,
        bound: delta,
    })
}

/// Exact membership `x ∈ ℕ(gens)` for arbitrary generators.
pub fn brute_cone_member(gens: &[Vec<Int>], x: &[Int]) -> bool {
    let dim = x.len();
    let c = TranslatedCone {
        apex: vec![Int::zero(); dim],
        generators: gens.to_vec(),
    };
    match integral_caratheodory(&c, u64::MAX) {
        Ok(d) => d.contains(x),
        Err(_) => false,
    }
}

/// Rational coefficients as integers, when they all are.
pub fn integral_coordinates(dim: usize, gens: &[Vec<Int>], x: &[Int]) -> Option<Vec<Int>> {
    to_integers(&coordinates(dim, gens, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    /// ℕ-combination search with every coefficient at most `cap`.
    fn bounded_member(gens: &[Vec<Int>], x: &[Int], cap: i64) -> bool {
        fn rec(gens: &[Vec<Int>], k: usize, rem: Vec<Int>, cap: i64) -> bool {
            if k == gens.len() {
                return rem.iter().all(Zero::is_zero);
            }
            let mut r = rem;
            for _ in 0..=cap {
                if rec(gens, k + 1, r.clone(), cap) {
                    return true;
                }
                r = r.iter().zip(&gens[k]).map(|(a, b)| a - b).collect();
            }
            false
        }
        rec(gens, 0, x.to_vec(), cap)
    }

    #[test]
    fn hilbert_examples() {
        let hb = hilbert_basis(&[ints(&[1, 0]), ints(&[0, 1])], 1000).unwrap();
        assert_eq!(
            hb,
            vec![ints(&[0, 0]), ints(&[0, 1]), ints(&[1, 0]), ints(&[1, 1])]
        );
        assert!(hilbert_basis(&[ints(&[1, 0]), ints(&[1, 2])], 1000)
            .unwrap()
            .contains(&ints(&[1, 1])));
        assert!(hilbert_basis(&[ints(&[2, 1]), ints(&[1, 2])], 1000)
            .unwrap()
            .contains(&ints(&[1, 1])));
        assert!(hilbert_basis(&[ints(&[1, 0]), ints(&[2, 0])], 1000).is_err());
    }

    #[test]
    fn caratheodory_examples() {
        let c = TranslatedCone::new(
            ints(&[0, 0]),
            vec![ints(&[2, 0]), ints(&[1, 1]), ints(&[0, 2])],
        )
        .unwrap();
        let d = integral_caratheodory(&c, 10_000).unwrap();
        for x in 0..=12 {
            for y in 0..=12 {
                let p = ints(&[x, y]);
                assert_eq!(
                    d.contains(&p),
                    bounded_member(&c.generators, &p, 12),
                    "{p:?}"
                );
            }
        }
        let c = TranslatedCone::new(ints(&[0, 0]), vec![ints(&[1, 0]), ints(&[1, 2])]).unwrap();
        let d = integral_caratheodory(&c, 10_000).unwrap();
        assert!(d.contains(&ints(&[2, 2])) && !d.contains(&ints(&[1, 1])));
        assert_eq!(d.cones.len(), 1);
    }

    #[test]
    fn circuits() {
        assert_eq!(
            circuit_bound(2, &[ints(&[2, 0]), ints(&[1, 1]), ints(&[0, 2])]),
            Int::from(2)
        );
        assert_eq!(circuit_bound(1, &[ints(&[2]), ints(&[3])]), Int::from(3));
        assert_eq!(circuit_bound(2, &[ints(&[1, 0])]), Int::from(1));
    }

    #[test]
    fn opposite_generators() {
        let c = TranslatedCone::new(ints(&[0]), vec![ints(&[2]), ints(&[-3])]).unwrap();
        for x in -10..=10 {
            assert!(c.contains(&ints(&[x])));
        }
        let c = TranslatedCone::new(ints(&[1]), vec![ints(&[2]), ints(&[-2])]).unwrap();
        assert!(c.contains(&ints(&[-5])) && !c.contains(&ints(&[4])));
    }
}
