//! Integer recurrence to a pair of binary automata whose accepted-word
//! counts at lengths `ℓn` differ by exactly `x_n`.

use num_bigint::BigUint;
use num_traits::{Signed, Zero};

use crate::dfa::Dfa;
use crate::digraph::{counting_threads, path_cycle_weights, WeightedDigraph};
use crate::error::{Error, Result};
use crate::linalg::{bit_length, Int};
use crate::lrs::Lrs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomataPair {
    pub a: Dfa,
    pub b: Dfa,
    pub ell: usize,
    /// Length of the pasted counting threads.
    pub m: usize,
    /// Depth of the routing trees.
    pub k: usize,
}

impl AutomataPair {
    /// `count_words(A, ℓn) - count_words(B, ℓn)`.
    pub fn difference(&self, n: usize) -> Int {
        let len = self.ell * n;
        Int::from(self.a.count_words(len)) - Int::from(self.b.count_words(len))
    }
}

/// Smallest thread length `M` with `2^M > max(|p_i|, |q_i|, 1)`.
pub fn min_thread_length(s: &Lrs) -> Result<usize> {
    let (p, q) = path_cycle_weights(s)?;
    let max = p
        .iter()
        .chain(&q)
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Int::zero);
    Ok(bit_length(&max).max(1) as usize)
}

/// Smallest tree depth `k` with `2^k > 2 M d`.
pub fn tree_depth(m: usize, d: usize) -> usize {
    (usize::BITS - (2 * m * d).leading_zeros()) as usize
}

/// `(M, k)` for a requested `ℓ`: threads are lengthened, trees keep the
/// smallest admissible depth.
pub fn split_length(s: &Lrs, ell: usize) -> Result<(usize, usize)> {
    let m_min = min_thread_length(s)?;
    let d = s.degree();
    let mut k = tree_depth(m_min, d);
    loop {
        if ell < m_min + k {
            return Err(Error::Invalid(format!(
                "ℓ = {ell} is below the minimum {} for this recurrence",
                m_min + k
            )));
        }
        let m = ell - k;
        if tree_depth(m, d) <= k {
            return Ok((m, k));
        }
        k += 1;
    }
}

pub fn default_length(s: &Lrs) -> Result<usize> {
    let m = min_thread_length(s)?;
    Ok(m + tree_depth(m, s.degree()))
}

pub fn lrs_to_automata_pair(s: &Lrs) -> Result<AutomataPair> {
    lrs_to_automata_pair_with_length(s, default_length(s)?)
}

struct Builder {
    /// (src, dst, flips sign)
    edges: Vec<(usize, usize, bool)>,
    vertices: usize,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    fn path(&mut self, from: usize, to: usize, len: usize) {
        let mut prev = from;
        for step in 0..len {
            let next = if step + 1 == len { to } else { self.vertex() };
            self.edges.push((prev, next, false));
            prev = next;
        }
    }

    fn gadget(&mut self, from: usize, to: usize, weight: &Int, m: usize) -> Result<()> {
        let mut g = WeightedDigraph::new(self.vertices, from, to);
        let firsts = counting_threads(&mut g, from, to, &weight.magnitude().clone(), m)?;
        self.vertices = g.vertices;
        for (i, e) in g.edges.iter().enumerate() {
            let flip = weight.is_negative() && firsts.contains(&i);
            self.edges.push((e.src, e.dst, flip));
        }
        Ok(())
    }

    /// Depth-`k` binary tree rooted at `root` whose leaves take over the
    /// current out-edges of `root`; empty subtrees are left out and end at
    /// the sink through the fan-out padding.
    fn routing_tree(&mut self, root: usize, k: usize) -> Result<()> {
        let outs: Vec<usize> = (0..self.edges.len())
            .filter(|&i| self.edges[i].0 == root)
            .collect();
        if outs.is_empty() {
            return Ok(());
        }
        if outs.len() > 1usize << k {
            return Err(Error::Invalid(format!(
                "routing tree of depth {k} cannot host {} edges",
                outs.len()
            )));
        }
        self.subtree(root, k, &outs);
        Ok(())
    }

    fn subtree(&mut self, v: usize, depth: usize, outs: &[usize]) {
        if depth == 0 {
            debug_assert!(outs.len() <= 1);
            if let Some(&e) = outs.first() {
                self.edges[e].0 = v;
            }
            return;
        }
        let half = 1usize << (depth - 1);
        let (left, right) = outs.split_at(outs.len().min(half));
        for part in [left, right] {
            if part.is_empty() {
                continue;
            }
            let c = self.vertex();
            self.edges.push((v, c, false));
            self.subtree(c, depth - 1, part);
        }
    }
}

pub fn lrs_to_automata_pair_with_length(s: &Lrs, ell: usize) -> Result<AutomataPair> {
    let (p, q) = path_cycle_weights(s)?;
    let (m, k) = split_length(s, ell)?;
    let d = s.degree();
    let (sv, fv) = (0usize, 1usize);
    let mut b = Builder {
        edges: Vec::new(),
        vertices: 2,
    };
    for i in 1..=d {
        if p[i - 1].is_zero() {
            continue;
        }
        let first = if i == 1 { fv } else { b.vertex() };
        b.gadget(sv, first, &p[i - 1], m)?;
        let mut prev = first;
        for step in 1..i {
            let next = if step + 1 == i { fv } else { b.vertex() };
            b.path(prev, next, ell);
            prev = next;
        }
    }
    for i in 1..=d {
        if q[i - 1].is_zero() {
            continue;
        }
        let first = if i == 1 { fv } else { b.vertex() };
        b.gadget(fv, first, &q[i - 1], m)?;
        let mut prev = first;
        for step in 1..i {
            let next = if step + 1 == i { fv } else { b.vertex() };
            b.path(prev, next, ell);
            prev = next;
        }
    }
    b.routing_tree(sv, k)?;
    b.routing_tree(fv, k)?;
    let sink = b.vertex();
    let n = b.vertices;
    let mut outs: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for &(src, dst, flip) in &b.edges {
        outs[src].push((dst, flip));
    }
    for (v, o) in outs.iter_mut().enumerate() {
        if v == sink {
            continue;
        }
        if o.len() > 2 {
            return Err(Error::Invalid(format!(
                "vertex {v} has fan-out {}",
                o.len()
            )));
        }
        while o.len() < 2 {
            o.push((sink, false));
        }
    }
    outs[sink] = vec![(sink, false), (sink, false)];
    // state 2v + (sign is negative)
    let step = |st: usize, a: usize| {
        let (v, neg) = (st / 2, st % 2 == 1);
        let (dst, flip) = outs[v][a];
        2 * dst + usize::from(neg ^ flip)
    };
    let alphabet = ["0", "1"];
    let a = Dfa::from_fn(&alphabet, 2 * n, 2 * sv, &[2 * fv], step)?.canonical();
    let bb = Dfa::from_fn(&alphabet, 2 * n, 2 * sv, &[2 * fv + 1], step)?.canonical();
    Ok(AutomataPair {
        a,
        b: bb,
        ell,
        m,
        k,
    })
}

/// Signed walk-count identity check used by tests: `x_n` for `n = 1..=upto`.
pub fn pair_differences(p: &AutomataPair, upto: usize) -> Vec<Int> {
    (1..=upto).map(|n| p.difference(n)).collect()
}

pub fn counts_off_multiples_vanish(p: &AutomataPair, max_len: usize) -> bool {
    (0..=max_len).filter(|len| len % p.ell != 0).all(|len| {
        p.a.count_words(len) == BigUint::zero() && p.b.count_words(len) == BigUint::zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    #[test]
    fn zero_sequence_gives_equal_counts() {
        let p = lrs_to_automata_pair(&Lrs::zero()).unwrap();
        assert!(pair_differences(&p, 4).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn fibonacci_differences() {
        let p = lrs_to_automata_pair(&Lrs::fibonacci()).unwrap();
        assert_eq!(pair_differences(&p, 4), ints(&[1, 1, 2, 3]));
        assert!(counts_off_multiples_vanish(&p, 4 * p.ell));
    }

    #[test]
    fn negative_constant() {
        let p = lrs_to_automata_pair(&Lrs::from_i64(&[1], &[-2]).unwrap()).unwrap();
        assert_eq!(pair_differences(&p, 3), ints(&[-2, -2, -2]));
    }

    #[test]
    fn padded_length() {
        let s = Lrs::from_i64(&[0, 1], &[1, 0]).unwrap();
        let base = default_length(&s).unwrap();
        let p = lrs_to_automata_pair_with_length(&s, base + 3).unwrap();
        assert_eq!(p.ell, base + 3);
        assert_eq!(pair_differences(&p, 4), ints(&[1, 0, 1, 0]));
    }
}
