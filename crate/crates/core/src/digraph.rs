//! Directed multigraphs with integer weights or colors, and the two graph
//! constructions behind the automata pair: the recurrence graph `G_x` and the
//! path-counting gadget.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Int;
use crate::lrs::Lrs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    pub vertices: usize,
    pub edges: Vec<WeightedEdge>,
    pub start: usize,
    pub finish: usize,
}

impl WeightedDigraph {
    pub fn new(vertices: usize, start: usize, finish: usize) -> Self {
        WeightedDigraph {
            vertices,
            edges: Vec::new(),
            start,
            finish,
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, weight: Int) {
        assert!(
            src < self.vertices && dst < self.vertices,
            "edge endpoint out of range"
        );
        self.edges.push(WeightedEdge { src, dst, weight });
    }

    /// Sum over length-`n` start-to-finish walks of the product of edge weights.
    pub fn walk_weight_sum(&self, n: usize) -> Int {
        let mut cur = vec![Int::zero(); self.vertices];
        cur[self.start] = Int::one();
        for _ in 0..n {
            let mut next = vec![Int::zero(); self.vertices];
            for e in &self.edges {
                if !cur[e.src].is_zero() {
                    next[e.dst] += &cur[e.src] * &e.weight;
                }
            }
            cur = next;
        }
        cur[self.finish].clone()
    }

    /// Number of length-`n` walks from `from` to `to`, ignoring weights.
    pub fn count_paths(&self, from: usize, to: usize, n: usize) -> BigUint {
        let mut cur = vec![BigUint::zero(); self.vertices];
        cur[from] = BigUint::one();
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); self.vertices];
            for e in &self.edges {
                if !cur[e.src].is_zero() {
                    next[e.dst] += &cur[e.src];
                }
            }
            cur = next;
        }
        cur[to].clone()
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &WeightedEdge> {
        self.edges.iter().filter(move |e| e.src == v)
    }
}

/// Graph `G_x`: `d` paths `s -> f` of lengths `1..d` whose first edges carry
/// `p_i`, and `d` cycles through `f` of lengths `1..d` whose first edges carry
/// `q_i = a_i`. Vertex 0 is `s`, vertex 1 is `f`.
pub fn build_lrs_digraph(s: &Lrs) -> Result<WeightedDigraph> {
    let (p, q) = path_cycle_weights(s)?;
    let d = s.degree();
    let mut g = WeightedDigraph::new(2, 0, 1);
    for i in 1..=d {
        chain(&mut g, 0, 1, i, &p[i - 1]);
    }
    for i in 1..=d {
        chain(&mut g, 1, 1, i, &q[i - 1]);
    }
    Ok(g)
}

fn chain(g: &mut WeightedDigraph, from: usize, to: usize, len: usize, first: &Int) {
    let mut prev = from;
    for step in 0..len {
        let next = if step + 1 == len { to } else { g.add_vertex() };
        let w = if step == 0 { first.clone() } else { Int::one() };
        g.add_edge(prev, next, w);
        prev = next;
    }
}

/// `(p, q)` with `q_i = a_i` and `p_i = b_i - sum_{j<i} q_{i-j} b_j`.
pub fn path_cycle_weights(s: &Lrs) -> Result<(Vec<Int>, Vec<Int>)> {
    if !s.is_integer() {
        return Err(Error::NonInteger(
            "graph construction needs integer coefficients and initial values".into(),
        ));
    }
    let a: Vec<Int> = s.coeffs().iter().map(|x| x.to_integer()).collect();
    let b: Vec<Int> = s.init().iter().map(|x| x.to_integer()).collect();
    let d = s.degree();
    let mut p = Vec::with_capacity(d);
    for i in 1..=d {
        let mut v = b[i - 1].clone();
        for j in 1..i {
            v -= &a[i - j - 1] * &b[j - 1];
        }
        p.push(v);
    }
    Ok((p, a))
}

/// Graph with exactly `n` walks of length `k` from vertex 0 to vertex 1.
///
/// Bit `j` of `n` contributes a thread: `j` doubled edges followed by a simple
/// path of length `k - j`.
pub fn build_counting_digraph(n: &BigUint, k: usize) -> Result<WeightedDigraph> {
    let mut g = WeightedDigraph::new(2, 0, 1);
    let threads = counting_threads(&mut g, 0, 1, n, k)?;
    debug_assert!(!threads.is_empty());
    Ok(g)
}

/// Pastes the counting gadget for `n` between `src` and `dst` into `g` and
/// returns the indices of the edges leaving `src` (first edges of threads).
pub(crate) fn counting_threads(
    g: &mut WeightedDigraph,
    src: usize,
    dst: usize,
    n: &BigUint,
    k: usize,
) -> Result<Vec<usize>> {
    if n.is_zero() {
        return Err(Error::Invalid("counting digraph needs n >= 1".into()));
    }
    if k == 0 || n.bits() > k as u64 {
        return Err(Error::Invalid(format!(
            "counting digraph needs k > log2 n, got k = {k} for n = {n}"
        )));
    }
    let mut firsts = Vec::new();
    for j in 0..k {
        if !n.bit(j as u64) {
            continue;
        }
        let mut prev = src;
        for step in 0..k {
            let next = if step + 1 == k { dst } else { g.add_vertex() };
            let copies = if step < j { 2 } else { 1 };
            for _ in 0..copies {
                if prev == src {
                    firsts.push(g.edges.len());
                }
                g.add_edge(prev, next, Int::one());
            }
            prev = next;
        }
    }
    Ok(firsts)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredEdge {
    pub src: usize,
    pub dst: usize,
    /// Zero-based color index.
    pub color: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredDigraph {
    pub vertices: usize,
    pub colors: usize,
    pub edges: Vec<ColoredEdge>,
    pub a: usize,
    pub b: usize,
}

impl ColoredDigraph {
    pub fn new(vertices: usize, colors: usize, a: usize, b: usize) -> Self {
        ColoredDigraph {
            vertices,
            colors,
            edges: Vec::new(),
            a,
            b,
        }
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, color: usize) {
        assert!(src < self.vertices && dst < self.vertices && color < self.colors);
        self.edges.push(ColoredEdge { src, dst, color });
    }

    pub fn with_ends(&self, a: usize, b: usize) -> ColoredDigraph {
        ColoredDigraph {
            a,
            b,
            ..self.clone()
        }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.src].push(i);
        }
        adj
    }

    /// Color-count vectors of all `a -> b` walks of length at most `maxlen`.
    pub fn walk_weights(&self, maxlen: usize) -> BTreeSet<Vec<u64>> {
        let mut layer: BTreeSet<(usize, Vec<u64>)> = BTreeSet::new();
        layer.insert((self.a, vec![0; self.colors]));
        let mut out = BTreeSet::new();
        for step in 0..=maxlen {
            for (v, w) in &layer {
                if *v == self.b {
                    out.insert(w.clone());
                }
            }
            if step == maxlen {
                break;
            }
            let mut next = BTreeSet::new();
            for (v, w) in &layer {
                for e in self.edges.iter().filter(|e| e.src == *v) {
                    let mut w2 = w.clone();
                    w2[e.color] += 1;
                    next.insert((e.dst, w2));
                }
            }
            layer = next;
        }
        out
    }

    /// Whether some `a -> b` walk has color-count vector exactly `target`.
    pub fn has_walk_with_weight(&self, target: &[u64]) -> bool {
        use std::collections::HashSet;
        assert_eq!(target.len(), self.colors);
        let adj = self.adjacency();
        let mut seen: HashSet<(usize, Vec<u64>)> = HashSet::new();
        let mut stack = vec![(self.a, target.to_vec())];
        while let Some((v, rem)) = stack.pop() {
            if rem.iter().all(|&x| x == 0) && v == self.b {
                return true;
            }
            if !seen.insert((v, rem.clone())) {
                continue;
            }
            for &ei in &adj[v] {
                let e = &self.edges[ei];
                if rem[e.color] > 0 {
                    let mut r = rem.clone();
                    r[e.color] -= 1;
                    stack.push((e.dst, r));
                }
            }
        }
        false
    }
}

/// Exhaustive walk enumeration used as an oracle in tests.
pub fn brute_walk_weight_sum(g: &WeightedDigraph, n: usize) -> BigInt {
    fn go(g: &WeightedDigraph, v: usize, left: usize, acc: BigInt, out: &mut BigInt) {
        if left == 0 {
            if v == g.finish {
                *out += acc;
            }
            return;
        }
        for e in g.edges.iter().filter(|e| e.src == v) {
            go(g, e.dst, left - 1, &acc * &e.weight, out);
        }
    }
    let mut out = BigInt::zero();
    go(g, g.start, n, BigInt::one(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn fibonacci_graph_sums() {
        let g = build_lrs_digraph(&Lrs::fibonacci()).unwrap();
        let sums: Vec<Int> = (1..=6).map(|n| g.walk_weight_sum(n)).collect();
        assert_eq!(sums, crate::linalg::ints(&[1, 1, 2, 3, 5, 8]));
        assert_eq!(brute_walk_weight_sum(&g, 5), int(5));
    }

    #[test]
    fn degree_one_weights() {
        let s = Lrs::from_i64(&[2], &[3]).unwrap();
        let (p, q) = path_cycle_weights(&s).unwrap();
        assert_eq!((p[0].clone(), q[0].clone()), (int(3), int(2)));
        let g = build_lrs_digraph(&s).unwrap();
        assert_eq!(g.walk_weight_sum(3), int(12));
    }

    #[test]
    fn empty_walks() {
        let g = build_lrs_digraph(&Lrs::fibonacci()).unwrap();
        assert_eq!(g.walk_weight_sum(0), int(0));
        let loop_graph = WeightedDigraph::new(1, 0, 0);
        assert_eq!(loop_graph.walk_weight_sum(0), int(1));
    }

    #[test]
    fn counting_examples() {
        let g = build_counting_digraph(&11u32.into(), 4).unwrap();
        assert_eq!(g.count_paths(0, 1, 4), 11u32.into());
        let g = build_counting_digraph(&1u32.into(), 1).unwrap();
        assert_eq!(g.edges.len(), 1);
        let g = build_counting_digraph(&6u32.into(), 5).unwrap();
        assert_eq!(g.count_paths(0, 1, 5), 6u32.into());
        assert!(build_counting_digraph(&8u32.into(), 3).is_err());
        assert!(build_counting_digraph(&0u32.into(), 3).is_err());
    }

    #[test]
    fn colored_walks() {
        let mut g = ColoredDigraph::new(2, 1, 0, 1);
        g.add_edge(0, 1, 0);
        assert_eq!(g.walk_weights(1), [vec![1]].into_iter().collect());
        let mut l = ColoredDigraph::new(1, 1, 0, 0);
        l.add_edge(0, 0, 0);
        assert_eq!(l.walk_weights(3), (0..=3).map(|k| vec![k]).collect());
        let mut p = ColoredDigraph::new(3, 2, 0, 2);
        p.add_edge(0, 1, 0);
        p.add_edge(0, 1, 1);
        p.add_edge(1, 2, 0);
        assert_eq!(
            p.walk_weights(2),
            [vec![2, 0], vec![1, 1]].into_iter().collect()
        );
        assert!(p.has_walk_with_weight(&[1, 1]));
        assert!(!p.has_walk_with_weight(&[0, 2]));
    }
}
