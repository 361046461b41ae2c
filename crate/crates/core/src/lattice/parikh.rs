//! Parikh images of walk sets in colored digraphs.
//!
//! A walk `a → b` is a simple path plus a multiset of simple cycles whose
//! vertex sets, together with the path, form a connected family; conversely
//! every such family with each cycle used at least once is realized by a
//! walk. Each (path, connected cycle set) pair gives one linear set.

use std::collections::BTreeSet;

use crate::digraph::ColoredDigraph;
use crate::error::{Error, Result};
use crate::lattice::{SemilinearSet, TranslatedCone};
use crate::linalg::Int;

/// Cap on the number of distinct simple cycles.
pub const MAX_CYCLES: usize = 18;

type Piece = (u64, Vec<u64>);

fn simple_paths(g: &ColoredDigraph, out: &[Vec<usize>]) -> BTreeSet<Piece> {
    let mut found = BTreeSet::new();
    let mut w = vec![0u64; g.colors];
    fn rec(
        g: &ColoredDigraph,
        out: &[Vec<usize>],
        v: usize,
        mask: u64,
        w: &mut Vec<u64>,
        found: &mut BTreeSet<Piece>,
    ) {
        if v == g.b {
            found.insert((mask, w.clone()));
            return;
        }
        for &e in &out[v] {
            let edge = &g.edges[e];
            if mask & (1 << edge.dst) != 0 {
                continue;
            }
            w[edge.color] += 1;
            rec(g, out, edge.dst, mask | (1 << edge.dst), w, found);
            w[edge.color] -= 1;
        }
    }
    rec(g, out, g.a, 1 << g.a, &mut w, &mut found);
    found
}

fn simple_cycles(g: &ColoredDigraph, out: &[Vec<usize>], cap: usize) -> Result<BTreeSet<Piece>> {
    let mut found = BTreeSet::new();
    for s in 0..g.vertices {
        let mut w = vec![0u64; g.colors];
        rec(g, out, s, s, 1 << s, &mut w, &mut found, cap)?;
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &ColoredDigraph,
        out: &[Vec<usize>],
        s: usize,
        v: usize,
        mask: u64,
        w: &mut Vec<u64>,
        found: &mut BTreeSet<Piece>,
        cap: usize,
    ) -> Result<()> {
        for &e in &out[v] {
            let edge = &g.edges[e];
            w[edge.color] += 1;
            if edge.dst == s {
                found.insert((mask, w.clone()));
                if found.len() > cap {
                    return Err(Error::Refused(format!("more than {cap} simple cycles")));
                }
            } else if edge.dst > s && mask & (1 << edge.dst) == 0 {
                rec(g, out, s, edge.dst, mask | (1 << edge.dst), w, found, cap)?;
            }
            w[edge.color] -= 1;
        }
        Ok(())
    }
    Ok(found)
}

/// Weights of all walks `g.a → g.b` as a semilinear set.
pub fn parikh(g: &ColoredDigraph) -> Result<SemilinearSet> {
    if g.vertices > 64 {
        return Err(Error::Refused(
            "Parikh construction supports at most 64 vertices".into(),
        ));
    }
    let out = g.adjacency();
    let paths = simple_paths(g, &out);
    let cycles: Vec<Piece> = simple_cycles(g, &out, MAX_CYCLES)?.into_iter().collect();
    let mut comps: BTreeSet<(Vec<u64>, Vec<Vec<u64>>)> = BTreeSet::new();
    for (pmask, pw) in &paths {
        for subset in 0u32..(1u32 << cycles.len()) {
            let chosen: Vec<&Piece> = (0..cycles.len())
                .filter(|i| subset & (1 << i) != 0)
                .map(|i| &cycles[i])
                .collect();
            if !connected(*pmask, &chosen) {
                continue;
            }
            let mut base = pw.clone();
            let mut periods: Vec<Vec<u64>> = Vec::new();
            for (_, cw) in &chosen {
                for (b, c) in base.iter_mut().zip(cw) {
                    *b += c;
                }
                periods.push(cw.clone());
            }
            periods.sort();
            periods.dedup();
            comps.insert((base, periods));
        }
    }
    let to_int = |v: &Vec<u64>| v.iter().map(|&x| Int::from(x)).collect::<Vec<Int>>();
    Ok(SemilinearSet {
        dim: g.colors,
        components: comps
            .into_iter()
            .map(|(b, ps)| TranslatedCone {
                apex: to_int(&b),
                generators: ps.iter().map(to_int).collect(),
            })
            .collect(),
    })
}

fn connected(pmask: u64, cycles: &[&Piece]) -> bool {
    let mut reached = pmask;
    let mut used = vec![false; cycles.len()];
    loop {
        let mut grew = false;
        for (i, (m, _)) in cycles.iter().enumerate() {
            if !used[i] && m & reached != 0 {
                used[i] = true;
                reached |= m;
                grew = true;
            }
        }
        if !grew {
            return used.iter().all(|&u| u);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    fn u64s(v: &[i64]) -> Vec<u64> {
        v.iter().map(|&x| x as u64).collect()
    }

    fn agrees(g: &ColoredDigraph, maxlen: usize) {
        let s = parikh(g).unwrap();
        let walks = g.walk_weights(maxlen);
        for w in &walks {
            let x: Vec<Int> = w.iter().map(|&c| Int::from(c)).collect();
            assert!(s.contains(&x), "missing {w:?}");
        }
        // every small member of the set is a walk weight
        let total = |v: &[u64]| v.iter().sum::<u64>() as usize;
        for c in &s.components {
            let mut stack = vec![c.apex.clone()];
            while let Some(x) = stack.pop() {
                let xv: Vec<u64> = x.iter().map(|v| v.try_into().unwrap()).collect();
                if total(&xv) > maxlen {
                    continue;
                }
                assert!(walks.contains(&xv), "spurious {xv:?}");
                for p in &c.generators {
                    stack.push(x.iter().zip(p).map(|(a, b)| a + b).collect());
                }
            }
        }
    }

    #[test]
    fn examples() {
        let mut g = ColoredDigraph::new(2, 1, 0, 1);
        g.add_edge(0, 1, 0);
        let s = parikh(&g).unwrap();
        assert_eq!(s.components, vec![TranslatedCone::point(ints(&[1]))]);

        let mut g = ColoredDigraph::new(1, 1, 0, 0);
        g.add_edge(0, 0, 0);
        let s = parikh(&g).unwrap();
        assert!(s.contains(&ints(&[0])) && s.contains(&ints(&[5])));

        let mut g = ColoredDigraph::new(3, 2, 0, 2);
        g.add_edge(0, 1, 0);
        g.add_edge(1, 2, 1);
        g.add_edge(1, 1, 0);
        let s = parikh(&g).unwrap();
        assert!(s
            .components
            .iter()
            .any(|c| c.apex == ints(&[1, 1]) && c.generators.is_empty()));
        assert!(s
            .components
            .iter()
            .any(|c| c.generators == vec![ints(&[1, 0])]));
        agrees(&g, 8);
        let _ = u64s(&[0]);
    }

    #[test]
    fn cycles_reached_through_cycles() {
        // path 0 → 1; cycle 1 ↔ 2; cycle 2 ↔ 3 does not touch the path
        let mut g = ColoredDigraph::new(4, 3, 0, 1);
        g.add_edge(0, 1, 0);
        g.add_edge(1, 2, 1);
        g.add_edge(2, 1, 1);
        g.add_edge(2, 3, 2);
        g.add_edge(3, 2, 2);
        let s = parikh(&g).unwrap();
        assert!(s.contains(&ints(&[1, 2, 2])));
        assert!(!s.contains(&ints(&[1, 0, 2])));
        agrees(&g, 10);
    }
}
