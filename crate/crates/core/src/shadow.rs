//! Deciders for the injective and surjective filters, and the shadow
//! analysis of the one-letter counts `ν_n = Φⁿ e(id)`.
//!
//! The deciders iterate the capped vector `min(ν_n, K)` with `K` one more
//! than the Cayley graph order. For a nonnegative integer `Φ` the capped
//! vector evolves on its own, so it is eventually periodic, and a walk
//! hits `ν_n` under the order relations iff it hits the capped vector:
//! shortest down-hitting walks have fewer than `K` edges, and a color needed
//! `K` or more times in an up-hitting walk must lie on a cycle.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::dfa::Dfa;
use crate::digraph::ColoredDigraph;
use crate::error::{Error, Result};
use crate::filters::{brute_at_rank, Filter};
use crate::lattice::{join, ProgressionSet};
use crate::linalg::{Int, ZMatrix};
use crate::monoid::{phi_system, reverse_reduction, HitRelation, PhiSystem, WwhpInstance};

/// Largest residue modulus the shadow analysis accepts; `lcm(1..8)`.
pub const MAX_PERIOD: u64 = 840;

const SEARCH_BUDGET: u64 = 5_000_000;
const WITNESS_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexClass {
    /// On a directed cycle.
    pub v1: Vec<usize>,
    /// Off cycles, reachable from the start through a cycle vertex.
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
}

impl VertexClass {
    pub fn class_of(&self, v: usize) -> u8 {
        if self.v1.contains(&v) {
            1
        } else if self.v2.contains(&v) {
            2
        } else {
            3
        }
    }
}

/// Strongly connected component index of every vertex.
fn components(n: usize, adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for (v, ws) in adj.iter().enumerate() {
        for &w in ws {
            g.add_edge(nodes[v], nodes[w], ());
        }
    }
    let sccs = tarjan_scc(&g);
    let mut comp = vec![0; n];
    for (i, c) in sccs.iter().enumerate() {
        for v in c {
            comp[v.index()] = i;
        }
    }
    (comp, sccs.len())
}

fn successors(g: &ColoredDigraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.vertices];
    for e in &g.edges {
        adj[e.src].push(e.dst);
    }
    adj
}

fn reach_from(adj: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = sources.into_iter().collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

fn on_cycle(g: &ColoredDigraph) -> Vec<bool> {
    let adj = successors(g);
    let (comp, count) = components(g.vertices, &adj);
    let mut size = vec![0usize; count];
    for &c in &comp {
        size[c] += 1;
    }
    let mut cyc: Vec<bool> = (0..g.vertices).map(|v| size[comp[v]] > 1).collect();
    for e in &g.edges {
        if e.src == e.dst {
            cyc[e.src] = true;
        }
    }
    cyc
}

pub fn classify_vertices(g: &ColoredDigraph, id: usize) -> VertexClass {
    let adj = successors(g);
    let cyc = on_cycle(g);
    let from_id = reach_from(&adj, [id]);
    let through = reach_from(&adj, (0..g.vertices).filter(|&v| cyc[v] && from_id[v]));
    let mut c = VertexClass::default();
    for v in 0..g.vertices {
        if cyc[v] {
            c.v1.push(v);
        } else if through[v] {
            c.v2.push(v);
        } else {
            c.v3.push(v);
        }
    }
    c
}

/// The sets `R_n` of vertices reached by walks of length exactly `n`.
#[derive(Clone, Debug)]
pub struct ReachSequence {
    pub sets: Vec<Vec<bool>>,
    pub pre: usize,
    pub period: usize,
}

impl ReachSequence {
    pub fn new(g: &ColoredDigraph, id: usize) -> ReachSequence {
        let mut r = vec![false; g.vertices];
        r[id] = true;
        let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut sets = Vec::new();
        loop {
            if let Some(&first) = index.get(&r) {
                let period = sets.len() - first;
                return ReachSequence {
                    sets,
                    pre: first,
                    period,
                };
            }
            index.insert(r.clone(), sets.len());
            let mut next = vec![false; g.vertices];
            for e in &g.edges {
                if r[e.src] {
                    next[e.dst] = true;
                }
            }
            sets.push(std::mem::replace(&mut r, next));
        }
    }

    pub fn at(&self, n: u64) -> &[bool] {
        let n = n as usize;
        if n < self.sets.len() {
            &self.sets[n]
        } else {
            &self.sets[self.pre + (n - self.pre) % self.period]
        }
    }
}

/// `{n : some walk id → target has length n}`.
pub fn positivity_set(g: &ColoredDigraph, id: usize, target: usize) -> ProgressionSet {
    let r = ReachSequence::new(g, id);
    ProgressionSet::from_periodic(|n| r.at(n)[target], r.pre as u64, r.period as u64)
}

/// A simple cycle as its edge indices, starting at its least vertex.
type Cycle = Vec<usize>;

fn simple_cycles(g: &ColoredDigraph, budget: u64) -> Result<Vec<Cycle>> {
    let out = g.adjacency();
    let mut found = Vec::new();
    let mut spent = 0u64;
    for s in 0..g.vertices {
        let mut on_path = vec![false; g.vertices];
        on_path[s] = true;
        let mut path = Vec::new();
        rec(
            g,
            &out,
            s,
            s,
            &mut on_path,
            &mut path,
            &mut found,
            &mut spent,
            budget,
        )?;
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &ColoredDigraph,
        out: &[Vec<usize>],
        s: usize,
        v: usize,
        on_path: &mut Vec<bool>,
        path: &mut Vec<usize>,
        found: &mut Vec<Cycle>,
        spent: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *spent += 1;
        if *spent > budget {
            return Err(Error::Refused(format!(
                "simple cycle enumeration exceeded {budget} steps"
            )));
        }
        for &e in &out[v] {
            let w = g.edges[e].dst;
            path.push(e);
            if w == s {
                found.push(path.clone());
            } else if w > s && !on_path[w] {
                on_path[w] = true;
                rec(g, out, s, w, on_path, path, found, spent, budget)?;
                on_path[w] = false;
            }
            path.pop();
        }
        Ok(())
    }
    Ok(found)
}

/// Least common multiple of the simple cycle lengths (1 when acyclic).
/// Inserting a cycle at the first repeated vertex shows
/// `ν_{n+N} >= ν_n` for `n > |V|` with this `N`.
pub fn cycle_period(g: &ColoredDigraph) -> Result<u64> {
    let lengths: BTreeSet<u64> = simple_cycles(g, SEARCH_BUDGET)?
        .iter()
        .map(|c| c.len() as u64)
        .collect();
    Ok(lengths.into_iter().fold(1, |a, b| a.lcm(&b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordStatus {
    Bounded(Int),
    Unbounded,
}

/// Evidence for a coordinate status, read off the exact counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `ν_n = ν_{n+N}`.
    Stable { n: u64 },
    /// `ν_{n1} < ν_{n2}` with `n1 ≡ n2 (mod N)`.
    Growing { n1: u64, n2: u64 },
}

/// Per residue `r < N` and coordinate `g`, the behavior of `ν_{kN+r}(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub period: u64,
    pub horizon: u64,
    pub classes: VertexClass,
    pub status: Vec<Vec<CoordStatus>>,
    pub certificates: Vec<Vec<Certificate>>,
}

impl Components {
    pub fn unbounded(&self, r: u64) -> Vec<usize> {
        let row = &self.status[(r % self.period) as usize];
        (0..row.len())
            .filter(|&g| row[g] == CoordStatus::Unbounded)
            .collect()
    }
}

/// Exact counts `ν_0..ν_len` on the successor table.
fn nu_table(sys: &PhiSystem, len: u64) -> Vec<Vec<Int>> {
    let mut out = Vec::with_capacity(len as usize + 1);
    let mut v = sys.x0.clone();
    for _ in 0..=len {
        let next = sys.apply(&v);
        out.push(std::mem::replace(&mut v, next));
    }
    out
}

/// Which coordinates grow without bound along each residue class modulo
/// the cycle period `N`.
///
/// A cycle vertex `g` is unbounded along `r` iff some simple cycle `C`
/// through it has an entering edge `g' → g''` off `C` such that `g'` is
/// reachable at infinitely many times `≡ r - ℓ - 1 - j|C| (mod N)` for
/// some `0 <= j < N/|C|`, where `ℓ` is the distance `g'' → g` along `C`.
/// Vertices off cycles inherit from their predecessors one step earlier.
pub fn unbounded_components(sys: &PhiSystem) -> Result<Components> {
    let g = sys.graph();
    let v = g.vertices as u64;
    let period = cycle_period(&g)?;
    if period > MAX_PERIOD {
        return Err(Error::Refused(format!(
            "cycle period {period} exceeds {MAX_PERIOD}"
        )));
    }
    let classes = classify_vertices(&g, 0);
    let reach = ReachSequence::new(&g, 0);
    let settled = (reach.pre as u64).max(v + 1);
    let span = period.lcm(&(reach.period as u64));
    // reachable at infinitely many times in the class of `s`
    let often = |u: usize, s: u64| {
        (0..span / period)
            .any(|k| reach.at(settled + (s + period - settled % period) % period + k * period)[u])
    };
    let cycles = simple_cycles(&g, SEARCH_BUDGET)?;
    let cyc = on_cycle(&g);
    let mut status = vec![vec![CoordStatus::Bounded(Int::zero()); g.vertices]; period as usize];
    let mut unb = vec![vec![false; g.vertices]; period as usize];
    for cycle in &cycles {
        let len = cycle.len() as u64;
        let verts: Vec<usize> = cycle.iter().map(|&e| g.edges[e].src).collect();
        let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        for (ei, e) in g.edges.iter().enumerate() {
            let Some(&j_in) = pos.get(&e.dst) else {
                continue;
            };
            if cycle.contains(&ei) {
                continue;
            }
            for (i, &target) in verts.iter().enumerate() {
                let ell = ((i + cycle.len() - j_in) % cycle.len()) as u64;
                for r in 0..period {
                    if unb[r as usize][target] {
                        continue;
                    }
                    let hit = (0..period / len).any(|j| {
                        let back = (ell + 1 + j * len) % period;
                        often(e.src, (r + period - back) % period)
                    });
                    if hit {
                        unb[r as usize][target] = true;
                    }
                }
            }
        }
    }
    // off-cycle vertices: predecessors one step earlier; the off-cycle part is acyclic
    let mut memo: HashMap<(usize, u64), bool> = HashMap::new();
    fn off_cycle(
        g: &ColoredDigraph,
        cyc: &[bool],
        unb: &[Vec<bool>],
        period: u64,
        u: usize,
        r: u64,
        memo: &mut HashMap<(usize, u64), bool>,
    ) -> bool {
        if cyc[u] {
            return unb[r as usize][u];
        }
        if let Some(&b) = memo.get(&(u, r)) {
            return b;
        }
        let prev = (r + period - 1) % period;
        let b = g
            .edges
            .iter()
            .any(|e| e.dst == u && off_cycle(g, cyc, unb, period, e.src, prev, memo));
        memo.insert((u, r), b);
        b
    }
    for r in 0..period {
        for u in 0..g.vertices {
            if !cyc[u] {
                let b = off_cycle(&g, &cyc, &unb, period, u, r, &mut memo);
                unb[r as usize][u] = b;
            }
        }
    }
    // certificates on the exact counts
    let mut horizon = settled + v + 2 * period;
    let certificates = loop {
        let table = nu_table(sys, horizon + 4 * period);
        let mut certs = vec![Vec::with_capacity(g.vertices); period as usize];
        let mut ok = true;
        'outer: for r in 0..period {
            let n = horizon + (r + period - horizon % period) % period;
            for u in 0..g.vertices {
                let at = |m: u64| &table[m as usize][u];
                if unb[r as usize][u] {
                    match (1..=3).map(|k| n + k * period).find(|&m| at(m) > at(n)) {
                        Some(n2) => certs[r as usize].push(Certificate::Growing { n1: n, n2 }),
                        None => {
                            return Err(Error::Invalid(format!(
                                "coordinate {u} classified unbounded but does not grow"
                            )))
                        }
                    }
                } else if at(n) == at(n + period) && at(n) == at(n + 2 * period) {
                    status[r as usize][u] = CoordStatus::Bounded(at(n).clone());
                    certs[r as usize].push(Certificate::Stable { n });
                } else {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            break certs;
        }
        if horizon > 64 * (v + 1) * period {
            return Err(Error::Invalid(
                "bounded coordinate failed to stabilize".into(),
            ));
        }
        horizon *= 2;
    };
    for r in 0..period as usize {
        for u in 0..g.vertices {
            if unb[r][u] {
                status[r][u] = CoordStatus::Unbounded;
            }
        }
    }
    Ok(Components {
        period,
        horizon,
        classes,
        status,
        certificates,
    })
}

/// Minimal elements of `{ν_i : 1 <= i <= |V| + N}` under the componentwise order.
pub fn up_shadow_corners(sys: &PhiSystem, period: u64) -> Vec<Vec<Int>> {
    let table = nu_table(sys, sys.dim() as u64 + period);
    let pts: BTreeSet<Vec<Int>> = table.into_iter().skip(1).collect();
    let below = |a: &Vec<Int>, b: &Vec<Int>| a != b && a.iter().zip(b).all(|(x, y)| x <= y);
    pts.iter()
        .filter(|p| !pts.iter().any(|q| below(q, p)))
        .cloned()
        .collect()
}

pub fn is_antichain(pts: &[Vec<Int>]) -> bool {
    pts.iter().enumerate().all(|(i, a)| {
        pts.iter()
            .enumerate()
            .all(|(j, b)| i == j || !a.iter().zip(b).all(|(x, y)| x <= y))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowRepr {
    pub corners: Vec<Vec<Int>>,
    pub down: Components,
}

pub fn shadow_repr(sys: &PhiSystem) -> Result<ShadowRepr> {
    let down = unbounded_components(sys)?;
    Ok(ShadowRepr {
        corners: up_shadow_corners(sys, down.period),
        down,
    })
}

/// Componentwise `min(x, cap)`; `None` on a negative entry.
fn cap_vec(x: &[Int], cap: u64) -> Option<Vec<u64>> {
    x.iter()
        .map(|v| {
            if v.is_negative() {
                None
            } else {
                Some(v.to_u64().map_or(cap, |u| u.min(cap)))
            }
        })
        .collect()
}

fn cap_step(phi: &ZMatrix, c: &[u64], cap: u64) -> Vec<u64> {
    (0..phi.rows())
        .map(|i| {
            let mut s: u64 = 0;
            for (j, &cj) in c.iter().enumerate() {
                let a = phi.get(i, j).to_u64().unwrap_or(u64::MAX);
                s = s.saturating_add(a.saturating_mul(cj));
            }
            s.min(cap)
        })
        .collect()
}

/// Walk `start → target` (nonempty) using color `f` at most `c_f` times.
fn down_hit(
    g: &ColoredDigraph,
    start: usize,
    targets: &[bool],
    c: &[u64],
    cap: u64,
    spent: &mut u64,
) -> Result<bool> {
    let limited: Vec<usize> = (0..g.colors).filter(|&f| c[f] > 0 && c[f] < cap).collect();
    let slot: HashMap<usize, usize> = limited.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let out = g.adjacency();
    let mut seen: HashSet<(usize, Vec<u64>)> = HashSet::new();
    let mut queue = VecDeque::new();
    let advance = |v: usize, used: &Vec<u64>, out_q: &mut Vec<(usize, Vec<u64>)>| {
        for &e in &out[v] {
            let edge = &g.edges[e];
            if c[edge.color] == 0 {
                continue;
            }
            let mut u = used.clone();
            if let Some(&i) = slot.get(&edge.color) {
                if u[i] == c[edge.color] {
                    continue;
                }
                u[i] += 1;
            }
            out_q.push((edge.dst, u));
        }
    };
    let mut next = Vec::new();
    advance(start, &vec![0; limited.len()], &mut next);
    for s in next {
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some((v, used)) = queue.pop_front() {
        *spent += 1;
        if *spent > SEARCH_BUDGET {
            return Err(Error::Refused(format!(
                "down-hit search exceeded {SEARCH_BUDGET} states"
            )));
        }
        if targets[v] {
            return Ok(true);
        }
        let mut next = Vec::new();
        advance(v, &used, &mut next);
        for s in next {
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    Ok(false)
}

/// Walk `start → target` using exactly the colors with `c_f > 0`, each
/// at least `c_f` times. Searches paths in the condensation: colors inside
/// a visited cyclic component are free, bridge colors are counted.
fn up_hit(
    g: &ColoredDigraph,
    start: usize,
    targets: &[bool],
    c: &[u64],
    cap: u64,
    spent: &mut u64,
) -> Result<bool> {
    if c.iter().all(|&x| x == 0) {
        return Ok(false);
    }
    let n = g.vertices;
    let mut adj = vec![Vec::new(); n];
    for e in g.edges.iter().filter(|e| c[e.color] > 0) {
        adj[e.src].push(e.dst);
    }
    let (comp, count) = components(n, &adj);
    let mut internal = vec![vec![false; g.colors]; count];
    let mut bridges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    let mut size = vec![0usize; count];
    for &k in &comp {
        size[k] += 1;
    }
    let mut cyclic: Vec<bool> = size.iter().map(|&s| s > 1).collect();
    for e in g.edges.iter().filter(|e| c[e.color] > 0) {
        let (a, b) = (comp[e.src], comp[e.dst]);
        if a == b {
            cyclic[a] = true;
            internal[a][e.color] = true;
        } else {
            bridges[a].push((b, e.color));
        }
    }
    let mut has_target = vec![false; count];
    for v in 0..n {
        if targets[v] {
            has_target[comp[v]] = true;
        }
    }
    struct Ctx<'a> {
        c: &'a [u64],
        cap: u64,
        internal: &'a [Vec<bool>],
        cyclic: &'a [bool],
        bridges: &'a [Vec<(usize, usize)>],
        has_target: &'a [bool],
        memo: HashSet<(usize, Vec<bool>, Vec<u64>)>,
    }
    fn dfs(
        x: &mut Ctx,
        k: usize,
        mut covered: Vec<bool>,
        counts: Vec<u64>,
        spent: &mut u64,
    ) -> Result<bool> {
        *spent += 1;
        if *spent > SEARCH_BUDGET {
            return Err(Error::Refused(format!(
                "up-hit search exceeded {SEARCH_BUDGET} states"
            )));
        }
        if x.cyclic[k] {
            for (cv, &i) in covered.iter_mut().zip(&x.internal[k]) {
                *cv |= i;
            }
        }
        if !x.memo.insert((k, covered.clone(), counts.clone())) {
            return Ok(false);
        }
        if x.has_target[k]
            && (0..x.c.len()).all(|f| x.c[f] == 0 || covered[f] || counts[f] >= x.c[f])
        {
            return Ok(true);
        }
        for i in 0..x.bridges[k].len() {
            let (d, f) = x.bridges[k][i];
            let mut cnt = counts.clone();
            cnt[f] = (cnt[f] + 1).min(x.cap);
            if dfs(x, d, covered.clone(), cnt, spent)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut ctx = Ctx {
        c,
        cap,
        internal: &internal,
        cyclic: &cyclic,
        bridges: &bridges,
        has_target: &has_target,
        memo: HashSet::new(),
    };
    dfs(
        &mut ctx,
        comp[start],
        vec![false; g.colors],
        vec![0; g.colors],
        spent,
    )
}

fn hits(
    rel: HitRelation,
    g: &ColoredDigraph,
    start: usize,
    targets: &[bool],
    c: &[u64],
    cap: u64,
    spent: &mut u64,
) -> Result<bool> {
    match rel {
        HitRelation::Down => down_hit(g, start, targets, c, cap, spent),
        HitRelation::Up => up_hit(g, start, targets, c, cap, spent),
        HitRelation::Exact => Err(Error::Refused(
            "exact walk hitting has no complete decider".into(),
        )),
    }
}

/// Least `n >= min_power` where the capped orbit is hit; `None` once the
/// capped orbit repeats. Also returns the number of ranks examined.
fn first_hit(
    rel: HitRelation,
    g: &ColoredDigraph,
    targets: &[bool],
    phi: &ZMatrix,
    x0: &[Int],
    min_power: u64,
) -> Result<(Option<u64>, u64)> {
    let cap = g.vertices as u64 + 1;
    let mut c = cap_vec(x0, cap)
        .ok_or_else(|| Error::Invalid("orbit start has a negative entry".into()))?;
    for _ in 0..min_power {
        c = cap_step(phi, &c, cap);
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut spent = 0u64;
    let mut n = min_power;
    while seen.insert(c.clone()) {
        if hits(rel, g, g.a, targets, &c, cap, &mut spent)? {
            return Ok((Some(n), n - min_power + 1));
        }
        c = cap_step(phi, &c, cap);
        n += 1;
    }
    Ok((None, n - min_power))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitDecision {
    pub verdict: bool,
    pub rank: Option<u64>,
    pub examined: u64,
}

/// Complete decision of a down- or up-hitting instance with nonnegative data.
pub fn decide_hit(inst: &WwhpInstance) -> Result<HitDecision> {
    if !inst.is_nonnegative() {
        return Err(Error::Refused(
            "the order-hitting deciders need nonnegative Φ and x0".into(),
        ));
    }
    let mut targets = vec![false; inst.graph.vertices];
    targets[inst.graph.b] = true;
    let (rank, examined) = first_hit(
        inst.relation,
        &inst.graph,
        &targets,
        &inst.phi,
        &inst.x0,
        inst.min_power as u64,
    )?;
    Ok(HitDecision {
        verdict: rank.is_some(),
        rank,
        examined,
    })
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub filter: Filter,
    pub verdict: bool,
    /// Least block rank admitting an accepted filter word.
    pub rank: Option<u64>,
    pub examined: u64,
    /// Valid Cayley vertices, one hitting instance each.
    pub instances: Vec<usize>,
    pub monoid_size: usize,
    pub carrier_size: usize,
    pub classes: VertexClass,
    pub shadow: std::result::Result<ShadowRepr, String>,
    pub witness: Option<String>,
}

/// Is some filter word accepted by `a`? `filter` is injective or surjective.
pub fn decide(a: &Dfa, filter: Filter) -> Result<Decision> {
    let rel = match filter {
        Filter::Injective => HitRelation::Down,
        Filter::Surjective => HitRelation::Up,
        _ => {
            return Err(Error::Invalid(format!(
                "no complete decider for the {} filter",
                filter.name()
            )))
        }
    };
    let red = reverse_reduction(a)?;
    let mut targets = vec![false; red.graph.vertices];
    for &h in &red.valid {
        targets[h] = true;
    }
    let (rank, examined) = if red.valid.is_empty() {
        (None, 0)
    } else {
        first_hit(
            rel,
            &red.graph,
            &targets,
            &red.system.phi,
            &red.system.x0,
            1,
        )?
    };
    let mut witness = None;
    if let Some(n) = rank {
        for m in n..=2 {
            if let Ok(Some(w)) = brute_at_rank(a, filter, m as usize, WITNESS_BUDGET, 4) {
                witness = Some(w);
                break;
            }
        }
    }
    let sys = &red.system;
    Ok(Decision {
        filter,
        verdict: rank.is_some(),
        rank,
        examined,
        instances: red.valid.clone(),
        monoid_size: red.monoid.size(),
        carrier_size: sys.dim(),
        classes: classify_vertices(&sys.graph(), 0),
        shadow: shadow_repr(sys).map_err(|e| e.to_string()),
        witness,
    })
}

pub fn decide_surjective(a: &Dfa) -> Result<bool> {
    Ok(decide(a, Filter::Surjective)?.verdict)
}

pub fn decide_injective(a: &Dfa) -> Result<bool> {
    Ok(decide(a, Filter::Injective)?.verdict)
}

/// The carrier system of `a`, for callers that only need the shadow.
pub fn shadow_of(a: &Dfa) -> Result<ShadowRepr> {
    shadow_repr(&phi_system(a)?)
}

fn ids(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "filter {}", self.filter.name())?;
        writeln!(f, "verdict {}", if self.verdict { "yes" } else { "no" })?;
        match self.rank {
            Some(n) => writeln!(f, "rank {n}")?,
            None => writeln!(f, "rank none")?,
        }
        writeln!(f, "examined {}", self.examined)?;
        writeln!(f, "carrier {}", self.carrier_size)?;
        writeln!(f, "monoid {}", self.monoid_size)?;
        writeln!(f, "valid {}", ids(&self.instances))?;
        writeln!(f, "v1 {}", ids(&self.classes.v1))?;
        writeln!(f, "v2 {}", ids(&self.classes.v2))?;
        writeln!(f, "v3 {}", ids(&self.classes.v3))?;
        match &self.shadow {
            Ok(s) => write!(f, "{s}")?,
            Err(e) => writeln!(f, "shadow refused {e}")?,
        }
        match &self.witness {
            Some(w) => writeln!(f, "witness {w}"),
            None => writeln!(f, "witness none"),
        }
    }
}

impl fmt::Display for ShadowRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "period {}", self.down.period)?;
        writeln!(f, "horizon {}", self.down.horizon)?;
        for c in &self.corners {
            writeln!(f, "corner {}", join(c))?;
        }
        for (r, row) in self.down.status.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .map(|s| match s {
                    CoordStatus::Bounded(v) => v.to_string(),
                    CoordStatus::Unbounded => "inf".into(),
                })
                .collect();
            writeln!(f, "residue {r} {}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{brute_realizability, BruteLimits, BruteOutcome};

    fn dfa3(states: usize, accepting: &[usize], step: impl Fn(usize, usize) -> usize) -> Dfa {
        Dfa::from_fn(&["0", "1", "#"], states, 0, accepting, step).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> ColoredDigraph {
        let mut g = ColoredDigraph::new(n, 1, 0, 0);
        for &(a, b) in edges {
            g.add_edge(a, b, 0);
        }
        g
    }

    #[test]
    fn classification() {
        let c = classify_vertices(&graph(1, &[(0, 0)]), 0);
        assert_eq!(c.v1, vec![0]);
        let c = classify_vertices(&graph(3, &[(0, 1), (1, 2)]), 0);
        assert_eq!(c.v3, vec![0, 1, 2]);
        let c = classify_vertices(&graph(4, &[(0, 1), (1, 2), (2, 1), (2, 3)]), 0);
        assert_eq!(
            (c.v1.clone(), c.v2.clone(), c.v3.clone()),
            (vec![1, 2], vec![3], vec![0])
        );
    }

    #[test]
    fn positivity() {
        let p = positivity_set(&graph(1, &[(0, 0)]), 0, 0);
        assert!((0..20).all(|n| p.contains(n)));
        let p = positivity_set(&graph(4, &[(0, 1), (1, 2), (2, 3)]), 0, 3);
        assert!((0..20).all(|n| p.contains(n) == (n == 3)));
        // cycles of lengths 2 and 3 through vertex 0
        let g = graph(4, &[(0, 1), (1, 0), (0, 2), (2, 3), (3, 0)]);
        let p = positivity_set(&g, 0, 0);
        let dp = ReachSequence::new(&g, 0);
        for n in 0..=40u64 {
            assert_eq!(p.contains(n), dp.at(n)[0], "n = {n}");
        }
        assert!(p.contains(40) && !p.contains(1));
    }

    fn system(phi: ZMatrix) -> PhiSystem {
        let dim = phi.rows();
        let mut succ = Vec::new();
        for f in 0..dim {
            let mut s = Vec::new();
            for g in 0..dim {
                for _ in 0..phi.get(g, f).to_u64().unwrap() {
                    s.push(g);
                }
            }
            succ.push([s[0], s[1]]);
        }
        let mut x0 = vec![Int::zero(); dim];
        x0[0] = Int::from(1);
        PhiSystem {
            carrier: vec![crate::monoid::StateMap::identity(1); dim],
            succ,
            phi,
            x0,
        }
    }

    #[test]
    fn boundedness() {
        // two parallel loops: ν doubles
        let c = unbounded_components(&system(ZMatrix::from_i64(1, 1, &[2]))).unwrap();
        assert_eq!(c.unbounded(0), vec![0]);
        // a 2-cycle of doubled edges: the parallel edge is a chord
        let c = unbounded_components(&system(ZMatrix::from_i64(2, 2, &[0, 2, 2, 0]))).unwrap();
        assert_eq!(c.period, 2);
        assert_eq!((c.unbounded(0), c.unbounded(1)), (vec![0], vec![1]));
        assert_eq!(c.status[0][1], CoordStatus::Bounded(Int::zero()));
        // id → a; a loops twice: id bounded (0), a unbounded
        let c = unbounded_components(&system(ZMatrix::from_i64(2, 2, &[0, 0, 2, 2]))).unwrap();
        assert_eq!(c.unbounded(0), vec![1]);
        assert_eq!(c.status[0][0], CoordStatus::Bounded(Int::zero()));
    }

    #[test]
    fn golden_deciders() {
        let all = dfa3(1, &[0], |_, _| 0);
        assert!(decide_surjective(&all).unwrap() && decide_injective(&all).unwrap());
        // blocks start with 0: 0 after state 1 (just read #) rejects on 1
        let start0 = dfa3(3, &[1], |q, a| match (q, a) {
            (2, _) => 2,
            (_, 2) => 1,
            (1, 1) => 2,
            (1, 0) | (0, _) => 0,
            _ => 0,
        });
        assert!(!decide_surjective(&start0).unwrap());
        assert!(decide_injective(&start0).unwrap());
        let empty = dfa3(2, &[0], |_, _| 1);
        assert!(!decide_surjective(&empty).unwrap() && !decide_injective(&empty).unwrap());
    }

    #[test]
    fn agrees_with_brute_force_on_small_automata() {
        let mut seed = 7u64;
        for _ in 0..60 {
            let mut table = [[0usize; 3]; 2];
            for row in table.iter_mut() {
                for x in row.iter_mut() {
                    seed = seed
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    *x = (seed >> 33) as usize % 2;
                }
            }
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let acc: Vec<usize> = (0..2).filter(|q| (seed >> (40 + q)) & 1 == 1).collect();
            let a = dfa3(2, &acc, |q, s| table[q][s]);
            for filter in [Filter::Injective, Filter::Surjective] {
                let d = decide(&a, filter).unwrap();
                let brute = brute_realizability(
                    &a,
                    filter,
                    BruteLimits {
                        max_rank: 2,
                        budget: 5_000_000,
                        slack: 6,
                    },
                )
                .unwrap();
                if let BruteOutcome::Witness { .. } = brute {
                    assert!(d.verdict, "{filter:?} {table:?} {acc:?}");
                }
                if d.verdict && d.rank.unwrap() <= 2 {
                    assert!(d.witness.is_some(), "{filter:?} {table:?} {acc:?}");
                }
            }
        }
    }

    #[test]
    fn corners_form_an_antichain() {
        let a = dfa3(3, &[0], |q, s| (q + s) % 3);
        let s = shadow_of(&a).unwrap();
        assert!(is_antichain(&s.corners));
    }
}
