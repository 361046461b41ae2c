//! The pairing automata `C` (equal counts), `C_<` (strictly fewer) and the
//! combined automaton for several constraints, together with canonical
//! permutation-word witnesses.

use crate::dfa::{all_words, classify_block, BlockClass, Dfa, Word};
use crate::error::{Error, Result};
use crate::fwd::block::{assemble, Classifier, Control};
use crate::fwd::pair::AutomataPair;

pub(crate) const AB: usize = 0;
pub(crate) const BA: usize = 1;
pub(crate) const SIM: usize = 2;
pub(crate) const BADLEN: usize = 3;
const CLASSES: usize = 4;

/// Which count comparison a pairing automaton certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// `s(A) = s(B)`.
    Equal,
    /// `s(A) < s(B)`.
    Less,
    /// Accepts every well-formed block sequence.
    Dummy,
}

/// Control states: 0 = q0, 1 = waiting for the partner of an AB block, 2 = q1.
fn control_step(kind: Pairing, q: u8, class: usize) -> Option<u8> {
    if class == BADLEN {
        return None;
    }
    match (kind, q, class) {
        (Pairing::Dummy, _, _) => Some(0),
        (Pairing::Equal, 0, AB) => Some(1),
        (Pairing::Equal, 0, SIM) => Some(2),
        (Pairing::Equal, 2, SIM) => Some(2),
        (Pairing::Less, 0, AB) => Some(1),
        (Pairing::Less, 0, BA) => Some(2),
        (Pairing::Less, 2, BA | SIM) => Some(2),
        (_, 1, BA) => Some(0),
        _ => None,
    }
}

fn control_accepting(kind: Pairing, q: u8) -> bool {
    match kind {
        Pairing::Dummy => true,
        Pairing::Equal => q == 0 || q == 2,
        Pairing::Less => q == 2,
    }
}

fn class_index(c: BlockClass) -> usize {
    match c {
        BlockClass::Ab => AB,
        BlockClass::Ba => BA,
        BlockClass::Sim => SIM,
    }
}

struct Constraint<'a> {
    a: &'a Dfa,
    b: &'a Dfa,
    kind: Pairing,
}

/// Reads a `p`-bit prefix selecting the constraint, then runs that
/// constraint's two automata and a length counter modulo `ℓ`.
struct PrefixClassifier<'a> {
    p: usize,
    ell: usize,
    constraints: &'a [Constraint<'a>],
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum ClsState {
    Prefix {
        read: usize,
        value: usize,
    },
    Body {
        z: usize,
        a: usize,
        b: usize,
        len: usize,
    },
}

impl PrefixClassifier<'_> {
    fn body(&self, z: usize) -> ClsState {
        match self.constraints.get(z) {
            Some(c) => ClsState::Body {
                z,
                a: c.a.initial(),
                b: c.b.initial(),
                len: 0,
            },
            None => ClsState::Body {
                z,
                a: 0,
                b: 0,
                len: 0,
            },
        }
    }
}

impl Classifier for PrefixClassifier<'_> {
    type State = ClsState;

    fn initial(&self) -> ClsState {
        if self.p == 0 {
            self.body(0)
        } else {
            ClsState::Prefix { read: 0, value: 0 }
        }
    }

    fn step(&self, s: &ClsState, sym: usize) -> ClsState {
        match s {
            ClsState::Prefix { read, value } => {
                let value = 2 * value + sym;
                if read + 1 == self.p {
                    self.body(value)
                } else {
                    ClsState::Prefix {
                        read: read + 1,
                        value,
                    }
                }
            }
            ClsState::Body { z, a, b, len } => {
                let len = (len + 1) % self.ell;
                match self.constraints.get(*z) {
                    Some(c) => ClsState::Body {
                        z: *z,
                        a: c.a.step(*a, sym),
                        b: c.b.step(*b, sym),
                        len,
                    },
                    None => ClsState::Body {
                        z: *z,
                        a: 0,
                        b: 0,
                        len,
                    },
                }
            }
        }
    }

    fn class(&self, s: &ClsState) -> usize {
        match s {
            ClsState::Prefix { .. } => BADLEN,
            ClsState::Body { len, .. } if *len != 0 => z_class(s, BADLEN),
            ClsState::Body { z, a, b, .. } => match self.constraints.get(*z) {
                Some(c) => {
                    let class = match (c.a.is_accepting(*a), c.b.is_accepting(*b)) {
                        (true, false) => AB,
                        (false, true) => BA,
                        _ => SIM,
                    };
                    z * CLASSES + class
                }
                None => z * CLASSES + SIM,
            },
        }
    }
}

fn z_class(s: &ClsState, c: usize) -> usize {
    match s {
        ClsState::Body { z, .. } => z * CLASSES + c,
        ClsState::Prefix { .. } => c,
    }
}

/// Segment-by-segment control: segment `i` runs the pairing control of
/// constraint `i`; a block with prefix `i + 1` closes segment `i` (which must
/// accept) and opens the next one.
struct SegmentControl {
    kinds: Vec<Pairing>,
}

impl Control for SegmentControl {
    type State = (usize, u8);

    fn initial(&self) -> (usize, u8) {
        (0, 0)
    }

    fn on_block(&self, &(seg, q): &(usize, u8), class: usize) -> Option<(usize, u8)> {
        let (z, c) = (class / CLASSES, class % CLASSES);
        if c == BADLEN {
            return None;
        }
        if z == seg {
            return control_step(self.kinds[seg], q, c).map(|q| (seg, q));
        }
        if z == seg + 1 && z < self.kinds.len() && control_accepting(self.kinds[seg], q) {
            return control_step(self.kinds[z], 0, c).map(|q| (z, q));
        }
        None
    }

    fn accepting(&self, &(seg, q): &(usize, u8)) -> bool {
        seg + 1 == self.kinds.len() && control_accepting(self.kinds[seg], q)
    }
}

/// Single pairing control over the classes AB, BA, SIM, BADLEN.
pub(crate) struct PairControl(pub Pairing);

impl Control for PairControl {
    type State = u8;

    fn initial(&self) -> u8 {
        0
    }

    fn on_block(&self, q: &u8, class: usize) -> Option<u8> {
        control_step(self.0, *q, class)
    }

    fn accepting(&self, q: &u8) -> bool {
        control_accepting(self.0, *q)
    }
}

fn binary_alphabet() -> Vec<String> {
    vec!["0".into(), "1".into()]
}

fn check_binary(d: &Dfa) -> Result<()> {
    if d.alphabet() != binary_alphabet().as_slice() {
        return Err(Error::Alphabet("pair automata must be over {0,1}".into()));
    }
    Ok(())
}

/// `C`: accepts permutation words of rank `ℓn` exactly when the blocks can be
/// arranged as AB/BA pairs followed by SIM blocks.
pub fn build_equality_automaton(p: &AutomataPair) -> Dfa {
    build_combined_automaton(&[(p, Pairing::Equal)]).expect("single constraint")
}

/// `C_<`: pairs, one unmatched BA block, then BA or SIM blocks.
pub fn build_less_automaton(p: &AutomataPair) -> Dfa {
    build_combined_automaton(&[(p, Pairing::Less)]).expect("single constraint")
}

pub fn prefix_bits(m: usize) -> usize {
    let mut p = 0;
    while (1usize << p) < m {
        p += 1;
    }
    p
}

/// Combined automaton over `{0,1,#}`: blocks have a `p = ⌈log2 m⌉` bit prefix
/// naming the constraint; constraints are handled in prefix order and
/// constraint slots past `m` accept everything.
pub fn build_combined_automaton(pairs: &[(&AutomataPair, Pairing)]) -> Result<Dfa> {
    let Some(first) = pairs.first() else {
        return Err(Error::Invalid(
            "combined automaton needs at least one constraint".into(),
        ));
    };
    let ell = first.0.ell;
    for (p, _) in pairs {
        if p.ell != ell {
            return Err(Error::Invalid(format!("mismatched ℓ: {} vs {ell}", p.ell)));
        }
        check_binary(&p.a)?;
        check_binary(&p.b)?;
    }
    let p = prefix_bits(pairs.len());
    let constraints: Vec<Constraint> = pairs
        .iter()
        .map(|(q, kind)| Constraint {
            a: &q.a,
            b: &q.b,
            kind: *kind,
        })
        .collect();
    let mut kinds: Vec<Pairing> = constraints.iter().map(|c| c.kind).collect();
    kinds.resize(1 << p, Pairing::Dummy);
    let cls = PrefixClassifier {
        p,
        ell,
        constraints: &constraints,
    };
    Ok(assemble(
        &binary_alphabet(),
        &cls,
        &SegmentControl { kinds },
    ))
}

/// Blocks of length `len` split by class, each list in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockPartition {
    pub ab: Vec<Word>,
    pub ba: Vec<Word>,
    pub sim: Vec<Word>,
}

pub fn partition_blocks(p: &AutomataPair, len: usize, budget: u64) -> Result<BlockPartition> {
    check_budget(len, budget)?;
    let mut out = BlockPartition::default();
    for w in all_words(2, len) {
        match class_index(classify_block(&p.a, &p.b, &w)) {
            AB => out.ab.push(w),
            BA => out.ba.push(w),
            _ => out.sim.push(w),
        }
    }
    Ok(out)
}

fn check_budget(len: usize, budget: u64) -> Result<()> {
    if len >= 63 || (1u64 << len) > budget {
        return Err(Error::Refused(format!(
            "enumerating 2^{len} blocks exceeds the budget of {budget}"
        )));
    }
    Ok(())
}

/// Canonical arrangement: AB/BA pairs, then (for `Less`) one extra BA block,
/// then the remaining blocks in lexicographic order.
pub fn arrange_blocks(part: &BlockPartition, kind: Pairing) -> Option<Vec<Word>> {
    let (nab, nba) = (part.ab.len(), part.ba.len());
    let ok = match kind {
        Pairing::Equal => nab == nba,
        Pairing::Less => nab < nba,
        Pairing::Dummy => true,
    };
    if !ok {
        return None;
    }
    let mut out = Vec::with_capacity(nab + nba + part.sim.len());
    if kind == Pairing::Dummy {
        let mut all: Vec<Word> = part
            .ab
            .iter()
            .chain(&part.ba)
            .chain(&part.sim)
            .cloned()
            .collect();
        all.sort();
        return Some(all);
    }
    for i in 0..nab {
        out.push(part.ab[i].clone());
        out.push(part.ba[i].clone());
    }
    let mut rest: Vec<Word> = part.sim.clone();
    if kind == Pairing::Less {
        out.push(part.ba[nab].clone());
        rest.extend(part.ba[nab + 1..].iter().cloned());
    }
    rest.sort();
    out.extend(rest);
    Some(out)
}

pub fn render_blocks(blocks: &[Word]) -> String {
    let mut s = String::from("#");
    for b in blocks {
        for &a in b {
            s.push(if a == 0 { '0' } else { '1' });
        }
        s.push('#');
    }
    s
}

/// Canonical permutation word of rank `ℓn` accepted by `C`, if one exists.
pub fn construct_pairing_witness(
    p: &AutomataPair,
    n: usize,
    budget: u64,
) -> Result<Option<String>> {
    let part = partition_blocks(p, p.ell * n, budget)?;
    Ok(arrange_blocks(&part, Pairing::Equal).map(|b| render_blocks(&b)))
}

/// Canonical permutation word of rank `ℓn` accepted by `C_<`, if one exists.
pub fn construct_less_witness(p: &AutomataPair, n: usize, budget: u64) -> Result<Option<String>> {
    let part = partition_blocks(p, p.ell * n, budget)?;
    Ok(arrange_blocks(&part, Pairing::Less).map(|b| render_blocks(&b)))
}

/// Canonical permutation word of rank `p + ℓn` for the combined automaton.
pub fn construct_combined_witness(
    pairs: &[(&AutomataPair, Pairing)],
    n: usize,
    budget: u64,
) -> Result<Option<String>> {
    let Some(first) = pairs.first() else {
        return Err(Error::Invalid("no constraints".into()));
    };
    let len = first.0.ell * n;
    let p = prefix_bits(pairs.len());
    check_budget(len + p, budget)?;
    let mut blocks = Vec::new();
    for seg in 0..(1usize << p) {
        let arranged = match pairs.get(seg) {
            Some((pair, kind)) => arrange_blocks(&partition_blocks(pair, len, budget)?, *kind),
            None => Some(all_words(2, len)),
        };
        let Some(arranged) = arranged else {
            return Ok(None);
        };
        let prefix: Word = (0..p).rev().map(|bit| (seg >> bit) & 1).collect();
        for b in arranged {
            blocks.push([prefix.clone(), b].concat());
        }
    }
    Ok(Some(render_blocks(&blocks)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fwd::pair::lrs_to_automata_pair;
    use crate::lrs::Lrs;

    fn trivial_pair(a: Dfa, b: Dfa, ell: usize) -> AutomataPair {
        AutomataPair {
            a,
            b,
            ell,
            m: 0,
            k: 0,
        }
    }

    #[test]
    fn identical_automata_accept_any_order() {
        let all = Dfa::universal(&["0", "1"]);
        let p = trivial_pair(all.clone(), all, 1);
        let c = build_equality_automaton(&p);
        assert!(c.run_str("#0#1#").unwrap());
        assert!(c.run_str("#1#0#").unwrap());
        let less = build_less_automaton(&p);
        assert!(!less.run_str("#0#1#").unwrap());
    }

    #[test]
    fn less_with_empty_versus_all() {
        let p = trivial_pair(Dfa::empty(&["0", "1"]), Dfa::universal(&["0", "1"]), 2);
        let w = construct_less_witness(&p, 1, 1 << 10).unwrap().unwrap();
        assert!(build_less_automaton(&p).run_str(&w).unwrap());
        assert!(!build_equality_automaton(&p).run_str(&w).unwrap());
    }

    #[test]
    fn fibonacci_pair_has_no_witness_at_rank_ell() {
        let p = lrs_to_automata_pair(&Lrs::fibonacci()).unwrap();
        assert_eq!(construct_pairing_witness(&p, 1, 1 << 12).unwrap(), None);
    }

    #[test]
    fn block_length_is_checked() {
        let all = Dfa::universal(&["0", "1"]);
        let p = trivial_pair(all.clone(), all, 2);
        let c = build_equality_automaton(&p);
        assert!(c.run_str("#00#01#10#11#").unwrap());
        assert!(!c.run_str("#0#1#").unwrap());
    }

    #[test]
    fn two_dummy_like_constraints() {
        let all = Dfa::universal(&["0", "1"]);
        let p = trivial_pair(all.clone(), all, 1);
        let pairs = [(&p, Pairing::Equal), (&p, Pairing::Equal)];
        let c = build_combined_automaton(&pairs).unwrap();
        let w = construct_combined_witness(&pairs, 1, 1 << 10)
            .unwrap()
            .unwrap();
        assert_eq!(w, "#00#01#10#11#");
        assert!(c.run_str(&w).unwrap());
    }
}
