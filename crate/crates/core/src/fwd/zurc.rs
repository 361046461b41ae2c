//! Zero upper-right corner instances to periodic-times-permutation track
//! words.
//!
//! A track symbol pairs a matrix index `j` with a triple `(i, k, b)`. A block
//! is a sequence of groups of `bits` symbols; group `α` names the entry
//! `(i_α, k_α)` of matrix `j_α` and spells a number `β_α` (least significant
//! bit first) that must be below the absolute value of that entry. Chains
//! from row `i` to column `k` with positive (negative) sign product form
//! `T⁺_{ik}` (`T⁻_{ik}`), so `|T⁺| - |T⁻|` is the corresponding entry of the
//! matrix product.

use num_traits::{Signed, Zero};

use crate::dfa::{all_words, Combine, Dfa, Word};
use crate::error::{Error, Result};
use crate::fwd::block::{assemble, Classifier};
use crate::fwd::pairing::{PairControl, Pairing, AB, BA, BADLEN, SIM};
use crate::linalg::{Int, ZMatrix};

#[derive(Clone, Debug)]
pub struct ZurcInstance {
    matrices: Vec<ZMatrix>,
    dim: usize,
    bits: usize,
}

impl ZurcInstance {
    pub fn new(matrices: Vec<ZMatrix>) -> Result<ZurcInstance> {
        let Some(first) = matrices.first() else {
            return Err(Error::Invalid("need at least one matrix".into()));
        };
        let dim = first.rows();
        if dim == 0 || matrices.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Invalid(
                "matrices must be square of one common order D >= 1".into(),
            ));
        }
        let max = matrices
            .iter()
            .flat_map(|m| m.data().iter())
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Int::zero);
        // ⌈log2 M⌉ bits, at least one
        let bits = if max <= Int::from(1) {
            1
        } else {
            ((max - 1u32).bits() as usize).max(1)
        };
        Ok(ZurcInstance {
            matrices,
            dim,
            bits,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.matrices.len()
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn matrices(&self) -> &[ZMatrix] {
        &self.matrices
    }

    /// Number of `(i, k, b)` symbols on the second track.
    pub fn track2_size(&self) -> usize {
        2 * self.dim * self.dim
    }

    pub fn symbol(&self, j: usize, i: usize, k: usize, b: usize) -> usize {
        j * self.track2_size() + (i * self.dim + k) * 2 + b
    }

    /// `(j, i, k, b)`, zero-based.
    pub fn decode(&self, sym: usize) -> (usize, usize, usize, usize) {
        let t = self.track2_size();
        let (j, r) = (sym / t, sym % t);
        let b = r % 2;
        let ik = r / 2;
        (j, ik / self.dim, ik % self.dim, b)
    }

    /// Symbols `j|i:k:b` with one-based `j, i, k`.
    pub fn alphabet(&self) -> Vec<String> {
        (0..self.count() * self.track2_size())
            .map(|s| {
                let (j, i, k, b) = self.decode(s);
                format!("{}|{}:{}:{}", j + 1, i + 1, k + 1, b)
            })
            .collect()
    }

    pub fn product_entry(&self, js: &[usize], i: usize, k: usize) -> Int {
        let mut acc = ZMatrix::identity(self.dim);
        for &j in js {
            acc = acc.mul_mat(&self.matrices[j]);
        }
        acc.get(i, k).clone()
    }

    fn start_state(&self) -> TState {
        TState::Start
    }

    fn t_step(&self, s: &TState, sym: usize, target_i: usize) -> TState {
        let (j, i, k, b) = self.decode(sym);
        match *s {
            TState::Dead => TState::Dead,
            TState::Start | TState::Boundary { .. } => {
                let chain_ok = match *s {
                    TState::Start => i == target_i,
                    TState::Boundary { k: prev, .. } => i == prev,
                    _ => unreachable!(),
                };
                if !chain_ok {
                    return TState::Dead;
                }
                let negative = match *s {
                    TState::Boundary { negative, .. } => negative,
                    _ => false,
                };
                self.after_bit(j, i, k, b, 1, negative)
            }
            TState::Group {
                j: gj,
                i: gi,
                k: gk,
                beta,
                read,
                negative,
            } => {
                if (j, i, k) != (gj, gi, gk) {
                    return TState::Dead;
                }
                self.after_bit(j, i, k, beta | (b << read), read + 1, negative)
            }
        }
    }

    fn after_bit(
        &self,
        j: usize,
        i: usize,
        k: usize,
        beta: usize,
        read: usize,
        negative: bool,
    ) -> TState {
        if read < self.bits {
            return TState::Group {
                j,
                i,
                k,
                beta,
                read,
                negative,
            };
        }
        let entry = self.matrices[j].get(i, k);
        if entry.is_zero() || Int::from(beta) >= entry.abs() {
            return TState::Dead;
        }
        TState::Boundary {
            k,
            negative: negative ^ entry.is_negative(),
        }
    }

    fn t_sign(&self, s: &TState, target_k: usize) -> Option<bool> {
        match *s {
            TState::Boundary { k, negative } if k == target_k => Some(negative),
            _ => None,
        }
    }

    /// Automata over the track alphabet for `T⁺_{ik}`, `T⁻_{ik}` and the
    /// complement of their union (zero-based `i`, `k`).
    pub fn tsets(&self, i: usize, k: usize) -> Result<TSets> {
        if i >= self.dim || k >= self.dim {
            return Err(Error::Invalid("entry index out of range".into()));
        }
        let build = |want: bool| {
            Dfa::explore(
                self.alphabet(),
                self.start_state(),
                |s, a| self.t_step(s, a, i),
                |s| self.t_sign(s, k) == Some(want),
            )
        };
        let plus = build(false)?;
        let minus = build(true)?;
        let bad = plus.combine(&minus, Combine::Or)?.complement();
        Ok(TSets { plus, minus, bad })
    }

    /// Classifies the second-track word `w` (symbols of `Σ₂`) read together
    /// with the first-track row `js` repeated `bits` times per group.
    pub fn classify(&self, js: &[usize], w: &[usize], i: usize, k: usize) -> Option<bool> {
        let mut s = self.start_state();
        for (pos, &x) in w.iter().enumerate() {
            let j = js[pos / self.bits];
            s = self.t_step(&s, j * self.track2_size() + x, i);
        }
        self.t_sign(&s, k)
    }

    /// Track word pairing `T⁺_{1D}` with `T⁻_{1D}` blocks for the row `js`,
    /// if the counts agree.
    pub fn construct_witness(&self, js: &[usize], budget: u64) -> Result<Option<String>> {
        let len = js.len() * self.bits;
        let total = (self.track2_size() as f64).powi(len as i32);
        if js.is_empty() || total > budget as f64 {
            return Err(Error::Refused(format!(
                "{total} blocks exceed the budget of {budget}"
            )));
        }
        let (mut plus, mut minus, mut bad): (Vec<Word>, Vec<Word>, Vec<Word>) = Default::default();
        for w in all_words(self.track2_size(), len) {
            match self.classify(js, &w, 0, self.dim - 1) {
                Some(false) => plus.push(w),
                Some(true) => minus.push(w),
                None => bad.push(w),
            }
        }
        if plus.len() != minus.len() {
            return Ok(None);
        }
        let mut blocks = Vec::new();
        for (p, m) in plus.into_iter().zip(minus) {
            blocks.push(p);
            blocks.push(m);
        }
        blocks.extend(bad);
        let names = self.alphabet();
        let mut out = String::from("#");
        for b in blocks {
            for (pos, x) in b.iter().enumerate() {
                let j = js[pos / self.bits];
                out.push_str(&names[j * self.track2_size() + x]);
                out.push(' ');
            }
            out.push('#');
        }
        Ok(Some(
            out.replace('#', " # ")
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" "),
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum TState {
    Start,
    Group {
        j: usize,
        i: usize,
        k: usize,
        beta: usize,
        read: usize,
        negative: bool,
    },
    Boundary {
        k: usize,
        negative: bool,
    },
    Dead,
}

pub struct TSets {
    pub plus: Dfa,
    pub minus: Dfa,
    pub bad: Dfa,
}

pub fn zurc_build_tsets(matrices: &[ZMatrix], i: usize, k: usize) -> Result<(ZurcInstance, TSets)> {
    let inst = ZurcInstance::new(matrices.to_vec())?;
    let t = inst.tsets(i, k)?;
    Ok((inst, t))
}

struct TrackClassifier<'a> {
    inst: &'a ZurcInstance,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct TrackState {
    t: TState,
    pos: usize,
    j: Option<usize>,
    ok: bool,
    empty: bool,
}

impl Classifier for TrackClassifier<'_> {
    type State = TrackState;

    fn initial(&self) -> TrackState {
        TrackState {
            t: TState::Start,
            pos: 0,
            j: None,
            ok: true,
            empty: true,
        }
    }

    fn step(&self, s: &TrackState, a: usize) -> TrackState {
        let (j, ..) = self.inst.decode(a);
        let ok = s.ok && (s.pos == 0 || s.j == Some(j));
        TrackState {
            t: self.inst.t_step(&s.t, a, 0),
            pos: (s.pos + 1) % self.inst.bits,
            j: Some(j),
            ok,
            empty: false,
        }
    }

    fn class(&self, s: &TrackState) -> usize {
        if !s.ok || s.pos != 0 || s.empty {
            return BADLEN;
        }
        match self.inst.t_sign(&s.t, self.inst.dim - 1) {
            Some(false) => AB,
            Some(true) => BA,
            None => SIM,
        }
    }
}

/// Automaton over `Σ₁×Σ₂ ∪ {#}` whose intersection with `Per∥P` is nonempty
/// iff some product of the matrices has a zero upper-right entry.
pub fn zurc_to_pepe(matrices: &[ZMatrix]) -> Result<Dfa> {
    let inst = ZurcInstance::new(matrices.to_vec())?;
    Ok(assemble(
        &inst.alphabet(),
        &TrackClassifier { inst: &inst },
        &PairControl(Pairing::Equal),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn count_difference(inst: &ZurcInstance, js: &[usize], i: usize, k: usize) -> BigInt {
        let mut d = BigInt::zero();
        for w in all_words(inst.track2_size(), js.len() * inst.bits()) {
            match inst.classify(js, &w, i, k) {
                Some(false) => d += 1,
                Some(true) => d -= 1,
                None => {}
            }
        }
        d
    }

    #[test]
    fn swap_matrix_square() {
        let inst = ZurcInstance::new(vec![ZMatrix::from_i64(2, 2, &[0, 1, 1, 0])]).unwrap();
        assert_eq!(inst.bits(), 1);
        assert_eq!(count_difference(&inst, &[0, 0], 0, 1), BigInt::zero());
    }

    #[test]
    fn all_ones_square() {
        let inst = ZurcInstance::new(vec![ZMatrix::from_i64(2, 2, &[1, 1, 1, 1])]).unwrap();
        assert_eq!(count_difference(&inst, &[0, 0], 0, 1), BigInt::from(2));
    }

    #[test]
    fn zero_matrix_has_empty_tsets() {
        let (_, t) = zurc_build_tsets(&[ZMatrix::from_i64(2, 2, &[0, 0, 0, 0])], 0, 1).unwrap();
        for n in 0..=3 {
            assert!(t.plus.count_words(n).is_zero() && t.minus.count_words(n).is_zero());
        }
    }

    #[test]
    fn negative_entries_and_wide_numbers() {
        let inst = ZurcInstance::new(vec![ZMatrix::from_i64(2, 2, &[3, -2, 1, 0])]).unwrap();
        assert_eq!(inst.bits(), 2);
        for (i, k) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(
                count_difference(&inst, &[0, 0], i, k),
                inst.product_entry(&[0, 0], i, k)
            );
        }
    }

    #[test]
    fn tset_automata_match_classifier() {
        let inst = ZurcInstance::new(vec![ZMatrix::from_i64(2, 2, &[1, 1, 1, 1])]).unwrap();
        let t = inst.tsets(0, 1).unwrap();
        for w in all_words(inst.track2_size(), 2) {
            let c = inst.classify(&[0, 0], &w, 0, 1);
            assert_eq!(t.plus.run(&w), c == Some(false));
            assert_eq!(t.minus.run(&w), c == Some(true));
            assert_eq!(t.bad.run(&w), c.is_none());
        }
    }

    #[test]
    fn witness_for_swap() {
        let m = vec![ZMatrix::from_i64(2, 2, &[0, 1, 1, 0])];
        let inst = ZurcInstance::new(m.clone()).unwrap();
        let w = inst.construct_witness(&[0, 0], 1 << 20).unwrap().unwrap();
        let c = zurc_to_pepe(&m).unwrap();
        assert!(c.run_str(&w).unwrap());
        assert_eq!(inst.construct_witness(&[0], 1 << 20).unwrap(), None);
    }
}
