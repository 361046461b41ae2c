//! Deterministic finite automata over declared alphabets.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A symbol is an index into the alphabet.
pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
    states: usize,
    trans: Vec<usize>,
    initial: usize,
    accepting: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    And,
    Or,
    Diff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockClass {
    /// In `L(A) \ L(B)`.
    Ab,
    /// In `L(B) \ L(A)`.
    Ba,
    Sim,
}

impl Dfa {
    /// `trans[q * |alphabet| + a]` is the successor of `q` on symbol `a`.
    pub fn new(
        alphabet: Vec<String>,
        states: usize,
        trans: Vec<usize>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Dfa> {
        if states == 0 {
            return Err(Error::Invalid("dfa needs at least one state".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for s in &alphabet {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::Alphabet(format!("bad symbol {s:?}")));
            }
            if !seen.insert(s) {
                return Err(Error::Alphabet(format!("duplicate symbol {s:?}")));
            }
        }
        if trans.len() != states * alphabet.len() {
            return Err(Error::Invalid("transition table is not total".into()));
        }
        if trans.iter().any(|&t| t >= states) || initial >= states || accepting.len() != states {
            return Err(Error::Invalid("state index out of range".into()));
        }
        Ok(Dfa {
            alphabet,
            states,
            trans,
            initial,
            accepting,
        })
    }

    pub fn from_fn(
        alphabet: &[&str],
        states: usize,
        initial: usize,
        accepting: &[usize],
        step: impl Fn(usize, usize) -> usize,
    ) -> Result<Dfa> {
        let k = alphabet.len();
        let trans = (0..states * k).map(|i| step(i / k, i % k)).collect();
        let mut acc = vec![false; states];
        for &q in accepting {
            if q >= states {
                return Err(Error::Invalid(format!("accepting state {q} out of range")));
            }
            acc[q] = true;
        }
        Dfa::new(
            alphabet.iter().map(|s| s.to_string()).collect(),
            states,
            trans,
            initial,
            acc,
        )
    }

    /// Accepts every word.
    pub fn universal(alphabet: &[&str]) -> Dfa {
        Dfa::from_fn(alphabet, 1, 0, &[0], |_, _| 0).unwrap()
    }

    /// Accepts nothing.
    pub fn empty(alphabet: &[&str]) -> Dfa {
        Dfa::from_fn(alphabet, 1, 0, &[], |_, _| 0).unwrap()
    }

    /// Breadth-first exploration of an implicit automaton; states are
    /// numbered in discovery order.
    pub fn explore<S: Clone + Eq + std::hash::Hash>(
        alphabet: Vec<String>,
        initial: S,
        step: impl Fn(&S, usize) -> S,
        accept: impl Fn(&S) -> bool,
    ) -> Result<Dfa> {
        let k = alphabet.len();
        let mut index: HashMap<S, usize> = HashMap::new();
        let mut order = vec![initial.clone()];
        index.insert(initial, 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < order.len() {
            for a in 0..k {
                let t = step(&order[i], a);
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        order.push(t.clone());
                        index.insert(t, order.len() - 1);
                        order.len() - 1
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let accepting = order.iter().map(accept).collect();
        Dfa::new(alphabet, order.len(), trans, 0, accepting)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.states).filter(|&q| self.accepting[q]).collect()
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.trans[q * self.alphabet.len() + a]
    }

    pub fn symbol_index(&self, s: &str) -> Option<usize> {
        self.alphabet.iter().position(|x| x == s)
    }

    /// Splits text into symbols: whitespace-separated tokens if the text has
    /// whitespace, otherwise one symbol per character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        tokenize(text)
            .into_iter()
            .map(|t| self.symbol_index(&t).ok_or(Error::UnknownSymbol(t)))
            .collect()
    }

    pub fn render_word(&self, w: &[usize]) -> String {
        let single = self.alphabet.iter().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = w.iter().map(|&a| self.alphabet[a].as_str()).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    pub fn run_from(&self, q: usize, w: &[usize]) -> usize {
        w.iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn run(&self, w: &[usize]) -> bool {
        self.accepting[self.run_from(self.initial, w)]
    }

    pub fn run_str(&self, text: &str) -> Result<bool> {
        Ok(self.run(&self.parse_word(text)?))
    }

    /// Number of accepted words of length `n`.
    pub fn count_words(&self, n: usize) -> BigUint {
        let counts = self.count_vector(n);
        (0..self.states)
            .filter(|&q| self.accepting[q])
            .map(|q| &counts[q])
            .sum()
    }

    /// Number of length-`n` words leading from the initial state to each state.
    pub fn count_vector(&self, n: usize) -> Vec<BigUint> {
        let k = self.alphabet.len();
        let mut cur = vec![BigUint::zero(); self.states];
        cur[self.initial] = BigUint::one();
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); self.states];
            for q in 0..self.states {
                if cur[q].is_zero() {
                    continue;
                }
                for a in 0..k {
                    next[self.trans[q * k + a]] += &cur[q];
                }
            }
            cur = next;
        }
        cur
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|x| !x).collect(),
            ..self.clone()
        }
    }

    /// Product construction on reachable pairs, numbered breadth-first.
    pub fn combine(&self, other: &Dfa, mode: Combine) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::Alphabet("product needs identical alphabets".into()));
        }
        let k = self.alphabet.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut order = vec![(self.initial, other.initial)];
        index.insert(order[0], 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let (p, q) = order[i];
            for a in 0..k {
                let t = (self.step(p, a), other.step(q, a));
                let id = *index.entry(t).or_insert_with(|| {
                    order.push(t);
                    order.len() - 1
                });
                trans.push(id);
            }
            i += 1;
        }
        let accepting = order
            .iter()
            .map(|&(p, q)| {
                let (x, y) = (self.accepting[p], other.accepting[q]);
                match mode {
                    Combine::And => x && y,
                    Combine::Or => x || y,
                    Combine::Diff => x && !y,
                }
            })
            .collect();
        Dfa::new(self.alphabet.clone(), order.len(), trans, 0, accepting)
    }

    /// Minimal equivalent automaton by partition refinement, in canonical
    /// numbering.
    pub fn minimize(&self) -> Dfa {
        let d = self.canonical();
        let k = d.alphabet.len();
        let mut class: Vec<usize> = d.accepting.iter().map(|&a| usize::from(a)).collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let next: Vec<usize> = (0..d.states)
                .map(|q| {
                    let sig: Vec<usize> = std::iter::once(class[q])
                        .chain((0..k).map(|a| class[d.step(q, a)]))
                        .collect();
                    let n = ids.len();
                    *ids.entry(sig).or_insert(n)
                })
                .collect();
            class = next;
            if ids.len() == count {
                break;
            }
            count = ids.len();
        }
        let mut trans = vec![0; count * k];
        let mut accepting = vec![false; count];
        for q in 0..d.states {
            accepting[class[q]] = d.accepting[q];
            for a in 0..k {
                trans[class[q] * k + a] = class[d.step(q, a)];
            }
        }
        Dfa {
            alphabet: d.alphabet.clone(),
            states: count,
            trans,
            initial: class[0],
            accepting,
        }
        .canonical()
    }

    /// Renumbers states breadth-first from the initial state and drops
    /// unreachable states.
    pub fn canonical(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut id = vec![usize::MAX; self.states];
        let mut order = vec![self.initial];
        id[self.initial] = 0;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                let t = self.step(q, a);
                if id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let trans = order
            .iter()
            .flat_map(|&q| (0..k).map(move |a| (q, a)))
            .map(|(q, a)| id[self.step(q, a)])
            .collect();
        let accepting = order.iter().map(|&q| self.accepting[q]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            states: order.len(),
            trans,
            initial: 0,
            accepting,
        }
    }

    /// States from which some accepting state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let k = self.alphabet.len();
        let mut rev = vec![Vec::new(); self.states];
        for q in 0..self.states {
            for a in 0..k {
                rev[self.step(q, a)].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<usize> = (0..self.states).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// All words of length `n` over the alphabet in lexicographic order of
    /// symbol indices.
    pub fn all_words(&self, n: usize) -> Vec<Word> {
        all_words(self.alphabet.len(), n)
    }
}

pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn tokenize(text: &str) -> Vec<String> {
    if text.chars().any(char::is_whitespace) {
        text.split_whitespace().map(str::to_string).collect()
    } else {
        text.chars().map(|c| c.to_string()).collect()
    }
}

pub fn classify_block(a: &Dfa, b: &Dfa, w: &[usize]) -> BlockClass {
    match (a.run(w), b.run(w)) {
        (true, false) => BlockClass::Ab,
        (false, true) => BlockClass::Ba,
        _ => BlockClass::Sim,
    }
}
