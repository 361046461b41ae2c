//! Assembly of automata over `Σ ∪ {#}` that read a block word, classify each
//! block with a classifier automaton and feed the classes to a control
//! automaton.

use std::collections::HashMap;
use std::hash::Hash;

use crate::dfa::Dfa;

pub(crate) trait Classifier {
    type State: Clone + Eq + Hash;
    fn initial(&self) -> Self::State;
    fn step(&self, s: &Self::State, a: usize) -> Self::State;
    fn class(&self, s: &Self::State) -> usize;
}

pub(crate) trait Control {
    type State: Clone + Eq + Hash;
    fn initial(&self) -> Self::State;
    fn on_block(&self, c: &Self::State, class: usize) -> Option<Self::State>;
    fn accepting(&self, c: &Self::State) -> bool;
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Macro<C, S> {
    Start,
    Boundary(C),
    Inside(C, S),
    Dead,
}

/// The returned automaton has alphabet `block_alphabet` followed by `#`.
pub(crate) fn assemble<K: Classifier, T: Control>(block_alphabet: &[String], k: &K, t: &T) -> Dfa {
    let sym = block_alphabet.len();
    let width = sym + 1;
    let mut index: HashMap<Macro<T::State, K::State>, usize> = HashMap::new();
    let mut order: Vec<Macro<T::State, K::State>> = vec![Macro::Start];
    index.insert(Macro::Start, 0);
    let mut trans: Vec<usize> = Vec::new();
    let finish = |c: &T::State, s: &K::State| match t.on_block(c, k.class(s)) {
        Some(c2) => Macro::Boundary(c2),
        None => Macro::Dead,
    };
    let mut i = 0;
    while i < order.len() {
        let cur = order[i].clone();
        for a in 0..width {
            let hash = a == sym;
            let next = match &cur {
                Macro::Start if hash => Macro::Boundary(t.initial()),
                Macro::Start => Macro::Dead,
                Macro::Boundary(c) if hash => finish(c, &k.initial()),
                Macro::Boundary(c) => Macro::Inside(c.clone(), k.step(&k.initial(), a)),
                Macro::Inside(c, s) if hash => finish(c, s),
                Macro::Inside(c, s) => Macro::Inside(c.clone(), k.step(s, a)),
                Macro::Dead => Macro::Dead,
            };
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    order.push(next.clone());
                    index.insert(next, order.len() - 1);
                    order.len() - 1
                }
            };
            trans.push(id);
        }
        i += 1;
    }
    let accepting = order
        .iter()
        .map(|m| matches!(m, Macro::Boundary(c) if t.accepting(c)))
        .collect();
    let mut alphabet = block_alphabet.to_vec();
    alphabet.push("#".to_string());
    Dfa::new(alphabet, order.len(), trans, 0, accepting)
        .expect("assembled automaton is well formed")
}
