//! Forward reductions from recurrences and orbit problems to regular
//! realizability with the permutation filters.

pub(crate) mod block;
pub mod chp;
pub mod pair;
pub mod pairing;
pub mod zurc;

pub use chp::{chp_to_pb, ChpInstance, ChpReduction, Constraint, Relation};
pub use pair::{lrs_to_automata_pair, lrs_to_automata_pair_with_length, AutomataPair};
pub use pairing::{
    build_combined_automaton, build_equality_automaton, build_less_automaton, Pairing,
};
pub use zurc::{zurc_build_tsets, zurc_to_pepe, ZurcInstance};
