//! Chamber hitting to permutation-filter realizability.

use std::fmt;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::fwd::pair::{default_length, lrs_to_automata_pair_with_length, AutomataPair};
use crate::fwd::pairing::{build_combined_automaton, prefix_bits, Pairing};
use crate::linalg::{bit_length, QMatrix, Rational};
use crate::lrs::{lrs_from_orbit_at_zero, AffineFunction, Lrs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Relation {
    pub fn holds(self, v: &Rational) -> bool {
        use num_traits::{Signed, Zero};
        match self {
            Relation::Eq => v.is_zero(),
            Relation::Lt => v.is_negative(),
            Relation::Gt => v.is_positive(),
            Relation::Le => !v.is_positive(),
            Relation::Ge => !v.is_negative(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=0",
            Relation::Lt => "<0",
            Relation::Gt => ">0",
            Relation::Le => "<=0",
            Relation::Ge => ">=0",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        Some(match s {
            "=0" | "=" | "eq" => Relation::Eq,
            "<0" | "<" | "lt" => Relation::Lt,
            ">0" | ">" | "gt" => Relation::Gt,
            "<=0" | "<=" | "le" => Relation::Le,
            ">=0" | ">=" | "ge" => Relation::Ge,
            _ => return None,
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub h: AffineFunction,
    pub rel: Relation,
}

/// Does some orbit point `Φ^n x0` satisfy every constraint `h_i(x) rel_i 0`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChpInstance {
    pub phi: QMatrix,
    pub x0: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl ChpInstance {
    pub fn new(
        phi: QMatrix,
        x0: Vec<Rational>,
        constraints: Vec<Constraint>,
    ) -> Result<ChpInstance> {
        if !phi.is_square() || phi.rows() != x0.len() {
            return Err(Error::Invalid(
                "orbit matrix and start vector dimensions disagree".into(),
            ));
        }
        if constraints.iter().any(|c| c.h.dim() != x0.len()) {
            return Err(Error::Invalid(
                "constraint dimension disagrees with the orbit".into(),
            ));
        }
        Ok(ChpInstance {
            phi,
            x0,
            constraints,
        })
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.rel.holds(&c.h.eval(x)))
    }

    /// First `n <= bound` with `Φ^n x0` in the chamber.
    pub fn scan(&self, bound: usize) -> Option<usize> {
        let mut x = self.x0.clone();
        for n in 0..=bound {
            if self.holds_at(&x) {
                return Some(n);
            }
            x = self.phi.mul_vec(&x);
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    pub relation: Relation,
    /// Integer sequence whose `n`-th term has the sign of `h(Φ^{n-1} x0)`.
    pub sequence: Lrs,
    pub scale: num_bigint::BigInt,
    pub m: usize,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct ChpReduction {
    pub automaton: Dfa,
    pub ell: usize,
    /// Prefix width; a witness of rank `p + ℓn` certifies the orbit point `n - 1`.
    pub prefix: usize,
    pub constraints: Vec<ConstraintReport>,
    pub pairs: Vec<(AutomataPair, Pairing)>,
}

impl ChpReduction {
    pub fn manifest(&self) -> String {
        let mut s = format!(
            "ell {}\nprefix {}\nconstraints {}\n",
            self.ell,
            self.prefix,
            self.constraints.len()
        );
        for (i, c) in self.constraints.iter().enumerate() {
            s += &format!(
                "constraint {} relation {} M {} k {} scale {} degree {}\n",
                i + 1,
                c.relation,
                c.m,
                c.k,
                c.scale,
                c.sequence.degree()
            );
        }
        s
    }
}

/// Shared `ℓ`: one plus three times the largest bit length of the scaled
/// data, raised if some constraint needs longer segments.
pub fn shared_length(seqs: &[Lrs]) -> Result<usize> {
    let mut bits = 0u64;
    let mut need = 0usize;
    for s in seqs {
        for x in s.coeffs().iter().chain(s.init()) {
            bits = bits.max(bit_length(&x.to_integer()));
        }
        need = need.max(default_length(s)?);
    }
    Ok((1 + 3 * bits as usize).max(need))
}

pub fn chp_to_pb(inst: &ChpInstance) -> Result<ChpReduction> {
    if inst.constraints.is_empty() {
        return Err(Error::Invalid(
            "chamber needs at least one constraint".into(),
        ));
    }
    let mut seqs = Vec::new();
    let mut scales = Vec::new();
    for c in &inst.constraints {
        if matches!(c.rel, Relation::Le | Relation::Ge) {
            return Err(Error::Invalid(
                "non-strict relations must be expanded before the reduction".into(),
            ));
        }
        let r = lrs_from_orbit_at_zero(&inst.phi, &inst.x0, &c.h);
        let (y, n) = r.scale_to_integer();
        seqs.push(y);
        scales.push(n);
    }
    let ell = shared_length(&seqs)?;
    let mut pairs = Vec::new();
    let mut reports = Vec::new();
    for ((c, y), n) in inst.constraints.iter().zip(&seqs).zip(scales) {
        let pair = lrs_to_automata_pair_with_length(y, ell)?;
        let (pair, kind) = match c.rel {
            Relation::Eq => (pair, Pairing::Equal),
            Relation::Lt => (pair, Pairing::Less),
            Relation::Gt => (
                AutomataPair {
                    a: pair.b,
                    b: pair.a,
                    ..pair
                },
                Pairing::Less,
            ),
            _ => unreachable!(),
        };
        reports.push(ConstraintReport {
            relation: c.rel,
            sequence: y.clone(),
            scale: n,
            m: pair.m,
            k: pair.k,
        });
        pairs.push((pair, kind));
    }
    let refs: Vec<(&AutomataPair, Pairing)> = pairs.iter().map(|(p, k)| (p, *k)).collect();
    let automaton = build_combined_automaton(&refs)?;
    Ok(ChpReduction {
        automaton,
        ell,
        prefix: prefix_bits(pairs.len()),
        constraints: reports,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fwd::pairing::construct_combined_witness;
    use crate::linalg::rats;

    fn scalar(phi: i64, x0: i64, rel: Relation, c: i64) -> ChpInstance {
        let h = AffineFunction::new(rats(&[1]), crate::linalg::rat(c));
        ChpInstance::new(
            QMatrix::from_rows(vec![rats(&[phi])]),
            rats(&[x0]),
            vec![Constraint { h, rel }],
        )
        .unwrap()
    }

    #[test]
    fn always_true_constraint() {
        let inst = ChpInstance::new(
            QMatrix::from_rows(vec![rats(&[1])]),
            rats(&[1]),
            vec![Constraint {
                h: AffineFunction::linear(rats(&[0])),
                rel: Relation::Eq,
            }],
        )
        .unwrap();
        let red = chp_to_pb(&inst).unwrap();
        let refs: Vec<_> = red.pairs.iter().map(|(p, k)| (p, *k)).collect();
        let w = construct_combined_witness(&refs, 1, 1 << 16)
            .unwrap()
            .unwrap();
        assert!(red.automaton.run_str(&w).unwrap());
    }

    #[test]
    fn powers_of_two_never_vanish() {
        let red = chp_to_pb(&scalar(2, 1, Relation::Eq, 0)).unwrap();
        let refs: Vec<_> = red.pairs.iter().map(|(p, k)| (p, *k)).collect();
        for n in 1..=2 {
            assert_eq!(construct_combined_witness(&refs, n, 1 << 20).unwrap(), None);
        }
    }

    #[test]
    fn strict_relations() {
        // x_n = 2^n - 3 at orbit index n: negative at 0, 1; positive from 2 on.
        let lt = chp_to_pb(&scalar(2, 1, Relation::Lt, -3)).unwrap();
        let refs: Vec<_> = lt.pairs.iter().map(|(p, k)| (p, *k)).collect();
        let w = construct_combined_witness(&refs, 1, 1 << 20)
            .unwrap()
            .unwrap();
        assert!(lt.automaton.run_str(&w).unwrap());
        let gt = chp_to_pb(&scalar(2, 1, Relation::Gt, -3)).unwrap();
        let refs: Vec<_> = gt.pairs.iter().map(|(p, k)| (p, *k)).collect();
        assert_eq!(construct_combined_witness(&refs, 1, 1 << 20).unwrap(), None);
    }
}
