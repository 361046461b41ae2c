//! Orbit hitting of translated integer cones, reduced to hitting rational
//! polyhedra along arithmetic progressions of the orbit index.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::hilbert::{integral_caratheodory, simplicial_member};
use crate::lattice::hitset::{extend_to_basis, lattice_hitting_set, snf_completion, unit};
use crate::lattice::parikh::parikh;
use crate::lattice::polyhedra::{cone_dualize, ConeDual};
use crate::lattice::{ProgressionSet, TranslatedCone};
use crate::linalg::{rank_of_vectors, to_rationals, Int, ZMatrix};
use crate::monoid::{HitRelation, WwhpInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes { n: u64 },
    No,
    NoWithinBound { bound: u64 },
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    /// Disjunction: earliest yes, else unknown, else bounded no, else no.
    pub fn any(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut best = Verdict::No;
        for v in vs {
            best = match (best, v) {
                (Verdict::Yes { n: a }, Verdict::Yes { n: b }) => Verdict::Yes { n: a.min(b) },
                (y @ Verdict::Yes { .. }, _) | (_, y @ Verdict::Yes { .. }) => y,
                (u @ Verdict::Unknown { .. }, _) | (_, u @ Verdict::Unknown { .. }) => u,
                (Verdict::NoWithinBound { bound: a }, Verdict::NoWithinBound { bound: b }) => {
                    Verdict::NoWithinBound { bound: a.min(b) }
                }
                (b @ Verdict::NoWithinBound { .. }, _) | (_, b @ Verdict::NoWithinBound { .. }) => {
                    b
                }
                _ => Verdict::No,
            };
        }
        best
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes { n } => write!(f, "yes {n}"),
            Verdict::No => write!(f, "no"),
            Verdict::NoWithinBound { bound } => write!(f, "no-within {bound}"),
            Verdict::Unknown { reason } => write!(f, "unknown {reason}"),
        }
    }
}

/// Does `Φ^n x0 - apex` lie in the rational cone `dual` for some `n >= min_power`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhpQuery {
    pub phi: ZMatrix,
    pub x0: Vec<Int>,
    pub apex: Vec<Int>,
    pub dual: ConeDual,
    pub min_power: u64,
}

impl PhpQuery {
    pub fn hits(&self, x: &[Int]) -> bool {
        let d: Vec<Int> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        self.dual.contains(&to_rationals(&d))
    }
}

pub trait PhpOracle {
    fn decide(&self, q: &PhpQuery) -> Verdict;
}

/// Scans `n <= bound`; answers a definite no when the orbit cycles first.
#[derive(Clone, Copy, Debug)]
pub struct BoundedPhpScan {
    pub bound: u64,
}

impl PhpOracle for BoundedPhpScan {
    fn decide(&self, q: &PhpQuery) -> Verdict {
        let mut x = q.x0.clone();
        let mut seen: HashSet<Vec<Int>> = HashSet::new();
        for n in 0..=self.bound {
            if n >= q.min_power {
                if q.hits(&x) {
                    return Verdict::Yes { n };
                }
                if !seen.insert(x.clone()) {
                    return Verdict::No;
                }
            }
            x = q.phi.mul_vec(&x);
        }
        Verdict::NoWithinBound { bound: self.bound }
    }
}

/// Does `Φ^n x0 ∈ cone` for some `n >= min_power`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IhpInstance {
    pub phi: ZMatrix,
    pub x0: Vec<Int>,
    pub cone: TranslatedCone,
    pub min_power: u64,
}

impl IhpInstance {
    pub fn new(
        phi: ZMatrix,
        x0: Vec<Int>,
        cone: TranslatedCone,
        min_power: u64,
    ) -> Result<IhpInstance> {
        if !phi.is_square() || phi.rows() != x0.len() || cone.dim() != x0.len() {
            return Err(Error::Invalid("dimensions disagree".into()));
        }
        Ok(IhpInstance {
            phi,
            x0,
            cone,
            min_power,
        })
    }

    pub fn scan(&self, bound: u64) -> Option<u64> {
        let mut x = self.x0.clone();
        for n in 0..=bound {
            if n >= self.min_power && self.cone.contains(&x) {
                return Some(n);
            }
            x = self.phi.mul_vec(&x);
        }
        None
    }
}

/// How the lattice of a simplicial piece was completed to full rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completion {
    Units(Vec<usize>),
    Smith(Vec<Vec<Int>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialReport {
    pub verdict: Verdict,
    pub completion: Completion,
    pub hitting: ProgressionSet,
}

pub fn simplicial_ihp_to_php(inst: &IhpInstance, oracle: &dyn PhpOracle) -> Result<Verdict> {
    Ok(simplicial_report(inst, oracle)?.verdict)
}

/// Splits `x ∈ v0 + ℕ(S)` into `x - v0 ∈ ℚ≥0(S)` and `x - v0 ∈ ℤ(S)`; the
/// latter holds along the progressions of a lattice hitting set.
pub fn simplicial_report(inst: &IhpInstance, oracle: &dyn PhpOracle) -> Result<SimplicialReport> {
    let dim = inst.x0.len();
    let gens: Vec<Vec<Int>> = inst
        .cone
        .generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if rank_of_vectors(dim, &gens) != gens.len() {
        return Err(Error::Invalid(
            "simplicial cone needs independent generators".into(),
        ));
    }
    let (completion, extra) = match extend_to_basis(dim, &gens)? {
        Some(js) => {
            let e = js.iter().map(|&j| unit(dim, j)).collect();
            (Completion::Units(js), e)
        }
        None => {
            let w = snf_completion(dim, &gens)?;
            (Completion::Smith(w.clone()), w)
        }
    };
    let mut full = gens.clone();
    full.extend(extra);
    let hitting =
        lattice_hitting_set(&inst.phi, &inst.x0, &inst.cone.apex, &full)?.at_least(inst.min_power);
    let mut verdicts = Vec::new();
    for &n in &hitting.finite {
        let x = inst.phi.pow(n).mul_vec(&inst.x0);
        let d: Vec<Int> = x.iter().zip(&inst.cone.apex).map(|(a, b)| a - b).collect();
        verdicts.push(if simplicial_member(dim, &gens, &d) {
            Verdict::Yes { n }
        } else {
            Verdict::No
        });
    }
    let dual = cone_dualize(dim, &gens)?;
    for &(n0, step) in &hitting.progressions {
        let q = PhpQuery {
            phi: inst.phi.pow(step),
            x0: inst.phi.pow(n0).mul_vec(&inst.x0),
            apex: inst.cone.apex.clone(),
            dual: dual.clone(),
            min_power: 0,
        };
        verdicts.push(match oracle.decide(&q) {
            Verdict::Yes { n } => Verdict::Yes { n: n0 + n * step },
            v => v,
        });
    }
    Ok(SimplicialReport {
        verdict: Verdict::any(verdicts),
        completion,
        hitting,
    })
}

pub fn ihp_to_php(inst: &IhpInstance, oracle: &dyn PhpOracle, budget: u64) -> Result<Verdict> {
    let dec = integral_caratheodory(&inst.cone, budget)?;
    let mut verdicts = Vec::new();
    let pieces = dec
        .points
        .into_iter()
        .map(TranslatedCone::point)
        .chain(dec.cones);
    for cone in pieces {
        let piece = IhpInstance {
            cone,
            ..inst.clone()
        };
        verdicts.push(match simplicial_ihp_to_php(&piece, oracle) {
            Ok(v) => v,
            Err(Error::Refused(r)) => Verdict::Unknown { reason: r },
            Err(e) => return Err(e),
        });
    }
    Ok(Verdict::any(verdicts))
}

/// One cone-hitting instance per linear component of the walk weights.
pub fn wwhp_to_ihp(inst: &WwhpInstance) -> Result<Vec<IhpInstance>> {
    if inst.relation != HitRelation::Exact {
        return Err(Error::Invalid(
            "only exact walk hitting reduces to cone hitting".into(),
        ));
    }
    let set = parikh(&inst.graph)?;
    Ok(set
        .components
        .into_iter()
        .map(|cone| IhpInstance {
            phi: inst.phi.clone(),
            x0: inst.x0.clone(),
            cone,
            min_power: inst.min_power as u64,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::ColoredDigraph;
    use crate::linalg::ints;

    fn scalar(phi: i64, x0: i64, apex: i64, gens: &[i64]) -> IhpInstance {
        IhpInstance::new(
            ZMatrix::from_i64(1, 1, &[phi]),
            ints(&[x0]),
            TranslatedCone::new(ints(&[apex]), gens.iter().map(|&g| ints(&[g])).collect()).unwrap(),
            0,
        )
        .unwrap()
    }

    #[test]
    fn simplicial_examples() {
        let oracle = BoundedPhpScan { bound: 50 };
        assert_eq!(
            simplicial_ihp_to_php(&scalar(2, 1, 0, &[1]), &oracle).unwrap(),
            Verdict::Yes { n: 0 }
        );
        let v = simplicial_ihp_to_php(&scalar(-1, 1, 2, &[1]), &oracle).unwrap();
        assert!(!v.is_yes());
        let fib = IhpInstance::new(
            ZMatrix::from_i64(2, 2, &[1, 1, 1, 0]),
            ints(&[1, 1]),
            TranslatedCone::new(ints(&[5, 3]), vec![ints(&[0, 0])]).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(
            simplicial_ihp_to_php(&fib, &oracle).unwrap(),
            Verdict::Yes { n: 3 }
        );
    }

    #[test]
    fn lattice_excludes_parity() {
        // 3^n is odd; the even cone 0 + ℕ(2) is never hit, decided without scanning
        let v =
            simplicial_ihp_to_php(&scalar(3, 1, 0, &[2]), &BoundedPhpScan { bound: 0 }).unwrap();
        assert_eq!(v, Verdict::No);
        // a non-primitive generator in the plane needs the Smith completion
        let inst = IhpInstance::new(
            ZMatrix::identity(2),
            ints(&[3, 0]),
            TranslatedCone::new(ints(&[0, 0]), vec![ints(&[2, 0])]).unwrap(),
            0,
        )
        .unwrap();
        let r = simplicial_report(&inst, &BoundedPhpScan { bound: 10 }).unwrap();
        assert!(matches!(r.completion, Completion::Smith(_)));
        assert_eq!(r.verdict, Verdict::No);
    }

    #[test]
    fn mixed_cone_against_scan() {
        let phi = ZMatrix::from_i64(2, 2, &[1, 1, 0, 1]);
        for x0 in [ints(&[0, 1]), ints(&[1, 2]), ints(&[3, -1])] {
            let cone = TranslatedCone::new(
                ints(&[1, 0]),
                vec![ints(&[2, 0]), ints(&[1, 1]), ints(&[0, 2])],
            )
            .unwrap();
            let inst = IhpInstance::new(phi.clone(), x0, cone, 0).unwrap();
            let v = ihp_to_php(&inst, &BoundedPhpScan { bound: 30 }, 100_000).unwrap();
            match inst.scan(30) {
                Some(n) => assert_eq!(v, Verdict::Yes { n }),
                None => assert!(!v.is_yes()),
            }
        }
    }

    #[test]
    fn walk_instances() {
        let mut g = ColoredDigraph::new(2, 1, 0, 1);
        g.add_edge(0, 1, 0);
        let w =
            WwhpInstance::new(g, ZMatrix::identity(1), ints(&[1]), HitRelation::Exact, 1).unwrap();
        let ihps = wwhp_to_ihp(&w).unwrap();
        assert_eq!(ihps.len(), 1);
        assert!(ihps[0].cone.generators.is_empty());
        let mut g = ColoredDigraph::new(1, 1, 0, 0);
        g.add_edge(0, 0, 0);
        let w = WwhpInstance::new(
            g,
            ZMatrix::from_i64(1, 1, &[2]),
            ints(&[1]),
            HitRelation::Exact,
            1,
        )
        .unwrap();
        let ihps = wwhp_to_ihp(&w).unwrap();
        assert!(ihps.iter().any(|i| i.cone.generators.len() == 1));
    }
}
