//! Integer lattices and cones: Smith normal form, lattice hitting sets,
//! Hilbert bases, integral Carathéodory decompositions, Parikh images,
//! polyhedral duals, and the chain from walk hitting down to polyhedron
//! hitting.

pub mod hilbert;
pub mod hitset;
pub mod ihp;
pub mod parikh;
pub mod polyhedra;
pub mod snf;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Int;

pub use hilbert::{brute_cone_member, hilbert_basis, integral_caratheodory, Decomposition};
pub use hitset::{extend_to_basis, lattice_hitting_set, lattice_member, snf_completion};
pub use ihp::{
    ihp_to_php, simplicial_ihp_to_php, wwhp_to_ihp, BoundedPhpScan, IhpInstance, PhpOracle,
    PhpQuery, Verdict,
};
pub use parikh::parikh;
pub use polyhedra::{
    cone_dualize, integer_feasibility, ConeDual, Feasibility, LinearConstraint, Sense,
};
pub use snf::{smith_normal_form, Smith};

/// `apex + ℕ(generators)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TranslatedCone {
    pub apex: Vec<Int>,
    pub generators: Vec<Vec<Int>>,
}

impl TranslatedCone {
    pub fn new(apex: Vec<Int>, generators: Vec<Vec<Int>>) -> Result<TranslatedCone> {
        if generators.iter().any(|g| g.len() != apex.len()) {
            return Err(Error::Invalid(
                "cone generators and apex differ in dimension".into(),
            ));
        }
        Ok(TranslatedCone { apex, generators })
    }

    pub fn point(apex: Vec<Int>) -> TranslatedCone {
        TranslatedCone {
            apex,
            generators: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    /// Exact membership by bounded coefficient search; see [`brute_cone_member`].
    pub fn contains(&self, x: &[Int]) -> bool {
        let d: Vec<Int> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        brute_cone_member(&self.generators, &d)
    }
}

impl fmt::Display for TranslatedCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cone {}", self.dim())?;
        writeln!(f, "apex {}", join(&self.apex))?;
        for g in &self.generators {
            writeln!(f, "gen {}", join(g))?;
        }
        Ok(())
    }
}

pub(crate) fn join(v: &[Int]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Finite union of linear sets `base + ℕ(periods)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemilinearSet {
    pub dim: usize,
    pub components: Vec<TranslatedCone>,
}

impl SemilinearSet {
    pub fn contains(&self, x: &[Int]) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semilinear {}", self.dim)?;
        for c in &self.components {
            writeln!(f, "component")?;
            writeln!(f, "base {}", join(&c.apex))?;
            for p in &c.generators {
                writeln!(f, "period {}", join(p))?;
            }
        }
        Ok(())
    }
}

/// A finite set of naturals together with progressions `{n0 + kN : k ≥ 0}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgressionSet {
    pub finite: BTreeSet<u64>,
    pub progressions: Vec<(u64, u64)>,
}

impl ProgressionSet {
    pub fn contains(&self, n: u64) -> bool {
        self.finite.contains(&n)
            || self
                .progressions
                .iter()
                .any(|&(s, d)| n >= s && (n - s).is_multiple_of(d))
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.progressions.is_empty()
    }

    /// Restriction to `n >= lo`.
    pub fn at_least(&self, lo: u64) -> ProgressionSet {
        ProgressionSet {
            finite: self.finite.range(lo..).copied().collect(),
            progressions: self
                .progressions
                .iter()
                .map(|&(s, d)| {
                    if s >= lo {
                        (s, d)
                    } else {
                        (s + (lo - s).div_ceil(d) * d, d)
                    }
                })
                .collect(),
        }
    }

    /// Eventually periodic set given by membership on `0..pre` and on one
    /// period `pre..pre+period`.
    pub fn from_periodic(member: impl Fn(u64) -> bool, pre: u64, period: u64) -> ProgressionSet {
        ProgressionSet {
            finite: (0..pre).filter(|&n| member(n)).collect(),
            progressions: (pre..pre + period)
                .filter(|&n| member(n))
                .map(|n| (n, period))
                .collect(),
        }
    }
}

impl fmt::Display for ProgressionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fin: Vec<String> = self.finite.iter().map(|n| n.to_string()).collect();
        writeln!(f, "finite {}", fin.join(" "))?;
        for (s, d) in &self.progressions {
            writeln!(f, "prog {s} {d}")?;
        }
        Ok(())
    }
}
