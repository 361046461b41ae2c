//! Orbit problems over chambers, subspace unions and polyhedra, with the
//! reductions between them and to recurrence questions.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fwd::{ChpInstance as ConstraintInstance, Constraint, Relation};
use crate::linalg::{QMatrix, Rational};
use crate::lrs::{
    lrs_from_orbit, lrs_from_orbit_at_zero, lrs_interleave, shp_product_lrs, AffineFunction, Lrs,
};

/// Largest function count for which sign-pattern spaces are enumerated.
pub const MAX_PATTERN_FUNCTIONS: usize = 12;

pub fn sign(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of every `h_i(x)`.
pub fn sign_pattern(functions: &[AffineFunction], x: &[Rational]) -> Vec<i8> {
    functions.iter().map(|h| sign(&h.eval(x))).collect()
}

/// `{x : sign(h_i(x)) = s_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub functions: Vec<AffineFunction>,
    pub signs: Vec<i8>,
}

impl Chamber {
    pub fn new(functions: Vec<AffineFunction>, signs: Vec<i8>) -> Result<Chamber> {
        if functions.len() != signs.len() {
            return Err(Error::Invalid("one sign per function is required".into()));
        }
        if signs.iter().any(|s| !(-1..=1).contains(s)) {
            return Err(Error::Invalid("signs must be -1, 0 or 1".into()));
        }
        if let Some(d) = functions.first().map(AffineFunction::dim) {
            if functions.iter().any(|h| h.dim() != d) {
                return Err(Error::Invalid(
                    "chamber functions differ in dimension".into(),
                ));
            }
        }
        Ok(Chamber { functions, signs })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        chamber_member(self, x)
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.functions.iter().any(|h| h.dim() != dim) {
            return Err(Error::Invalid(
                "chamber dimension disagrees with the orbit".into(),
            ));
        }
        Ok(())
    }
}

pub fn chamber_member(c: &Chamber, x: &[Rational]) -> bool {
    c.functions
        .iter()
        .zip(&c.signs)
        .all(|(h, &s)| sign(&h.eval(x)) == s)
}

fn check_orbit(phi: &QMatrix, x0: &[Rational]) -> Result<()> {
    if !phi.is_square() || phi.rows() != x0.len() {
        return Err(Error::Invalid(
            "orbit matrix and start vector dimensions disagree".into(),
        ));
    }
    Ok(())
}

/// Something asked of the orbit points `Φ^n x0`; `target` marks the points
/// a scan stops at. For the universal problems these are violations.
pub trait OrbitProblem {
    fn phi(&self) -> &QMatrix;
    fn x0(&self) -> &[Rational];
    fn target(&self, x: &[Rational]) -> bool;
}

/// Does the orbit enter the chamber?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChpInstance {
    pub phi: QMatrix,
    pub x0: Vec<Rational>,
    pub chamber: Chamber,
}

impl ChpInstance {
    pub fn new(phi: QMatrix, x0: Vec<Rational>, chamber: Chamber) -> Result<ChpInstance> {
        check_orbit(&phi, &x0)?;
        chamber.check_dim(x0.len())?;
        Ok(ChpInstance { phi, x0, chamber })
    }

    /// The same question as sign constraints, the input form of the
    /// permutation-filter reduction.
    pub fn to_constraints(&self) -> ConstraintInstance {
        let constraints = self
            .chamber
            .functions
            .iter()
            .zip(&self.chamber.signs)
            .map(|(h, &s)| Constraint {
                h: h.clone(),
                rel: match s {
                    1 => Relation::Gt,
                    -1 => Relation::Lt,
                    _ => Relation::Eq,
                },
            })
            .collect();
        ConstraintInstance {
            phi: self.phi.clone(),
            x0: self.x0.clone(),
            constraints,
        }
    }
}

impl OrbitProblem for ChpInstance {
    fn phi(&self) -> &QMatrix {
        &self.phi
    }
    fn x0(&self) -> &[Rational] {
        &self.x0
    }
    fn target(&self, x: &[Rational]) -> bool {
        self.chamber.contains(x)
    }
}

/// Does the whole orbit stay in the union of the listed chambers?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdpInstance {
    pub phi: QMatrix,
    pub x0: Vec<Rational>,
    pub functions: Vec<AffineFunction>,
    pub patterns: Vec<Vec<i8>>,
}

impl OdpInstance {
    pub fn new(
        phi: QMatrix,
        x0: Vec<Rational>,
        functions: Vec<AffineFunction>,
        patterns: Vec<Vec<i8>>,
    ) -> Result<OdpInstance> {
        check_orbit(&phi, &x0)?;
        if functions.iter().any(|h| h.dim() != x0.len()) {
            return Err(Error::Invalid(
                "function dimension disagrees with the orbit".into(),
            ));
        }
        if patterns
            .iter()
            .any(|p| p.len() != functions.len() || p.iter().any(|s| !(-1..=1).contains(s)))
        {
            return Err(Error::Invalid(
                "patterns need one sign in -1..1 per function".into(),
            ));
        }
        Ok(OdpInstance {
            phi,
            x0,
            functions,
            patterns,
        })
    }

    pub fn admits(&self, x: &[Rational]) -> bool {
        let p = sign_pattern(&self.functions, x);
        self.patterns.contains(&p)
    }
}

impl OrbitProblem for OdpInstance {
    fn phi(&self) -> &QMatrix {
        &self.phi
    }
    fn x0(&self) -> &[Rational] {
        &self.x0
    }
    fn target(&self, x: &[Rational]) -> bool {
        !self.admits(x)
    }
}

/// Does the orbit meet some `{x : h_{jk}(x) = 0 for all k}`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShpInstance {
    pub phi: QMatrix,
    pub x0: Vec<Rational>,
    pub blocks: Vec<Vec<AffineFunction>>,
}

impl ShpInstance {
    pub fn new(
        phi: QMatrix,
        x0: Vec<Rational>,
        blocks: Vec<Vec<AffineFunction>>,
    ) -> Result<ShpInstance> {
        check_orbit(&phi, &x0)?;
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::Invalid(
                "every subspace needs at least one function".into(),
            ));
        }
        if blocks.iter().flatten().any(|h| h.dim() != x0.len()) {
            return Err(Error::Invalid(
                "function dimension disagrees with the orbit".into(),
            ));
        }
        Ok(ShpInstance { phi, x0, blocks })
    }
}

impl OrbitProblem for ShpInstance {
    fn phi(&self) -> &QMatrix {
        &self.phi
    }
    fn x0(&self) -> &[Rational] {
        &self.x0
    }
    fn target(&self, x: &[Rational]) -> bool {
        self.blocks
            .iter()
            .any(|b| b.iter().all(|h| h.eval(x).is_zero()))
    }
}

/// Does the whole orbit lie in `{x : h_i(x) >= 0}`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlpInstance {
    pub phi: QMatrix,
    pub x0: Vec<Rational>,
    pub inequalities: Vec<AffineFunction>,
}

impl PlpInstance {
    pub fn new(
        phi: QMatrix,
        x0: Vec<Rational>,
        inequalities: Vec<AffineFunction>,
    ) -> Result<PlpInstance> {
        check_orbit(&phi, &x0)?;
        if inequalities.iter().any(|h| h.dim() != x0.len()) {
            return Err(Error::Invalid(
                "function dimension disagrees with the orbit".into(),
            ));
        }
        Ok(PlpInstance {
            phi,
            x0,
            inequalities,
        })
    }
}

impl OrbitProblem for PlpInstance {
    fn phi(&self) -> &QMatrix {
        &self.phi
    }
    fn x0(&self) -> &[Rational] {
        &self.x0
    }
    fn target(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().any(|h| h.eval(x).is_negative())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOutcome {
    Hit(u64),
    NoHitWithin(u64),
}

impl fmt::Display for ScanOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanOutcome::Hit(n) => write!(f, "hit {n}"),
            ScanOutcome::NoHitWithin(b) => write!(f, "no-hit-within {b}"),
        }
    }
}

pub fn orbit_points(phi: &QMatrix, x0: &[Rational], bound: u64) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(bound as usize + 1);
    let mut x = x0.to_vec();
    for _ in 0..=bound {
        let next = phi.mul_vec(&x);
        out.push(std::mem::replace(&mut x, next));
    }
    out
}

/// First `n <= bound` whose orbit point is a target.
pub fn orbit_scan(p: &dyn OrbitProblem, bound: u64) -> ScanOutcome {
    let mut x = p.x0().to_vec();
    for n in 0..=bound {
        if p.target(&x) {
            return ScanOutcome::Hit(n);
        }
        x = p.phi().mul_vec(&x);
    }
    ScanOutcome::NoHitWithin(bound)
}

/// [`orbit_scan`] with the target tests split across `threads` workers;
/// the earliest hit wins, so the result does not depend on `threads`.
pub fn orbit_scan_threads(
    p: &(dyn OrbitProblem + Sync),
    bound: u64,
    threads: usize,
) -> ScanOutcome {
    let pts = orbit_points(p.phi(), p.x0(), bound);
    let threads = threads.max(1);
    let chunk = pts.len().div_ceil(threads).max(1);
    let first = std::thread::scope(|s| {
        let handles: Vec<_> = pts
            .chunks(chunk)
            .enumerate()
            .map(|(i, c)| {
                s.spawn(move || {
                    c.iter()
                        .position(|x| p.target(x))
                        .map(|j| (i * chunk + j) as u64)
                })
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("scan worker panicked"))
            .min()
    });
    first.map_or(ScanOutcome::NoHitWithin(bound), ScanOutcome::Hit)
}

/// All patterns in `{-1,0,1}^m`, lexicographic.
pub fn all_patterns(m: usize) -> Result<Vec<Vec<i8>>> {
    if m > MAX_PATTERN_FUNCTIONS {
        return Err(Error::Refused(format!(
            "3^{m} sign patterns exceed the cap of m <= {MAX_PATTERN_FUNCTIONS}"
        )));
    }
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i8>| {
                [-1i8, 0, 1].into_iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    Ok(out)
}

/// The orbit enters the chamber iff it is not contained in the union of
/// all other chambers.
pub fn chp_to_odp(c: &ChpInstance) -> Result<OdpInstance> {
    let patterns = all_patterns(c.chamber.signs.len())?
        .into_iter()
        .filter(|p| *p != c.chamber.signs)
        .collect();
    Ok(OdpInstance {
        phi: c.phi.clone(),
        x0: c.x0.clone(),
        functions: c.chamber.functions.clone(),
        patterns,
    })
}

/// The orbit stays in the listed chambers iff it enters none of the others.
pub fn odp_to_chp(o: &OdpInstance) -> Result<Vec<ChpInstance>> {
    Ok(all_patterns(o.functions.len())?
        .into_iter()
        .filter(|p| !o.patterns.contains(p))
        .map(|signs| ChpInstance {
            phi: o.phi.clone(),
            x0: o.x0.clone(),
            chamber: Chamber {
                functions: o.functions.clone(),
                signs,
            },
        })
        .collect())
}

/// Either direction of the chamber/description correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Complement {
    Odp(OdpInstance),
    Chps(Vec<ChpInstance>),
}

pub enum RoundtripInput<'a> {
    Chp(&'a ChpInstance),
    Odp(&'a OdpInstance),
}

pub fn chp_odp_roundtrip(inst: RoundtripInput) -> Result<Complement> {
    match inst {
        RoundtripInput::Chp(c) => chp_to_odp(c).map(Complement::Odp),
        RoundtripInput::Odp(o) => odp_to_chp(o).map(Complement::Chps),
    }
}

/// Companion embedding; the chamber `{x_1 = 0}` is hit at `n` iff
/// `x_{n+d} = 0`.
pub fn skolem_to_chp(s: &Lrs) -> ChpInstance {
    let o = s.companion_orbit();
    ChpInstance {
        phi: o.phi,
        x0: o.x0,
        chamber: Chamber {
            functions: vec![o.h],
            signs: vec![0],
        },
    }
}

/// The orbit stays in `{x_1 = 0} ∪ {x_1 > 0}` iff `x_n >= 0` for `n >= d`.
pub fn nonneg_to_odp(s: &Lrs) -> OdpInstance {
    let o = s.companion_orbit();
    OdpInstance {
        phi: o.phi,
        x0: o.x0,
        functions: vec![o.h],
        patterns: vec![vec![0], vec![1]],
    }
}

/// `r_n = ∏_j Σ_k h_{jk}(Φ^n x0)^2` for `n >= 1`; it vanishes exactly where
/// the orbit meets a subspace. The start point `x0` is checked by
/// [`ShpInstance::start_hits`].
pub fn shp_to_skolem(inst: &ShpInstance) -> Result<Lrs> {
    let families: Vec<Vec<Lrs>> = inst
        .blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|h| lrs_from_orbit(&inst.phi, &inst.x0, h))
                .collect()
        })
        .collect();
    shp_product_lrs(&families)
}

impl ShpInstance {
    pub fn start_hits(&self) -> bool {
        self.target(&self.x0)
    }
}

/// Dimension of the affine hull of `x0, Φx0, .., Φ^d x0`, which is the
/// affine hull of the whole orbit.
pub fn orbit_affine_rank(phi: &QMatrix, x0: &[Rational]) -> usize {
    let d = x0.len();
    let pts = orbit_points(phi, x0, d as u64);
    let rows: Vec<Vec<Rational>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(x0).map(|(a, b)| a - b).collect())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    QMatrix::from_rows(rows).rank()
}

/// Report of the polyhedron-to-nonnegativity reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlpReduction {
    pub sequence: Lrs,
    pub hull_rank: usize,
    /// Indices of inequalities vanishing on the whole orbit, dropped.
    pub dropped: Vec<usize>,
    pub kept: Vec<usize>,
}

/// Interleaves `h_i(Φ^s x0)` over the kept inequalities:
/// `r_{s m + j} = h_{kept[j-1]}(Φ^s x0)`, `s >= 0`. The orbit lies in the
/// polyhedron iff `r` is nonnegative. Inequalities vanishing on the orbit's
/// affine hull (checked on its first `d + 1` points) are dropped.
pub fn plp_to_nonneg(inst: &PlpInstance) -> Result<PlpReduction> {
    let d = inst.x0.len();
    let pts = orbit_points(&inst.phi, &inst.x0, d as u64);
    let (dropped, kept): (Vec<usize>, Vec<usize>) = (0..inst.inequalities.len())
        .partition(|&i| pts.iter().all(|p| inst.inequalities[i].eval(p).is_zero()));
    let seqs: Vec<Lrs> = kept
        .iter()
        .map(|&i| lrs_from_orbit_at_zero(&inst.phi, &inst.x0, &inst.inequalities[i]))
        .collect();
    let sequence = if seqs.is_empty() {
        Lrs::zero()
    } else {
        lrs_interleave(&seqs)?
    };
    Ok(PlpReduction {
        sequence,
        hull_rank: orbit_affine_rank(&inst.phi, &inst.x0),
        dropped,
        kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rats};

    fn h(c: &[i64], k: i64) -> AffineFunction {
        AffineFunction::new(rats(c), rat(k))
    }

    #[test]
    fn chamber_examples() {
        let empty = Chamber::new(vec![], vec![]).unwrap();
        assert!(empty.contains(&rats(&[5])));
        let c = Chamber::new(vec![h(&[1], 0)], vec![0]).unwrap();
        assert!(c.contains(&rats(&[0])));
        let c = Chamber::new(vec![h(&[1], -1)], vec![1]).unwrap();
        assert!(c.contains(&rats(&[2])) && !c.contains(&rats(&[1])));
    }

    #[test]
    fn scans() {
        let o = Lrs::fibonacci().companion_orbit();
        let chp = ChpInstance::new(
            o.phi.clone(),
            o.x0.clone(),
            Chamber::new(vec![h(&[1, 0], -8)], vec![0]).unwrap(),
        )
        .unwrap();
        // first coordinates 1, 2, 3, 5, 8
        assert_eq!(orbit_scan(&chp, 20), ScanOutcome::Hit(4));
        assert_eq!(orbit_scan_threads(&chp, 20, 3), ScanOutcome::Hit(4));
        let pow2 = Lrs::from_i64(&[2], &[1]).unwrap();
        assert_eq!(
            orbit_scan(&skolem_to_chp(&pow2), 50),
            ScanOutcome::NoHitWithin(50)
        );
        assert_eq!(orbit_scan(&chp, 0), ScanOutcome::NoHitWithin(0));
    }

    #[test]
    fn complements() {
        let c = ChpInstance::new(
            QMatrix::identity(1),
            rats(&[0]),
            Chamber::new(vec![h(&[1], 0)], vec![0]).unwrap(),
        )
        .unwrap();
        let o = chp_to_odp(&c).unwrap();
        assert_eq!(o.patterns, vec![vec![-1], vec![1]]);
        assert_eq!(odp_to_chp(&o).unwrap(), vec![c]);
        let c2 = ChpInstance::new(
            QMatrix::identity(1),
            rats(&[0]),
            Chamber::new(vec![h(&[1], 0), h(&[1], 1)], vec![1, 1]).unwrap(),
        )
        .unwrap();
        assert_eq!(chp_to_odp(&c2).unwrap().patterns.len(), 8);
        assert!(all_patterns(13).is_err());
    }

    #[test]
    fn skolem_embedding() {
        // x = 1, 0, -1, -1, 0, 1, ...
        let s = Lrs::from_i64(&[1, -1], &[1, 0]).unwrap();
        let c = skolem_to_chp(&s);
        for n in 0..30usize {
            let x = orbit_points(&c.phi, &c.x0, n as u64).pop().unwrap();
            assert_eq!(c.chamber.contains(&x), s.eval(n + 2).is_zero());
        }
        let odp = nonneg_to_odp(&Lrs::fibonacci());
        assert_eq!(orbit_scan(&odp, 50), ScanOutcome::NoHitWithin(50));
    }

    #[test]
    fn subspace_product() {
        // Φ = shift of (n - 3): x = (n, 1)
        let phi = QMatrix::from_rows(vec![rats(&[1, 1]), rats(&[0, 1])]);
        let inst = ShpInstance::new(phi, rats(&[0, 1]), vec![vec![h(&[1, -2], 0)]]).unwrap();
        let r = shp_to_skolem(&inst).unwrap();
        for n in 1..=20usize {
            assert_eq!(r.eval(n).is_zero(), n == 2);
        }
        let none = ShpInstance::new(QMatrix::identity(1), rats(&[1]), vec![]).unwrap();
        assert_eq!(shp_to_skolem(&none).unwrap().eval(3), rat(1));
    }

    #[test]
    fn polyhedron_interleave() {
        let phi = QMatrix::from_rows(vec![rats(&[2, 0]), rats(&[0, 1])]);
        let inst = PlpInstance::new(
            phi,
            rats(&[1, 0]),
            vec![h(&[1, 0], 0), h(&[0, 1], 0), h(&[1, 0], -3)],
        )
        .unwrap();
        let red = plp_to_nonneg(&inst).unwrap();
        assert_eq!(red.dropped, vec![1]);
        // 1, -2, 2, -1, 4, 1, 8, 5, ...
        let v = red.sequence.values(8);
        assert_eq!(v, rats(&[1, -2, 2, -1, 4, 1, 8, 5]));
        assert_eq!(orbit_scan(&inst, 10), ScanOutcome::Hit(0));
    }
}
