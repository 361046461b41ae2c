//! Fourier–Motzkin elimination: dual descriptions of finitely generated
//! cones and exact integer feasibility of bounded systems.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{primitive_of_rationals, to_rationals, Int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

/// `coeffs · x  sense  rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> LinearConstraint {
        LinearConstraint { coeffs, sense, rhs }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.sense {
            Sense::Ge => lhs >= self.rhs,
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }

    /// Same constraint with `≤` turned into `≥` and the row scaled to
    /// primitive integers.
    fn normalized(&self) -> LinearConstraint {
        let (mut c, mut r, sense) = match self.sense {
            Sense::Le => (
                self.coeffs.iter().map(|x| -x).collect::<Vec<_>>(),
                -&self.rhs,
                Sense::Ge,
            ),
            s => (self.coeffs.clone(), self.rhs.clone(), s),
        };
        let mut all = c.clone();
        all.push(r.clone());
        if all.iter().all(Zero::is_zero) {
            return LinearConstraint {
                coeffs: c,
                sense,
                rhs: r,
            };
        }
        let p = primitive_of_rationals(&all);
        let mut scaled = to_rationals(&p);
        if sense == Sense::Eq {
            if let Some(first) = scaled.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    scaled = scaled.iter().map(|x| -x).collect();
                }
            }
        }
        r = scaled.pop().unwrap();
        c = scaled;
        LinearConstraint {
            coeffs: c,
            sense,
            rhs: r,
        }
    }
}

/// Eliminates variable `j`; `None` if a contradiction `0 ≥ 1` appears.
fn eliminate(cons: &[LinearConstraint], j: usize) -> Option<Vec<LinearConstraint>> {
    let mut out: BTreeSet<LinearConstraint> = BTreeSet::new();
    if let Some(eq) = cons
        .iter()
        .find(|c| c.sense == Sense::Eq && !c.coeffs[j].is_zero())
    {
        let p = eq.coeffs[j].clone();
        for c in cons {
            if std::ptr::eq(c, eq) {
                continue;
            }
            let f = &c.coeffs[j] / &p;
            let coeffs: Vec<Rational> = c
                .coeffs
                .iter()
                .zip(&eq.coeffs)
                .map(|(a, b)| a - &f * b)
                .collect();
            let rhs = &c.rhs - &f * &eq.rhs;
            out.insert(
                LinearConstraint {
                    coeffs,
                    sense: c.sense,
                    rhs,
                }
                .normalized(),
            );
        }
    } else {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in cons {
            let cj = &c.coeffs[j];
            if cj.is_zero() {
                out.insert(c.clone());
            } else if cj.is_positive() {
                pos.push(c);
            } else {
                neg.push(c);
            }
        }
        for p in &pos {
            for n in &neg {
                let (a, b) = (-&n.coeffs[j], p.coeffs[j].clone());
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(x, y)| &a * x + &b * y)
                    .collect();
                let rhs = &a * &p.rhs + &b * &n.rhs;
                out.insert(
                    LinearConstraint {
                        coeffs,
                        sense: Sense::Ge,
                        rhs,
                    }
                    .normalized(),
                );
            }
        }
    }
    let mut kept = Vec::new();
    for c in out {
        if c.coeffs.iter().all(Zero::is_zero) {
            let ok = match c.sense {
                Sense::Ge => !c.rhs.is_positive(),
                Sense::Le => !c.rhs.is_negative(),
                Sense::Eq => c.rhs.is_zero(),
            };
            if !ok {
                return None;
            }
        } else {
            kept.push(c);
        }
    }
    Some(kept)
}

/// Rational feasibility by eliminating every variable.
pub fn rational_feasible(dim: usize, cons: &[LinearConstraint]) -> bool {
    let mut cur: Vec<LinearConstraint> = cons.iter().map(LinearConstraint::normalized).collect();
    for j in 0..dim {
        match eliminate(&cur, j) {
            Some(next) => cur = next,
            None => return false,
        }
    }
    cur.iter().all(|c| c.holds(&vec![Rational::zero(); dim]))
}

/// `{x : E x = 0, A x ≥ 0}` with primitive integer rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeDual {
    pub dim: usize,
    pub equalities: Vec<Vec<Int>>,
    pub inequalities: Vec<Vec<Int>>,
}

impl ConeDual {
    pub fn contains(&self, x: &[Rational]) -> bool {
        let dot = |a: &Vec<Int>| -> Rational {
            a.iter()
                .zip(x)
                .map(|(p, q)| Rational::from(p.clone()) * q)
                .sum()
        };
        self.equalities.iter().all(|e| dot(e).is_zero())
            && self.inequalities.iter().all(|a| !dot(a).is_negative())
    }

    /// Constraints for `x - apex` in the cone.
    pub fn constraints(&self, apex: &[Int]) -> Vec<LinearConstraint> {
        let mk = |row: &Vec<Int>, sense| {
            let rhs: Int = row.iter().zip(apex).map(|(a, b)| a * b).sum();
            LinearConstraint::new(to_rationals(row), sense, Rational::from(rhs))
        };
        self.equalities
            .iter()
            .map(|e| mk(e, Sense::Eq))
            .chain(self.inequalities.iter().map(|a| mk(a, Sense::Ge)))
            .collect()
    }
}

/// Dual description of `ℚ≥0(gens)` in `ℚ^dim`.
pub fn cone_dualize(dim: usize, gens: &[Vec<Int>]) -> Result<ConeDual> {
    if gens.iter().any(|g| g.len() != dim) {
        return Err(Error::Invalid("generator dimension disagrees".into()));
    }
    let r = gens.len();
    // variables: λ_0..λ_{r-1}, then x_0..x_{dim-1}
    let n = r + dim;
    let mut cons = Vec::new();
    for i in 0..dim {
        let mut c = vec![Rational::zero(); n];
        c[r + i] = Rational::one();
        for (k, g) in gens.iter().enumerate() {
            c[k] = -Rational::from(g[i].clone());
        }
        cons.push(LinearConstraint::new(c, Sense::Eq, Rational::zero()).normalized());
    }
    for k in 0..r {
        let mut c = vec![Rational::zero(); n];
        c[k] = Rational::one();
        cons.push(LinearConstraint::new(c, Sense::Ge, Rational::zero()));
    }
    for k in 0..r {
        cons = eliminate(&cons, k).expect("homogeneous systems are feasible");
    }
    let project = |c: &LinearConstraint| -> Vec<Int> { primitive_of_rationals(&c.coeffs[r..]) };
    let mut equalities: Vec<Vec<Int>> = cons
        .iter()
        .filter(|c| c.sense == Sense::Eq)
        .map(project)
        .collect();
    equalities.sort();
    equalities.dedup();
    let mut inequalities: Vec<Vec<Int>> = cons
        .iter()
        .filter(|c| c.sense == Sense::Ge)
        .map(project)
        .collect();
    inequalities.sort();
    inequalities.dedup();
    // drop inequalities implied by the others
    let mut i = 0;
    while i < inequalities.len() {
        let mut sys: Vec<LinearConstraint> = equalities
            .iter()
            .map(|e| LinearConstraint::new(to_rationals(e), Sense::Eq, Rational::zero()))
            .collect();
        for (k, a) in inequalities.iter().enumerate() {
            if k != i {
                sys.push(LinearConstraint::new(
                    to_rationals(a),
                    Sense::Ge,
                    Rational::zero(),
                ));
            }
        }
        sys.push(LinearConstraint::new(
            to_rationals(&inequalities[i]),
            Sense::Le,
            -Rational::one(),
        ));
        if rational_feasible(dim, &sys) {
            i += 1;
        } else {
            inequalities.remove(i);
        }
    }
    Ok(ConeDual {
        dim,
        equalities,
        inequalities,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Int>),
    Infeasible,
}

/// Exact integer feasibility. Each variable in turn is bounded by projecting
/// the remaining system onto it; refuses when a projection is unbounded or
/// the enumeration exceeds `budget` nodes.
pub fn integer_feasibility(
    dim: usize,
    cons: &[LinearConstraint],
    budget: u64,
) -> Result<Feasibility> {
    if cons.iter().any(|c| c.coeffs.len() != dim) {
        return Err(Error::Invalid("constraint dimension disagrees".into()));
    }
    let base: Vec<LinearConstraint> = cons.iter().map(LinearConstraint::normalized).collect();
    let mut spent = 0u64;
    let mut fixed = Vec::new();
    Ok(match search(dim, &base, &mut fixed, &mut spent, budget)? {
        Some(x) => Feasibility::Feasible(x),
        None => Feasibility::Infeasible,
    })
}

fn substitute(cons: &[LinearConstraint], fixed: &[Int]) -> Vec<LinearConstraint> {
    let k = fixed.len();
    cons.iter()
        .map(|c| {
            let shift: Rational = c.coeffs[..k]
                .iter()
                .zip(fixed)
                .map(|(a, v)| a * Rational::from(v.clone()))
                .sum();
            let mut coeffs = vec![Rational::zero(); k];
            coeffs.extend_from_slice(&c.coeffs[k..]);
            LinearConstraint {
                coeffs,
                sense: c.sense,
                rhs: &c.rhs - shift,
            }
        })
        .collect()
}

fn search(
    dim: usize,
    cons: &[LinearConstraint],
    fixed: &mut Vec<Int>,
    spent: &mut u64,
    budget: u64,
) -> Result<Option<Vec<Int>>> {
    *spent += 1;
    if *spent > budget {
        return Err(Error::Refused(format!(
            "integer search exceeded {budget} nodes"
        )));
    }
    let k = fixed.len();
    let sub = substitute(cons, fixed);
    if k == dim {
        let x: Vec<Rational> = fixed.iter().map(|v| Rational::from(v.clone())).collect();
        return Ok(cons.iter().all(|c| c.holds(&x)).then(|| fixed.clone()));
    }
    // project onto x_k
    let mut proj: Vec<LinearConstraint> = sub.iter().map(LinearConstraint::normalized).collect();
    for j in (k + 1..dim).rev() {
        match eliminate(&proj, j) {
            Some(p) => proj = p,
            None => return Ok(None),
        }
    }
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for c in &proj {
        let a = &c.coeffs[k];
        if a.is_zero() {
            if !c.holds(&vec![Rational::zero(); dim]) {
                return Ok(None);
            }
            continue;
        }
        let b = &c.rhs / a;
        let lower = c.sense == Sense::Eq || a.is_positive();
        let upper = c.sense == Sense::Eq || a.is_negative();
        if lower && lo.as_ref().is_none_or(|l| b > *l) {
            lo = Some(b.clone());
        }
        if upper && hi.as_ref().is_none_or(|h| b < *h) {
            hi = Some(b);
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::Refused(format!(
            "variable {k} is unbounded; no finite search box"
        )));
    };
    let (lo, hi) = (lo.ceil().to_integer(), hi.floor().to_integer());
    if lo > hi {
        return Ok(None);
    }
    let width = (&hi - &lo).to_u64().unwrap_or(u64::MAX);
    if width > budget {
        return Err(Error::Refused(format!(
            "variable {k} ranges over more than {budget} values"
        )));
    }
    let mut v = lo;
    while v <= hi {
        fixed.push(v.clone());
        let r = search(dim, cons, fixed, spent, budget)?;
        fixed.pop();
        if r.is_some() {
            return Ok(r);
        }
        v += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ints, rat, rats};

    #[test]
    fn dual_examples() {
        let d = cone_dualize(2, &[ints(&[1, 0]), ints(&[0, 1])]).unwrap();
        assert_eq!(d.inequalities, vec![ints(&[0, 1]), ints(&[1, 0])]);
        assert!(d.equalities.is_empty());
        let d = cone_dualize(2, &[ints(&[1, 1]), ints(&[1, -1])]).unwrap();
        assert_eq!(d.inequalities, vec![ints(&[1, -1]), ints(&[1, 1])]);
        let d = cone_dualize(3, &[ints(&[1, 0, 0])]).unwrap();
        assert_eq!(d.equalities.len(), 2);
        assert!(d.contains(&rats(&[3, 0, 0])) && !d.contains(&rats(&[-1, 0, 0])));
    }

    #[test]
    fn redundant_generators() {
        let d = cone_dualize(
            2,
            &[ints(&[1, 0]), ints(&[1, 1]), ints(&[0, 1]), ints(&[2, 1])],
        )
        .unwrap();
        assert_eq!(d.inequalities.len(), 2);
    }

    #[test]
    fn feasibility() {
        let c = vec![
            LinearConstraint::new(rats(&[1]), Sense::Ge, rat(1)),
            LinearConstraint::new(rats(&[1]), Sense::Le, rat(0)),
        ];
        assert_eq!(
            integer_feasibility(1, &c, 100).unwrap(),
            Feasibility::Infeasible
        );
        // 2x + 2y = 3 has rational but no integer points
        let c = vec![
            LinearConstraint::new(rats(&[2, 2]), Sense::Eq, rat(3)),
            LinearConstraint::new(rats(&[1, 0]), Sense::Ge, rat(0)),
            LinearConstraint::new(rats(&[0, 1]), Sense::Ge, rat(0)),
        ];
        assert_eq!(
            integer_feasibility(2, &c, 100).unwrap(),
            Feasibility::Infeasible
        );
        let c = vec![
            LinearConstraint::new(rats(&[3, 2]), Sense::Eq, rat(7)),
            LinearConstraint::new(rats(&[1, 0]), Sense::Ge, rat(0)),
            LinearConstraint::new(rats(&[0, 1]), Sense::Ge, rat(0)),
        ];
        assert_eq!(
            integer_feasibility(2, &c, 100).unwrap(),
            Feasibility::Feasible(ints(&[1, 2]))
        );
        let c = vec![LinearConstraint::new(rats(&[1]), Sense::Ge, rat(0))];
        assert!(matches!(
            integer_feasibility(1, &c, 100),
            Err(Error::Refused(_))
        ));
    }
}
