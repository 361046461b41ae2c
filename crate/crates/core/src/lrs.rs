//! Linear recurrence sequences with exact rational data.
//!
//! An [`Lrs`] of degree `d` is given by coefficients `a_1..a_d` and initial
//! values `b_1..b_d`; indices start at 1 and `x_n = sum a_i x_{n-i}` for `n > d`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kronecker_vec, lcm_all, rat, QMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lrs {
    coeffs: Vec<Rational>,
    init: Vec<Rational>,
}

impl Lrs {
    pub fn new(coeffs: Vec<Rational>, init: Vec<Rational>) -> Result<Lrs> {
        if coeffs.is_empty() || coeffs.len() != init.len() {
            return Err(Error::Invalid(format!(
                "lrs needs d >= 1 coefficients and initial values, got {} and {}",
                coeffs.len(),
                init.len()
            )));
        }
        Ok(Lrs { coeffs, init })
    }

    pub fn from_i64(coeffs: &[i64], init: &[i64]) -> Result<Lrs> {
        Lrs::new(
            coeffs.iter().map(|&x| rat(x)).collect(),
            init.iter().map(|&x| rat(x)).collect(),
        )
    }

    pub fn fibonacci() -> Lrs {
        Lrs::from_i64(&[1, 1], &[1, 1]).unwrap()
    }

    pub fn constant(c: Rational) -> Lrs {
        Lrs {
            coeffs: vec![Rational::one()],
            init: vec![c],
        }
    }

    pub fn zero() -> Lrs {
        Lrs {
            coeffs: vec![Rational::zero()],
            init: vec![Rational::zero()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn init(&self) -> &[Rational] {
        &self.init
    }

    pub fn is_integer(&self) -> bool {
        self.coeffs.iter().chain(&self.init).all(|x| x.is_integer())
    }

    /// `x_n` for `n >= 1`.
    pub fn eval(&self, n: usize) -> Rational {
        assert!(n >= 1, "lrs index starts at 1");
        self.values(n).pop().unwrap()
    }

    /// `x_1, ..., x_count`.
    pub fn values(&self, count: usize) -> Vec<Rational> {
        let d = self.degree();
        let mut out: Vec<Rational> = self.init.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = out.len();
            let mut v = Rational::zero();
            for i in 1..=d {
                v += &self.coeffs[i - 1] * &out[n - i];
            }
            out.push(v);
        }
        out
    }

    /// Integer sequence `y_n = N^{n+1} x_n`, with `N` the lcm of all denominators.
    pub fn scale_to_integer(&self) -> (Lrs, num_bigint::BigInt) {
        let n = lcm_all(self.coeffs.iter().chain(&self.init).map(|x| x.denom()));
        let nr = Rational::from_integer(n.clone());
        let mut p = Rational::one();
        let mut coeffs = Vec::with_capacity(self.degree());
        for a in &self.coeffs {
            p *= &nr;
            coeffs.push(a * &p);
        }
        let mut p = nr.clone();
        let mut init = Vec::with_capacity(self.degree());
        for b in &self.init {
            p *= &nr;
            init.push(b * &p);
        }
        (Lrs { coeffs, init }, n)
    }

    /// Companion system with `h(Φ^k x0) = x_{k+d}` for `k >= 0`.
    pub fn companion_orbit(&self) -> OrbitSystem {
        let d = self.degree();
        let mut x0: Vec<Rational> = self.init.clone();
        x0.reverse();
        let mut h = vec![Rational::zero(); d];
        h[0] = Rational::one();
        OrbitSystem {
            phi: companion_matrix(&self.coeffs),
            x0,
            h: AffineFunction::linear(h),
        }
    }

    fn value_system(&self) -> ValueSystem {
        let d = self.degree();
        let mut start = self.init.clone();
        start.reverse();
        let mut readout = vec![Rational::zero(); d];
        readout[d - 1] = Rational::one();
        ValueSystem {
            phi: companion_matrix(&self.coeffs),
            start,
            readout,
        }
    }
}

impl fmt::Display for Lrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "lrs {}", self.degree())?;
        writeln!(f, "a {}", join(&self.coeffs))?;
        writeln!(f, "b {}", join(&self.init))
    }
}

pub fn companion_matrix(coeffs: &[Rational]) -> QMatrix {
    let d = coeffs.len();
    let mut m = QMatrix::zeros(d, d);
    for (j, a) in coeffs.iter().enumerate() {
        m.set(0, j, a.clone());
    }
    for i in 1..d {
        m.set(i, i - 1, Rational::one());
    }
    m
}

/// `x -> coeffs . x + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineFunction {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl AffineFunction {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> AffineFunction {
        AffineFunction { coeffs, constant }
    }

    pub fn linear(coeffs: Vec<Rational>) -> AffineFunction {
        AffineFunction {
            coeffs,
            constant: Rational::zero(),
        }
    }

    pub fn coordinate(dim: usize, i: usize) -> AffineFunction {
        let mut c = vec![Rational::zero(); dim];
        c[i] = Rational::one();
        AffineFunction::linear(c)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(
            x.len(),
            self.coeffs.len(),
            "affine function dimension mismatch"
        );
        crate::linalg::dot(&self.coeffs, x) + &self.constant
    }

    pub fn negated(&self) -> AffineFunction {
        AffineFunction {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            constant: -&self.constant,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSystem {
    pub phi: QMatrix,
    pub x0: Vec<Rational>,
    pub h: AffineFunction,
}

impl OrbitSystem {
    /// `h(Φ^k x0)` for `k = 0..count`.
    pub fn readouts(&self, count: usize) -> Vec<Rational> {
        let mut x = self.x0.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(self.h.eval(&x));
            x = self.phi.mul_vec(&x);
        }
        out
    }
}

/// `value_n = readout . Φ^{n-1} start`, `n >= 1`.
#[derive(Clone, Debug)]
struct ValueSystem {
    phi: QMatrix,
    start: Vec<Rational>,
    readout: Vec<Rational>,
}

impl ValueSystem {
    fn affine(phi: &QMatrix, start: &[Rational], h: &AffineFunction) -> ValueSystem {
        check_dims(phi, start, h);
        if h.constant.is_zero() {
            return ValueSystem {
                phi: phi.clone(),
                start: start.to_vec(),
                readout: h.coeffs.clone(),
            };
        }
        let one = QMatrix::identity(1);
        let mut s = start.to_vec();
        s.push(Rational::one());
        let mut r = h.coeffs.clone();
        r.push(h.constant.clone());
        ValueSystem {
            phi: phi.direct_sum(&one),
            start: s,
            readout: r,
        }
    }

    fn values(&self, count: usize) -> Vec<Rational> {
        let mut x = self.start.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(crate::linalg::dot(&self.readout, &x));
            x = self.phi.mul_vec(&x);
        }
        out
    }

    fn fit(&self) -> (Lrs, FitReport) {
        let bound = self.phi.rows().max(1);
        fit_values(&self.values(2 * bound), bound)
    }
}

fn check_dims(phi: &QMatrix, x: &[Rational], h: &AffineFunction) {
    assert!(phi.is_square(), "orbit matrix must be square");
    assert_eq!(phi.rows(), x.len(), "start vector dimension mismatch");
    assert_eq!(h.dim(), x.len(), "readout dimension mismatch");
}

/// How the recurrence was chosen by the minimal-degree fit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitReport {
    pub degree_bound: usize,
    pub degree: usize,
    /// More than one coefficient vector fits at the chosen degree.
    pub underdetermined: bool,
}

/// Smallest-degree recurrence reproducing `values[0..2*bound]`, given that the
/// sequence satisfies some recurrence of degree `bound`.
pub fn fit_values(values: &[Rational], bound: usize) -> (Lrs, FitReport) {
    assert!(bound >= 1 && values.len() >= 2 * bound);
    for e in 1..=bound {
        let rows = 2 * bound - e;
        let mut m = QMatrix::zeros(rows, e);
        let mut rhs = Vec::with_capacity(rows);
        for r in 0..rows {
            let n = e + r; // zero-based index of u_{n+1}
            for i in 1..=e {
                m.set(r, i - 1, values[n - i].clone());
            }
            rhs.push(values[n].clone());
        }
        if let Some(a) = m.solve(&rhs) {
            let underdetermined = m.rank() < e;
            let lrs = Lrs {
                coeffs: a,
                init: values[..e].to_vec(),
            };
            return (
                lrs,
                FitReport {
                    degree_bound: bound,
                    degree: e,
                    underdetermined,
                },
            );
        }
    }
    unreachable!("a recurrence of degree {bound} always fits");
}

/// LRS with `n`-th element `h(Φ^n x0)`, `n >= 1`.
pub fn lrs_from_orbit(phi: &QMatrix, x0: &[Rational], h: &AffineFunction) -> Lrs {
    lrs_from_orbit_report(phi, x0, h).0
}

pub fn lrs_from_orbit_report(
    phi: &QMatrix,
    x0: &[Rational],
    h: &AffineFunction,
) -> (Lrs, FitReport) {
    check_dims(phi, x0, h);
    let start = phi.mul_vec(x0);
    ValueSystem::affine(phi, &start, h).fit()
}

/// LRS with `n`-th element `h(Φ^{n-1} x0)`, so that the orbit point `x0` itself is index 1.
pub fn lrs_from_orbit_at_zero(phi: &QMatrix, x0: &[Rational], h: &AffineFunction) -> Lrs {
    ValueSystem::affine(phi, x0, h).fit().0
}

pub fn lrs_add(s: &Lrs, t: &Lrs) -> Lrs {
    let (a, b) = (s.value_system(), t.value_system());
    ValueSystem {
        phi: a.phi.direct_sum(&b.phi),
        start: [a.start, b.start].concat(),
        readout: [a.readout, b.readout].concat(),
    }
    .fit()
    .0
}

pub fn lrs_hadamard(s: &Lrs, t: &Lrs) -> Lrs {
    let (a, b) = (s.value_system(), t.value_system());
    ValueSystem {
        phi: a.phi.kronecker(&b.phi),
        start: kronecker_vec(&a.start, &b.start),
        readout: kronecker_vec(&a.readout, &b.readout),
    }
    .fit()
    .0
}

/// `prod_j sum_k phi(j,k)_n^2`; the empty product is the constant 1.
pub fn shp_product_lrs(families: &[Vec<Lrs>]) -> Result<Lrs> {
    let mut acc = Lrs::constant(Rational::one());
    for fam in families {
        if fam.is_empty() {
            return Err(Error::Invalid("empty function family".into()));
        }
        let mut sum: Option<Lrs> = None;
        for f in fam {
            let sq = lrs_hadamard(f, f);
            sum = Some(match sum {
                None => sq,
                Some(s) => lrs_add(&s, &sq),
            });
        }
        acc = lrs_hadamard(&acc, &sum.unwrap());
    }
    Ok(acc)
}

/// `r_{s m + j} = phi(j)_{s+1}` for `s >= 0`, `1 <= j <= m`.
pub fn lrs_interleave(phis: &[Lrs]) -> Result<Lrs> {
    let m = phis.len();
    if m == 0 {
        return Err(Error::Invalid(
            "interleave needs at least one sequence".into(),
        ));
    }
    if m == 1 {
        return Ok(phis[0].clone());
    }
    // r is annihilated by prod_j P_j(E^m), of degree m * sum d_j.
    let bound = m * phis.iter().map(Lrs::degree).sum::<usize>();
    let count = 2 * bound;
    let per = count.div_ceil(m) + 1;
    let cols: Vec<Vec<Rational>> = phis.iter().map(|p| p.values(per)).collect();
    let values: Vec<Rational> = (0..count).map(|n| cols[n % m][n / m].clone()).collect();
    Ok(fit_values(&values, bound).0)
}

/// `r_n = s_n^2 - 1`.
pub fn square_minus_one(s: &Lrs) -> Result<Lrs> {
    if !s.is_integer() {
        return Err(Error::NonInteger(
            "square_minus_one expects an integer sequence".into(),
        ));
    }
    Ok(lrs_add(&lrs_hadamard(s, s), &Lrs::constant(rat(-1))))
}

/// True if every value among the first `count` is nonnegative.
pub fn nonnegative_prefix(s: &Lrs, count: usize) -> bool {
    s.values(count).iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, rats};

    #[test]
    fn evaluation_examples() {
        assert_eq!(Lrs::fibonacci().eval(5), rat(5));
        let half = Lrs::new(vec![ratio(1, 2)], vec![rat(1)]).unwrap();
        assert_eq!(half.eval(4), ratio(1, 8));
        assert_eq!(half.eval(1), rat(1));
    }

    #[test]
    fn scaling_half() {
        let half = Lrs::new(vec![ratio(1, 2)], vec![rat(1)]).unwrap();
        let (y, n) = half.scale_to_integer();
        assert_eq!(n, 2.into());
        assert_eq!(y.coeffs(), &rats(&[1])[..]);
        assert_eq!(y.init(), &rats(&[4])[..]);
        assert_eq!(y.eval(3), rat(4));
    }

    #[test]
    fn companion_examples() {
        let sys = Lrs::fibonacci().companion_orbit();
        assert_eq!(
            sys.phi,
            QMatrix::from_rows(vec![rats(&[1, 1]), rats(&[1, 0])])
        );
        assert_eq!(sys.x0, rats(&[1, 1]));
        // h(Φ^k x0) = x_{k+2}: Φ^3 x0 = (x_5, x_4), Φ^4 x0 = (x_6, x_5).
        assert_eq!(sys.phi.pow(3).mul_vec(&sys.x0), rats(&[5, 3]));
        assert_eq!(sys.phi.pow(4).mul_vec(&sys.x0), rats(&[8, 5]));
        assert_eq!(sys.readouts(2)[1], rat(2));
    }

    #[test]
    fn orbit_fit_examples() {
        let phi = QMatrix::from_rows(vec![rats(&[2])]);
        let s = lrs_from_orbit(&phi, &rats(&[3]), &AffineFunction::linear(rats(&[1])));
        assert_eq!((s.coeffs(), s.init()), (&rats(&[2])[..], &rats(&[6])[..]));
        let z = lrs_from_orbit(&phi, &rats(&[3]), &AffineFunction::linear(rats(&[0])));
        assert_eq!(z, Lrs::zero());
    }

    #[test]
    fn affine_readout() {
        let phi = QMatrix::from_rows(vec![rats(&[2])]);
        let h = AffineFunction::new(rats(&[1]), rat(-5));
        let s = lrs_from_orbit(&phi, &rats(&[1]), &h);
        assert_eq!(s.values(4), rats(&[-3, -1, 3, 11]));
    }

    #[test]
    fn interleave_constants() {
        let r = lrs_interleave(&[Lrs::constant(rat(1)), Lrs::constant(rat(2))]).unwrap();
        assert_eq!(r.values(6), rats(&[1, 2, 1, 2, 1, 2]));
    }

    #[test]
    fn square_minus_one_fib() {
        let r = square_minus_one(&Lrs::fibonacci()).unwrap();
        assert_eq!(r.values(5), rats(&[0, 0, 3, 8, 24]));
    }
}
