//! Dense exact matrices over the integers and the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(Int::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(Int::from(p), Int::from(q))
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rats(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn to_rationals(v: &[Int]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

/// Returns the integer vector if every entry is integral.
pub fn to_integers(v: &[Rational]) -> Option<Vec<Int>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                Some(x.to_integer())
            } else {
                None
            }
        })
        .collect()
}

/// Number of bits of |v| (0 for zero).
pub fn bit_length(v: &Int) -> u64 {
    v.magnitude().bits()
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a Int>) -> Int {
    it.into_iter().fold(
        Int::one(),
        |acc, x| {
            if x.is_zero() {
                acc
            } else {
                acc.lcm(x)
            }
        },
    )
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Clone + Zero + Mul<Output = T>,
{
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Divides every entry by the gcd of the entries (no-op for zero vectors).
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators and returns the primitive integer vector on the same ray.
pub fn primitive_of_rationals(v: &[Rational]) -> Vec<Int> {
    let l = lcm_all(v.iter().map(|x| x.denom()));
    let scaled: Vec<Int> = v
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    primitive(&scaled)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ZMatrix = Matrix<Int>;
pub type QMatrix = Matrix<Rational>;

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors (all of length `dim`).
    pub fn from_columns(dim: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn map<U: Clone + Zero + One>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Sub<Output = T> + Neg<Output = T>,
{
    pub fn mul_mat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mat(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mat(&base);
            }
        }
        acc
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            a.clone() * other.get(k, l).clone(),
                        );
                    }
                }
            }
        }
        m
    }
}

pub fn kronecker_vec<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Clone + Mul<Output = T>,
{
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.clone() * y.clone()))
        .collect()
}

impl ZMatrix {
    pub fn to_rational(&self) -> QMatrix {
        self.map(|x| Rational::from_integer(x.clone()))
    }

    pub fn from_i64(rows: usize, cols: usize, v: &[i64]) -> Self {
        Matrix::new(rows, cols, ints(v))
    }

    pub fn det(&self) -> Int {
        self.to_rational().det().to_integer()
    }

    pub fn rank(&self) -> usize {
        self.to_rational().rank()
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Option<ZMatrix> {
        let inv = self.to_rational().inverse()?;
        let data = to_integers(inv.data())?;
        Some(Matrix::new(self.rows, self.cols, data))
    }

    pub fn reduce_mod(v: &[Int], q: &Int) -> Vec<Int> {
        v.iter().map(|x| x.mod_floor(q)).collect()
    }
}

impl QMatrix {
    /// Returns the matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<ZMatrix> {
        Some(Matrix::new(self.rows, self.cols, to_integers(&self.data)?))
    }

    /// Reduced row echelon form and the list of pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// One solution of `self · x = b` (free variables set to zero), if consistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &c) in piv.iter().enumerate() {
            x[c] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &c) in piv.iter().enumerate() {
                    v[c] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }
}

pub fn rank_of_vectors(dim: usize, vs: &[Vec<Int>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    ZMatrix::from_columns(dim, vs).rank()
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mat {} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|x| x.to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn abs_max(v: &[Int]) -> Int {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Int::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = ZMatrix::from_i64(2, 2, &[2, 1, 1, 0]);
        assert_eq!(m.det(), int(-1));
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(m.mul_mat(&inv), ZMatrix::identity(2));
    }

    #[test]
    fn power_of_fibonacci_companion() {
        let m = ZMatrix::from_i64(2, 2, &[1, 1, 1, 0]);
        assert_eq!(m.pow(3).mul_vec(&ints(&[1, 1])), ints(&[5, 3]));
        assert_eq!(m.pow(4).mul_vec(&ints(&[1, 1])), ints(&[8, 5]));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = QMatrix::from_rows(vec![rats(&[1, 2, 3]), rats(&[2, 4, 6])]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = QMatrix::from_rows(vec![rats(&[1, 1]), rats(&[1, 1])]);
        assert!(m.solve(&rats(&[1, 2])).is_none());
        assert_eq!(m.solve(&rats(&[3, 3])).unwrap(), rats(&[3, 0]));
    }

    #[test]
    fn kronecker_shape() {
        let a = ZMatrix::from_i64(1, 2, &[1, 2]);
        let b = ZMatrix::from_i64(2, 1, &[3, 4]);
        let k = a.kronecker(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k.data(), &ints(&[3, 6, 4, 8])[..]);
    }
}
