//! Dense matrices over [`Scalar`] and over truncated series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Series;

/// A dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Scalar>>", into = "Vec<Vec<Scalar>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl TryFrom<Vec<Vec<Scalar>>> for Matrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<Scalar>>) -> Result<Self, String> {
        Matrix::from_rows(rows).map_err(|e| e.to_string())
    }
}

impl From<Matrix> for Vec<Vec<Scalar>> {
    fn from(m: Matrix) -> Self {
        (0..m.rows).map(|i| m.row(i).to_vec()).collect()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .expect("rectangular literal")
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(n_rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), n_rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `[self, other]` side by side.
    pub fn hstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let t = &f * &m[(r, j)];
                            m[(i, j)] -= &t;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{x : self·x = 0}`, one vector per free
    /// column, in order of increasing free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&r[(row, free)];
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] -= &t;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Smallest `k` with `self^k = 0`, if `k <= dim`.
    pub fn nilpotent_order(&self) -> Option<usize> {
        let mut p = Matrix::identity(self.rows);
        for k in 0..=self.rows {
            if p.is_zero() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A matrix whose entries are series of one common truncation order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesMatrixRepr", into = "SeriesMatrixRepr")]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    order: usize,
    entries: Vec<Series>,
}

#[derive(Serialize, Deserialize)]
struct SeriesMatrixRepr {
    rows: usize,
    cols: usize,
    order: usize,
    entries: Vec<Vec<Scalar>>,
}

impl TryFrom<SeriesMatrixRepr> for SeriesMatrix {
    type Error = String;
    fn try_from(r: SeriesMatrixRepr) -> Result<Self, String> {
        if r.entries.len() != r.rows * r.cols {
            return Err(format!("expected {} entries, found {}", r.rows * r.cols, r.entries.len()));
        }
        if r.entries.iter().any(|e| e.len() > r.order) {
            return Err("entry longer than the truncation order".into());
        }
        let entries = r.entries.into_iter().map(|c| Series::from_coeffs(c, r.order)).collect();
        Ok(SeriesMatrix { rows: r.rows, cols: r.cols, order: r.order, entries })
    }
}

impl From<SeriesMatrix> for SeriesMatrixRepr {
    fn from(m: SeriesMatrix) -> Self {
        SeriesMatrixRepr {
            rows: m.rows,
            cols: m.cols,
            order: m.order,
            entries: m.entries.into_iter().map(|s| s.coeffs().to_vec()).collect(),
        }
    }
}

impl SeriesMatrix {
    pub fn zeros(rows: usize, cols: usize, order: usize) -> Self {
        SeriesMatrix { rows, cols, order, entries: vec![Series::zero(order); rows * cols] }
    }

    pub fn identity(n: usize, order: usize) -> Self {
        Self::constant(&Matrix::identity(n), order)
    }

    pub fn constant(m: &Matrix, order: usize) -> Self {
        Self::from_coefficients(std::slice::from_ref(m), order)
    }

    /// `Σ_k coeffs[k] q^k`; coefficients beyond `order` are dropped.
    pub fn from_coefficients(coeffs: &[Matrix], order: usize) -> Self {
        let (rows, cols) = coeffs.first().map_or((0, 0), |m| (m.rows(), m.cols()));
        let mut out = Self::zeros(rows, cols, order);
        for (k, m) in coeffs.iter().enumerate().take(order) {
            assert_eq!((m.rows(), m.cols()), (rows, cols));
            for i in 0..rows {
                for j in 0..cols {
                    out.entries[i * cols + j].set_coeff(k, m[(i, j)].clone());
                }
            }
        }
        out
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Series>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape("entry count does not match shape".into()));
        }
        let order = entries.first().map_or(0, Series::order);
        if entries.iter().any(|e| e.order() != order) {
            return Err(Error::Shape("entries have different truncation orders".into()));
        }
        Ok(SeriesMatrix { rows, cols, order, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, s: Series) {
        assert_eq!(s.order(), self.order);
        self.entries[i * self.cols + j] = s;
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    /// The coefficient matrix of `q^k`.
    pub fn coeff(&self, k: usize) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.entry(i, j).coeff(k).clone();
            }
        }
        m
    }

    pub fn coefficients(&self) -> Vec<Matrix> {
        (0..self.order).map(|k| self.coeff(k)).collect()
    }

    pub fn at_zero(&self) -> Matrix {
        if self.order == 0 {
            return Matrix::zeros(self.rows, self.cols);
        }
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Series::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(Series::is_constant)
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|s| s.truncate(order))
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> Self {
        let entries: Vec<Series> = self.entries.iter().map(f).collect();
        let order = entries.first().map_or(self.order, Series::order);
        SeriesMatrix { rows: self.rows, cols: self.cols, order, entries }
    }

    pub fn try_map(&self, f: impl Fn(&Series) -> Result<Series>) -> Result<Self> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        let order = entries.first().map_or(self.order, Series::order);
        Ok(SeriesMatrix { rows: self.rows, cols: self.cols, order, entries })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set_entry(j, i, self.entry(i, j).clone());
            }
        }
        t
    }

    pub fn theta(&self) -> Self {
        self.map(Series::theta)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|s| s.scale(c))
    }

    pub fn scale_series(&self, f: &Series) -> Self {
        self.map(|s| s * f)
    }

    /// Substitutes `q ↦ inner(q)` in every entry.
    pub fn compose(&self, inner: &Series) -> Result<Self> {
        self.try_map(|s| s.compose(inner))
    }

    /// Applies the matrix to a column vector of series.
    pub fn apply(&self, v: &[Series]) -> Vec<Series> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Series::zero(self.order.min(v.first().map_or(self.order, Series::order)));
                for (j, x) in v.iter().enumerate() {
                    acc = &acc + &(self.entry(i, j) * x);
                }
                acc
            })
            .collect()
    }

    /// Inverse over the power-series ring; exists iff the constant term is
    /// invertible.
    pub fn inverse(&self) -> Result<Self> {
        let m0_inv = self.at_zero().inverse()?;
        let coeffs = self.coefficients();
        let mut inv: Vec<Matrix> = Vec::with_capacity(self.order);
        for k in 0..self.order {
            if k == 0 {
                inv.push(m0_inv.clone());
                continue;
            }
            let mut acc = Matrix::zeros(self.rows, self.cols);
            for j in 1..=k {
                if !coeffs[j].is_zero() {
                    acc = &acc + &(&coeffs[j] * &inv[k - j]);
                }
            }
            inv.push(-&(&m0_inv * &acc));
        }
        Ok(Self::from_coefficients(&inv, self.order))
    }

    /// Picks out rows and columns by index.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len(), self.order);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set_entry(a, b, self.entry(i, j).clone());
            }
        }
        out
    }

    /// The same matrix with rows and columns permuted: entry `(a, b)` of
    /// the result is entry `(perm[a], perm[b])` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        self.submatrix(perm, perm)
    }

    /// Index of the first nonzero coefficient order at which two matrices
    /// differ.
    pub fn first_difference(&self, other: &SeriesMatrix) -> Option<usize> {
        let n = self.order.min(other.order);
        (0..n).find(|&k| self.coeff(k) != other.coeff(k))
    }
}

impl<'a> Mul<&'a SeriesMatrix> for &'a SeriesMatrix {
    type Output = SeriesMatrix;
    fn mul(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, rhs.rows, "series matrix product shape mismatch");
        let order = self.order.min(rhs.order);
        let mut out = SeriesMatrix::zeros(self.rows, rhs.cols, order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a SeriesMatrix> for &'a SeriesMatrix {
    type Output = SeriesMatrix;
    fn add(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries: Vec<Series> = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        SeriesMatrix { rows: self.rows, cols: self.cols, order: self.order.min(rhs.order), entries }
    }
}

impl<'a> Sub<&'a SeriesMatrix> for &'a SeriesMatrix {
    type Output = SeriesMatrix;
    fn sub(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries: Vec<Series> = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        SeriesMatrix { rows: self.rows, cols: self.cols, order: self.order.min(rhs.order), entries }
    }
}

impl Neg for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn neg(self) -> SeriesMatrix {
        self.map(|s| -s)
    }
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SeriesMatrix {}x{} mod q^{} [", self.rows, self.cols, self.order)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.entry(i, j).is_zero() {
                    writeln!(f, "  ({i},{j}): {}", self.entry(i, j))?;
                }
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_int_rows(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant().unwrap(), Scalar::one());
        assert_eq!(&m * &m.inverse().unwrap(), Matrix::identity(2));
        let s = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(Error::Singular));
        assert_eq!(s.determinant().unwrap(), Scalar::zero());
    }

    #[test]
    fn nilpotent_order_of_shift() {
        let j = Matrix::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(j.nilpotent_order(), Some(3));
        assert_eq!(Matrix::identity(2).nilpotent_order(), None);
    }

    #[test]
    fn series_matrix_inverse() {
        let a = Matrix::from_int_rows(&[&[1, 2], &[0, 1]]);
        let b = Matrix::from_int_rows(&[&[0, 1], &[3, -1]]);
        let m = SeriesMatrix::from_coefficients(&[a, b], 6);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, SeriesMatrix::identity(2, 6));
    }
}
