//! Subspaces of `Scalar^n` in canonical (reduced row echelon) form.

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A subspace stored by its reduced row echelon basis, so two subspaces
/// are equal iff their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, &Matrix::identity(ambient).columns_vec())
    }

    pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let rows = Matrix::from_rows(vectors.to_vec()).expect("vectors of equal length");
        assert_eq!(rows.cols(), ambient);
        let (r, pivots) = rows.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient, basis }
    }

    /// Column space of `m`.
    pub fn image(m: &Matrix) -> Self {
        Self::span(m.rows(), &m.columns_vec())
    }

    pub fn kernel(m: &Matrix) -> Self {
        Self::span(m.cols(), &m.kernel())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.annihilator_rows().iter().all(|a| dot(a, v).is_zero())
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Self {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Self {
        let mut ann = self.annihilator_rows();
        ann.extend(other.annihilator_rows());
        if ann.is_empty() {
            return Self::full(self.ambient);
        }
        Self::kernel(&Matrix::from_rows(ann).expect("rectangular"))
    }

    /// `{ m·v : v ∈ self }`.
    pub fn map(&self, m: &Matrix) -> Self {
        let imgs: Vec<Vec<Scalar>> = self.basis.iter().map(|v| m.apply(v)).collect();
        Self::span(m.rows(), &imgs)
    }

    /// `{ v ∈ self : m·v ∈ target }`.
    pub fn preimage_within(&self, m: &Matrix, target: &Subspace) -> Self {
        if self.basis.is_empty() {
            return self.clone();
        }
        let ann = target.annihilator_rows();
        if ann.is_empty() {
            return self.clone();
        }
        let b = Matrix::from_columns(self.ambient, &self.basis);
        let cond = &(&Matrix::from_rows(ann).expect("rectangular") * m) * &b;
        let coeffs = cond.kernel();
        let vecs: Vec<Vec<Scalar>> = coeffs.iter().map(|c| b.apply(c)).collect();
        Self::span(self.ambient, &vecs)
    }

    /// Rows spanning `{ a : a·v = 0 for all v ∈ self }`.
    pub fn annihilator_rows(&self) -> Vec<Vec<Scalar>> {
        if self.basis.is_empty() {
            return Matrix::identity(self.ambient).columns_vec();
        }
        Matrix::from_rows(self.basis.clone()).expect("rectangular").kernel()
    }

    /// Basis of a complement of `self` inside `outer`, chosen greedily from
    /// the stored basis of `outer`.
    pub fn complement_in(&self, outer: &Subspace) -> Vec<Vec<Scalar>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in &outer.basis {
            if !acc.contains(v) {
                acc = acc.sum(&Subspace::span(self.ambient, std::slice::from_ref(v)));
                out.push(v.clone());
            }
        }
        out
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

impl Matrix {
    pub fn columns_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn canonical_equality() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, &[v(&[1, 2, 1]), v(&[1, 0, -1])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn intersect_and_sum() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::span(3, &[v(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert_eq!(a.intersect(&Subspace::zero(3)).dim(), 0);
    }

    #[test]
    fn preimage() {
        let n = Matrix::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let full = Subspace::full(3);
        let k = full.preimage_within(&n, &Subspace::zero(3));
        assert_eq!(k, Subspace::span(3, &[v(&[0, 0, 1])]));
    }
}
