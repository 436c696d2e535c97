use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SeriesMatrix};
use crate::report::CheckReport;
use crate::scalar::Scalar;

/// The normal form `(V, ⟨·,·⟩, A(q))`: a graded space with one basis vector
/// per entry of `degrees` (sorted ascending), a constant pairing and a
/// degree `+2` endomorphism-valued series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DnObject {
    pub n: usize,
    pub degrees: Vec<i64>,
    pub pairing0: Matrix,
    pub a: SeriesMatrix,
}

impl DnObject {
    /// Builds and validates.
    pub fn new(n: usize, degrees: Vec<i64>, pairing0: Matrix, a: SeriesMatrix) -> Result<Self> {
        let d = DnObject { n, degrees, pairing0, a };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let report = self.check();
        let first = report.failures().next().map(|item| format!("{}: {}", item.name, item.detail));
        match first {
            None => Ok(()),
            Some(msg) => Err(Error::Invariant(msg)),
        }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for &k in &self.degrees {
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }

    pub fn indices_of_degree(&self, k: i64) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.degrees[i] == k).collect()
    }

    /// Index of the spanning vector of `V_{-n}`.
    pub fn volume_index(&self) -> Option<usize> {
        let idx = self.indices_of_degree(-(self.n as i64));
        (idx.len() == 1).then(|| idx[0])
    }

    /// `⟨e_{-n}, A(0)^n e_{-n}⟩`.
    pub fn top_pairing(&self) -> Option<Scalar> {
        let v = self.volume_index()?;
        let an = self.a.at_zero().pow(self.n as u32);
        let col = an.column(v);
        Some(crate::subspace::dot(self.pairing0.row(v), &col))
    }

    pub fn check(&self) -> CheckReport {
        let mut r = CheckReport::new(Some(self.order()));
        let rank = self.rank();
        let n = self.n as i64;
        let shape_ok = self.pairing0.rows() == rank
            && self.pairing0.cols() == rank
            && self.a.rows() == rank
            && self.a.cols() == rank;
        r.push("shape", if shape_ok { Ok(()) } else { Err(format!("rank {rank} does not match matrix shapes")) });
        if !shape_ok {
            return r;
        }
        r.push("grading", {
            let bad: Vec<i64> = self.degrees.iter().copied().filter(|k| k.abs() > n).collect();
            let sorted = self.degrees.windows(2).all(|w| w[0] <= w[1]);
            if !bad.is_empty() {
                Err(format!("degrees {bad:?} outside [-{n}, {n}]"))
            } else if !sorted {
                Err("basis is not sorted by degree".into())
            } else {
                Ok(())
            }
        });
        r.push("a_degree_two", self.check_a_degree());
        let a0 = self.a.at_zero();
        r.push("hard_lefschetz", self.check_lefschetz(&a0));
        r.push("self_adjoint", {
            let s = &(&a0.transpose() * &self.pairing0) + &(&self.pairing0 * &a0);
            if s.is_zero() {
                Ok(())
            } else {
                Err("A(0) is not self-adjoint for the pairing (after the i-twist: A(0)^T P + P A(0) != 0)".into())
            }
        });
        r.push("pairing_degree", {
            let mut bad = None;
            for a in 0..rank {
                for b in 0..rank {
                    if self.degrees[a] + self.degrees[b] != 0 && !self.pairing0[(a, b)].is_zero() {
                        bad = Some((a, b));
                    }
                }
            }
            match bad {
                None => Ok(()),
                Some((a, b)) => Err(format!("pairing has nonzero entry ({a},{b}) between degrees not summing to 0")),
            }
        });
        r.push("pairing_symmetry", {
            let sign = Scalar::sign_pow(n);
            if self.pairing0 == self.pairing0.transpose().scale(&sign) {
                Ok(())
            } else {
                Err(format!("pairing is not (-1)^{n}-symmetric"))
            }
        });
        r.push(
            "pairing_nondegenerate",
            match self.pairing0.determinant() {
                Ok(d) if !d.is_zero() => Ok(()),
                _ => Err("pairing is degenerate".into()),
            },
        );
        r.push("volume_dim", {
            let d = self.indices_of_degree(-n).len();
            if d == 1 {
                Ok(())
            } else {
                Err(format!("V_{{-{n}}} has dimension {d}, expected 1"))
            }
        });
        r.push("unit_constant", self.check_unit_constant());
        r
    }

    fn check_a_degree(&self) -> Result<(), String> {
        for a in 0..self.rank() {
            for b in 0..self.rank() {
                if self.degrees[a] != self.degrees[b] + 2 && !self.a.entry(a, b).is_zero() {
                    return Err(format!("A has entry ({a},{b}) not of degree +2"));
                }
            }
        }
        Ok(())
    }

    fn check_lefschetz(&self, a0: &Matrix) -> Result<(), String> {
        let mut power = Matrix::identity(self.rank());
        for k in 1..=self.n as i64 {
            power = &power * a0;
            let src = self.indices_of_degree(-k);
            let dst = self.indices_of_degree(k);
            if src.len() != dst.len() {
                return Err(format!("dim V_{{-{k}}} = {} but dim V_{k} = {}", src.len(), dst.len()));
            }
            if src.is_empty() {
                continue;
            }
            let rows: Vec<Vec<Scalar>> =
                dst.iter().map(|&i| src.iter().map(|&j| power[(i, j)].clone()).collect()).collect();
            let block = Matrix::from_rows(rows).expect("rectangular");
            if block.rank() != src.len() {
                return Err(format!("A(0)^{k}: V_{{-{k}}} -> V_{k} is not an isomorphism"));
            }
        }
        Ok(())
    }

    fn check_unit_constant(&self) -> Result<(), String> {
        let n = self.n as i64;
        for &v in &self.indices_of_degree(-n) {
            for &w in &self.indices_of_degree(-n + 2) {
                if !self.a.entry(w, v).is_constant() {
                    return Err("the V_{-n} -> V_{-n+2} component of A(q) is not constant".into());
                }
            }
        }
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> Self {
        DnObject { a: self.a.truncate(order), ..self.clone() }
    }
}
