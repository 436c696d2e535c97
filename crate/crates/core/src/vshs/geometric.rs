use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SeriesMatrix};
use crate::report::CheckReport;
use crate::scalar::Scalar;

/// A filtered bundle with connection `∇ = θ + B(q)` in an adapted frame.
///
/// `twice_levels[j]` is twice the Hodge level of frame vector `j`; vectors
/// with even doubled level span the even part, odd ones the odd part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricVHS {
    pub n: usize,
    pub conn: SeriesMatrix,
    pub twice_levels: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<SeriesMatrix>,
}

impl GeometricVHS {
    pub fn new(n: usize, conn: SeriesMatrix, twice_levels: Vec<i64>, pairing: Option<SeriesMatrix>) -> Result<Self> {
        let r = twice_levels.len();
        if conn.rows() != r || conn.cols() != r {
            return Err(Error::Shape(format!("connection is {}x{}, rank is {r}", conn.rows(), conn.cols())));
        }
        if let Some(m) = &pairing {
            if m.rows() != r || m.cols() != r {
                return Err(Error::Shape("pairing shape does not match rank".into()));
            }
        }
        Ok(GeometricVHS { n, conn, twice_levels, pairing })
    }

    pub fn rank(&self) -> usize {
        self.twice_levels.len()
    }

    pub fn order(&self) -> usize {
        self.conn.order()
    }

    /// `(dim V_ev, dim V_odd)`.
    pub fn parity_split(&self) -> (usize, usize) {
        let ev = self.twice_levels.iter().filter(|t| t.rem_euclid(2) == 0).count();
        (ev, self.rank() - ev)
    }

    pub fn residue(&self) -> Matrix {
        self.conn.at_zero()
    }

    /// Substitutes `q ↦ c·q` in every matrix.
    pub fn scale_variable(&self, c: &Scalar) -> Self {
        GeometricVHS {
            n: self.n,
            conn: self.conn.map(|s| s.scale_variable(c)),
            twice_levels: self.twice_levels.clone(),
            pairing: self.pairing.as_ref().map(|m| m.map(|s| s.scale_variable(c))),
        }
    }

    /// The same bundle in the frame `e·P(q)`: the new connection matrix is
    /// `P⁻¹BP + P⁻¹θP` and the pairing becomes `PᵀMP`. Levels are kept, so
    /// `P` should preserve the flag.
    pub fn gauge_transform(&self, p: &SeriesMatrix) -> Result<Self> {
        let p_inv = p.inverse()?;
        let conn = &(&p_inv * &(&self.conn * p)) + &(&p_inv * &p.theta());
        let pairing = self.pairing.as_ref().map(|m| &(&p.transpose() * m) * p);
        Ok(GeometricVHS { n: self.n, conn, twice_levels: self.twice_levels.clone(), pairing })
    }

    pub fn check(&self) -> CheckReport {
        let mut r = CheckReport::new(Some(self.order()));
        let t = &self.twice_levels;
        let rank = self.rank();
        r.push("griffiths_transversality", {
            let mut res = Ok(());
            for a in 0..rank {
                for b in 0..rank {
                    if self.conn.entry(a, b).is_zero() {
                        continue;
                    }
                    if (t[a] - t[b]).rem_euclid(2) != 0 {
                        res = Err(format!("connection mixes parities at ({a},{b})"));
                    } else if t[a] < t[b] - 2 {
                        res = Err(format!("connection entry ({a},{b}) drops the Hodge level by more than one"));
                    }
                }
            }
            res
        });
        let Some(m) = &self.pairing else {
            r.pass("pairing", "no pairing attached");
            return r;
        };
        r.push("covariant_constancy", {
            let lhs = m.theta();
            let rhs = &(&self.conn.transpose() * m) + &(m * &self.conn);
            match lhs.first_difference(&rhs) {
                None => Ok(()),
                Some(k) => Err(format!("θM != BᵀM + MB at q^{k}")),
            }
        });
        r.push("symmetry", {
            let sign = Scalar::sign_pow(self.n as i64);
            match m.first_difference(&m.transpose().scale(&sign)) {
                None => Ok(()),
                Some(k) => Err(format!("M != (-1)^n Mᵀ at q^{k}")),
            }
        });
        r.push("hodge_orthogonality", {
            let mut res = Ok(());
            for a in 0..rank {
                for b in 0..rank {
                    if m.entry(a, b).is_zero() {
                        continue;
                    }
                    if (t[a] - t[b]).rem_euclid(2) != 0 {
                        res = Err(format!("pairing mixes parities at ({a},{b})"));
                    } else if t[a] + t[b] > 0 {
                        res = Err(format!("pairing entry ({a},{b}) is nonzero on F^p x F^q with p + q > 0"));
                    }
                }
            }
            res
        });
        r.push("graded_nondegenerate", {
            let m0 = m.at_zero();
            let mut res = Ok(());
            let mut levels: Vec<i64> = t.clone();
            levels.sort();
            levels.dedup();
            for &l in &levels {
                let rows: Vec<usize> = (0..rank).filter(|&i| t[i] == l).collect();
                let cols: Vec<usize> = (0..rank).filter(|&i| t[i] == -l).collect();
                let block = Matrix::from_rows(
                    rows.iter().map(|&i| cols.iter().map(|&j| m0[(i, j)].clone()).collect()).collect(),
                );
                let ok = rows.len() == cols.len() && block.map(|b| b.rank() == rows.len()).unwrap_or(rows.is_empty());
                if !ok {
                    res = Err(format!("pairing Gr^{l} x Gr^{} is degenerate at q = 0", -l));
                }
            }
            res
        });
        r
    }
}
