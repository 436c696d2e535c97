use super::neumann_solve;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SeriesMatrix};
use crate::report::CheckReport;

/// The unique `M(q)` with `M(0) = m0` and `θM = AᵀM + MA`.
///
/// Order `k` solves `(k - L)M_k = Σ_{j≥1} (A_jᵀM_{k-j} + M_{k-j}A_j)` with
/// `L(X) = A_0ᵀX + XA_0`, which is nilpotent when `A_0` is.
pub fn extend_pairing(a: &SeriesMatrix, m0: &Matrix) -> Result<SeriesMatrix> {
    let dim = a.rows();
    if !a.at_zero().is_square() || m0.rows() != dim || m0.cols() != dim {
        return Err(Error::Shape("pairing and connection shapes differ".into()));
    }
    let a_coeffs = a.coefficients();
    let a0 = a.at_zero();
    let a0t = a0.transpose();
    if !(&(&a0t * m0) + &(m0 * &a0)).is_zero() {
        return Err(Error::ResidueNotCompatible("A(0)ᵀM0 + M0·A(0) != 0".into()));
    }
    let l = |x: &Matrix| &(&a0t * x) + &(x * &a0);
    let cap = 2 * dim + 2;
    let mut ms: Vec<Matrix> = vec![m0.clone()];
    for k in 1..a.order() {
        let mut phi = Matrix::zeros(dim, dim);
        for j in 1..=k {
            let aj = &a_coeffs[j];
            if aj.is_zero() || ms[k - j].is_zero() {
                continue;
            }
            phi = &phi + &(&(&aj.transpose() * &ms[k - j]) + &(&ms[k - j] * aj));
        }
        let mk = if phi.is_zero() { phi } else { neumann_solve(k, l, &phi, cap).ok_or(Error::NotNilpotentResidue)? };
        ms.push(mk);
    }
    Ok(SeriesMatrix::from_coefficients(&ms, a.order()))
}

/// Block pattern of a pairing against a grading: entries pairing degree `p`
/// with `q` vanish unless `p + q = 0`, and the `(p, -p)` blocks are square
/// and nondegenerate.
pub fn pairing_grading_check(m0: &Matrix, grading: &[i64]) -> CheckReport {
    let mut r = CheckReport::new(None);
    let n = grading.len();
    if m0.rows() != n || m0.cols() != n {
        r.push("shape", Err(format!("pairing is {}x{}, grading has {n} entries", m0.rows(), m0.cols())));
        return r;
    }
    r.push("off_antidiagonal_zero", {
        let mut res = Ok(());
        'outer: for a in 0..n {
            for b in 0..n {
                if grading[a] + grading[b] != 0 && !m0[(a, b)].is_zero() {
                    res =
                        Err(format!("entry ({a},{b}) pairs degrees {} and {} and is nonzero", grading[a], grading[b]));
                    break 'outer;
                }
            }
        }
        res
    });
    r.push("antidiagonal_nondegenerate", {
        let mut degs: Vec<i64> = grading.to_vec();
        degs.sort();
        degs.dedup();
        let mut res = Ok(());
        for &p in &degs {
            let rows: Vec<usize> = (0..n).filter(|&i| grading[i] == p).collect();
            let cols: Vec<usize> = (0..n).filter(|&i| grading[i] == -p).collect();
            if rows.len() != cols.len() {
                res = Err(format!("degrees {p} and {} have different dimensions", -p));
                break;
            }
            let block =
                Matrix::from_rows(rows.iter().map(|&i| cols.iter().map(|&j| m0[(i, j)].clone()).collect()).collect())
                    .expect("rectangular");
            if block.rank() != rows.len() {
                res = Err(format!("block ({p},{}) is degenerate", -p));
                break;
            }
        }
        res
    });
    r
}
