use super::{neumann_solve, parity_blocks, GeometricVHS};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SeriesMatrix};
use crate::nilpotent::{weight_filtration, Endomorphism, WeightFiltration};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::subspace::Subspace;

/// The unique `U` with `U(0) = I` and `θU = BU - UN`, `N = B(0)`.
pub fn formal_flat_gauge(b: &SeriesMatrix) -> Result<SeriesMatrix> {
    let dim = b.rows();
    let n = b.at_zero();
    if n.nilpotent_order().is_none() {
        return Err(Error::NotNilpotentResidue);
    }
    let bs = b.coefficients();
    let ad = |x: &Matrix| &(&n * x) - &(x * &n);
    let mut us: Vec<Matrix> = vec![Matrix::identity(dim)];
    for k in 1..b.order() {
        let mut rhs = Matrix::zeros(dim, dim);
        for j in 1..=k {
            if !bs[j].is_zero() {
                rhs = &rhs + &(&bs[j] * &us[k - j]);
            }
        }
        let uk = if rhs.is_zero() {
            rhs
        } else {
            neumann_solve(k, ad, &rhs, 2 * dim + 2).ok_or(Error::NotNilpotentResidue)?
        };
        us.push(uk);
    }
    Ok(SeriesMatrix::from_coefficients(&us, b.order()))
}

/// A frame `P(q)` (columns in the coordinates of the input frame) in which
/// the connection is `θ + A(q)` with `A` lowering the doubled level by
/// exactly two at every order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeTateSplit {
    pub flat_gauge: SeriesMatrix,
    pub frame: SeriesMatrix,
    pub twice_levels: Vec<i64>,
    pub connection: SeriesMatrix,
}

pub fn hodge_tate_split(g: &GeometricVHS) -> Result<HodgeTateSplit> {
    let rank = g.rank();
    let order = g.order();
    let levels = &g.twice_levels;
    let n = g.residue();
    if n.nilpotent_order().is_none() {
        return Err(Error::NotNilpotentResidue);
    }
    let blocks = parity_blocks(levels);
    for a in 0..rank {
        for b in 0..rank {
            if (levels[a] - levels[b]).rem_euclid(2) != 0 && !g.conn.entry(a, b).is_zero() {
                return Err(Error::NotHodgeTate(format!("connection mixes parities at ({a},{b})")));
            }
        }
    }
    // In the frame e·U the connection is θ + N.
    let u = formal_flat_gauge(&-&g.conn)?;
    let u_inv = u.inverse()?;
    let mut x = SeriesMatrix::zeros(rank, rank, order);
    for idx in &blocks {
        let t: Vec<i64> = idx.iter().map(|&i| levels[i]).collect();
        let nb = Endomorphism::new(submatrix(&n, idx))?;
        let w = weight_filtration(&nb)?;
        let ub = u_inv.submatrix(idx, idx);
        let xb = split_block(&ub, &t, &w)?;
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                x.set_entry(ia, ib, xb.entry(a, b).clone());
            }
        }
    }
    let x_inv = x.inverse()?;
    let nx = &SeriesMatrix::constant(&n, order) * &x;
    let a = &x_inv * &(&nx + &x.theta());
    for i in 0..rank {
        for j in 0..rank {
            if levels[i] != levels[j] - 2 && !a.entry(i, j).is_zero() {
                let k = a.entry(i, j).valuation().unwrap_or(0);
                return Err(Error::DegreeViolation(format!(
                    "entry ({i},{j}) maps doubled level {} to {} at q^{k}",
                    levels[j], levels[i]
                )));
            }
        }
    }
    let frame = &u * &x;
    Ok(HodgeTateSplit { flat_gauge: u, frame, twice_levels: levels.clone(), connection: a })
}

/// `(P, A)` with `∇ = θ + A` in the frame `P`.
pub fn to_canonical_connection(g: &GeometricVHS) -> Result<(SeriesMatrix, SeriesMatrix)> {
    let s = hodge_tate_split(g)?;
    Ok((s.frame, s.connection))
}

fn submatrix(m: &Matrix, idx: &[usize]) -> Matrix {
    let rows = idx.iter().map(|&i| idx.iter().map(|&j| m[(i, j)].clone()).collect()).collect();
    Matrix::from_rows(rows).expect("rectangular")
}

fn unit_vector(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[i] = Scalar::one();
    v
}

// Lifts the graded pieces at q = 0 to pieces of the moving flag. `ub` holds
// the flag vectors (columns) in flat coordinates; `t` their doubled levels.
fn split_block(ub: &SeriesMatrix, t: &[i64], w: &WeightFiltration) -> Result<SeriesMatrix> {
    let dim = t.len();
    let order = ub.order();
    let hi = *t.iter().max().expect("nonempty block");
    let lo = *t.iter().min().expect("nonempty block");
    let f0 = |level: i64| -> Vec<usize> { (0..dim).filter(|&j| t[j] >= level).collect() };
    let mut level = hi + 2;
    while level >= lo {
        let fj = f0(level);
        let wdim = w.le(level - 2).dim();
        let f_space = Subspace::span(dim, &fj.iter().map(|&j| unit_vector(dim, j)).collect::<Vec<_>>());
        let total = f_space.sum(&w.le(level - 2));
        if fj.len() + wdim != dim || total.dim() != dim {
            return Err(Error::NotHodgeTate(format!(
                "F^{{≥{level}/2}} and W_{{≤{}/2}} are not complementary at q = 0",
                level - 2
            )));
        }
        level -= 2;
    }
    let mut x = SeriesMatrix::zeros(dim, dim, order);
    for j in 0..dim {
        let tj = t[j];
        // v ≡ e_j mod F^{≥tj+2}(0), v ∈ W_{≤tj}
        let s0 = complement_matrix(
            &f0(tj + 2).iter().map(|&i| unit_vector(dim, i)).collect::<Vec<_>>(),
            w.le(tj).basis(),
            dim,
        );
        let coords = s0.inverse().map_err(|_| Error::NotHodgeTate("graded pieces do not split".into()))?;
        let c = coords.apply(&unit_vector(dim, j));
        let nf = f0(tj + 2).len();
        let wle = w.le(tj);
        let wb = wle.basis();
        let mut v = vec![Scalar::zero(); dim];
        for (k, wv) in wb.iter().enumerate() {
            for i in 0..dim {
                v[i] += &(&c[nf + k] * &wv[i]);
            }
        }
        // x(q) ∈ F^{≥tj}(q), x - v ∈ W_{≤tj-2}
        let fcols = f0(tj);
        let wlow = w.le(tj - 2);
        let mut s = SeriesMatrix::zeros(dim, dim, order);
        for (col, &fj) in fcols.iter().enumerate() {
            for i in 0..dim {
                s.set_entry(i, col, ub.entry(i, fj).clone());
            }
        }
        for (k, wv) in wlow.basis().iter().enumerate() {
            for i in 0..dim {
                s.set_entry(i, fcols.len() + k, Series::constant(wv[i].clone(), order));
            }
        }
        let s_inv = s.inverse().map_err(|_| Error::NotHodgeTate("moving flag is not opposite to W".into()))?;
        let vs: Vec<Series> = v.iter().map(|c| Series::constant(c.clone(), order)).collect();
        let y = s_inv.apply(&vs);
        for i in 0..dim {
            let mut acc = Series::zero(order);
            for (col, &fj) in fcols.iter().enumerate() {
                acc = &acc + &(ub.entry(i, fj) * &y[col]);
            }
            x.set_entry(i, j, acc);
        }
    }
    Ok(x)
}

fn complement_matrix(first: &[Vec<Scalar>], second: &[Vec<Scalar>], dim: usize) -> Matrix {
    let mut cols = first.to_vec();
    cols.extend(second.iter().cloned());
    Matrix::from_columns(dim, &cols)
}

/// Canonical coordinate data: `Q(q) = q·exp(θ⁻¹(h - 1))` where the
/// Kodaira-Spencer column is `a(q) = h(q)·a(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCoordinate {
    pub coordinate: Series,
    pub h: Series,
    pub top_index: usize,
    pub ks0: Vec<Scalar>,
}

pub fn canonical_coordinate(a: &SeriesMatrix, twice_levels: &[i64]) -> Result<CanonicalCoordinate> {
    let order = a.order();
    let top = *twice_levels.iter().max().ok_or_else(|| Error::Shape("empty grading".into()))?;
    let tops: Vec<usize> = (0..twice_levels.len()).filter(|&i| twice_levels[i] == top).collect();
    if tops.len() != 1 {
        return Err(Error::NotProportional);
    }
    let top_index = tops[0];
    let next: Vec<usize> = (0..twice_levels.len()).filter(|&i| twice_levels[i] == top - 2).collect();
    let col: Vec<Series> = next.iter().map(|&i| a.entry(i, top_index).clone()).collect();
    let ks0: Vec<Scalar> = col.iter().map(Series::constant_term).collect();
    let Some(pivot) = ks0.iter().position(|c| !c.is_zero()) else {
        return Err(Error::ZeroKs);
    };
    let h = col[pivot].scale(&ks0[pivot].inv().expect("nonzero"));
    for (s, c) in col.iter().zip(&ks0) {
        if *s != h.scale(c) {
            return Err(Error::NotProportional);
        }
    }
    let log_ratio = (&h - &Series::one(order)).theta_inverse()?;
    let coordinate = &Series::q(order) * &log_ratio.exp()?;
    Ok(CanonicalCoordinate { coordinate, h, top_index, ks0 })
}
