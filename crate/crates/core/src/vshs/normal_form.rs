use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{canonical_coordinate, extend_pairing, hodge_tate_split, DnObject, GeometricVHS, ReesModule};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SeriesMatrix};
use crate::scalar::Scalar;
use crate::series::Series;

/// How the basis of each graded piece is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisMode {
    /// Pieces keep the basis induced by the input frame.
    Frame,
    /// `e_{-n} = Ω` and `e_{k+2} = A(0)·e_k`; needs every graded piece to be a line.
    Lefschetz,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormReport {
    /// `Q(q)`, normalized by `Q'(0) = 1`.
    pub mirror_coordinate: Series,
    /// `q(Q)`, the compositional inverse.
    pub inverse_coordinate: Series,
    /// Ratio of the Kodaira-Spencer column to its value at `q = 0`.
    pub ks_ratio: Series,
    /// Columns: the normal-form basis in the input frame, as series in `q`.
    pub gauge: SeriesMatrix,
    pub dn: DnObject,
    pub normalized_volume_index: usize,
    /// Uniform basis scale fixing the top pairing; `-lambda` works equally.
    pub lambda: Scalar,
    pub basis_mode: BasisMode,
}

/// The `C_n` object of a normal form: connection `θ - u⁻¹A(q)` and the
/// pairing obtained by covariantly extending `⟨·,·⟩` and untwisting.
pub fn from_normal_form(d: &DnObject) -> Result<ReesModule> {
    d.validate()?;
    let rank = d.rank();
    let order = d.order();
    let b = -&d.a;
    let m = extend_pairing(&b, &d.pairing0)?;
    let mut pairing_u: BTreeMap<i64, SeriesMatrix> = BTreeMap::new();
    for a in 0..rank {
        for c in 0..rank {
            let e = m.entry(a, c);
            if e.is_zero() {
                continue;
            }
            let s = d.degrees[a] + d.degrees[c];
            if s < 0 || s.rem_euclid(2) != 0 {
                let k = e.valuation().unwrap_or(0);
                return Err(Error::NotPolarized(format!(
                    "covariant extension of the pairing acquires a u-pole at entry ({a},{c}), q^{k}"
                )));
            }
            let untwisted = e.scale(&Scalar::i_pow(-d.degrees[c]));
            pairing_u.entry(s / 2).or_insert_with(|| SeriesMatrix::zeros(rank, rank, order)).set_entry(a, c, untwisted);
        }
    }
    let mut conn_u = BTreeMap::new();
    conn_u.insert(-1, b);
    Ok(ReesModule { n: d.n, degrees: d.degrees.clone(), conn_u, pairing_u: Some(pairing_u) })
}

/// `A(Q) ↦ A(Q/c)`.
pub fn rescale_coordinate(d: &DnObject, c: &Scalar) -> Result<DnObject> {
    let inv = c.inv().ok_or(Error::ZeroScalar)?;
    Ok(DnObject { a: d.a.map(|s| s.scale_variable(&inv)), ..d.clone() })
}

/// Normal form of a Hodge-Tate VHS. `normalization` is the required value
/// of `⟨e_{-n}, A(0)^n e_{-n}⟩`.
pub fn to_normal_form(g: &GeometricVHS, normalization: &Scalar, mode: BasisMode) -> Result<NormalFormReport> {
    if normalization.is_zero() {
        return Err(Error::Normalization("normalization must be nonzero".into()));
    }
    let n = g.n;
    let order = g.order();
    let split = hodge_tate_split(g)?;
    let cc = canonical_coordinate(&split.connection, &split.twice_levels)?;
    let q_of_big_q = cc.coordinate.reverse()?;
    let h_inv = cc.h.compose(&q_of_big_q)?.invert_unit()?;
    let a_v = split.connection.compose(&q_of_big_q)?.scale_series(&h_inv);
    let a_d = -&a_v;

    // sort by degree k = -level, ties by frame position
    let mut perm: Vec<usize> = (0..g.rank()).collect();
    perm.sort_by_key(|&i| (-split.twice_levels[i], i));
    let degrees: Vec<i64> = perm.iter().map(|&i| -split.twice_levels[i]).collect();
    if let Some(k) = degrees.iter().find(|k| k.unsigned_abs() as usize > n) {
        return Err(Error::Invariant(format!("degree {k} outside [-{n}, {n}]")));
    }
    let mut a_d = a_d.permute(&perm);
    let mut gauge = split.frame.submatrix(&(0..g.rank()).collect::<Vec<_>>(), &perm);

    let has_pairing = g.pairing.is_some();
    let transported = match &g.pairing {
        Some(m) => {
            let mp = &(&split.frame.transpose() * m) * &split.frame;
            let mp = mp.compose(&q_of_big_q)?.permute(&perm);
            if !mp.is_constant() {
                return Err(Error::NotPolarized("transported pairing is not constant in the split frame".into()));
            }
            Some(mp.at_zero())
        }
        None => None,
    };
    let mut m0 = match transported {
        Some(m) => m,
        None => solve_pairing(&a_d, &degrees, n)?,
    };

    if mode == BasisMode::Lefschetz {
        if degrees.iter().collect::<std::collections::BTreeSet<_>>().len() != degrees.len() {
            return Err(Error::Invariant("Lefschetz basis needs one-dimensional graded pieces".into()));
        }
        let a0 = a_d.at_zero();
        let mut cols = vec![Matrix::identity(g.rank()).column(0)];
        for j in 1..g.rank() {
            cols.push(a0.apply(&cols[j - 1]));
        }
        let l = Matrix::from_columns(g.rank(), &cols);
        let l_inv = l.inverse().map_err(|_| Error::Invariant("A(0) powers of Ω do not form a basis".into()))?;
        let ls = SeriesMatrix::constant(&l, order);
        a_d = &(&SeriesMatrix::constant(&l_inv, order) * &a_d) * &ls;
        m0 = &(&l.transpose() * &m0) * &l;
        gauge = &gauge * &ls;
    }

    let top = top_pairing(&a_d.at_zero(), &m0, n);
    if top.is_zero() {
        return Err(Error::Normalization("top pairing vanishes".into()));
    }
    let ratio = normalization / &top;
    m0 = m0.scale(&ratio);
    // a constructed pairing is simply rescaled; a transported one fixes the
    // basis up to the scale lambda with lambda^2 = ratio
    let lambda = if has_pairing {
        let lambda = ratio.sqrt().ok_or_else(|| Error::Normalization(format!("{ratio} has no square root in Q(i)")))?;
        gauge = gauge.scale(&lambda);
        lambda
    } else {
        Scalar::one()
    };

    let dn = DnObject::new(n, degrees, m0, a_d)?;
    Ok(NormalFormReport {
        mirror_coordinate: cc.coordinate,
        inverse_coordinate: q_of_big_q,
        ks_ratio: cc.h,
        gauge,
        dn,
        normalized_volume_index: 0,
        lambda,
        basis_mode: mode,
    })
}

fn top_pairing(a0: &Matrix, m0: &Matrix, n: usize) -> Scalar {
    let v = Matrix::identity(a0.rows()).column(0);
    let w = a0.pow(n as u32).apply(&v);
    crate::subspace::dot(m0.row(0), &w)
}

// Constant pairings of degree 0, (-1)^n-symmetric, for which every
// coefficient of A is skew; must be a line.
fn solve_pairing(a: &SeriesMatrix, degrees: &[i64], n: usize) -> Result<Matrix> {
    let r = degrees.len();
    let idx = |a: usize, b: usize| a * r + b;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let unit = |i: usize| {
        let mut v = vec![Scalar::zero(); r * r];
        v[i] = Scalar::one();
        v
    };
    let sign = Scalar::sign_pow(n as i64);
    for x in 0..r {
        for y in 0..r {
            if degrees[x] + degrees[y] != 0 {
                rows.push(unit(idx(x, y)));
            }
            let mut v = unit(idx(x, y));
            v[idx(y, x)] -= &sign;
            rows.push(v);
        }
    }
    for ak in a.coefficients() {
        if ak.is_zero() {
            continue;
        }
        for x in 0..r {
            for y in 0..r {
                let mut v = vec![Scalar::zero(); r * r];
                for c in 0..r {
                    v[idx(c, y)] += &ak[(c, x)];
                    v[idx(x, c)] += &ak[(c, y)];
                }
                if v.iter().any(|e| !e.is_zero()) {
                    rows.push(v);
                }
            }
        }
    }
    let sol = Matrix::from_rows(rows).expect("rectangular").kernel();
    if sol.len() != 1 {
        return Err(Error::Normalization(format!(
            "compatible pairings form a space of dimension {}, expected 1",
            sol.len()
        )));
    }
    let rows = (0..r).map(|x| sol[0][x * r..(x + 1) * r].to_vec()).collect();
    Matrix::from_rows(rows)
}

/// `(-1)^n⟨Ω, (θ - A)^n Ω⟩` for `Ω = e_{-n}`.
pub fn yukawa_dn(d: &DnObject) -> Result<Series> {
    let vol = d.volume_index().ok_or_else(|| Error::NoVolumeForm("V_{-n} is not a line".into()))?;
    let order = d.order();
    let b = -&d.a;
    let mut v: Vec<Series> =
        (0..d.rank()).map(|i| if i == vol { Series::one(order) } else { Series::zero(order) }).collect();
    for _ in 0..d.n {
        v = apply_connection(&b, &v);
    }
    let omega: Vec<Series> = d.pairing0.row(vol).iter().map(|c| Series::constant(c.clone(), order)).collect();
    Ok(pair(&omega, &v).scale(&Scalar::sign_pow(d.n as i64)))
}

/// Same coupling computed in the input frame of `g` with the normalized
/// volume form of `report`, then expressed in the canonical coordinate.
pub fn yukawa_geometric(g: &GeometricVHS, report: &NormalFormReport) -> Result<Series> {
    let order = g.order();
    let n = g.n;
    let vol = report.normalized_volume_index;
    let gauge = &report.gauge;
    let m = match &g.pairing {
        Some(m) => m.clone(),
        None => {
            let gi = gauge.inverse()?;
            let m0 = SeriesMatrix::constant(&report.dn.pairing0, order);
            &(&gi.transpose() * &m0) * &gi
        }
    };
    let omega: Vec<Series> = (0..g.rank()).map(|i| gauge.entry(i, vol).clone()).collect();
    if omega.iter().all(Series::is_zero) {
        return Err(Error::NoVolumeForm("volume column vanishes".into()));
    }
    let mut v = omega.clone();
    for _ in 0..n {
        v = apply_connection(&g.conn, &v);
    }
    let m_omega: Vec<Series> = (0..g.rank())
        .map(|b| {
            let mut acc = Series::zero(order);
            for a in 0..g.rank() {
                acc = &acc + &(&omega[a] * m.entry(a, b));
            }
            acc
        })
        .collect();
    let y_q = pair(&m_omega, &v).scale(&Scalar::sign_pow(n as i64));
    let h_inv = report.ks_ratio.invert_unit()?.pow(n as u32);
    (&y_q * &h_inv).compose(&report.inverse_coordinate)
}

// (θ + B) applied to a column of series
fn apply_connection(b: &SeriesMatrix, v: &[Series]) -> Vec<Series> {
    let bv = b.apply(v);
    v.iter().zip(bv).map(|(x, y)| &x.theta() + &y).collect()
}

fn pair(row: &[Series], col: &[Series]) -> Series {
    let order = row.first().map_or(0, Series::order);
    let mut acc = Series::zero(order);
    for (x, y) in row.iter().zip(col) {
        acc = &acc + &(x * y);
    }
    acc
}
