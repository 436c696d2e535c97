use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::GeometricVHS;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SeriesMatrix};
use crate::report::CheckReport;
use crate::scalar::Scalar;

/// A graded module over the power series ring in `u` with a connection
/// allowed one `u`-pole.
///
/// `conn_u[j]` is the coefficient of `u^j` in the matrix of `∇_{θ}`; the
/// pairing `(e_a, e_b)` is `Σ_j pairing_u[j][a][b]·u^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReesModule {
    pub n: usize,
    pub degrees: Vec<i64>,
    pub conn_u: BTreeMap<i64, SeriesMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing_u: Option<BTreeMap<i64, SeriesMatrix>>,
}

impl ReesModule {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn order(&self) -> usize {
        self.conn_u
            .values()
            .chain(self.pairing_u.iter().flat_map(|p| p.values()))
            .map(SeriesMatrix::order)
            .min()
            .unwrap_or(0)
    }

    /// Drops zero coefficients so that equal modules compare equal.
    pub fn normalized(&self) -> Self {
        let strip = |m: &BTreeMap<i64, SeriesMatrix>| {
            m.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect::<BTreeMap<_, _>>()
        };
        ReesModule {
            n: self.n,
            degrees: self.degrees.clone(),
            conn_u: strip(&self.conn_u),
            pairing_u: self.pairing_u.as_ref().map(strip),
        }
    }
}

/// Checks the pre-VSHS axioms mod `q^order`.
pub fn verify_prevhs(r: &ReesModule) -> CheckReport {
    let order = r.order();
    let mut rep = CheckReport::new(Some(order));
    let rank = r.rank();
    let k = &r.degrees;
    let shapes_ok = r
        .conn_u
        .values()
        .chain(r.pairing_u.iter().flat_map(|p| p.values()))
        .all(|m| m.rows() == rank && m.cols() == rank);
    rep.push("shape", if shapes_ok { Ok(()) } else { Err("coefficient matrices do not match the rank".into()) });
    if !shapes_ok {
        return rep;
    }
    rep.push("u_valuation", {
        match r.conn_u.iter().find(|(j, m)| **j < -1 && !m.is_zero()) {
            None => Ok(()),
            Some((j, _)) => Err(format!("connection has a u^{j} term")),
        }
    });
    rep.pass("flatness", "vacuous over a one-dimensional base");
    rep.push("connection_degree", {
        let mut res = Ok(());
        for (&j, m) in &r.conn_u {
            for a in 0..rank {
                for b in 0..rank {
                    if k[b] - k[a] != 2 * j && !m.entry(a, b).is_zero() {
                        res = Err(format!("u^{j} coefficient has entry ({a},{b}) of nonzero degree"));
                    }
                }
            }
        }
        res
    });
    let Some(p) = &r.pairing_u else {
        rep.pass("pairing", "no pairing attached");
        return rep;
    };
    rep.push("pairing_degree", {
        let mut res = Ok(());
        for (&j, m) in p {
            for a in 0..rank {
                for b in 0..rank {
                    if m.entry(a, b).is_zero() {
                        continue;
                    }
                    if j < 0 {
                        res = Err(format!("pairing has a u^{j} term"));
                    } else if k[a] + k[b] != 2 * j {
                        res = Err(format!("pairing coefficient of u^{j} at ({a},{b}) has nonzero degree"));
                    }
                }
            }
        }
        res
    });
    rep.push("pairing_symmetry", {
        let mut res = Ok(());
        for (&j, m) in p {
            for a in 0..rank {
                for b in 0..rank {
                    let sign = Scalar::sign_pow(r.n as i64 + k[a] + j);
                    if *m.entry(a, b) != m.entry(b, a).scale(&sign) {
                        res = Err(format!("(e_{a}, e_{b}) != (-1)^(n+deg)(e_{b}, e_{a})* at u^{j}"));
                    }
                }
            }
        }
        res
    });
    rep.push("covariant_constancy", {
        // θP_s = Σ_j C_jᵀ P_{s-j} + (-1)^j P_{s-j} C_j
        let mut res = Ok(());
        let zero = SeriesMatrix::zeros(rank, rank, order);
        let lo = p.keys().min().copied().unwrap_or(0) + r.conn_u.keys().min().copied().unwrap_or(0);
        let hi = p.keys().max().copied().unwrap_or(0) + r.conn_u.keys().max().copied().unwrap_or(0);
        for s in lo..=hi {
            let lhs = p.get(&s).map_or(zero.clone(), SeriesMatrix::theta).truncate(order);
            let mut rhs = zero.clone();
            for (&j, c) in &r.conn_u {
                if let Some(ps) = p.get(&(s - j)) {
                    let term = &(&c.transpose() * ps) + &(ps * c).scale(&Scalar::sign_pow(j));
                    rhs = &rhs + &term.truncate(order);
                }
            }
            if let Some(q) = lhs.first_difference(&rhs) {
                res = Err(format!("covariant constancy fails at u^{s}, q^{q}"));
                break;
            }
        }
        res
    });
    rep.push("nondegenerate", {
        let p0 = p.get(&0).map(SeriesMatrix::at_zero).unwrap_or_else(|| Matrix::zeros(rank, rank));
        match p0.determinant() {
            Ok(d) if !d.is_zero() => Ok(()),
            _ => Err("pairing mod u is degenerate at q = 0".into()),
        }
    });
    rep
}

/// Collapses the grading via `u`-periodicity: the connection descends to
/// `B = Σ_j C_j`, basis vector `a` gets doubled level `-deg(a)`, and the
/// pairing is twisted to `M[a][b] = i^{deg(b)}·(e_a, e_b)|_{u=1}`.
pub fn rees_to_geometric(r: &ReesModule) -> Result<GeometricVHS> {
    let rank = r.rank();
    if rank == 0 {
        return Err(Error::NotFree("rank zero".into()));
    }
    let order = r.order();
    let rep = verify_prevhs(r);
    if let Some(bad) = rep.failures().next() {
        return Err(Error::Invariant(format!("{}: {}", bad.name, bad.detail)));
    }
    let mut b = SeriesMatrix::zeros(rank, rank, order);
    for c in r.conn_u.values() {
        b = &b + &c.truncate(order);
    }
    let pairing = r.pairing_u.as_ref().map(|p| {
        let mut m = SeriesMatrix::zeros(rank, rank, order);
        for pj in p.values() {
            for a in 0..rank {
                for bb in 0..rank {
                    let e = pj.entry(a, bb);
                    if !e.is_zero() {
                        let twisted = e.scale(&Scalar::i_pow(r.degrees[bb])).truncate(order);
                        m.set_entry(a, bb, m.entry(a, bb) + &twisted);
                    }
                }
            }
        }
        m
    });
    let levels = r.degrees.iter().map(|k| -k).collect();
    GeometricVHS::new(r.n, b, levels, pairing)
}

/// Inverse of [`rees_to_geometric`]. `degree_choice`, if given, must be the
/// lift `deg(a) = -twice_level(a)`; any other lift changes the lattice.
pub fn geometric_to_rees(g: &GeometricVHS, degree_choice: Option<&[i64]>) -> Result<ReesModule> {
    let rank = g.rank();
    let degrees: Vec<i64> = g.twice_levels.iter().map(|t| -t).collect();
    if let Some(choice) = degree_choice {
        if choice.len() != rank {
            return Err(Error::InconsistentLift(format!("{} degrees given for rank {rank}", choice.len())));
        }
        if let Some(a) = (0..rank).find(|&a| choice[a] != degrees[a]) {
            return Err(Error::InconsistentLift(format!(
                "basis vector {a} at doubled level {} needs degree {}, got {}",
                g.twice_levels[a], degrees[a], choice[a]
            )));
        }
    }
    let order = g.order();
    let mut conn_u: BTreeMap<i64, SeriesMatrix> = BTreeMap::new();
    for a in 0..rank {
        for b in 0..rank {
            let e = g.conn.entry(a, b);
            if e.is_zero() {
                continue;
            }
            let diff = degrees[b] - degrees[a];
            if diff.rem_euclid(2) != 0 || diff < -2 {
                return Err(Error::InconsistentLift(format!(
                    "connection entry ({a},{b}) has no place in u-degree {diff}/2"
                )));
            }
            conn_u.entry(diff / 2).or_insert_with(|| SeriesMatrix::zeros(rank, rank, order)).set_entry(a, b, e.clone());
        }
    }
    if conn_u.is_empty() {
        conn_u.insert(0, SeriesMatrix::zeros(rank, rank, order));
    }
    let pairing_u = match &g.pairing {
        None => None,
        Some(m) => {
            let mut p: BTreeMap<i64, SeriesMatrix> = BTreeMap::new();
            for a in 0..rank {
                for b in 0..rank {
                    let e = m.entry(a, b);
                    if e.is_zero() {
                        continue;
                    }
                    let s = degrees[a] + degrees[b];
                    if s.rem_euclid(2) != 0 || s < 0 {
                        return Err(Error::InconsistentLift(format!("pairing entry ({a},{b}) would sit at u^({s}/2)")));
                    }
                    let untwisted = e.scale(&Scalar::i_pow(-degrees[b]));
                    p.entry(s / 2)
                        .or_insert_with(|| SeriesMatrix::zeros(rank, rank, m.order()))
                        .set_entry(a, b, untwisted);
                }
            }
            Some(p)
        }
    };
    Ok(ReesModule { n: g.n, degrees, conn_u, pairing_u })
}
