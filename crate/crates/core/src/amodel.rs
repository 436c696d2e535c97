//! A-model normal forms from quantum cohomology, and the conversion between
//! the three-point function `g(Q)` and instanton numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SeriesMatrix};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::vshs::DnObject;

/// Even cohomology of a `n`-dimensional variety in a basis ordered by
/// degree: the first `betti[0]` vectors span `H^0`, the next `betti[2]`
/// span `H^2`, and so on. Odd entries of `betti` are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyInput {
    pub n: usize,
    pub betti: Vec<usize>,
    /// `∫ α ∪ β` on the basis.
    pub intersection: Matrix,
    /// Quantum multiplication by `[ω]`, column convention.
    pub quantum_mult_omega: SeriesMatrix,
}

impl CohomologyInput {
    /// Cohomological degree of every basis vector.
    pub fn basis_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &b) in self.betti.iter().enumerate() {
            if k % 2 == 0 {
                out.extend(std::iter::repeat_n(k, b));
            }
        }
        out
    }
}

/// `V_k = H^{n+k}` with `⟨α, β⟩ = (-1)^{n(n+1)/2} i^{|β|-n} ∫ α ∪ β`.
pub fn build_amodel_dn(c: &CohomologyInput) -> Result<DnObject> {
    let n = c.n as i64;
    let degs = c.basis_degrees();
    let rank = degs.len();
    if c.betti.len() != 2 * c.n + 1 {
        return Err(Error::Shape(format!("expected {} Betti numbers, got {}", 2 * c.n + 1, c.betti.len())));
    }
    let a = &c.quantum_mult_omega;
    if c.intersection.rows() != rank || c.intersection.cols() != rank || a.rows() != rank || a.cols() != rank {
        return Err(Error::Shape(format!("matrices must be {rank}x{rank}")));
    }
    for x in 0..rank {
        for y in 0..rank {
            if degs[x] + degs[y] != 2 * c.n && !c.intersection[(x, y)].is_zero() {
                return Err(Error::Invariant(format!("intersection pairs H^{} with H^{}", degs[x], degs[y])));
            }
        }
    }
    if c.intersection.determinant()?.is_zero() {
        return Err(Error::Invariant("intersection pairing is degenerate".into()));
    }
    let degrees: Vec<i64> = degs.iter().map(|&d| d as i64 - n).collect();
    let unit: Vec<usize> = (0..rank).filter(|&i| degs[i] == 0).collect();
    for &u in &unit {
        for i in 0..rank {
            if !a.entry(i, u).is_constant() {
                return Err(Error::UnitNotPreserved(format!("[ω] ⋆ 1 has q-dependent component {i}")));
            }
        }
    }
    let sign = Scalar::sign_pow(n * (n + 1) / 2);
    let mut pairing = Matrix::zeros(rank, rank);
    for x in 0..rank {
        for y in 0..rank {
            pairing[(x, y)] = &(&sign * &Scalar::i_pow(degrees[y])) * &c.intersection[(x, y)];
        }
    }
    let d = DnObject { n: c.n, degrees, pairing0: pairing, a: a.clone() };
    let report = d.check();
    if let Some(bad) = report.get("hard_lefschetz").filter(|i| !i.passed) {
        return Err(Error::HardLefschetzFailure(bad.detail.clone()));
    }
    d.validate()?;
    Ok(d)
}

/// Degree-indexed instanton numbers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InstantonTable {
    pub entries: BTreeMap<usize, Scalar>,
}

impl InstantonTable {
    pub fn max_degree(&self) -> usize {
        self.entries.keys().max().copied().unwrap_or(0)
    }

    pub fn get(&self, d: usize) -> Scalar {
        self.entries.get(&d).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Degrees whose count is not an integer.
    pub fn non_integral(&self) -> Vec<usize> {
        self.entries.iter().filter(|(_, v)| !v.is_integer()).map(|(d, _)| *d).collect()
    }

    /// True if every listed count is zero.
    pub fn is_trivial(&self) -> bool {
        self.entries.values().all(Scalar::is_zero)
    }
}

/// `g(Q) = 1 + (1/volume) Σ_d n_d d³ Q^d/(1 - Q^d)`.
pub fn g_from_instantons(t: &InstantonTable, volume: &Scalar, order: usize) -> Result<Series> {
    let inv = volume.inv().ok_or(Error::ZeroVolume)?;
    let mut coeffs = vec![Scalar::zero(); order];
    if order > 0 {
        coeffs[0] = Scalar::one();
    }
    for (&d, nd) in &t.entries {
        if d == 0 || nd.is_zero() {
            continue;
        }
        let w = &(nd * &Scalar::from_int((d * d * d) as i64)) * &inv;
        let mut k = d;
        while k < order {
            coeffs[k] += &w;
            k += d;
        }
    }
    Ok(Series::from_coeffs(coeffs, order))
}

/// Divisor-sum inversion of [`g_from_instantons`] for degrees `1..order`.
pub fn instantons_from_g(g: &Series, volume: &Scalar) -> InstantonTable {
    let mut entries = BTreeMap::new();
    for k in 1..g.order() {
        let mut c = volume * g.coeff(k);
        for (&d, nd) in &entries {
            if d < k && k % d == 0 {
                c -= &(nd * &Scalar::from_int((d * d * d) as i64));
            }
        }
        let nk = &c * &Scalar::ratio(1, (k * k * k) as i64);
        entries.insert(k, nk);
    }
    InstantonTable { entries }
}
