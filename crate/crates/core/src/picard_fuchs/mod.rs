//! Picard-Fuchs operators `Σ_j c_j(q) θ^j`, their Frobenius solutions at a
//! point of maximal unipotent monodromy, and the companion connection.

mod parse;

use serde::{Deserialize, Serialize};

use crate::amodel::{instantons_from_g, InstantonTable};
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::scalar::Scalar;
use crate::series::Series;
use crate::vshs::{rescale_coordinate, to_normal_form, yukawa_geometric, BasisMode, GeometricVHS, NormalFormReport};
use parse::{parse_operator_text, poly_shift, OpPoly};

/// `L = Σ_{j=0}^{r} c_j(q) θ^j`. Coefficients are polynomials in `q`;
/// if `precision` is set they are only known modulo `q^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PfRepr", into = "PfRepr")]
pub struct PFOperator {
    order_theta: usize,
    coeffs: Vec<Vec<Scalar>>,
    precision: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Poly(Vec<Scalar>),
    Series(Series),
}

#[derive(Serialize, Deserialize)]
struct PfRepr {
    order: usize,
    coeffs: Vec<CoeffRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    precision: Option<usize>,
}

impl TryFrom<PfRepr> for PFOperator {
    type Error = Error;
    fn try_from(r: PfRepr) -> Result<Self> {
        let mut precision = r.precision;
        let coeffs = r
            .coeffs
            .into_iter()
            .map(|c| match c {
                CoeffRepr::Poly(p) => p,
                CoeffRepr::Series(s) => {
                    precision = Some(precision.map_or(s.order(), |p| p.min(s.order())));
                    s.coeffs().to_vec()
                }
            })
            .collect();
        PFOperator::new(r.order, coeffs, precision)
    }
}

impl From<PFOperator> for PfRepr {
    fn from(l: PFOperator) -> Self {
        PfRepr {
            order: l.order_theta,
            coeffs: l.coeffs.into_iter().map(CoeffRepr::Poly).collect(),
            precision: l.precision,
        }
    }
}

impl PFOperator {
    /// Validates shape and maximal unipotency at `q = 0`.
    pub fn new(order_theta: usize, mut coeffs: Vec<Vec<Scalar>>, precision: Option<usize>) -> Result<Self> {
        if order_theta == 0 {
            return Err(Error::Parse("operator must have positive order in theta".into()));
        }
        if coeffs.len() != order_theta + 1 {
            return Err(Error::Parse(format!("expected {} coefficients, got {}", order_theta + 1, coeffs.len())));
        }
        for c in &mut coeffs {
            while c.last().is_some_and(Scalar::is_zero) {
                c.pop();
            }
        }
        let l = PFOperator { order_theta, coeffs, precision };
        l.check_mum()?;
        Ok(l)
    }

    fn from_op_poly(op: &OpPoly) -> Result<Self> {
        let r = op.0.values().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0);
        let qdeg = op.0.keys().max().copied().unwrap_or(0);
        let mut coeffs = vec![vec![Scalar::zero(); qdeg + 1]; r + 1];
        for (m, p) in &op.0 {
            for (j, c) in p.iter().enumerate() {
                coeffs[j][*m] = c.clone();
            }
        }
        PFOperator::new(r, coeffs, None)
    }

    pub fn order_theta(&self) -> usize {
        self.order_theta
    }

    pub fn precision(&self) -> Option<usize> {
        self.precision
    }

    /// `[q^m] c_j`.
    pub fn coeff(&self, j: usize, m: usize) -> Scalar {
        self.coeffs[j].get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeff_series(&self, j: usize, order: usize) -> Series {
        Series::from_coeffs(self.coeffs[j].iter().take(order).cloned().collect(), order)
    }

    /// `P_m(θ)` in `L = Σ_m q^m P_m(θ)`, as coefficients in `θ`.
    pub fn theta_poly(&self, m: usize) -> Vec<Scalar> {
        (0..=self.order_theta).map(|j| self.coeff(j, m)).collect()
    }

    fn q_degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len()).max().unwrap_or(1).saturating_sub(1)
    }

    fn check_mum(&self) -> Result<()> {
        let r = self.order_theta;
        if self.coeff(r, 0).is_zero() {
            return Err(Error::NotMaximallyUnipotent("leading coefficient vanishes at q = 0".into()));
        }
        if let Some(j) = (0..r).find(|&j| !self.coeff(j, 0).is_zero()) {
            return Err(Error::NotMaximallyUnipotent(format!(
                "indicial polynomial has a nonzero theta^{j} term, so not all local exponents are 0"
            )));
        }
        Ok(())
    }

    fn check_precision(&self, order: usize) -> Result<()> {
        match self.precision {
            Some(p) if p < order => {
                Err(Error::Invariant(format!("operator is known mod q^{p}, cannot work mod q^{order}")))
            }
            _ => Ok(()),
        }
    }

    /// Applies `L` to `Σ_i (log q)^i/i! · parts[i]`, using `θ(log q) = 1`.
    pub fn apply_log(&self, parts: &[Series]) -> Vec<Series> {
        let order = parts.first().map_or(0, Series::order);
        let mut out = vec![Series::zero(order); parts.len()];
        let mut cur = parts.to_vec();
        for j in 0..=self.order_theta {
            let c = self.coeff_series(j, order);
            for (o, p) in out.iter_mut().zip(&cur) {
                *o = &*o + &(&c * p);
            }
            cur = (0..cur.len())
                .map(|i| {
                    let next = cur.get(i + 1).cloned().unwrap_or_else(|| Series::zero(order));
                    &cur[i].theta() + &next
                })
                .collect();
        }
        out
    }
}

/// Parses JSON (`{"order": r, "coeffs": [...]}`) or the text form.
pub fn parse_pf(text: &str) -> Result<PFOperator> {
    let t = text.trim();
    if t.starts_with('{') {
        let repr: PfRepr = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        return PFOperator::try_from(repr);
    }
    PFOperator::from_op_poly(&parse_operator_text(t)?)
}

/// Solutions `y_j = Σ_{i≤j} (log q)^i/i! · log_parts[j][i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusBasis {
    pub y0: Series,
    pub log_parts: Vec<Vec<Series>>,
    pub depth: usize,
}

impl FrobeniusBasis {
    /// `f_{j,i}`.
    pub fn part(&self, j: usize, i: usize) -> &Series {
        &self.log_parts[j][i]
    }

    /// `L` applied to every solution; all entries vanish for a correct basis.
    pub fn residuals(&self, l: &PFOperator) -> Vec<Vec<Series>> {
        self.log_parts.iter().map(|parts| l.apply_log(parts)).collect()
    }
}

/// Frobenius method via the deformation `q^ε Σ_K a_K(ε) q^K` expanded to
/// `ε^depth`; `y_j` is the `ε^j` Taylor coefficient.
pub fn frobenius_solve(l: &PFOperator, depth: usize, order: usize) -> Result<FrobeniusBasis> {
    l.check_mum()?;
    l.check_precision(order)?;
    if depth == 0 || depth > l.order_theta {
        return Err(Error::Invariant(format!("depth must be between 1 and {}", l.order_theta)));
    }
    let eps_poly = |p: &[Scalar], shift: i64| -> Series {
        Series::from_coeffs(poly_shift(p, shift).into_iter().take(depth).collect(), depth)
    };
    let p0 = l.theta_poly(0);
    let qdeg = l.q_degree();
    let mut a: Vec<Series> = vec![Series::one(depth)];
    for k in 1..order {
        let mut sum = Series::zero(depth);
        for m in 1..=k.min(qdeg) {
            let pm = l.theta_poly(m);
            if pm.iter().all(Scalar::is_zero) {
                continue;
            }
            sum = &sum + &(&eps_poly(&pm, (k - m) as i64) * &a[k - m]);
        }
        let denom = eps_poly(&p0, k as i64).invert_unit()?;
        a.push(-&(&sum * &denom));
    }
    let taylor = |s: usize| Series::from_coeffs(a.iter().map(|ak| ak.coeff(s).clone()).collect(), order);
    let log_parts: Vec<Vec<Series>> = (0..depth).map(|j| (0..=j).map(|i| taylor(j - i)).collect()).collect();
    Ok(FrobeniusBasis { y0: log_parts[0][0].clone(), log_parts, depth })
}

/// `Q = q·exp(f_{1,0}/y0)`.
pub fn mirror_map_frobenius(f: &FrobeniusBasis) -> Result<Series> {
    if f.depth < 2 {
        return Err(Error::Invariant("mirror map needs the logarithmic solution (depth >= 2)".into()));
    }
    let ratio = f.part(1, 0).div_unit(&f.y0)?;
    Ok(&Series::q(f.y0.order()) * &ratio.exp()?)
}

/// Companion connection in the frame `θ^j Ω`, `j = 0..r-1`, with `θ^j Ω`
/// at doubled Hodge level `n - 2j`, `n = r - 1`.
pub fn companion_vhs(l: &PFOperator, order: usize) -> Result<GeometricVHS> {
    l.check_mum()?;
    l.check_precision(order)?;
    let r = l.order_theta;
    let lead_inv = l.coeff_series(r, order).invert_unit()?;
    let mut b = SeriesMatrix::zeros(r, r, order);
    for j in 0..r - 1 {
        b.set_entry(j + 1, j, Series::one(order));
    }
    for i in 0..r {
        b.set_entry(i, r - 1, -&(&l.coeff_series(i, order) * &lead_inv));
    }
    let n = r - 1;
    let levels = (0..r).map(|j| n as i64 - 2 * j as i64).collect();
    GeometricVHS::new(n, b, levels, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BModelResult {
    pub report: NormalFormReport,
    pub frobenius_mirror_map: Series,
    /// Middle entry of `A(Q)` in the Lefschetz basis (threefolds only).
    pub g: Option<Series>,
    pub yukawa: Series,
    pub instantons: Option<InstantonTable>,
    pub sign: i8,
}

/// Companion VHS → normal form → `g(Q)` → instanton numbers, with the
/// Frobenius mirror map as an independent check. `sign = -1` substitutes
/// `Q ↦ -Q` afterwards.
pub fn bmodel_pipeline(l: &PFOperator, volume: &Scalar, order: usize, sign: i8) -> Result<BModelResult> {
    if volume.is_zero() {
        return Err(Error::ZeroVolume);
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Invariant("sign must be +1 or -1".into()));
    }
    let g = companion_vhs(l, order)?;
    let mut report = to_normal_form(&g, volume, BasisMode::Lefschetz)?;
    let frob = frobenius_solve(l, 2.min(l.order_theta), order)?;
    let frobenius_mirror_map = if frob.depth >= 2 {
        let qf = mirror_map_frobenius(&frob)?;
        if let Some(k) = qf.first_difference(&report.mirror_coordinate) {
            return Err(Error::MirrorMapMismatch(k));
        }
        qf
    } else {
        Series::q(order)
    };
    let mut yukawa = yukawa_geometric(&g, &report)?;
    let c = Scalar::from_int(sign as i64);
    if sign == -1 {
        report.dn = rescale_coordinate(&report.dn, &c)?;
        yukawa = yukawa.scale_variable(&c);
    }
    let gq = (report.dn.n == 3).then(|| report.dn.a.entry(2, 1).clone());
    let instantons = gq.as_ref().map(|s| instantons_from_g(s, volume));
    Ok(BModelResult { report, frobenius_mirror_map, g: gq, yukawa, instantons, sign })
}
