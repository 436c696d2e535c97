//! Nilpotent endomorphisms and their monodromy weight filtrations.
//!
//! Weights use the doubled convention: `MW_{≤k}` for `k ∈ [-n, n]` where
//! `n` is the nilpotency index, and `W_{≤p} = MW_{≤2p}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct Endomorphism(Matrix);

impl TryFrom<Matrix> for Endomorphism {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<Self> {
        Endomorphism::new(m)
    }
}

impl From<Endomorphism> for Matrix {
    fn from(e: Endomorphism) -> Matrix {
        e.0
    }
}

impl Endomorphism {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!("endomorphism must be square, got {}x{}", m.rows(), m.cols())));
        }
        Ok(Endomorphism(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// Nilpotent matrix with Jordan blocks of the given sizes; inside each
/// block `N e_j = e_{j+1}`.
pub fn jordan_nilpotent(sizes: &[usize]) -> Matrix {
    let dim = sizes.iter().sum();
    let mut m = Matrix::zeros(dim, dim);
    let mut start = 0;
    for &s in sizes {
        for j in 0..s.saturating_sub(1) {
            m[(start + j + 1, start + j)] = Scalar::one();
        }
        start += s;
    }
    m
}

/// Smallest `n` with `N^{n+1} = 0`.
pub fn nilpotency_index(n: &Endomorphism) -> Result<usize> {
    match n.matrix().nilpotent_order() {
        Some(0) | None if n.dim() > 0 => Err(Error::NotNilpotent),
        Some(k) => Ok(k.saturating_sub(1)),
        None => Ok(0),
    }
}

/// Jordan block sizes in decreasing order, read off from the ranks of powers.
pub fn jordan_type(n: &Endomorphism) -> Result<Vec<usize>> {
    let idx = nilpotency_index(n)?;
    let dim = n.dim();
    let mut ranks = vec![dim];
    let mut p = Matrix::identity(dim);
    for _ in 0..=idx + 1 {
        p = &p * n.matrix();
        ranks.push(p.rank());
    }
    // blocks of size >= k: rank N^{k-1} - rank N^k
    let at_least: Vec<usize> = (1..ranks.len()).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut sizes = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exact));
    }
    Ok(sizes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightFiltration {
    center_shift: usize,
    /// `levels[i]` is `MW_{≤ i - n - 1}` for `i = 0..=2n+1`.
    levels: Vec<Subspace>,
}

impl WeightFiltration {
    pub fn center_shift(&self) -> usize {
        self.center_shift
    }

    pub fn ambient(&self) -> usize {
        self.levels[0].ambient()
    }

    /// `MW_{≤k}` for any integer `k`.
    pub fn le(&self, k: i64) -> Subspace {
        let n = self.center_shift as i64;
        if k < -n - 1 {
            return Subspace::zero(self.ambient());
        }
        if k >= n {
            return self.levels[self.levels.len() - 1].clone();
        }
        self.levels[(k + n + 1) as usize].clone()
    }

    pub fn graded_dim(&self, k: i64) -> usize {
        self.le(k).dim() - self.le(k - 1).dim()
    }

    /// Checks `N·MW_{≤k} ⊆ MW_{≤k-2}` and that `N^k: Gr_k → Gr_{-k}` is an
    /// isomorphism for every `k ≥ 0`.
    pub fn satisfies_axioms(&self, n: &Matrix) -> bool {
        let c = self.center_shift as i64;
        for k in -c - 1..=c + 1 {
            if !self.le(k - 2).contains_space(&self.le(k).map(n)) {
                return false;
            }
        }
        for k in 0..=c + 1 {
            let gk = self.graded_dim(k);
            if gk != self.graded_dim(-k) {
                return false;
            }
            // injectivity of N^k on Gr_k: preimage of MW_{≤-k-1} inside MW_{≤k} is MW_{≤k-1}
            let nk = n.pow(k as u32);
            let pre = self.le(k).preimage_within(&nk, &self.le(-k - 1));
            if pre != self.le(k - 1) {
                return false;
            }
        }
        true
    }
}

pub fn weight_filtration(n: &Endomorphism) -> Result<WeightFiltration> {
    let idx = nilpotency_index(n)?;
    let dim = n.dim();
    let mut levels = vec![Subspace::zero(dim); 2 * idx + 2];
    fill_levels(n.matrix(), Subspace::full(dim), Subspace::zero(dim), idx as i64, idx as i64, &mut levels);
    Ok(WeightFiltration { center_shift: idx, levels })
}

// On the subquotient upper/lower, `N^{m+1}` vanishes; peel off the outer
// layers `m`, `-m-1` and recurse.
fn fill_levels(n: &Matrix, upper: Subspace, lower: Subspace, m: i64, shift: i64, levels: &mut [Subspace]) {
    let slot = |k: i64| (k + shift + 1) as usize;
    levels[slot(m)] = upper.clone();
    levels[slot(-m - 1)] = lower.clone();
    if m == 0 {
        return;
    }
    let nm = n.pow(m as u32);
    let ker = upper.preimage_within(&nm, &lower);
    let im = upper.map(&nm).sum(&lower);
    fill_levels(n, ker, im, m - 1, shift, levels);
}

/// A flag given by an adapted frame: `F^{≥t}` is spanned by the frame
/// vectors whose doubled level is at least `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedFlag {
    pub ambient: usize,
    pub vectors: Vec<(i64, Vec<Scalar>)>,
}

impl AdaptedFlag {
    pub fn standard(twice_levels: &[i64]) -> Self {
        let n = twice_levels.len();
        let id = Matrix::identity(n);
        AdaptedFlag { ambient: n, vectors: twice_levels.iter().enumerate().map(|(j, &t)| (t, id.column(j))).collect() }
    }

    pub fn ge(&self, t: i64) -> Subspace {
        let vs: Vec<Vec<Scalar>> = self.vectors.iter().filter(|(l, _)| *l >= t).map(|(_, v)| v.clone()).collect();
        Subspace::span(self.ambient, &vs)
    }

    fn level_range(&self) -> Option<(i64, i64)> {
        let lo = self.vectors.iter().map(|(l, _)| *l).min()?;
        let hi = self.vectors.iter().map(|(l, _)| *l).max()?;
        Some((lo, hi))
    }
}

/// Pieces `F^{≥t} ∩ MW_{≤t}` keyed by doubled level `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub pieces: BTreeMap<i64, Vec<Vec<Scalar>>>,
}

impl GradedBasis {
    pub fn matrix(&self, ambient: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.pieces.values().rev().flatten().cloned().collect();
        Matrix::from_columns(ambient, &cols)
    }
}

/// Splits `V` into the pieces `F^{≥t} ∩ MW_{≤t}`; all flag levels must share
/// one parity.
pub fn graded_splitting(n: &Endomorphism, flag: &AdaptedFlag) -> Result<GradedBasis> {
    let w = weight_filtration(n)?;
    let dim = n.dim();
    let Some((lo, hi)) = flag.level_range() else {
        return Ok(GradedBasis { pieces: BTreeMap::new() });
    };
    if flag.vectors.iter().any(|(l, _)| (l - lo).rem_euclid(2) != 0) {
        return Err(Error::NotSplit("flag levels of mixed parity".into()));
    }
    let span_lo = lo.min(-(w.center_shift() as i64));
    let span_hi = hi.max(w.center_shift() as i64);
    let mut pieces = BTreeMap::new();
    let mut total = Subspace::zero(dim);
    let mut count = 0;
    let mut t = span_hi;
    while t >= span_lo - 1 {
        let piece = flag.ge(t).intersect(&w.le(t));
        if piece.dim() > 0 {
            count += piece.dim();
            total = total.sum(&piece);
            pieces.insert(t, piece.basis().to_vec());
        }
        t -= 2;
    }
    if count != dim || total.dim() != dim {
        return Err(Error::NotSplit(format!(
            "pieces have total dimension {count} and span dimension {} in a space of dimension {dim}",
            total.dim()
        )));
    }
    Ok(GradedBasis { pieces })
}
