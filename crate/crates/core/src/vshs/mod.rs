//! Variations of semi-infinite Hodge structures over a formal punctured disc.
//!
//! Conventions used throughout:
//! * matrices act on columns: column `b` holds the image of basis vector `b`;
//! * a geometric connection is `∇ = θ + B(q)`;
//! * Hodge levels are stored doubled (`2p`), and a basis vector of degree `k`
//!   sits at doubled level `-k`;
//! * a normal form `(V, ⟨·,·⟩, A)` has `∇ = θ - u⁻¹A(q)`, which descends to
//!   `B = -A`; this sign is the only conversion between the two pictures.

mod dn;
mod gauge;
mod geometric;
mod normal_form;
mod pairing;
mod rees;

pub use dn::DnObject;
pub use gauge::{
    canonical_coordinate, formal_flat_gauge, hodge_tate_split, to_canonical_connection, CanonicalCoordinate,
    HodgeTateSplit,
};
pub use geometric::GeometricVHS;
pub use normal_form::{
    from_normal_form, rescale_coordinate, to_normal_form, yukawa_dn, yukawa_geometric, BasisMode, NormalFormReport,
};
pub use pairing::{extend_pairing, pairing_grading_check};
pub use rees::{geometric_to_rees, rees_to_geometric, verify_prevhs, ReesModule};

use crate::matrix::Matrix;

/// Solves `(k - L)X = rhs` for nilpotent `L` by the finite sum
/// `(1/k) Σ_j (L/k)^j rhs`. Returns `None` if the sum does not terminate
/// within `cap` terms.
pub(crate) fn neumann_solve(k: usize, op: impl Fn(&Matrix) -> Matrix, rhs: &Matrix, cap: usize) -> Option<Matrix> {
    let inv_k = crate::Scalar::ratio(1, k as i64);
    let mut term = rhs.scale(&inv_k);
    let mut acc = term.clone();
    for _ in 0..cap {
        if term.is_zero() {
            return Some(acc);
        }
        term = op(&term).scale(&inv_k);
        acc = &acc + &term;
    }
    term.is_zero().then_some(acc)
}

/// Indices of the basis vectors, grouped by doubled level parity.
pub(crate) fn parity_blocks(levels: &[i64]) -> Vec<Vec<usize>> {
    let mut blocks = Vec::new();
    for parity in [0, 1] {
        let idx: Vec<usize> = (0..levels.len()).filter(|&i| levels[i].rem_euclid(2) == parity).collect();
        if !idx.is_empty() {
            blocks.push(idx);
        }
    }
    blocks
}
