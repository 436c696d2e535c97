#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vshs::vshs::DnObject;
use vshs::{Matrix, Scalar, Series, SeriesMatrix, Subspace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with denominator 1 or 2.
pub fn small(rng: &mut ChaCha8Rng) -> Scalar {
    let num = rng.gen_range(-3..=3);
    let den = if rng.gen_bool(0.25) { 2 } else { 1 };
    Scalar::ratio(num, den)
}

pub fn nonzero(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = small(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Degrees `-n..n` in steps of 2, with the given dimension per degree.
pub fn degree_list(n: usize, dims: &[usize]) -> Vec<i64> {
    let mut out = Vec::new();
    for (i, &d) in dims.iter().enumerate() {
        let k = -(n as i64) + 2 * i as i64;
        out.extend(std::iter::repeat_n(k, d));
    }
    out
}

pub fn random_dims(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    match n {
        3 => {
            let d = rng.gen_range(1..=2);
            vec![1, d, d, 1]
        }
        4 => {
            let d1 = rng.gen_range(1..=2);
            let d0 = rng.gen_range(1..=2).max(d1);
            vec![1, d1, d0, d1, 1]
        }
        _ => panic!("only n = 3, 4"),
    }
}

/// Nondegenerate degree-zero pairing with `P = (-1)^n Pᵀ`.
pub fn random_pairing(rng: &mut ChaCha8Rng, n: usize, degrees: &[i64]) -> Matrix {
    let r = degrees.len();
    let sign = Scalar::sign_pow(n as i64);
    loop {
        let mut p = Matrix::zeros(r, r);
        for a in 0..r {
            for b in 0..r {
                if degrees[a] + degrees[b] != 0 {
                    continue;
                }
                if (degrees[a], a) < (degrees[b], b) {
                    let x = small(rng);
                    p[(b, a)] = &sign * &x;
                    p[(a, b)] = x;
                } else if a == b && n.is_multiple_of(2) {
                    p[(a, a)] = small(rng);
                }
            }
        }
        if !p.determinant().unwrap().is_zero() {
            return p;
        }
    }
}

/// A random normal form of rank given by `dims`, with `A = P⁻¹Y` where
/// `Y` has the skew pattern that makes every coefficient of `A` self-adjoint.
pub fn random_dn(rng: &mut ChaCha8Rng, n: usize, dims: &[usize], order: usize) -> DnObject {
    let degrees = degree_list(n, dims);
    let r = degrees.len();
    let ni = n as i64;
    let sign = Scalar::sign_pow(n as i64);
    loop {
        let p = random_pairing(rng, n, &degrees);
        let p_inv = p.inverse().unwrap();
        let mut coeffs = Vec::new();
        for m in 0..order {
            let mut y = Matrix::zeros(r, r);
            let density = if m == 0 { 1.0 } else { 0.6 };
            for a in 0..r {
                for b in 0..r {
                    if degrees[a] + degrees[b] != -2 || (degrees[a], a) > (degrees[b], b) {
                        continue;
                    }
                    if m > 0 && (degrees[a] == -ni || degrees[b] == -ni) {
                        continue;
                    }
                    if !rng.gen_bool(density) {
                        continue;
                    }
                    let x = small(rng);
                    if a == b {
                        // only reachable for odd n, where Y is symmetric
                        if n % 2 == 1 {
                            y[(a, a)] = x;
                        }
                    } else {
                        y[(b, a)] = &(-&sign) * &x;
                        y[(a, b)] = x;
                    }
                }
            }
            coeffs.push(&p_inv * &y);
        }
        let a = SeriesMatrix::from_coefficients(&coeffs, order);
        let d = DnObject { n, degrees: degrees.clone(), pairing0: p, a };
        if d.check().all_passed() {
            return d;
        }
    }
}

/// `I + q·X(q)` with `X` preserving the Hodge flag (image of `e_b` only
/// involves `e_a` of degree at most `deg(b)`).
pub fn random_flag_gauge(rng: &mut ChaCha8Rng, degrees: &[i64], order: usize) -> SeriesMatrix {
    let r = degrees.len();
    let mut coeffs = vec![Matrix::identity(r)];
    for _ in 1..order {
        let mut x = Matrix::zeros(r, r);
        for a in 0..r {
            for b in 0..r {
                if degrees[a] <= degrees[b] && rng.gen_bool(0.3) {
                    x[(a, b)] = small(rng);
                }
            }
        }
        coeffs.push(x);
    }
    SeriesMatrix::from_coefficients(&coeffs, order)
}

/// Random `θ⁴ + Σ_{m≥1} q^m P_m(θ)` with `deg P_m ≤ 4`, as JSON.
pub fn random_mum_json(rng: &mut ChaCha8Rng, terms: usize) -> String {
    let mut coeffs: Vec<Vec<String>> = Vec::new();
    for j in 0..=4 {
        let mut row = vec![if j == 4 { "1".to_string() } else { "0".to_string() }];
        for _ in 1..=terms {
            row.push(rng.gen_range(-6..=6).to_string());
        }
        coeffs.push(row);
    }
    // keep the leading q-coefficient nonzero so the operator is not trivial
    coeffs[0][1] = format!("{}", rng.gen_range(1..=9));
    serde_json::json!({ "order": 4, "coeffs": coeffs }).to_string()
}

pub fn series_ints(xs: &[i64], order: usize) -> Series {
    Series::from_ints(xs, order)
}

/// Random nilpotent `A(0)` (strictly lower triangular, then conjugated by
/// a random unipotent upper triangular matrix), random higher coefficients,
/// and a random `m0` from the solution space of `A(0)ᵀX + XA(0) = 0`.
pub fn random_compatible_pairing_input(rng: &mut ChaCha8Rng, dim: usize, order: usize) -> (SeriesMatrix, Matrix) {
    let mut l = Matrix::zeros(dim, dim);
    let mut u = Matrix::identity(dim);
    for a in 0..dim {
        for b in 0..a {
            l[(a, b)] = small(rng);
            u[(b, a)] = small(rng);
        }
    }
    let a0 = &(&u * &l) * &u.inverse().unwrap();
    let mut coeffs = vec![a0.clone()];
    for _ in 1..order {
        let mut m = Matrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                if rng.gen_bool(0.5) {
                    m[(a, b)] = small(rng);
                }
            }
        }
        coeffs.push(m);
    }
    // linear system for X, unknowns indexed a*dim + b
    let mut rows = Vec::new();
    for x in 0..dim {
        for y in 0..dim {
            let mut row = vec![Scalar::zero(); dim * dim];
            for c in 0..dim {
                row[c * dim + y] += &a0[(c, x)];
                row[x * dim + c] += &a0[(c, y)];
            }
            rows.push(row);
        }
    }
    let kernel = Matrix::from_rows(rows).unwrap().kernel();
    let mut m0 = Matrix::zeros(dim, dim);
    for v in &kernel {
        let c = small(rng);
        for x in 0..dim {
            for y in 0..dim {
                m0[(x, y)] += &(&c * &v[x * dim + y]);
            }
        }
    }
    (SeriesMatrix::from_coefficients(&coeffs, order), m0)
}

/// `θM - AᵀM - MA`, computed coefficientwise.
pub fn pairing_residual(a: &SeriesMatrix, m: &SeriesMatrix) -> SeriesMatrix {
    let order = a.order().min(m.order());
    let ac = a.coefficients();
    let mc = m.coefficients();
    let mut out = Vec::new();
    for k in 0..order {
        let mut acc = mc[k].scale(&Scalar::from_int(k as i64));
        for j in 0..=k {
            acc = &acc - &(&ac[j].transpose() * &mc[k - j]);
            acc = &acc - &(&mc[k - j] * &ac[j]);
        }
        out.push(acc);
    }
    SeriesMatrix::from_coefficients(&out, order)
}

/// All partitions of `n`, largest part first.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Random unimodular-ish invertible matrix (product of elementary moves).
pub fn random_invertible(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let mut g = Matrix::identity(dim);
    if dim < 2 {
        return g;
    }
    for _ in 0..3 * dim {
        let a = rng.gen_range(0..dim);
        let b = rng.gen_range(0..dim);
        if a == b {
            continue;
        }
        let c = small(rng);
        let mut e = Matrix::identity(dim);
        e[(a, b)] = c;
        g = &g * &e;
    }
    g
}

/// Every filtration `W_{-m} ⊆ … ⊆ W_{m-1}` (with `W_{-m-1} = 0`,
/// `W_m = V`, `N^{m+1} = 0`) built from the lattice generated by kernels
/// and images of powers of `N` that satisfies the weight axioms. Entry `i`
/// of a solution is `W_{i-m-1}`.
pub fn brute_force_weight_filtrations(n: &Matrix) -> Vec<Vec<Subspace>> {
    let dim = n.rows();
    let mut m = 0;
    while !n.pow(m as u32 + 1).is_zero() {
        m += 1;
    }
    let mut lattice: Vec<Subspace> = vec![Subspace::zero(dim), Subspace::full(dim)];
    for e in 1..=m + 1 {
        let p = n.pow(e as u32);
        for s in [Subspace::kernel(&p), Subspace::image(&p)] {
            if !lattice.contains(&s) {
                lattice.push(s);
            }
        }
    }
    loop {
        let mut added = false;
        let snapshot = lattice.clone();
        for x in &snapshot {
            for y in &snapshot {
                for z in [x.sum(y), x.intersect(y)] {
                    if !lattice.contains(&z) {
                        lattice.push(z);
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    let m = m as i64;
    let mut out = Vec::new();
    let mut chain = vec![Subspace::zero(dim)];
    extend_chain(n, m, &lattice, &mut chain, &mut out);
    out
}

fn extend_chain(n: &Matrix, m: i64, lattice: &[Subspace], chain: &mut Vec<Subspace>, out: &mut Vec<Vec<Subspace>>) {
    let dim = n.rows();
    // chain[i] = W_{i-m-1}
    let w = |chain: &Vec<Subspace>, k: i64| -> Subspace {
        if k < -m - 1 {
            Subspace::zero(dim)
        } else {
            chain[(k + m + 1) as usize].clone()
        }
    };
    let k = chain.len() as i64 - m - 1;
    if k == m {
        let mut full = chain.clone();
        full.push(Subspace::full(dim));
        if weight_axioms_hold(n, m, &full) {
            out.push(full);
        }
        return;
    }
    for cand in lattice {
        if !cand.contains_space(chain.last().unwrap()) {
            continue;
        }
        // N W_k ⊆ W_{k-2}
        if !w(chain, k - 2).contains_space(&cand.map(n)) {
            continue;
        }
        chain.push(cand.clone());
        extend_chain(n, m, lattice, chain, out);
        chain.pop();
    }
}

fn weight_axioms_hold(n: &Matrix, m: i64, chain: &[Subspace]) -> bool {
    let dim = n.rows();
    let w = |k: i64| -> Subspace {
        if k < -m - 1 {
            Subspace::zero(dim)
        } else if k >= m {
            Subspace::full(dim)
        } else {
            chain[(k + m + 1) as usize].clone()
        }
    };
    for k in -m..=m {
        if !w(k - 2).contains_space(&w(k).map(n)) {
            return false;
        }
    }
    for k in 0..=m {
        let gr_k = w(k).dim() - w(k - 1).dim();
        let gr_neg = w(-k).dim() - w(-k - 1).dim();
        let image_rank = w(k).map(&n.pow(k as u32)).sum(&w(-k - 1)).dim() - w(-k - 1).dim();
        if gr_k != gr_neg || image_rank != gr_k {
            return false;
        }
    }
    true
}

/// `Σ (5k)!/(k!)^5 q^k` and `Σ (5k)!/(k!)^5 · 5(H_{5k} - H_k) q^k`,
/// the holomorphic and logarithmic-part quintic periods in closed form.
pub fn quintic_periods(order: usize) -> (Series, Series) {
    let mut y0 = Vec::new();
    let mut y1 = Vec::new();
    let mut c = Scalar::one();
    let harmonic = |m: usize| {
        let mut h = Scalar::zero();
        for j in 1..=m {
            h += &Scalar::ratio(1, j as i64);
        }
        h
    };
    for k in 0..order {
        if k > 0 {
            // (5k)!/(k!)^5 from the previous term
            let mut num = Scalar::one();
            for j in 5 * k - 4..=5 * k {
                num = &num * &Scalar::from_int(j as i64);
            }
            let den = Scalar::from_int((k as i64).pow(5));
            c = &(&c * &num) * &den.inv().unwrap();
        }
        y0.push(c.clone());
        let h = &harmonic(5 * k) - &harmonic(k);
        y1.push(&(&c * &Scalar::from_int(5)) * &h);
    }
    (Series::from_coeffs(y0, order), Series::from_coeffs(y1, order))
}
