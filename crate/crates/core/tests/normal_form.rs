mod common;

use common::*;
use vshs::vshs::*;
use vshs::Scalar;

fn roundtrip(seed: u64, n: usize, gauge: bool) {
    let mut r = rng(seed);
    let dims = random_dims(&mut r, n);
    let d = random_dn(&mut r, n, &dims, 8);
    let rees = from_normal_form(&d).unwrap();
    assert!(verify_prevhs(&rees).all_passed(), "{}", verify_prevhs(&rees));
    let mut g = rees_to_geometric(&rees).unwrap();
    assert!(g.check().all_passed(), "{}", g.check());
    if gauge {
        let p = random_flag_gauge(&mut r, &d.degrees, 8);
        g = g.gauge_transform(&p).unwrap();
    }
    let top = d.top_pairing().unwrap();
    let rep = to_normal_form(&g, &top, BasisMode::Frame).unwrap();
    assert!(rep.lambda == Scalar::one() || rep.lambda == -Scalar::one());
    assert_eq!(rep.dn, d, "seed {seed}");
}

#[test]
fn roundtrip_d3_plain() {
    for seed in 0..5 {
        roundtrip(seed, 3, false);
    }
}

#[test]
fn roundtrip_d4_plain() {
    for seed in 0..5 {
        roundtrip(seed, 4, false);
    }
}

#[test]
fn roundtrip_with_gauge() {
    for seed in 0..5 {
        roundtrip(100 + seed, 3, true);
        roundtrip(200 + seed, 4, true);
    }
}

#[test]
fn rescaled_coordinate() {
    let mut r = rng(7);
    for _ in 0..4 {
        let dims = random_dims(&mut r, 3);
        let d = random_dn(&mut r, 3, &dims, 8);
        let c = nonzero(&mut r);
        let g = rees_to_geometric(&from_normal_form(&d).unwrap()).unwrap();
        let pulled = g.scale_variable(&c.inv().unwrap());
        let rep = to_normal_form(&pulled, &d.top_pairing().unwrap(), BasisMode::Frame).unwrap();
        assert_eq!(rep.dn, rescale_coordinate(&d, &c).unwrap());
    }
}

#[test]
fn yukawa_agrees_between_pictures() {
    let mut r = rng(11);
    let d = random_dn(&mut r, 3, &[1, 1, 1, 1], 8);
    let g = rees_to_geometric(&from_normal_form(&d).unwrap()).unwrap();
    let rep = to_normal_form(&g, &d.top_pairing().unwrap(), BasisMode::Frame).unwrap();
    assert_eq!(yukawa_geometric(&g, &rep).unwrap(), yukawa_dn(&d).unwrap());
}

#[test]
fn non_skew_higher_coefficient_is_not_polarized() {
    let mut r = rng(13);
    let mut d = random_dn(&mut r, 3, &[1, 1, 1, 1], 4);
    // V_1 -> V_3 is no longer the adjoint of V_{-3} -> V_{-1}; A(0) is untouched
    let mut e = d.a.entry(3, 2).clone();
    e.set_coeff(1, e.coeff(1) + &Scalar::one());
    d.a.set_entry(3, 2, e);
    assert!(d.check().all_passed());
    assert!(matches!(from_normal_form(&d), Err(vshs::Error::NotPolarized(_))));
}
