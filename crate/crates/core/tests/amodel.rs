use std::collections::BTreeMap;

use vshs::amodel::*;
use vshs::picard_fuchs::{companion_vhs, parse_pf};
use vshs::vshs::{to_normal_form, yukawa_dn, BasisMode};
use vshs::{Error, Matrix, Scalar, Series, SeriesMatrix};

fn quintic_amodel(g: &Series) -> CohomologyInput {
    let order = g.order();
    let mut a = SeriesMatrix::zeros(4, 4, order);
    a.set_entry(1, 0, Series::one(order));
    a.set_entry(2, 1, g.clone());
    a.set_entry(3, 2, Series::one(order));
    CohomologyInput {
        n: 3,
        betti: vec![1, 0, 1, 0, 1, 0, 1],
        intersection: Matrix::from_int_rows(&[&[0, 0, 0, 5], &[0, 0, 5, 0], &[0, 5, 0, 0], &[5, 0, 0, 0]]),
        quantum_mult_omega: a,
    }
}

fn known_counts() -> InstantonTable {
    InstantonTable {
        entries: BTreeMap::from([
            (1, Scalar::from_int(2875)),
            (2, Scalar::from_int(609250)),
            (3, Scalar::from_int(317206375)),
        ]),
    }
}

#[test]
fn quintic_mirror_agrees_with_known_counts() {
    let order = 4;
    let g = g_from_instantons(&known_counts(), &Scalar::from_int(5), order).unwrap();
    let a_side = build_amodel_dn(&quintic_amodel(&g)).unwrap();
    assert!(a_side.check().all_passed(), "{}", a_side.check());

    let l = parse_pf(include_str!("../../../data/quintic.pf.json")).unwrap();
    let vhs = companion_vhs(&l, order).unwrap();
    let nu = a_side.top_pairing().unwrap();
    assert_eq!(nu, &Scalar::from_int(-5) * &Scalar::i());
    let b_side = to_normal_form(&vhs, &nu, BasisMode::Lefschetz).unwrap();
    assert_eq!(b_side.dn, a_side);
}

#[test]
fn yukawa_of_amodel_is_volume_times_g() {
    let g = g_from_instantons(&known_counts(), &Scalar::from_int(5), 5).unwrap();
    let d = build_amodel_dn(&quintic_amodel(&g)).unwrap();
    let y = yukawa_dn(&d).unwrap();
    assert_eq!(y, g.scale(&d.top_pairing().unwrap()));
}

#[test]
fn instanton_roundtrip() {
    let t = known_counts();
    let g = g_from_instantons(&t, &Scalar::from_int(5), 7).unwrap();
    let back = instantons_from_g(&g, &Scalar::from_int(5));
    for d in 1..7 {
        assert_eq!(back.get(d), t.get(d));
    }
    assert!(back.non_integral().is_empty());
}

#[test]
fn rejects_bad_cohomology() {
    let g = Series::one(3);
    let mut c = quintic_amodel(&g);
    c.intersection[(0, 3)] = Scalar::zero();
    c.intersection[(3, 0)] = Scalar::zero();
    assert!(build_amodel_dn(&c).is_err());

    let mut c = quintic_amodel(&g);
    c.quantum_mult_omega.set_entry(1, 0, Series::from_ints(&[1, 1], 3));
    assert!(matches!(build_amodel_dn(&c), Err(Error::UnitNotPreserved(_))));

    let mut c = quintic_amodel(&g);
    c.quantum_mult_omega.set_entry(2, 1, Series::zero(3));
    assert!(matches!(build_amodel_dn(&c), Err(Error::HardLefschetzFailure(_))));
}
