use std::collections::BTreeSet;

use cluster_ghz::forms::{
    brute_force_form_oracle, canonical_key, enumerate_forms, generate_forms, verify_contradiction,
    GhzForm,
};
use cluster_ghz::state::build_cluster_state;
use cluster_ghz::{make_pauli, Error, PauliWord};

/// |enumerate_forms(6)|, frozen from the exhaustive subset scan.
const FORMS_6: usize = 256;

fn keys(forms: &[GhzForm]) -> BTreeSet<String> {
    forms.iter().map(canonical_key).collect()
}

fn word_set(list: [&str; 4]) -> BTreeSet<PauliWord> {
    list.iter().map(|s| make_pauli(s).unwrap()).collect()
}

#[test]
fn three_site_form_is_unique() {
    let forms = enumerate_forms(3).unwrap();
    assert_eq!(forms.len(), 1);
    assert_eq!(
        forms[0].words().into_iter().collect::<BTreeSet<_>>(),
        word_set(["ZXZ", "YYZ", "YXY", "ZYY"])
    );
}

#[test]
fn four_site_forms_are_the_eight_listed() {
    let listed: BTreeSet<BTreeSet<PauliWord>> = [
        ["ZXIX", "YYIX", "YXXY", "ZYXY"],
        ["ZXIX", "YYIX", "YXYZ", "ZYYZ"],
        ["ZXZI", "YYZI", "YXXY", "ZYXY"],
        ["ZXZI", "YYZI", "YXYZ", "ZYYZ"],
        ["XIXZ", "ZYYZ", "ZYXY", "XIYY"],
        ["XIXZ", "YXYZ", "YXXY", "XIYY"],
        ["IZXZ", "ZYYZ", "ZYXY", "IZYY"],
        ["IZXZ", "YXYZ", "YXXY", "IZYY"],
    ]
    .into_iter()
    .map(word_set)
    .collect();
    let got: BTreeSet<BTreeSet<PauliWord>> = enumerate_forms(4)
        .unwrap()
        .iter()
        .map(|f| f.words().into_iter().collect())
        .collect();
    assert_eq!(got, listed);
}

#[test]
fn five_site_count() {
    assert_eq!(enumerate_forms(5).unwrap().len(), 48);
}

#[test]
fn oracle_agrees_with_enumeration() {
    for n in 3..=6 {
        let oracle = brute_force_form_oracle(n).unwrap();
        assert_eq!(
            keys(&oracle.structured),
            keys(&enumerate_forms(n).unwrap()),
            "n = {n}"
        );
        assert!(oracle.unfiltered_count >= oracle.structured.len());
    }
}

#[test]
fn six_site_count_is_frozen() {
    assert_eq!(
        brute_force_form_oracle(6).unwrap().structured.len(),
        FORMS_6
    );
    assert_eq!(enumerate_forms(6).unwrap().len(), FORMS_6);
}

#[test]
fn every_generated_form_verifies() {
    for n in 3..=7 {
        let psi = build_cluster_state(n).unwrap();
        for f in generate_forms(n).unwrap() {
            assert!(
                verify_contradiction(&f, &psi).unwrap(),
                "{}",
                canonical_key(&f)
            );
        }
    }
}

#[test]
fn tampered_forms_fail() {
    let psi = build_cluster_state(4).unwrap();
    for f in enumerate_forms(4).unwrap() {
        for k in 0..4 {
            let mut g = f.clone();
            g.rows[k].eigenvalue = -g.rows[k].eigenvalue;
            assert!(!verify_contradiction(&g, &psi).unwrap());
        }
    }
}

#[test]
fn limits_are_enforced() {
    assert!(matches!(
        brute_force_form_oracle(8),
        Err(Error::Capacity { .. })
    ));
    assert!(matches!(enumerate_forms(2), Err(Error::Domain(_))));
    assert!(matches!(enumerate_forms(15), Err(Error::Capacity { .. })));
}
