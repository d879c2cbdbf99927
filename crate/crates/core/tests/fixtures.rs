//! The model files under `fixtures/` are exactly the built-in fixtures and
//! load through the same parser users see.

use std::path::PathBuf;

use papal_core::{fixture, ModelDescription};

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn files_match_generators() {
    for (file, name) in [
        ("compose9.epml", "compose9"),
        ("expr_M.epml", "expr_M"),
        ("expr_Mprime.epml", "expr_Mprime"),
        ("two_leg_chain_4_6.epml", "two_leg_chain(4,6)"),
        ("left_edge_chain_1_6.epml", "left_edge_chain(1,6)"),
        ("right_edge_chain_2_6.epml", "right_edge_chain(2,6)"),
    ] {
        let text = std::fs::read_to_string(fixtures_dir().join(file)).unwrap();
        let desc = ModelDescription::from_text(&text).unwrap();
        assert!(desc.validate().is_empty(), "{file}");
        let loaded = desc.build_pointed().unwrap();
        let built = fixture(name).unwrap();
        assert_eq!(loaded, built, "{file}");
        assert_eq!(text, built.to_text(), "{file}");
    }
}

#[test]
fn compose9_transcription() {
    let pm = fixture("compose9").unwrap();
    let m = &pm.model;
    assert_eq!(m.len(), 9);
    assert_eq!(m.partition(0).len(), 3);
    assert_eq!(m.partition(1).len(), 6);
    assert_eq!(m.names(m.valuation(0)).len(), 8);
    assert_eq!(m.names(m.valuation(1)), ["t", "v", "s'", "t'", "v'"]);
    assert_eq!(pm.point_name(), "s");
}

#[test]
fn expressivity_pair_transcription() {
    let m = fixture("expr_M").unwrap();
    assert_eq!((m.model.len(), m.point_name()), (2, "s"));
    let m2 = fixture("expr_Mprime").unwrap();
    assert_eq!((m2.model.len(), m2.point_name()), (4, "s'"));
    assert_eq!(m2.model.partition(0).len(), 2);
    assert_eq!(m2.model.partition(1).len(), 2);
}
