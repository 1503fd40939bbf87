//! The bundled fixture files parse and re-serialize to identical bytes.

use std::fs;

use nonloc_core::certifier::verify_certificate;
use nonloc_core::fixtures::{self, fixture_dir};
use nonloc_core::io;

#[test]
fn every_fixture_round_trips() {
    let mut seen = 0;
    for entry in fs::read_dir(fixture_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let text = fs::read_to_string(&path).unwrap();
        let again = if name.contains("_cert_") {
            io::certificate_json(&io::parse_certificate(&text).unwrap())
        } else if name == "n26.json" {
            io::ghz_like_set_json(&io::parse_ghz_like_set(&text).unwrap())
        } else {
            io::state_set_json(&io::parse_state_set(&text).unwrap())
        };
        assert_eq!(again, text, "{name}");
        seen += 1;
    }
    assert_eq!(seen, fixtures::all_files().len());
}

#[test]
fn certificate_files_verify_against_their_sets() {
    for (set_name, cert_prefix) in [("s5", "s5"), ("s8", "s8"), ("s10", "s10")] {
        let set = io::read_state_set(&fixture_dir().join(format!("{set_name}.json"))).unwrap();
        for tag in ["a", "b", "c"] {
            let cert = io::read_certificate(&fixture_dir().join(format!("{cert_prefix}_cert_{tag}.json"))).unwrap();
            let check = verify_certificate(&set, &cert).unwrap();
            assert!(check.feasible && check.value_matches_claim, "{cert_prefix} {tag}");
        }
    }
}
