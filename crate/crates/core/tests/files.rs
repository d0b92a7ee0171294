use std::fs;
use std::path::{Path, PathBuf};

use nacent::classify::{classify, Case, Category};
use nacent::corpus::{self, load_named_group, GroupSpec};
use nacent::Error;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[test]
fn permutation_fixture_is_s4() {
    let (name, g) = load_named_group(&fixture("s4_perm.json"), 100).unwrap();
    assert_eq!(name, "S4");
    assert_eq!(g.order(), 24);
    assert_eq!(classify(&g).unwrap().category, Category::ManyNacent);
}

#[test]
fn construction_fixture_is_the_flagship() {
    let (_, g) = load_named_group(&fixture("flagship.json"), 5000).unwrap();
    assert_eq!(g.order(), 1029);
    assert_eq!(classify(&g).unwrap().case, Some(Case::C));
}

#[test]
fn construction_fixture_respects_the_order_limit() {
    let err = load_named_group(&fixture("flagship.json"), 1000).unwrap_err();
    assert!(matches!(err, Error::OrderLimitExceeded { limit: 1000 }));
}

#[test]
fn file_ids_follow_content() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    fs::copy(fixture("z2.json"), &path).unwrap();
    let spec = GroupSpec::resolve(path.to_str().unwrap()).unwrap();
    let (first, _) = corpus::build(&spec, 100).unwrap();
    let (again, _) = corpus::build(&spec, 100).unwrap();
    assert_eq!(first, again);
    assert!(first.starts_with(&format!("{}#", path.display())));

    fs::copy(fixture("z6.json"), &path).unwrap();
    let (changed, _) = corpus::build(&spec, 100).unwrap();
    assert_ne!(first, changed);
}

#[test]
fn truncated_file_reports_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = fs::read_to_string(fixture("s3.json")).unwrap();
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    match load_named_group(&path, 100).unwrap_err() {
        Error::Parse { line, .. } => assert!(line > 1),
        other => panic!("unexpected {other:?}"),
    }
}
