use semicont::corpus::{verify, Corpus, Record, RecordFilter, Tier, VerifyError};
use semicont::Condition::*;

fn corpus() -> Corpus {
    Corpus::load().unwrap()
}

#[test]
fn machine_checked_records_verify() {
    let c = corpus();
    let checked = c.list(&RecordFilter { tier: Some(Tier::MachineChecked), ..Default::default() });
    assert!(checked.len() >= 9);
    for r in checked {
        let report = verify(r).unwrap();
        assert!(report.passed, "{}: {:?}", r.id(), report.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>());
        assert!(!report.checks.is_empty());
    }
}

#[test]
fn cited_records_are_not_executable() {
    let c = corpus();
    let r = c.get("CE-SLSC-TWLC").unwrap();
    assert_eq!(r.tier, Tier::PaperCited);
    assert!(r.model.is_none());
    assert!(matches!(verify(r), Err(VerifyError::CitedOnly(_))));
}

#[test]
fn filters() {
    let c = corpus();
    let to_ubslsca = c.list(&RecordFilter { target: Some(UBSLSCA), ..Default::default() });
    assert!(to_ubslsca.iter().any(|r| r.id() == "CE-BLSCA-UBSLSCA"));
    let appendix = c.list(&RecordFilter { provenance: Some("Appendix".into()), ..Default::default() });
    assert!(appendix.len() >= 20);
    let from_wlc = c.list(&RecordFilter { source: Some(WLC), tier: Some(Tier::MachineChecked), ..Default::default() });
    let mut ids: Vec<&str> = from_wlc.iter().map(|r| r.id()).collect();
    ids.sort();
    assert_eq!(ids, vec!["CE-WLC-ISLSC", "CE-WLC-STLC"]);
    assert_eq!(c.list(&RecordFilter::default()).len(), c.records().len());
}

#[test]
fn lookups_ignore_case() {
    assert!(corpus().get("ce-wlc-stlc").is_some());
    assert!(corpus().get("CE-NOPE").is_none());
}

#[test]
fn duplicate_ids_are_rejected() {
    let c = corpus();
    let dup = c.get("CE-WLC-STLC").unwrap().clone();
    assert!(c.with_record(dup).is_err());
}

const WRONG_EXPECTATION: &str = r#"
kind = "finite"
points = ["a", "b"]
opens = [[], ["a"], ["a", "b"]]
[values]
a = "0"
b = "1"

[record]
id = "CE-TEST"
source = "QRGI"
target = "RGI"
citation = "two-point space"

[[expect]]
condition = "QRGI"
at = "b"
holds = true

[[expect]]
condition = "RGI"
at = "b"
holds = false

[[expect]]
condition = "LSC"
at = "b"
holds = true
"#;

#[test]
fn wrong_expectations_fail_verification() {
    let r = Record::from_toml(WRONG_EXPECTATION, "test.toml").unwrap();
    let report = verify(&r).unwrap();
    assert!(!report.passed);
    assert_eq!(report.checks.iter().filter(|c| !c.ok).count(), 1);

    let fixed = Record::from_toml(
        &WRONG_EXPECTATION.replace("\"LSC\"\nat = \"b\"\nholds = true", "\"LSC\"\nat = \"b\"\nholds = false"),
        "test.toml",
    )
    .unwrap();
    assert!(verify(&fixed).unwrap().passed);
}

#[test]
fn malformed_records_report_their_location() {
    let err = Record::from_toml(&WRONG_EXPECTATION.replace("source = \"QRGI\"", "source = \"XYZ\""), "t.toml")
        .unwrap_err()
        .to_string();
    assert!(err.contains("t.toml"), "{err}");
}
