use simplexlab::survey::{self, check_record, enumerate_empty, read_records, survey_records, SurveyConfig};

#[test]
fn no_width_three_up_to_twenty() {
    let dir = tempfile::tempdir().unwrap();
    let s = survey::survey(&SurveyConfig { budget: 20, ..SurveyConfig::new(20, dir.path().join("s.csv")) }).unwrap();
    assert!(!s.partial);
    assert!(s.exceptions.is_empty());
    assert_eq!(s.per_det.len(), 20);
    assert_eq!(s.det(1).unwrap().classes, 1);
    for r in read_records(&dir.path().join("s.csv")).unwrap() {
        assert!(check_record(&r), "{r}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for jobs in [1, 3] {
        let out = dir.path().join(format!("s{jobs}.csv"));
        survey::survey(&SurveyConfig { budget: 30, jobs: Some(jobs), ..SurveyConfig::new(30, &out) }).unwrap();
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn over_budget_is_marked_partial() {
    let dir = tempfile::tempdir().unwrap();
    let s = survey::survey(&SurveyConfig { budget: 5, ..SurveyConfig::new(9, dir.path().join("s.csv")) }).unwrap();
    assert!(s.partial);
    assert_eq!(s.completed_through, 5);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.summary.json")).unwrap()).unwrap();
    assert_eq!(json["partial"], true);
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SurveyConfig { budget: 3, ..SurveyConfig::new(3, dir.path().join("missing/dir/s.csv")) };
    assert!(survey::survey(&cfg).is_err());
}

#[test]
fn family_tags_reproduce_classes() {
    let mut tagged = 0;
    for n in [7i64, 11, 13, 29, 31] {
        for r in survey_records(n) {
            if r.family.is_some() {
                tagged += 1;
                assert!(check_record(&r), "{r}");
            }
        }
        assert!(!enumerate_empty(n).is_empty());
    }
    assert!(tagged > 0);
}
