use pie_workbench::dsl::parse;
use pie_workbench::harness::search29;
use pie_workbench::harness::{recheck, run_suite, Checked, Suite, SuiteReport, Verdict};

fn failing_names(checks: &[pie_workbench::VerdictReport]) -> Vec<String> {
    checks.iter().filter(|c| !c.passed()).map(|c| c.check.clone()).collect()
}

fn certificates_reproduce(report: &SuiteReport) {
    for r in report.failures() {
        let ws = parse(r.certificate.as_deref().expect("failures carry a certificate")).unwrap();
        match recheck(report.suite, &ws).unwrap() {
            Checked::Done(checks) => assert_eq!(failing_names(&checks), failing_names(&r.checks), "instance {}", r.index),
            Checked::Skipped(why) => panic!("certificate {} skipped: {why}", r.index),
        }
    }
}

#[test]
fn same_seed_same_records() {
    for suite in [Suite::Th25, Suite::Prop27, Suite::Lemma35] {
        assert_eq!(run_suite(suite, 30, 11).records, run_suite(suite, 30, 11).records, "{suite}");
    }
}

#[test]
fn suite_names_parse_back() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("th99".parse::<Suite>().is_err());
}

#[test]
fn failure_certificates_recheck_in_process() {
    for suite in [Suite::Prop27, Suite::Lemma35] {
        certificates_reproduce(&run_suite(suite, 60, 4));
    }
    certificates_reproduce(&search29::run(200, 4, None));
}

#[test]
fn pullback_control_is_the_last_record() {
    let r = run_suite(Suite::Pullback, 10, 2);
    assert_eq!(r.attempted, 11);
    let last = r.records.last().unwrap();
    assert_eq!(last.verdict, Verdict::Pass);
    assert!(last.checks.iter().any(|c| c.check == "control-non-equivalence"));
}

#[test]
fn search_candidates_are_never_subconcrete() {
    let th32 = run_suite(Suite::Th32, 60, 9);
    assert_eq!(th32.failed, 0);
    let s = search29::run(300, 9, None);
    for r in &s.records {
        let consistency = r.checks.iter().find(|c| c.check == "consistency");
        if r.verdict == Verdict::Fail {
            assert!(consistency.is_none(), "instance {} fails along subconcrete functors", r.index);
            assert!(r.checks[0].failed());
        } else if let Some(c) = consistency {
            assert!(c.passed());
        }
    }
}

#[test]
fn quota_counts_skips() {
    let r = SuiteReport::from_records(Suite::Th25, 0, vec![], std::time::Duration::ZERO, true, vec![]);
    assert!(r.success);
    assert_eq!(r.skip_rate(), 0.0);
}
