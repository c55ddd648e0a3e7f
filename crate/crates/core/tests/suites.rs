use decagon::report::Status;
use decagon::suites::{run, SuiteConfig, SUITES};

fn small() -> SuiteConfig {
    SuiteConfig {
        samples: 100,
        seed: 5,
        cap: 100_000,
        steps: 2000,
        nesting: 4,
        levels: 4,
        limit: 300,
    }
}

#[test]
fn every_suite_passes_at_small_scale() {
    let cfg = small();
    for name in SUITES {
        let rep = run(name, &cfg).unwrap();
        for c in &rep.checks {
            assert_ne!(c.status, Status::Fail, "{name}: {} {}", c.id, c.witness);
        }
        assert!(rep.passed > 0 && rep.ok(), "{name}");
    }
}

#[test]
fn unknown_suite() {
    assert!(run("nope", &small()).is_none());
}
