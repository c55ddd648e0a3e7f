//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines reach the terminal; exits nonzero on any FAIL.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use decagon::billiard::MapChoice;
use decagon::cyclotomic::Sign;
use decagon::partition::{periodic_fraction_x, Partitioner};
use decagon::periods::*;
use decagon::returns::{verify_delta_conjugacy, verify_h_conjugacy};
use decagon::selfsim::{aperiodic_point, verify_gamma_return, verify_gamma_structure, Tower};
use decagon::{CycNum, Halt, Location, Rational, Table};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// sample sizes and thresholds
const CONJUGACY_SAMPLES: usize = 1000;
const H_WINDOW: usize = 50;
const X_WINDOW: usize = 30;
const PERIOD_LIMIT: u64 = 200;
const GRID_SAMPLES: usize = 10_000;
const ORBIT_CAP: usize = 1_000_000;
const MIN_DISTINCT: usize = 7;
const DECAY_LEVELS: usize = 6;
const NESTING: usize = 8;
const CERT_STEPS: usize = 10_000;
const FRACTION_SEEDS: [u64; 3] = [1, 2, 3];
const MIN_PERIODIC: f64 = 0.99;
const FIELD_CASES: u32 = 100_000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn run(n: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = took <= budget;
    let ok = out.ok && in_time;
    let budget_note = if in_time { String::new() } else { format!(", over budget {budget:?}") };
    println!(
        "{} {n:>2} {name}: {} [{:.1?}{budget_note}]",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        took
    );
    ok
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn fixed_points(t: &Table) -> Outcome {
    let fixed: Vec<bool> = (1..=4)
        .map(|i| {
            let o = t.fixed_point_o(i);
            matches!(t.step_t_prime(&o), Ok((q, _)) if q == o)
        })
        .collect();
    outcome(fixed.iter().all(|&b| b), format!("T'(Oi) = Oi: {fixed:?}"))
}

fn invariant_polygons(t: &Table) -> Outcome {
    let mut ok = true;
    let mut seen = Vec::new();
    for (i, (n, per)) in [(5, 10), (10, 5), (5, 10), (10, 5)].into_iter().enumerate() {
        let o = t.fixed_point_o(i + 1);
        let comp = t.component_of(&o, MapChoice::TPrime, 100);
        let vs = comp.as_ref().ok().and_then(|c| c.vertices().map(<[_]>::len));
        let regular = comp.as_ref().is_ok_and(|c| c.is_regular());
        let halt = t.period(&o, MapChoice::T, 1000);
        ok &= vs == Some(n) && regular && halt == Halt::Period { step: per };
        seen.push(format!("O{}: {vs:?} vertices, {halt:?}", i + 1));
    }
    outcome(ok, seen.join("; "))
}

fn conjugacies(t: &Table, tw: &Tower) -> Outcome {
    let h = verify_h_conjugacy(t, CONJUGACY_SAMPLES, H_WINDOW, 101);
    let g = verify_gamma_return(tw.x(), &tw.gamma, CONJUGACY_SAMPLES, X_WINDOW, 102);
    let d: Vec<_> = (1..=2)
        .map(|j| verify_delta_conjugacy(&tw.ax, &tw.z, j, CONJUGACY_SAMPLES, X_WINDOW, 102 + j as u64))
        .collect();
    let reps = [&h, &g, &d[0], &d[1]];
    let ok = reps
        .iter()
        .all(|r| r.ok() && r.checked() >= CONJUGACY_SAMPLES);
    let detail = ["H/psi", "Gamma/sigma", "Delta1/phi1", "Delta2/phi2"]
        .iter()
        .zip(reps)
        .map(|(n, r)| format!("{n} {}/{} checked, {} bad", r.checked(), r.samples, r.counterexamples.len()))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(ok, detail)
}

fn return_times(tw: &Tower) -> Outcome {
    let rep = verify_gamma_structure(tw.x(), &tw.gamma);
    let gamma_ok = rep.as_ref().is_ok_and(|r| r.ok());
    let times = |ps: &[decagon::returns::PieceReturn; 2]| -> BTreeSet<usize> {
        ps.iter().map(|p| p.time).collect()
    };
    let (t1, t2) = (times(&tw.z.t1_pieces), times(&tw.z.t2_pieces));
    // sampled returns stay within the same sets
    let mut sampled = [BTreeSet::new(), BTreeSet::new()];
    for (k, sys) in [&tw.z.t1, &tw.z.t2].into_iter().enumerate() {
        let delta = tw.ax.delta(k + 1);
        for p in tw.x().sample(200, 40 + k as u64) {
            if let Ok(r) = sys.first_return(&delta.apply(&p)) {
                sampled[k].insert(r.time);
            }
        }
    }
    let want1: BTreeSet<usize> = [3, 5].into();
    let want2: BTreeSet<usize> = [1, 2].into();
    let paths = [&tw.z.t1_pieces, &tw.z.t2_pieces].map(|ps| [ps[0].path.clone(), ps[1].path.clone()]);
    outcome(
        gamma_ok && t1 == want1 && t2 == want2 && sampled[0] == want1 && sampled[1] == want2,
        format!(
            "Gamma(X) returns 7/3 via aababaa/aaa: {gamma_ok}; T'1 {t1:?} {:?}; T'2 {t2:?} {:?}",
            paths[0], paths[1]
        ),
    )
}

fn closed_forms() -> Outcome {
    let r = |n: i64| Rational::from_integer(n.into());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for _ in 0..100 {
        let x = Rational::new(rng.random_range(-1000i64..1000).into(), rng.random_range(1i64..60).into());
        let y = Rational::new(rng.random_range(-1000i64..1000).into(), rng.random_range(1i64..60).into());
        let mut v = (x.clone(), y.clone());
        for l in 0..=20 {
            if m_sigma_power(l, &x, &y) != v {
                bad += 1;
            }
            v = (&v.0 * r(5) + &v.1 * r(3), &v.0 * r(2));
        }
    }
    let mut evals = 0;
    let mut non_integral = 0;
    let fams = generators_cx()
        .into_iter()
        .chain(generators_cz())
        .chain(generators_cvo())
        .chain(generators_cv());
    for f in fams {
        for k in 0..=12 {
            for l in 0..=12 {
                evals += 1;
                if f.evaluate(k, l).is_err() {
                    non_integral += 1;
                }
            }
        }
    }
    outcome(
        bad == 0 && non_integral == 0,
        format!("{bad} closed-form mismatches over 100x21; {non_integral}/{evals} non-integral evaluations"),
    )
}

fn period_set(t: &Table) -> Outcome {
    let listed: BTreeSet<u64> = enumerate_periods(PERIOD_LIMIT).keys().copied().collect();
    let oracle = common::oracle_b2(PERIOD_LIMIT);
    let spec = CrossSpec {
        samples: GRID_SAMPLES,
        cap: ORBIT_CAP,
        seed: 1,
        near: 20,
        ..CrossSpec::default()
    };
    let cross = cross_validate(t, &spec, &default_anchors(t));
    let all = cross.all_observed();
    let near_30 = cross
        .anchors
        .iter()
        .find(|a| a.name == "O_ba")
        .is_some_and(|a| a.near.contains_key(&30));
    let ok = listed == oracle
        && cross.ok()
        && cross.samples == GRID_SAMPLES
        && all.contains(&5)
        && all.contains(&10)
        && all.len() >= MIN_DISTINCT
        && near_30;
    outcome(
        ok,
        format!(
            "enumerate_periods({PERIOD_LIMIT}) = oracle: {}; {} samples, {} periodic, {} undecided, {} outside B2, {} abel mismatches; distinct {}; 30 near O_ba: {near_30}",
            listed == oracle,
            cross.samples,
            cross.periodic,
            cross.undecided,
            cross.outside_b2.len(),
            cross.abel_mismatch.len(),
            all.len()
        ),
    )
}

fn measure_decay(tw: &Tower) -> Outcome {
    let Ok(p) = Partitioner::new(tw) else {
        return outcome(false, "partition construction failed");
    };
    // ε rebuilt from the ω regions and the two triangles
    let (x, om) = (tw.x(), &tw.omegas);
    let area = |r: &decagon::ConvexRegion| r.area().unwrap();
    let abe = (&area(&om.omega_a) + &area(&om.omega_ab)).ratio(&area(&x.quad.abe)).unwrap();
    let ced = area(&om.omega_ba).ratio(&area(&x.quad.ced)).unwrap();
    let want = if abe.cmp_real(&ced) == Ok(Ordering::Less) { abe } else { ced };
    let eps = p.epsilon().value;
    let in_unit = eps.real_sign() == Ok(Sign::Positive)
        && eps.cmp_real(&CycNum::one()) == Ok(Ordering::Less);
    let keep = &CycNum::one() - &eps;
    let total = x.quad.area();
    let mut ok = eps == want && in_unit;
    let mut level = p.initial();
    let (_, mut green) = p.areas(&level);
    let mut greens = vec![green.to_f64()];
    for _ in 0..DECAY_LEVELS {
        let next = p.step(&level);
        let (r, g) = p.areas(&next);
        ok &= &r + &g == total;
        ok &= g.cmp(&green.times(&keep)) != Ordering::Greater;
        greens.push(g.to_f64());
        green = g;
        level = next;
    }
    outcome(
        ok,
        format!(
            "epsilon ~ {:.6}, exact match {}; green areas {:.4?}",
            eps.to_f64_pair().0,
            eps == want,
            greens
        ),
    )
}

fn aperiodicity(tw: &Tower) -> Outcome {
    match aperiodic_point(tw.x(), &tw.gamma, NESTING, CERT_STEPS) {
        Ok(c) => {
            let interior = tw.x().region().locate(&c.p_inf) == Location::Interior;
            let ok = c.report.ok() && c.nesting == NESTING && c.steps == CERT_STEPS && interior;
            outcome(
                ok,
                format!(
                    "p_inf = {} via {}; {} nesting levels; {} steps: {}",
                    c.p_inf,
                    c.branches,
                    c.nesting_areas.len(),
                    c.steps,
                    if c.report.ok() { "no return, no boundary" } else { "certificate failed" }
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn full_measure(tw: &Tower) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for seed in FRACTION_SEEDS {
        let f = periodic_fraction_x(tw.x(), GRID_SAMPLES, ORBIT_CAP, seed);
        ok &= f.periodic_fraction() >= MIN_PERIODIC && f.boundary == 0;
        parts.push(format!(
            "seed {seed}: periodic {:.4}, boundary {}, undecided {}",
            f.periodic_fraction(),
            f.boundary,
            f.undecided
        ));
    }
    outcome(ok, parts.join("; "))
}

fn show<E: std::fmt::Display>(r: &Result<(), E>) -> String {
    match r {
        Ok(()) => "ok".to_string(),
        Err(e) => e.to_string(),
    }
}

fn arithmetic() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: FIELD_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let axioms = runner.run(&(common::cyc(), common::cyc(), common::cyc()), |(a, b, c)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        Ok(())
    });
    let signs = runner.run(&common::real(), |x| {
        let s = x.real_sign().unwrap();
        let iv = x.approx(64).re;
        if iv.excludes_zero() {
            prop_assert_eq!(s, if iv.lo > 0.0 { Sign::Positive } else { Sign::Negative });
        }
        prop_assert_eq!(s == Sign::Zero, x.is_zero());
        Ok(())
    });
    outcome(
        axioms.is_ok() && signs.is_ok(),
        format!("{FIELD_CASES} cases each: axioms {}, real_sign {}", show(&axioms), show(&signs)),
    )
}

fn main() {
    // `cargo test` passes filter arguments such as `--list`; this target has no subtests
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let t = Table::new();
    let tower = Tower::build(&t);
    let Ok(tw) = tower.as_ref() else {
        println!("FAIL tower construction: {}", tower.unwrap_err());
        std::process::exit(1);
    };
    let results = [
        run(1, "fixed points", secs(1), || fixed_points(&t)),
        run(2, "invariant polygons", secs(5), || invariant_polygons(&t)),
        run(3, "conjugacies", secs(120), || conjugacies(&t, tw)),
        run(4, "return times", secs(30), || return_times(tw)),
        run(5, "closed forms", secs(10), closed_forms),
        run(6, "period set", secs(600), || period_set(&t)),
        run(7, "measure decay", secs(120), || measure_decay(tw)),
        run(8, "aperiodicity", secs(300), || aperiodicity(tw)),
        run(9, "full measure", secs(600), || full_measure(tw)),
        run(10, "arithmetic", secs(60), arithmetic),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
