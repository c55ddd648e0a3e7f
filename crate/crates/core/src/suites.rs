//! Named verification suites; each collects exact checks into a report.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::billiard::{rotation_r, MapChoice, Table};
use crate::cyclotomic::{CycNum, Rational};
use crate::dynamics::{per_from_induced, Halt};
use crate::geometry::{cross, decagon, dist_sq, intersect_lines, Line, Location, Point};
use crate::partition::{periodic_fraction_x, red_set, Partitioner};
use crate::periods::{
    cross_validate, default_anchors, enumerate_periods, generators_cv, generators_cx,
    generators_cz, is_period, m_sigma_power, period_from_abel, CrossSpec,
};
use crate::report::{SampleReport, VerificationReport};
use crate::returns::{build_h, verify_delta_conjugacy, verify_h_conjugacy, verify_h_structure};
use crate::sampling::{sample_where, stream, Frame};
use crate::selfsim::{
    aperiodic_point, rank, ranked, verify_gamma_return, verify_gamma_structure, Tower,
};

pub const SUITES: [&str; 6] = [
    "exact-cyclotomic",
    "billiard-core",
    "return-systems",
    "self-similarity",
    "period-calculus",
    "measure-partitions",
];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    /// orbit cap for period sampling
    pub cap: usize,
    pub steps: usize,
    pub nesting: usize,
    pub levels: usize,
    pub limit: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 1000,
            seed: 1,
            cap: 1_000_000,
            steps: 10_000,
            nesting: 8,
            levels: 6,
            limit: 1000,
        }
    }
}

/// Runs one suite by name, or every suite for "all".
pub fn run(name: &str, cfg: &SuiteConfig) -> Option<VerificationReport> {
    let t = Table::new();
    let one = |n: &str| -> Option<VerificationReport> {
        Some(match n {
            "exact-cyclotomic" => cyclotomic_suite(cfg),
            "billiard-core" => billiard_suite(&t, cfg),
            "return-systems" => with_tower(&t, n, |tw, rep| returns_suite(&t, tw, cfg, rep)),
            "self-similarity" => with_tower(&t, n, |tw, rep| selfsim_suite(tw, cfg, rep)),
            "period-calculus" => period_suite(&t, cfg),
            "measure-partitions" => with_tower(&t, n, |tw, rep| partition_suite(tw, cfg, rep)),
            _ => return None,
        })
    };
    if name == "all" {
        let mut rep = VerificationReport::new("all");
        for n in SUITES {
            rep.merge(one(n)?);
        }
        return Some(rep);
    }
    one(name)
}

fn with_tower(
    t: &Table,
    name: &str,
    body: impl FnOnce(&Tower, &mut VerificationReport),
) -> VerificationReport {
    let mut rep = VerificationReport::new(name);
    match Tower::build(t) {
        Ok(tw) => body(&tw, &mut rep),
        Err(e) => rep.push("tower", "construction of X, omega and Gamma", false, json!({ "error": e.to_string() })),
    }
    rep
}

/// One entry for a sampled check: passes when no counterexample was found
/// and at least one sample was decided.
pub fn push_samples(rep: &mut VerificationReport, id: &str, anchor: &str, s: &SampleReport) {
    rep.push(
        id,
        anchor,
        s.ok() && s.checked() > 0,
        json!({
            "samples": s.samples,
            "skipped": s.skipped,
            "counterexamples": s.counterexamples.iter().take(5).collect::<Vec<_>>(),
        }),
    );
}

fn random_cyc(rng: &mut impl Rng) -> CycNum {
    let mut c = || Rational::new(rng.random_range(-50..=50).into(), rng.random_range(1..=12).into());
    CycNum::new([c(), c(), c(), c()])
}

fn cyclotomic_suite(cfg: &SuiteConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("exact-cyclotomic");
    let z = CycNum::zeta_pow(1);
    let z9 = CycNum::zeta_pow(9);
    rep.push("zeta.order", "zeta^10 = 1, zeta^5 = -1", CycNum::zeta_pow(10).is_one() && (&CycNum::zeta_pow(5) + &CycNum::one()).is_zero(), json!({}));
    rep.push("zeta.inverse", "zeta * zeta^9 = 1", (&z * &z9).is_one() && z.inv().ok() == Some(z9.clone()), json!({ "inv": z.inv().ok() }));
    let phi = CycNum::phi();
    rep.push("phi", "phi^2 = phi + 1 and phi = zeta + zeta^9", &phi * &phi == &phi + &CycNum::one() && phi == &z + &z9, json!({ "phi": phi }));

    let mut bad = Vec::new();
    for i in 0..cfg.samples {
        let mut rng = stream(cfg.seed, i as u64);
        let (a, b, c) = (random_cyc(&mut rng), random_cyc(&mut rng), random_cyc(&mut rng));
        let assoc = &(&a * &b) * &c == &a * &(&b * &c);
        let distrib = &a * &(&b + &c) == &(&a * &b) + &(&a * &c);
        let inverse = a.is_zero() || a.inv().map(|ai| (&a * &ai).is_one()).unwrap_or(false);
        let conj = (&a * &b).conj() == &a.conj() * &b.conj();
        let norm = a.norm_sq();
        let sign_ok = match norm.real_sign() {
            Ok(s) => {
                let iv = norm.approx(64).re;
                s.as_i8() >= 0 && (!iv.excludes_zero() || (iv.mid() > 0.0) == (s.as_i8() > 0))
            }
            Err(_) => false,
        };
        if !(assoc && distrib && inverse && conj && sign_ok) {
            bad.push(json!({ "a": a, "b": b, "c": c }));
        }
    }
    rep.push(
        "field.axioms",
        "ring axioms, inverses, conjugation and sign of norms on random elements",
        bad.is_empty(),
        json!({ "samples": cfg.samples, "failures": bad.into_iter().take(5).collect::<Vec<_>>() }),
    );
    rep
}

fn outside_table_points(t: &Table, radius: i64, count: usize, seed: u64) -> Vec<Point> {
    let r = Rational::from_integer(radius.into());
    let vs: Vec<Point> = (0..10).map(|k| t.vertex(k).scale(&r)).collect();
    let table = decagon(&CycNum::zero(), &Rational::from_integer(1.into()));
    sample_where(&Frame::around(&vs), count, seed, |p| table.locate(p) == Location::Outside)
}

fn billiard_suite(t: &Table, cfg: &SuiteConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("billiard-core");
    for i in 1..=4 {
        let o = t.fixed_point_o(i);
        let step = t.step_t_prime(&o);
        rep.push(
            &format!("fixed.O{i}"),
            &format!("T'(O{i}) = O{i} with code {i}"),
            matches!(&step, Ok((q, s)) if *q == o && *s as usize == i),
            json!({ "point": o, "image": step.as_ref().ok().map(|s| &s.0) }),
        );
        let (d1, d2) = t.o_distances(i);
        rep.push(
            &format!("fixed.O{i}.equidistant"),
            "|A1 Oi| = |A(i+1) Oi|",
            d1 == d2 && t.alpha(i).locate(&o) == Location::Interior,
            json!({ "a1": d1, "ai1": d2 }),
        );
    }
    let want_vertices = [5, 10, 5, 10];
    for i in 1..=4 {
        let o = t.fixed_point_o(i);
        let comp = t.component_of(&o, MapChoice::TPrime, 20);
        let w = match &comp {
            Ok(c) => {
                let vs = c.vertices().unwrap_or(&[]);
                let parallel = vs.iter().zip(vs.iter().cycle().skip(1)).all(|(a, b)| {
                    (0..5).any(|k| cross(&(b - a), &(t.vertex(k + 1) - t.vertex(k))).is_zero())
                });
                let centred = vs.iter().all(|v| dist_sq(v, &o) == dist_sq(&vs[0], &o));
                let ok = vs.len() == want_vertices[i - 1] && c.is_regular() && parallel && centred;
                (ok, json!({ "vertices": vs }))
            }
            Err(e) => (false, json!({ "error": e.to_string() })),
        };
        rep.push(
            &format!("component.O{i}"),
            "component of Oi under T' is a regular polygon centred at Oi with sides parallel to the table",
            w.0,
            w.1,
        );
        let want = per_from_induced(1, i as u64) as usize;
        let halt = t.period(&o, MapChoice::T, 100);
        rep.push(
            &format!("period.O{i}"),
            "T-period of Oi is 10 / gcd(i, 10)",
            halt == Halt::Period { step: want },
            json!({ "halt": halt, "want": want }),
        );
    }
    let q5 = intersect_lines(
        &Line::through(t.vertex(1), t.vertex(2)),
        &Line::through(t.vertex(6), t.vertex(5)),
    );
    rep.push(
        "alpha5.apex",
        "alpha5 has apex Q5 = A1A2 meet A6A5",
        q5.as_ref().ok() == Some(&t.q_point(5)),
        json!({ "q5": q5.ok() }),
    );

    let points = outside_table_points(t, 4, cfg.samples, cfg.seed);
    let r = rotation_r(1);
    let mut bad = Vec::new();
    let mut skipped = 0;
    for p in &points {
        match (t.step_t(p), t.step_t(&r.apply(p))) {
            (Ok((q, _)), Ok((rq, _))) if r.apply(&q) == rq => {
                if t.step_t_inv(&q).map(|x| x.0).as_ref() != Ok(p) {
                    bad.push(json!({ "point": p, "detail": "T^-1 T p != p" }));
                }
            }
            (Err(_), Err(_)) => skipped += 1,
            _ => bad.push(json!({ "point": p, "detail": "T R p != R T p" })),
        }
    }
    rep.push(
        "equivariance",
        "T commutes with R and T^-1 inverts T",
        bad.is_empty(),
        json!({ "samples": points.len(), "skipped": skipped, "counterexamples": bad.into_iter().take(5).collect::<Vec<_>>() }),
    );
    rep
}

fn returns_suite(t: &Table, tw: &Tower, cfg: &SuiteConfig, rep: &mut VerificationReport) {
    match verify_h_structure(t) {
        Ok(r) => rep.merge(r),
        Err(e) => rep.push("H.structure", "H structure", false, json!({ "error": e.to_string() })),
    }
    let h_o2 = build_h(t).apply(&t.fixed_point_o(2));
    rep.push(
        "H.O2",
        "T''(H(O2)) = H(T'(O2)) = H(O2)",
        crate::returns::t_double_prime(t).first_return(&h_o2).map(|r| r.point) == Ok(h_o2.clone()),
        json!({ "point": h_o2 }),
    );
    let s = verify_h_conjugacy(t, cfg.samples, 50, cfg.seed);
    push_samples(rep, "H.conjugacy", "T'' H = H T' and rho'(H p) = psi(rho'(p)), window 50", &s);

    rep.merge(tw.z.report.clone());
    let times = |ps: &[crate::returns::PieceReturn; 2]| [ps[0].time, ps[1].time];
    rep.push("T2.times", "T'2 return times 2 and 1", times(&tw.z.t2_pieces) == [2, 1], json!(times(&tw.z.t2_pieces)));
    rep.push("T1.times", "T'1 return times 5 and 3", times(&tw.z.t1_pieces) == [5, 3], json!(times(&tw.z.t1_pieces)));

    let x = tw.x();
    let pts = x.sample(cfg.samples, cfg.seed);
    for (j, allowed) in [(1usize, [3usize, 5]), (2, [1, 2])] {
        let sys = if j == 1 { &tw.z.t1 } else { &tw.z.t2 };
        let d = tw.ax.delta(j);
        let mut seen = BTreeSet::new();
        let mut failures = Vec::new();
        for p in &pts {
            match sys.first_return(&d.apply(p)) {
                Ok(r) => {
                    seen.insert(r.time);
                }
                Err(crate::returns::ReturnError::Boundary { .. }) => {}
                Err(e) => failures.push(json!({ "point": p, "error": e.to_string() })),
            }
        }
        let all: BTreeSet<usize> = allowed.into_iter().collect();
        rep.push(
            &format!("T{j}.sampled-times"),
            &format!("sampled first-return times of T'{j} are exactly {allowed:?}"),
            failures.is_empty() && seen == all,
            json!({ "seen": seen, "failures": failures.into_iter().take(5).collect::<Vec<_>>() }),
        );
        let s = verify_delta_conjugacy(&tw.ax, &tw.z, j, cfg.samples, 30, cfg.seed);
        push_samples(rep, &format!("Delta{j}.conjugacy"), &format!("T'{j} Delta{j} = Delta{j} f and rho' lifts by phi{j}"), &s);
    }
    let d1 = tw.ax.delta(1);
    rep.push(
        "Delta.orientation",
        "Delta1 reverses orientation, Delta2 is the identity",
        d1.kind == crate::geometry::MapKind::Mirror && tw.ax.delta(2).is_identity(),
        json!({ "delta1": d1 }),
    );
}

fn selfsim_suite(tw: &Tower, cfg: &SuiteConfig, rep: &mut VerificationReport) {
    let x = tw.x();
    let om = &tw.omegas;
    let g = &tw.gamma;
    rep.push("omega_a.code", "rho_X(omega_a) = a, f(O_a) = O_a", x.code(&om.o_a, 1).as_deref() == Ok("a") && x.step_f(&om.o_a).map(|s| s.0) == Some(om.o_a.clone()), json!({ "o_a": om.o_a }));
    let f2 = x.step_f(&om.o_ba).and_then(|(q, _)| x.step_f(&q)).map(|s| s.0);
    rep.push("omega_ba.code", "rho_X(omega_ba) = ba, f^2(O_ba) = O_ba", x.code(&om.o_ba, 2).as_deref() == Ok("ba") && f2 == Some(om.o_ba.clone()), json!({ "o_ba": om.o_ba }));
    let fa = om.omega_a.image(x.f_a());
    let fba = om.omega_ba.image(x.f_b());
    let fab = om.omega_ab.image(x.f_a());
    rep.push(
        "omega.invariance",
        "f(omega_a) = omega_a, f(omega_ba) = omega_ab, f(omega_ab) = omega_ba",
        fa.same_polygon(&om.omega_a) && fba.same_polygon(&om.omega_ab) && fab.same_polygon(&om.omega_ba),
        json!({}),
    );
    rep.push(
        "Gamma.orientation",
        "Gamma(A) = A, Gamma reverses orientation, lambda^2 < 1",
        g.map.apply(&x.quad.a) == x.quad.a && g.map.kind == crate::geometry::MapKind::Mirror,
        json!({ "lambda_sq": g.lambda_sq }),
    );
    match verify_gamma_structure(x, g) {
        Ok(r) => rep.merge(r),
        Err(e) => rep.push("Gamma.structure", "return into Gamma(X)", false, json!({ "error": e.to_string() })),
    }
    let s = verify_gamma_return(x, g, cfg.samples, 30, cfg.seed);
    push_samples(rep, "Gamma.conjugacy", "f_Gamma Gamma = Gamma f and rho_X(Gamma p) = sigma(rho_X(p)), window 30", &s);

    let go = g.map.apply(&om.o_a);
    rep.push("Gamma.O_a.period", "Gamma(O_a) has f-period 7", x.f.period(&go, 100) == Halt::Period { step: 7 }, json!({ "point": go }));
    let gg = g.map.apply(&g.map.apply(&om.o_ba));
    let ranks = [rank(x, g, &om.o_a).ok(), rank(x, g, &go).ok(), rank(x, g, &gg).ok()];
    rep.push("rank.examples", "rk(O_a) = 0, rk(Gamma O_a) = 1, rk(Gamma^2 O_ba) = 2", ranks == [Some(0), Some(1), Some(2)], json!(ranks));

    // Γ and Γ² of sampled short-period points: rank and orbit rank drop by one under Γ⁻¹
    let mut checked = 0;
    let mut bad = Vec::new();
    let short = x
        .sample(cfg.samples, cfg.seed)
        .into_iter()
        .filter(|p| matches!(x.f.period(p, 200), Halt::Period { .. }))
        .take(20);
    for p in short {
        let mut q = p;
        for _ in 0..2 {
            q = g.map.apply(&q);
            let Ok(rq) = ranked(x, g, &q, 100_000) else { continue };
            if rq.rank == 0 || rq.orbit_rank != Some(rq.rank) {
                continue;
            }
            checked += 1;
            let back = g.inverse.apply(&q);
            match ranked(x, g, &back, 100_000) {
                Ok(rb) if rb.rank + 1 == rq.rank && rb.orbit_rank == Some(rb.rank) => {}
                other => bad.push(json!({ "point": q, "rank": rq.rank, "inverse": other.ok() })),
            }
        }
    }
    rep.push(
        "rank.recursion",
        "rk = rko = k implies rk = rko = k - 1 for the Gamma-preimage",
        checked > 0 && bad.is_empty(),
        json!({ "checked": checked, "counterexamples": bad.into_iter().take(5).collect::<Vec<_>>() }),
    );

    match aperiodic_point(x, g, cfg.nesting, cfg.steps) {
        Ok(cert) => {
            let w: Value = json!({ "p_inf": cert.p_inf, "mu": cert.mu, "branches": cert.branches });
            rep.note("aperiodic.point", "p_inf, fixed point of Gamma_1", w);
            rep.merge(cert.report);
        }
        Err(e) => rep.push("aperiodic", "aperiodic point certificate", false, json!({ "error": e.to_string() })),
    }
}

fn period_suite(t: &Table, cfg: &SuiteConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("period-calculus");
    let mut bad = Vec::new();
    for i in 0..100 {
        let mut rng = stream(cfg.seed, 1_000_000 + i);
        let x = Rational::new(rng.random_range(-1000..1000).into(), rng.random_range(1..50).into());
        let y = Rational::new(rng.random_range(-1000..1000).into(), rng.random_range(1..50).into());
        let mut v = (x.clone(), y.clone());
        for l in 0..=20 {
            if m_sigma_power(l, &x, &y) != v {
                bad.push(json!({ "x": x.to_string(), "y": y.to_string(), "l": l }));
                break;
            }
            let five = Rational::from_integer(5.into());
            let three = Rational::from_integer(3.into());
            let two = Rational::from_integer(2.into());
            v = (&v.0 * five + &v.1 * three, &v.0 * two);
        }
    }
    rep.push("m_sigma.closed-form", "M_sigma^l closed form equals iteration, l <= 20", bad.is_empty(), json!({ "failures": bad }));

    let mut bad = Vec::new();
    for fam in generators_cx().iter().chain(&generators_cz()).chain(&generators_cv()) {
        for k in 0..=12 {
            for l in 0..=12 {
                if let Err(e) = fam.evaluate(k, l) {
                    bad.push(e.to_string());
                }
            }
        }
    }
    rep.push("families.integral", "C_X, C_Z, C_V' integral for k, l <= 12", bad.is_empty(), json!({ "failures": bad }));

    let limit = cfg.limit;
    let listed = enumerate_periods(limit);
    let by_membership: Vec<u64> = (1..=limit).filter(|&n| is_period(n)).collect();
    rep.push(
        "periods.membership",
        "enumeration and membership agree",
        listed.keys().copied().eq(by_membership.iter().copied()),
        json!({ "limit": limit, "count": listed.len() }),
    );
    // sums grow like 6^l, so a few levels past log6(7·limit) suffice
    let max_l = (1..).find(|&l| 6u128.pow(l) > 7 * limit as u128).unwrap_or(1) + 2;
    let mut image = BTreeSet::new();
    for fam in generators_cv() {
        for l in 0..=max_l {
            for k in 0..=limit {
                let Ok(w) = fam.evaluate(k, l) else { break };
                match period_from_abel(&w) {
                    Ok(n) if n <= limit => {
                        image.insert(n);
                    }
                    _ if fam.uses_k && w.sum() > limit => break,
                    _ => {}
                }
                if !fam.uses_k {
                    break;
                }
            }
        }
    }
    let in_b: BTreeSet<u64> = listed.iter().filter(|e| e.1.in_b).map(|e| *e.0).collect();
    rep.push(
        "periods.abel-image",
        "B is the image of C_V' under the period formula",
        image == in_b,
        json!({ "limit": limit, "b": in_b.len(), "image": image.len() }),
    );
    rep.push(
        "periods.small",
        "5, 10 and 30 are periods",
        [5, 10, 30].iter().all(|n| listed.contains_key(n)),
        json!({ "first": listed.keys().take(12).collect::<Vec<_>>() }),
    );

    let spec = CrossSpec {
        samples: cfg.samples,
        cap: cfg.cap,
        seed: cfg.seed,
        near: 20,
        ..CrossSpec::default()
    };
    let cross = cross_validate(t, &spec, &default_anchors(t));
    let all = cross.all_observed();
    let near_30 = cross.anchors.iter().any(|a| a.name == "O_ba" && a.near.contains_key(&30));
    rep.push(
        "cross.membership",
        "every simulated T-period lies in B2 and matches its abelianized code",
        cross.ok() && cross.boundary == 0,
        json!({
            "samples": cross.samples,
            "periodic": cross.periodic,
            "undecided": cross.undecided,
            "boundary": cross.boundary,
            "outside_b2": cross.outside_b2.iter().take(5).collect::<Vec<_>>(),
            "abel_mismatch": cross.abel_mismatch.iter().take(5).collect::<Vec<_>>(),
        }),
    );
    rep.push(
        "cross.observed",
        "5 and 10 observed with at least 5 distinct periods, 30 near O_ba",
        all.contains(&5) && all.contains(&10) && all.len() >= 7 && near_30,
        json!({ "observed": cross.observed, "anchors": cross.anchors }),
    );
    rep
}

fn partition_suite(tw: &Tower, cfg: &SuiteConfig, rep: &mut VerificationReport) {
    let p = match Partitioner::new(tw) {
        Ok(p) => p,
        Err(e) => {
            rep.push("partition", "partition construction", false, json!({ "error": e.to_string() }));
            return;
        }
    };
    let eps = p.epsilon();
    let zero = CycNum::zero();
    let one = CycNum::one();
    let lt = |a: &CycNum, b: &CycNum| a.cmp_real(b) == Ok(std::cmp::Ordering::Less);
    rep.push(
        "epsilon",
        "0 < epsilon < 1, epsilon = min of the two area ratios",
        lt(&zero, &eps.value) && lt(&eps.value, &one) && (eps.value == eps.abe_ratio || eps.value == eps.ced_ratio),
        json!({ "epsilon": eps.value, "approx": eps.value.to_f64_pair().0 }),
    );
    let keep = &one - &eps.value;
    let total = p.total_area();
    let mut l = p.initial();
    let mut prev = p.areas(&l);
    let mut rows = vec![json!({ "level": 1, "red": prev.0, "green": prev.1 })];
    let mut ok = prev.0.scaled().is_zero() && prev.1 == total;
    // transitions l → l + 1 for l = 1..=levels
    for _ in 0..cfg.levels {
        let next = p.step(&l);
        let (red, green) = p.areas(&next);
        ok &= &red + &green == total;
        ok &= red.cmp(&prev.0) != std::cmp::Ordering::Less;
        ok &= green.cmp(&prev.1.times(&keep)) != std::cmp::Ordering::Greater;
        ok &= red_set(&l).iter().all(|c| red_set(&next).contains(*c));
        rows.push(json!({ "level": next.level, "red": red, "green": green, "cells": next.cells.len() }));
        prev = (red, green);
        l = next;
    }
    rep.push(
        "decay",
        "red + green = area(X), red nondecreasing, green(l+1) <= (1 - epsilon) green(l)",
        ok,
        json!(rows),
    );
    let l2 = p.level(2);
    rep.push("level2.reds", "level 2 reds are omega_a, omega_ba, omega_ab", red_set(&l2).len() == 3, json!({ "cells": l2.cells.len() }));
    let mut disjoint = true;
    for level in 1..=3.min(cfg.levels) {
        let lv = p.level(level);
        disjoint &= matches!(p.overlaps(&lv), Ok(v) if v.is_empty());
    }
    rep.push("disjoint", "cell interiors pairwise disjoint, levels <= 3", disjoint, json!({}));

    let f = periodic_fraction_x(tw.x(), cfg.samples, cfg.cap, cfg.seed);
    rep.push(
        "fraction",
        "periodic fraction of X at least 0.99 with no boundary samples",
        f.periodic_fraction() >= 0.99 && f.boundary == 0,
        json!(f),
    );
}
