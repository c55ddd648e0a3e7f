//! Base periodic components of (X, f), the contraction Γ and the
//! aperiodic point p_inf.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::cyclotomic::CycNum;
use crate::dynamics::Halt;
use crate::geometry::{
    cross, dist_sq, dot, ConvexRegion, GeometryError, Location, MapKind, PlanarMap, Point, Region,
};
use crate::report::{Counterexample, SampleReport, VerificationReport};
use crate::billiard::Table;
use crate::returns::{
    build_abstract_x, build_z_systems, trace_piece, AbstractX, Quad, Return, ReturnSystem, XSystem,
    ZSystems,
};
use crate::symbolic::Substitution;

#[derive(Debug, Clone, Error)]
pub enum SelfSimError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("check failed: {0}")]
    Check(String),
    #[error("no periodic return within {0} steps")]
    NotPeriodic(usize),
    #[error("point is not inside X")]
    NotInX,
}

fn check(ok: bool, what: &str) -> Result<(), SelfSimError> {
    if ok {
        Ok(())
    } else {
        Err(SelfSimError::Check(what.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Omegas {
    pub o_a: Point,
    /// Wₖ = O_a + (C − O_a)·ζ^{k−3}
    pub w: Vec<Point>,
    pub omega_a: ConvexRegion,
    pub o_ba: Point,
    pub omega_ba: ConvexRegion,
    pub o_ab: Point,
    pub omega_ab: ConvexRegion,
}

/// Squared distance from p to the line through a and b.
fn line_dist_sq(p: &Point, a: &Point, b: &Point) -> CycNum {
    let d = b - a;
    let c = cross(&d, &(p - a));
    // cross carries a factor 4·sin(π/5) and dot a factor 2; compare only ratios
    (&c * &c).div(&dot(&d, &d)).expect("distinct points")
}

pub fn omega_components(x: &XSystem) -> Result<Omegas, SelfSimError> {
    let q = &x.quad;
    let (fa, fb) = (x.f_a(), x.f_b());
    let o_a = fa.fixed_point().ok_or(GeometryError::DegenerateMap)?;
    let w: Vec<Point> = (0..10)
        .map(|k| &o_a + (&q.c - &o_a) * CycNum::zeta_pow(k - 3))
        .collect();
    let omega_a = ConvexRegion::from_vertices(w.clone())?;
    check(fa.apply(&o_a) == o_a, "f(O_a) = O_a")?;
    check(omega_a.image(fa).same_polygon(&omega_a), "f(omega_a) = omega_a")?;
    check(
        omega_a.covered_area(std::slice::from_ref(&q.abe))? == omega_a.area()?,
        "omega_a lies in ABE",
    )?;

    // O_ba is fixed by f∘f on its orbit: f_a∘f_b
    let o_ba = fa
        .compose(fb)
        .fixed_point()
        .ok_or(GeometryError::DegenerateMap)?;
    let r2 = line_dist_sq(&o_ba, &q.c, &q.d);
    check(
        line_dist_sq(&o_ba, &q.c, &q.e) == r2 && line_dist_sq(&o_ba, &q.e, &q.d) == r2,
        "O_ba is the incentre of CED",
    )?;
    // pentagon with a side on CD: circumradius is inradius·2/φ
    let d = &q.d - &q.c;
    let t = dot(&(&o_ba - &q.c), &d).div(&dot(&d, &d)).expect("C ≠ D");
    let m = &q.c + &d * &t;
    let scale = CycNum::phi().inv().expect("φ ≠ 0") * CycNum::from_int(2);
    let pent: Vec<Point> = (0..5)
        .map(|k| &o_ba + (&m - &o_ba) * &scale * CycNum::zeta_pow(1 + 2 * k))
        .collect();
    let omega_ba = ConvexRegion::from_vertices(pent)?;
    check(
        omega_ba.covered_area(std::slice::from_ref(&q.ced))? == omega_ba.area()?,
        "omega_ba lies in CED",
    )?;
    let o_ab = fb.apply(&o_ba);
    let omega_ab = omega_ba.image(fb);
    check(
        omega_ab.covered_area(std::slice::from_ref(&q.abe))? == omega_ab.area()?,
        "omega_ab lies in ABE",
    )?;
    check(omega_ab.image(fa).same_polygon(&omega_ba), "f(omega_ab) = omega_ba")?;
    check(fa.apply(&o_ab) == o_ba, "f(O_ab) = O_ba")?;
    Ok(Omegas {
        o_a,
        w,
        omega_a,
        o_ba,
        omega_ba,
        o_ab,
        omega_ab,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Gamma {
    pub map: PlanarMap,
    pub inverse: PlanarMap,
    /// λ² = |AW₉|²/|AB|²
    pub lambda_sq: CycNum,
    pub image: Quad,
}

/// Γ: the mirror similarity with A ↦ A, B ↦ W₇, C ↦ W₈, D ↦ W₉.
pub fn build_gamma(x: &XSystem, om: &Omegas) -> Result<Gamma, SelfSimError> {
    let q = &x.quad;
    let map = PlanarMap::from_pairs(
        &[
            (q.a.clone(), q.a.clone()),
            (q.b.clone(), om.w[7].clone()),
            (q.c.clone(), om.w[8].clone()),
            (q.d.clone(), om.w[9].clone()),
        ],
        MapKind::Mirror,
    )?;
    let lambda_sq = dist_sq(&q.a, &om.w[9])
        .div(&dist_sq(&q.a, &q.b))
        .expect("A ≠ B");
    check(map.ratio_sq() == lambda_sq, "|u|² = λ²")?;
    check(
        lambda_sq.cmp_real(&CycNum::one()).expect("real") == std::cmp::Ordering::Less,
        "λ < 1",
    )?;
    let image = q.image(&map)?;
    let pieces = q.pieces();
    for p in image.pieces() {
        check(p.covered_area(&pieces)? == p.area()?, "Γ(X) ⊂ X")?;
    }
    Ok(Gamma {
        inverse: map.inverse()?,
        map,
        lambda_sq,
        image,
    })
}

impl Gamma {
    /// f_Γ, the first return of f into Γ(X).
    pub fn return_system(&self, x: &XSystem) -> ReturnSystem {
        ReturnSystem {
            base: x.f.clone(),
            target: Region::Polygon(self.image.region.clone()),
            max_return: 7,
        }
    }
}

/// Exact piece structure: f_Γ = Γ∘f∘Γ⁻¹, with times 7 and 3 and paths σ(a), σ(b).
pub fn verify_gamma_structure(x: &XSystem, g: &Gamma) -> Result<VerificationReport, SelfSimError> {
    let mut rep = VerificationReport::new("gamma-return");
    let sigma = Substitution::sigma();
    let target = g.image.pieces();
    for (piece, br) in x.quad.pieces().iter().zip(x.f.branches()) {
        let r = trace_piece(&x.f, &piece.image(&g.map), &target, 7);
        let want = sigma.image(br.symbol).unwrap();
        let conj = g.map.compose(&br.map).compose(&g.inverse);
        let ok = matches!(&r, Ok(r) if r.path == want && r.time == want.len() && r.map == conj);
        rep.push(
            &format!("Gamma.return.{}", br.symbol),
            "f_Gamma = Gamma f Gamma^-1 with path sigma(symbol)",
            ok,
            match &r {
                Ok(r) => json!({ "time": r.time, "path": r.path }),
                Err(e) => json!({ "error": e.to_string() }),
            },
        );
    }
    Ok(rep)
}

/// For sampled p ∈ X: f_Γ(Γ(p)) = Γ(f(p)) with path σ(symbol of p), and the
/// ρ_X code of Γ(p) equals σ of the code of p over ≥ `window` output symbols.
pub fn verify_gamma_return(
    x: &XSystem,
    g: &Gamma,
    samples: usize,
    window: usize,
    seed: u64,
) -> SampleReport {
    let sigma = Substitution::sigma();
    let sys = g.return_system(x);
    let points = x.sample(samples, seed);
    let results: Vec<Option<Option<String>>> = points
        .par_iter()
        .map(|p| {
            let (fp, s) = x.step_f(p)?;
            let q = g.map.apply(p);
            match sys.first_return(&q) {
                Ok(Return { point, time, path, .. })
                    if point == g.map.apply(&fp)
                        && path == sigma.image(s).unwrap()
                        && time == path.len() => {}
                Ok(r) => return Some(Some(format!("return {} after {} via {}", r.point, r.time, r.path))),
                Err(e) => return Some(Some(format!("return: {e}"))),
            }
            let mut word = String::new();
            let mut r = p.clone();
            let mut len = 0;
            while len < window {
                let (next, c) = x.step_f(&r)?;
                len += sigma.image(c).unwrap().len();
                word.push(c);
                r = next;
            }
            let want = sigma.apply(&word).unwrap();
            match x.code(&q, want.len()) {
                Ok(got) if got == want => Some(None),
                Ok(got) => Some(Some(format!("code {got} != sigma(code) {want}"))),
                Err(k) => Some(Some(format!("boundary at step {k}"))),
            }
        })
        .collect();
    let mut rep = SampleReport {
        samples: points.len(),
        ..Default::default()
    };
    for (p, r) in points.iter().zip(results) {
        match r {
            None => rep.skipped += 1,
            Some(None) => {}
            Some(Some(detail)) => rep.counterexamples.push(Counterexample {
                point: p.clone(),
                detail,
            }),
        }
    }
    rep
}

#[derive(Debug, Clone, Serialize)]
pub struct RankedPoint {
    pub point: Point,
    pub rank: usize,
    pub orbit_rank: Option<usize>,
}

/// Maximal k with Γ⁻ᵏ(q) ∈ X.
pub fn rank(x: &XSystem, g: &Gamma, q: &Point) -> Result<usize, SelfSimError> {
    let x_region = x.region();
    if x_region.locate(q) != Location::Interior {
        return Err(SelfSimError::NotInX);
    }
    let mut p = q.clone();
    let mut k = 0;
    // Γ⁻¹ expands by 1/λ > 4, so this terminates quickly
    loop {
        p = g.inverse.apply(&p);
        if x_region.locate(&p) != Location::Interior {
            return Ok(k);
        }
        k += 1;
    }
}

/// Largest rank along one period of q.
pub fn orbit_rank(x: &XSystem, g: &Gamma, q: &Point, cap: usize) -> Result<usize, SelfSimError> {
    let rec = x.f.orbit(q, cap);
    match rec.halt {
        Halt::Period { .. } => {}
        _ => return Err(SelfSimError::NotPeriodic(cap)),
    }
    rec.steps
        .iter()
        .map(|s| rank(x, g, &s.z))
        .try_fold(0, |m, r| r.map(|r| m.max(r)))
}

pub fn ranked(x: &XSystem, g: &Gamma, q: &Point, cap: usize) -> Result<RankedPoint, SelfSimError> {
    Ok(RankedPoint {
        point: q.clone(),
        rank: rank(x, g, q)?,
        orbit_rank: orbit_rank(x, g, q, cap).ok(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub branches: String,
    pub mu: CycNum,
    pub tau: CycNum,
    pub fixed_point: Option<Point>,
    pub accepted: bool,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AperiodicCertificate {
    pub p_inf: Point,
    pub mu: CycNum,
    pub tau: CycNum,
    pub branches: String,
    pub lambda_sq: CycNum,
    pub nesting: usize,
    pub steps: usize,
    pub candidates: Vec<Candidate>,
    /// scaled areas of Γ₁ʲ(X), j = 1..=nesting
    pub nesting_areas: Vec<String>,
    pub report: VerificationReport,
}

fn branch_of(s: char) -> usize {
    usize::from(s == 'b')
}

/// Validates one branch resolution (s1, s2) of Γ₁ = Γ∘f⁻¹∘Γ∘f.
fn try_candidate(
    x: &XSystem,
    g: &Gamma,
    s1: char,
    s2: char,
    nesting: usize,
) -> Result<(Candidate, Vec<Quad>), SelfSimError> {
    let f1 = &x.f.branches()[branch_of(s1)];
    let f2inv = &x.f_inv.branches()[branch_of(s2)];
    let map = g.map.compose(&f2inv.map).compose(&g.map).compose(&f1.map);
    let mut cand = Candidate {
        branches: format!("{s1}{s2}"),
        mu: map.u.clone(),
        tau: map.t.clone(),
        fixed_point: map.fixed_point(),
        accepted: false,
        reason: String::new(),
    };
    let Some(p) = cand.fixed_point.clone() else {
        cand.reason = "no fixed point".into();
        return Ok((cand, vec![]));
    };
    if f1.region.locate(&p) != Location::Interior {
        cand.reason = format!("fixed point not inside branch {s1}");
        return Ok((cand, vec![]));
    }
    let mid = g.map.apply(&f1.map.apply(&p));
    if f2inv.region.locate(&mid) != Location::Interior {
        cand.reason = format!("inverse branch {s2} does not apply at the fixed point");
        return Ok((cand, vec![]));
    }
    // Γ(X) must lie in one inverse branch so that Γ₁(X) is a single image
    let gx = &g.image;
    let inside = gx.pieces().iter().try_fold(true, |ok, pc| {
        Ok::<_, GeometryError>(
            ok && pc.covered_area(std::slice::from_ref(&f2inv.region))? == pc.area()?,
        )
    })?;
    if !inside {
        cand.reason = format!("Gamma(X) is not inside the image of branch {s2}");
        return Ok((cand, vec![]));
    }
    let first = gx.image(&f2inv.map)?.image(&g.map)?;
    let mut levels = vec![first];
    for j in 0..nesting {
        let cur = &levels[j];
        if cur.region.locate(&p) != Location::Interior {
            cand.reason = format!("p_inf not interior to level {}", j + 1);
            return Ok((cand, vec![]));
        }
        let in_branch = cur.pieces().iter().try_fold(true, |ok, pc| {
            Ok::<_, GeometryError>(
                ok && pc.covered_area(std::slice::from_ref(&f1.region))? == pc.area()?,
            )
        })?;
        if !in_branch {
            cand.reason = format!("level {} leaves branch {s1}", j + 1);
            return Ok((cand, vec![]));
        }
        if j + 1 == nesting {
            break;
        }
        let next = cur.image(&map)?;
        let nested = next.pieces().iter().try_fold(true, |ok, pc| {
            Ok::<_, GeometryError>(ok && pc.covered_area(&cur.pieces())? == pc.area()?)
        })?;
        let smaller = next.area().cmp(&cur.area()) == std::cmp::Ordering::Less;
        if !(nested && smaller) {
            cand.reason = format!("level {} is not strictly nested", j + 2);
            return Ok((cand, vec![]));
        }
        levels.push(next);
    }
    cand.accepted = true;
    cand.reason = "accepted".into();
    Ok((cand, levels))
}

/// Finds p_inf and certifies it: nesting to depth `nesting` and `steps`
/// exact f-steps without a return to p_inf or a boundary landing.
pub fn aperiodic_point(
    x: &XSystem,
    g: &Gamma,
    nesting: usize,
    steps: usize,
) -> Result<AperiodicCertificate, SelfSimError> {
    let tries: Vec<_> = ['a', 'b']
        .into_par_iter()
        .flat_map_iter(|s1| ['a', 'b'].into_iter().map(move |s2| (s1, s2)))
        .map(|(s1, s2)| try_candidate(x, g, s1, s2, nesting))
        .collect::<Result<_, _>>()?;
    let accepted: Vec<usize> = (0..tries.len()).filter(|&i| tries[i].0.accepted).collect();
    let candidates: Vec<Candidate> = tries.iter().map(|t| t.0.clone()).collect();
    if accepted.len() != 1 {
        return Err(SelfSimError::Check(format!(
            "{} branch resolutions of Gamma_1 pass validation",
            accepted.len()
        )));
    }
    let (cand, levels) = &tries[accepted[0]];
    let p = cand.fixed_point.clone().expect("accepted");
    let mut rep = VerificationReport::new("aperiodic");
    let lambda4 = &g.lambda_sq * &g.lambda_sq;
    rep.push(
        "mu",
        "|mu|^2 = lambda^4",
        cand.mu.norm_sq() == lambda4,
        json!({ "mu": cand.mu, "lambda_sq": g.lambda_sq }),
    );
    rep.push(
        "p_inf.level1",
        "p_inf inside Gamma_1(X)",
        levels[0].region.locate(&p) == Location::Interior,
        json!({ "p_inf": p }),
    );
    rep.push(
        "nesting",
        "Gamma_1^j(X) strictly decreasing with p_inf interior",
        levels.len() == nesting,
        json!({ "depth": levels.len() }),
    );
    let halt = x.f.period(&p, steps);
    let witness = match halt {
        Halt::Cap { .. } => json!({ "steps": steps }),
        Halt::Period { step } | Halt::Boundary { step } => {
            let mut q = p.clone();
            for _ in 0..step {
                q = x.step_f(&q).expect("defined before the halt").0;
            }
            json!({ "halt": halt, "point": q })
        }
    };
    rep.push(
        "orbit",
        "no return to p_inf and no boundary landing",
        matches!(halt, Halt::Cap { step } if step == steps),
        witness,
    );
    Ok(AperiodicCertificate {
        p_inf: p,
        mu: cand.mu.clone(),
        tau: cand.tau.clone(),
        branches: cand.branches.clone(),
        lambda_sq: g.lambda_sq.clone(),
        nesting,
        steps,
        candidates,
        nesting_areas: levels.iter().map(|l| l.area().to_string()).collect(),
        report: rep,
    })
}

/// The chain from the table down to (X, f), ω and Γ.
#[derive(Debug, Clone)]
pub struct Tower {
    pub z: ZSystems,
    pub ax: AbstractX,
    pub omegas: Omegas,
    pub gamma: Gamma,
}

impl Tower {
    pub fn build(t: &Table) -> Result<Self, SelfSimError> {
        let z = build_z_systems(t).map_err(|e| SelfSimError::Check(e.to_string()))?;
        let ax = build_abstract_x(&z)?;
        let omegas = omega_components(&ax.x)?;
        let gamma = build_gamma(&ax.x, &omegas)?;
        Ok(Tower {
            z,
            ax,
            omegas,
            gamma,
        })
    }

    pub fn x(&self) -> &XSystem {
        &self.ax.x
    }
}
