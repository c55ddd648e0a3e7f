//! First-return systems: T″ on α₅ with the translation H, the systems
//! T′₁, T′₂ on X′₁, X′₂, and the abstract quadrilateral system (X, f).

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::billiard::{LabeledPolygon, Table};
use crate::cyclotomic::{CycNum, Rational};
use crate::dynamics::{Branch, ComponentError, PiecewiseIsometry};
use crate::geometry::{
    decagon, intersect_lines, Area, ConvexRegion, GeometryError, Line, Location, MapKind,
    PlanarMap, Point, Polygon, Region,
};
use crate::report::{Counterexample, SampleReport, VerificationReport};
use crate::sampling::{sample_in, Frame};
use crate::symbolic::Substitution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReturnError {
    #[error("start point is not inside the target")]
    NotInTarget,
    #[error("orbit reaches a boundary point at step {step}")]
    Boundary { step: usize },
    #[error("no return within {steps} steps")]
    Cap { steps: usize },
}

#[derive(Debug, Clone, Error)]
pub enum ReturnsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Component(#[from] ComponentError),
    #[error("structural checks failed: {}", failed_ids(.0))]
    Check(Box<VerificationReport>),
}

fn failed_ids(r: &VerificationReport) -> String {
    r.checks
        .iter()
        .filter(|c| c.status == crate::report::Status::Fail)
        .map(|c| c.id.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Serialize)]
pub struct Return {
    pub point: Point,
    pub time: usize,
    pub path: String,
    pub map: PlanarMap,
}

/// First return of `base` into `target`, with a hard bound on return times.
#[derive(Debug, Clone)]
pub struct ReturnSystem {
    pub base: PiecewiseIsometry,
    pub target: Region,
    pub max_return: usize,
}

impl ReturnSystem {
    pub fn first_return(&self, p: &Point) -> Result<Return, ReturnError> {
        if self.target.locate(p) != Location::Interior {
            return Err(ReturnError::NotInTarget);
        }
        let mut q = p.clone();
        let mut path = String::new();
        let mut map = PlanarMap::identity();
        for step in 0..self.max_return {
            let (next, b) = self.base.step(&q).ok_or(ReturnError::Boundary { step })?;
            let br = &self.base.branches()[b];
            path.push(br.symbol);
            map = br.map.compose(&map);
            q = next;
            match self.target.locate(&q) {
                Location::Interior => {
                    return Ok(Return {
                        point: q,
                        time: step + 1,
                        path,
                        map,
                    })
                }
                // the return map is undefined here
                Location::Boundary => return Err(ReturnError::Boundary { step: step + 1 }),
                Location::Outside => {}
            }
        }
        Err(ReturnError::Cap {
            steps: self.max_return,
        })
    }

    /// The first `n` returns of p, concatenating their paths.
    pub fn returns(&self, p: &Point, n: usize) -> Result<(Point, String), ReturnError> {
        let mut q = p.clone();
        let mut path = String::new();
        for _ in 0..n {
            let r = self.first_return(&q)?;
            path.push_str(&r.path);
            q = r.point;
        }
        Ok((q, path))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("piece is split by a branch boundary at step {0}")]
    Split(usize),
    #[error("piece image partly overlaps the target at step {0}")]
    Partial(usize),
    #[error("no return within {0} steps")]
    Cap(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A whole open piece carried to its first return.
#[derive(Debug, Clone, Serialize)]
pub struct PieceReturn {
    pub piece: ConvexRegion,
    pub time: usize,
    pub path: String,
    pub map: PlanarMap,
    pub image: ConvexRegion,
    /// images after 0, 1, …, time − 1 steps
    pub orbit: Vec<ConvexRegion>,
}

/// Pushes a bounded open piece through `base` until its image lies in the
/// closure of the target, certifying by exact areas that every image stays
/// in one branch and either completely misses or completely hits the target.
pub fn trace_piece(
    base: &PiecewiseIsometry,
    piece: &ConvexRegion,
    target: &[ConvexRegion],
    max: usize,
) -> Result<PieceReturn, TraceError> {
    let mut cur = piece.clone();
    let mut map = PlanarMap::identity();
    let mut path = String::new();
    let mut orbit = Vec::new();
    for step in 0..max {
        let area = cur.area()?;
        let mut found = None;
        for br in base.branches() {
            if let Some(c) = cur.intersect(&br.region)? {
                if c.area()? == area {
                    found = Some(br);
                }
                break;
            }
        }
        let br = found.ok_or(TraceError::Split(step))?;
        orbit.push(cur.clone());
        cur = cur.image(&br.map);
        map = br.map.compose(&map);
        path.push(br.symbol);
        let covered = cur.covered_area(target)?;
        if covered == area {
            return Ok(PieceReturn {
                piece: piece.clone(),
                time: step + 1,
                path,
                map,
                image: cur,
                orbit,
            });
        }
        if !covered.scaled().is_zero() {
            return Err(TraceError::Partial(step + 1));
        }
    }
    Err(TraceError::Cap(max))
}

/// H: translation by Q₅ − A₁, taking int V′ onto α₅.
pub fn build_h(t: &Table) -> PlanarMap {
    PlanarMap::translation(t.q_point(5) - t.vertex(1))
}

/// T″, the first return of T′ into α₅.
pub fn t_double_prime(t: &Table) -> ReturnSystem {
    ReturnSystem {
        base: t.alpha_pieces().clone(),
        target: Region::Convex(t.alpha(5).clone()),
        max_return: 5,
    }
}

fn v_prime_window(t: &Table) -> ConvexRegion {
    decagon(t.vertex(1), &Rational::from_integer(64.into()))
}

/// Exact checks on H: the image of V′, the fixed points H(Oⱼ), and the
/// return structure of every piece H(αⱼ).
pub fn verify_h_structure(t: &Table) -> Result<VerificationReport, ReturnsError> {
    let mut rep = VerificationReport::new("h-structure");
    let h = build_h(t);
    let q5 = t.q_point(5);
    rep.push(
        "H.A1",
        "H(A1) = Q5",
        h.apply(t.vertex(1)) == q5,
        json!({ "image": h.apply(t.vertex(1)), "q5": q5 }),
    );
    let big = decagon(&q5, &Rational::from_integer(40.into()));
    let lhs = big.intersect(&t.v_prime().image(&h))?;
    let rhs = big.intersect(t.alpha(5))?;
    let same = matches!((&lhs, &rhs), (Some(a), Some(b)) if a.same_polygon(b));
    rep.push("H.image", "H(int V') = alpha5", same, json!({ "window_radius": 40 }));

    let tpp = t_double_prime(t);
    for j in 1..=4 {
        let p = h.apply(&t.fixed_point_o(j));
        let r = tpp.first_return(&p);
        let ok = matches!(&r, Ok(r) if r.point == p && r.time == 6 - j);
        rep.push(
            &format!("H.fixed.O{j}"),
            "H(Oj) is fixed by T''",
            ok,
            json!({ "point": p, "return": r.ok().map(|r| (r.time, r.path)) }),
        );
    }
    let window = v_prime_window(t);
    let psi = Substitution::psi();
    let target = [t.alpha(5).clone()];
    let h_inv = h.inverse()?;
    for j in 1..=5 {
        let piece = window
            .intersect(t.alpha(j))?
            .expect("alpha pieces meet the window");
        let tj = &t.alpha_pieces().branches()[j - 1].map;
        let expect = h.compose(tj).compose(&h_inv);
        let r = trace_piece(t.alpha_pieces(), &piece.image(&h), &target, 5);
        let want = psi.image(char::from(b'0' + j as u8)).unwrap();
        let ok = matches!(&r, Ok(r) if r.time == 6 - j && r.path == want && r.map == expect);
        rep.push(
            &format!("H.return.alpha{j}"),
            "T''(H(p)) = H(T'(p)) on alpha_j, return time 6 - j",
            ok,
            match &r {
                Ok(r) => json!({ "time": r.time, "path": r.path }),
                Err(e) => json!({ "error": e.to_string() }),
            },
        );
    }
    Ok(rep)
}

/// V′ sampling frame: A₁ + s·6(A₁ − A₀) + t·6(A₂ − A₁).
pub fn v_prime_frame(t: &Table) -> Frame {
    let six = Rational::from_integer(6.into());
    Frame::new(
        t.vertex(1).clone(),
        (t.vertex(1) - t.vertex(0)).scale(&six),
        (t.vertex(2) - t.vertex(1)).scale(&six),
    )
}

/// For sampled p ∈ V′: T″(H(p)) = H(T′(p)), and the T′-code of H(p) equals
/// ψ of the code of p on a window of at least `window` output symbols.
pub fn verify_h_conjugacy(t: &Table, samples: usize, window: usize, seed: u64) -> SampleReport {
    let h = build_h(t);
    let tpp = t_double_prime(t);
    let psi = Substitution::psi();
    let tp = t.alpha_pieces();
    let points = sample_in(
        &Region::Convex(t.v_prime().clone()),
        &v_prime_frame(t),
        samples,
        seed,
    );
    let results: Vec<Option<Option<String>>> = {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|p| {
                let Some((tp_p, _)) = tp.step(p) else {
                    return None;
                };
                let hp = h.apply(p);
                match tpp.first_return(&hp) {
                    Ok(r) if r.point == h.apply(&tp_p) => {}
                    Ok(r) => return Some(Some(format!("T''(H(p)) = {} differs", r.point))),
                    Err(e) => return Some(Some(format!("T''(H(p)): {e}"))),
                }
                // grow the input word until its image covers the window
                let mut word = String::new();
                let mut q = p.clone();
                let mut image_len = 0;
                while image_len < window {
                    let (next, b) = tp.step(&q)?;
                    let c = tp.branches()[b].symbol;
                    image_len += psi.image(c).unwrap().len();
                    word.push(c);
                    q = next;
                }
                let want = psi.apply(&word).unwrap();
                match tp.code(&hp, want.len()) {
                    Ok(got) if got == want => Some(None),
                    Ok(got) => Some(Some(format!("code {got} != psi(code) {want}"))),
                    Err(k) => Some(Some(format!("H(p) hits a boundary at step {k}"))),
                }
            })
            .collect()
    };
    collect_samples(&points, results)
}

fn collect_samples(points: &[Point], results: Vec<Option<Option<String>>>) -> SampleReport {
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

/// Quadrilateral ABCD with E = BC ∩ AD and F = AB ∩ CD, split into the
/// triangles ABE and CED.
#[derive(Debug, Clone, Serialize)]
pub struct Quad {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
    pub e: Point,
    pub f: Point,
    pub abe: ConvexRegion,
    pub ced: ConvexRegion,
    pub region: Polygon,
}

impl Quad {
    pub fn new(a: Point, b: Point, c: Point, d: Point) -> Result<Self, GeometryError> {
        let e = intersect_lines(&Line::through(&b, &c), &Line::through(&a, &d))?;
        let f = intersect_lines(&Line::through(&a, &b), &Line::through(&c, &d))?;
        let abe = ConvexRegion::from_vertices(vec![a.clone(), b.clone(), e.clone()])?;
        let ced = ConvexRegion::from_vertices(vec![c.clone(), e.clone(), d.clone()])?;
        let region = Polygon::new(vec![a.clone(), b.clone(), c.clone(), d.clone()])?;
        Ok(Quad {
            a,
            b,
            c,
            d,
            e,
            f,
            abe,
            ced,
            region,
        })
    }

    pub fn pieces(&self) -> [ConvexRegion; 2] {
        [self.abe.clone(), self.ced.clone()]
    }

    pub fn image(&self, m: &PlanarMap) -> Result<Quad, GeometryError> {
        Quad::new(m.apply(&self.a), m.apply(&self.b), m.apply(&self.c), m.apply(&self.d))
    }

    pub fn area(&self) -> Area {
        self.region.area()
    }
}

/// The system (X, f): f rotates ABE onto FDA and CED onto BFC.
#[derive(Debug, Clone)]
pub struct XSystem {
    pub quad: Quad,
    pub f: PiecewiseIsometry,
    pub f_inv: PiecewiseIsometry,
}

impl XSystem {
    pub fn new(a: Point, b: Point, c: Point, d: Point) -> Result<Self, GeometryError> {
        let q = Quad::new(a, b, c, d)?;
        let fa = PlanarMap::from_pairs(
            &[
                (q.a.clone(), q.f.clone()),
                (q.b.clone(), q.d.clone()),
                (q.e.clone(), q.a.clone()),
            ],
            MapKind::Direct,
        )?;
        let fb = PlanarMap::from_pairs(
            &[
                (q.c.clone(), q.b.clone()),
                (q.e.clone(), q.f.clone()),
                (q.d.clone(), q.c.clone()),
            ],
            MapKind::Direct,
        )?;
        if !fa.is_isometry() || !fb.is_isometry() {
            return Err(GeometryError::DegenerateMap);
        }
        let fda = q.abe.image(&fa);
        let bfc = q.ced.image(&fb);
        // the images tile X again
        let pieces = q.pieces();
        for img in [&fda, &bfc] {
            if img.covered_area(&pieces)? != img.area()? {
                return Err(GeometryError::BadPolygon("branch image leaves X"));
            }
        }
        let f = PiecewiseIsometry::new(vec![
            Branch {
                region: q.abe.clone(),
                map: fa.clone(),
                symbol: 'a',
            },
            Branch {
                region: q.ced.clone(),
                map: fb.clone(),
                symbol: 'b',
            },
        ]);
        let f_inv = PiecewiseIsometry::new(vec![
            Branch {
                region: fda,
                map: fa.inverse()?,
                symbol: 'a',
            },
            Branch {
                region: bfc,
                map: fb.inverse()?,
                symbol: 'b',
            },
        ]);
        Ok(XSystem {
            quad: q,
            f,
            f_inv,
        })
    }

    pub fn region(&self) -> Region {
        Region::Polygon(self.quad.region.clone())
    }

    pub fn f_a(&self) -> &PlanarMap {
        &self.f.branches()[0].map
    }

    pub fn f_b(&self) -> &PlanarMap {
        &self.f.branches()[1].map
    }

    /// f(p) and its symbol; `None` on ∂(ABE) ∪ ∂(CED) or outside X.
    pub fn step_f(&self, p: &Point) -> Option<(Point, char)> {
        self.f
            .step(p)
            .map(|(q, b)| (q, self.f.branches()[b].symbol))
    }

    pub fn step_f_inv(&self, p: &Point) -> Option<(Point, char)> {
        self.f_inv
            .step(p)
            .map(|(q, b)| (q, self.f_inv.branches()[b].symbol))
    }

    /// ρ_X code window; `Err(k)` if step k is undefined.
    pub fn code(&self, p: &Point, window: usize) -> Result<String, usize> {
        self.f.code(p, window)
    }

    pub fn frame(&self) -> Frame {
        Frame::around(self.quad.region.vertices())
    }

    pub fn sample(&self, count: usize, seed: u64) -> Vec<Point> {
        sample_in(&self.region(), &self.frame(), count, seed)
    }
}

/// The β polygons with labels Bⁱₖ.
#[derive(Debug, Clone, Serialize)]
pub struct Betas(pub Vec<LabeledPolygon>);

impl Betas {
    pub fn new(t: &Table) -> Result<Self, ComponentError> {
        (1..=4).map(|i| t.beta(i)).collect::<Result<_, _>>().map(Betas)
    }

    pub fn b(&self, i: usize, k: usize) -> Point {
        self.0[i - 1].label(k).clone()
    }
}

#[derive(Debug, Clone)]
pub struct ZSystems {
    pub betas: Betas,
    pub z: Polygon,
    pub z1: ConvexRegion,
    pub z2: Polygon,
    /// α′₄ = Q₄B⁴₉B⁴₈B⁴₇
    pub alpha4_prime: Polygon,
    pub x1: Quad,
    pub x2: Quad,
    pub t1: ReturnSystem,
    pub t2: ReturnSystem,
    /// first returns of X′ⱼa and X′ⱼb
    pub t1_pieces: [PieceReturn; 2],
    pub t2_pieces: [PieceReturn; 2],
    pub report: VerificationReport,
}

fn sum_areas<'a>(rs: impl IntoIterator<Item = &'a ConvexRegion>) -> Result<Area, GeometryError> {
    let mut s = Area::zero();
    for r in rs {
        s = &s + &r.area()?;
    }
    Ok(s)
}

/// Interior-disjoint `parts` inside `whole` (given by convex pieces) whose
/// areas add up to the area of `whole`.
fn tiles(
    parts: &[ConvexRegion],
    whole: &[ConvexRegion],
) -> Result<bool, GeometryError> {
    for p in parts {
        if p.covered_area(whole)? != p.area()? {
            return Ok(false);
        }
    }
    for (i, p) in parts.iter().enumerate() {
        for q in &parts[i + 1..] {
            if p.intersect(q)?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(sum_areas(parts)? == sum_areas(whole)?)
}

fn piece_witness(r: &Result<PieceReturn, TraceError>) -> serde_json::Value {
    match r {
        Ok(r) => json!({ "time": r.time, "path": r.path, "map": r.map }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// Assembles Z′, Z′₁, Z′₂, X′₁, X′₂ from β-vertex data and certifies the
/// piece structure of T′₁ and T′₂ exactly.
pub fn build_z_systems(t: &Table) -> Result<ZSystems, ReturnsError> {
    let betas = Betas::new(t)?;
    let b = |i, k| betas.b(i, k);
    let a1 = t.vertex(1).clone();
    let tp = t.alpha_pieces();
    let mut rep = VerificationReport::new("return-systems");

    let z = Polygon::new(vec![a1.clone(), b(4, 0), b(4, 9), b(4, 8), b(4, 7)])?;
    let z_fan = z
        .convex_fan()
        .ok_or(GeometryError::BadPolygon("Z' has no triangle fan"))?;
    let z1 = ConvexRegion::from_vertices(vec![t.p_point(1), t.p_point(3), t.q_point(3)])?;
    let z2 = Polygon::new(vec![b(3, 3), b(3, 2), b(3, 1), b(4, 0), b(4, 9), b(4, 8), b(4, 7)])?;
    let alpha4_prime = Polygon::new(vec![t.q_point(4), b(4, 9), b(4, 8), b(4, 7)])?;
    let alpha4_fan = alpha4_prime
        .convex_fan()
        .ok_or(GeometryError::BadPolygon("alpha'4 has no triangle fan"))?;
    let notch = ConvexRegion::from_vertices(vec![b(3, 1), b(4, 0), b(3, 2)])?;
    let alphas: Vec<ConvexRegion> = (1..=3).map(|j| t.alpha(j).clone()).collect();
    let beta = |i: usize| betas.0[i - 1].region.clone();

    let mut z_parts = alphas.clone();
    z_parts.extend(alpha4_fan.iter().cloned());
    rep.push(
        "Z.alpha-cover",
        "Z' = alpha1 u alpha2 u alpha3 u alpha'4",
        tiles(&z_parts, &z_fan)?,
        json!({ "area": z.area() }),
    );
    let t4 = &tp.branches()[3];
    let inside4 = tiles(&alpha4_fan, &alpha4_fan)?
        && alpha4_fan
            .iter()
            .all(|p| p.covered_area(std::slice::from_ref(&t4.region)).ok() == p.area().ok());
    let img = alpha4_prime.image(&t4.map);
    let want = Polygon::new(vec![b(3, 1), b(4, 0), b(4, 9), b(4, 8)])?;
    rep.push(
        "Z.alpha4-image",
        "alpha'4 lies in alpha4 and T'(alpha'4) = B3_1 B4_0 B4_9 B4_8",
        inside4 && img == want,
        json!({ "image": img }),
    );
    let mut z2_pieces = alpha4_fan.clone();
    z2_pieces.push(notch.clone());
    let notch_map = tp.branch_at(&notch.interior_point().unwrap()).map(|i| &tp.branches()[i]);
    let notch_img = notch_map.map(|br| notch.image(&br.map));
    let want = ConvexRegion::from_vertices(vec![b(3, 2), b(4, 7), b(3, 3)])?;
    let notch_ok = notch_map.is_some_and(|br| {
        notch.covered_area(std::slice::from_ref(&br.region)).ok() == notch.area().ok()
    }) && notch_img.as_ref().is_some_and(|i| i.same_polygon(&want));
    rep.push(
        "Z.notch-image",
        "T'(B3_1 B4_0 B3_2) = B3_2 B4_7 B3_3",
        notch_ok,
        json!({ "image": notch_img }),
    );
    let mut split = vec![z1.clone(), beta(3)];
    split.extend(z2_pieces.iter().cloned());
    rep.push(
        "Z.split",
        "Z' = Z'1 u beta3 u Z'2",
        tiles(&split, &z_fan)?,
        json!({ "z1": z1.area()?, "z2": z2.area() }),
    );
    rep.push(
        "Z.z2-pieces",
        "Z'2 = alpha'4 u B3_1 B4_0 B3_2",
        sum_areas(&z2_pieces)? == z2.area(),
        json!({}),
    );
    rep.push(
        "Z.z1-alphas",
        "Z'1 = alpha1 u alpha2",
        tiles(&alphas[..2], std::slice::from_ref(&z1))?,
        json!({}),
    );
    rep.push(
        "Z.disjoint",
        "Z'1 and Z'2 share no points",
        z2_pieces.iter().all(|p| {
            p.vertices()
                .unwrap()
                .iter()
                .all(|v| z1.locate(v) == Location::Outside)
        }) && z1
            .vertices()
            .unwrap()
            .iter()
            .all(|v| z2.locate(v) == Location::Outside),
        json!({}),
    );

    // X′₂ = B³₃B⁴₉B⁴₈B⁴₇ and its first-return structure
    let x2 = Quad::new(b(3, 3), b(4, 9), b(4, 8), b(4, 7))?;
    let target2 = x2.pieces();
    let ra = trace_piece(tp, &x2.abe, &target2, 2);
    let rb = trace_piece(tp, &x2.ced, &target2, 2);
    let o4 = t.fixed_point_o(4);
    rep.push(
        "X2.a",
        "T'2 = T'^2 on X'2a, rotation by 3pi/5 counterclockwise",
        matches!(&ra, Ok(r) if r.time == 2 && r.path == "43"
            && r.map.kind == MapKind::Direct && r.map.u == CycNum::zeta_pow(3)),
        piece_witness(&ra),
    );
    rep.push(
        "X2.b",
        "T'2 = T' on X'2b, rotation by pi/5 about O4",
        matches!(&rb, Ok(r) if r.time == 1 && r.path == "4"
            && r.map == PlanarMap::rotation(&o4, 1)),
        piece_witness(&rb),
    );
    rep.push(
        "X2.larger",
        "X'2a has the larger area",
        x2.abe.area()?.cmp(&x2.ced.area()?) == std::cmp::Ordering::Greater,
        json!({ "a": x2.abe.area()?, "b": x2.ced.area()? }),
    );
    if let Ok(r) = &ra {
        let parts = [x2.abe.clone(), r.orbit[1].clone(), x2.ced.clone()];
        rep.push(
            "X2.cover",
            "Z'2 = X'2a u T'(X'2a) u X'2b",
            tiles(&parts, &z2_pieces)?,
            json!({}),
        );
    }

    // X′₁ = B¹₁B²₀B²₉B²₈, named so that Δ₁ takes ABCD to it vertex by vertex
    let x1 = Quad::new(b(1, 1), b(2, 8), b(2, 9), b(2, 0))?;
    let target1 = x1.pieces();
    let ra1 = trace_piece(tp, &x1.abe, &target1, 5);
    let rb1 = trace_piece(tp, &x1.ced, &target1, 5);
    let o2 = t.fixed_point_o(2);
    rep.push(
        "X1.a",
        "T'1 = T'^5 on X'1a, rotation by 3pi/5 clockwise",
        matches!(&ra1, Ok(r) if r.time == 5 && r.path == "22211"
            && r.map.kind == MapKind::Direct && r.map.u == CycNum::zeta_pow(-3)),
        piece_witness(&ra1),
    );
    rep.push(
        "X1.b",
        "T'1 = T'^3 on X'1b, rotation by pi/5 clockwise about O2",
        matches!(&rb1, Ok(r) if r.time == 3 && r.path == "222"
            && r.map == PlanarMap::rotation(&o2, -1)),
        piece_witness(&rb1),
    );
    rep.push(
        "X1.larger",
        "X'1a has the larger area",
        x1.abe.area()?.cmp(&x1.ced.area()?) == std::cmp::Ordering::Greater,
        json!({ "a": x1.abe.area()?, "b": x1.ced.area()? }),
    );
    if let (Ok(a), Ok(bb)) = (&ra1, &rb1) {
        let mut parts = a.orbit.clone();
        parts.extend(bb.orbit.iter().cloned());
        parts.push(beta(1));
        parts.push(beta(2));
        rep.push(
            "X1.cover",
            "Z'1 = union of T'^j(X'1a), j < 5, T'^j(X'1b), j < 3, beta1, beta2",
            tiles(&parts, std::slice::from_ref(&z1))?,
            json!({}),
        );
    }
    rep.note(
        "X1.reading",
        "orbit of X'1b",
        json!("index read as X'1b, not X'2b: T'1 = T'^3 on X'1b and the cover of Z'1 uses T'^j(X'1b), j = 0, 1, 2"),
    );

    if !rep.ok() {
        return Err(ReturnsError::Check(Box::new(rep)));
    }
    let t1 = ReturnSystem {
        base: tp.clone(),
        target: Region::Polygon(x1.region.clone()),
        max_return: 5,
    };
    let t2 = ReturnSystem {
        base: tp.clone(),
        target: Region::Polygon(x2.region.clone()),
        max_return: 2,
    };
    Ok(ZSystems {
        betas,
        z,
        z1,
        z2,
        alpha4_prime,
        x1,
        x2,
        t1,
        t2,
        t1_pieces: [ra1.unwrap(), rb1.unwrap()],
        t2_pieces: [ra.unwrap(), rb.unwrap()],
        report: rep,
    })
}

/// X instantiated as X′₂ itself, with Δ₂ = identity and Δ₁ the mirror
/// similarity taking A, B, C, D to B¹₁, B²₈, B²₉, B²₀.
#[derive(Debug, Clone)]
pub struct AbstractX {
    pub x: XSystem,
    pub delta: [PlanarMap; 2],
}

impl AbstractX {
    pub fn delta(&self, j: usize) -> &PlanarMap {
        &self.delta[j - 1]
    }
}

pub fn build_abstract_x(z: &ZSystems) -> Result<AbstractX, GeometryError> {
    let q = &z.x2;
    let x = XSystem::new(q.a.clone(), q.b.clone(), q.c.clone(), q.d.clone())?;
    let b = |i, k| z.betas.b(i, k);
    let d1 = PlanarMap::from_pairs(
        &[
            (q.a.clone(), b(1, 1)),
            (q.b.clone(), b(2, 8)),
            (q.c.clone(), b(2, 9)),
            (q.d.clone(), b(2, 0)),
        ],
        MapKind::Mirror,
    )?;
    Ok(AbstractX {
        x,
        delta: [d1, PlanarMap::identity()],
    })
}

pub fn lift_code(j: usize, word: &str) -> String {
    let sub = match j {
        1 => Substitution::phi1(),
        2 => Substitution::phi2(),
        _ => panic!("lift index must be 1 or 2"),
    };
    sub.apply(word).expect("word over {a, b}")
}

/// For sampled p ∈ X: T′ⱼ(Δⱼ(p)) = Δⱼ(f(p)) with path φⱼ(symbol), and the
/// T′-code of Δⱼ(p) equals φⱼ of the ρ_X code over `window` symbols of p.
pub fn verify_delta_conjugacy(
    ax: &AbstractX,
    z: &ZSystems,
    j: usize,
    samples: usize,
    window: usize,
    seed: u64,
) -> SampleReport {
    use rayon::prelude::*;
    let d = ax.delta(j);
    let sys = if j == 1 { &z.t1 } else { &z.t2 };
    let points = ax.x.sample(samples, seed);
    let results = points
        .par_iter()
        .map(|p| {
            let code = ax.x.code(p, window).ok()?;
            let fp = ax.x.step_f(p)?.0;
            let q = d.apply(p);
            match sys.first_return(&q) {
                Ok(r) if r.point == d.apply(&fp) && r.path == lift_code(j, &code[..1]) => {}
                Ok(r) => return Some(Some(format!("return {} via {}", r.point, r.path))),
                Err(e) => return Some(Some(format!("return: {e}"))),
            }
            let want = lift_code(j, &code);
            match sys.base.code(&q, want.len()) {
                Ok(got) if got == want => Some(None),
                Ok(got) => Some(Some(format!("code {got} != lift {want}"))),
                Err(k) => Some(Some(format!("boundary at step {k}"))),
            }
        })
        .collect();
    collect_samples(&points, results)
}
