//! Exact plane geometry over field points.
//!
//! A point is a single field element (its complex embedding). Cross
//! products are not field elements themselves (they carry a factor i), so
//! every predicate works with `cross`, which is the true cross product
//! times the positive constant 4·sin(π/5) and is always real.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{sign_golden, CycNum, FieldError, Rational, Sign};

pub type Point = CycNum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("lines are parallel")]
    Parallel,
    #[error("clipping leaves an empty region")]
    EmptyClip,
    #[error("degenerate map (u = 0)")]
    DegenerateMap,
    #[error("map from pairs: pair {index} maps to {got}, expected {expected}")]
    InconsistentPair {
        index: usize,
        expected: Point,
        got: Point,
    },
    #[error("map from pairs needs two distinct source points")]
    TooFewPairs,
    #[error("operation needs a bounded region")]
    Unbounded,
    #[error("vertices do not form a {0}")]
    BadPolygon(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// ζ⁹ − ζ = −2i·sin(π/5).
fn im_factor() -> CycNum {
    CycNum::from_ints([1, -2, 1, -1])
}

/// Sign of a value that is real by construction.
pub(crate) fn sign(x: &CycNum) -> Sign {
    x.real_sign().expect("value is real by construction")
}

/// 4·sin(π/5)·(u × v), a real field element.
pub fn cross(u: &Point, v: &Point) -> CycNum {
    let w = u.conj() * v;
    (&w - w.conj()) * im_factor()
}

/// 2·(u · v), a real field element.
pub fn dot(u: &Point, v: &Point) -> CycNum {
    let w = u.conj() * v;
    &w + w.conj()
}

/// Sign of Im(w).
pub fn im_sign(w: &Point) -> Sign {
    sign(&((w - w.conj()) * im_factor()))
}

/// Orientation of the triangle abc: positive when counterclockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Sign {
    sign(&cross(&(b - a), &(c - a)))
}

/// Squared distance, a real field element.
pub fn dist_sq(a: &Point, b: &Point) -> CycNum {
    (b - a).norm_sq()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// Oriented line; the open left side is the associated halfplane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Line {
    pub origin: Point,
    pub dir: Point,
    #[serde(skip)]
    form: OnceLock<SideForm>,
}

impl PartialEq for Line {
    fn eq(&self, o: &Line) -> bool {
        self.origin == o.origin && self.dir == o.dir
    }
}

impl Eq for Line {}

impl std::hash::Hash for Line {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.origin.hash(h);
        self.dir.hash(h);
    }
}

/// cross(dir, p − origin) scaled by a positive integer, as X + Yφ with X, Y
/// integer linear forms in (numerators of p, denominator of p).
#[derive(Debug, Clone)]
struct SideForm {
    x: [BigInt; 4],
    x0: BigInt,
    y: [BigInt; 4],
    y0: BigInt,
}

impl SideForm {
    fn build(line: &Line) -> SideForm {
        let mut parts = Vec::with_capacity(5);
        for k in 0..4 {
            parts.push(cross(&line.dir, &CycNum::zeta_pow(k)));
        }
        parts.push(-cross(&line.dir, &line.origin));
        let quads: Vec<(Rational, Rational)> = parts
            .iter()
            .map(|c| c.to_quadratic().expect("cross is real"))
            .collect();
        let l = quads
            .iter()
            .fold(BigInt::one(), |acc, (u, v)| acc.lcm(u.denom()).lcm(v.denom()));
        let int = |r: &Rational| (r * &l).to_integer();
        SideForm {
            x: std::array::from_fn(|k| int(&quads[k].0)),
            y: std::array::from_fn(|k| int(&quads[k].1)),
            x0: int(&quads[4].0),
            y0: int(&quads[4].1),
        }
    }

    fn sign(&self, n: &[BigInt; 4], den: &BigInt) -> Sign {
        let mut x = &self.x0 * den;
        let mut y = &self.y0 * den;
        for k in 0..4 {
            x += &self.x[k] * &n[k];
            y += &self.y[k] * &n[k];
        }
        sign_golden(&x, &y)
    }
}

impl Line {
    pub fn new(origin: Point, dir: Point) -> Self {
        debug_assert!(!dir.is_zero());
        Line {
            origin,
            dir,
            form: OnceLock::new(),
        }
    }

    pub fn through(a: &Point, b: &Point) -> Self {
        Line::new(a.clone(), b - a)
    }

    pub fn side(&self, p: &Point) -> Sign {
        let (n, den) = p.integer_coords();
        self.side_coords(&n, &den)
    }

    /// Side of the point Σ nₖζᵏ / den.
    pub fn side_coords(&self, n: &[BigInt; 4], den: &BigInt) -> Sign {
        self.form.get_or_init(|| SideForm::build(self)).sign(n, den)
    }

    pub fn reversed(&self) -> Self {
        Line::new(self.origin.clone(), -&self.dir)
    }

    /// Line bounding the image of this line's left halfplane.
    pub fn image(&self, m: &PlanarMap) -> Self {
        let o = m.apply(&self.origin);
        let d = m.apply(&(&self.origin + &self.dir)) - &o;
        match m.kind {
            MapKind::Direct => Line::new(o, d),
            MapKind::Mirror => Line::new(o, -d),
        }
    }

    pub fn is_parallel(&self, other: &Line) -> bool {
        cross(&self.dir, &other.dir).is_zero()
    }

    /// Same underlying (unoriented) line.
    pub fn same_support(&self, other: &Line) -> bool {
        self.is_parallel(other) && other.side(&self.origin) == Sign::Zero
    }
}

pub fn intersect_lines(l1: &Line, l2: &Line) -> Result<Point, GeometryError> {
    let den = cross(&l1.dir, &l2.dir);
    if den.is_zero() {
        return Err(GeometryError::Parallel);
    }
    let s = cross(&(&l2.origin - &l1.origin), &l2.dir).div(&den)?;
    Ok(&l1.origin + &l1.dir * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Direct,
    Mirror,
}

/// z ↦ u·z + t (direct) or z ↦ u·conj(z) + t (mirror).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarMap {
    pub kind: MapKind,
    pub u: CycNum,
    pub t: CycNum,
}

impl PlanarMap {
    pub fn new(kind: MapKind, u: CycNum, t: CycNum) -> Self {
        PlanarMap { kind, u, t }
    }

    pub fn identity() -> Self {
        PlanarMap::new(MapKind::Direct, CycNum::one(), CycNum::zero())
    }

    pub fn translation(v: Point) -> Self {
        PlanarMap::new(MapKind::Direct, CycNum::one(), v)
    }

    /// Rotation by kπ/5 counterclockwise about `center`.
    pub fn rotation(center: &Point, k: i64) -> Self {
        let u = CycNum::zeta_pow(k);
        let t = center - &u * center;
        PlanarMap::new(MapKind::Direct, u, t)
    }

    pub fn central_symmetry(c: &Point) -> Self {
        PlanarMap::new(MapKind::Direct, CycNum::from_int(-1), c + c)
    }

    /// Reflection in the real axis.
    pub fn conjugation() -> Self {
        PlanarMap::new(MapKind::Mirror, CycNum::one(), CycNum::zero())
    }

    pub fn apply(&self, z: &Point) -> Point {
        match self.kind {
            MapKind::Direct => &self.u * z + &self.t,
            MapKind::Mirror => &self.u * z.conj() + &self.t,
        }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &PlanarMap) -> PlanarMap {
        match self.kind {
            MapKind::Direct => PlanarMap::new(
                other.kind,
                &self.u * &other.u,
                &self.u * &other.t + &self.t,
            ),
            MapKind::Mirror => {
                let kind = match other.kind {
                    MapKind::Direct => MapKind::Mirror,
                    MapKind::Mirror => MapKind::Direct,
                };
                PlanarMap::new(
                    kind,
                    &self.u * other.u.conj(),
                    &self.u * other.t.conj() + &self.t,
                )
            }
        }
    }

    pub fn inverse(&self) -> Result<PlanarMap, GeometryError> {
        let ui = self.u.inv().map_err(|_| GeometryError::DegenerateMap)?;
        Ok(match self.kind {
            MapKind::Direct => {
                let t = -(&ui * &self.t);
                PlanarMap::new(MapKind::Direct, ui, t)
            }
            MapKind::Mirror => {
                let t = -(&ui * &self.t).conj();
                PlanarMap::new(MapKind::Mirror, ui.conj(), t)
            }
        })
    }

    pub fn power(&self, n: u32) -> PlanarMap {
        (0..n).fold(PlanarMap::identity(), |acc, _| self.compose(&acc))
    }

    /// Squared similarity ratio u·conj(u).
    pub fn ratio_sq(&self) -> CycNum {
        self.u.norm_sq()
    }

    pub fn is_isometry(&self) -> bool {
        self.ratio_sq().is_one()
    }

    pub fn is_identity(&self) -> bool {
        self.kind == MapKind::Direct && self.u.is_one() && self.t.is_zero()
    }

    pub fn fixed_point(&self) -> Option<Point> {
        match self.kind {
            MapKind::Direct => {
                let den = CycNum::one() - &self.u;
                den.inv().ok().map(|d| &self.t * d)
            }
            MapKind::Mirror => {
                let den = CycNum::one() - self.ratio_sq();
                let num = &self.u * self.t.conj() + &self.t;
                den.inv().ok().map(|d| num * d)
            }
        }
    }

    /// Fits a map to the first two pairs and checks every further pair exactly.
    pub fn from_pairs(pairs: &[(Point, Point)], kind: MapKind) -> Result<PlanarMap, GeometryError> {
        let [(p1, q1), (p2, q2), ..] = pairs else {
            return Err(GeometryError::TooFewPairs);
        };
        if p1 == p2 {
            return Err(GeometryError::TooFewPairs);
        }
        let (s1, s2) = match kind {
            MapKind::Direct => (p1.clone(), p2.clone()),
            MapKind::Mirror => (p1.conj(), p2.conj()),
        };
        let u = (q2 - q1).div(&(&s2 - &s1))?;
        let t = q1 - &u * &s1;
        let m = PlanarMap::new(kind, u, t);
        for (index, (p, q)) in pairs.iter().enumerate().skip(2) {
            let got = m.apply(p);
            if &got != q {
                return Err(GeometryError::InconsistentPair {
                    index,
                    expected: q.clone(),
                    got,
                });
            }
        }
        Ok(m)
    }
}

/// Area divided by sin(π/5); this quotient is a real field element while
/// the area itself is not. Ratios and comparisons are unaffected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Area(CycNum);

impl Area {
    pub fn zero() -> Self {
        Area(CycNum::zero())
    }

    pub fn from_scaled(x: CycNum) -> Self {
        debug_assert!(x.is_real());
        Area(x)
    }

    pub fn scaled(&self) -> &CycNum {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        let sin = (std::f64::consts::PI / 5.0).sin();
        self.0.to_f64_pair().0 * sin
    }

    /// self / other as a real field element.
    pub fn ratio(&self, other: &Area) -> Result<CycNum, FieldError> {
        self.0.div(&other.0)
    }

    pub fn sign(&self) -> Sign {
        sign(&self.0)
    }

    pub fn cmp(&self, other: &Area) -> std::cmp::Ordering {
        self.0.cmp_real(&other.0).expect("areas are real")
    }

    pub fn times(&self, r: &CycNum) -> Area {
        Area(&self.0 * r)
    }
}

impl std::ops::Add for &Area {
    type Output = Area;
    fn add(self, o: &Area) -> Area {
        Area(&self.0 + &o.0)
    }
}

impl std::ops::Sub for &Area {
    type Output = Area;
    fn sub(self, o: &Area) -> Area {
        Area(&self.0 - &o.0)
    }
}

impl std::iter::Sum for Area {
    fn sum<I: Iterator<Item = Area>>(iter: I) -> Area {
        iter.fold(Area::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for Area {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Signed shoelace area of a closed vertex cycle.
pub fn signed_area(vs: &[Point]) -> Area {
    let n = vs.len();
    let mut acc = CycNum::zero();
    for i in 0..n {
        acc += &cross(&vs[i], &vs[(i + 1) % n]);
    }
    // acc = 8·sin(π/5)·area and 8·sin²(π/5) = 6 − 2φ
    let den = CycNum::from_int(6) - CycNum::phi() - CycNum::phi();
    Area(acc.div(&den).expect("nonzero"))
}

fn canonical_start(vs: &mut [Point]) {
    if let Some((i, _)) = vs.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)) {
        vs.rotate_left(i);
    }
}

fn dedup_cycle(vs: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(vs.len());
    for v in vs {
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Drops vertices lying on the segment joining their neighbours.
fn drop_collinear(mut vs: Vec<Point>) -> Vec<Point> {
    let mut changed = true;
    while changed && vs.len() >= 3 {
        changed = false;
        let n = vs.len();
        for i in 0..n {
            let prev = &vs[(i + n - 1) % n];
            let next = &vs[(i + 1) % n];
            if orient(prev, &vs[i], next) == Sign::Zero {
                vs.remove(i);
                changed = true;
                break;
            }
        }
    }
    vs
}

/// Open convex region: the intersection of the open left halfplanes of
/// its lines. Bounded regions also carry their vertices, counterclockwise
/// and starting from the smallest vertex in coefficient order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvexRegion {
    lines: Vec<Line>,
    vertices: Option<Vec<Point>>,
}

impl ConvexRegion {
    pub fn from_vertices(vs: Vec<Point>) -> Result<Self, GeometryError> {
        let mut vs = drop_collinear(dedup_cycle(vs));
        if vs.len() < 3 {
            return Err(GeometryError::BadPolygon("convex polygon"));
        }
        match signed_area(&vs).sign() {
            Sign::Zero => return Err(GeometryError::BadPolygon("convex polygon")),
            Sign::Negative => vs.reverse(),
            Sign::Positive => {}
        }
        let n = vs.len();
        for i in 0..n {
            if orient(&vs[i], &vs[(i + 1) % n], &vs[(i + 2) % n]) != Sign::Positive {
                return Err(GeometryError::BadPolygon("convex polygon"));
            }
        }
        canonical_start(&mut vs);
        let lines = (0..n).map(|i| Line::through(&vs[i], &vs[(i + 1) % n])).collect();
        Ok(ConvexRegion {
            lines,
            vertices: Some(vs),
        })
    }

    /// Region given only by halfplanes (possibly unbounded).
    pub fn from_lines(lines: Vec<Line>) -> Self {
        ConvexRegion {
            lines,
            vertices: None,
        }
    }

    /// Intersection of halfplanes, bounded if it lies well inside the
    /// decagon of the given radius around `center`, otherwise kept as lines.
    pub fn from_halfplanes(
        lines: Vec<Line>,
        center: &Point,
        radius: &Rational,
    ) -> Result<Self, GeometryError> {
        let bound = decagon(center, radius);
        let mut poly = bound.clone();
        for l in &lines {
            poly = poly.clip(l)?;
        }
        let touches = poly
            .vertices()
            .unwrap()
            .iter()
            .any(|v| bound.locate(v) != Location::Interior);
        if touches {
            Ok(ConvexRegion::from_lines(lines))
        } else {
            Ok(poly)
        }
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn vertices(&self) -> Option<&[Point]> {
        self.vertices.as_deref()
    }

    pub fn is_bounded(&self) -> bool {
        self.vertices.is_some()
    }

    pub fn locate(&self, p: &Point) -> Location {
        let (n, den) = p.integer_coords();
        self.locate_coords(&n, &den)
    }

    /// `locate` for the point Σ nₖζᵏ / den.
    pub fn locate_coords(&self, n: &[BigInt; 4], den: &BigInt) -> Location {
        let mut on_line = false;
        for l in &self.lines {
            match l.side_coords(n, den) {
                Sign::Negative => return Location::Outside,
                Sign::Zero => on_line = true,
                Sign::Positive => {}
            }
        }
        if on_line {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p) == Location::Interior
    }

    pub fn clip(&self, h: &Line) -> Result<ConvexRegion, GeometryError> {
        let vs = self.vertices.as_ref().ok_or(GeometryError::Unbounded)?;
        let signs: Vec<Sign> = vs.iter().map(|v| h.side(v)).collect();
        if signs.iter().all(|s| *s != Sign::Negative) {
            return Ok(self.clone());
        }
        let n = vs.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            if signs[i] != Sign::Negative {
                out.push(vs[i].clone());
            }
            let crossing = matches!(
                (signs[i], signs[j]),
                (Sign::Positive, Sign::Negative) | (Sign::Negative, Sign::Positive)
            );
            if crossing {
                let edge = Line::through(&vs[i], &vs[j]);
                out.push(intersect_lines(&edge, h)?);
            }
        }
        ConvexRegion::from_vertices(out).map_err(|_| GeometryError::EmptyClip)
    }

    pub fn area(&self) -> Result<Area, GeometryError> {
        let vs = self.vertices.as_ref().ok_or(GeometryError::Unbounded)?;
        Ok(signed_area(vs))
    }

    /// Intersection of a bounded region with any region; `None` when the
    /// interiors are disjoint.
    pub fn intersect(&self, other: &ConvexRegion) -> Result<Option<ConvexRegion>, GeometryError> {
        let mut poly = self.clone();
        for l in other.lines() {
            match poly.clip(l) {
                Ok(p) => poly = p,
                Err(GeometryError::EmptyClip) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        Ok(Some(poly))
    }

    /// Area of the part of self covered by interior-disjoint `pieces`.
    pub fn covered_area(&self, pieces: &[ConvexRegion]) -> Result<Area, GeometryError> {
        let mut total = Area::zero();
        for p in pieces {
            if let Some(c) = self.intersect(p)? {
                total = &total + &c.area()?;
            }
        }
        Ok(total)
    }

    pub fn image(&self, m: &PlanarMap) -> ConvexRegion {
        match &self.vertices {
            Some(vs) => {
                let img = vs.iter().map(|v| m.apply(v)).collect();
                ConvexRegion::from_vertices(img).expect("image of a convex polygon")
            }
            None => ConvexRegion::from_lines(self.lines.iter().map(|l| l.image(m)).collect()),
        }
    }

    /// The vertex average, strictly inside a bounded region.
    pub fn interior_point(&self) -> Option<Point> {
        let vs = self.vertices.as_ref()?;
        let mut s = CycNum::zero();
        for v in vs {
            s += v;
        }
        Some(s.scale(&Rational::new(1.into(), (vs.len() as i64).into())))
    }

    /// Equality of vertex sets.
    pub fn same_polygon(&self, other: &ConvexRegion) -> bool {
        match (&self.vertices, &other.vertices) {
            (Some(a), Some(b)) => {
                a.len() == b.len() && a.iter().collect::<HashSet<_>>() == b.iter().collect()
            }
            _ => false,
        }
    }

    /// Whether every vertex of `inner` lies in the closure of self.
    pub fn contains_region(&self, inner: &ConvexRegion) -> bool {
        inner
            .vertices()
            .is_some_and(|vs| vs.iter().all(|v| self.locate(v) != Location::Outside))
    }

    /// Regular polygon check: all sides and all diagonals to the next-but-one
    /// vertex have equal length.
    pub fn is_regular(&self) -> bool {
        let Some(vs) = &self.vertices else {
            return false;
        };
        let n = vs.len();
        let side = dist_sq(&vs[0], &vs[1]);
        let diag = dist_sq(&vs[0], &vs[2 % n]);
        (0..n).all(|i| {
            dist_sq(&vs[i], &vs[(i + 1) % n]) == side && dist_sq(&vs[i], &vs[(i + 2) % n]) == diag
        })
    }
}

#[derive(Serialize)]
struct RegionJson<'a> {
    bounded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<&'a [Point]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lines: Option<&'a [Line]>,
}

impl Serialize for ConvexRegion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RegionJson {
            bounded: self.is_bounded(),
            vertices: self.vertices(),
            lines: if self.is_bounded() {
                None
            } else {
                Some(&self.lines)
            },
        }
        .serialize(s)
    }
}

/// Regular decagon p + r·ζᵏ.
pub fn decagon(center: &Point, radius: &Rational) -> ConvexRegion {
    let vs = (0..10)
        .map(|k| center + CycNum::zeta_pow(k).scale(radius))
        .collect();
    ConvexRegion::from_vertices(vs).expect("decagon is convex")
}

/// Simple polygon, not necessarily convex, vertices counterclockwise.
#[derive(Debug, Clone, Serialize)]
pub struct Polygon {
    vertices: Vec<Point>,
    #[serde(skip)]
    edges: Vec<Line>,
    /// cross(1, v), proportional to Im(v)
    #[serde(skip)]
    heights: Vec<CycNum>,
}

impl PartialEq for Polygon {
    fn eq(&self, o: &Polygon) -> bool {
        self.vertices == o.vertices
    }
}

impl Eq for Polygon {}

impl std::hash::Hash for Polygon {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.vertices.hash(h);
    }
}

impl Polygon {
    pub fn new(vs: Vec<Point>) -> Result<Self, GeometryError> {
        let mut vs = drop_collinear(dedup_cycle(vs));
        if vs.len() < 3 {
            return Err(GeometryError::BadPolygon("simple polygon"));
        }
        match signed_area(&vs).sign() {
            Sign::Zero => return Err(GeometryError::BadPolygon("simple polygon")),
            Sign::Negative => vs.reverse(),
            Sign::Positive => {}
        }
        canonical_start(&mut vs);
        let n = vs.len();
        let edges = (0..n).map(|i| Line::through(&vs[i], &vs[(i + 1) % n])).collect();
        let heights = vs.iter().map(|v| cross(&CycNum::one(), v)).collect();
        Ok(Polygon {
            vertices: vs,
            edges,
            heights,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> Area {
        signed_area(&self.vertices)
    }

    pub fn image(&self, m: &PlanarMap) -> Polygon {
        Polygon::new(self.vertices.iter().map(|v| m.apply(v)).collect())
            .expect("image of a simple polygon")
    }

    /// Winding-number test with exact orientation predicates.
    pub fn locate(&self, p: &Point) -> Location {
        let (nc, den) = p.integer_coords();
        let hp = cross(&CycNum::one(), p);
        let below: Vec<bool> = self
            .heights
            .iter()
            .map(|h| sign(&(h - &hp)) != Sign::Positive)
            .collect();
        let n = self.vertices.len();
        let mut winding = 0i32;
        for i in 0..n {
            let j = (i + 1) % n;
            let o = self.edges[i].side_coords(&nc, &den);
            if o == Sign::Zero {
                let (a, b) = (&self.vertices[i], &self.vertices[j]);
                if sign(&dot(&(p - a), &(b - a))) != Sign::Negative
                    && sign(&dot(&(p - b), &(a - b))) != Sign::Negative
                {
                    return Location::Boundary;
                }
            }
            if below[i] && !below[j] && o == Sign::Positive {
                winding += 1;
            } else if !below[i] && below[j] && o == Sign::Negative {
                winding -= 1;
            }
        }
        if winding != 0 {
            Location::Interior
        } else {
            Location::Outside
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p) == Location::Interior
    }

    /// Triangles fanned from a vertex that sees the whole polygon, if any.
    /// A fan is accepted when its unsigned areas add up to the polygon's.
    pub fn convex_fan(&self) -> Option<Vec<ConvexRegion>> {
        let n = self.vertices.len();
        let total = self.area();
        (0..n).find_map(|apex| {
            let v = |k: usize| self.vertices[(apex + k) % n].clone();
            let fan: Option<Vec<ConvexRegion>> = (1..n - 1)
                .map(|k| ConvexRegion::from_vertices(vec![v(0), v(k), v(k + 1)]).ok())
                .collect();
            let fan = fan?;
            let sum: Area = fan.iter().map(|t| t.area().expect("bounded")).sum();
            (sum == total).then_some(fan)
        })
    }
}

/// Convex or simple polygonal region.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Region {
    Convex(ConvexRegion),
    Polygon(Polygon),
}

impl Region {
    pub fn locate(&self, p: &Point) -> Location {
        match self {
            Region::Convex(r) => r.locate(p),
            Region::Polygon(r) => r.locate(p),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p) == Location::Interior
    }

    pub fn image(&self, m: &PlanarMap) -> Region {
        match self {
            Region::Convex(r) => Region::Convex(r.image(m)),
            Region::Polygon(r) => Region::Polygon(r.image(m)),
        }
    }

    pub fn vertices(&self) -> Option<&[Point]> {
        match self {
            Region::Convex(r) => r.vertices(),
            Region::Polygon(r) => Some(r.vertices()),
        }
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Region::Convex(r) => r.serialize(s),
            Region::Polygon(r) => RegionJson {
                bounded: true,
                vertices: Some(r.vertices()),
                lines: None,
            }
            .serialize(s),
        }
    }
}
