//! The outer billiard outside the regular decagon with vertices Aₖ = ζᵏ,
//! and the induced map on the sector V′.

use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{CycNum, Rational};
use crate::dynamics::{Branch, ComponentError, Halt, OrbitRecord, PiecewiseIsometry};
use crate::geometry::{
    dist_sq, intersect_lines, ConvexRegion, Line, Location, PlanarMap, Point,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BilliardError {
    #[error("map undefined at {0}: boundary ray or inside the table")]
    Boundary(Point),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MapChoice {
    T,
    TInverse,
    TPrime,
}

/// A periodic polygon βᵢ with its vertex labels: `labels[k]` is the k-th
/// vertex counterclockwise from the anchor.
#[derive(Debug, Clone, Serialize)]
pub struct LabeledPolygon {
    pub region: ConvexRegion,
    pub labels: Vec<Point>,
}

impl LabeledPolygon {
    /// Numbers the vertices counterclockwise so that `labels[index] = anchor`.
    pub fn anchored(region: ConvexRegion, anchor: &Point, index: usize) -> Option<Self> {
        let vs = region.vertices()?;
        let n = vs.len();
        let at = vs.iter().position(|v| v == anchor)?;
        let start = (at + n - index % n) % n;
        let labels = (0..n).map(|k| vs[(start + k) % n].clone()).collect();
        Some(LabeledPolygon { region, labels })
    }

    pub fn label(&self, k: usize) -> &Point {
        &self.labels[k % self.labels.len()]
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    vertices: Vec<Point>,
    sectors: Vec<ConvexRegion>,
    reflected: Vec<ConvexRegion>,
    t: PiecewiseIsometry,
    t_inv: PiecewiseIsometry,
    t_prime: PiecewiseIsometry,
}

fn digit(i: usize) -> char {
    char::from_digit(i as u32, 10).expect("single digit")
}

impl Default for Table {
    fn default() -> Self {
        Self::new()
    }
}

impl Table {
    pub fn new() -> Self {
        let vertices: Vec<Point> = (0..10).map(CycNum::zeta_pow).collect();
        let a = |k: i64| vertices[k.rem_euclid(10) as usize].clone();
        let sectors: Vec<ConvexRegion> = (0..10i64)
            .map(|i| {
                ConvexRegion::from_lines(vec![
                    Line::new(a(i), a(i - 1) - a(i)),
                    Line::new(a(i), a(i + 1) - a(i)),
                ])
            })
            .collect();
        let symmetries: Vec<PlanarMap> = vertices.iter().map(PlanarMap::central_symmetry).collect();
        let reflected: Vec<ConvexRegion> = sectors
            .iter()
            .zip(&symmetries)
            .map(|(s, m)| s.image(m))
            .collect();
        let t = PiecewiseIsometry::new(
            (0..10)
                .map(|i| Branch {
                    region: sectors[i].clone(),
                    map: symmetries[i].clone(),
                    symbol: digit(i),
                })
                .collect(),
        );
        let t_inv = PiecewiseIsometry::new(
            (0..10)
                .map(|i| Branch {
                    region: reflected[i].clone(),
                    map: symmetries[i].clone(),
                    symbol: digit(i),
                })
                .collect(),
        );
        let v_prime = reflected[1].clone();
        // αᵢ = V′ ∩ V_{i+1}; T′ = Rⁱ ∘ (symmetry about A_{i+1}) there
        let t_prime = PiecewiseIsometry::new(
            (1..=5)
                .map(|i| {
                    let mut lines = v_prime.lines().to_vec();
                    lines.extend_from_slice(sectors[i + 1].lines());
                    let region = ConvexRegion::from_halfplanes(
                        lines,
                        &vertices[1],
                        &Rational::from_integer(64.into()),
                    )
                    .expect("sector pieces are nonempty");
                    let map = rotation_r(i as i64).compose(&symmetries[i + 1]);
                    Branch {
                        region,
                        map,
                        symbol: digit(i),
                    }
                })
                .collect(),
        );
        Table {
            vertices,
            sectors,
            reflected,
            t,
            t_inv,
            t_prime,
        }
    }

    pub fn vertex(&self, k: i64) -> &Point {
        &self.vertices[k.rem_euclid(10) as usize]
    }

    pub fn sector(&self, i: usize) -> &ConvexRegion {
        &self.sectors[i % 10]
    }

    pub fn reflected_sector(&self, i: usize) -> &ConvexRegion {
        &self.reflected[i % 10]
    }

    pub fn v_prime(&self) -> &ConvexRegion {
        &self.reflected[1]
    }

    pub fn map(&self, choice: MapChoice) -> &PiecewiseIsometry {
        match choice {
            MapChoice::T => &self.t,
            MapChoice::TInverse => &self.t_inv,
            MapChoice::TPrime => &self.t_prime,
        }
    }

    /// The five pieces αᵢ of the induced map (branch i − 1 is αᵢ).
    pub fn alpha_pieces(&self) -> &PiecewiseIsometry {
        &self.t_prime
    }

    pub fn alpha(&self, i: usize) -> &ConvexRegion {
        &self.t_prime.branches()[i - 1].region
    }

    /// T(p) and the sector index of p.
    pub fn step_t(&self, p: &Point) -> Result<(Point, usize), BilliardError> {
        self.t.step(p).ok_or_else(|| BilliardError::Boundary(p.clone()))
    }

    pub fn step_t_inv(&self, p: &Point) -> Result<(Point, usize), BilliardError> {
        self.t_inv
            .step(p)
            .ok_or_else(|| BilliardError::Boundary(p.clone()))
    }

    /// T′(p) and its code symbol v₀ ∈ 1..=5.
    pub fn step_t_prime(&self, p: &Point) -> Result<(Point, u8), BilliardError> {
        self.t_prime
            .step(p)
            .map(|(q, b)| (q, b as u8 + 1))
            .ok_or_else(|| BilliardError::Boundary(p.clone()))
    }

    /// The representative Rᵏ(p) ∈ int V′ with minimal k.
    pub fn r_prime(&self, p: &Point) -> Result<(Point, usize), BilliardError> {
        let mut q = p.clone();
        let r = CycNum::zeta_pow(-1);
        for k in 0..10 {
            match self.v_prime().locate(&q) {
                Location::Interior => return Ok((q, k)),
                Location::Boundary => return Err(BilliardError::Boundary(p.clone())),
                Location::Outside => q = &q * &r,
            }
        }
        Err(BilliardError::Boundary(p.clone()))
    }

    pub fn orbit(&self, p: &Point, choice: MapChoice, cap: usize) -> OrbitRecord {
        let mut rec = self.map(choice).orbit(p, cap);
        if choice == MapChoice::TPrime {
            // report the T-sector V_{i+1} of αᵢ
            for s in &mut rec.steps {
                s.sector += 2;
            }
        }
        rec
    }

    pub fn period(&self, p: &Point, choice: MapChoice, cap: usize) -> Halt {
        self.map(choice).period(p, cap)
    }

    pub fn component_of(
        &self,
        p: &Point,
        choice: MapChoice,
        cap: usize,
    ) -> Result<ConvexRegion, ComponentError> {
        self.map(choice).component_of(p, cap)
    }

    /// Oᵢ, intersection of the bisector of V′ with the bisector of V_{i+1}.
    pub fn fixed_point_o(&self, i: usize) -> Point {
        assert!((1..=4).contains(&i), "Oᵢ is defined for i = 1..4");
        let a1 = self.vertex(1);
        let bis_v = Line::new(a1.clone(), (a1 - self.vertex(0)) + (self.vertex(2) - a1));
        let j = i as i64 + 1;
        let aj = self.vertex(j);
        let bis_j = Line::new(
            aj.clone(),
            (self.vertex(j - 1) - aj) + (aj - self.vertex(j + 1)),
        );
        intersect_lines(&bis_v, &bis_j).expect("bisectors meet")
    }

    /// Pⱼ: line A_{j+1}Aⱼ meets line A₀A₁ (j = 2..4); P₁ = A₁.
    pub fn p_point(&self, j: i64) -> Point {
        if j == 1 {
            return self.vertex(1).clone();
        }
        let side = Line::through(self.vertex(j + 1), self.vertex(j));
        intersect_lines(&side, &Line::through(self.vertex(0), self.vertex(1)))
            .expect("not parallel for j = 2..4")
    }

    /// Qⱼ: line A_{j+1}Aⱼ meets line A₁A₂ (j = 2..5); Q₁ = A₁.
    pub fn q_point(&self, j: i64) -> Point {
        if j == 1 {
            return self.vertex(1).clone();
        }
        let side = Line::through(self.vertex(j + 1), self.vertex(j));
        intersect_lines(&side, &Line::through(self.vertex(1), self.vertex(2)))
            .expect("not parallel for j = 2..5")
    }

    /// βᵢ, the periodic component of Oᵢ under T′, with labelled vertices.
    pub fn beta(&self, i: usize) -> Result<LabeledPolygon, ComponentError> {
        let region = self.component_of(&self.fixed_point_o(i), MapChoice::TPrime, 20)?;
        let (anchor, index) = match i {
            1 => (self.p_point(2), 1),
            2 => (self.q_point(2), 7),
            3 => (self.p_point(3), 0),
            _ => (self.p_point(4), 0),
        };
        Ok(LabeledPolygon::anchored(region, &anchor, index).expect("anchor is a vertex"))
    }

    /// Squared distances |A₁Oᵢ|² and |A_{i+1}Oᵢ|².
    pub fn o_distances(&self, i: usize) -> (CycNum, CycNum) {
        let o = self.fixed_point_o(i);
        (
            dist_sq(self.vertex(1), &o),
            dist_sq(self.vertex(i as i64 + 1), &o),
        )
    }
}

/// Rᵏ: rotation by kπ/5 clockwise about the centre.
pub fn rotation_r(k: i64) -> PlanarMap {
    PlanarMap::rotation(&CycNum::zero(), -k)
}
