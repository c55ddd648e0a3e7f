//! Piecewise isometries: stepping, orbits, periods and periodic components.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::Rational;
use crate::geometry::{decagon, ConvexRegion, GeometryError, Location, PlanarMap, Point};
use crate::lattice::{common_denominator, map_denominator, Lattice, LatticeStep};

#[derive(Debug, Clone)]
pub struct Branch {
    pub region: ConvexRegion,
    pub map: PlanarMap,
    pub symbol: char,
}

/// Finitely many open convex pieces, each moved by its own map. The map is
/// undefined off the union of the open pieces.
#[derive(Debug, Clone)]
pub struct PiecewiseIsometry {
    branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComponentError {
    #[error("no exact return within {0} steps")]
    NotPeriodic(usize),
    #[error("orbit hits a boundary at step {0}")]
    Boundary(usize),
    #[error("component does not fit in the search window")]
    Unbounded,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Halt {
    /// Step `step` is undefined (the point after `step` steps is a boundary point).
    Boundary { step: usize },
    /// The point after `step` steps equals the start; `step` is minimal.
    Period { step: usize },
    /// No decision after `step` steps.
    Cap { step: usize },
}

impl Halt {
    pub fn period(&self) -> Option<usize> {
        match self {
            Halt::Period { step } => Some(*step),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitStep {
    pub z: Point,
    pub sector: usize,
    pub symbol: char,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitRecord {
    pub start: Point,
    pub halt: Halt,
    pub steps: Vec<OrbitStep>,
}

impl OrbitRecord {
    pub fn code(&self) -> String {
        self.steps.iter().map(|s| s.symbol).collect()
    }
}

impl PiecewiseIsometry {
    pub fn new(branches: Vec<Branch>) -> Self {
        PiecewiseIsometry { branches }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Index of the branch whose open region contains `p`.
    pub fn branch_at(&self, p: &Point) -> Option<usize> {
        let (n, den) = p.integer_coords();
        self.branches
            .iter()
            .position(|b| b.region.locate_coords(&n, &den) == Location::Interior)
    }

    pub fn step(&self, p: &Point) -> Option<(Point, usize)> {
        let i = self.branch_at(p)?;
        Some((self.branches[i].map.apply(p), i))
    }

    /// Symbols of the first `n` steps, or the index of the undefined step.
    pub fn code(&self, p: &Point, n: usize) -> Result<String, usize> {
        let mut q = p.clone();
        let mut out = String::with_capacity(n);
        for k in 0..n {
            let (next, b) = self.step(&q).ok_or(k)?;
            out.push(self.branches[b].symbol);
            q = next;
        }
        Ok(out)
    }

    /// Iterates exactly, recording every step.
    pub fn orbit(&self, p: &Point, cap: usize) -> OrbitRecord {
        let mut steps = Vec::new();
        let mut q = p.clone();
        let halt = loop {
            if steps.len() >= cap {
                break Halt::Cap { step: steps.len() };
            }
            let Some((next, b)) = self.step(&q) else {
                break Halt::Boundary { step: steps.len() };
            };
            steps.push(OrbitStep {
                z: q,
                sector: b,
                symbol: self.branches[b].symbol,
            });
            if &next == p {
                break Halt::Period { step: steps.len() };
            }
            q = next;
        };
        OrbitRecord {
            start: p.clone(),
            halt,
            steps,
        }
    }

    fn lattice_for(&self, n: &BigInt) -> Option<Lattice> {
        Lattice::build(
            self.branches.iter().map(|b| (b.region.lines(), &b.map)),
            n,
        )
    }

    /// Exact period detection for many points. Uses the integer lattice when
    /// possible and exact rationals otherwise (or after an overflow).
    pub fn periods(&self, points: &[Point], cap: usize) -> Vec<Halt> {
        let n = common_denominator(points).lcm(&map_denominator(self.branches.iter().map(|b| &b.map)));
        let lattice = self.lattice_for(&n);
        points
            .par_iter()
            .map(|p| match &lattice {
                Some(l) => self.period_lattice(l, p, cap),
                None => self.period_exact(p, p.clone(), 0, cap),
            })
            .collect()
    }

    pub fn period(&self, p: &Point, cap: usize) -> Halt {
        self.periods(std::slice::from_ref(p), cap)[0]
    }

    fn period_lattice(&self, l: &Lattice, p: &Point, cap: usize) -> Halt {
        let start = l.encode(p).expect("denominator divides the lattice scale");
        let mut c = start;
        let mut hint = 0;
        for k in 0..cap {
            let prev = c;
            match l.step(&mut c, hint) {
                Ok(LatticeStep::Moved(b)) => hint = b,
                Ok(LatticeStep::Undefined) => return Halt::Boundary { step: k },
                Err(_) => return self.period_exact(p, l.decode(&prev), k, cap),
            }
            if c == start {
                return Halt::Period { step: k + 1 };
            }
        }
        Halt::Cap { step: cap }
    }

    fn period_exact(&self, p: &Point, mut q: Point, done: usize, cap: usize) -> Halt {
        for k in done..cap {
            match self.step(&q) {
                None => return Halt::Boundary { step: k },
                Some((next, _)) => q = next,
            }
            if &q == p {
                return Halt::Period { step: k + 1 };
            }
        }
        Halt::Cap { step: cap }
    }

    /// The periodic component of `p`: the set of points sharing its code,
    /// an open convex polygon. Halfplanes of the visited branches are pulled
    /// back to the start until the accumulated map is the identity.
    pub fn component_of(&self, p: &Point, cap: usize) -> Result<ConvexRegion, ComponentError> {
        // rough size of p to centre a search window
        let (x, y) = p.to_f64_pair();
        let base = (x.abs() + y.abs() + 1.0).ceil().to_i64().unwrap_or(1) * 4;
        let mut radius = Rational::from_integer(base.into());
        for _ in 0..6 {
            let window = decagon(p, &radius);
            let mut poly = window.clone();
            let mut q = p.clone();
            let mut g = PlanarMap::identity();
            let mut closed = false;
            for k in 0..cap.saturating_mul(10) {
                let b = self.branch_at(&q).ok_or(ComponentError::Boundary(k))?;
                let br = &self.branches[b];
                let back = g.inverse()?;
                for line in br.region.lines() {
                    poly = poly.clip(&line.image(&back))?;
                }
                g = br.map.compose(&g);
                q = br.map.apply(&q);
                if &q == p && g.is_identity() {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err(ComponentError::NotPeriodic(cap));
            }
            let touches = poly
                .vertices()
                .unwrap()
                .iter()
                .any(|v| window.locate(v) != Location::Interior);
            if !touches {
                return Ok(poly);
            }
            radius = radius * Rational::from_integer(16.into());
        }
        Err(ComponentError::Unbounded)
    }
}

/// Period under T of a point whose induced orbit has period m and whose
/// induced code symbols sum to s.
pub fn per_from_induced(m: u64, s: u64) -> u64 {
    m * 10 / s.gcd(&10)
}

