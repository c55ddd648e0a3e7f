//! Red/green partitions of X, exact areas, the contraction constant ε and
//! Monte-Carlo periodic fractions.
//!
//! A cell is stored symbolically: a base shape (ABE, CED or one of the ω)
//! and a lineage of tower indices. The cell with lineage [j, …] is
//! f^j(Γ(parent)), so regions and areas are recovered exactly on demand.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::CycNum;
use crate::dynamics::{Halt, PiecewiseIsometry};
use crate::geometry::{Area, ConvexRegion, GeometryError, PlanarMap, Point, Region};
use crate::returns::{trace_piece, XSystem};
use crate::sampling::{sample_in, Frame};
use crate::selfsim::Tower;

#[derive(Debug, Clone, Error)]
pub enum PartitionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("Γ({0}) does not return to Γ(X) as one piece: {1}")]
    Structure(char, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Abe,
    Ced,
    OmegaA,
    OmegaBa,
    OmegaAb,
}

impl Base {
    pub const ALL: [Base; 5] = [Base::Abe, Base::Ced, Base::OmegaA, Base::OmegaBa, Base::OmegaAb];
    const OMEGAS: [Base; 3] = [Base::OmegaA, Base::OmegaBa, Base::OmegaAb];
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell {
    pub color: Color,
    pub base: Base,
    /// outermost index first
    pub lineage: Vec<u8>,
    /// branch of f containing the cell
    pub symbol: char,
}

impl Cell {
    pub fn depth(&self) -> usize {
        self.lineage.len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ColoredPartition {
    pub level: usize,
    pub cells: Vec<Cell>,
}

impl ColoredPartition {
    pub fn count(&self, c: Color) -> usize {
        self.cells.iter().filter(|x| x.color == c).count()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Epsilon {
    pub value: CycNum,
    /// area(ω_a ∪ ω_ab) / area(ABE)
    pub abe_ratio: CycNum,
    /// area(ω_ba) / area(CED)
    pub ced_ratio: CycNum,
}

/// Images f^j∘Γ for one branch, j below its return time.
#[derive(Debug, Clone)]
struct TowerRow {
    path: Vec<char>,
    maps: Vec<PlanarMap>,
}

#[derive(Debug, Clone)]
pub struct Partitioner {
    pub x: XSystem,
    bases: Vec<(ConvexRegion, char, Area)>,
    rows: [TowerRow; 2],
    lambda_sq: CycNum,
}

fn row_index(s: char) -> usize {
    usize::from(s == 'b')
}

impl Partitioner {
    /// Certifies the towers of Γ(ABE) and Γ(CED) by exact piece tracing.
    pub fn new(tower: &Tower) -> Result<Self, PartitionError> {
        let x = tower.x().clone();
        let g = &tower.gamma;
        let om = &tower.omegas;
        let targets = g.image.pieces();
        let mut rows = Vec::new();
        for br in x.f.branches() {
            let r = trace_piece(&x.f, &br.region.image(&g.map), &targets, 7)
                .map_err(|e| PartitionError::Structure(br.symbol, e.to_string()))?;
            let mut maps = Vec::with_capacity(r.time);
            let mut m = g.map.clone();
            for c in r.path.chars() {
                maps.push(m.clone());
                m = x.f.branches()[row_index(c)].map.compose(&m);
            }
            rows.push(TowerRow {
                path: r.path.chars().collect(),
                maps,
            });
        }
        let symbol_of = |r: &ConvexRegion| -> Result<char, PartitionError> {
            let a = r.area()?;
            for br in x.f.branches() {
                if r.covered_area(std::slice::from_ref(&br.region))? == a {
                    return Ok(br.symbol);
                }
            }
            Err(GeometryError::BadPolygon("ω straddles the branches").into())
        };
        let mut bases = Vec::new();
        for r in [&x.quad.abe, &x.quad.ced, &om.omega_a, &om.omega_ba, &om.omega_ab] {
            bases.push((r.clone(), symbol_of(r)?, r.area()?));
        }
        let rows: [TowerRow; 2] = rows.try_into().expect("two branches");
        Ok(Partitioner {
            x,
            bases,
            rows,
            lambda_sq: g.lambda_sq.clone(),
        })
    }

    pub fn base_region(&self, b: Base) -> &ConvexRegion {
        &self.bases[b as usize].0
    }

    pub fn base_area(&self, b: Base) -> &Area {
        &self.bases[b as usize].2
    }

    fn root(&self, base: Base, color: Color) -> Cell {
        Cell {
            color,
            base,
            lineage: vec![],
            symbol: self.bases[base as usize].1,
        }
    }

    /// Level 1: ABE and CED, both green.
    pub fn initial(&self) -> ColoredPartition {
        ColoredPartition {
            level: 1,
            cells: vec![self.root(Base::Abe, Color::Green), self.root(Base::Ced, Color::Green)],
        }
    }

    /// Every cell is contracted by Γ and spread over its return tower; the
    /// three ω are adjoined in red.
    pub fn step(&self, p: &ColoredPartition) -> ColoredPartition {
        let mut cells: Vec<Cell> = p
            .cells
            .par_iter()
            .flat_map_iter(|c| {
                let row = &self.rows[row_index(c.symbol)];
                row.path.iter().enumerate().map(move |(j, &s)| {
                    let mut lineage = Vec::with_capacity(c.lineage.len() + 1);
                    lineage.push(j as u8);
                    lineage.extend_from_slice(&c.lineage);
                    Cell {
                        color: c.color,
                        base: c.base,
                        lineage,
                        symbol: s,
                    }
                })
            })
            .collect();
        cells.extend(Base::OMEGAS.iter().map(|&b| self.root(b, Color::Red)));
        cells.par_sort();
        ColoredPartition {
            level: p.level + 1,
            cells,
        }
    }

    pub fn level(&self, l: usize) -> ColoredPartition {
        assert!(l >= 1, "levels start at 1");
        let mut p = self.initial();
        while p.level < l {
            p = self.step(&p);
        }
        p
    }

    /// The similarity carrying the base shape onto the cell.
    pub fn map_of(&self, c: &Cell) -> PlanarMap {
        let mut sym = self.bases[c.base as usize].1;
        let mut m = PlanarMap::identity();
        for &j in c.lineage.iter().rev() {
            let row = &self.rows[row_index(sym)];
            m = row.maps[j as usize].compose(&m);
            sym = row.path[j as usize];
        }
        debug_assert_eq!(sym, c.symbol);
        m
    }

    pub fn region(&self, c: &Cell) -> ConvexRegion {
        self.base_region(c.base).image(&self.map_of(c))
    }

    /// area(base)·λ^{2·depth}
    pub fn cell_area(&self, c: &Cell) -> Area {
        let mut r = CycNum::one();
        for _ in 0..c.depth() {
            r = &r * &self.lambda_sq;
        }
        self.base_area(c.base).times(&r)
    }

    /// Exact (red, green) totals.
    pub fn areas(&self, p: &ColoredPartition) -> (Area, Area) {
        let mut census: BTreeMap<(Color, Base, usize), u64> = BTreeMap::new();
        for c in &p.cells {
            *census.entry((c.color, c.base, c.depth())).or_default() += 1;
        }
        let mut red = Area::zero();
        let mut green = Area::zero();
        let mut pow = vec![CycNum::one()];
        for (&(color, base, depth), &n) in &census {
            while pow.len() <= depth {
                let next = pow.last().unwrap() * &self.lambda_sq;
                pow.push(next);
            }
            let a = self
                .base_area(base)
                .times(&(&pow[depth] * CycNum::from_int(n as i64)));
            match color {
                Color::Red => red = &red + &a,
                Color::Green => green = &green + &a,
            }
        }
        (red, green)
    }

    pub fn total_area(&self) -> Area {
        self.base_area(Base::Abe) + self.base_area(Base::Ced)
    }

    pub fn epsilon(&self) -> Epsilon {
        let abe_ratio = (self.base_area(Base::OmegaA) + self.base_area(Base::OmegaAb))
            .ratio(self.base_area(Base::Abe))
            .expect("ABE has positive area");
        let ced_ratio = self
            .base_area(Base::OmegaBa)
            .ratio(self.base_area(Base::Ced))
            .expect("CED has positive area");
        let value = match abe_ratio.cmp_real(&ced_ratio).expect("real ratios") {
            Ordering::Greater => ced_ratio.clone(),
            _ => abe_ratio.clone(),
        };
        Epsilon {
            value,
            abe_ratio,
            ced_ratio,
        }
    }

    /// Pairs of cells whose interiors meet (float bounding boxes prefilter,
    /// exact clipping decides).
    pub fn overlaps(&self, p: &ColoredPartition) -> Result<Vec<(usize, usize)>, GeometryError> {
        let regions: Vec<ConvexRegion> = p.cells.par_iter().map(|c| self.region(c)).collect();
        let boxes: Vec<[f64; 4]> = regions
            .iter()
            .map(|r| {
                let mut b = [f64::MAX, f64::MAX, f64::MIN, f64::MIN];
                for v in r.vertices().expect("bounded") {
                    let (x, y) = v.to_f64_pair();
                    b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
                }
                b
            })
            .collect();
        let eps = 1e-9;
        let pairs: Vec<(usize, usize)> = (0..regions.len())
            .flat_map(|i| (i + 1..regions.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                let (a, b) = (&boxes[i], &boxes[j]);
                a[0] < b[2] + eps && b[0] < a[2] + eps && a[1] < b[3] + eps && b[1] < a[3] + eps
            })
            .collect();
        let hits: Vec<Result<Option<(usize, usize)>, GeometryError>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                Ok(match regions[i].intersect(&regions[j])? {
                    Some(c) if !c.area()?.scaled().is_zero() => Some((i, j)),
                    _ => None,
                })
            })
            .collect();
        hits.into_iter().filter_map(Result::transpose).collect()
    }

    /// Cells not inside the closure of their branch triangle.
    pub fn misplaced(&self, p: &ColoredPartition) -> Result<Vec<usize>, GeometryError> {
        let res: Vec<Result<Option<usize>, GeometryError>> = p
            .cells
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let r = self.region(c);
                let br = &self.x.f.branches()[row_index(c.symbol)].region;
                let inside = r.covered_area(std::slice::from_ref(br))? == r.area()?;
                Ok((!inside).then_some(i))
            })
            .collect();
        res.into_iter().filter_map(Result::transpose).collect()
    }
}

pub fn red_set(p: &ColoredPartition) -> BTreeSet<&Cell> {
    p.cells.iter().filter(|c| c.color == Color::Red).collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FractionReport {
    pub samples: usize,
    pub periodic: usize,
    pub boundary: usize,
    pub undecided: usize,
    pub periods: BTreeMap<u64, usize>,
}

impl FractionReport {
    pub fn periodic_fraction(&self) -> f64 {
        self.periodic as f64 / self.samples as f64
    }

    pub fn boundary_fraction(&self) -> f64 {
        self.boundary as f64 / self.samples as f64
    }
}

/// Classifies seeded exact samples of `region` as periodic (exact return
/// within `cap`), boundary or undecided.
pub fn periodic_fraction(
    map: &PiecewiseIsometry,
    region: &Region,
    frame: &Frame,
    samples: usize,
    cap: usize,
    seed: u64,
) -> FractionReport {
    let points: Vec<Point> = sample_in(region, frame, samples, seed);
    let halts = map.periods(&points, cap);
    let mut rep = FractionReport {
        samples,
        ..Default::default()
    };
    for h in halts {
        match h {
            Halt::Period { step } => {
                rep.periodic += 1;
                *rep.periods.entry(step as u64).or_default() += 1;
            }
            Halt::Boundary { .. } => rep.boundary += 1,
            Halt::Cap { .. } => rep.undecided += 1,
        }
    }
    rep
}

/// `periodic_fraction` for (X, f).
pub fn periodic_fraction_x(x: &XSystem, samples: usize, cap: usize, seed: u64) -> FractionReport {
    periodic_fraction(&x.f, &x.region(), &x.frame(), samples, cap, seed)
}
