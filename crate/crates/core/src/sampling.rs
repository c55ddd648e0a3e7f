//! Seeded exact sampling of rational points.
//!
//! Sample i draws from its own ChaCha stream (seed, i), so results do not
//! depend on scheduling.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cyclotomic::{CycNum, Rational};
use crate::geometry::{Location, Point, Region};

/// Prime grid size: rational lines with small denominators never meet the grid.
pub const GRID: u64 = 1_000_003;

/// Parallelogram origin + s·e1 + t·e2 with 0 < s, t < 1.
#[derive(Debug, Clone)]
pub struct Frame {
    pub origin: Point,
    pub e1: Point,
    pub e2: Point,
}

impl Frame {
    pub fn new(origin: Point, e1: Point, e2: Point) -> Self {
        Frame { origin, e1, e2 }
    }

    /// A rhombus with sides along 1 and ζ² centred at the vertex average,
    /// large enough to cover every vertex.
    pub fn around(vertices: &[Point]) -> Self {
        let mut c = CycNum::zero();
        for v in vertices {
            c += v;
        }
        let c = c.scale(&Rational::new(1.into(), (vertices.len() as i64).into()));
        let (cx, cy) = c.to_f64_pair();
        let r = vertices
            .iter()
            .map(|v| {
                let (x, y) = v.to_f64_pair();
                (x - cx).hypot(y - cy)
            })
            .fold(0.0, f64::max);
        // inradius of the rhombus is R·sin(2π/5) > 0.95·R
        let eighths = (r * 1.25 * 8.0).ceil() as i64 + 1;
        let half = Rational::new(eighths.into(), 8.into());
        let e1 = CycNum::one().scale(&half);
        let e2 = CycNum::zeta_pow(2).scale(&half);
        Frame {
            origin: &c - &e1 - &e2,
            e1: e1.scale(&Rational::from_integer(2.into())),
            e2: e2.scale(&Rational::from_integer(2.into())),
        }
    }

    pub fn point(&self, s: &Rational, t: &Rational) -> Point {
        &self.origin + self.e1.scale(s) + self.e2.scale(t)
    }

    fn draw(&self, rng: &mut ChaCha8Rng, grid: u64) -> Point {
        let g = BigInt::from(grid);
        let s = Rational::new(BigInt::from(rng.random_range(1..grid)), g.clone());
        let t = Rational::new(BigInt::from(rng.random_range(1..grid)), g);
        self.point(&s, &t)
    }
}

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `count` points of the frame strictly inside `region` (rejection sampling).
pub fn sample_in(region: &Region, frame: &Frame, count: usize, seed: u64) -> Vec<Point> {
    sample_where(frame, count, seed, |p| region.locate(p) == Location::Interior)
}

/// `count` points of the frame accepted by `keep` (rejection sampling).
pub fn sample_where<F>(frame: &Frame, count: usize, seed: u64, keep: F) -> Vec<Point>
where
    F: Fn(&Point) -> bool + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            for _ in 0..1_000_000 {
                let p = frame.draw(&mut rng, GRID);
                if keep(&p) {
                    return p;
                }
            }
            panic!("sampling frame misses the region");
        })
        .collect()
}
