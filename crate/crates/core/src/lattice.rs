//! Integer fast path for long orbits.
//!
//! Points with coefficient denominators dividing N are stored as the
//! integer vector N·c. When every branch map has an integral linear part
//! and N·t is integral, a branch step is an integer affine map and every
//! halfplane test becomes the sign of X + Yφ for integer linear forms X, Y.
//! All arithmetic is checked; overflow aborts the fast path and callers
//! resume with exact rationals from the last good point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::cyclotomic::{CycNum, Rational};
use crate::geometry::{cross, Line, MapKind, PlanarMap, Point};

pub type Coords = [i128; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

#[derive(Debug, Clone)]
struct Form {
    x: Coords,
    x0: i128,
    y: Coords,
    y0: i128,
}

#[derive(Debug, Clone)]
struct LatticeBranch {
    forms: Vec<Form>,
    m: [[i128; 4]; 4],
    off: Coords,
}

/// A piecewise isometry compiled for a fixed denominator.
#[derive(Debug, Clone)]
pub struct Lattice {
    n: BigInt,
    branches: Vec<LatticeBranch>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeStep {
    Moved(usize),
    Undefined,
}

fn to_i128(x: &BigInt) -> Option<i128> {
    x.to_i128()
}

fn integral(r: &Rational) -> Option<i128> {
    if r.is_integer() {
        to_i128(r.numer())
    } else {
        None
    }
}

fn dot(a: &Coords, c: &Coords) -> Result<i128, Overflow> {
    let mut s: i128 = 0;
    for i in 0..4 {
        let t = a[i].checked_mul(c[i]).ok_or(Overflow)?;
        s = s.checked_add(t).ok_or(Overflow)?;
    }
    Ok(s)
}

/// Sign of p + q√5 in integers.
fn sign_sqrt5(p: i128, q: i128) -> Result<i8, Overflow> {
    let sp = p.signum() as i8;
    let sq = q.signum() as i8;
    if sp == 0 {
        return Ok(sq);
    }
    if sq == 0 || sp == sq {
        return Ok(sp);
    }
    let p2 = p.checked_mul(p).ok_or(Overflow)?;
    let q2 = q
        .checked_mul(q)
        .and_then(|v| v.checked_mul(5))
        .ok_or(Overflow)?;
    let mag = (p2 - q2).signum() as i8;
    Ok(if sp > 0 { mag } else { -mag })
}

impl Form {
    fn build(line: &Line, n: &BigInt) -> Option<Form> {
        let nr = Rational::from_integer(n.clone());
        let mut us = Vec::with_capacity(5);
        for k in 0..4 {
            us.push(cross(&line.dir, &CycNum::zeta_pow(k)).to_quadratic().ok()?);
        }
        let (ua, va) = cross(&line.dir, &(-&line.origin)).to_quadratic().ok()?;
        us.push((ua * &nr, va * &nr));
        let l = us.iter().fold(BigInt::one(), |acc, (u, v)| {
            acc.lcm(u.denom()).lcm(v.denom())
        });
        let lr = Rational::from_integer(l);
        let mut x = [0i128; 4];
        let mut y = [0i128; 4];
        for k in 0..4 {
            x[k] = integral(&(&us[k].0 * &lr))?;
            y[k] = integral(&(&us[k].1 * &lr))?;
        }
        let x0 = integral(&(&us[4].0 * &lr))?;
        let y0 = integral(&(&us[4].1 * &lr))?;
        Some(Form { x, x0, y, y0 })
    }

    fn sign(&self, c: &Coords) -> Result<i8, Overflow> {
        let xv = dot(&self.x, c)?.checked_add(self.x0).ok_or(Overflow)?;
        let yv = dot(&self.y, c)?.checked_add(self.y0).ok_or(Overflow)?;
        // X + Yφ = ((2X + Y) + Y√5)/2
        let p = xv
            .checked_mul(2)
            .and_then(|v| v.checked_add(yv))
            .ok_or(Overflow)?;
        sign_sqrt5(p, yv)
    }
}

fn linear_part(map: &PlanarMap) -> Option<[[i128; 4]; 4]> {
    let mut m = [[0i128; 4]; 4];
    for k in 0..4 {
        let basis = CycNum::zeta_pow(k as i64);
        let img = match map.kind {
            MapKind::Direct => &map.u * &basis,
            MapKind::Mirror => &map.u * basis.conj(),
        };
        for (row, c) in img.coeffs().iter().enumerate() {
            m[row][k] = integral(c)?;
        }
    }
    Some(m)
}

impl Lattice {
    /// Compiles the branches for denominator `n`; `None` when some map is
    /// not integral at this scale.
    pub fn build<'a>(
        branches: impl IntoIterator<Item = (&'a [Line], &'a PlanarMap)>,
        n: &BigInt,
    ) -> Option<Lattice> {
        let nr = Rational::from_integer(n.clone());
        let mut out = Vec::new();
        for (lines, map) in branches {
            let forms = lines
                .iter()
                .map(|l| Form::build(l, n))
                .collect::<Option<Vec<_>>>()?;
            let m = linear_part(map)?;
            let t = map.t.scale(&nr);
            let mut off = [0i128; 4];
            for (o, c) in off.iter_mut().zip(t.coeffs()) {
                *o = integral(c)?;
            }
            out.push(LatticeBranch { forms, m, off });
        }
        Some(Lattice {
            n: n.clone(),
            branches: out,
        })
    }

    pub fn denominator(&self) -> &BigInt {
        &self.n
    }

    pub fn encode(&self, p: &Point) -> Option<Coords> {
        let s = p.scale(&Rational::from_integer(self.n.clone()));
        let mut c = [0i128; 4];
        for (o, x) in c.iter_mut().zip(s.coeffs()) {
            *o = integral(x)?;
        }
        Some(c)
    }

    pub fn decode(&self, c: &Coords) -> Point {
        let next = c.map(|x| Rational::new(BigInt::from(x), self.n.clone()));
        CycNum::new(next)
    }

    fn contains(&self, b: usize, c: &Coords) -> Result<bool, Overflow> {
        for f in &self.branches[b].forms {
            if f.sign(c)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Applies one step in place; `hint` is tried first.
    pub fn step(&self, c: &mut Coords, hint: usize) -> Result<LatticeStep, Overflow> {
        let nb = self.branches.len();
        for j in 0..nb {
            let b = (hint + j) % nb;
            if self.contains(b, c)? {
                let br = &self.branches[b];
                let mut next = [0i128; 4];
                for (row, slot) in next.iter_mut().enumerate() {
                    *slot = dot(&br.m[row], c)?
                        .checked_add(br.off[row])
                        .ok_or(Overflow)?;
                }
                *c = next;
                return Ok(LatticeStep::Moved(b));
            }
        }
        Ok(LatticeStep::Undefined)
    }
}

/// Common denominator of several points.
pub fn common_denominator<'a>(points: impl IntoIterator<Item = &'a Point>) -> BigInt {
    points
        .into_iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator()))
}

/// Denominator needed for the translations of `maps`.
pub fn map_denominator<'a>(maps: impl IntoIterator<Item = &'a PlanarMap>) -> BigInt {
    maps.into_iter()
        .fold(BigInt::one(), |acc, m| acc.lcm(&m.t.denominator()))
}

