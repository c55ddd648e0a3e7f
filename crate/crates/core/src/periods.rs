//! Period calculus: closed-form abelianization families, the period
//! formula and the period sets B and B₂ with enumeration and membership.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::billiard::{MapChoice, Table};
use crate::cyclotomic::{CycNum, Rational};
use crate::dynamics::Halt;
use crate::geometry::{decagon, Location, Point, Region};
use crate::report::Counterexample;
use crate::returns::{build_abstract_x, build_z_systems};
use crate::sampling::{sample_in, sample_where, Frame};
use crate::selfsim::omega_components;
use crate::symbolic::{abelianize, AbelVector, INDUCED};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("family {0} is not integral at k = {1}, l = {2}")]
    NonIntegral(String, u64, u32),
    #[error("family {0} is negative at k = {1}, l = {2}")]
    Negative(String, u64, u32),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("period of the zero vector")]
    ZeroVector,
    #[error("expected a vector over five symbols, got {0}")]
    Length(usize),
}

/// M_σ^l·(x, y) by the eigen-decomposition closed form.
pub fn m_sigma_power(l: u32, x: &Rational, y: &Rational) -> (Rational, Rational) {
    let seven = Rational::from_integer(7.into());
    let sign = Rational::from_integer(if l % 2 == 0 { 1 } else { -1 }.into());
    let six = Rational::from_integer(num_traits::pow(BigInt::from(6), l as usize));
    let p = (x - y * Rational::from_integer(3.into())) / &seven * sign;
    let q = (y + x * Rational::from_integer(2.into())) / &seven * six;
    let three = Rational::from_integer(3.into());
    let two = Rational::from_integer(2.into());
    (&p + &q * three, &q - p * two)
}

/// 10·s/gcd(10, t) with s = Σwᵢ and t = Σ i·wᵢ.
pub fn period_from_abel(w: &AbelVector) -> Result<u64, PeriodError> {
    if w.0.len() != 5 {
        return Err(PeriodError::Length(w.0.len()));
    }
    let s = w.sum();
    if s == 0 {
        return Err(PeriodError::ZeroVector);
    }
    let t = w.weighted();
    Ok(10 * s / num_integer::gcd(10, t))
}

type Eval = Arc<dyn Fn(i128, i128, i128) -> Vec<i128> + Send + Sync>;

/// A (k, l)-indexed family of abelianization vectors, stored as 7·w.
#[derive(Clone)]
pub struct Family {
    pub id: String,
    pub dim: usize,
    pub uses_k: bool,
    pub uses_l: bool,
    eval: Eval,
}

impl std::fmt::Debug for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Family")
            .field("id", &self.id)
            .field("dim", &self.dim)
            .finish()
    }
}

fn pow6(l: u32) -> Result<i128, PeriodError> {
    6i128.checked_pow(l).ok_or(PeriodError::Overflow)
}

fn alt(l: u32) -> i128 {
    if l % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Family {
    fn new<F>(id: &str, dim: usize, uses_k: bool, uses_l: bool, eval: F) -> Self
    where
        F: Fn(i128, i128, i128) -> Vec<i128> + Send + Sync + 'static,
    {
        Family {
            id: id.to_string(),
            dim,
            uses_k,
            uses_l,
            eval: Arc::new(eval),
        }
    }

    fn unit(id: &str, i: usize) -> Self {
        Family::new(id, 5, false, false, move |_, _, _| {
            let mut v = vec![0; 5];
            v[i] = 7;
            v
        })
    }

    /// Embeds a pair into coordinates 4 and 5.
    fn pr25(&self) -> Family {
        let inner = self.eval.clone();
        Family {
            id: format!("pr25({})", self.id),
            dim: 5,
            uses_k: self.uses_k,
            uses_l: self.uses_l,
            eval: Arc::new(move |k, s, e| {
                let w = inner(k, s, e);
                vec![0, 0, 0, w[0], w[1]]
            }),
        }
    }

    pub fn evaluate(&self, k: u64, l: u32) -> Result<AbelVector, PeriodError> {
        let raw = (self.eval)(k as i128, pow6(l)?, alt(l));
        let mut out = Vec::with_capacity(raw.len());
        for x in raw {
            if x % 7 != 0 {
                return Err(PeriodError::NonIntegral(self.id.clone(), k, l));
            }
            if x < 0 {
                return Err(PeriodError::Negative(self.id.clone(), k, l));
            }
            out.push((x / 7) as u64);
        }
        Ok(AbelVector(out))
    }
}

pub fn generators_cx() -> Vec<Family> {
    vec![
        Family::new("X1", 2, false, true, |_, s, e| vec![6 * s + e, 2 * s - 2 * e]),
        Family::new("X2", 2, false, true, |_, s, e| vec![9 * s - 2 * e, 3 * s + 4 * e]),
    ]
}

pub fn generators_cz() -> Vec<Family> {
    vec![
        Family::new("Z1", 5, false, true, |_, s, e| {
            vec![12 * s + 2 * e, 24 * s - 3 * e, 0, 0, 0]
        }),
        Family::new("Z2", 5, false, true, |_, s, e| {
            vec![18 * s - 4 * e, 36 * s + 6 * e, 0, 0, 0]
        }),
        Family::new("Z3", 5, false, true, |_, s, e| {
            vec![0, 0, 6 * s + e, 8 * s - e, 0]
        }),
        Family::new("Z4", 5, false, true, |_, s, e| {
            vec![0, 0, 9 * s - 2 * e, 12 * s + 2 * e, 0]
        }),
        Family::unit("e1", 0),
        Family::unit("e2", 1),
        Family::unit("e3", 2),
        Family::unit("e4", 3),
    ]
}

/// The two-symbol families whose pr25 images complete C_V′.
pub fn generators_cvo() -> Vec<Family> {
    let lin = |id: &str, a: i128| {
        Family::new(id, 2, true, false, move |k, _, _| vec![7 * a, 7 * (1 + a * k)])
    };
    vec![
        Family::new("V1", 2, true, true, |k, s, e| {
            vec![120 * s - e, (36 + 120 * k) * s - (k + 1) * e]
        }),
        Family::new("V2", 2, true, true, |k, s, e| {
            vec![180 * s + 2 * e, (54 + 180 * k) * s + 2 * (k + 1) * e]
        }),
        Family::new("V3", 2, true, true, |k, s, e| {
            vec![20 * s + e, (14 + 20 * k) * s + k * e]
        }),
        Family::new("V4", 2, true, true, |k, s, e| {
            vec![30 * s - 2 * e, (21 + 30 * k) * s - 2 * k * e]
        }),
        lin("V5", 4),
        lin("V6", 3),
        lin("V7", 2),
        lin("V8", 1),
    ]
}

pub fn generators_cv() -> Vec<Family> {
    let mut out = generators_cz();
    out.extend(generators_cvo().iter().map(Family::pr25));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesSource {
    InB,
    ListedB2,
    DoubledDerived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SeriesKind {
    /// f/7·((a0 + a1·k)·6^l + (b0 + b1·k)·(−1)^l)
    Exponential { f: i128, a0: i128, a1: i128, b0: i128, b1: i128 },
    /// c0 + c1·k
    Linear { c0: i128, c1: i128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesFormula {
    pub id: String,
    pub expr: String,
    pub kind: SeriesKind,
    pub uses_k: bool,
    pub uses_l: bool,
    pub source: SeriesSource,
    pub parity: Parity,
}

fn k_term(c0: i128, c1: i128) -> String {
    match (c0, c1) {
        (_, 0) => c0.to_string(),
        (0, _) => format!("{c1}k"),
        _ => format!("({c0}+{c1}k)"),
    }
}

fn describe(kind: &SeriesKind) -> String {
    match *kind {
        SeriesKind::Linear { c0, c1: 0 } => c0.to_string(),
        SeriesKind::Linear { c0, c1 } => format!("{c1}k+{c0}"),
        SeriesKind::Exponential { f, a0, a1: 0, b0: 0, b1: 0 } if (f * a0) % 7 == 0 => {
            format!("{}*6^l", f * a0 / 7)
        }
        SeriesKind::Exponential { f, a0, a1, b0, b1 } => {
            let a = k_term(a0, a1);
            let (sign, b) = if b0 <= 0 && b1 <= 0 {
                ('-', k_term(-b0, -b1))
            } else {
                ('+', k_term(b0, b1))
            };
            if b == "1" {
                format!("{f}/7*({a}*6^l{sign}(-1)^l)")
            } else {
                format!("{f}/7*({a}*6^l{sign}{b}*(-1)^l)")
            }
        }
    }
}

impl SeriesFormula {
    fn new(id: &str, kind: SeriesKind, source: SeriesSource) -> Self {
        let (uses_k, uses_l) = match kind {
            SeriesKind::Linear { c1, .. } => (c1 != 0, false),
            SeriesKind::Exponential { a1, b1, .. } => (a1 != 0 || b1 != 0, true),
        };
        let mut s = SeriesFormula {
            id: id.to_string(),
            expr: describe(&kind),
            kind,
            uses_k,
            uses_l,
            source,
            parity: Parity::Even,
        };
        let v = s.value(0, 0).expect("series defined at the origin");
        s.parity = if v % 2 == 0 { Parity::Even } else { Parity::Odd };
        s
    }

    pub fn value(&self, k: u64, l: u32) -> Result<u64, PeriodError> {
        let k = k as i128;
        let n = match self.kind {
            SeriesKind::Linear { c0, c1 } => c1
                .checked_mul(k)
                .and_then(|x| x.checked_add(c0))
                .ok_or(PeriodError::Overflow)?,
            SeriesKind::Exponential { f, .. } => {
                let (a, b) = self.coefficients(l)?;
                let inner = b
                    .checked_mul(k)
                    .and_then(|x| x.checked_add(a))
                    .and_then(|x| x.checked_mul(f))
                    .ok_or(PeriodError::Overflow)?;
                if inner % 7 != 0 {
                    return Err(PeriodError::NonIntegral(self.id.clone(), k as u64, l));
                }
                inner / 7
            }
        };
        if n <= 0 {
            return Err(PeriodError::Negative(self.id.clone(), k as u64, l));
        }
        u64::try_from(n).map_err(|_| PeriodError::Overflow)
    }

    /// For fixed l the inner bracket is A + B·k; returns (A, B).
    fn coefficients(&self, l: u32) -> Result<(i128, i128), PeriodError> {
        match self.kind {
            SeriesKind::Linear { c0, c1 } => Ok((c0, c1)),
            SeriesKind::Exponential { a0, a1, b0, b1, .. } => {
                let s = pow6(l)?;
                let e = alt(l);
                let m = |x: i128| x.checked_mul(s).ok_or(PeriodError::Overflow);
                Ok((m(a0)? + b0 * e, m(a1)? + b1 * e))
            }
        }
    }

    fn factor(&self) -> (i128, i128) {
        match self.kind {
            SeriesKind::Linear { .. } => (1, 1),
            SeriesKind::Exponential { f, .. } => (f, 7),
        }
    }

    fn doubled(&self) -> SeriesFormula {
        let kind = match self.kind {
            SeriesKind::Linear { c0, c1 } => SeriesKind::Linear {
                c0: 2 * c0,
                c1: 2 * c1,
            },
            SeriesKind::Exponential { f, a0, a1, b0, b1 } => SeriesKind::Exponential {
                f: 2 * f,
                a0,
                a1,
                b0,
                b1,
            },
        };
        SeriesFormula::new(&format!("2x{}", self.id), kind, SeriesSource::DoubledDerived)
    }
}

fn exp(f: i128, a0: i128, a1: i128, b0: i128, b1: i128) -> SeriesKind {
    SeriesKind::Exponential { f, a0, a1, b0, b1 }
}

fn lin(c0: i128, c1: i128) -> SeriesKind {
    SeriesKind::Linear { c0, c1 }
}

/// Periods of periodic components.
pub fn series_b() -> Vec<SeriesFormula> {
    let kinds = [
        exp(5, 36, 0, -1, 0),
        exp(5, 54, 0, 2, 0),
        exp(20, 7, 0, 0, 0),
        lin(30, 0),
        exp(90, 7, 0, 0, 0),
        lin(10, 0),
        lin(5, 0),
        exp(20, 78, 120, -1, -1),
        exp(5, 276, 240, -3, -2),
        exp(5, 234, 180, 4, 2),
        exp(5, 34, 40, 1, 2),
        // odd-k branch of V3: 34 + 20·(2m+1) = 54 + 40m
        exp(10, 54, 40, 2, 2),
        lin(70, 40),
        exp(5, 306, 180, 2, 2),
        lin(50, 40),
        lin(40, 60),
        lin(35, 30),
        lin(30, 20),
        lin(20, 20),
        lin(15, 10),
    ];
    kinds
        .iter()
        .enumerate()
        .map(|(i, k)| SeriesFormula::new(&format!("B{}", i + 1), *k, SeriesSource::InB))
        .collect()
}

/// Periods of periodic points: B, the extra series listed for B₂, and the
/// doubles of the odd series of B.
pub fn series_b2() -> Vec<SeriesFormula> {
    let b = series_b();
    let listed = [
        exp(10, 36, 0, -1, 0),
        exp(10, 276, 240, -3, -2),
        exp(10, 34, 40, 1, 2),
        lin(70, 60),
        lin(30, 20),
    ];
    let mut out = b.clone();
    out.extend(
        listed
            .iter()
            .enumerate()
            .map(|(i, k)| SeriesFormula::new(&format!("L{}", i + 1), *k, SeriesSource::ListedB2)),
    );
    out.extend(b.iter().filter(|s| s.parity == Parity::Odd).map(SeriesFormula::doubled));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    pub series: String,
    pub k: u64,
    pub l: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodEntry {
    pub period: u64,
    pub in_b: bool,
    pub listed_b2: bool,
    pub doubled_derived: bool,
    pub witnesses: Vec<Witness>,
}

fn l_bound(limit: u64) -> u32 {
    ((7.0 * limit as f64).ln() / 6f64.ln()).floor() as u32 + 2
}

/// Every value ≤ limit of every series, with its (series, k, l) witnesses.
pub fn enumerate_series(series: &[SeriesFormula], limit: u64) -> BTreeMap<u64, PeriodEntry> {
    let per_series: Vec<Vec<(u64, Witness, SeriesSource)>> = series
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            let lmax = if s.uses_l { l_bound(limit) } else { 0 };
            for l in 0..=lmax {
                let kmax = if s.uses_k { limit } else { 0 };
                for k in 0..=kmax {
                    let v = match s.value(k, l) {
                        Ok(v) => v,
                        Err(PeriodError::Overflow) => break,
                        Err(e) => panic!("series {}: {e}", s.id),
                    };
                    if v > limit {
                        // values increase with k
                        break;
                    }
                    let w = Witness {
                        series: s.id.clone(),
                        k,
                        l,
                    };
                    out.push((v, w, s.source));
                }
            }
            out
        })
        .collect();
    let mut map: BTreeMap<u64, PeriodEntry> = BTreeMap::new();
    for (v, w, src) in per_series.into_iter().flatten() {
        let e = map.entry(v).or_insert_with(|| PeriodEntry {
            period: v,
            in_b: false,
            listed_b2: false,
            doubled_derived: false,
            witnesses: Vec::new(),
        });
        match src {
            SeriesSource::InB => e.in_b = true,
            SeriesSource::ListedB2 => e.listed_b2 = true,
            SeriesSource::DoubledDerived => e.doubled_derived = true,
        }
        e.witnesses.push(w);
    }
    for e in map.values_mut() {
        e.witnesses.sort();
    }
    map
}

/// B₂ up to `limit`.
pub fn enumerate_periods(limit: u64) -> BTreeMap<u64, PeriodEntry> {
    enumerate_series(&series_b2(), limit)
}

/// Witnesses of n in the given series, solving for k exactly at each l.
pub fn witnesses(series: &[SeriesFormula], n: u64) -> Vec<Witness> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let target = n as i128;
    for s in series {
        let (num, den) = s.factor();
        // n = num/den·(A + B·k)
        let scaled = target * den;
        if scaled % num != 0 {
            continue;
        }
        let rhs = scaled / num;
        let lmax = if s.uses_l { l_bound(n) } else { 0 };
        for l in 0..=lmax {
            let Ok((a, b)) = s.coefficients(l) else {
                break;
            };
            let k = if b == 0 {
                if a != rhs {
                    continue;
                }
                0
            } else {
                let d = rhs - a;
                if d < 0 || d % b != 0 {
                    continue;
                }
                d / b
            };
            if !s.uses_k && k != 0 {
                continue;
            }
            out.push(Witness {
                series: s.id.clone(),
                k: k as u64,
                l,
            });
        }
    }
    out.sort();
    out
}

/// Membership in B₂.
pub fn is_period(n: u64) -> bool {
    !witnesses(&series_b2(), n).is_empty()
}

#[derive(Debug, Clone)]
pub struct CrossSpec {
    pub samples: usize,
    pub cap: usize,
    pub seed: u64,
    /// Samples are drawn from a rhombus of this half-width about the centre.
    pub radius: i64,
    /// Extra samples inside the T′-component of each anchor.
    pub near: usize,
    /// Largest T-period whose induced code is abelianized and compared.
    pub abel_limit: u64,
}

impl Default for CrossSpec {
    fn default() -> Self {
        CrossSpec {
            samples: 1000,
            cap: 1_000_000,
            seed: 1,
            radius: 4,
            near: 20,
            abel_limit: 1000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnchorObservation {
    pub name: String,
    pub point: Point,
    pub period: Option<u64>,
    pub near: BTreeMap<u64, usize>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CrossReport {
    pub samples: usize,
    pub periodic: usize,
    pub boundary: usize,
    pub undecided: usize,
    pub observed: BTreeMap<u64, usize>,
    pub outside_b2: Vec<Counterexample>,
    pub abel_checked: usize,
    pub abel_mismatch: Vec<Counterexample>,
    pub anchors: Vec<AnchorObservation>,
}

impl CrossReport {
    pub fn ok(&self) -> bool {
        self.outside_b2.is_empty() && self.abel_mismatch.is_empty()
    }

    /// Periods seen anywhere, with anchors and their neighbourhoods.
    pub fn all_observed(&self) -> BTreeSet<u64> {
        let mut s: BTreeSet<u64> = self.observed.keys().copied().collect();
        for a in &self.anchors {
            s.extend(a.period);
            s.extend(a.near.keys().copied());
        }
        s
    }
}

/// O₁..O₄ and O_ba, all inside V′.
pub fn default_anchors(t: &Table) -> Vec<(String, Point)> {
    let mut out: Vec<(String, Point)> = (1..=4)
        .map(|i| (format!("O{i}"), t.fixed_point_o(i)))
        .collect();
    let o_ba = build_z_systems(t)
        .ok()
        .and_then(|z| build_abstract_x(&z).ok())
        .and_then(|ax| omega_components(&ax.x).ok())
        .map(|om| om.o_ba);
    if let Some(p) = o_ba {
        out.push(("O_ba".to_string(), p));
    }
    out
}

/// Induced period of p computed through the abelianized T′ code.
fn induced_abel_period(t: &Table, p: &Point, cap: usize) -> Option<u64> {
    let (q, _) = t.r_prime(p).ok()?;
    let rec = t.orbit(&q, MapChoice::TPrime, cap);
    rec.halt.period()?;
    let w = abelianize(&rec.code(), &INDUCED).ok()?;
    period_from_abel(&w).ok()
}

fn tally(t: &Table, points: &[Point], cap: usize) -> Vec<Halt> {
    t.map(MapChoice::T).periods(points, cap)
}

/// Simulates T-orbits of seeded points around the table and checks every
/// exact period against B₂.
pub fn cross_validate(t: &Table, spec: &CrossSpec, anchors: &[(String, Point)]) -> CrossReport {
    let table = decagon(&CycNum::zero(), &Rational::one());
    let r = Rational::from_integer(spec.radius.into());
    let frame = Frame::around(
        &(0..10)
            .map(|k| CycNum::zeta_pow(k).scale(&r))
            .collect::<Vec<_>>(),
    );
    let points = sample_where(&frame, spec.samples, spec.seed, |p| {
        table.locate(p) == Location::Outside
    });
    let halts = tally(t, &points, spec.cap);
    let mut rep = CrossReport {
        samples: points.len(),
        ..Default::default()
    };
    let mut small = Vec::new();
    for (p, h) in points.iter().zip(&halts) {
        match h {
            Halt::Period { step } => {
                rep.periodic += 1;
                let n = *step as u64;
                *rep.observed.entry(n).or_default() += 1;
                if !is_period(n) {
                    rep.outside_b2.push(Counterexample {
                        point: p.clone(),
                        detail: format!("period {n}"),
                    });
                }
                if n <= spec.abel_limit {
                    small.push((p.clone(), n));
                }
            }
            Halt::Boundary { .. } => rep.boundary += 1,
            Halt::Cap { .. } => rep.undecided += 1,
        }
    }
    let cap = spec.abel_limit as usize;
    let mismatches: Vec<Option<Counterexample>> = small
        .par_iter()
        .map(|(p, n)| match induced_abel_period(t, p, cap) {
            Some(m) if m == *n => None,
            got => Some(Counterexample {
                point: p.clone(),
                detail: format!("T-period {n}, abelianized {got:?}"),
            }),
        })
        .collect();
    rep.abel_checked = small.len();
    rep.abel_mismatch = mismatches.into_iter().flatten().collect();

    for (i, (name, p)) in anchors.iter().enumerate() {
        let period = tally(t, std::slice::from_ref(p), spec.cap)[0].period().map(|n| n as u64);
        let mut obs = AnchorObservation {
            name: name.clone(),
            point: p.clone(),
            period,
            near: BTreeMap::new(),
        };
        if let Some(n) = period {
            if !is_period(n) {
                rep.outside_b2.push(Counterexample {
                    point: p.clone(),
                    detail: format!("anchor {name} has period {n}"),
                });
            }
        }
        if spec.near > 0 {
            if let Ok(comp) = t.component_of(p, MapChoice::TPrime, 1000) {
                let vs = comp.vertices().map(<[Point]>::to_vec).unwrap_or_default();
                let region = Region::Convex(comp);
                let seed = spec.seed ^ (0x5eed_0000 + i as u64);
                let qs = sample_in(&region, &Frame::around(&vs), spec.near, seed);
                let hs = tally(t, &qs, spec.cap);
                for (q, h) in qs.iter().zip(&hs) {
                    let Some(n) = h.period() else { continue };
                    let n = n as u64;
                    *obs.near.entry(n).or_default() += 1;
                    if !is_period(n) {
                        rep.outside_b2.push(Counterexample {
                            point: q.clone(),
                            detail: format!("period {n} near {name}"),
                        });
                    }
                }
            }
        }
        rep.anchors.push(obs);
    }
    rep
}
