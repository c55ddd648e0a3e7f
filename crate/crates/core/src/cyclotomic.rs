//! Arithmetic in Q(ζ), ζ = exp(iπ/5).
//!
//! Elements are stored over the basis {1, ζ, ζ², ζ³}; ζ satisfies
//! ζ⁴ = ζ³ − ζ² + ζ − 1, so every product is reduced eagerly and the
//! representation is unique.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not real: {0}")]
    NotReal(CycNum),
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

/// Coefficients of ζ^k, k = 0..9, in the reduced basis.
const ZETA_POWERS: [[i8; 4]; 10] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [-1, 1, -1, 1],
    [-1, 0, 0, 0],
    [0, -1, 0, 0],
    [0, 0, -1, 0],
    [0, 0, 0, -1],
    [1, -1, 1, -1],
];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNum {
    c: [Rational; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn of<T: Signed>(x: &T) -> Sign {
        if x.is_positive() {
            Sign::Positive
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl CycNum {
    pub fn new(c: [Rational; 4]) -> Self {
        CycNum { c }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        CycNum {
            c: c.map(|x| Rational::from_integer(BigInt::from(x))),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints([0; 4])
    }

    pub fn one() -> Self {
        Self::from_ints([1, 0, 0, 0])
    }

    pub fn from_rational(r: Rational) -> Self {
        let z = Rational::zero();
        CycNum {
            c: [r, z.clone(), z.clone(), z],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ints([n, 0, 0, 0])
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(ratio(n, d))
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(k: i64) -> Self {
        let row = ZETA_POWERS[k.rem_euclid(10) as usize];
        Self::from_ints(row.map(i64::from))
    }

    /// The golden ratio ζ + ζ⁻¹.
    pub fn phi() -> Self {
        Self::from_ints([1, 0, 1, -1])
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    pub fn is_real(&self) -> bool {
        self.c[1].is_zero() && (&self.c[2] + &self.c[3]).is_zero()
    }

    /// Image under the automorphism ζ ↦ ζ^k (k coprime to 10).
    pub fn galois(&self, k: i64) -> Self {
        let mut out = [0i64; 4].map(|_| Rational::zero());
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let row = ZETA_POWERS[(j as i64 * k).rem_euclid(10) as usize];
            for (o, &r) in out.iter_mut().zip(row.iter()) {
                match r {
                    1 => *o += cj,
                    -1 => *o -= cj,
                    _ => {}
                }
            }
        }
        CycNum { c: out }
    }

    pub fn conj(&self) -> Self {
        self.galois(9)
    }

    /// a · conj(a), a real element.
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let others = &(&self.galois(3) * &self.galois(7)) * &self.galois(9);
        let norm = self * &others;
        debug_assert!(norm.c[1..].iter().all(Zero::is_zero));
        Ok(others.scale(&norm.c[0].recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNum {
            c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r],
        }
    }

    /// For a real element, the pair (u, v) with value u + vφ.
    pub fn to_quadratic(&self) -> Result<(Rational, Rational), FieldError> {
        if !self.is_real() {
            return Err(FieldError::NotReal(self.clone()));
        }
        let v = self.c[2].clone();
        Ok((&self.c[0] - &v, v))
    }

    pub fn real_sign(&self) -> Result<Sign, FieldError> {
        let (u, v) = self.to_quadratic()?;
        // u + vφ = (p + q√5)/2 with p = 2u + v, q = v
        let p = &u + &u + &v;
        Ok(sign_plus_sqrt5(&p, &v))
    }

    /// Compares two real elements.
    pub fn cmp_real(&self, other: &Self) -> Result<std::cmp::Ordering, FieldError> {
        Ok(match (self - other).real_sign()? {
            Sign::Negative => std::cmp::Ordering::Less,
            Sign::Zero => std::cmp::Ordering::Equal,
            Sign::Positive => std::cmp::Ordering::Greater,
        })
    }

    /// Integer numerators over the common denominator: self = Σ nₖζᵏ / den.
    pub fn integer_coords(&self) -> ([BigInt; 4], BigInt) {
        let den = self.denominator();
        let n = std::array::from_fn(|k| {
            let c = &self.c[k];
            c.numer() * (&den / c.denom())
        });
        (n, den)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator(&self) -> BigInt {
        self.c
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Rigorous enclosure of the real and imaginary parts.
    pub fn approx(&self, precision_bits: u32) -> ComplexInterval {
        let bits = precision_bits.clamp(8, 4096);
        let sqrt5 = sqrt_bounds(&Rational::from_integer(5.into()), bits);
        // Re = c0 + c1·φ/2 + (c2 − c3)(φ − 1)/2, φ = (1 + √5)/2
        let half = ratio(1, 2);
        let quarter = ratio(1, 4);
        let d = &self.c[2] - &self.c[3];
        let re_rat = &self.c[0] + &self.c[1] * &quarter - &d * &quarter;
        let re_sqrt = (&self.c[1] + &d) * &quarter;
        let re = RatInterval::point(re_rat).add(&sqrt5.mul_scalar(&re_sqrt));

        // Im = sin(π/5) · (c1 + (c2 + c3)φ)
        let s = &self.c[2] + &self.c[3];
        let k_rat = &self.c[1] + &s * &half;
        let k_sqrt = &s * &half;
        let k = RatInterval::point(k_rat).add(&sqrt5.mul_scalar(&k_sqrt));
        // sin(π/5) = √(10 − 2√5)/4
        let inner = RatInterval::point(Rational::from_integer(10.into()))
            .add(&sqrt5.mul_scalar(&ratio(-2, 1)));
        let sin = RatInterval {
            lo: sqrt_bounds(&inner.lo, bits).lo * &quarter,
            hi: sqrt_bounds(&inner.hi, bits).hi * &quarter,
        };
        let im = if self.c[1].is_zero() && s.is_zero() {
            RatInterval::point(Rational::zero())
        } else {
            k.mul(&sin)
        };
        ComplexInterval {
            re: re.to_float(),
            im: im.to_float(),
        }
    }

    /// Nearest floats, for rendering only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let a = self.approx(64);
        (a.re.mid(), a.im.mid())
    }
}

/// Sign of p + q√5 for rationals p, q.
fn sign_plus_sqrt5<T: Signed + Clone>(p: &T, q: &T) -> Sign {
    let sp = Sign::of(p);
    let sq = Sign::of(q);
    match (sp, sq) {
        (Sign::Zero, s) | (s, Sign::Zero) => s,
        (a, b) if a == b => a,
        _ => {
            let p2 = p.clone() * p.clone();
            let five = T::one() + T::one() + T::one() + T::one() + T::one();
            let q2 = q.clone() * q.clone() * five;
            let mag = Sign::of(&(p2 - q2));
            if sp == Sign::Positive {
                mag
            } else {
                mag.flip()
            }
        }
    }
}

/// Sign of x + yφ for integers.
pub fn sign_golden(x: &BigInt, y: &BigInt) -> Sign {
    // x + yφ = ((2x + y) + y√5)/2
    let p: BigInt = x + x + y;
    sign_plus_sqrt5(&p, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo > 0.0 || self.hi < 0.0
    }

    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            self.lo / 2.0 + self.hi / 2.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

#[derive(Debug, Clone)]
struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    fn point(x: Rational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    fn add(&self, o: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn mul_scalar(&self, s: &Rational) -> Self {
        let a = &self.lo * s;
        let b = &self.hi * s;
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let prods = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = prods.iter().min().unwrap().clone();
        let hi = prods.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    fn to_float(&self) -> Interval {
        Interval {
            lo: float_below(&self.lo),
            hi: float_above(&self.hi),
        }
    }
}

fn float_below(x: &Rational) -> f64 {
    let mut f = x.to_f64().unwrap_or(f64::NEG_INFINITY);
    while f.is_finite() && Rational::from_float(f).is_some_and(|r| &r > x) {
        f = f.next_down();
    }
    f
}

fn float_above(x: &Rational) -> f64 {
    let mut f = x.to_f64().unwrap_or(f64::INFINITY);
    while f.is_finite() && Rational::from_float(f).is_some_and(|r| &r < x) {
        f = f.next_up();
    }
    f
}

/// Rational bounds lo ≤ √x ≤ hi for x ≥ 0, width about 2^-bits.
fn sqrt_bounds(x: &Rational, bits: u32) -> RatInterval {
    if !x.is_positive() {
        return RatInterval::point(Rational::zero());
    }
    let scale = BigInt::one() << (2 * bits);
    let scaled = x * Rational::from_integer(scale);
    let lo_int = scaled.floor().to_integer().sqrt();
    let hi_int = scaled.ceil().to_integer().sqrt() + 1;
    let den = BigInt::one() << bits;
    RatInterval {
        lo: Rational::new(lo_int, den.clone()),
        hi: Rational::new(hi_int, den),
    }
}

/// Integer numerators over one common denominator.
fn over_common_den(a: &[Rational; 4]) -> ([BigInt; 4], BigInt) {
    let mut d = BigInt::one();
    for x in a {
        if !x.denom().is_one() {
            d = d.lcm(x.denom());
        }
    }
    let n = std::array::from_fn(|i| {
        let x = &a[i];
        if x.denom() == &d {
            x.numer().clone()
        } else {
            x.numer() * (&d / x.denom())
        }
    });
    (n, d)
}

fn mul_coeffs(a: &[Rational; 4], b: &[Rational; 4]) -> [Rational; 4] {
    let (an, ad) = over_common_den(a);
    let (bn, bd) = over_common_den(b);
    let mut p: [BigInt; 7] = std::array::from_fn(|_| BigInt::zero());
    for (i, ai) in an.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in bn.iter().enumerate() {
            if !bj.is_zero() {
                p[i + j] += ai * bj;
            }
        }
    }
    // ζ⁶ = −ζ, ζ⁵ = −1, ζ⁴ = −1 + ζ − ζ² + ζ³
    let [p0, p1, p2, p3, p4, p5, p6] = p;
    let d = ad * bd;
    [
        p0 - &p5 - &p4,
        p1 - &p6 + &p4,
        p2 - &p4,
        p3 + p4,
    ]
    .map(|n| {
        if n.is_zero() {
            Rational::zero()
        } else {
            Rational::new(n, d.clone())
        }
    })
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $f(self, o: &CycNum) -> CycNum {
                let g: fn(&CycNum, &CycNum) -> CycNum = $body;
                g(self, o)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, o: CycNum) -> CycNum {
                (&self).$f(&o)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, o: &CycNum) -> CycNum {
                (&self).$f(o)
            }
        }
        impl $tr<CycNum> for &CycNum {
            type Output = CycNum;
            fn $f(self, o: CycNum) -> CycNum {
                self.$f(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| CycNum {
    c: std::array::from_fn(|i| &a.c[i] + &b.c[i]),
});
binop!(Sub, sub, |a, b| CycNum {
    c: std::array::from_fn(|i| &a.c[i] - &b.c[i]),
});
binop!(Mul, mul, |a, b| CycNum {
    c: mul_coeffs(&a.c, &b.c),
});

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, o: &CycNum) {
        for (x, y) in self.c.iter_mut().zip(o.c.iter()) {
            *x += y;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, o: &CycNum) {
        for (x, y) in self.c.iter_mut().zip(o.c.iter()) {
            *x -= y;
        }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            c: std::array::from_fn(|i| -&self.c[i]),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl Default for CycNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.c.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}/{}", x.numer(), x.denom())?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.to_f64_pair();
        write!(f, "CycNum({self} ≈ {x:.6}{y:+.6}i)")
    }
}

impl FromStr for CycNum {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(',').collect();
        if parts.len() != 4 {
            return Err(FieldError::Parse(s.to_string()));
        }
        let mut c: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        for (slot, part) in c.iter_mut().zip(parts) {
            let part = part.trim();
            let (n, d) = part.split_once('/').unwrap_or((part, "1"));
            let n: BigInt = n.trim().parse().map_err(|_| FieldError::Parse(s.into()))?;
            let d: BigInt = d.trim().parse().map_err(|_| FieldError::Parse(s.into()))?;
            if d.is_zero() {
                return Err(FieldError::Parse(s.into()));
            }
            *slot = Rational::new(n, d);
        }
        Ok(CycNum { c })
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
