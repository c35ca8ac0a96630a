//! Arithmetic for the map `x ↦ βx + α (mod 1)`: parameters, branch partition,
//! itineraries and one-sided kneading limits.
//!
//! Two backends are supported. When α and β are rationals every endpoint is an
//! exact [`BigRational`] and comparisons are exact. Otherwise values are `f64`
//! and two numbers closer than `tol` compare equal.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default comparison tolerance of the floating backend.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest alphabet we accept; symbols are stored as bytes.
pub const MAX_ALPHABET: usize = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArithmeticMode {
    ExactRational,
    TolerantFloat,
}

/// A real number in one of the two backends.
///
/// Values produced from one [`Params`] always share its backend; mixing
/// backends in a single operation is a programming error and panics.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(BigRational),
    Float(f64),
}

impl Real {
    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Real::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    fn zip<F, G>(&self, other: &Real, exact: F, float: G) -> Real
    where
        F: FnOnce(&BigRational, &BigRational) -> BigRational,
        G: FnOnce(f64, f64) -> f64,
    {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(exact(a, b)),
            (Real::Float(a), Real::Float(b)) => Real::Float(float(*a, *b)),
            _ => panic!("mixed arithmetic backends"),
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        self.zip(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.zip(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &Real) -> Real {
        self.zip(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn div(&self, other: &Real) -> Real {
        self.zip(other, |a, b| a / b, |a, b| a / b)
    }

    pub fn floor(&self) -> i64 {
        match self {
            Real::Exact(q) => q.floor().to_integer().to_i64().expect("floor out of range"),
            Real::Float(x) => x.floor() as i64,
        }
    }

    /// Parse `p/q` or an integer as an exact rational.
    pub fn parse_rational(s: &str) -> Option<BigRational> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = num.parse().ok()?;
        let q: BigInt = den.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Real::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            // Debug formatting of f64 is the shortest round-trip representation.
            Real::Float(x) => write!(f, "{:?}", x),
        }
    }
}

/// The open interval `(lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenInterval {
    pub lo: Real,
    pub hi: Real,
}

impl OpenInterval {
    pub fn new(lo: Real, hi: Real) -> Self {
        Self { lo, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi.to_f64() - self.lo.to_f64()
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// A finite word over `{1, …, k}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Compact form without separators, e.g. `"221"`. Only unambiguous for k ≤ 9.
    pub fn compact(&self) -> String {
        self.0.iter().map(|s| s.to_string()).collect()
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word(s.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}", s)?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts space/comma separated symbols (`"2 2 1"`) or, when there is no
    /// separator, one digit per symbol (`"221"`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let parse = |t: &str| -> Result<u8> {
            match t.parse::<u8>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(Error::Parse(format!("bad symbol {:?}", t))),
            }
        };
        let symbols = if s.contains(|c: char| c.is_whitespace() || c == ',') {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(parse)
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| parse(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(symbols))
    }
}

/// Which side a one-sided limit approaches from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// Validated parameters `(α, β)` with derived alphabet size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    alpha: Real,
    beta: Real,
    k: usize,
    tol: f64,
    mode: ArithmeticMode,
    partition: Vec<OpenInterval>,
}

fn validate_f64(alpha: f64, beta: f64) -> Result<()> {
    if !alpha.is_finite() || !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParam(format!("alpha = {} not in [0, 1)", alpha)));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidParam(format!("beta = {} not finite", beta)));
    }
    if beta <= 2.0 {
        return Err(Error::UnsupportedRegime { beta: beta.to_string() });
    }
    if beta + alpha > MAX_ALPHABET as f64 {
        return Err(Error::InvalidParam(format!("beta = {} gives more than {} symbols", beta, MAX_ALPHABET)));
    }
    Ok(())
}

/// Alphabet size `k = ⌈α + β⌉` for floating parameters; a sum within `tol` of
/// an integer counts as that integer.
pub fn derive_alphabet(alpha: f64, beta: f64, tol: f64) -> Result<usize> {
    validate_f64(alpha, beta)?;
    let s = alpha + beta;
    let r = s.round();
    let k = if (s - r).abs() <= tol { r } else { s.ceil() };
    Ok(k as usize)
}

/// Alphabet size for exact rational parameters.
pub fn derive_alphabet_exact(alpha: &BigRational, beta: &BigRational) -> Result<usize> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if alpha < &zero || alpha >= &one {
        return Err(Error::InvalidParam(format!("alpha = {} not in [0, 1)", alpha)));
    }
    if beta <= &BigRational::from_integer(2.into()) {
        return Err(Error::UnsupportedRegime { beta: beta.to_string() });
    }
    let k = (alpha + beta).ceil().to_integer();
    match k.to_usize() {
        Some(k) if k <= MAX_ALPHABET => Ok(k),
        _ => Err(Error::InvalidParam(format!("beta = {} gives more than {} symbols", beta, MAX_ALPHABET))),
    }
}

impl Params {
    pub fn exact(alpha: BigRational, beta: BigRational) -> Result<Self> {
        let k = derive_alphabet_exact(&alpha, &beta)?;
        Ok(Self::assemble(Real::Exact(alpha), Real::Exact(beta), k, 0.0, ArithmeticMode::ExactRational))
    }

    pub fn float(alpha: f64, beta: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParam(format!("tol = {} must be positive", tol)));
        }
        let k = derive_alphabet(alpha, beta, tol)?;
        Ok(Self::assemble(Real::Float(alpha), Real::Float(beta), k, tol, ArithmeticMode::TolerantFloat))
    }

    /// Parse from strings. Both given as integers or `p/q` selects the exact
    /// backend; anything else is read as `f64`.
    pub fn parse(alpha: &str, beta: &str, tol: f64) -> Result<Self> {
        match (Real::parse_rational(alpha), Real::parse_rational(beta)) {
            (Some(a), Some(b)) => Self::exact(a, b),
            _ => {
                let a: f64 = alpha
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("alpha {:?}", alpha)))?;
                let b: f64 = beta
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("beta {:?}", beta)))?;
                Self::float(a, b, tol)
            }
        }
    }

    /// Shorthand for exact parameters `p1/q1`, `p2/q2`.
    pub fn rational(ap: i64, aq: i64, bp: i64, bq: i64) -> Result<Self> {
        Self::exact(
            BigRational::new(ap.into(), aq.into()),
            BigRational::new(bp.into(), bq.into()),
        )
    }

    fn assemble(alpha: Real, beta: Real, k: usize, tol: f64, mode: ArithmeticMode) -> Self {
        let mut p = Params { alpha, beta, k, tol, mode, partition: Vec::new() };
        p.partition = (1..=k).map(|j| p.compute_interval(j)).collect();
        p
    }

    pub fn alpha(&self) -> &Real {
        &self.alpha
    }

    pub fn beta(&self) -> &Real {
        &self.beta
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.mode
    }

    /// An integer in this parameter set's backend.
    pub fn int(&self, n: i64) -> Real {
        match self.mode {
            ArithmeticMode::ExactRational => Real::Exact(BigRational::from_integer(n.into())),
            ArithmeticMode::TolerantFloat => Real::Float(n as f64),
        }
    }

    /// Convert an `f64` into this backend (exactly, for the rational backend).
    pub fn real(&self, x: f64) -> Real {
        match self.mode {
            ArithmeticMode::ExactRational => {
                Real::Exact(BigRational::from_float(x).expect("finite value"))
            }
            ArithmeticMode::TolerantFloat => Real::Float(x),
        }
    }

    /// Parse a point in this backend: `p/q` for exact parameters, decimal otherwise.
    pub fn parse_point(&self, s: &str) -> Result<Real> {
        match self.mode {
            ArithmeticMode::ExactRational => {
                if let Some(q) = Real::parse_rational(s) {
                    return Ok(Real::Exact(q));
                }
                let x: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("point {:?}", s)))?;
                Ok(self.real(x))
            }
            ArithmeticMode::TolerantFloat => {
                let x = match Real::parse_rational(s) {
                    Some(q) => q.to_f64().unwrap_or(f64::NAN),
                    None => s.trim().parse().map_err(|_| Error::Parse(format!("point {:?}", s)))?,
                };
                Ok(Real::Float(x))
            }
        }
    }

    /// Compare two values: exactly, or with tolerance `tol`.
    pub fn cmp(&self, a: &Real, b: &Real) -> Ordering {
        match (a, b) {
            (Real::Exact(x), Real::Exact(y)) => x.cmp(y),
            (Real::Float(x), Real::Float(y)) => {
                if (x - y).abs() <= self.tol {
                    Ordering::Equal
                } else if x < y {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => panic!("mixed arithmetic backends"),
        }
    }

    pub fn approx_eq(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) == Ordering::Equal
    }

    fn max<'a>(&self, a: &'a Real, b: &'a Real) -> &'a Real {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    fn min<'a>(&self, a: &'a Real, b: &'a Real) -> &'a Real {
        if self.cmp(a, b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    /// Nearest integer when `x` is integral (exactly or within tolerance).
    fn as_integer(&self, x: &Real) -> Option<i64> {
        match x {
            Real::Exact(q) => q.is_integer().then(|| q.to_integer().to_i64()).flatten(),
            Real::Float(v) => {
                let r = v.round();
                ((v - r).abs() <= self.tol).then_some(r as i64)
            }
        }
    }

    fn compute_interval(&self, j: usize) -> OpenInterval {
        let zero = self.int(0);
        let one = self.int(1);
        let lo = if j == 1 {
            zero
        } else {
            self.int(j as i64 - 1).sub(&self.alpha).div(&self.beta)
        };
        let hi = if j == self.k {
            one
        } else {
            let h = self.int(j as i64).sub(&self.alpha).div(&self.beta);
            self.min(&h, &one).clone()
        };
        OpenInterval::new(lo, hi)
    }

    /// The branch interval `I_j`, 1-based.
    pub fn interval(&self, j: u8) -> &OpenInterval {
        &self.partition[j as usize - 1]
    }

    /// `I_1, …, I_k`.
    pub fn partition(&self) -> &[OpenInterval] {
        &self.partition
    }

    /// The affine branch `x ↦ βx + α − (j − 1)`.
    pub fn branch_affine(&self, j: u8, x: &Real) -> Real {
        self.beta
            .mul(x)
            .add(&self.alpha)
            .sub(&self.int(j as i64 - 1))
    }

    /// `T(x) = βx + α − ⌊βx + α⌋`.
    pub fn apply_map(&self, x: &Real) -> Real {
        let y = self.beta.mul(x).add(&self.alpha);
        let f = y.floor();
        y.sub(&self.int(f))
    }

    /// The `j` with `x ∈ I_j`. Partition endpoints (and anything outside
    /// `(0, 1)`) are reported as [`Error::Boundary`] with step 1.
    pub fn branch_index(&self, x: &Real) -> Result<u8> {
        let boundary = || Error::Boundary { step: 1, x: x.to_string() };
        if self.cmp(x, &self.int(0)) != Ordering::Greater || self.cmp(x, &self.int(1)) != Ordering::Less {
            return Err(boundary());
        }
        let y = self.beta.mul(x).add(&self.alpha);
        let j = (y.floor() + 1).clamp(1, self.k as i64) as u8;
        let iv = self.interval(j);
        if self.cmp(x, &iv.lo) == Ordering::Greater && self.cmp(x, &iv.hi) == Ordering::Less {
            Ok(j)
        } else {
            Err(boundary())
        }
    }

    /// The first `n` symbols of the itinerary of `x`.
    pub fn itinerary(&self, x: &Real, n: usize) -> Result<Word> {
        let mut symbols = Vec::with_capacity(n);
        let mut cur = x.clone();
        for step in 1..=n {
            let j = self.branch_index(&cur).map_err(|_| Error::Boundary { step, x: cur.to_string() })?;
            symbols.push(j);
            if step < n {
                cur = self.branch_affine(j, &cur);
            }
        }
        Ok(Word(symbols))
    }

    /// Branch containing the one-sided limit `v±`.
    pub fn one_sided_branch(&self, v: &Real, side: Side) -> u8 {
        let y = self.beta.mul(v).add(&self.alpha);
        let j = match (self.as_integer(&y), side) {
            (Some(n), Side::Right) => n + 1,
            (Some(n), Side::Left) => n,
            (None, _) => y.floor() + 1,
        };
        j.clamp(1, self.k as i64) as u8
    }

    /// Itineraries of the one-sided limits `0⁺` and `1⁻`, tracked symbolically.
    pub fn kneading_limits(&self, n: usize) -> (Word, Word) {
        let track = |start: Real, side: Side| {
            let mut v = start;
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                let j = self.one_sided_branch(&v, side);
                out.push(j);
                v = self.branch_affine(j, &v);
            }
            Word(out)
        };
        (track(self.int(0), Side::Right), track(self.int(1), Side::Left))
    }

    /// Nonempty open intersection of two intervals.
    pub fn intersect(&self, a: &OpenInterval, b: &OpenInterval) -> Option<OpenInterval> {
        let lo = self.max(&a.lo, &b.lo).clone();
        let hi = self.min(&a.hi, &b.hi).clone();
        (self.cmp(&lo, &hi) == Ordering::Less).then(|| OpenInterval::new(lo, hi))
    }

    pub fn interval_eq(&self, a: &OpenInterval, b: &OpenInterval) -> bool {
        self.approx_eq(&a.lo, &b.lo) && self.approx_eq(&a.hi, &b.hi)
    }

    /// Whether `inner ⊆ closure(outer)`.
    pub fn interval_within(&self, inner: &OpenInterval, outer: &OpenInterval) -> bool {
        self.cmp(&inner.lo, &outer.lo) != Ordering::Less && self.cmp(&inner.hi, &outer.hi) != Ordering::Greater
    }

    /// `log β` as `f64`.
    pub fn log_beta(&self) -> f64 {
        self.beta.to_f64().ln()
    }

    /// Smallest representable offset used by the CLI `--nudge` flag.
    pub fn quantum(&self) -> Real {
        match self.mode {
            ArithmeticMode::ExactRational => Real::Exact(BigRational::new(1.into(), BigInt::from(1u64 << 40))),
            ArithmeticMode::TolerantFloat => Real::Float(self.tol * 16.0),
        }
    }

    pub fn is_nonnegative(x: &Real) -> bool {
        match x {
            Real::Exact(q) => !q.is_negative(),
            Real::Float(v) => *v >= 0.0,
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} beta={} k={}", self.alpha, self.beta, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Params {
        Params::rational(1, 2, 5, 2).unwrap()
    }

    fn q(n: i64, d: i64) -> Real {
        Real::Exact(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn alphabet_examples() {
        assert_eq!(derive_alphabet(0.5, 2.5, DEFAULT_TOL).unwrap(), 3);
        assert_eq!(derive_alphabet(0.0, 3.0, DEFAULT_TOL).unwrap(), 3);
        assert_eq!(derive_alphabet(0.25, 2.9, DEFAULT_TOL).unwrap(), 4);
        assert!(matches!(derive_alphabet(0.5, 2.0, DEFAULT_TOL), Err(Error::UnsupportedRegime { .. })));
        assert!(matches!(derive_alphabet(1.0, 2.5, DEFAULT_TOL), Err(Error::InvalidParam(_))));
        assert!(matches!(derive_alphabet(-0.1, 2.5, DEFAULT_TOL), Err(Error::InvalidParam(_))));
        assert!(matches!(Params::rational(1, 2, 3, 2), Err(Error::UnsupportedRegime { .. })));
    }

    #[test]
    fn partition_examples() {
        let part = p().partition().to_vec();
        assert_eq!(part.len(), 3);
        let expect = [(q(0, 1), q(1, 5)), (q(1, 5), q(3, 5)), (q(3, 5), q(1, 1))];
        for (iv, (lo, hi)) in part.iter().zip(expect) {
            assert_eq!(iv.lo, lo);
            assert_eq!(iv.hi, hi);
        }

        let thirds = Params::rational(0, 1, 3, 1).unwrap();
        assert_eq!(thirds.interval(2).lo, q(1, 3));
        assert_eq!(thirds.interval(2).hi, q(2, 3));

        let p4 = Params::float(0.25, 2.9, DEFAULT_TOL).unwrap();
        let ends: Vec<f64> = p4.partition().iter().map(|iv| iv.hi.to_f64()).collect();
        let want = [0.75 / 2.9, 1.75 / 2.9, 2.75 / 2.9, 1.0];
        for (a, b) in ends.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(p4.interval(1).lo.to_f64(), 0.0);
    }

    #[test]
    fn map_examples() {
        let p = p();
        assert_eq!(p.apply_map(&q(3, 10)), q(1, 4));
        assert_eq!(p.apply_map(&q(1, 10)), q(3, 4));
        assert_eq!(p.apply_map(&q(8, 10)), q(1, 2));
    }

    #[test]
    fn branch_examples() {
        let p = p();
        assert_eq!(p.branch_index(&q(3, 10)).unwrap(), 2);
        assert_eq!(p.branch_index(&q(95, 100)).unwrap(), 3);
        assert!(matches!(p.branch_index(&q(1, 5)), Err(Error::Boundary { .. })));
        assert!(matches!(p.branch_index(&q(0, 1)), Err(Error::Boundary { .. })));
    }

    #[test]
    fn itinerary_examples() {
        let p = p();
        assert_eq!(p.itinerary(&q(3, 10), 3).unwrap().to_string(), "2 2 1");
        assert_eq!(p.itinerary(&q(1, 10), 2).unwrap().to_string(), "1 3");
        assert_eq!(p.itinerary(&q(1, 5), 1), Err(Error::Boundary { step: 1, x: "1/5".into() }));
        // 0.4 -> 2.5*0.4+0.5-1 = 0.5 -> 0.75 -> 0.375 ...; 3/5 is never hit
        // but 1/10 -> 3/4 -> 3/8 is fine; x = 7/25 maps to 1/5 at step 2.
        let err = p.itinerary(&q(7, 25), 3).unwrap_err();
        assert!(matches!(err, Error::Boundary { step: 2, .. }));
    }

    #[test]
    fn kneading_examples() {
        let p = p();
        let (zero, one) = p.kneading_limits(2);
        assert_eq!(zero.to_string(), "1 2");
        assert_eq!(one.0[0], 3);
        let full = Params::rational(0, 1, 3, 1).unwrap();
        assert_eq!(full.kneading_limits(3).1.to_string(), "3 3 3");
        assert_eq!(full.kneading_limits(3).0.to_string(), "1 1 1");
    }

    #[test]
    fn float_backend_matches_exact() {
        let pf = Params::float(0.5, 2.5, DEFAULT_TOL).unwrap();
        assert_eq!(pf.itinerary(&Real::Float(0.3), 3).unwrap().to_string(), "2 2 1");
        assert!(pf.branch_index(&Real::Float(0.2 + 1e-14)).is_err());
    }

    #[test]
    fn word_parsing() {
        assert_eq!("2 2 1".parse::<Word>().unwrap(), Word(vec![2, 2, 1]));
        assert_eq!("221".parse::<Word>().unwrap(), Word(vec![2, 2, 1]));
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert!("2 0".parse::<Word>().is_err());
    }

    #[test]
    fn parse_selects_backend() {
        assert_eq!(Params::parse("1/2", "5/2", DEFAULT_TOL).unwrap().mode(), ArithmeticMode::ExactRational);
        assert_eq!(Params::parse("0", "3", DEFAULT_TOL).unwrap().mode(), ArithmeticMode::ExactRational);
        assert_eq!(Params::parse("0.5", "2.5", DEFAULT_TOL).unwrap().mode(), ArithmeticMode::TolerantFloat);
    }
}
