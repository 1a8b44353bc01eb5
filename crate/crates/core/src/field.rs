//! Exact scalars over the rationals and prime fields.
//!
//! Every [`FieldElem`] carries its [`FieldSpec`]. Rational values are kept
//! fully reduced with a positive denominator and residues are kept in
//! `0..p`, so structural equality is field equality. Arithmetic between
//! elements of different fields is a programming error and panics; the
//! checked entry points ([`field_cmp`], parsing, matrix construction) report
//! it as [`Error::SpecMismatch`] instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// The ground field: ℚ or 𝔽ₚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// Checked constructor for 𝔽ₚ.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Number of elements, `None` for ℚ.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    /// All elements of a prime field in residue order; empty for ℚ.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let p = self.order().unwrap_or(0);
        (0..p).map(move |v| FieldElem::Mod { v, p })
    }

    /// Guard that the field has at least `n` distinct elements.
    pub fn check_convention(&self, n: usize) -> Result<()> {
        match self {
            FieldSpec::Prime(p) if (*p as u128) < n as u128 => {
                Err(Error::FieldTooSmall { p: *p, n })
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime(p) => FieldSpec::prime(*p).map(|_| ()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar together with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rat(BigRational),
    Mod { v: u64, p: u64 },
}

impl FieldElem {
    pub fn zero(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElem::Rat(BigRational::zero()),
            FieldSpec::Prime(p) => FieldElem::Mod { v: 0, p },
        }
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self::from_i64(spec, 1)
    }

    pub fn from_i64(spec: FieldSpec, x: i64) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElem::Rat(BigRational::from_integer(BigInt::from(x))),
            FieldSpec::Prime(p) => FieldElem::Mod {
                v: (x as i128).rem_euclid(p as i128) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(spec: FieldSpec, x: &BigInt) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElem::Rat(BigRational::from_integer(x.clone())),
            FieldSpec::Prime(p) => {
                let r = ((x % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                FieldElem::Mod {
                    v: u64::try_from(r).expect("residue fits in u64"),
                    p,
                }
            }
        }
    }

    /// `num/den`; fails when `den` vanishes in the field.
    pub fn from_ratio(spec: FieldSpec, num: i64, den: i64) -> Result<Self> {
        let d = Self::from_i64(spec, den);
        let inv = d
            .inv()
            .ok_or_else(|| Error::Parse(format!("denominator {den} vanishes in {spec}")))?;
        Ok(&Self::from_i64(spec, num) * &inv)
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElem::Rat(_) => FieldSpec::Rationals,
            FieldElem::Mod { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Mod { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Rat(r) => FieldElem::Rat(r.recip()),
            FieldElem::Mod { v, p } => FieldElem::Mod {
                v: mod_inv(*v, *p),
                p: *p,
            },
        })
    }

    /// `self / rhs`, `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.spec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The residue of an 𝔽ₚ element.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldElem::Mod { v, .. } => Some(*v),
            FieldElem::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rat(r) => Some(r),
            FieldElem::Mod { .. } => None,
        }
    }

    /// Parse the scalar text format: `a`, `-a`, `a/b` over ℚ; a decimal
    /// integer (reduced mod p) over 𝔽ₚ.
    pub fn parse(spec: FieldSpec, text: &str) -> Result<Self> {
        let s = text.trim();
        let bad = || Error::Parse(format!("invalid scalar {text:?} for field {spec}"));
        match spec {
            FieldSpec::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a.trim(), Some(b.trim())),
                    None => (s, None),
                };
                let num = parse_int(num).ok_or_else(bad)?;
                let den = match den {
                    Some(d) => parse_int(d).ok_or_else(bad)?,
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {text:?}")));
                }
                Ok(FieldElem::Rat(BigRational::new(num, den)))
            }
            FieldSpec::Prime(_) => {
                if s.contains('/') {
                    return Err(bad());
                }
                let v = parse_int(s).ok_or_else(bad)?;
                Ok(Self::from_bigint(spec, &v))
            }
        }
    }

    /// A random element. Over ℚ the numerator lies in `-h..=h` and the
    /// denominator in `1..=h`.
    pub fn random<R: Rng + ?Sized>(spec: FieldSpec, rng: &mut R, height: i64) -> Self {
        match spec {
            FieldSpec::Rationals => {
                let h = height.max(1);
                let num = rng.gen_range(-h..=h);
                let den = rng.gen_range(1..=h);
                FieldElem::Rat(BigRational::new(num.into(), den.into()))
            }
            FieldSpec::Prime(p) => FieldElem::Mod {
                v: rng.gen_range(0..p),
                p,
            },
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

fn mod_inv(v: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, v as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

#[inline]
fn same_prime(p: u64, q: u64) {
    assert_eq!(p, q, "arithmetic between F{p} and F{q}");
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => write!(f, "{r}"),
            FieldElem::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

/// The fixed total order: natural order on ℚ, residue order on 𝔽ₚ.
pub fn field_cmp(a: &FieldElem, b: &FieldElem) -> Result<Ordering> {
    match (a, b) {
        (FieldElem::Rat(x), FieldElem::Rat(y)) => Ok(x.cmp(y)),
        (FieldElem::Mod { v, p }, FieldElem::Mod { v: w, p: q }) if p == q => Ok(v.cmp(w)),
        _ => Err(Error::SpecMismatch(a.spec().to_string(), b.spec().to_string())),
    }
}

/// [`field_cmp`] for elements already known to share a field.
pub(crate) fn cmp_same(a: &FieldElem, b: &FieldElem) -> Ordering {
    field_cmp(a, b).expect("elements share a field")
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Mod { v, p }, FieldElem::Mod { v: w, p: q }) => {
                same_prime(*p, *q);
                let s = v + w;
                FieldElem::Mod {
                    v: if s >= *p { s - p } else { s },
                    p: *p,
                }
            }
            _ => panic!("arithmetic between {} and {}", self.spec(), rhs.spec()),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a - b),
            (FieldElem::Mod { v, p }, FieldElem::Mod { v: w, p: q }) => {
                same_prime(*p, *q);
                FieldElem::Mod {
                    v: if v >= w { v - w } else { p - (w - v) },
                    p: *p,
                }
            }
            _ => panic!("arithmetic between {} and {}", self.spec(), rhs.spec()),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Mod { v, p }, FieldElem::Mod { v: w, p: q }) => {
                same_prime(*p, *q);
                FieldElem::Mod {
                    v: ((*v as u128 * *w as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => panic!("arithmetic between {} and {}", self.spec(), rhs.spec()),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Mod { v, p } => FieldElem::Mod {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}
