//! Angles measured in units of pi, with an optional exact rational value.
//!
//! The classification of flat metrics on the punctured disk is a discrete
//! function of the total boundary curvature divided by pi, so angles carry an
//! exact `Rational64` whenever the input data allows it. Arithmetic preserves
//! exactness when both operands are exact and degrades to floating point
//! otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An angle stored in units of pi.
#[derive(Clone, Copy, Debug)]
pub struct Angle {
    /// Value in units of pi. When `exact` is set this is its f64 image.
    pi: f64,
    exact: Option<Rational64>,
}

impl Angle {
    pub const ZERO: Angle = Angle {
        pi: 0.0,
        exact: Some(Rational64::new_raw(0, 1)),
    };

    /// One full straight angle (pi radians).
    pub const STRAIGHT: Angle = Angle {
        pi: 1.0,
        exact: Some(Rational64::new_raw(1, 1)),
    };

    pub fn from_pi(pi: f64) -> Self {
        Angle { pi, exact: None }
    }

    pub fn from_pi_exact(r: Rational64) -> Self {
        Angle {
            pi: rational_to_f64(r),
            exact: Some(r),
        }
    }

    pub fn from_radians(rad: f64) -> Self {
        Angle {
            pi: rad / std::f64::consts::PI,
            exact: None,
        }
    }

    pub fn pi_units(&self) -> f64 {
        self.pi
    }

    pub fn radians(&self) -> f64 {
        self.pi * std::f64::consts::PI
    }

    pub fn exact(&self) -> Option<Rational64> {
        self.exact
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn sin(&self) -> f64 {
        self.radians().sin()
    }

    pub fn cos(&self) -> f64 {
        self.radians().cos()
    }

    pub fn abs(&self) -> Angle {
        if self.pi < 0.0 {
            -*self
        } else {
            *self
        }
    }

    /// True when the angle equals `r` pi exactly (rational data) or within
    /// `tol_pi` in floating mode.
    pub fn is_pi_multiple(&self, r: Rational64, tol_pi: f64) -> bool {
        match self.exact {
            Some(e) => e == r,
            None => (self.pi - rational_to_f64(r)).abs() <= tol_pi,
        }
    }

    pub fn is_zero(&self, tol_pi: f64) -> bool {
        self.is_pi_multiple(Rational64::zero(), tol_pi)
    }

    pub fn approx_eq(&self, other: &Angle, tol_pi: f64) -> bool {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => (self.pi - other.pi).abs() <= tol_pi,
        }
    }

    /// Midpoint of two angles, exact when both operands are.
    pub fn midpoint(&self, other: &Angle) -> Angle {
        (*self + *other) / 2
    }

    pub fn min(self, other: Angle) -> Angle {
        if other.pi < self.pi {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Angle) -> Angle {
        if other.pi > self.pi {
            other
        } else {
            self
        }
    }

    pub fn is_positive(&self) -> bool {
        self.pi > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.pi < 0.0
    }
}

fn rational_to_f64(r: Rational64) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
}

fn combine(
    a: &Angle,
    b: &Angle,
    f: impl Fn(f64, f64) -> f64,
    g: impl Fn(Rational64, Rational64) -> Option<Rational64>,
) -> Angle {
    match (a.exact, b.exact) {
        (Some(x), Some(y)) => match g(x, y) {
            Some(r) => Angle::from_pi_exact(r),
            None => Angle::from_pi(f(a.pi, b.pi)),
        },
        _ => Angle::from_pi(f(a.pi, b.pi)),
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        combine(&self, &rhs, |x, y| x + y, |x, y| x.checked_add(&y))
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        combine(&self, &rhs, |x, y| x - y, |x, y| x.checked_sub(&y))
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        match self.exact {
            Some(r) => Angle::from_pi_exact(-r),
            None => Angle::from_pi(-self.pi),
        }
    }
}

impl Mul<i64> for Angle {
    type Output = Angle;
    fn mul(self, rhs: i64) -> Angle {
        match self.exact {
            Some(r) => match r.checked_mul(&Rational64::from_integer(rhs)) {
                Some(p) => Angle::from_pi_exact(p),
                None => Angle::from_pi(self.pi * rhs as f64),
            },
            None => Angle::from_pi(self.pi * rhs as f64),
        }
    }
}

impl Div<i64> for Angle {
    type Output = Angle;
    fn div(self, rhs: i64) -> Angle {
        assert!(rhs != 0, "division of an angle by zero");
        match self.exact {
            Some(r) => match r.checked_div(&Rational64::from_integer(rhs)) {
                Some(p) => Angle::from_pi_exact(p),
                None => Angle::from_pi(self.pi / rhs as f64),
            },
            None => Angle::from_pi(self.pi / rhs as f64),
        }
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Angle) -> bool {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.pi == other.pi,
        }
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Angle) -> Option<Ordering> {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a.partial_cmp(&b),
            _ => self.pi.partial_cmp(&other.pi),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) => write!(f, "{}*pi", r),
            None => write!(f, "{}*pi", self.pi),
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.exact {
            Some(r) => {
                if r.is_integer() {
                    s.serialize_str(&format!("{}", r.numer()))
                } else {
                    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
                }
            }
            None => s.serialize_f64(self.pi),
        }
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Angle::from_pi(x)),
            Raw::Str(s) => parse_pi_rational(&s)
                .map(Angle::from_pi_exact)
                .ok_or_else(|| D::Error::custom(format!("not a rational multiple of pi: {s:?}"))),
        }
    }
}

/// Parses "p/q" or "p" as an exact rational number of pi units.
pub fn parse_pi_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().ok()?;
        let d: i64 = den.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Rational64::new(n, d))
    } else {
        let n: i64 = s.parse().ok()?;
        Some(Rational64::from_integer(n))
    }
}

/// Best-effort exact reading of a decimal as a rational with a small
/// denominator. Used by the CLI's `--exact` mode for JSON numbers.
pub fn rational_from_f64(x: f64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    // Continued-fraction expansion, denominators capped at 10^6.
    let (mut p0, mut q0, mut p1, mut q1): (i64, i64, i64, i64) = (1, 0, 0, 1);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i64;
        let p2 = ai.checked_mul(p0)?.checked_add(p1)?;
        let q2 = ai.checked_mul(q0)?.checked_add(q1)?;
        if q2.abs() > 1_000_000 {
            return None;
        }
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        let cand = Rational64::new(p0, q0);
        if (rational_to_f64(cand) - x).abs() <= 1e-12 {
            return Some(cand);
        }
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    None
}

impl Zero for Angle {
    fn zero() -> Self {
        Angle::ZERO
    }
    fn is_zero(&self) -> bool {
        match self.exact {
            Some(r) => r.is_zero(),
            None => self.pi == 0.0,
        }
    }
}

impl std::iter::Sum for Angle {
    fn sum<I: Iterator<Item = Angle>>(iter: I) -> Angle {
        iter.fold(Angle::ZERO, |acc, a| acc + a)
    }
}
