//! Exact scalar types used by the tree-map algebra.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `num / den` in reduced form.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Ring operations needed to evaluate brackets on tree maps.
///
/// Implemented for exact rationals, for polynomials in the symmetric-BCH
/// parameter, and for `f64` (used only by numeric experiments).
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn mul_rational(&self, r: &Rational) -> Self;
    fn neg(&self) -> Self;

    /// `self += mult * (a*b - c*d)`; the hot loop of every bracket.
    fn add_cross(&mut self, mult: u32, a: &Self, b: &Self, c: &Self, d: &Self) {
        let mut t = a.mul_ref(b);
        t.sub_assign_ref(&c.mul_ref(d));
        if mult != 1 {
            t = t.mul_rational(&from_int(mult as i64));
        }
        self.add_assign_ref(&t);
    }
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        if !Zero::is_zero(other) {
            *self += other;
        }
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        if !Zero::is_zero(other) {
            *self -= other;
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        self * r
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_cross(&mut self, mult: u32, a: &Self, b: &Self, c: &Self, d: &Self) {
        let left = !Zero::is_zero(a) && !Zero::is_zero(b);
        let right = !Zero::is_zero(c) && !Zero::is_zero(d);
        let t = match (left, right) {
            (false, false) => return,
            (true, false) => a * b,
            (false, true) => -(c * d),
            (true, true) => a * b - c * d,
        };
        if mult == 1 {
            *self += t;
        } else {
            *self += t * BigInt::from(mult);
        }
    }
}

impl Coefficient for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        self * to_f64(r)
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Nearest `f64`, robust to numerators and denominators far beyond `f64` range.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
