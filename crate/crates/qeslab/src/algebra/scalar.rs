//! Exact scalars: arbitrary-precision rationals and elements of a real
//! quadratic extension ℚ(√d).
//!
//! The quadratic variant is needed because several coupling constants are
//! square roots of rational expressions; all arithmetic stays closed inside
//! a single fixed extension.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rat = Ratio<BigInt>;

/// An exact scalar: either a rational or `a + b·√d` with `b ≠ 0`,
/// `d > 0` and `d` not a rational square.
///
/// Arithmetic between two quadratic scalars with *different* `d` panics;
/// every computation in this crate lives inside one extension at a time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rat),
    Quadratic { a: Rat, b: Rat, d: Rat },
}

fn rat_i64(n: i64) -> Rat {
    Ratio::from_integer(BigInt::from(n))
}

/// True iff `r ≥ 0` is the square of a rational.
fn is_rational_square(r: &Rat) -> bool {
    if r.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let s = n.sqrt();
        &s * &s == *n
    };
    is_sq(r.numer()) && is_sq(r.denom())
}

/// Exact square root of a non-negative perfect-square rational.
fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &ns * &ns == *r.numer() && &ds * &ds == *r.denom() {
        Some(Ratio::new(ns, ds))
    } else {
        None
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(rat_i64(n))
    }

    /// `num/den` as an exact rational. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(Ratio::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::Rational(r)
    }

    /// Builds `a + b·√d`, validating that `d > 0` and `d` is not a rational
    /// square. Collapses to the plain rational `a` when `b = 0`.
    pub fn quadratic(a: Rat, b: Rat, d: Rat) -> Self {
        assert!(d.is_positive(), "quadratic extension requires d > 0");
        assert!(
            !is_rational_square(&d),
            "d = {} is a rational square; use a plain rational",
            d
        );
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::Quadratic { a, b, d }
        }
    }

    /// The square root of a non-negative scalar, when it exists in ℚ or in
    /// ℚ(√d) for the scalar's own extension.
    ///
    /// For a rational `r`: returns `√r` if `r` is a perfect square, otherwise
    /// `√r` as the quadratic element `0 + 1·√r` (with `d = r`) if `r > 0`.
    /// For `a + b√d`: searches for `u + v√d` with `(u + v√d)² = a + b√d`.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_negative() {
                    None
                } else if let Some(s) = rational_sqrt(r) {
                    Some(Scalar::Rational(s))
                } else {
                    Some(Scalar::quadratic(Rat::zero(), Rat::one(), r.clone()))
                }
            }
            Scalar::Quadratic { a, b, d } => {
                // (u + v√d)² = u² + dv² + 2uv√d; solve u² as a root of
                // 4t² − 4at + db² = 0, i.e. t = (a ± √(a² − db²))/2.
                let disc = a * a - d * (b * b);
                let root = rational_sqrt(&disc)?;
                for sign in [Rat::one(), -Rat::one()] {
                    let t = (a + &sign * &root) / rat_i64(2);
                    if let Some(u) = rational_sqrt(&t) {
                        if u.is_zero() {
                            continue;
                        }
                        let v = b / (rat_i64(2) * &u);
                        let cand = Scalar::quadratic(u, v, d.clone());
                        if &(&cand * &cand) == self && cand.signum() >= 0 {
                            return Some(cand);
                        }
                        let neg = -&cand;
                        if &(&neg * &neg) == self && neg.signum() >= 0 {
                            return Some(neg);
                        }
                    }
                }
                None
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    /// The rational part (`a` for `a + b√d`).
    pub fn rational_part(&self) -> &Rat {
        match self {
            Scalar::Rational(r) => r,
            Scalar::Quadratic { a, .. } => a,
        }
    }

    /// Conjugate `a + b√d ↦ a − b√d`; identity on rationals.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone()),
            Scalar::Quadratic { a, b, d } => Scalar::Quadratic {
                a: a.clone(),
                b: -b.clone(),
                d: d.clone(),
            },
        }
    }

    /// Field norm `(a + b√d)(a − b√d) = a² − d·b²` as a rational.
    pub fn norm(&self) -> Rat {
        match self {
            Scalar::Rational(r) => r * r,
            Scalar::Quadratic { a, b, d } => a * a - d * (b * b),
        }
    }

    /// Exact sign as a real number: −1, 0, or 1.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Quadratic { a, b, d } => {
                // sign of a + b√d with √d > 0 irrational (so never zero)
                match (a.is_negative(), b.is_negative()) {
                    (false, false) => 1,
                    (true, true) => -1,
                    _ => {
                        // compare a² with d·b²: a + b√d > 0 iff the dominant
                        // side is the positive one
                        let lhs = a * a;
                        let rhs = d * (b * b);
                        let a_dominates = lhs > rhs;
                        if b.is_negative() {
                            // a > 0, b < 0
                            if a_dominates {
                                1
                            } else {
                                -1
                            }
                        } else {
                            // a < 0, b > 0
                            if a_dominates {
                                -1
                            } else {
                                1
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().expect("rational out of f64 range"),
            Scalar::Quadratic { a, b, d } => {
                let af = a.to_f64().expect("out of range");
                let bf = b.to_f64().expect("out of range");
                let df = d.to_f64().expect("out of range");
                af + bf * df.sqrt()
            }
        }
    }

    pub fn inv(&self) -> Scalar {
        Scalar::one() / self.clone()
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn promote(&self, d: &Rat) -> (Rat, Rat) {
        match self {
            Scalar::Rational(r) => (r.clone(), Rat::zero()),
            Scalar::Quadratic { a, b, d: sd } => {
                assert_eq!(
                    sd, d,
                    "mixed quadratic extensions: √{} vs √{}",
                    sd, d
                );
                (a.clone(), b.clone())
            }
        }
    }

    fn join_d<'a>(&'a self, other: &'a Scalar) -> Option<&'a Rat> {
        match (self, other) {
            (Scalar::Quadratic { d, .. }, Scalar::Rational(_)) => Some(d),
            (Scalar::Rational(_), Scalar::Quadratic { d, .. }) => Some(d),
            (Scalar::Quadratic { d: d1, .. }, Scalar::Quadratic { d: d2, .. }) => {
                assert_eq!(d1, d2, "mixed quadratic extensions: √{} vs √{}", d1, d2);
                Some(d1)
            }
            _ => None,
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match self.join_d(rhs) {
            None => match (self, rhs) {
                (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
                _ => unreachable!(),
            },
            Some(d) => {
                let d = d.clone();
                let (a1, b1) = self.promote(&d);
                let (a2, b2) = rhs.promote(&d);
                let b = b1 + b2;
                if b.is_zero() {
                    Scalar::Rational(a1 + a2)
                } else {
                    Scalar::Quadratic { a: a1 + a2, b, d }
                }
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match self.join_d(rhs) {
            None => match (self, rhs) {
                (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
                _ => unreachable!(),
            },
            Some(d) => {
                let d = d.clone();
                let (a1, b1) = self.promote(&d);
                let (a2, b2) = rhs.promote(&d);
                let a = &a1 * &a2 + &d * &(&b1 * &b2);
                let b = &a1 * &b2 + &a2 * &b1;
                if b.is_zero() {
                    Scalar::Rational(a)
                } else {
                    Scalar::Quadratic { a, b, d }
                }
            }
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match rhs {
            Scalar::Rational(r) => {
                assert!(!r.is_zero(), "division by zero scalar");
                match self {
                    Scalar::Rational(x) => Scalar::Rational(x / r),
                    Scalar::Quadratic { a, b, d } => Scalar::Quadratic {
                        a: a / r,
                        b: b / r,
                        d: d.clone(),
                    },
                }
            }
            Scalar::Quadratic { .. } => {
                // 1/(a + b√d) = (a − b√d)/(a² − db²); the norm of a genuine
                // quadratic element is never zero.
                let n = rhs.norm();
                assert!(!n.is_zero(), "division by zero scalar");
                let conj = rhs.conj();
                let num = self * &conj;
                &num / &Scalar::Rational(n)
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            Scalar::Quadratic { a, b, d } => Scalar::Quadratic {
                a: -a.clone(),
                b: -b.clone(),
                d: d.clone(),
            },
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        let diff = self - other;
        Some(match diff.signum() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", r),
            Scalar::Quadratic { a, b, d } => {
                if a.is_zero() {
                    write!(f, "{}*sqrt({})", b, d)
                } else if b.is_negative() {
                    write!(f, "{}{}*sqrt({})", a, b, d)
                } else {
                    write!(f, "{}+{}*sqrt({})", a, b, d)
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => s.serialize_str(&r.to_string()),
            Scalar::Quadratic { a, b, d } => {
                use serde::ser::SerializeStruct;
                let mut st = s.serialize_struct("Quadratic", 3)?;
                st.serialize_field("a", &a.to_string())?;
                st.serialize_field("b", &b.to_string())?;
                st.serialize_field("d", &d.to_string())?;
                st.end()
            }
        }
    }
}

/// Parses `"7"`, `"-3/4"`, etc. into an exact rational scalar.
impl FromStr for Scalar {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rat::from_str(s.trim())
            .map(Scalar::Rational)
            .map_err(|e| format!("invalid rational '{}': {}", s, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn rational_arithmetic() {
        let x = q(3, 4);
        let y = q(-2, 3);
        assert_eq!(&x + &y, q(1, 12));
        assert_eq!(&x * &y, q(-1, 2));
        assert_eq!(&x / &y, q(-9, 8));
    }

    #[test]
    fn quadratic_closure_and_norm() {
        // (1 + 2√3)(1 − 2√3) = 1 − 12 = −11
        let d = Rat::from_integer(BigInt::from(3));
        let s = Scalar::quadratic(
            Rat::from_integer(BigInt::from(1)),
            Rat::from_integer(BigInt::from(2)),
            d,
        );
        let prod = &s * &s.conj();
        assert_eq!(prod, Scalar::from_int(-11));
        assert_eq!(s.norm(), Rat::from_integer(BigInt::from(-11)));
    }

    #[test]
    fn quadratic_division_roundtrip() {
        let d = Rat::new(BigInt::from(5), BigInt::from(2));
        let s = Scalar::quadratic(Rat::new(BigInt::from(1), BigInt::from(3)), Rat::one(), d);
        let inv = s.inv();
        assert!((&s * &inv).is_one());
    }

    #[test]
    #[should_panic(expected = "mixed quadratic extensions")]
    fn mixed_extensions_panic() {
        let a = Scalar::quadratic(Rat::zero(), Rat::one(), Rat::from_integer(BigInt::from(2)));
        let b = Scalar::quadratic(Rat::zero(), Rat::one(), Rat::from_integer(BigInt::from(3)));
        let _ = &a + &b;
    }

    #[test]
    #[should_panic(expected = "rational square")]
    fn square_d_rejected() {
        Scalar::quadratic(Rat::zero(), Rat::one(), Rat::from_integer(BigInt::from(9)));
    }

    #[test]
    fn exact_sign() {
        // 2 − √3 > 0, 1 − √3 < 0
        let d = Rat::from_integer(BigInt::from(3));
        let pos = Scalar::quadratic(
            Rat::from_integer(BigInt::from(2)),
            -Rat::one(),
            d.clone(),
        );
        let neg = Scalar::quadratic(Rat::one(), -Rat::one(), d);
        assert_eq!(pos.signum(), 1);
        assert_eq!(neg.signum(), -1);
    }

    #[test]
    fn sqrt_of_rational() {
        assert_eq!(q(9, 4).sqrt().unwrap(), q(3, 2));
        let r = q(5, 1).sqrt().unwrap();
        assert_eq!(&r * &r, q(5, 1));
        assert!(q(-1, 1).sqrt().is_none());
    }

    #[test]
    fn sqrt_in_extension() {
        // (1 + √2)² = 3 + 2√2
        let d = Rat::from_integer(BigInt::from(2));
        let target = Scalar::quadratic(
            Rat::from_integer(BigInt::from(3)),
            Rat::from_integer(BigInt::from(2)),
            d.clone(),
        );
        let r = target.sqrt().unwrap();
        assert_eq!(&r * &r, target);
        assert!(r.signum() > 0);
    }
}
