//! Exact rationals with a machine-word fast path.
//!
//! Almost every entry that shows up in the action matrices is 0, ±1 or a
//! small fraction, so values are kept as `Ratio<i64>` until an operation
//! overflows, at which point they are promoted to `BigRational`. Big values
//! that fit back into `i64` are demoted again, which keeps the
//! representation canonical: equal numbers always have equal variants.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone)]
pub enum Q {
    Small(Ratio<i64>),
    Big(BigRational),
}

fn to_big(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn demote(r: BigRational) -> Q {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(p), Some(q)) => Q::Small(Ratio::new_raw(p, q)),
        _ => Q::Big(r),
    }
}

impl Q {
    pub fn zero() -> Q {
        Q::Small(Ratio::from_integer(0))
    }

    pub fn one() -> Q {
        Q::Small(Ratio::from_integer(1))
    }

    pub fn from_int(v: i64) -> Q {
        Q::Small(Ratio::from_integer(v))
    }

    /// `p/q` in lowest terms. Panics on `q == 0`.
    pub fn new(p: i64, q: i64) -> Q {
        assert!(q != 0, "zero denominator");
        Q::Small(Ratio::new(p, q))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Q::Small(r) => r.is_zero(),
            Q::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Q::Small(r) => r.is_one(),
            Q::Big(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(r) => r.is_negative(),
            Q::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(r) => r.is_integer(),
            Q::Big(r) => r.is_integer(),
        }
    }

    fn big(&self) -> BigRational {
        match self {
            Q::Small(r) => to_big(r),
            Q::Big(r) => r.clone(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Q::Small(r) => match r.numer().checked_abs() {
                Some(_) => Q::Small(r.recip()),
                None => demote(to_big(r).recip()),
            },
            Q::Big(r) => demote(r.recip()),
        }
    }

    pub fn numer_string(&self) -> String {
        match self {
            Q::Small(r) => r.numer().to_string(),
            Q::Big(r) => r.numer().to_string(),
        }
    }

    pub fn denom_string(&self) -> String {
        match self {
            Q::Small(r) => r.denom().to_string(),
            Q::Big(r) => r.denom().to_string(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Q::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Q::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Q> for &'a Q {
            type Output = Q;
            fn $method(self, rhs: &'a Q) -> Q {
                if let (Q::Small(a), Q::Small(b)) = (self, rhs) {
                    if let Some(r) = a.$checked(b) {
                        return Q::Small(r);
                    }
                }
                demote(self.big().$method(rhs.big()))
            }
        }

        impl $trait<Q> for Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $trait<&'a Q> for Q {
            type Output = Q;
            fn $method(self, rhs: &'a Q) -> Q {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, rhs: &'a Q) -> Q {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Q::Small(a), Q::Small(b)) = (self, rhs) {
            if let Some(r) = a.checked_div(b) {
                return Q::Small(r);
            }
        }
        demote(self.big() / rhs.big())
    }
}

impl Div<Q> for Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        (&self).div(&rhs)
    }
}

impl<'a> Div<&'a Q> for Q {
    type Output = Q;
    fn div(self, rhs: &'a Q) -> Q {
        (&self).div(rhs)
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(r) => match r.numer().checked_neg() {
                Some(p) => Q::Small(Ratio::new_raw(p, *r.denom())),
                None => demote(-to_big(r)),
            },
            Q::Big(r) => demote(-r.clone()),
        }
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, rhs: &Q) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, rhs: &Q) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Q> for Q {
    fn mul_assign(&mut self, rhs: &Q) {
        *self = &*self * rhs;
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Q) -> bool {
        match (self, other) {
            (Q::Small(a), Q::Small(b)) => a == b,
            (Q::Big(a), Q::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Q::Small(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Q::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        match (self, other) {
            (Q::Small(a), Q::Small(b)) => {
                // cross multiplication in i128 cannot overflow for i64 parts
                let l = *a.numer() as i128 * *b.denom() as i128;
                let r = *b.numer() as i128 * *a.denom() as i128;
                l.cmp(&r)
            }
            _ => self.big().cmp(&other.big()),
        }
    }
}

impl Default for Q {
    fn default() -> Q {
        Q::zero()
    }
}

impl From<i64> for Q {
    fn from(v: i64) -> Q {
        Q::from_int(v)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Q::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Q::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Q::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseQError(pub String);

impl FromStr for Q {
    type Err = ParseQError;

    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let err = || ParseQError(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let valid = |x: &str| {
            let digits = x.strip_prefix('-').unwrap_or(x);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(p) || !valid(q) || q.starts_with('-') {
            return Err(err());
        }
        let p: BigInt = p.parse().map_err(|_| err())?;
        let q: BigInt = q.parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        Ok(demote(BigRational::new(p, q)))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Q, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
