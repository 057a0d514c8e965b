//! Exact scalars: rationals and Gaussian rationals.
//!
//! [`Q`] keeps small fractions inline as a pair of `i64`s and only spills to an
//! arbitrary-precision [`BigRational`] when an intermediate result does not fit.
//! The representation is canonical (lowest terms, positive denominator, inline
//! whenever possible), so structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Operations shared by the two coefficient fields (ℚ and ℚ(i)).
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn recip(&self) -> Self;
    fn from_q(q: &Q) -> Self;

    fn over(&self, other: &Self) -> Self {
        self.times(&other.recip())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(v: i64) -> Self {
        Self::from_q(&Q::from(v))
    }

    /// `self -= a * b`
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.minus(&a.times(b));
    }

    /// Complex approximation, used only to seed exact root searches.
    fn approx(&self) -> num_complex::Complex64;
}

#[derive(Clone)]
pub enum Q {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "zero denominator");
        Q::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Q {
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        if n == 0 {
            return Q::Small(0, 1);
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Q::Small(n, d),
            _ => Q::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_big(r: BigRational) -> Q {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Q::Small(n, d);
        }
        Q::Big(Box::new(r))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(n, _) => BigInt::from(*n),
            Q::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, d) => BigInt::from(*d),
            Q::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(n, _) => *n < 0,
            Q::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            self.negated()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Q::Small(n, d) => *n as f64 / *d as f64,
            Q::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Best rational approximation of `x` with denominator at most `max_den`
    /// (continued-fraction convergents).
    pub fn approximate(x: f64, max_den: i64) -> Option<Q> {
        if !x.is_finite() {
            return None;
        }
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        let mut r = x;
        for _ in 0..64 {
            let a = r.floor();
            if a.abs() > 1e15 {
                break;
            }
            let a = a as i128;
            let h2 = a * h1 + h0;
            let k2 = a * k1 + k0;
            if k2 > max_den as i128 {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            let frac = r - r.floor();
            if frac.abs() < 1e-12 {
                break;
            }
            r = 1.0 / frac;
        }
        if k1 == 0 {
            return None;
        }
        Some(Q::from_i128(h1, k1))
    }
}

impl From<i64> for Q {
    fn from(v: i64) -> Q {
        Q::Small(v, 1)
    }
}

impl From<BigRational> for Q {
    fn from(r: BigRational) -> Q {
        Q::from_big(r)
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Q) -> bool {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => a == c && b == d,
            (Q::Big(a), Q::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Q::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Q::Big(b) => {
                1u8.hash(state);
                b.hash(state);
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
            (Q::Small(a, b), Q::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(b) => write!(f, "{b}"),
        }
    }
}

impl Field for Q {
    fn zero() -> Q {
        Q::Small(0, 1)
    }

    fn one() -> Q {
        Q::Small(1, 1)
    }

    fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    fn plus(&self, other: &Q) -> Q {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return Q::from_i128(*a as i128 + *c as i128, 1);
                }
                Q::from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => Q::from_big(self.to_big() + other.to_big()),
        }
    }

    fn minus(&self, other: &Q) -> Q {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                Q::from_i128(*a as i128 * *d as i128 - *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => Q::from_big(self.to_big() - other.to_big()),
        }
    }

    fn times(&self, other: &Q) -> Q {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Q::from_big(self.to_big() * other.to_big()),
        }
    }

    fn negated(&self) -> Q {
        match self {
            Q::Small(n, d) => Q::from_i128(-(*n as i128), *d as i128),
            Q::Big(b) => Q::from_big(-(**b).clone()),
        }
    }

    fn recip(&self) -> Q {
        match self {
            Q::Small(0, _) => panic!("inverse of zero"),
            Q::Small(n, d) => Q::from_i128(*d as i128, *n as i128),
            Q::Big(b) => Q::from_big(b.recip()),
        }
    }

    fn over(&self, other: &Q) -> Q {
        match (self, other) {
            (_, Q::Small(0, _)) => panic!("division by zero"),
            (Q::Small(a, b), Q::Small(c, d)) => Q::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128),
            _ => Q::from_big(self.to_big() / other.to_big()),
        }
    }

    fn from_q(q: &Q) -> Q {
        q.clone()
    }

    fn sub_mul_assign(&mut self, a: &Q, b: &Q) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if let (Q::Small(sn, sd), Q::Small(an, ad), Q::Small(bn, bd)) = (&*self, a, b) {
            // all denominators 1 is the overwhelmingly common case
            if *sd == 1 && *ad == 1 && *bd == 1 {
                *self = Q::from_i128(*sn as i128 - *an as i128 * *bn as i128, 1);
                return;
            }
        }
        *self = self.minus(&a.times(b));
    }

    fn approx(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.to_f64(), 0.0)
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                self.plus(&o)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                self.minus(&o)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                self.times(&o)
            }
        }
        impl Div for $t {
            type Output = $t;
            fn div(self, o: $t) -> $t {
                self.over(&o)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.negated()
            }
        }
    };
}

forward_ops!(Q);
forward_ops!(Gaussian);

/// A Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: Q,
    pub im: Q,
}

impl Gaussian {
    pub fn new(re: Q, im: Q) -> Gaussian {
        Gaussian { re, im }
    }

    pub fn i() -> Gaussian {
        Gaussian::new(Q::zero(), Q::one())
    }

    pub fn conj(&self) -> Gaussian {
        Gaussian::new(self.re.clone(), self.im.negated())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm(&self) -> Q {
        self.re.times(&self.re).plus(&self.im.times(&self.im))
    }
}

impl From<Q> for Gaussian {
    fn from(q: Q) -> Gaussian {
        Gaussian::new(q, Q::zero())
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if self.im == Q::from(-1) {
            "-i".to_string()
        } else {
            format!("{}i", self.im)
        };
        if self.re.is_zero() {
            write!(f, "{im}")
        } else if self.im.is_negative() {
            write!(f, "{}{}", self.re, im)
        } else {
            write!(f, "{}+{}", self.re, im)
        }
    }
}

impl Field for Gaussian {
    fn zero() -> Gaussian {
        Gaussian::new(Q::zero(), Q::zero())
    }

    fn one() -> Gaussian {
        Gaussian::new(Q::one(), Q::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn plus(&self, o: &Gaussian) -> Gaussian {
        Gaussian::new(self.re.plus(&o.re), self.im.plus(&o.im))
    }

    fn minus(&self, o: &Gaussian) -> Gaussian {
        Gaussian::new(self.re.minus(&o.re), self.im.minus(&o.im))
    }

    fn times(&self, o: &Gaussian) -> Gaussian {
        if self.im.is_zero() && o.im.is_zero() {
            return Gaussian::from(self.re.times(&o.re));
        }
        Gaussian::new(
            self.re.times(&o.re).minus(&self.im.times(&o.im)),
            self.re.times(&o.im).plus(&self.im.times(&o.re)),
        )
    }

    fn negated(&self) -> Gaussian {
        Gaussian::new(self.re.negated(), self.im.negated())
    }

    fn recip(&self) -> Gaussian {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero");
        Gaussian::new(self.re.over(&n), self.im.negated().over(&n))
    }

    fn from_q(q: &Q) -> Gaussian {
        Gaussian::from(q.clone())
    }

    fn approx(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}
