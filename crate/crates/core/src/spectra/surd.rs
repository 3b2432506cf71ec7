use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact element a + b sqrt(d) of Q(sqrt(d)) for a positive integer d.
///
/// When d is a perfect square the value is folded into `a` and `b` stays zero,
/// so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

fn int_sqrt(d: u64) -> Option<u64> {
    let r = (d as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(d)).then_some(r)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadSurd {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        assert!(d > 0);
        match int_sqrt(d) {
            Some(r) => QuadSurd { a: a + b * rat(r as i64), b: BigRational::zero(), d },
            None => QuadSurd { a, b, d },
        }
    }

    pub fn integer(n: i64, d: u64) -> Self {
        Self::new(rat(n), BigRational::zero(), d)
    }

    /// sqrt(d).
    pub fn root(d: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.a + &o.a, &self.b + &o.b, self.d)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.a - &o.a, &self.b - &o.b, self.d)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = rat(self.d as i64);
        Self::new(&self.a * &o.a + &self.b * &o.b * d, &self.a * &o.b + &self.b * &o.a, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// a^2 - d b^2.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d as i64)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    /// Sign, decided exactly.
    pub fn signum(&self) -> i32 {
        let sa = if self.a.is_zero() { 0 } else if self.a.is_positive() { 1 } else { -1 };
        let sb = if self.b.is_zero() { 0 } else if self.b.is_positive() { 1 } else { -1 };
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // a and b sqrt(d) have opposite signs; compare a^2 with d b^2
        let n = self.norm();
        if n.is_zero() {
            0
        } else if n.is_positive() {
            sa
        } else {
            sb
        }
    }

    /// Exact comparison with another element of the same field.
    pub fn cmp_to(&self, o: &Self) -> std::cmp::Ordering {
        self.sub(o).signum().cmp(&0)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}
