use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, FieldSpec};

/// Element of F_q[t]/(t^s): coefficient vector of length s, low degree first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElement {
    pub coeffs: Vec<u8>,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (d, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match d {
                0 => format!("{c}"),
                1 if c == 1 => "t".to_string(),
                1 => format!("{c}t"),
                _ if c == 1 => format!("t^{d}"),
                _ => format!("{c}t^{d}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Largest index of a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// The truncated polynomial ring R_s = F_q[t]/(t^s).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedRing {
    field: Arc<FieldSpec>,
    s: usize,
}

impl TruncatedRing {
    pub fn new(field: Arc<FieldSpec>, s: usize) -> Result<Self, AlgebraError> {
        if s == 0 {
            return Err(AlgebraError::InvalidTruncation(s));
        }
        Ok(TruncatedRing { field, s })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// q^s, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        (self.q() as u128).checked_pow(self.s as u32)
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coeffs: vec![0; self.s] }
    }

    pub fn one(&self) -> RingElement {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u8) -> RingElement {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    /// c * t^d (zero when d >= s).
    pub fn monomial(&self, c: u8, d: usize) -> RingElement {
        let mut e = self.zero();
        if d < self.s {
            e.coeffs[d] = c;
        }
        e
    }

    pub fn t(&self) -> RingElement {
        self.monomial(1, 1)
    }

    /// Builds an element from coefficients, zero-padding or truncating mod t^s.
    pub fn element(&self, coeffs: &[u8]) -> Result<RingElement, AlgebraError> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c as u32 >= self.q()) {
            return Err(AlgebraError::DigitOutOfRange { digit: bad as u32, q: self.q() });
        }
        let mut e = self.zero();
        for (d, &c) in coeffs.iter().take(self.s).enumerate() {
            e.coeffs[d] = c;
        }
        Ok(e)
    }

    pub fn check(&self, a: &RingElement) -> Result<(), AlgebraError> {
        if a.coeffs.len() != self.s {
            return Err(AlgebraError::MismatchedRing { expected: self.s, found: a.coeffs.len() });
        }
        if let Some(&bad) = a.coeffs.iter().find(|&&c| c as u32 >= self.q()) {
            return Err(AlgebraError::DigitOutOfRange { digit: bad as u32, q: self.q() });
        }
        Ok(())
    }

    pub fn arith(&self, a: &RingElement, b: &RingElement, op: RingOp) -> Result<RingElement, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            RingOp::Add => self.add(a, b),
            RingOp::Sub => self.sub(a, b),
            RingOp::Mul => self.mul(a, b),
        })
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut out = self.zero();
        self.add_into(&a.coeffs, &b.coeffs, &mut out.coeffs);
        out
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let f = &self.field;
        RingElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.sub(x, y)).collect() }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        RingElement { coeffs: a.coeffs.iter().map(|&x| self.field.neg(x)).collect() }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut out = self.zero();
        self.mul_into(&a.coeffs, &b.coeffs, &mut out.coeffs);
        out
    }

    #[inline]
    pub(crate) fn add_into(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        for d in 0..self.s {
            out[d] = self.field.add(a[d], b[d]);
        }
    }

    /// out = a * b mod t^s. `out` must not alias the inputs.
    #[inline]
    pub(crate) fn mul_into(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        let f = &*self.field;
        out[..self.s].fill(0);
        for i in 0..self.s {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.s - i {
                if b[j] != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
                }
            }
        }
    }

    /// out += a * b mod t^s.
    #[inline]
    pub(crate) fn mul_acc(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        let f = &*self.field;
        for i in 0..self.s {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.s - i {
                if b[j] != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
                }
            }
        }
    }

    /// Units of the local ring are exactly the elements with nonzero constant term.
    pub fn is_unit(&self, a: &RingElement) -> bool {
        a.coeffs[0] != 0
    }

    /// Inverse of a unit via the geometric series in its nilpotent part.
    pub fn inv(&self, a: &RingElement) -> Option<RingElement> {
        let c0 = self.field.inv(a.coeffs[0])?;
        // a = a0 (1 + u) with u nilpotent; (1+u)^{-1} = sum (-u)^k
        let scaled = RingElement { coeffs: a.coeffs.iter().map(|&x| self.field.mul(x, c0)).collect() };
        let mut minus_u = self.neg(&scaled);
        minus_u.coeffs[0] = 0;
        let mut acc = self.one();
        let mut pow = self.one();
        for _ in 1..self.s {
            pow = self.mul(&pow, &minus_u);
            acc = self.add(&acc, &pow);
        }
        Some(RingElement { coeffs: acc.coeffs.iter().map(|&x| self.field.mul(x, c0)).collect() })
    }

    /// All q^s elements in code order (coefficient of t^0 varies fastest).
    pub fn elements(&self) -> Vec<RingElement> {
        polys_of_degree_at_most(self, self.s - 1)
    }
}

fn polys_of_degree_at_most(ring: &TruncatedRing, deg: usize) -> Vec<RingElement> {
    let q = ring.q() as usize;
    let len = deg + 1;
    let count = q.pow(len as u32);
    let mut out = Vec::with_capacity(count);
    for mut x in 0..count {
        let mut e = ring.zero();
        for d in 0..len {
            e.coeffs[d] = (x % q) as u8;
            x /= q;
        }
        out.push(e);
    }
    out
}

/// T^m for T = {a + b t : a, b in F_q}: the polynomials of degree at most m,
/// truncated mod t^s.
#[derive(Clone, Debug)]
pub struct TPowerModule {
    pub m: usize,
    pub s: usize,
    pub elements: Vec<RingElement>,
}

impl TPowerModule {
    pub fn enumerate(ring: &TruncatedRing, m: usize) -> Self {
        let deg = m.min(ring.s() - 1);
        TPowerModule { m, s: ring.s(), elements: polys_of_degree_at_most(ring, deg) }
    }

    /// q^{min(m, s-1) + 1}
    pub fn expected_size(q: u32, m: usize, s: usize) -> u128 {
        (q as u128).pow(m.min(s - 1) as u32 + 1)
    }

    pub fn contains(&self, a: &RingElement) -> bool {
        a.coeffs.len() == self.s && a.coeffs.iter().skip(self.m + 1).all(|&c| c == 0)
    }

    /// Additive generators over F_p: beta * t^d for beta in the prime basis.
    pub fn additive_basis(ring: &TruncatedRing, m: usize) -> Vec<RingElement> {
        let deg = m.min(ring.s() - 1);
        let mut out = Vec::new();
        for d in 0..=deg {
            for b in ring.field().prime_basis() {
                out.push(ring.monomial(b, d));
            }
        }
        out
    }
}

/// Membership in T^m without enumeration.
pub fn in_tpower(a: &RingElement, m: usize) -> bool {
    a.coeffs.iter().skip(m + 1).all(|&c| c == 0)
}
