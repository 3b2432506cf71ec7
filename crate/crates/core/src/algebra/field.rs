use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Largest field order handled by the table-driven arithmetic.
pub const MAX_FIELD_ORDER: u32 = 32;

/// Finite field GF(p^k) with elements encoded as integers `0..q`.
///
/// An element `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` (coefficients in `0..p`)
/// is encoded as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    poly: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub k: u32,
    pub poly: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.poly == other.poly
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Built-in reduction polynomials (low degree first, monic).
pub fn default_poly(p: u32, k: u32) -> Option<Vec<u32>> {
    match (p, k) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        _ => None,
    }
}

// Polynomials over Z/p, low degree first, trailing zeros trimmed.
fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead = *b.last().expect("nonzero divisor");
    let lead_inv = mod_inv(lead, p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = (r[r.len() - 1] * lead_inv) % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| (a * x) % p == 1).expect("unit mod p")
}

/// True when the monic polynomial `poly` of degree `k` has no monic factor of
/// degree between 1 and k/2 over Z/p.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let poly = trim(poly.to_vec());
    let k = poly.len().saturating_sub(1);
    if k == 0 {
        return false;
    }
    for d in 1..=k / 2 {
        let count = (p as usize).pow(d as u32);
        for low in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                f.push((x % p as usize) as u32);
                x /= p as usize;
            }
            f.push(1);
            if poly_rem(&poly, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^k). `poly` is the monic reduction polynomial, low degree first.
    pub fn new(p: u32, k: u32, poly: Option<&[u32]>) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NonPrimeP(p));
        }
        if k == 0 {
            return Err(AlgebraError::InvalidPolynomial("degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_FIELD_ORDER as u64 {
            return Err(AlgebraError::FieldTooLarge(q));
        }
        let q = q as u32;
        let poly = match poly {
            Some(c) if k > 1 => c.to_vec(),
            _ => default_poly(p, k).ok_or(AlgebraError::MissingPolynomial { p, k })?,
        };
        if poly.len() != k as usize + 1 || poly[k as usize] != 1 || poly.iter().any(|&c| c >= p) {
            return Err(AlgebraError::InvalidPolynomial(format!(
                "expected {} coefficients in 0..{} with leading 1, got {:?}",
                k + 1,
                p,
                poly
            )));
        }
        if !is_irreducible(&poly, p) {
            return Err(AlgebraError::ReduciblePolynomial(poly));
        }
        let qs = q as usize;
        let digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(k as usize);
            let mut x = x;
            for _ in 0..k {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let undigits = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s) as u8;
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &poly, p);
                r.resize(k as usize, 0);
                mul[(a * q + b) as usize] = undigits(&r) as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..q {
            neg[a as usize] = (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as u8;
            if a != 0 {
                inv[a as usize] = (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap() as u8;
            }
        }
        Ok(FieldSpec { p, k, q, poly, add, mul, neg, inv })
    }

    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn params(&self) -> FieldParams {
        FieldParams { p: self.p, k: self.k, poly: self.poly.clone() }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// Elements x^0, ..., x^{k-1}: a basis of GF(q) over GF(p).
    pub fn prime_basis(&self) -> Vec<u8> {
        (0..self.k).map(|i| self.p.pow(i) as u8).collect()
    }
}
