//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Characteristic polynomial det(x I - A), low degree first, by
/// Faddeev-LeVerrier in exact arithmetic.
pub fn charpoly(a: &[Vec<i64>]) -> Vec<BigRational> {
    let n = a.len();
    let am: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = rat(1);
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    s += &am[i][l] * &m[l][j];
                }
                if i == j {
                    s += &c[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &am[i][l] * &m[l][i];
            }
        }
        c[n - k] = -tr / rat(k as i64);
    }
    c
}

/// Coefficients of p(y + x).
fn taylor_shift(p: &[BigRational], x: &BigRational) -> Vec<BigRational> {
    let mut c = p.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * x;
            c[j] += t;
        }
    }
    c
}

/// Number of roots strictly above x. Descartes' rule is exact for
/// polynomials with only real roots.
fn roots_above(p: &[BigRational], x: &BigRational) -> usize {
    let c = taylor_shift(p, x);
    let signs: Vec<bool> = c.iter().filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Eigenvalues of an integer symmetric matrix, descending, to within `width`.
pub fn charpoly_eigenvalues(a: &[Vec<i64>], width: f64) -> Vec<f64> {
    let n = a.len();
    let p = charpoly(a);
    let bound = a.iter().map(|r| r.iter().map(|v| v.abs()).sum::<i64>()).max().unwrap_or(0) + 1;
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let (mut lo, mut hi) = (rat(-bound), rat(bound));
        while (&hi - &lo).to_f64().unwrap() > width {
            let mid = (&lo + &hi) / rat(2);
            if roots_above(&p, &mid) >= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(((lo + hi) / rat(2)).to_f64().unwrap());
    }
    out
}

/// F_q = F_p[x]/(poly) with elements as base-p digit vectors, and
/// R_s = F_q[t]/(t^s) on top of it, written out by hand.
#[derive(Clone, Debug)]
pub struct NaiveRing {
    pub p: u32,
    pub k: u32,
    /// Monic, low degree first.
    pub poly: Vec<u32>,
    pub s: usize,
}

impl NaiveRing {
    pub fn q(&self) -> u32 {
        self.p.pow(self.k)
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn field_add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.undigits(&x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect::<Vec<_>>())
    }

    pub fn field_mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut prod = vec![0u32; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        // long division by the monic polynomial
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (i, &pc) in self.poly.iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + self.p * self.p - c * pc % self.p) % self.p;
            }
        }
        self.undigits(&prod[..k])
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.field_add(x, y)).collect()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.s];
        for i in 0..self.s {
            for j in 0..self.s - i {
                out[i + j] = self.field_add(out[i + j], self.field_mul(a[i], b[j]));
            }
        }
        out
    }

    /// Product of (n+1) x (n+1) matrices with entries in R_s.
    pub fn mat_mul(&self, a: &[Vec<Vec<u32>>], b: &[Vec<Vec<u32>>]) -> Vec<Vec<Vec<u32>>> {
        let d = a.len();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(vec![0; self.s], |acc, l| self.add(&acc, &self.mul(&a[i][l], &b[l][j]))))
                    .collect()
            })
            .collect()
    }

    pub fn identity(&self, d: usize) -> Vec<Vec<Vec<u32>>> {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut e = vec![0; self.s];
                        if i == j {
                            e[0] = 1;
                        }
                        e
                    })
                    .collect()
            })
            .collect()
    }

    /// I + r E_{ij}.
    pub fn elementary(&self, d: usize, i: usize, j: usize, r: &[u32]) -> Vec<Vec<Vec<u32>>> {
        let mut m = self.identity(d);
        m[i][j] = r.to_vec();
        m
    }

    /// Order of the group generated by the matrices, by breadth-first search
    /// over products.
    pub fn closure_order(&self, gens: &[Vec<Vec<Vec<u32>>>], cap: usize) -> Option<usize> {
        let d = gens.first()?.len();
        let id = self.identity(d);
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in gens {
                let x = self.mat_mul(&m, g);
                if seen.insert(x.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(x);
                }
            }
        }
        Some(seen.len())
    }
}
