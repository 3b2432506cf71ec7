use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, RingElement, TruncatedRing};

/// Canonical integer encoding of a matrix.
pub type Code = u128;

/// Square matrix over R_s stored as a flat digit array: entry (i, j) occupies
/// `data[(i*dim + j)*s .. (i*dim + j + 1)*s]`, low degree first.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingMatrix {
    pub dim: usize,
    pub s: usize,
    pub data: Vec<u8>,
}

impl RingMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &[u8] {
        let o = (i * self.dim + j) * self.s;
        &self.data[o..o + self.s]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [u8] {
        let o = (i * self.dim + j) * self.s;
        &mut self.data[o..o + self.s]
    }

    pub fn get(&self, i: usize, j: usize) -> RingElement {
        RingElement { coeffs: self.entry(i, j).to_vec() }
    }

    pub fn set(&mut self, i: usize, j: usize, e: &RingElement) {
        self.entry_mut(i, j).copy_from_slice(&e.coeffs);
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Elementary matrix data e_{i,j}(r) = I + r E_{ij}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Elementary {
    pub i: usize,
    pub j: usize,
    pub r: RingElement,
}

/// Arithmetic context for dim x dim matrices over a truncated ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSpace {
    ring: TruncatedRing,
    dim: usize,
    bits: u32,
}

impl MatrixSpace {
    pub fn new(ring: TruncatedRing, dim: usize) -> Result<Self, AlgebraError> {
        let q = ring.q();
        let bits = 32 - (q - 1).leading_zeros();
        let total = bits as usize * dim * dim * ring.s();
        if total > 128 {
            return Err(AlgebraError::EncodingOverflow { bits: total });
        }
        Ok(MatrixSpace { ring, dim, bits })
    }

    pub fn ring(&self) -> &TruncatedRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s(&self) -> usize {
        self.ring.s()
    }

    /// Number of base-q digits in a matrix.
    pub fn digits(&self) -> usize {
        self.dim * self.dim * self.ring.s()
    }

    /// Width of the canonical code in bits.
    pub fn code_bits(&self) -> usize {
        self.bits as usize * self.digits()
    }

    pub fn zero(&self) -> RingMatrix {
        RingMatrix { dim: self.dim, s: self.s(), data: vec![0; self.digits()] }
    }

    pub fn identity(&self) -> RingMatrix {
        let mut m = self.zero();
        for i in 0..self.dim {
            m.entry_mut(i, i)[0] = 1;
        }
        m
    }

    pub fn elementary(&self, i: usize, j: usize, r: &RingElement) -> Result<RingMatrix, AlgebraError> {
        if i == j || i >= self.dim || j >= self.dim {
            return Err(AlgebraError::BadElementaryIndex { i, j, dim: self.dim });
        }
        self.ring.check(r)?;
        let mut m = self.identity();
        m.set(i, j, r);
        Ok(m)
    }

    pub fn check(&self, a: &RingMatrix) -> Result<(), AlgebraError> {
        if a.dim != self.dim || a.s != self.s() || a.data.len() != self.digits() {
            return Err(AlgebraError::DimensionMismatch);
        }
        if let Some(&bad) = a.data.iter().find(|&&c| c as u32 >= self.ring.q()) {
            return Err(AlgebraError::DigitOutOfRange { digit: bad as u32, q: self.ring.q() });
        }
        Ok(())
    }

    pub fn mul(&self, a: &RingMatrix, b: &RingMatrix) -> RingMatrix {
        let mut out = self.zero();
        self.mul_into(&a.data, &b.data, &mut out.data);
        out
    }

    pub fn try_mul(&self, a: &RingMatrix, b: &RingMatrix) -> Result<RingMatrix, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub(crate) fn mul_into(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        let (n, s) = (self.dim, self.s());
        out.fill(0);
        for i in 0..n {
            for k in 0..n {
                let aik = &a[(i * n + k) * s..(i * n + k + 1) * s];
                if aik.iter().all(|&c| c == 0) {
                    continue;
                }
                for j in 0..n {
                    let bkj = &b[(k * n + j) * s..(k * n + j + 1) * s];
                    let o = (i * n + j) * s;
                    self.ring.mul_acc(aik, bkj, &mut out[o..o + s]);
                }
            }
        }
    }

    /// In place right multiplication by e_{i,j}(r): column j += column i * r.
    #[inline]
    pub fn right_mul_elementary(&self, a: &mut [u8], i: usize, j: usize, r: &[u8]) {
        let (n, s) = (self.dim, self.s());
        let mut tmp = [0u8; 128];
        for row in 0..n {
            let src = (row * n + i) * s;
            let dst = (row * n + j) * s;
            if a[src..src + s].iter().all(|&c| c == 0) {
                continue;
            }
            self.ring.mul_into(&a[src..src + s], r, &mut tmp[..s]);
            for d in 0..s {
                a[dst + d] = self.ring.field().add(a[dst + d], tmp[d]);
            }
        }
    }

    /// In place left multiplication by e_{i,j}(r): row i += r * row j.
    #[inline]
    pub fn left_mul_elementary(&self, a: &mut [u8], i: usize, j: usize, r: &[u8]) {
        let (n, s) = (self.dim, self.s());
        let mut tmp = [0u8; 128];
        for col in 0..n {
            let src = (j * n + col) * s;
            let dst = (i * n + col) * s;
            if a[src..src + s].iter().all(|&c| c == 0) {
                continue;
            }
            self.ring.mul_into(r, &a[src..src + s], &mut tmp[..s]);
            for d in 0..s {
                a[dst + d] = self.ring.field().add(a[dst + d], tmp[d]);
            }
        }
    }

    pub fn transpose(&self, a: &RingMatrix) -> RingMatrix {
        let mut out = self.zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entry_mut(j, i).copy_from_slice(a.entry(i, j));
            }
        }
        out
    }

    /// Gauss-Jordan elimination; a pivot is any entry with nonzero constant term.
    pub fn inv(&self, a: &RingMatrix) -> Result<RingMatrix, AlgebraError> {
        self.check(a)?;
        let n = self.dim;
        let r = &self.ring;
        let mut m: Vec<Vec<RingElement>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
        let mut inv: Vec<Vec<RingElement>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect()).collect();
        for col in 0..n {
            let piv = (col..n).find(|&row| r.is_unit(&m[row][col])).ok_or(AlgebraError::SingularMatrix)?;
            m.swap(col, piv);
            inv.swap(col, piv);
            let pinv = r.inv(&m[col][col]).expect("unit pivot");
            for j in 0..n {
                m[col][j] = r.mul(&pinv, &m[col][j]);
                inv[col][j] = r.mul(&pinv, &inv[col][j]);
            }
            for row in 0..n {
                if row == col || m[row][col].is_zero() {
                    continue;
                }
                let factor = m[row][col].clone();
                for j in 0..n {
                    let t1 = r.mul(&factor, &m[col][j]);
                    m[row][j] = r.sub(&m[row][j], &t1);
                    let t2 = r.mul(&factor, &inv[col][j]);
                    inv[row][j] = r.sub(&inv[row][j], &t2);
                }
            }
        }
        let mut out = self.zero();
        for (i, row) in inv.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                out.set(i, j, e);
            }
        }
        Ok(out)
    }

    /// Determinant by cofactor-free elimination over the local ring.
    pub fn det(&self, a: &RingMatrix) -> RingElement {
        let n = self.dim;
        let r = &self.ring;
        let mut m: Vec<Vec<RingElement>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
        let mut det = r.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&row| r.is_unit(&m[row][col])) else {
                return self.det_expand(a);
            };
            if piv != col {
                m.swap(col, piv);
                det = r.neg(&det);
            }
            det = r.mul(&det, &m[col][col]);
            let pinv = r.inv(&m[col][col]).expect("unit pivot");
            for row in col + 1..n {
                if m[row][col].is_zero() {
                    continue;
                }
                let factor = r.mul(&m[row][col], &pinv);
                for j in col..n {
                    let t = r.mul(&factor, &m[col][j]);
                    m[row][j] = r.sub(&m[row][j], &t);
                }
            }
        }
        det
    }

    // Leibniz expansion, used only when no unit pivot exists.
    fn det_expand(&self, a: &RingMatrix) -> RingElement {
        let n = self.dim;
        let r = &self.ring;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = r.zero();
        permutations(&mut perm, 0, &mut |p| {
            let mut term = r.one();
            for (i, &j) in p.iter().enumerate() {
                term = r.mul(&term, &a.get(i, j));
            }
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            total = if inversions % 2 == 0 { r.add(&total, &term) } else { r.sub(&total, &term) };
        });
        total
    }

    pub fn encode(&self, a: &RingMatrix) -> Code {
        self.encode_digits(&a.data)
    }

    #[inline]
    pub fn encode_digits(&self, d: &[u8]) -> Code {
        let mut code: Code = 0;
        for &x in d.iter().rev() {
            code = (code << self.bits) | x as Code;
        }
        code
    }

    pub fn decode(&self, code: Code) -> RingMatrix {
        let mut m = self.zero();
        self.decode_into(code, &mut m.data);
        m
    }

    #[inline]
    pub fn decode_into(&self, mut code: Code, out: &mut [u8]) {
        let mask = (1u128 << self.bits) - 1;
        for x in out.iter_mut() {
            *x = (code & mask) as u8;
            code >>= self.bits;
        }
    }

    /// Mixed radix rank sum d_k q^k, a dense index into q^digits.
    #[inline]
    pub fn dense_rank(&self, d: &[u8]) -> u64 {
        let q = self.ring.q() as u64;
        d.iter().rev().fold(0u64, |acc, &x| acc * q + x as u64)
    }

    pub fn is_identity(&self, a: &RingMatrix) -> bool {
        *a == self.identity()
    }

    /// Reduces every entry mod t^{s'} into the given target space.
    pub fn reduce(&self, a: &RingMatrix, target: &MatrixSpace) -> RingMatrix {
        let mut out = target.zero();
        let s2 = target.s();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entry_mut(i, j).copy_from_slice(&a.entry(i, j)[..s2]);
            }
        }
        out
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}
