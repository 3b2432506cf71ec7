use std::sync::Arc;

use super::OrthoError;
use crate::matgroup::GroupTable;
use crate::spectra::{DenseMatrix, MAX_DENSE};

/// Right regular representation of a tabulated group, stored as a Cayley table.
///
/// rho(g) acts on functions by (rho(g) f)(x) = f(x g).
#[derive(Clone, Debug)]
pub struct RegularRep {
    group: Arc<GroupTable>,
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl RegularRep {
    pub fn new(group: Arc<GroupTable>) -> Result<Self, OrthoError> {
        let n = group.len();
        if n > MAX_DENSE {
            return Err(OrthoError::TooLarge { n, max: MAX_DENSE });
        }
        let mul = cayley_table(&group);
        let mut inv = vec![0u32; n];
        for x in 0..n {
            let row = &mul[x * n..(x + 1) * n];
            inv[x] = row.iter().position(|&z| z == 0).expect("group table is closed") as u32;
        }
        Ok(RegularRep { group, n, mul, inv })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Index of x y.
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.n + y as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        self.inv[x as usize]
    }

    /// The permutation x -> x g.
    pub fn perm(&self, g: u32) -> Vec<u32> {
        (0..self.n as u32).map(|x| self.mul(x, g)).collect()
    }

    /// rho(a) f, computed from the support of a.
    pub fn apply(&self, a: &GroupAlgebraElement, f: &[f64]) -> Vec<f64> {
        let supp = a.support();
        (0..self.n as u32).map(|y| supp.iter().map(|&(g, c)| c * f[self.mul(y, g) as usize]).sum()).collect()
    }

    /// Dense matrix of rho(a): entry (y, z) is a(y^{-1} z).
    pub fn rep_matrix(&self, a: &GroupAlgebraElement) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n);
        let supp = a.support();
        for y in 0..self.n as u32 {
            for &(g, c) in &supp {
                m.add(y as usize, self.mul(y, g) as usize, c);
            }
        }
        m
    }
}

/// Cayley table built from right multiplication by the generators along a
/// breadth-first tree; falls back to direct products when the generators do
/// not reach every element.
fn cayley_table(group: &GroupTable) -> Vec<u32> {
    let n = group.len();
    let space = group.space();
    let gens = group.generators();
    let mut right = vec![u32::MAX; n * gens.len()];
    let mut buf = vec![0u8; space.digits()];
    let mut ok = !gens.is_empty();
    'outer: for x in 0..n {
        for (k, g) in gens.iter().enumerate() {
            buf.copy_from_slice(group.digits(x as u32));
            space.right_mul_elementary(&mut buf, g.i, g.j, &g.r.coeffs);
            match group.index_of(space.encode_digits(&buf)) {
                Some(y) => right[x * gens.len() + k] = y,
                None => {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![(u32::MAX, 0usize); n];
    if ok {
        let mut seen = vec![false; n];
        seen[0] = true;
        order.push(0u32);
        let mut head = 0;
        while head < order.len() {
            let z = order[head] as usize;
            for k in 0..gens.len() {
                let y = right[z * gens.len() + k] as usize;
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = (z as u32, k);
                    order.push(y as u32);
                }
            }
            head += 1;
        }
        ok = order.len() == n;
    }
    let mut mul = vec![0u32; n * n];
    if !ok {
        for x in 0..n as u32 {
            for y in 0..n as u32 {
                mul[x as usize * n + y as usize] = group.mul(x, y).expect("group table is closed");
            }
        }
        return mul;
    }
    // x * z = (x * parent(z)) * gen
    for x in 0..n {
        let row = x * n;
        mul[row] = x as u32;
        for &z in &order[1..] {
            let (p, k) = parent[z as usize];
            let xp = mul[row + p as usize] as usize;
            mul[row + z as usize] = right[xp * gens.len() + k];
        }
    }
    mul
}

/// Element of the real group algebra R[G], one coefficient per group index.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElement {
    pub coeffs: Vec<f64>,
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement { coeffs: vec![0.0; n] }
    }

    pub fn delta(n: usize, g: u32) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[g as usize] = 1.0;
        e
    }

    /// k_G.
    pub fn uniform(n: usize) -> Self {
        GroupAlgebraElement { coeffs: vec![1.0 / n as f64; n] }
    }

    /// k_K: 1/|K| on the elements of K.
    pub fn averaging(sub: &GroupTable, ambient: &GroupTable) -> Result<Self, OrthoError> {
        let mut e = Self::zero(ambient.len());
        let c = 1.0 / sub.len() as f64;
        for &code in sub.codes() {
            let i = ambient.index_of(code).ok_or(OrthoError::NotASubgroup)?;
            e.coeffs[i as usize] = c;
        }
        Ok(e)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<(u32, f64)> {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0.0).map(|(i, &c)| (i as u32, c)).collect()
    }

    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        GroupAlgebraElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GroupAlgebraElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: f64) -> Self {
        GroupAlgebraElement { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Convolution: (a b)(z) = sum over x y = z of a(x) b(y).
    pub fn mul(&self, o: &Self, rep: &RegularRep) -> Self {
        let mut out = Self::zero(self.len());
        let sb = o.support();
        for (x, a) in self.support() {
            for &(y, b) in &sb {
                out.coeffs[rep.mul(x, y) as usize] += a * b;
            }
        }
        out
    }

    /// a*(g) = a(g^{-1}); rho(a*) is the transpose of rho(a).
    pub fn adjoint(&self, rep: &RegularRep) -> Self {
        let mut out = Self::zero(self.len());
        for (g, c) in self.support() {
            out.coeffs[rep.inv(g) as usize] = c;
        }
        out
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}
