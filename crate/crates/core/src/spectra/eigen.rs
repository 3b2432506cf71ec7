use serde::{Deserialize, Serialize};

use super::SpectraError;

/// Largest matrix accepted by the dense solvers.
pub const MAX_DENSE: usize = 4096;

/// Sizes up to this use Jacobi rotations under [`EigenMethod::Auto`].
pub const JACOBI_AUTO_MAX: usize = 160;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenMethod {
    Auto,
    Jacobi,
    Tridiagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub method: EigenMethod,
    /// Jacobi stops once the off-diagonal norm is below `tol * ||A||_F`.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Relative asymmetry tolerated on input.
    pub symmetry_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { method: EigenMethod::Auto, tol: 1e-12, max_sweeps: 100, symmetry_tol: 1e-12 }
    }
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            m.data[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.data[j * self.n + i] = self.data[i * self.n + j];
            }
        }
        t
    }

    pub fn matmul(&self, b: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        let mut c = Self::zeros(n);
        for i in 0..n {
            let crow = &mut c.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &b.data[k * n..(k + 1) * n];
                for (x, y) in crow.iter_mut().zip(brow) {
                    *x += a * y;
                }
            }
        }
        c
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, o: &DenseMatrix) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.data.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        for i in 0..self.n {
            for j in 0..i {
                if (self.get(i, j) - self.get(j, i)).abs() > tol * scale {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column k of `vectors` belongs to `values[k]` (Jacobi only).
    pub vectors: Option<DenseMatrix>,
    pub method: EigenMethod,
    pub sweeps: usize,
}

fn validate(a: &DenseMatrix, opts: &EigenOptions) -> Result<(), SpectraError> {
    if a.n > MAX_DENSE {
        return Err(SpectraError::TooLarge { n: a.n, max: MAX_DENSE });
    }
    if !a.is_symmetric(opts.symmetry_tol) {
        return Err(SpectraError::NotSymmetric);
    }
    Ok(())
}

/// Eigenvalues of a real symmetric matrix, in descending order.
pub fn eig_sym(a: &DenseMatrix, opts: &EigenOptions) -> Result<EigenDecomposition, SpectraError> {
    validate(a, opts)?;
    let method = match opts.method {
        EigenMethod::Auto if a.n <= JACOBI_AUTO_MAX => EigenMethod::Jacobi,
        EigenMethod::Auto => EigenMethod::Tridiagonal,
        m => m,
    };
    match method {
        EigenMethod::Jacobi => jacobi(a, opts, false),
        _ => {
            let mut values = tridiagonal_eigenvalues(a)?;
            values.sort_by(|x, y| y.partial_cmp(x).unwrap());
            Ok(EigenDecomposition { values, vectors: None, method: EigenMethod::Tridiagonal, sweeps: 0 })
        }
    }
}

/// Eigenvalues and orthonormal eigenvectors by cyclic Jacobi rotations.
pub fn eig_sym_vectors(a: &DenseMatrix, opts: &EigenOptions) -> Result<EigenDecomposition, SpectraError> {
    validate(a, opts)?;
    jacobi(a, opts, true)
}

fn jacobi(a0: &DenseMatrix, opts: &EigenOptions, want_vectors: bool) -> Result<EigenDecomposition, SpectraError> {
    let n = a0.n;
    let mut a = a0.clone();
    // symmetrise away rounding noise
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, m);
            a.set(j, i, m);
        }
    }
    let mut v = want_vectors.then(|| DenseMatrix::identity(n));
    let norm = a.frobenius();
    let off = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j) * a.get(i, j);
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) > opts.tol * norm && norm > 0.0 {
        if sweeps >= opts.max_sweeps {
            return Err(SpectraError::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(y, y).partial_cmp(&a.get(x, x)).unwrap());
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = v.map(|v| {
        let mut out = DenseMatrix::zeros(n);
        for (new, &old) in order.iter().enumerate() {
            for k in 0..n {
                out.set(k, new, v.get(k, old));
            }
        }
        out
    });
    Ok(EigenDecomposition { values, vectors, method: EigenMethod::Jacobi, sweeps })
}

/// Householder reduction to tridiagonal form followed by implicit QL.
fn tridiagonal_eigenvalues(a0: &DenseMatrix) -> Result<Vec<f64>, SpectraError> {
    let n = a0.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    // lower triangle of row i holds row i of the working matrix
    let mut a = a0.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let (head, tail) = a.split_at_mut(i * n);
        let row_i = &mut tail[..i];
        if l > 0 {
            let scale: f64 = row_i.iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = row_i[l];
                continue;
            }
            let mut h = 0.0;
            for x in row_i.iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let f = row_i[l];
            let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
            e[i] = scale * g;
            h -= f * g;
            row_i[l] = f - g;
            let u = &*row_i;
            // p = A u / h using only the lower triangle
            p[..i].fill(0.0);
            for j in 0..i {
                let rj = &head[j * n..j * n + j + 1];
                let uj = u[j];
                let acc = dot(&rj[..j], &u[..j]);
                for (pk, r) in p[..j].iter_mut().zip(&rj[..j]) {
                    *pk += r * uj;
                }
                p[j] += acc + rj[j] * uj;
            }
            let mut f2 = 0.0;
            for j in 0..i {
                p[j] /= h;
                f2 += p[j] * u[j];
            }
            let hh = f2 / (h + h);
            for j in 0..i {
                p[j] -= hh * u[j];
            }
            for j in 0..i {
                let fj = u[j];
                let gj = p[j];
                let rj = &mut head[j * n..j * n + j + 1];
                for k in 0..=j {
                    rj[k] -= fj * p[k] + gj * u[k];
                }
            }
        } else {
            e[i] = row_i[l];
        }
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    tqli(&mut d, &mut e)?;
    Ok(d)
}

/// Dot product with independent partial sums so the loop vectorises.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

fn tqli(d: &mut [f64], e: &mut [f64]) -> Result<(), SpectraError> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                return Err(SpectraError::NoConvergence { sweeps: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Largest singular value, sqrt of the top eigenvalue of A^T A.
pub fn operator_norm(a: &DenseMatrix, opts: &EigenOptions) -> Result<f64, SpectraError> {
    let ata = a.transpose().matmul(a);
    let top = eig_sym(&ata, opts)?.values.first().copied().unwrap_or(0.0);
    Ok(top.max(0.0).sqrt())
}
