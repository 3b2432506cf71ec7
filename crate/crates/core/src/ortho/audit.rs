use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algebra::{GroupAlgebraElement, RegularRep};
use super::OrthoError;
use crate::geometry::{build_complex, Limits, SubgroupGeometrySystem};
use crate::matgroup::{ElParams, GroupTable, TypeSet};
use crate::spectra::{
    eig_sym, link_skeleton_weighted, operator_norm, second_eigenvalue, walk_operator, walk_restricted_norm, DenseMatrix, EigenOptions,
    DILATION_MAX,
};

/// Groups up to this order also get the dense cross-checks.
pub const DENSE_CHECK_MAX: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormRoute {
    /// Top eigenvalue of the symmetric dilation [[0, A], [A^T, 0]].
    Dilation,
    /// sqrt of the top eigenvalue of A^T A.
    Gram,
}

/// Top eigenvalue of the dilation of a rectangular matrix given row-major.
fn dilation_norm(a: &[f64], rows: usize, cols: usize, opts: &EigenOptions) -> Result<f64, OrthoError> {
    let mut d = DenseMatrix::zeros(rows + cols);
    for i in 0..rows {
        for j in 0..cols {
            let v = a[i * cols + j];
            if v != 0.0 {
                d.set(i, rows + j, v);
                d.set(rows + j, i, v);
            }
        }
    }
    Ok(eig_sym(&d, opts)?.values[0].max(0.0))
}

fn symmetrize(m: &mut DenseMatrix) {
    let n = m.n;
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m.get(i, j) + m.get(j, i));
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
}

/// ||rho(a)||.
pub fn rep_norm(rep: &RegularRep, a: &GroupAlgebraElement, opts: &EigenOptions) -> Result<(f64, NormRoute), OrthoError> {
    let n = rep.len();
    if 2 * n <= DILATION_MAX {
        let m = rep.rep_matrix(a);
        return Ok((dilation_norm(&m.data, n, n, opts)?, NormRoute::Dilation));
    }
    let mut m = rep.rep_matrix(&a.adjoint(rep).mul(a, rep));
    symmetrize(&mut m);
    let top = eig_sym(&m, opts)?.values[0];
    Ok((top.max(0.0).sqrt(), NormRoute::Gram))
}

/// Class label of every element under x ~ x g for g in the given subsets.
fn right_classes(rep: &RegularRep, subs: &[&[u32]]) -> (usize, Vec<u32>) {
    let n = rep.len();
    let mut label = vec![u32::MAX; n];
    let mut count = 0u32;
    let mut stack = Vec::new();
    for start in 0..n as u32 {
        if label[start as usize] != u32::MAX {
            continue;
        }
        label[start as usize] = count;
        stack.push(start);
        while let Some(x) = stack.pop() {
            for sub in subs {
                for &g in sub.iter() {
                    let y = rep.mul(x, g);
                    if label[y as usize] == u32::MAX {
                        label[y as usize] = count;
                        stack.push(y);
                    }
                }
            }
        }
        count += 1;
    }
    (count as usize, label)
}

fn indices(sub: &GroupTable, ambient: &GroupTable) -> Result<Vec<u32>, OrthoError> {
    sub.codes().iter().map(|&c| ambient.index_of(c).ok_or(OrthoError::NotASubgroup)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionAudit {
    /// |H|, |K0|, |K1|.
    pub orders: (usize, usize, usize),
    /// Coefficient sums of k0, k1, k_G.
    pub coefficient_sums: [f64; 3],
    /// max |k k - k| over k0, k1, k_G.
    pub idempotent: f64,
    /// max |k* - k|.
    pub self_adjoint: f64,
    /// max |g k_i - k_i| over g in K_i: the image of rho(k_i) is K_i-fixed.
    pub image_in_fixed: f64,
    /// max |rho(k_i) 1_{xK_i} - 1_{xK_i}|: fixed functions lie in the image.
    pub fixed_in_image: f64,
    /// max |rho(k)^2 - rho(k)| entrywise, small groups only.
    pub dense_idempotent: Option<f64>,
    /// Dimensions of the K0- and K1-fixed spaces (number of left cosets).
    pub fixed_dims: (usize, usize),
    /// Dimension of the intersection of the two fixed spaces.
    pub intersection_dim: usize,
    /// ||rho(k1 k0 - k_G)|| and ||rho(k0 k1 - k_G)||.
    pub epsilon: f64,
    pub epsilon_reverse: f64,
    pub route: NormRoute,
    /// The same norm from A^T A on the dense matrix, small groups only.
    pub epsilon_dense: Option<f64>,
    /// One fixed space is contained in the other; theta is taken as 0.
    pub degenerate: bool,
}

impl ProjectionAudit {
    pub fn holds(&self, proj_tol: f64, norm_tol: f64) -> bool {
        self.idempotent <= proj_tol
            && self.self_adjoint <= proj_tol
            && self.image_in_fixed <= proj_tol
            && self.fixed_in_image <= proj_tol
            && self.dense_idempotent.is_none_or(|r| r <= proj_tol)
            && self.coefficient_sums.iter().all(|s| (s - 1.0).abs() <= proj_tol)
            && self.intersection_dim == 1
            && (self.epsilon - self.epsilon_reverse).abs() <= norm_tol
            && self.epsilon_dense.is_none_or(|e| (e - self.epsilon).abs() <= norm_tol)
            && self.epsilon <= 1.0 + norm_tol
    }
}

/// Projection identities for (H, K0, K1) under the right regular
/// representation of H, and epsilon = ||rho(k1 k0 - k_H)||.
pub fn projection_audit(rep: &RegularRep, k0: &GroupTable, k1: &GroupTable, opts: &EigenOptions) -> Result<ProjectionAudit, OrthoError> {
    let h = rep.group().clone();
    let n = rep.len();
    let i0 = indices(k0, &h)?;
    let i1 = indices(k1, &h)?;
    let (classes, _) = right_classes(rep, &[&i0, &i1]);
    if classes != 1 {
        return Err(OrthoError::NotGenerating { classes });
    }
    let a0 = GroupAlgebraElement::averaging(k0, &h)?;
    let a1 = GroupAlgebraElement::averaging(k1, &h)?;
    let ag = GroupAlgebraElement::uniform(n);
    let mut idempotent = 0.0f64;
    let mut self_adjoint = 0.0f64;
    for k in [&a0, &a1, &ag] {
        idempotent = idempotent.max(k.mul(k, rep).max_abs_diff(k));
        self_adjoint = self_adjoint.max(k.adjoint(rep).max_abs_diff(k));
    }
    let mut image_in_fixed = 0.0f64;
    let mut fixed_in_image = 0.0f64;
    let mut fixed_dims = [0usize; 2];
    for (slot, (idx, k)) in [(&i0, &a0), (&i1, &a1)].into_iter().enumerate() {
        for &g in idx.iter() {
            image_in_fixed = image_in_fixed.max(GroupAlgebraElement::delta(n, g).mul(k, rep).max_abs_diff(k));
        }
        let (count, label) = right_classes(rep, &[idx]);
        fixed_dims[slot] = count;
        for c in 0..count as u32 {
            let f: Vec<f64> = label.iter().map(|&l| if l == c { 1.0 } else { 0.0 }).collect();
            let pf = rep.apply(k, &f);
            fixed_in_image = fixed_in_image.max(pf.iter().zip(&f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
    }
    let dense_idempotent = if n <= DENSE_CHECK_MAX {
        let mut worst = 0.0f64;
        for k in [&a0, &a1, &ag] {
            let m = rep.rep_matrix(k);
            worst = worst.max(m.matmul(&m).max_abs_diff(&m));
        }
        Some(worst)
    } else {
        None
    };
    let x10 = a1.mul(&a0, rep).sub(&ag);
    let x01 = a0.mul(&a1, rep).sub(&ag);
    let (epsilon, route) = rep_norm(rep, &x10, opts)?;
    let (epsilon_reverse, _) = rep_norm(rep, &x01, opts)?;
    let epsilon_dense = if n <= DENSE_CHECK_MAX { Some(operator_norm(&rep.rep_matrix(&x10), opts)?) } else { None };
    Ok(ProjectionAudit {
        orders: (n, k0.len(), k1.len()),
        coefficient_sums: [a0.sum(), a1.sum(), ag.sum()],
        idempotent,
        self_adjoint,
        image_in_fixed,
        fixed_in_image,
        dense_idempotent,
        fixed_dims: (fixed_dims[0], fixed_dims[1]),
        intersection_dim: classes,
        epsilon,
        epsilon_reverse,
        route,
        epsilon_dense,
        degenerate: fixed_dims[0] == 1 || fixed_dims[1] == 1,
    })
}

/// ||rho(k1)|| on the mean-zero K0-invariant functions, computed in the
/// orthonormal basis of normalised left-coset indicators.
pub fn restricted_coset_norm(rep: &RegularRep, k0: &GroupTable, k1: &GroupTable, opts: &EigenOptions) -> Result<f64, OrthoError> {
    let h = rep.group().clone();
    let n = rep.len();
    let i0 = indices(k0, &h)?;
    let a1 = GroupAlgebraElement::averaging(k1, &h)?;
    let (m, label) = right_classes(rep, &[&i0]);
    let scale = 1.0 / (k0.len() as f64).sqrt();
    // columns: rho(k1) e_c, then projected onto the mean-zero coset combinations
    let mut cols = Vec::with_capacity(m);
    for c in 0..m as u32 {
        let f: Vec<f64> = label.iter().map(|&l| if l == c { scale } else { 0.0 }).collect();
        cols.push(rep.apply(&a1, &f));
    }
    let mean: Vec<f64> = (0..n).map(|y| cols.iter().map(|col| col[y]).sum::<f64>() / m as f64).collect();
    for col in cols.iter_mut() {
        for (v, mu) in col.iter_mut().zip(&mean) {
            *v -= mu;
        }
    }
    // A = rho(k1) E P is n x m; the compression of the mean-zero subspace is
    // spanned by E P, whose columns are orthonormal up to the projection
    if n + m <= DILATION_MAX {
        let mut a = vec![0.0; n * m];
        for (c, col) in cols.iter().enumerate() {
            for y in 0..n {
                a[y * m + c] = col[y];
            }
        }
        return dilation_norm(&a, n, m, opts);
    }
    let mut gram = DenseMatrix::zeros(m);
    for a in 0..m {
        for b in a..m {
            let v: f64 = cols[a].iter().zip(&cols[b]).map(|(x, y)| x * y).sum();
            gram.set(a, b, v);
            gram.set(b, a, v);
        }
    }
    Ok(eig_sym(&gram, opts)?.values[0].max(0.0).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoReport {
    pub types: (usize, usize),
    pub base: TypeSet,
    pub group_order: usize,
    pub k01_order: usize,
    pub projection: ProjectionAudit,
    /// ||rho(k1)|| on the mean-zero K0-invariant subspace.
    pub restricted_norm: f64,
    pub lambda2: f64,
    /// Norms of the two side walks on mean-zero functions.
    pub side_norms: (f64, f64),
    /// Norm of the walk on functions orthogonal to both side indicators.
    pub walk_restricted_norm: f64,
    /// |epsilon - lambda2|.
    pub difference: f64,
    pub bound: f64,
    /// Expected side degrees [K_i : K_{01}].
    pub degrees: (usize, usize),
    pub biregular: bool,
    /// max entrywise gap between the walk blocks and L^{-1} rho(k) L.
    pub block_residual: Option<f64>,
    pub tolerance: f64,
    pub eigen: EigenOptions,
}

impl OrthoReport {
    pub fn epsilon(&self) -> f64 {
        self.projection.epsilon
    }

    /// All equalities at the given tolerances: `tol` for |epsilon - lambda2|,
    /// `proj_tol` for projection identities and `norm_tol` for norm identities.
    pub fn holds(&self, tol: f64, proj_tol: f64, norm_tol: f64) -> bool {
        let (a, b) = self.side_norms;
        self.difference <= tol
            && self.projection.holds(proj_tol, norm_tol)
            && (self.restricted_norm - self.epsilon()).abs() <= tol
            && (a - self.lambda2).abs() <= norm_tol
            && (b - self.lambda2).abs() <= norm_tol
            && (self.walk_restricted_norm - self.lambda2).abs() <= norm_tol
            && self.biregular
            && self.block_residual.is_none_or(|r| r <= 1e-10)
    }

    pub fn within_bound(&self, tol: f64) -> bool {
        self.epsilon() <= self.bound + tol && self.lambda2 <= self.bound + tol
    }
}

/// epsilon-orthogonality against the link spectrum for a rank-one system
/// (H, (K0, K1)).
pub fn equivalence_audit(sys: &SubgroupGeometrySystem, opts: &EigenOptions, tol: f64) -> Result<OrthoReport, OrthoError> {
    let types = sys.types().to_vec();
    if types.len() != 2 {
        return Err(OrthoError::NotAGeometrySystem);
    }
    let (ti, tj) = (types[0], types[1]);
    let x = build_complex(sys)?;
    let h: Arc<GroupTable> = x.group().clone();
    let k0 = sys.subgroup(TypeSet::single(ti)).ok_or(OrthoError::NotAGeometrySystem)?.clone();
    let k1 = sys.subgroup(TypeSet::single(tj)).ok_or(OrthoError::NotAGeometrySystem)?.clone();
    let k01 = sys.subgroup(sys.types()).ok_or(OrthoError::NotAGeometrySystem)?.clone();
    let rep = RegularRep::new(h.clone())?;
    let projection = projection_audit(&rep, &k0, &k1, opts)?;
    let restricted_norm = restricted_coset_norm(&rep, &k0, &k1, opts)?;

    let sc = x.to_simplicial();
    let (g, _) = link_skeleton_weighted(&sc, 1, &[])?;
    let spectrum = second_eigenvalue(&g, opts)?;
    let side: Vec<u8> = sc.vertex_types.iter().map(|&t| u8::from(t as usize != ti)).collect();
    let walk_norm = walk_restricted_norm(&g, &side, opts)?;
    let degrees = (k0.len() / k01.len(), k1.len() / k01.len());
    let deg = g.degrees();
    let biregular = sc.vertex_types.iter().zip(&deg).all(|(&t, &d)| d as usize == if t as usize == ti { degrees.0 } else { degrees.1 });

    let block_residual = if h.len() <= DENSE_CHECK_MAX {
        let walk = walk_operator(&g)?;
        let c0 = x.cosets(TypeSet::single(ti));
        let c1 = x.cosets(TypeSet::single(tj));
        let a0 = GroupAlgebraElement::averaging(&k0, &h)?;
        let a1 = GroupAlgebraElement::averaging(&k1, &h)?;
        let kk = k01.len() as f64;
        let mut worst = 0.0f64;
        for (from, from_t, to, to_t, avg) in [(c0, ti, c1, tj, &a1), (c1, tj, c0, ti, &a0)] {
            for v in 0..from.len() as u32 {
                // L phi = phi(g K) / |K01| on the lift of delta_v
                let f: Vec<f64> = from.coset_of.iter().map(|&c| if c == v { 1.0 / kk } else { 0.0 }).collect();
                let pf = rep.apply(avg, &f);
                for w in 0..to.len() as u32 {
                    let val = kk * pf[to.reps[w as usize] as usize];
                    let m = walk.m.get(x.vertex_id(to_t, w) as usize, x.vertex_id(from_t, v) as usize);
                    worst = worst.max((val - m).abs());
                }
            }
        }
        Some(worst)
    } else {
        None
    };

    let params = sys.params();
    Ok(OrthoReport {
        types: (ti, tj),
        base: sys.base(),
        group_order: h.len(),
        k01_order: k01.len(),
        difference: (projection.epsilon - spectrum.lambda2).abs(),
        projection,
        restricted_norm,
        lambda2: spectrum.lambda2,
        side_norms: spectrum.side_norms.unwrap_or((f64::NAN, f64::NAN)),
        walk_restricted_norm: walk_norm,
        bound: 1.0 / (params.q() as f64).sqrt(),
        degrees,
        biregular,
        block_residual,
        tolerance: tol,
        eigen: *opts,
    })
}

/// [`equivalence_audit`] on the link of type I \ {i, j}.
pub fn link_equivalence(params: &ElParams, i: usize, j: usize, limits: Limits, opts: &EigenOptions, tol: f64) -> Result<OrthoReport, OrthoError> {
    let base = params.index_set().remove(i).remove(j);
    let sys = SubgroupGeometrySystem::link_only(params, base, limits)?;
    equivalence_audit(&sys, opts, tol)
}
