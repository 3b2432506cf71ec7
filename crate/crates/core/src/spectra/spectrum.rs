use serde::{Deserialize, Serialize};

use super::eigen::{eig_sym, eig_sym_vectors, EigenMethod, EigenOptions, JACOBI_AUTO_MAX, MAX_DENSE};
use super::graph::{gram, restricted_side_norm, side_block, transpose_rows, walk_operator, WalkOperator, WeightedGraph};
use super::SpectraError;

/// Tolerance used to group eigenvalues and to detect -1.
const GROUP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumRoute {
    /// Dense solve of the symmetrised walk on all vertices.
    FullWalk,
    /// Singular values of the side-to-side block of a bipartite graph.
    SideBlock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub vertices: usize,
    pub route: SpectrumRoute,
    pub method: EigenMethod,
    /// Walk eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<(f64, usize)>,
    pub lambda2: f64,
    /// -1 is an eigenvalue.
    pub bipartite: bool,
    /// Side sizes when the graph is two-colourable.
    pub sides: Option<(usize, usize)>,
    /// Norms of the two side walks restricted to mean-zero functions.
    pub side_norms: Option<(f64, f64)>,
    /// max |lambda_i + lambda_{N-1-i}| for two-colourable graphs.
    pub symmetry_gap: Option<f64>,
    /// max |row sum of M - 1|.
    pub row_sum_error: Option<f64>,
    /// Largest eigen-residual of M on vectors mapped from S (small graphs).
    pub similarity_residual: Option<f64>,
}

impl SpectrumReport {
    /// Largest disagreement between lambda2 and the two side norms.
    pub fn side_gap(&self) -> Option<f64> {
        self.side_norms.map(|(a, b)| (self.lambda2 - a).abs().max((self.lambda2 - b).abs()).max((a - b).abs()))
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Whether every eigenvalue lies within `tol` of one of `set`.
    pub fn values_in(&self, set: &[f64], tol: f64) -> bool {
        self.eigenvalues.iter().all(|v| set.iter().any(|s| (v - s).abs() <= tol))
    }
}

/// Groups a descending list into (value, multiplicity) with tolerance `tol`.
pub fn multiplicities(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((head, m)) if (*head - v).abs() <= tol => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// max over eigenpairs (lambda, v) of S of |M x - lambda x|_inf / |x|_inf with
/// x = D^{-1/2} v.
pub fn similarity_residual(walk: &WalkOperator, opts: &EigenOptions) -> Result<f64, SpectraError> {
    let s = walk.symmetrized();
    let dec = eig_sym_vectors(&s, opts)?;
    let vecs = dec.vectors.as_ref().unwrap();
    let n = s.n;
    let mut worst = 0.0f64;
    for k in 0..n {
        let x: Vec<f64> = (0..n).map(|i| vecs.get(i, k) / (walk.degrees[i] as f64).sqrt()).collect();
        let mx = walk.m.matvec(&x);
        let scale = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let r = mx.iter().zip(&x).fold(0.0f64, |a, (m, v)| a.max((m - dec.values[k] * v).abs()));
        worst = worst.max(r / scale);
    }
    Ok(worst)
}

fn symmetry_gap(values: &[f64]) -> f64 {
    let n = values.len();
    (0..n).map(|i| (values[i] + values[n - 1 - i]).abs()).fold(0.0, f64::max)
}

/// Second largest eigenvalue of the random walk on a connected weighted graph,
/// with the side-norm cross-check for two-colourable graphs.
///
/// Graphs with more than [`MAX_DENSE`] vertices are accepted when they are
/// bipartite with both sides within the limit; their spectrum is recovered
/// from the singular values of the side-to-side block.
pub fn second_eigenvalue(g: &WeightedGraph, opts: &EigenOptions) -> Result<SpectrumReport, SpectraError> {
    g.validate()?;
    let n = g.vertex_count();
    let side = g.bipartition();
    let blocks = side.as_ref().map(|sd| side_block(g, sd));
    let sides = blocks.as_ref().map(|(v0, v1, _)| (v0.len(), v1.len()));
    let degrees = g.degrees();
    let side_degrees = |vs: &[u32]| vs.iter().map(|&v| degrees[v as usize]).collect::<Vec<u64>>();

    if n <= MAX_DENSE {
        let walk = walk_operator(g)?;
        let row_sum_error = (0..n).map(|i| (walk.m.row(i).iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
        let dec = eig_sym(&walk.symmetrized(), opts)?;
        let values = dec.values;
        let side_norms = match &blocks {
            Some((v0, v1, rows)) => {
                let a = restricted_side_norm(rows, &side_degrees(v0), v1.len(), opts)?;
                let b = restricted_side_norm(&transpose_rows(rows, v1.len()), &side_degrees(v1), v0.len(), opts)?;
                Some((a, b))
            }
            None => None,
        };
        let similarity = if n <= JACOBI_AUTO_MAX { Some(similarity_residual(&walk, opts)?) } else { None };
        return Ok(SpectrumReport {
            vertices: n,
            route: SpectrumRoute::FullWalk,
            method: dec.method,
            lambda2: values.get(1).copied().unwrap_or(values[0]),
            bipartite: values.last().is_some_and(|v| (v + 1.0).abs() <= GROUP_TOL),
            multiplicities: multiplicities(&values, GROUP_TOL),
            symmetry_gap: side.as_ref().map(|_| symmetry_gap(&values)),
            eigenvalues: values,
            sides,
            side_norms,
            row_sum_error: Some(row_sum_error),
            similarity_residual: similarity,
        });
    }

    let Some((v0, v1, rows)) = blocks else {
        return Err(SpectraError::TooLarge { n, max: MAX_DENSE });
    };
    // rows are indexed by the smaller side
    let (r0, r1, rows) = if v0.len() <= v1.len() { (v0, v1, rows) } else { (v1.clone(), v0, transpose_rows(&rows, v1.len())) };
    if r1.len() > MAX_DENSE {
        return Err(SpectraError::TooLarge { n: r1.len(), max: MAX_DENSE });
    }
    let dec = eig_sym(&gram(&rows, r1.len()), opts)?;
    let sigma: Vec<f64> = dec.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let mut values: Vec<f64> = sigma.iter().copied().chain(sigma.iter().map(|v| -v)).collect();
    values.extend(std::iter::repeat_n(0.0, r1.len() - r0.len()));
    values.sort_by(|a, b| b.total_cmp(a));
    let a = sigma.get(1).copied().unwrap_or(0.0);
    let b = restricted_side_norm(&transpose_rows(&rows, r1.len()), &side_degrees(&r1), r0.len(), opts)?;
    Ok(SpectrumReport {
        vertices: n,
        route: SpectrumRoute::SideBlock,
        method: dec.method,
        lambda2: values[1],
        bipartite: true,
        multiplicities: multiplicities(&values, GROUP_TOL),
        symmetry_gap: Some(symmetry_gap(&values)),
        eigenvalues: values,
        sides,
        side_norms: Some((a, b)),
        row_sum_error: None,
        similarity_residual: None,
    })
}
