use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::eigen::{eig_sym, DenseMatrix, EigenOptions, MAX_DENSE};
use super::SpectraError;
use crate::geometry::SimplicialComplex;

/// Undirected graph with positive integer edge weights and typed vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub types: Vec<u8>,
    /// (u, v) with u < v.
    pub edges: BTreeMap<(u32, u32), u64>,
}

impl WeightedGraph {
    pub fn new(types: Vec<u8>) -> Self {
        WeightedGraph { types, edges: BTreeMap::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.types.len()
    }

    pub fn add_weight(&mut self, u: u32, v: u32, w: u64) {
        let key = if u < v { (u, v) } else { (v, u) };
        *self.edges.entry(key).or_insert(0) += w;
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0; self.vertex_count()];
        for (&(u, v), &w) in &self.edges {
            d[u as usize] += w;
            d[v as usize] += w;
        }
        d
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in self.edges.keys() {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        crate::geometry::connected_components(&self.adjacency()).0 <= 1
    }

    pub fn validate(&self) -> Result<(), SpectraError> {
        if let Some((&(u, v), _)) = self.edges.iter().find(|(&(u, v), &w)| w == 0 || u == v || v as usize >= self.vertex_count()) {
            return Err(SpectraError::InvalidEdge { u, v });
        }
        if self.vertex_count() == 0 || self.edges.is_empty() {
            return Err(SpectraError::EmptyGraph);
        }
        if !self.is_connected() {
            return Err(SpectraError::Disconnected { components: crate::geometry::connected_components(&self.adjacency()).0 });
        }
        Ok(())
    }

    /// Two-colouring of a connected graph, if it is bipartite.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let adj = self.adjacency();
        let mut side = vec![u8::MAX; self.vertex_count()];
        for start in 0..self.vertex_count() {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            let mut stack = vec![start as u32];
            while let Some(v) = stack.pop() {
                for &w in &adj[v as usize] {
                    if side[w as usize] == u8::MAX {
                        side[w as usize] = 1 - side[v as usize];
                        stack.push(w);
                    } else if side[w as usize] == side[v as usize] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    /// Whether every vertex of one side is joined to every vertex of the other.
    pub fn is_complete_bipartite(&self) -> bool {
        match self.bipartition() {
            Some(side) => {
                let a = side.iter().filter(|&&s| s == 0).count();
                let b = side.len() - a;
                self.edges.len() == a * b
            }
            None => false,
        }
    }
}

/// Random walk M = D^{-1} W of a weighted graph.
#[derive(Clone, Debug)]
pub struct WalkOperator {
    pub degrees: Vec<u64>,
    pub m: DenseMatrix,
}

impl WalkOperator {
    /// The similar symmetric matrix D^{1/2} M D^{-1/2}.
    pub fn symmetrized(&self) -> DenseMatrix {
        let n = self.m.n;
        let mut s = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = self.m.get(i, j);
                if v != 0.0 {
                    s.set(i, j, v * (self.degrees[i] as f64 / self.degrees[j] as f64).sqrt());
                }
            }
        }
        s
    }
}

pub fn walk_operator(g: &WeightedGraph) -> Result<WalkOperator, SpectraError> {
    g.validate()?;
    let n = g.vertex_count();
    if n > MAX_DENSE {
        return Err(SpectraError::TooLarge { n, max: MAX_DENSE });
    }
    let degrees = g.degrees();
    let mut m = DenseMatrix::zeros(n);
    for (&(u, v), &w) in &g.edges {
        m.add(u as usize, v as usize, w as f64 / degrees[u as usize] as f64);
        m.add(v as usize, u as usize, w as f64 / degrees[v as usize] as f64);
    }
    Ok(WalkOperator { degrees, m })
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Weighted 1-skeleton of the link of `face` in a pure complex of dimension
/// `n`: w({u,v}) = (n-k-2)! times the number of top simplices of the link
/// containing {u, v}, where k = dim(face). The empty face gives the whole
/// complex with k = -1.
pub fn link_skeleton_weighted(x: &SimplicialComplex, n: usize, face: &[u32]) -> Result<(WeightedGraph, Vec<u32>), SpectraError> {
    let k = face.len() as isize - 1;
    if k > n as isize - 2 {
        return Err(SpectraError::DimensionTooHigh { k, n });
    }
    let (lk, verts) = x.link(face);
    let top = (n as isize - 1 - k) as usize;
    let scale = factorial((n as isize - k - 2) as usize);
    let mut g = WeightedGraph::new(lk.vertex_types.clone());
    for t in lk.simplices.get(top).map(|v| v.as_slice()).unwrap_or(&[]) {
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                g.add_weight(t[a], t[b], scale);
            }
        }
    }
    // edges of the link not contained in any top simplex keep weight zero and
    // are dropped, matching the definition
    Ok((g, verts))
}

/// Normalised biadjacency block D_0^{-1/2} W D_1^{-1/2} of a bipartite graph,
/// with the row and column vertex lists.
pub fn side_block(g: &WeightedGraph, side: &[u8]) -> (Vec<u32>, Vec<u32>, Vec<Vec<(usize, f64)>>) {
    let d = g.degrees();
    let v0: Vec<u32> = (0..g.vertex_count() as u32).filter(|&v| side[v as usize] == 0).collect();
    let v1: Vec<u32> = (0..g.vertex_count() as u32).filter(|&v| side[v as usize] == 1).collect();
    let mut pos = vec![0usize; g.vertex_count()];
    for (i, &v) in v0.iter().enumerate() {
        pos[v as usize] = i;
    }
    for (i, &v) in v1.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut rows = vec![Vec::new(); v0.len()];
    for (&(a, b), &w) in &g.edges {
        let (u, v) = if side[a as usize] == 0 { (a, b) } else { (b, a) };
        rows[pos[u as usize]].push((pos[v as usize], w as f64 / (d[u as usize] as f64 * d[v as usize] as f64).sqrt()));
    }
    (v0, v1, rows)
}

/// Combined size up to which [`restricted_side_norm`] uses the symmetric
/// dilation instead of the Gram matrix.
pub const DILATION_MAX: usize = 1024;

/// Norm of the side-to-side walk restricted to functions orthogonal to the
/// constants, i.e. the largest singular value of P B where P removes the
/// stationary direction of the row side.
///
/// Small blocks use the top eigenvalue of [[0, PB], [(PB)^T, 0]], which is
/// accurate to machine precision even near zero. Larger blocks use
/// sqrt(lambda_max(P B B^T P)), whose absolute error near zero is of order
/// sqrt(machine epsilon).
pub fn restricted_side_norm(rows: &[Vec<(usize, f64)>], row_deg: &[u64], cols: usize, opts: &EigenOptions) -> Result<f64, SpectraError> {
    let r = rows.len();
    let total: u64 = row_deg.iter().sum();
    let u: Vec<f64> = row_deg.iter().map(|&d| (d as f64 / total as f64).sqrt()).collect();
    if r + cols <= DILATION_MAX {
        let mut utb = vec![0.0; cols];
        for (i, row) in rows.iter().enumerate() {
            for &(j, w) in row {
                utb[j] += u[i] * w;
            }
        }
        let mut dil = DenseMatrix::zeros(r + cols);
        for i in 0..r {
            for j in 0..cols {
                let v = -u[i] * utb[j];
                dil.set(i, r + j, v);
                dil.set(r + j, i, v);
            }
            for &(j, w) in &rows[i] {
                dil.add(i, r + j, w);
                dil.add(r + j, i, w);
            }
        }
        return Ok(eig_sym(&dil, opts)?.values[0].max(0.0));
    }
    let mut bbt = gram(rows, cols);
    project_out(&mut bbt, &u);
    let top = eig_sym(&bbt, opts)?.values[0];
    Ok(top.max(0.0).sqrt())
}

/// B B^T for a sparse row list B with `cols` columns.
pub(crate) fn gram(rows: &[Vec<(usize, f64)>], cols: usize) -> DenseMatrix {
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); cols];
    for (i, row) in rows.iter().enumerate() {
        for &(j, w) in row {
            by_col[j].push((i, w));
        }
    }
    let mut out = DenseMatrix::zeros(rows.len());
    for col in &by_col {
        for &(i, wi) in col {
            for &(j, wj) in col {
                out.add(i, j, wi * wj);
            }
        }
    }
    out
}

/// Row lists of the transpose.
pub(crate) fn transpose_rows(rows: &[Vec<(usize, f64)>], cols: usize) -> Vec<Vec<(usize, f64)>> {
    let mut out = vec![Vec::new(); cols];
    for (i, row) in rows.iter().enumerate() {
        for &(j, w) in row {
            out[j].push((i, w));
        }
    }
    out
}

/// A <- (I - uu^T) A (I - uu^T) for a unit vector u.
pub(crate) fn project_out(a: &mut DenseMatrix, u: &[f64]) {
    let n = a.n;
    let au = a.matvec(u);
    let uau: f64 = u.iter().zip(&au).map(|(x, y)| x * y).sum();
    for i in 0..n {
        for j in 0..n {
            let v = a.get(i, j) - u[i] * au[j] - au[i] * u[j] + uau * u[i] * u[j];
            a.set(i, j, v);
        }
    }
}

/// Norm of the symmetrised walk of a two-coloured graph restricted to the
/// complement of its +1 and -1 eigenvectors.
pub fn walk_restricted_norm(g: &WeightedGraph, side: &[u8], opts: &EigenOptions) -> Result<f64, SpectraError> {
    let walk = walk_operator(g)?;
    let mut s = walk.symmetrized();
    let total: u64 = walk.degrees.iter().sum();
    let plus: Vec<f64> = walk.degrees.iter().map(|&d| (d as f64 / total as f64).sqrt()).collect();
    let minus: Vec<f64> = plus.iter().zip(side).map(|(&u, &sd)| if sd == 0 { u } else { -u }).collect();
    project_out(&mut s, &plus);
    project_out(&mut s, &minus);
    let v = eig_sym(&s, opts)?.values;
    Ok(v[0].abs().max(v[v.len() - 1].abs()))
}
