//! Weighted link skeletons, random-walk spectra and local expansion certificates.

mod certify;
mod eigen;
mod graph;
mod spectrum;
mod surd;

pub use certify::{
    certify_links, certify_local_expansion, direct_mu_audit, is_adjacent, link_spectrum, symbolic_check, CertificateStatus, DirectAudit, ExpanderCertificate, LinkSpectrum, MuRow,
    SymbolicCheck, Thresholds,
};
pub use eigen::{eig_sym, eig_sym_vectors, operator_norm, DenseMatrix, EigenDecomposition, EigenMethod, EigenOptions, JACOBI_AUTO_MAX, MAX_DENSE};
pub use graph::{link_skeleton_weighted, restricted_side_norm, walk_restricted_norm, DILATION_MAX, side_block, walk_operator, WalkOperator, WeightedGraph};
pub use spectrum::{multiplicities, second_eigenvalue, similarity_residual, SpectrumReport, SpectrumRoute};
pub use surd::QuadSurd;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::matgroup::GroupError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix of size {n} exceeds the dense limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("eigensolver did not converge after {sweeps} iterations")]
    NoConvergence { sweeps: usize },
    #[error("edge ({u}, {v}) is a loop, has weight zero or leaves the vertex set")]
    InvalidEdge { u: u32, v: u32 },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("walks are defined for faces of dimension at most {}, got {k}", *n as isize - 2)]
    DimensionTooHigh { k: isize, n: usize },
    #[error("side norms disagree: {a} vs {b}")]
    SideMismatch { a: f64, b: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<GroupError> for SpectraError {
    fn from(e: GroupError) -> Self {
        SpectraError::Geometry(GeometryError::Group(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(u32, u32)]) -> WeightedGraph {
        let mut g = WeightedGraph::new(vec![0; n]);
        for &(u, v) in edges {
            g.add_weight(u, v, 1);
        }
        g
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn swap_matrix() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(close(&eig_sym(&a, &EigenOptions::default()).unwrap().values, &[1.0, -1.0]));
    }

    #[test]
    fn triangle_walk() {
        let r = second_eigenvalue(&graph(3, &[(0, 1), (1, 2), (0, 2)]), &EigenOptions::default()).unwrap();
        assert!(close(&r.eigenvalues, &[1.0, -0.5, -0.5]));
        assert_eq!(r.sides, None);
        assert!(!r.bipartite);
    }

    #[test]
    fn hexagon() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let r = second_eigenvalue(&g, &EigenOptions::default()).unwrap();
        assert!((r.lambda2 - 0.5).abs() < 1e-12);
        assert!(r.bipartite);
        assert!(r.side_gap().unwrap() < 1e-9);
    }

    #[test]
    fn complete_bipartite() {
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 3..7 {
                edges.push((u, v));
            }
        }
        let g = graph(7, &edges);
        assert!(g.is_complete_bipartite());
        let r = second_eigenvalue(&g, &EigenOptions::default()).unwrap();
        assert!(r.values_in(&[-1.0, 0.0, 1.0], 1e-12));
        assert!(r.lambda2.abs() < 1e-12);
        assert!(r.side_gap().unwrap() < 1e-12);
    }

    #[test]
    fn graph_errors() {
        let opts = EigenOptions::default();
        assert_eq!(second_eigenvalue(&graph(4, &[(0, 1), (2, 3)]), &opts).unwrap_err(), SpectraError::Disconnected { components: 2 });
        assert_eq!(second_eigenvalue(&graph(2, &[]), &opts).unwrap_err(), SpectraError::EmptyGraph);
        assert_eq!(second_eigenvalue(&graph(2, &[(1, 1)]), &opts).unwrap_err(), SpectraError::InvalidEdge { u: 1, v: 1 });
    }

    #[test]
    fn symbolic_identity() {
        for (q, n) in [(2, 2), (3, 2), (5, 2), (4, 3), (9, 3), (16, 4), (7, 3), (4, 2)] {
            let c = symbolic_check(q, n);
            assert!(c.identity_holds, "{c:?}");
            assert!(c.matches_integer_criterion, "{c:?}");
            assert!(c.float_gap < 1e-12);
        }
        let c = symbolic_check(2, 2);
        assert!(!c.premise_vacuous && c.bound_vacuous);
        let c = symbolic_check(4, 3);
        assert!(c.premise_vacuous && c.lambda.is_none());
        assert_eq!(symbolic_check(16, 2).lambda.as_deref(), Some("1/3"));
    }

    #[test]
    fn surd_arithmetic() {
        let r2 = QuadSurd::root(2);
        assert_eq!(r2.mul(&r2), QuadSurd::integer(2, 2));
        let x = QuadSurd::integer(1, 2).sub(&r2);
        assert_eq!(x.signum(), -1);
        assert_eq!(x.mul(&x.inv().unwrap()), QuadSurd::integer(1, 2));
        assert_eq!(QuadSurd::root(9), QuadSurd::integer(3, 9));
    }
}
