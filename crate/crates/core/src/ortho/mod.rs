//! Group-algebra averaging elements, the right regular representation and the
//! comparison between epsilon-orthogonality and link spectra.

mod algebra;
mod audit;

pub use algebra::{GroupAlgebraElement, RegularRep};
pub use audit::{
    equivalence_audit, link_equivalence, projection_audit, rep_norm, restricted_coset_norm, NormRoute, OrthoReport, ProjectionAudit,
    DENSE_CHECK_MAX,
};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::spectra::SpectraError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrthoError {
    #[error("group of order {n} exceeds the dense limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("subgroup element missing from the ambient group")]
    NotASubgroup,
    #[error("the two subgroups do not generate the ambient group ({classes} classes)")]
    NotGenerating { classes: usize },
    #[error("expected a system with exactly two types")]
    NotAGeometrySystem,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::matgroup::{enumerate_group, ElParams};
    use crate::spectra::{operator_norm, DenseMatrix, EigenOptions};

    fn sl3f2() -> Arc<crate::matgroup::GroupTable> {
        let p = ElParams::from_prime(2, 2, 1).unwrap();
        Arc::new(enumerate_group(p.space(), &p.el_generators(), 1000).unwrap())
    }

    #[test]
    fn regular_rep_is_a_homomorphism() {
        let g = sl3f2();
        let rep = RegularRep::new(g.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (a, b) = (rng.gen_range(0..168u32), rng.gen_range(0..168u32));
            assert_eq!(Some(rep.mul(a, b)), g.mul(a, b));
            let pa = rep.perm(a);
            let pb = rep.perm(b);
            let pab = rep.perm(rep.mul(a, b));
            // rho(a) rho(b) f (x) = f(x a b)
            assert!((0..168).all(|x| pb[pa[x] as usize] == pab[x]));
        }
        let mut p = rep.perm(5);
        p.sort_unstable();
        assert_eq!(p, (0..168).collect::<Vec<_>>());
    }

    #[test]
    fn basic_rep_matrices() {
        let rep = RegularRep::new(sl3f2()).unwrap();
        let opts = EigenOptions::default();
        assert_eq!(rep.rep_matrix(&GroupAlgebraElement::delta(168, 0)), DenseMatrix::identity(168));
        let u = rep.rep_matrix(&GroupAlgebraElement::uniform(168));
        assert!(u.data.iter().all(|&v| (v - 1.0 / 168.0).abs() < 1e-15));
        assert!((operator_norm(&u, &opts).unwrap() - 1.0).abs() < 1e-9);
        assert!((operator_norm(&DenseMatrix::identity(168), &opts).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(operator_norm(&DenseMatrix::zeros(5), &opts).unwrap(), 0.0);
    }

    #[test]
    fn whole_group_twice() {
        let g = sl3f2();
        let rep = RegularRep::new(g.clone()).unwrap();
        let a = projection_audit(&rep, &g, &g, &EigenOptions::default()).unwrap();
        assert!(a.epsilon < 1e-12);
        assert!(a.degenerate);
        assert!(a.holds(1e-12, 1e-9));
        let trivial = crate::matgroup::GroupTable::from_codes(g.space().clone(), vec![g.code(0)], Vec::new());
        assert_eq!(projection_audit(&rep, &trivial, &trivial, &EigenOptions::default()).unwrap_err(), OrthoError::NotGenerating { classes: 168 });
    }
}
