//! Dihedral automorphisms of the subgroup system and their action on the complex.

mod action;
mod aut;
mod commute;
mod dihedral;

pub use action::{transitivity_audit, AutElement, OrbitRow, OrientedRow, SemiElement, SemidirectAction, StabilizerRow, TransitivityReport};
pub use aut::{apply_aut, image_map, verify_preserves_system, AutDescriptor, PreservationWitness};
pub use commute::{commutator_audit, CommutatorRow};
pub use dihedral::{dihedral_audit, dihedral_permutations, generate, preserves_cyclic_adjacency, DihedralReport};

use thiserror::Error;

use crate::algebra::{AlgebraError, Code};
use crate::geometry::GeometryError;
use crate::matgroup::{GroupError, TypeSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0:?} is not a permutation")]
    InvalidPermutation(Vec<usize>),
    #[error("permutation of {perm} points applied in dimension {dim}")]
    DimensionMismatch { perm: usize, dim: usize },
    #[error("the automorphism does not preserve the system: K_{} element {} maps to {}", .0.i, .0.element, .0.image)]
    NotPreserving(PreservationWitness),
    #[error("image of {element:#x} leaves the ambient group")]
    LeavesGroup { element: Code },
    #[error("subgroup K_{0} is missing")]
    MissingSubgroup(TypeSet),
    #[error("the action needs the top-level complex")]
    NotTopLevel,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Elementary;
    use crate::geometry::{build_complex, AmbientPolicy, Limits, SubgroupGeometrySystem};
    use crate::matgroup::ElParams;

    fn sys(p: u32, n: usize, s: usize) -> SubgroupGeometrySystem {
        SubgroupGeometrySystem::new(&ElParams::from_prime(p, n, s).unwrap(), Limits::default(), AmbientPolicy::TableOnly).unwrap()
    }

    #[test]
    fn generators_move_as_expected() {
        let p = ElParams::from_prime(3, 3, 2).unwrap();
        let space = p.space();
        let n = 3;
        let m = p.ring().element(&[2, 1]).unwrap();
        let neg = p.ring().neg(&m);
        for j in 0..=n {
            let e = p.elementary(&Elementary { i: j, j: (j + 1) % 4, r: m.clone() });
            let r = apply_aut(&AutDescriptor::rotation(n), space, &e).unwrap();
            assert_eq!(r, space.elementary((j + 1) % 4, (j + 2) % 4, &m).unwrap());
            let s = apply_aut(&AutDescriptor::reflection(n), space, &e).unwrap();
            let a = (n + n - j) % 4; // n - j - 1 mod n+1
            assert_eq!(s, space.elementary(a, (a + 1) % 4, &neg).unwrap());
        }
    }

    #[test]
    fn descriptor_composition_matches_matrices() {
        let p = ElParams::from_prime(2, 2, 2).unwrap();
        let space = p.space();
        let a = p.elementary(&Elementary { i: 0, j: 2, r: p.ring().t() });
        let b = p.elementary(&Elementary { i: 1, j: 0, r: p.ring().one() });
        let m = space.mul(&a, &b);
        let (r, s) = (AutDescriptor::rotation(2), AutDescriptor::reflection(2));
        let rs = apply_aut(&r.compose(&s), space, &m).unwrap();
        assert_eq!(rs, apply_aut(&r, space, &apply_aut(&s, space, &m).unwrap()).unwrap());
        assert!(s.compose(&s).is_identity());
        assert!(r.compose(&r.inverse()).is_identity());
        assert!(matches!(AutDescriptor::permutation(vec![0, 0, 1]), Err(SymmetryError::InvalidPermutation(_))));
    }

    #[test]
    fn dihedral_images() {
        let r2 = dihedral_audit(&sys(2, 2, 2)).unwrap();
        assert!(r2.holds(), "{r2:#?}");
        assert_eq!(r2.image_order, 6);
        assert_eq!(r2.rotation_psi, vec![1, 2, 0]);
        assert_eq!(r2.reflection_psi, vec![1, 0, 2]);
        assert!(r2.kernel.is_empty());
        let r3 = dihedral_audit(&sys(2, 3, 2)).unwrap();
        assert!(r3.holds(), "{r3:#?}");
        assert_eq!(r3.image_order, 8);
        assert_eq!(r3.dihedral_order, 8);
        assert_eq!(r3.reflection_psi, vec![2, 1, 0, 3]);
    }

    #[test]
    fn transposition_is_rejected() {
        let s = sys(2, 2, 2);
        let e = verify_preserves_system(&AutDescriptor::permutation(vec![1, 0, 2]).unwrap(), &s).unwrap_err();
        assert!(matches!(e, SymmetryError::NotPreserving(_)), "{e}");
        // iota alone sends upper generators below the diagonal
        assert!(verify_preserves_system(&AutDescriptor::inverse_transpose(2), &s).is_err());
    }

    #[test]
    fn orbits_222() {
        let x = build_complex(&sys(2, 2, 2)).unwrap();
        let act = SemidirectAction::dihedral(&x).unwrap();
        let gens = [AutDescriptor::rotation(2), AutDescriptor::reflection(2)];
        let rep = transitivity_audit(&act, &gens, 1000, 11);
        assert!(rep.holds(), "{rep:#?}");
        assert_eq!(rep.oriented[1].orbits, 1);
        assert_eq!(rep.stabilizer.len(), 3);
    }

    #[test]
    fn commutators_321() {
        let rows = commutator_audit(&ElParams::from_prime(2, 3, 2).unwrap(), 1_000_000, 4096).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.matches()), "{rows:#?}");
    }
}
