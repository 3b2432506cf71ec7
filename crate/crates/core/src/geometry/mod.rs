//! Subgroup geometry systems, their coset complexes and the audits run on them.

mod audit;
mod axioms;
mod complex;
mod export;
mod links;
mod quotient;
mod simplicial;
mod system;

pub use audit::{audit_simplicial, face_list, structural_audit, vertex_counts, Check, EulerCheck, SimplicialAudit, StructureReport, TypeCount};
pub use axioms::{verify_axioms, AxiomCheck, AxiomFailure, AxiomReport};
pub use complex::{build_complex, CosetComplex, Simplex};
pub use export::{from_dot, to_dot, ComplexExport, VertexRecord};
pub use links::{incidence_audit, link_isomorphism_audit, DictReport, DictRow, LinkAuditRow};
pub use quotient::{quotient_check, CoveringReport, KernelRow, LinkIsoRow};
pub use simplicial::{components as connected_components, SimplicialComplex};
pub use system::{Ambient, AmbientPolicy, Limits, SubgroupGeometrySystem};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::matgroup::{GroupError, TypeSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("ambient group is not tabulated (order {projected:?}); the complex cannot be built")]
    AmbientNotTabulated { projected: Option<u64> },
    #[error("{0} is not a valid link type")]
    InvalidLinkType(TypeSet),
    #[error("subgroup K_{0} is missing")]
    MissingSubgroup(TypeSet),
    #[error("target truncation {target} is invalid for s = {s}")]
    InvalidTarget { s: usize, target: usize },
    #[error("target truncation equals s; the quotient is trivial")]
    TrivialQuotient,
    #[error("malformed complex file: {0}")]
    Format(String),
}

impl From<AlgebraError> for GeometryError {
    fn from(e: AlgebraError) -> Self {
        GeometryError::Group(GroupError::Algebra(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::ElParams;

    fn sys(p: u32, n: usize, s: usize) -> SubgroupGeometrySystem {
        SubgroupGeometrySystem::new(&ElParams::from_prime(p, n, s).unwrap(), Limits::default(), AmbientPolicy::Count).unwrap()
    }

    #[test]
    fn axioms_hold_small() {
        let r = verify_axioms(&sys(2, 2, 1), Limits::default()).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.skipped(), 0);
    }

    #[test]
    fn complex_222_counts() {
        let s = sys(2, 2, 2);
        let x = build_complex(&s).unwrap();
        assert_eq!(x.count(-1), 1);
        assert_eq!(x.count(0), 3 * 672);
        assert_eq!(x.count(2), 43008);
        let rep = structural_audit(&x, 7);
        assert!(rep.holds(), "{rep:#?}");
    }

    #[test]
    fn quotient_s4_to_3_and_2() {
        let p = ElParams::from_prime(2, 2, 4).unwrap();
        let r = quotient_check(&p, 3, Limits::default(), 2000, 5).unwrap();
        assert!(r.kernel.iter().all(|k| k.order == 128 && k.trivial));
        assert!(r.kernel_as_expected() && r.is_covering(), "{r:#?}");
        let r = quotient_check(&p, 2, Limits::default(), 500, 5).unwrap();
        assert!(!r.kernel_trivial() && r.kernel_as_expected());
        assert!(r.kernel.iter().all(|k| k.witness.is_some()));
        assert!(!r.is_covering());
        assert_eq!(quotient_check(&p, 4, Limits::default(), 1, 0).unwrap_err(), GeometryError::TrivialQuotient);
        assert!(matches!(quotient_check(&p, 5, Limits::default(), 1, 0), Err(GeometryError::InvalidTarget { .. })));
    }

    #[test]
    fn links_and_dictionary_222() {
        let x = build_complex(&sys(2, 2, 2)).unwrap();
        let sc = x.to_simplicial();
        let rows = link_isomorphism_audit(&x, &sc, 3, 1).unwrap();
        assert!(rows.iter().all(|r| r.bijection && r.signature_match), "{rows:#?}");
        let d = incidence_audit(&sc, 2);
        assert!(d.all_agree() && d.rows.iter().all(|r| r.flag_view), "{d:#?}");

        // a new vertex coned over one edge creates two free faces
        let mut bad = sc.clone();
        let e = bad.simplices[1][0].clone();
        let t = (0..3u8).find(|t| !e.iter().any(|&v| bad.vertex_types[v as usize] == *t)).unwrap();
        let w = bad.add_vertex(t, "extra".into());
        bad.add_with_faces(&[e[0], e[1], w]);
        let d = incidence_audit(&bad, 2);
        let firm = d.rows.iter().find(|r| r.name.starts_with("firm")).unwrap();
        assert!(!firm.flag_view && !firm.simplex_view);
        assert!(d.all_agree());
    }

    #[test]
    fn export_round_trips() {
        let x = build_complex(&sys(2, 2, 1)).unwrap();
        let ex = ComplexExport::from_complex(&x);
        let json = ex.to_json();
        let back = ComplexExport::from_json(&json).unwrap();
        let again = ComplexExport::from_simplicial(back.params.clone(), &back.to_simplicial()).to_json();
        assert_eq!(json, again);
        let dot = to_dot(&x.to_simplicial());
        assert_eq!(to_dot(&from_dot(&dot).unwrap()), dot);
        assert!(ComplexExport::from_json("{").is_err());
        assert!(from_dot("graph g {\n  v0 -- v1;\n}\n").is_err());
    }
}
