//! Enumerated matrix groups, the subgroups K_tau and coset tables.

mod coset;
mod export;
mod params;
mod subgroup;
mod table;
mod typeset;

pub use coset::{left_cosets, product_set, CosetTable};
pub use export::{export_table, import_table, TableHeader};
pub use params::{projected_order_log10, sl_order_over_field, ElParams, ParamsSummary};
pub use subgroup::{pattern_elements, subgroup_k, SubgroupTable};
pub use table::{closure_order, enumerate_group, GroupTable};
pub use typeset::TypeSet;

use thiserror::Error;

use crate::algebra::{AlgebraError, Code};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("rank n = {0} is not supported")]
    InvalidRank(usize),
    #[error("enumeration cap {cap} exceeded{}", projected_note(*projected))]
    CapExceeded { found: u64, cap: u64, projected: Option<u128> },
    #[error("element {witness:#x} of the subgroup is not in the ambient group")]
    NotASubgroup { witness: Code },
    #[error("product {witness:#x} leaves the table")]
    NotClosed { witness: Code },
    #[error("element {witness:#x} of K_{tau} violates the entry pattern")]
    OracleMismatch { tau: TypeSet, witness: Code },
    #[error("malformed table file: {0}")]
    Format(String),
}

fn projected_note(p: Option<u128>) -> String {
    match p {
        Some(p) => format!(" (projected size {p})"),
        None => String::new(),
    }
}

impl GroupError {
    pub(crate) fn with_projected(self, projected: Option<u128>) -> Self {
        match self {
            GroupError::CapExceeded { found, cap, projected: None } => GroupError::CapExceeded { found, cap, projected },
            e => e,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl3_f2_order() {
        let p = ElParams::from_prime(2, 2, 1).unwrap();
        let g = subgroup_k(&p, TypeSet::EMPTY, 1_000_000).unwrap();
        assert_eq!(g.len(), 168);
        assert_eq!(closure_order(p.space(), &p.el_generators(), 1_000_000).unwrap(), 168);
    }

    #[test]
    fn k_sizes_match_pattern() {
        let p = ElParams::from_prime(2, 2, 2).unwrap();
        for tau in TypeSet::full(2).subsets().into_iter().skip(1) {
            let k = subgroup_k(&p, tau, 1_000_000).unwrap();
            assert_eq!(k.len() as u128, p.projected_k_order(tau).unwrap(), "tau {tau}");
            assert_eq!(k.table.sorted_codes(), pattern_elements(&p, tau));
        }
    }

    #[test]
    fn cosets_partition() {
        let p = ElParams::from_prime(2, 2, 1).unwrap();
        let g = subgroup_k(&p, TypeSet::EMPTY, 1_000).unwrap();
        let k = subgroup_k(&p, TypeSet::single(0), 1_000).unwrap();
        let c = left_cosets(&g.table, &k.table).unwrap();
        assert_eq!(c.len(), 168 / 8);
        for (i, &r) in c.reps.iter().enumerate() {
            assert_eq!(c.coset_of[r as usize], i as u32);
        }
    }

    #[test]
    fn cap_guard() {
        let p = ElParams::from_prime(2, 2, 2).unwrap();
        let err = subgroup_k(&p, TypeSet::EMPTY, 100).unwrap_err();
        assert!(matches!(err, GroupError::CapExceeded { projected: Some(43008), .. }));
    }

    #[test]
    fn table_file_round_trip() {
        let p = ElParams::from_prime(3, 2, 1).unwrap();
        let g = subgroup_k(&p, TypeSet::single(0), 1000).unwrap().table;
        let bytes = export_table(&p, &g, true);
        let (p2, h, g2) = import_table(&bytes).unwrap();
        assert_eq!(p2, p);
        assert!(h.complete);
        assert_eq!(g2.codes(), g.codes());
        assert_eq!(export_table(&p2, &g2, true), bytes);
        assert!(matches!(import_table(&bytes[..bytes.len() - 1]), Err(GroupError::Format(_))));
        assert!(matches!(import_table(b"nope"), Err(GroupError::Format(_))));
    }
}
