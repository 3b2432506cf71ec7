use serde::{Deserialize, Serialize};

use super::SymmetryError;
use crate::matgroup::{subgroup_k, ElParams};
use crate::spectra::is_adjacent;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorRow {
    pub pair: (usize, usize),
    pub adjacent: bool,
    pub order: usize,
    pub abelian: bool,
    /// Two non-commuting generators, as codes.
    pub witness: Option<(String, String)>,
    /// Every element pair was compared, not only the generators.
    pub exhaustive: bool,
}

impl CommutatorRow {
    /// Abelian exactly when i and j are not cyclically adjacent.
    pub fn matches(&self) -> bool {
        self.abelian != self.adjacent
    }
}

/// Commutator scan of K_{I \ {i,j}} for every pair {i, j}. Groups with at most
/// `exhaustive_max` elements are also scanned pair by pair.
pub fn commutator_audit(params: &ElParams, cap: u64, exhaustive_max: usize) -> Result<Vec<CommutatorRow>, SymmetryError> {
    let n = params.n();
    let full = params.index_set();
    let mut rows = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            let k = subgroup_k(params, full.remove(i).remove(j), cap)?.table;
            let space = k.space();
            let gens: Vec<_> = k.generators().iter().map(|e| params.elementary(e)).collect();
            let mut witness = None;
            'scan: for a in &gens {
                for b in &gens {
                    if space.mul(a, b) != space.mul(b, a) {
                        witness = Some((format!("{:#x}", space.encode(a)), format!("{:#x}", space.encode(b))));
                        break 'scan;
                    }
                }
            }
            let exhaustive = k.len() <= exhaustive_max;
            if exhaustive && witness.is_none() {
                'full: for a in 0..k.len() as u32 {
                    for b in 0..a {
                        if k.mul_code(a, b) != k.mul_code(b, a) {
                            witness = Some((format!("{:#x}", k.code(a)), format!("{:#x}", k.code(b))));
                            break 'full;
                        }
                    }
                }
            }
            rows.push(CommutatorRow { pair: (i, j), adjacent: is_adjacent(n, i, j), order: k.len(), abelian: witness.is_none(), witness, exhaustive });
        }
    }
    Ok(rows)
}
