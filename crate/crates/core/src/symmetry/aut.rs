use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SymmetryError;
use crate::algebra::{MatrixSpace, RingMatrix};
use crate::geometry::SubgroupGeometrySystem;
use crate::matgroup::{GroupTable, TypeSet};

/// The automorphism A -> iota^e(gamma_rho(A)) of EL_{n+1}, where
/// gamma_rho(A)(i, j) = A(rho^{-1}(i), rho^{-1}(j)) and iota(A) = (A^{-1})^t.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutDescriptor {
    /// rho(i) for i in 0..=n.
    pub perm: Vec<usize>,
    pub inverse_transpose: bool,
}

impl AutDescriptor {
    pub fn identity(n: usize) -> Self {
        AutDescriptor { perm: (0..=n).collect(), inverse_transpose: false }
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self, SymmetryError> {
        check_perm(&perm)?;
        Ok(AutDescriptor { perm, inverse_transpose: false })
    }

    /// gamma_r: conjugation by the cyclic shift i -> i+1.
    pub fn rotation(n: usize) -> Self {
        AutDescriptor { perm: (0..=n).map(|i| (i + 1) % (n + 1)).collect(), inverse_transpose: false }
    }

    /// gamma_s: iota after conjugation by the reversal i -> n-i.
    pub fn reflection(n: usize) -> Self {
        AutDescriptor { perm: (0..=n).map(|i| n - i).collect(), inverse_transpose: true }
    }

    pub fn inverse_transpose(n: usize) -> Self {
        AutDescriptor { perm: (0..=n).collect(), inverse_transpose: true }
    }

    pub fn n(&self) -> usize {
        self.perm.len() - 1
    }

    pub fn is_identity(&self) -> bool {
        !self.inverse_transpose && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// self after other. iota commutes with every gamma_rho and
    /// gamma_rho gamma_sigma = gamma_{rho sigma}.
    pub fn compose(&self, other: &Self) -> Self {
        AutDescriptor {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
            inverse_transpose: self.inverse_transpose ^ other.inverse_transpose,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
        }
        AutDescriptor { perm, inverse_transpose: self.inverse_transpose }
    }
}

impl fmt::Display for AutDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse_transpose {
            write!(f, "iota.")?;
        }
        write!(f, "gamma{:?}", self.perm)
    }
}

fn check_perm(perm: &[usize]) -> Result<(), SymmetryError> {
    let seen: BTreeSet<usize> = perm.iter().copied().collect();
    if perm.is_empty() || seen.len() != perm.len() || seen.iter().any(|&p| p >= perm.len()) {
        return Err(SymmetryError::InvalidPermutation(perm.to_vec()));
    }
    Ok(())
}

/// Applies the automorphism to a matrix.
pub fn apply_aut(desc: &AutDescriptor, space: &MatrixSpace, a: &RingMatrix) -> Result<RingMatrix, SymmetryError> {
    check_perm(&desc.perm)?;
    if desc.perm.len() != space.dim() {
        return Err(SymmetryError::DimensionMismatch { perm: desc.perm.len(), dim: space.dim() });
    }
    let mut out = space.zero();
    for i in 0..space.dim() {
        for j in 0..space.dim() {
            out.entry_mut(desc.perm[i], desc.perm[j]).copy_from_slice(a.entry(i, j));
        }
    }
    if desc.inverse_transpose {
        out = space.transpose(&space.inv(&out)?);
    }
    Ok(out)
}

/// The automorphism as a permutation of the indices of a tabulated group.
pub fn image_map(desc: &AutDescriptor, group: &GroupTable) -> Result<Vec<u32>, SymmetryError> {
    let space = group.space();
    (0..group.len() as u32)
        .map(|g| {
            let img = apply_aut(desc, space, &group.matrix(g))?;
            group.index_of_matrix(&img).ok_or(SymmetryError::LeavesGroup { element: group.code(g) })
        })
        .collect()
}

/// Element of K_i whose image lies outside the candidate K_j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationWitness {
    pub i: usize,
    pub element: String,
    pub image: String,
}

/// Finds psi with gamma(K_tau) = K_{psi(tau)} for every subgroup of the system.
///
/// Each K_i is compared elementwise with every K_j of the same order; the
/// permutation found on singletons is then checked on every K_tau.
pub fn verify_preserves_system(desc: &AutDescriptor, sys: &SubgroupGeometrySystem) -> Result<Vec<usize>, SymmetryError> {
    let space = sys.params().space();
    let types = sys.types().to_vec();
    let n = sys.params().n();
    if desc.perm.len() != n + 1 {
        return Err(SymmetryError::DimensionMismatch { perm: desc.perm.len(), dim: n + 1 });
    }
    let image_set = |k: &GroupTable| -> Result<HashSet<u128>, SymmetryError> {
        (0..k.len() as u32).map(|g| Ok(space.encode(&apply_aut(desc, space, &k.matrix(g))?))).collect()
    };
    let mut psi: Vec<usize> = (0..=n).collect();
    let mut used = BTreeSet::new();
    for &i in &types {
        let ki = sys.subgroup_abs(sys.base().insert(i)).ok_or(SymmetryError::MissingSubgroup(TypeSet::single(i)))?;
        let img = image_set(ki)?;
        let hit = types.iter().copied().find(|&j| {
            let kj = sys.subgroup_abs(sys.base().insert(j)).unwrap();
            kj.len() == img.len() && img.iter().all(|&c| kj.contains_code(c))
        });
        match hit {
            Some(j) if !used.contains(&j) => {
                psi[i] = j;
                used.insert(j);
            }
            _ => return Err(SymmetryError::NotPreserving(witness(desc, sys, i)?)),
        }
    }
    for tau in sys.types().subsets().into_iter().skip(2) {
        let k = sys.subgroup_abs(sys.base().union(tau)).unwrap();
        let target = sys.base().union(tau.map(|i| psi[i]));
        let kt = sys.subgroup_abs(target).ok_or(SymmetryError::MissingSubgroup(target))?;
        let img = image_set(k)?;
        if kt.len() != img.len() || !img.iter().all(|&c| kt.contains_code(c)) {
            let i = tau.iter().next().unwrap();
            return Err(SymmetryError::NotPreserving(witness(desc, sys, i)?));
        }
    }
    Ok(psi)
}

/// A generator of K_i whose image lies in no K_j.
fn witness(desc: &AutDescriptor, sys: &SubgroupGeometrySystem, i: usize) -> Result<PreservationWitness, SymmetryError> {
    let space = sys.params().space();
    let ki = sys.subgroup_abs(sys.base().insert(i)).unwrap();
    let others: Vec<_> = sys.types().iter().filter_map(|j| sys.subgroup_abs(sys.base().insert(j))).collect();
    let mut fallback = None;
    for g in 0..ki.len() as u32 {
        let m = ki.matrix(g);
        let img = apply_aut(desc, space, &m)?;
        let code = space.encode(&img);
        let w = PreservationWitness { i, element: format!("{:#x}", ki.code(g)), image: format!("{code:#x}") };
        if !others.iter().any(|k| k.contains_code(code)) {
            return Ok(w);
        }
        fallback.get_or_insert(w);
    }
    Ok(fallback.unwrap())
}
