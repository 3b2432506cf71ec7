use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::aut::{verify_preserves_system, AutDescriptor, PreservationWitness};
use super::SymmetryError;
use crate::geometry::SubgroupGeometrySystem;

/// rho(i+1) - rho(i) = +-1 mod n+1 for every i.
pub fn preserves_cyclic_adjacency(rho: &[usize]) -> bool {
    let m = rho.len();
    (0..m).all(|i| {
        let d = (rho[(i + 1) % m] + m - rho[i]) % m;
        d == 1 || d == m - 1
    })
}

pub fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    heap_permute(m, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

/// D_{n+1}: permutations of {0..n} preserving cyclic adjacency.
pub fn dihedral_permutations(n: usize) -> BTreeSet<Vec<usize>> {
    all_permutations(n + 1).into_iter().filter(|p| preserves_cyclic_adjacency(p)).collect()
}

/// Closure of a set of descriptors under composition.
pub fn generate(gens: &[AutDescriptor]) -> Vec<AutDescriptor> {
    let n = gens[0].n();
    let mut seen = BTreeSet::from([AutDescriptor::identity(n)]);
    let mut queue = vec![AutDescriptor::identity(n)];
    while let Some(a) = queue.pop() {
        for g in gens {
            let b = g.compose(&a);
            if seen.insert(b.clone()) {
                queue.push(b);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DihedralReport {
    pub n: usize,
    pub rotation_psi: Vec<usize>,
    pub reflection_psi: Vec<usize>,
    /// Order of the group generated by gamma_r and gamma_s.
    pub gamma_order: usize,
    /// psi of every element, keyed by the descriptor's display form.
    pub psi: BTreeMap<String, Vec<usize>>,
    pub image_order: usize,
    pub dihedral_order: usize,
    pub image_is_dihedral: bool,
    pub adjacency_preserved: bool,
    pub homomorphism: bool,
    /// Non-identity elements acting trivially on the types.
    pub kernel: Vec<String>,
    /// The witness produced for gamma_(01); `None` if it preserved the system.
    pub transposition: Option<PreservationWitness>,
}

impl DihedralReport {
    pub fn holds(&self) -> bool {
        self.image_order == 2 * (self.n + 1)
            && self.image_is_dihedral
            && self.adjacency_preserved
            && self.homomorphism
            && self.transposition.is_some()
    }
}

/// Computes psi for every element of <gamma_r, gamma_s> directly on the
/// subgroups and compares the image with D_{n+1}.
pub fn dihedral_audit(sys: &SubgroupGeometrySystem) -> Result<DihedralReport, SymmetryError> {
    let n = sys.params().n();
    let (r, s) = (AutDescriptor::rotation(n), AutDescriptor::reflection(n));
    let elems = generate(&[r.clone(), s.clone()]);
    let mut psi = BTreeMap::new();
    for a in &elems {
        psi.insert(a.clone(), verify_preserves_system(a, sys)?);
    }
    let image: BTreeSet<Vec<usize>> = psi.values().cloned().collect();
    let dihedral = dihedral_permutations(n);
    let homomorphism = elems.iter().all(|a| {
        elems.iter().all(|b| {
            let ab = &psi[&a.compose(b)];
            let (pa, pb) = (&psi[a], &psi[b]);
            (0..=n).all(|i| ab[i] == pa[pb[i]])
        })
    });
    let kernel = elems.iter().filter(|a| !a.is_identity() && psi[*a].iter().enumerate().all(|(i, &p)| i == p)).map(|a| a.to_string()).collect();
    let mut swap: Vec<usize> = (0..=n).collect();
    swap.swap(0, 1);
    let transposition = match verify_preserves_system(&AutDescriptor::permutation(swap)?, sys) {
        Err(SymmetryError::NotPreserving(w)) => Some(w),
        Ok(_) => None,
        Err(e) => return Err(e),
    };
    Ok(DihedralReport {
        n,
        rotation_psi: psi[&r].clone(),
        reflection_psi: psi[&s].clone(),
        gamma_order: elems.len(),
        adjacency_preserved: image.iter().all(|p| preserves_cyclic_adjacency(p)),
        image_order: image.len(),
        dihedral_order: dihedral.len(),
        image_is_dihedral: image == dihedral,
        homomorphism,
        kernel,
        transposition,
        psi: psi.into_iter().map(|(a, p)| (a.to_string(), p)).collect(),
    })
}
