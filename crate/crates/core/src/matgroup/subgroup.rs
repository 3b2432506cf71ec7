use super::{enumerate_group, ElParams, GroupError, GroupTable, TypeSet};
use crate::algebra::Elementary;

/// Enumerated subgroup K_tau together with its type set.
#[derive(Clone, Debug)]
pub struct SubgroupTable {
    pub tau: TypeSet,
    pub table: GroupTable,
}

impl SubgroupTable {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Closure of an arbitrary generator list, labelled with `tau`.
    pub fn from_generators(params: &ElParams, tau: TypeSet, generators: &[Elementary], cap: u64) -> Result<Self, GroupError> {
        let table = enumerate_group(params.space(), generators, cap).map_err(|e| e.with_projected(params.projected_k_order(tau)))?;
        Ok(SubgroupTable { tau, table })
    }
}

/// K_tau = < e_{j,j+1}(m) : j not in tau, m in T >, enumerated and checked
/// element by element against the entry pattern.
///
/// For tau empty this is the whole group EL_{n+1}(R_s), generated by all
/// elementary matrices.
pub fn subgroup_k(params: &ElParams, tau: TypeSet, cap: u64) -> Result<SubgroupTable, GroupError> {
    let projected = params.projected_k_order(tau);
    if let Some(p) = projected {
        if p > cap as u128 {
            return Err(GroupError::CapExceeded { found: 0, cap, projected: Some(p) });
        }
    }
    let gens = if tau.is_empty() { params.el_generators() } else { params.k_generators(tau) };
    let sub = SubgroupTable::from_generators(params, tau, &gens, cap)?;
    for i in 0..sub.len() as u32 {
        let m = sub.table.matrix(i);
        if !params.membership_oracle_k(tau, &m) {
            return Err(GroupError::OracleMismatch { tau, witness: sub.table.code(i) });
        }
    }
    Ok(sub)
}

/// Brute-force list of all matrices matching the K_tau entry pattern
/// (tau nonempty).
pub fn pattern_elements(params: &ElParams, tau: TypeSet) -> Vec<crate::algebra::Code> {
    let space = params.space();
    let n = params.n();
    let mut slots = Vec::new();
    for k in 0..=n {
        for j in 0..=n {
            if k != j {
                if let Some(m) = params.entry_bound(tau, k, j) {
                    slots.push((k, j, params.t_power(m).elements));
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; slots.len()];
    loop {
        let mut m = space.identity();
        for (s, &(k, j, ref elems)) in slots.iter().enumerate() {
            m.set(k, j, &elems[idx[s]]);
        }
        out.push(space.encode(&m));
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                out.sort_unstable();
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < slots[pos].2.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
