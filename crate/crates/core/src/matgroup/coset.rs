use std::collections::HashSet;

use super::{GroupError, GroupTable};
use crate::algebra::Code;

/// Partition of a group table into left cosets gK.
///
/// Cosets are numbered by increasing code of their representative, which is
/// the element of least canonical code in the coset.
#[derive(Clone, Debug)]
pub struct CosetTable {
    /// Coset number of every element of the ambient table.
    pub coset_of: Vec<u32>,
    /// Ambient index of the representative of each coset.
    pub reps: Vec<u32>,
    pub subgroup_order: usize,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Left cosets of `k` in `g`. Requires every element of `k` to lie in `g`.
pub fn left_cosets(g: &GroupTable, k: &GroupTable) -> Result<CosetTable, GroupError> {
    for &c in k.codes() {
        if !g.contains_code(c) {
            return Err(GroupError::NotASubgroup { witness: c });
        }
    }
    let d = g.space().digits();
    let space = g.space();
    let mut coset_of = vec![u32::MAX; g.len()];
    let mut raw_reps: Vec<(Code, u32)> = Vec::new();
    let mut buf = vec![0u8; d];
    let mut members = Vec::with_capacity(k.len());
    for x in 0..g.len() as u32 {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let id = raw_reps.len() as u32;
        members.clear();
        let mut best = (g.code(x), x);
        for h in 0..k.len() as u32 {
            space.mul_into(g.digits(x), k.digits(h), &mut buf);
            let code = space.encode_digits(&buf);
            let idx = g.index_of(code).ok_or(GroupError::NotClosed { witness: code })?;
            if coset_of[idx as usize] != u32::MAX && coset_of[idx as usize] != id {
                return Err(GroupError::NotClosed { witness: code });
            }
            coset_of[idx as usize] = id;
            members.push(idx);
            best = best.min((code, idx));
        }
        raw_reps.push(best);
    }
    // renumber by representative code
    let mut order: Vec<u32> = (0..raw_reps.len() as u32).collect();
    order.sort_by_key(|&i| raw_reps[i as usize].0);
    let mut rename = vec![0u32; order.len()];
    for (new, &old) in order.iter().enumerate() {
        rename[old as usize] = new as u32;
    }
    for c in coset_of.iter_mut() {
        *c = rename[*c as usize];
    }
    let reps = order.iter().map(|&old| raw_reps[old as usize].1).collect();
    Ok(CosetTable { coset_of, reps, subgroup_order: k.len() })
}

/// The set AB = {ab}, as sorted codes.
pub fn product_set(a: &GroupTable, b: &GroupTable) -> Vec<Code> {
    let space = a.space();
    let mut buf = vec![0u8; space.digits()];
    let mut set = HashSet::with_capacity(a.len().max(b.len()));
    for x in 0..a.len() as u32 {
        for y in 0..b.len() as u32 {
            space.mul_into(a.digits(x), b.digits(y), &mut buf);
            set.insert(space.encode_digits(&buf));
        }
    }
    let mut v: Vec<Code> = set.into_iter().collect();
    v.sort_unstable();
    v
}
