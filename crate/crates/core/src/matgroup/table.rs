use std::collections::{HashMap, HashSet};

use super::GroupError;
use crate::algebra::{Code, Elementary, MatrixSpace, RingMatrix};

/// Largest dense code space (in bits of the visited bitset) used by
/// [`closure_order`]; larger spaces fall back to hashing.
const DENSE_LIMIT: u64 = 1 << 32;

/// Fully enumerated finite matrix group.
///
/// Elements are stored in breadth-first order from the identity, so index 0
/// is always the identity.
#[derive(Clone, Debug)]
pub struct GroupTable {
    space: MatrixSpace,
    elements: Vec<Code>,
    digits: Vec<u8>,
    index: HashMap<Code, u32>,
    generators: Vec<Elementary>,
}

impl GroupTable {
    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> &[Elementary] {
        &self.generators
    }

    pub fn codes(&self) -> &[Code] {
        &self.elements
    }

    pub fn code(&self, i: u32) -> Code {
        self.elements[i as usize]
    }

    pub fn digits(&self, i: u32) -> &[u8] {
        let d = self.space.digits();
        &self.digits[i as usize * d..(i as usize + 1) * d]
    }

    pub fn matrix(&self, i: u32) -> RingMatrix {
        RingMatrix { dim: self.space.dim(), s: self.space.s(), data: self.digits(i).to_vec() }
    }

    pub fn index_of(&self, code: Code) -> Option<u32> {
        self.index.get(&code).copied()
    }

    pub fn index_of_matrix(&self, m: &RingMatrix) -> Option<u32> {
        self.index_of(self.space.encode(m))
    }

    pub fn contains_code(&self, code: Code) -> bool {
        self.index.contains_key(&code)
    }

    pub fn contains(&self, m: &RingMatrix) -> bool {
        self.contains_code(self.space.encode(m))
    }

    /// Code of the product of two stored elements.
    pub fn mul_code(&self, a: u32, b: u32) -> Code {
        let mut out = vec![0u8; self.space.digits()];
        self.space.mul_into(self.digits(a), self.digits(b), &mut out);
        self.space.encode_digits(&out)
    }

    /// Index of the product, `None` if the product leaves the table.
    pub fn mul(&self, a: u32, b: u32) -> Option<u32> {
        self.index_of(self.mul_code(a, b))
    }

    pub fn inverse(&self, a: u32) -> Option<u32> {
        let m = self.space.inv(&self.matrix(a)).ok()?;
        self.index_of_matrix(&m)
    }

    pub fn code_set(&self) -> HashSet<Code> {
        self.elements.iter().copied().collect()
    }

    /// Sorted copy of the element codes.
    pub fn sorted_codes(&self) -> Vec<Code> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }

    /// Builds a table from an explicit element list (identity first is not
    /// required). Closure is not checked.
    pub fn from_codes(space: MatrixSpace, codes: Vec<Code>, generators: Vec<Elementary>) -> Self {
        let d = space.digits();
        let mut digits = vec![0u8; codes.len() * d];
        for (i, &c) in codes.iter().enumerate() {
            space.decode_into(c, &mut digits[i * d..(i + 1) * d]);
        }
        let index = codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        GroupTable { space, elements: codes, digits, index, generators }
    }
}

/// Breadth-first closure of the identity under right multiplication by the
/// generators. Fails once more than `cap` elements have been found.
pub fn enumerate_group(space: &MatrixSpace, generators: &[Elementary], cap: u64) -> Result<GroupTable, GroupError> {
    let d = space.digits();
    let id = space.identity();
    let id_code = space.encode(&id);
    let mut elements = vec![id_code];
    let mut digits = id.data.clone();
    let mut index: HashMap<Code, u32> = HashMap::new();
    index.insert(id_code, 0);
    let mut buf = vec![0u8; d];
    let mut head = 0usize;
    while head < elements.len() {
        for g in generators {
            buf.copy_from_slice(&digits[head * d..(head + 1) * d]);
            space.right_mul_elementary(&mut buf, g.i, g.j, &g.r.coeffs);
            let code = space.encode_digits(&buf);
            if let std::collections::hash_map::Entry::Vacant(v) = index.entry(code) {
                if elements.len() as u64 >= cap {
                    return Err(GroupError::CapExceeded { found: elements.len() as u64 + 1, cap, projected: None });
                }
                v.insert(elements.len() as u32);
                elements.push(code);
                digits.extend_from_slice(&buf);
            }
        }
        head += 1;
    }
    Ok(GroupTable { space: space.clone(), elements, digits, index, generators: generators.to_vec() })
}

/// Order of the group generated by `generators`, without materialising an
/// index. Uses a dense visited bitset when the code space is small enough.
pub fn closure_order(space: &MatrixSpace, generators: &[Elementary], cap: u64) -> Result<u64, GroupError> {
    let q = space.ring().q() as u64;
    let dense = (q as f64).powi(space.digits() as i32) <= DENSE_LIMIT as f64;
    if dense {
        closure_order_dense(space, generators, cap)
    } else {
        Ok(enumerate_group(space, generators, cap)?.len() as u64)
    }
}

fn closure_order_dense(space: &MatrixSpace, generators: &[Elementary], cap: u64) -> Result<u64, GroupError> {
    let q = space.ring().q() as u64;
    let size = q.pow(space.digits() as u32);
    let mut seen = vec![0u64; (size as usize).div_ceil(64)];
    let d = space.digits();
    let id = space.identity();
    let mark = |seen: &mut [u64], r: u64| -> bool {
        let (w, b) = ((r >> 6) as usize, r & 63);
        let fresh = seen[w] >> b & 1 == 0;
        seen[w] |= 1 << b;
        fresh
    };
    mark(&mut seen, space.dense_rank(&id.data));
    let mut count = 1u64;
    let mut frontier: Vec<Code> = vec![space.encode(&id)];
    let mut cur = vec![0u8; d];
    let mut buf = vec![0u8; d];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &code in &frontier {
            space.decode_into(code, &mut cur);
            for g in generators {
                buf.copy_from_slice(&cur);
                space.right_mul_elementary(&mut buf, g.i, g.j, &g.r.coeffs);
                if mark(&mut seen, space.dense_rank(&buf)) {
                    count += 1;
                    if count > cap {
                        return Err(GroupError::CapExceeded { found: count, cap, projected: None });
                    }
                    next.push(space.encode_digits(&buf));
                }
            }
        }
        frontier = next;
    }
    Ok(count)
}
