use std::collections::BTreeMap;
use std::sync::Arc;

use super::{GeometryError, SimplicialComplex, SubgroupGeometrySystem};
use crate::algebra::Code;
use crate::matgroup::{left_cosets, CosetTable, GroupTable, TypeSet};

/// A face gK_sigma of the coset complex: its type and coset number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub sigma: TypeSet,
    pub coset: u32,
}

/// The coset complex X(G, (K_i)): faces gK_sigma, ordered by reverse inclusion
/// of cosets.
#[derive(Clone, Debug)]
pub struct CosetComplex {
    sys: SubgroupGeometrySystem,
    group: Arc<GroupTable>,
    cosets: BTreeMap<TypeSet, CosetTable>,
    vertex_offset: BTreeMap<usize, u32>,
}

/// Enumerates every coset gK_sigma for sigma a subset of the system's types.
pub fn build_complex(sys: &SubgroupGeometrySystem) -> Result<CosetComplex, GeometryError> {
    let group = sys.ambient().table().ok_or(GeometryError::AmbientNotTabulated { projected: sys.ambient().order() })?.clone();
    let mut cosets = BTreeMap::new();
    for sigma in sys.types().subsets() {
        let table = if sigma.is_empty() {
            let rep = (0..group.len() as u32).min_by_key(|&i| group.code(i)).unwrap();
            CosetTable { coset_of: vec![0; group.len()], reps: vec![rep], subgroup_order: group.len() }
        } else {
            left_cosets(&group, sys.subgroup(sigma).unwrap())?
        };
        cosets.insert(sigma, table);
    }
    let mut vertex_offset = BTreeMap::new();
    let mut off = 0u32;
    for i in sys.types().iter() {
        vertex_offset.insert(i, off);
        off += cosets[&TypeSet::single(i)].len() as u32;
    }
    Ok(CosetComplex { sys: sys.clone(), group, cosets, vertex_offset })
}

impl CosetComplex {
    pub fn system(&self) -> &SubgroupGeometrySystem {
        &self.sys
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn types(&self) -> TypeSet {
        self.sys.types()
    }

    /// Dimension n = |types| - 1.
    pub fn dim(&self) -> usize {
        self.sys.rank()
    }

    pub fn cosets(&self, sigma: TypeSet) -> &CosetTable {
        &self.cosets[&sigma]
    }

    /// |X(k)| for -1 <= k <= n.
    pub fn count(&self, k: isize) -> usize {
        self.cosets.iter().filter(|(s, _)| s.len() as isize == k + 1).map(|(_, c)| c.len()).sum()
    }

    /// Faces of dimension k, ordered by type then coset.
    pub fn simplices(&self, k: isize) -> Vec<Simplex> {
        self.cosets
            .iter()
            .filter(|(s, _)| s.len() as isize == k + 1)
            .flat_map(|(&sigma, c)| (0..c.len() as u32).map(move |coset| Simplex { sigma, coset }))
            .collect()
    }

    pub fn vertex_total(&self) -> usize {
        self.count(0)
    }

    /// Ambient index of the representative of a face.
    pub fn rep(&self, s: Simplex) -> u32 {
        self.cosets[&s.sigma].reps[s.coset as usize]
    }

    pub fn rep_code(&self, s: Simplex) -> Code {
        self.group.code(self.rep(s))
    }

    /// The face gK_sigma containing the ambient element g.
    pub fn face_of_element(&self, g: u32, sigma: TypeSet) -> Simplex {
        Simplex { sigma, coset: self.cosets[&sigma].coset_of[g as usize] }
    }

    /// Face of `s` of type `sub` (a subset of its type).
    pub fn face(&self, s: Simplex, sub: TypeSet) -> Simplex {
        self.face_of_element(self.rep(s), sub)
    }

    /// gK_a <= g'K_b iff a is a subset of b and g'^{-1} g lies in K_a, i.e. the
    /// two cosets of K_a agree.
    pub fn is_face(&self, a: Simplex, b: Simplex) -> bool {
        a.sigma.is_subset(b.sigma) && self.face(b, a.sigma) == a
    }

    /// Global vertex number of the vertex of type i in coset c.
    pub fn vertex_id(&self, i: usize, coset: u32) -> u32 {
        self.vertex_offset[&i] + coset
    }

    /// Type and coset of a global vertex number.
    pub fn vertex_of(&self, v: u32) -> Simplex {
        let (&i, &off) = self.vertex_offset.iter().rev().find(|(_, &off)| off <= v).unwrap();
        Simplex { sigma: TypeSet::single(i), coset: v - off }
    }

    /// Vertices {gK_i : i in sigma} of the face, as sorted global numbers.
    pub fn vertex_set(&self, s: Simplex) -> Vec<u32> {
        let g = self.rep(s);
        self.vertex_set_of_element(g, s.sigma)
    }

    pub fn vertex_set_of_element(&self, g: u32, sigma: TypeSet) -> Vec<u32> {
        sigma.iter().map(|i| self.vertex_id(i, self.cosets[&TypeSet::single(i)].coset_of[g as usize])).collect()
    }

    /// Left translation h . gK_sigma = hgK_sigma.
    pub fn translate(&self, h: u32, s: Simplex) -> Simplex {
        let hg = self.group.mul(h, self.rep(s)).expect("ambient group is closed");
        self.face_of_element(hg, s.sigma)
    }

    /// The complex as an abstract simplicial complex on the vertex set.
    pub fn to_simplicial(&self) -> SimplicialComplex {
        let mut types = Vec::new();
        let mut labels = Vec::new();
        for i in self.types().iter() {
            let c = &self.cosets[&TypeSet::single(i)];
            for &r in &c.reps {
                types.push(i as u8);
                labels.push(format!("{:#x}", self.group.code(r)));
            }
        }
        let sims = (1..=self.dim() as isize).flat_map(|k| self.simplices(k)).map(|s| self.vertex_set(s));
        SimplicialComplex::from_simplices(types, labels, sims.collect::<Vec<_>>())
    }
}
