use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::aut::{image_map, verify_preserves_system, AutDescriptor};
use super::dihedral::{all_permutations, dihedral_permutations, generate};
use super::SymmetryError;
use crate::geometry::{CosetComplex, Simplex};
use crate::matgroup::TypeSet;

/// An element of Gamma with its type permutation and its action on G.
#[derive(Clone, Debug)]
pub struct AutElement {
    pub desc: AutDescriptor,
    pub psi: Vec<usize>,
    pub map: Vec<u32>,
}

/// An element (g, gamma) of G x| Gamma; `aut` indexes [`SemidirectAction::auts`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SemiElement {
    pub g: u32,
    pub aut: usize,
}

/// The action (g, gamma) . g'K_tau = g gamma(g') K_{psi(tau)} on a coset complex.
pub struct SemidirectAction<'a> {
    x: &'a CosetComplex,
    auts: Vec<AutElement>,
    index: HashMap<AutDescriptor, usize>,
}

impl<'a> SemidirectAction<'a> {
    /// Gamma is the group generated by `gens`; every element must preserve the system.
    pub fn new(x: &'a CosetComplex, gens: &[AutDescriptor]) -> Result<Self, SymmetryError> {
        if !x.system().base().is_empty() {
            return Err(SymmetryError::NotTopLevel);
        }
        let mut auts = Vec::new();
        for desc in generate(gens) {
            let psi = verify_preserves_system(&desc, x.system())?;
            let map = image_map(&desc, x.group())?;
            auts.push(AutElement { desc, psi, map });
        }
        // identity first
        auts.sort_by_key(|a| !a.desc.is_identity());
        let index = auts.iter().enumerate().map(|(i, a)| (a.desc.clone(), i)).collect();
        Ok(SemidirectAction { x, auts, index })
    }

    /// Gamma = <gamma_r, gamma_s>.
    pub fn dihedral(x: &'a CosetComplex) -> Result<Self, SymmetryError> {
        let n = x.system().params().n();
        Self::new(x, &[AutDescriptor::rotation(n), AutDescriptor::reflection(n)])
    }

    pub fn complex(&self) -> &CosetComplex {
        self.x
    }

    pub fn auts(&self) -> &[AutElement] {
        &self.auts
    }

    pub fn aut_index(&self, d: &AutDescriptor) -> Option<usize> {
        self.index.get(d).copied()
    }

    pub fn order(&self) -> usize {
        self.x.group().len() * self.auts.len()
    }

    pub fn identity(&self) -> SemiElement {
        SemiElement { g: 0, aut: 0 }
    }

    fn mul_g(&self, a: u32, b: u32) -> u32 {
        self.x.group().mul(a, b).expect("ambient group is closed")
    }

    /// (g1, gamma1)(g2, gamma2) = (g1 gamma1(g2), gamma1 gamma2).
    pub fn compose(&self, a: SemiElement, b: SemiElement) -> SemiElement {
        let g = self.mul_g(a.g, self.auts[a.aut].map[b.g as usize]);
        let d = self.auts[a.aut].desc.compose(&self.auts[b.aut].desc);
        SemiElement { g, aut: self.index[&d] }
    }

    pub fn psi_type(&self, aut: usize, tau: TypeSet) -> TypeSet {
        let psi = &self.auts[aut].psi;
        tau.map(|i| psi[i])
    }

    pub fn act(&self, e: SemiElement, s: Simplex) -> Simplex {
        let a = &self.auts[e.aut];
        let img = self.mul_g(e.g, a.map[self.x.rep(s) as usize]);
        self.x.face_of_element(img, self.psi_type(e.aut, s.sigma))
    }

    /// (gen, id) for the generators of G, then (e, gamma) for the generators of Gamma.
    pub fn generator_moves(&self, gens: &[AutDescriptor]) -> Vec<SemiElement> {
        let group = self.x.group();
        let space = group.space();
        let mut out: Vec<SemiElement> = group
            .generators()
            .iter()
            .filter_map(|e| space.elementary(e.i, e.j, &e.r).ok())
            .filter_map(|m| group.index_of_matrix(&m))
            .map(|g| SemiElement { g, aut: 0 })
            .collect();
        out.extend(gens.iter().filter_map(|d| self.aut_index(d)).map(|aut| SemiElement { g: 0, aut }));
        out
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = p;
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }

    /// Class sizes keyed by root.
    fn classes(&mut self) -> BTreeMap<u32, Vec<u32>> {
        let mut out: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for x in 0..self.parent.len() as u32 {
            let r = self.find(x);
            out.entry(r).or_default().push(x);
        }
        out
    }
}

/// Dense numbering of the faces of one dimension.
struct FaceIndex {
    offsets: BTreeMap<TypeSet, u32>,
    faces: Vec<Simplex>,
}

impl FaceIndex {
    fn new(x: &CosetComplex, k: isize) -> Self {
        let faces = x.simplices(k);
        let mut offsets = BTreeMap::new();
        for (i, s) in faces.iter().enumerate() {
            offsets.entry(s.sigma).or_insert(i as u32);
        }
        FaceIndex { offsets, faces }
    }

    fn id(&self, s: Simplex) -> u32 {
        self.offsets[&s.sigma] + s.coset
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub k: usize,
    pub faces: usize,
    pub orbits: usize,
    pub orbit_sizes: Vec<usize>,
    /// Number of D_{n+1}-orbits on the type sets of size k+1.
    pub type_orbits: usize,
    /// Each orbit's set of types is exactly one D_{n+1}-orbit.
    pub types_match: bool,
    pub sizes_divide: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedRow {
    pub k: usize,
    pub tuples: usize,
    pub orbits: usize,
    /// Number of D_{n+1}-orbits on ordered type tuples of length k+1.
    pub type_orbits: usize,
    pub types_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerRow {
    pub vertex_type: usize,
    pub gamma: String,
    pub edges: usize,
    pub orbits: usize,
    /// Moves that took an incident edge to a non-incident one.
    pub escapes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub n: usize,
    pub group_order: usize,
    pub gamma_order: usize,
    /// Orbits of G alone on the top faces.
    pub g_orbits_top: usize,
    pub rows: Vec<OrbitRow>,
    pub oriented: Vec<OrientedRow>,
    pub stabilizer: Vec<StabilizerRow>,
    pub composition_samples: usize,
    pub composition_failures: usize,
    pub face_pairs: usize,
    pub face_failures: usize,
    /// Every generator move permutes each X(k).
    pub bijective: bool,
}

impl TransitivityReport {
    pub fn row(&self, k: usize) -> Option<&OrbitRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    /// X(n), X(0) and X(n-1) are single orbits.
    pub fn single_orbits(&self) -> bool {
        let n = self.n;
        [n, 0, n - 1].iter().all(|&k| self.row(k).is_some_and(|r| r.orbits == 1))
    }

    pub fn holds(&self) -> bool {
        self.g_orbits_top == 1
            && self.single_orbits()
            && self.rows.iter().all(|r| r.types_match && r.sizes_divide)
            && self.oriented.iter().all(|r| r.types_match)
            && self.stabilizer.iter().all(|r| r.orbits == 1 && r.escapes == 0)
            && self.composition_failures == 0
            && self.face_failures == 0
            && self.bijective
    }
}

/// D-orbits of a family of type tuples under rho . (t_0, ..., t_k).
fn tuple_orbits<T: Ord + Clone>(items: &[T], dihedral: &BTreeSet<Vec<usize>>, act: impl Fn(&[usize], &T) -> T) -> BTreeSet<BTreeSet<T>> {
    items.iter().map(|t| dihedral.iter().map(|p| act(p, t)).collect()).collect()
}

/// Orbits of G x| Gamma on every X(k), the oriented variant on X(0) and X(n),
/// vertex-stabilizer transitivity for n = 2, and sampled checks of the action.
pub fn transitivity_audit(act: &SemidirectAction, gens: &[AutDescriptor], samples: usize, seed: u64) -> TransitivityReport {
    let x = act.complex();
    let n = x.dim();
    let order = act.order();
    let moves = act.generator_moves(gens);
    let g_moves: Vec<SemiElement> = moves.iter().copied().filter(|m| m.aut == 0).collect();
    let dihedral = dihedral_permutations(n);
    let mut bijective = true;

    let orbits_on = |k: isize, mv: &[SemiElement], bij: &mut bool| {
        let idx = FaceIndex::new(x, k);
        let mut uf = UnionFind::new(idx.faces.len());
        for &m in mv {
            let mut hit = vec![false; idx.faces.len()];
            for (i, &s) in idx.faces.iter().enumerate() {
                let j = idx.id(act.act(m, s));
                hit[j as usize] = true;
                uf.union(i as u32, j);
            }
            *bij &= hit.iter().all(|&h| h);
        }
        (idx, uf.classes())
    };

    let (_, top_g) = orbits_on(n as isize, &g_moves, &mut bijective);
    let mut rows = Vec::new();
    for k in 0..=n {
        let (idx, classes) = orbits_on(k as isize, &moves, &mut bijective);
        let sets: Vec<TypeSet> = x.types().subsets().into_iter().filter(|t| t.len() == k + 1).collect();
        let expected = tuple_orbits(&sets, &dihedral, |p, t| t.map(|i| p[i]));
        let found: BTreeSet<BTreeSet<TypeSet>> = classes.values().map(|c| c.iter().map(|&f| idx.faces[f as usize].sigma).collect()).collect();
        let mut orbit_sizes: Vec<usize> = classes.values().map(|c| c.len()).collect();
        orbit_sizes.sort_unstable();
        rows.push(OrbitRow {
            k,
            faces: idx.faces.len(),
            orbits: classes.len(),
            type_orbits: expected.len(),
            types_match: found == expected && classes.len() == expected.len(),
            sizes_divide: orbit_sizes.iter().all(|&s| order % s == 0),
            orbit_sizes,
        });
    }

    let mut oriented = Vec::new();
    for k in [0, n] {
        oriented.push(oriented_orbits(act, &moves, k, &dihedral));
    }

    let stabilizer = if n == 2 { (0..=n).filter_map(|i| stabilizer_row(act, i)).collect() } else { Vec::new() };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let glen = x.group().len() as u32;
    let all_faces: Vec<Simplex> = (0..=n as isize).flat_map(|k| x.simplices(k)).collect();
    let mut composition_failures = 0;
    for _ in 0..samples {
        let a = SemiElement { g: rng.gen_range(0..glen), aut: rng.gen_range(0..act.auts().len()) };
        let b = SemiElement { g: rng.gen_range(0..glen), aut: rng.gen_range(0..act.auts().len()) };
        let s = all_faces[rng.gen_range(0..all_faces.len())];
        let split = act.compose(SemiElement { g: a.g, aut: 0 }, SemiElement { g: 0, aut: a.aut });
        if act.act(act.compose(a, b), s) != act.act(a, act.act(b, s)) || split != a || act.act(act.identity(), s) != s {
            composition_failures += 1;
        }
    }

    let mut face_pairs = 0;
    let mut face_failures = 0;
    for &b in &all_faces {
        for sub in b.sigma.subsets().into_iter().skip(1) {
            let a = x.face(b, sub);
            for &m in &moves {
                face_pairs += 1;
                if !x.is_face(act.act(m, a), act.act(m, b)) {
                    face_failures += 1;
                }
            }
        }
    }

    TransitivityReport {
        n,
        group_order: x.group().len(),
        gamma_order: act.auts().len(),
        g_orbits_top: top_g.len(),
        rows,
        oriented,
        stabilizer,
        composition_samples: samples,
        composition_failures,
        face_pairs,
        face_failures,
        bijective,
    }
}

/// Orbits on pairs (face of dimension k, ordering of its types).
fn oriented_orbits(act: &SemidirectAction, moves: &[SemiElement], k: usize, dihedral: &BTreeSet<Vec<usize>>) -> OrientedRow {
    let x = act.complex();
    let n = x.dim();
    let idx = FaceIndex::new(x, k as isize);
    let tuples: Vec<Vec<usize>> = all_permutations(n + 1).into_iter().map(|p| p[..=k].to_vec()).collect::<BTreeSet<_>>().into_iter().collect();
    let tuple_id: HashMap<&Vec<usize>, u32> = tuples.iter().enumerate().map(|(i, t)| (t, i as u32)).collect();
    let by_set: BTreeMap<TypeSet, Vec<u32>> = tuples.iter().enumerate().fold(BTreeMap::new(), |mut m, (i, t)| {
        m.entry(TypeSet::from_slice(t)).or_default().push(i as u32);
        m
    });
    let per = by_set.values().next().map_or(1, |v| v.len());
    // node = face * per + position of the tuple among the orderings of its type set
    let pos: HashMap<u32, u32> = by_set.values().flat_map(|v| v.iter().enumerate().map(|(p, &t)| (t, p as u32))).collect();
    let total = idx.faces.len() * per;
    let mut uf = UnionFind::new(total);
    for &m in moves {
        let psi = &act.auts()[m.aut].psi;
        for (f, &s) in idx.faces.iter().enumerate() {
            let img = idx.id(act.act(m, s));
            for &t in &by_set[&s.sigma] {
                let mapped: Vec<usize> = tuples[t as usize].iter().map(|&i| psi[i]).collect();
                let u = f as u32 * per as u32 + pos[&t];
                let v = img * per as u32 + pos[&tuple_id[&mapped]];
                uf.union(u, v);
            }
        }
    }
    let classes = uf.classes();
    let expected = tuple_orbits(&tuples, dihedral, |p, t| t.iter().map(|&i| p[i]).collect::<Vec<usize>>());
    let found: BTreeSet<BTreeSet<Vec<usize>>> = classes
        .values()
        .map(|c| {
            c.iter()
                .map(|&node| {
                    let s = idx.faces[(node / per as u32) as usize];
                    tuples[by_set[&s.sigma][(node % per as u32) as usize] as usize].clone()
                })
                .collect()
        })
        .collect();
    OrientedRow { k, tuples: total, orbits: classes.len(), type_orbits: expected.len(), types_match: found == expected && classes.len() == expected.len() }
}

/// K_i x| {e, gamma} on the edges at the vertex K_i, with gamma fixing type i
/// and swapping the other two.
fn stabilizer_row(act: &SemidirectAction, i: usize) -> Option<StabilizerRow> {
    let x = act.complex();
    let n = x.dim();
    let aut = act.auts().iter().position(|a| a.psi[i] == i && (0..=n).any(|j| a.psi[j] != j))?;
    let v = x.face_of_element(0, TypeSet::single(i));
    let edges: Vec<Simplex> = x.simplices(1).into_iter().filter(|e| e.sigma.contains(i) && x.face(*e, TypeSet::single(i)) == v).collect();
    let pos: HashMap<Simplex, u32> = edges.iter().enumerate().map(|(p, &e)| (e, p as u32)).collect();
    let group = x.group();
    let space = group.space();
    let ki = x.system().subgroup_abs(TypeSet::single(i))?;
    let mut moves: Vec<SemiElement> = ki
        .generators()
        .iter()
        .filter_map(|e| space.elementary(e.i, e.j, &e.r).ok())
        .filter_map(|m| group.index_of_matrix(&m))
        .map(|g| SemiElement { g, aut: 0 })
        .collect();
    moves.push(SemiElement { g: 0, aut });
    let mut uf = UnionFind::new(edges.len());
    let mut escapes = 0;
    for &m in &moves {
        for (p, &e) in edges.iter().enumerate() {
            match pos.get(&act.act(m, e)) {
                Some(&q) => uf.union(p as u32, q),
                None => escapes += 1,
            }
        }
    }
    Some(StabilizerRow { vertex_type: i, gamma: act.auts()[aut].desc.to_string(), edges: edges.len(), orbits: uf.classes().len(), escapes })
}
