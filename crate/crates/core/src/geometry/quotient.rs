use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_complex, GeometryError, Limits, SubgroupGeometrySystem};
use crate::algebra::RingMatrix;
use crate::matgroup::{subgroup_k, ElParams, GroupTable, TypeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelRow {
    pub i: usize,
    pub order: usize,
    /// K_i meets the kernel only in the identity.
    pub trivial: bool,
    /// A non-identity element of K_i reducing to the identity.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkIsoRow {
    pub tau: TypeSet,
    /// Face counts per dimension of the two links.
    pub counts: Vec<usize>,
    pub counts_reduced: Vec<usize>,
    /// Reduction maps K_sigma onto the reduced K_sigma for every sigma containing tau.
    pub subgroups_onto: bool,
    /// The induced map on faces is a bijection in every dimension.
    pub bijective: bool,
    pub faces_preserved: bool,
}

impl LinkIsoRow {
    pub fn isomorphic(&self) -> bool {
        self.counts == self.counts_reduced && self.subgroups_onto && self.bijective && self.faces_preserved
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub q: u32,
    pub n: usize,
    pub s: usize,
    pub target: usize,
    pub homomorphism_samples: usize,
    pub homomorphism_failures: usize,
    pub kernel: Vec<KernelRow>,
    /// s' >= n+1.
    pub expected_trivial: bool,
    pub links: Vec<LinkIsoRow>,
    pub face_samples: usize,
    pub face_failures: usize,
    /// Sampled pairs of distinct faces in one star that were identified.
    pub star_failures: usize,
    /// (|X_{G/N}(n)|, |G/N|) when the reduced group is tabulated.
    pub top_bound: Option<(usize, usize)>,
}

impl CoveringReport {
    pub fn kernel_trivial(&self) -> bool {
        self.kernel.iter().all(|k| k.trivial)
    }

    pub fn kernel_as_expected(&self) -> bool {
        self.kernel_trivial() == self.expected_trivial
    }

    pub fn links_isomorphic(&self) -> bool {
        self.links.iter().all(|l| l.isomorphic())
    }

    /// Every check the covering statement relies on passed.
    pub fn is_covering(&self) -> bool {
        self.kernel_trivial()
            && self.links_isomorphic()
            && self.face_failures == 0
            && self.star_failures == 0
            && self.homomorphism_failures == 0
            && self.top_bound.is_none_or(|(x, g)| x <= g)
    }
}

/// Reduction mod t^{s'}: kernel of Phi on each K_i, link isomorphism between
/// the two truncations, and sampled face-relation preservation.
///
/// Group elements of G^{(s)} are sampled as random words in the generators,
/// so no table of G^{(s)} is needed.
pub fn quotient_check(params: &ElParams, target: usize, limits: Limits, samples: usize, seed: u64) -> Result<CoveringReport, GeometryError> {
    let (n, s) = (params.n(), params.s());
    if target == s {
        return Err(GeometryError::TrivialQuotient);
    }
    if target == 0 || target > s {
        return Err(GeometryError::InvalidTarget { s, target });
    }
    let red = params.with_s(target)?;
    let (space, rspace) = (params.space(), red.space());
    let phi = |m: &RingMatrix| params.reduce(m, &red);
    let full = params.index_set();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<RingMatrix> = params.el_generators().iter().map(|e| params.elementary(e)).collect();
    let random_word = |rng: &mut ChaCha8Rng| {
        let mut m = space.identity();
        for _ in 0..4 * (n + 1) * s {
            m = space.mul(&m, &gens[rng.gen_range(0..gens.len())]);
        }
        m
    };

    let mut homomorphism_failures = 0;
    for _ in 0..samples.min(1000) {
        let (a, b) = (random_word(&mut rng), random_word(&mut rng));
        if phi(&space.mul(&a, &b)) != rspace.mul(&phi(&a), &phi(&b)) {
            homomorphism_failures += 1;
        }
    }

    let mut kernel = Vec::new();
    let mut tables: BTreeMap<TypeSet, (GroupTable, GroupTable)> = BTreeMap::new();
    for tau in full.subsets().into_iter().skip(1) {
        tables.insert(tau, (subgroup_k(params, tau, limits.table_cap)?.table, subgroup_k(&red, tau, limits.table_cap)?.table));
    }
    let table = |tau: TypeSet| (&tables[&tau].0, &tables[&tau].1);
    for i in 0..=n {
        let (k, _) = table(TypeSet::single(i));
        let witness = (1..k.len() as u32).find(|&g| rspace.is_identity(&phi(&k.matrix(g)))).map(|g| format!("{:?}", k.matrix(g)));
        kernel.push(KernelRow { i, order: k.len(), trivial: witness.is_none(), witness });
    }

    let mut links = Vec::new();
    for tau in full.subsets().into_iter().filter(|t| !t.is_empty() && *t != full) {
        let mut subgroups_onto = true;
        for sigma in full.minus(tau).subsets() {
            let (k, kr) = table(tau.union(sigma));
            let img: HashSet<u128> = (0..k.len() as u32).map(|g| rspace.encode(&phi(&k.matrix(g)))).collect();
            subgroups_onto &= img.len() == kr.len() && img.iter().all(|&c| kr.contains_code(c));
        }
        let a = build_complex(&SubgroupGeometrySystem::link_only(params, tau, limits)?)?;
        let b = build_complex(&SubgroupGeometrySystem::link_only(&red, tau, limits)?)?;
        let dim = a.dim() as isize;
        let counts: Vec<usize> = (0..=dim).map(|k| a.count(k)).collect();
        let counts_reduced: Vec<usize> = (0..=dim).map(|k| b.count(k)).collect();
        let image = |f: super::Simplex| {
            let g = phi(&a.group().matrix(a.rep(f)));
            b.group().index_of_matrix(&g).map(|i| b.face_of_element(i, f.sigma))
        };
        let mut bijective = counts == counts_reduced;
        let mut faces_preserved = true;
        for k in 0..=dim {
            let mut hit = HashSet::new();
            for f in a.simplices(k) {
                match image(f) {
                    Some(img) => {
                        hit.insert(img);
                        for sub in f.sigma.subsets().into_iter().skip(1) {
                            faces_preserved &= image(a.face(f, sub)).is_some_and(|fi| b.is_face(fi, img));
                        }
                    }
                    None => bijective = false,
                }
            }
            bijective &= hit.len() == b.count(k);
        }
        links.push(LinkIsoRow { tau, counts, counts_reduced, subgroups_onto, bijective, faces_preserved });
    }

    // gK_tau <= gkK_sigma for k in K_tau; the images must satisfy the same
    // relation. Faces gK_tau, gk'K_tau below gK_sigma (k' in K_sigma) must stay
    // distinct.
    let mut face_failures = 0;
    let mut star_failures = 0;
    let types: Vec<TypeSet> = full.subsets().into_iter().skip(1).collect();
    for _ in 0..samples {
        let g = random_word(&mut rng);
        let sigma = types[rng.gen_range(0..types.len())];
        let subs = sigma.subsets();
        let tau = subs[rng.gen_range(1..subs.len())];
        let (k, kr) = table(tau);
        let h = space.mul(&g, &k.matrix(rng.gen_range(0..k.len() as u32)));
        let (pg, ph) = (phi(&g), phi(&h));
        let rel = rspace.mul(&rspace.inv(&ph)?, &pg);
        if !kr.contains(&rel) {
            face_failures += 1;
        }
        let (ks, _) = table(sigma);
        let k2 = ks.matrix(rng.gen_range(0..ks.len() as u32));
        if k.contains(&k2) != kr.contains(&phi(&k2)) {
            star_failures += 1;
        }
    }

    let top_bound = match red.projected_group_order() {
        Some(p) if p <= limits.table_cap as u128 => {
            let g = subgroup_k(&red, TypeSet::EMPTY, limits.table_cap)?.table;
            let (_, kir) = table(full);
            Some((g.len() / kir.len(), g.len()))
        }
        _ => None,
    };

    Ok(CoveringReport {
        q: params.q(),
        n,
        s,
        target,
        homomorphism_samples: samples.min(1000),
        homomorphism_failures,
        kernel,
        expected_trivial: target > n,
        links,
        face_samples: samples,
        face_failures,
        star_failures,
        top_bound,
    })
}
