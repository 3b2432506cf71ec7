use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::simplicial::components;
use super::{CosetComplex, SimplicialComplex, Simplex};
use crate::matgroup::TypeSet;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl Check {
    fn ok(checked: usize) -> Self {
        Check { holds: true, checked, witness: None }
    }

    fn fail(checked: usize, w: String) -> Self {
        Check { holds: false, checked, witness: Some(w) }
    }
}

/// Combinatorial properties of a finite typed simplicial complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialAudit {
    pub dim: usize,
    pub counts: Vec<usize>,
    pub pure: Check,
    pub partite: Check,
    pub clique: Check,
    pub gallery_connected: Check,
    pub no_free_faces: Check,
    pub locally_finite: Check,
    pub max_vertex_star: usize,
}

impl SimplicialAudit {
    pub fn holds(&self) -> bool {
        self.pure.holds && self.partite.holds && self.clique.holds && self.gallery_connected.holds && self.no_free_faces.holds && self.locally_finite.holds
    }
}

/// Audits a complex expected to have dimension `n` and n+1 vertex types.
pub fn audit_simplicial(x: &SimplicialComplex, n: usize) -> SimplicialAudit {
    let counts: Vec<usize> = (0..=x.dim()).map(|d| x.count(d)).collect();
    let adj = x.adjacency();

    // purity: every simplex lies in an n-simplex, and nothing exceeds dimension n
    let pure = if x.dim() != n {
        Check::fail(0, format!("dimension {} instead of {n}", x.dim()))
    } else {
        let mut checked = 0;
        let mut res = None;
        'outer: for d in 0..n {
            for s in &x.simplices[d] {
                checked += 1;
                if x.top_count(s) == 0 {
                    res = Some(Check::fail(checked, format!("{s:?}")));
                    break 'outer;
                }
            }
        }
        res.unwrap_or(Check::ok(checked))
    };

    // (n+1)-partite: types distinct within every simplex, n+1 types in tops
    let partite = {
        let mut res = None;
        let mut checked = 0;
        'outer: for (d, v) in x.simplices.iter().enumerate() {
            for s in v {
                checked += 1;
                let mut t: Vec<u8> = s.iter().map(|&u| x.vertex_types[u as usize]).collect();
                t.sort_unstable();
                t.dedup();
                if t.len() != d + 1 || t.iter().any(|&ty| ty as usize > 31) {
                    res = Some(Check::fail(checked, format!("{s:?}")));
                    break 'outer;
                }
            }
        }
        let types: std::collections::BTreeSet<u8> = x.vertex_types.iter().copied().collect();
        match res {
            Some(r) => r,
            None if types.len() > n + 1 => Check::fail(checked, format!("{} vertex types", types.len())),
            None => Check::ok(checked),
        }
    };

    // clique complex: every clique of the 1-skeleton spans a simplex
    let clique = {
        let mut checked = 0usize;
        let mut witness = None;
        let mut stack: Vec<u32> = Vec::new();
        fn extend(x: &SimplicialComplex, adj: &[Vec<u32>], stack: &mut Vec<u32>, cand: &[u32], limit: usize, checked: &mut usize, witness: &mut Option<Vec<u32>>) {
            if witness.is_some() {
                return;
            }
            if stack.len() >= 2 {
                *checked += 1;
                if !x.contains(stack) {
                    *witness = Some(stack.clone());
                    return;
                }
            }
            if stack.len() == limit {
                return;
            }
            for (k, &v) in cand.iter().enumerate() {
                let next: Vec<u32> = cand[k + 1..].iter().copied().filter(|w| adj[v as usize].binary_search(w).is_ok()).collect();
                stack.push(v);
                extend(x, adj, stack, &next, limit, checked, witness);
                stack.pop();
            }
        }
        for v in 0..x.vertex_count() as u32 {
            let cand: Vec<u32> = adj[v as usize].iter().copied().filter(|&w| w > v).collect();
            stack.push(v);
            extend(x, &adj, &mut stack, &cand, n + 2, &mut checked, &mut witness);
            stack.pop();
            if witness.is_some() {
                break;
            }
        }
        match witness {
            Some(w) => Check::fail(checked, format!("clique {w:?} is not a simplex")),
            None => Check::ok(checked),
        }
    };

    // strongly gallery connected: 1-skeleton and links of faces up to dim n-2 connected
    let gallery_connected = {
        let mut checked = 1;
        let (nc, _) = components(&adj);
        if nc != 1 {
            Check::fail(checked, format!("1-skeleton has {nc} components"))
        } else {
            let mut res = None;
            'outer: for d in 0..n.saturating_sub(1) {
                for s in &x.simplices[d] {
                    checked += 1;
                    let (lk, _) = x.link(s);
                    let (c, _) = lk.components();
                    if c != 1 {
                        res = Some(Check::fail(checked, format!("link of {s:?} has {c} components")));
                        break 'outer;
                    }
                }
            }
            res.unwrap_or(Check::ok(checked))
        }
    };

    let no_free_faces = {
        let mut res = None;
        let mut checked = 0;
        'outer: for d in 0..n.min(x.simplices.len()) {
            for s in &x.simplices[d] {
                checked += 1;
                if x.top_count(s) < 2 {
                    res = Some(Check::fail(checked, format!("{s:?} lies in {} top simplices", x.top_count(s))));
                    break 'outer;
                }
            }
        }
        res.unwrap_or(Check::ok(checked))
    };

    let max_vertex_star = (0..x.vertex_count() as u32).map(|v| x.cofaces_of_vertex(v).len()).max().unwrap_or(0);
    let locally_finite = Check::ok(x.vertex_count());

    SimplicialAudit { dim: x.dim(), counts, pure, partite, clique, gallery_connected, no_free_faces, locally_finite, max_vertex_star }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCount {
    pub ty: usize,
    pub min: usize,
    pub max: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub from_complex: i64,
    pub from_orders: i64,
}

/// Structural audit of a coset complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub group_order: usize,
    /// |X(k)| for k = -1..=n
    pub face_counts: Vec<usize>,
    pub simplicial: SimplicialAudit,
    /// the vertex-set map gK_tau -> {gK_i} is well defined and injective
    pub f_bijective: Check,
    pub f_equivariant: Check,
    /// every vertex of type i lies in exactly |K_i| / |K_I| top simplices
    pub tops_per_vertex: Vec<TypeCount>,
    /// every (n-1)-face of type tau lies in |K_tau| / |K_I| top simplices
    pub codim1_homogeneous: Check,
    pub euler: EulerCheck,
    pub simply_transitive: Check,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.simplicial.holds()
            && self.f_bijective.holds
            && self.f_equivariant.holds
            && self.tops_per_vertex.iter().all(|t| t.min == t.expected && t.max == t.expected)
            && self.codim1_homogeneous.holds
            && self.euler.from_complex == self.euler.from_orders
            && self.simply_transitive.holds
    }
}

pub fn structural_audit(x: &CosetComplex, seed: u64) -> StructureReport {
    let sc = x.to_simplicial();
    let n = x.dim();
    structural_audit_with(x, &sc, n, seed)
}

pub(crate) fn structural_audit_with(x: &CosetComplex, sc: &SimplicialComplex, n: usize, seed: u64) -> StructureReport {
    let g = x.group();
    let types = x.types();
    let simplicial = audit_simplicial(sc, n);
    let face_counts: Vec<usize> = (-1..=n as isize).map(|k| x.count(k)).collect();

    // f: cosets of K_tau <-> vertex sets; constant on cosets and injective
    let f_bijective = {
        let mut res = None;
        let mut checked = 0;
        'outer: for tau in types.subsets().into_iter().filter(|t| !t.is_empty()) {
            let ct = x.cosets(tau);
            let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
            for e in 0..g.len() as u32 {
                checked += 1;
                let vs = x.vertex_set_of_element(e, tau);
                let c = ct.coset_of[e as usize];
                match seen.get(&vs) {
                    Some(&c2) if c2 != c => {
                        res = Some(Check::fail(checked, format!("cosets {c} and {c2} of type {tau} share vertices")));
                        break 'outer;
                    }
                    _ => {
                        seen.insert(vs, c);
                    }
                }
            }
            if seen.len() != ct.len() {
                res = Some(Check::fail(checked, format!("type {tau}: {} vertex sets for {} cosets", seen.len(), ct.len())));
                break;
            }
        }
        res.unwrap_or(Check::ok(checked))
    };

    let f_equivariant = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut res = None;
        let tops = x.simplices(n as isize);
        let samples = 100;
        for k in 0..samples {
            let h = rng.gen_range(0..g.len() as u32);
            let s = tops[rng.gen_range(0..tops.len())];
            let t = x.translate(h, s);
            let moved: Vec<u32> = {
                let mut v: Vec<u32> = x
                    .vertex_set(s)
                    .iter()
                    .map(|&u| {
                        let vs = x.vertex_of(u);
                        let tv = x.translate(h, vs);
                        x.vertex_id(vs.sigma.iter().next().unwrap(), tv.coset)
                    })
                    .collect();
                v.sort_unstable();
                v
            };
            if moved != x.vertex_set(t) {
                res = Some(Check::fail(k + 1, format!("translation by element {h} of {s:?}")));
                break;
            }
        }
        res.unwrap_or(Check::ok(samples))
    };

    let top_t = x.system().subgroup(types).map_or(1, |t| t.len());
    let tops_per_vertex = types
        .iter()
        .map(|i| {
            let c = x.cosets(TypeSet::single(i));
            let expected = x.system().subgroup(TypeSet::single(i)).map_or(0, |k| k.len() / top_t);
            let counts: Vec<usize> = (0..c.len() as u32).map(|v| sc.top_count(&[x.vertex_id(i, v)])).collect();
            TypeCount { ty: i, min: *counts.iter().min().unwrap_or(&0), max: *counts.iter().max().unwrap_or(&0), expected }
        })
        .collect();

    let codim1_homogeneous = {
        let mut res = None;
        let mut checked = 0;
        for s in x.simplices(n as isize - 1) {
            checked += 1;
            let expected = x.system().subgroup(s.sigma).map_or(0, |k| k.len() / top_t);
            let got = sc.top_count(&x.vertex_set(s));
            if got != expected {
                res = Some(Check::fail(checked, format!("{s:?} lies in {got} top simplices, expected {expected}")));
                break;
            }
        }
        res.unwrap_or(Check::ok(checked))
    };

    let euler = {
        let from_complex: i64 = (0..=sc.dim()).map(|d| if d % 2 == 0 { sc.count(d) as i64 } else { -(sc.count(d) as i64) }).sum();
        let mut from_orders = 0i64;
        for tau in types.subsets().into_iter().filter(|t| !t.is_empty()) {
            let k = x.system().subgroup(tau).unwrap().len() as i64;
            let sign = if tau.len() % 2 == 1 { 1 } else { -1 };
            from_orders += sign * (g.len() as i64 / k);
        }
        EulerCheck { from_complex, from_orders }
    };

    // G acts simply transitively on X(n) when K_I is trivial
    let simply_transitive = {
        let tops = x.count(n as isize);
        if top_t != 1 {
            Check::fail(0, format!("K_I has order {top_t}"))
        } else if tops != g.len() {
            Check::fail(1, format!("{tops} top simplices for a group of order {}", g.len()))
        } else {
            let base = x.face_of_element(0, types);
            let mut orbit = vec![false; tops];
            let mut res = None;
            for h in 0..g.len() as u32 {
                let t = x.translate(h, base);
                if orbit[t.coset as usize] {
                    res = Some(Check::fail(h as usize + 1, format!("element {h} fixes or repeats a top simplex")));
                    break;
                }
                orbit[t.coset as usize] = true;
            }
            res.unwrap_or(Check::ok(g.len()))
        }
    };

    StructureReport {
        n,
        group_order: g.len(),
        face_counts,
        simplicial,
        f_bijective,
        f_equivariant,
        tops_per_vertex,
        codim1_homogeneous,
        euler,
        simply_transitive,
    }
}

/// Vertex counts per type.
pub fn vertex_counts(x: &CosetComplex) -> BTreeMap<usize, usize> {
    x.types().iter().map(|i| (i, x.cosets(TypeSet::single(i)).len())).collect()
}

/// Faces of `x` viewed as (type, vertex list), for callers that need both.
pub fn face_list(x: &CosetComplex, k: isize) -> Vec<(Simplex, Vec<u32>)> {
    x.simplices(k).into_iter().map(|s| (s, x.vertex_set(s))).collect()
}
