use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_complex, CosetComplex, GeometryError, SimplicialComplex, Simplex};
use crate::matgroup::TypeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkAuditRow {
    pub tau: TypeSet,
    pub coset: u32,
    pub vertices: usize,
    /// Face counts of the extracted link, dimensions 0..
    pub counts: Vec<usize>,
    /// Sorted (type, degree) pairs agree between the two links.
    pub signature_match: bool,
    /// hK_{tau u {i}} -> ghK_i is a bijection onto the link vertices and maps
    /// simplices onto simplices.
    pub bijection: bool,
}

/// Sorted (type, degree) list and face counts.
fn signature(x: &SimplicialComplex) -> (Vec<(u8, usize)>, Vec<usize>) {
    let adj = x.adjacency();
    let mut sig: Vec<(u8, usize)> = adj.iter().enumerate().map(|(v, a)| (x.vertex_types[v], a.len())).collect();
    sig.sort_unstable();
    (sig, (0..=x.dim()).map(|d| x.count(d)).collect())
}

/// Compares the link of gK_tau extracted from the complex with the coset
/// complex of the link system of tau, for `per_type` sampled faces of every
/// type tau.
pub fn link_isomorphism_audit(x: &CosetComplex, sc: &SimplicialComplex, per_type: usize, seed: u64) -> Result<Vec<LinkAuditRow>, GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types = x.types();
    let group = x.group();
    let space = group.space();
    let mut rows = Vec::new();
    for tau in types.subsets().into_iter().filter(|t| !t.is_empty() && *t != types) {
        let m = build_complex(&x.system().link_system(tau)?)?;
        let msc = m.to_simplicial();
        let msig = signature(&msc);
        let count = x.cosets(tau).len() as u32;
        let mut picks: Vec<u32> = (0..per_type).map(|_| rng.gen_range(0..count)).collect();
        picks.insert(0, 0);
        picks.sort_unstable();
        picks.dedup();
        for coset in picks {
            let f = Simplex { sigma: tau, coset };
            let fv = x.vertex_set(f);
            let (link, verts) = sc.link(&fv);
            let pos: HashMap<u32, u32> = verts.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
            let g = group.matrix(x.rep(f));
            // vertex hK_{tau u {i}} of the link system -> ghK_i
            let image: Vec<Option<u32>> = (0..msc.vertex_count() as u32)
                .map(|v| {
                    let s = m.vertex_of(v);
                    let h = m.group().matrix(m.cosets(s.sigma).reps[s.coset as usize]);
                    let gh = group.index_of_matrix(&space.mul(&g, &h))?;
                    let i = s.sigma.iter().next().unwrap();
                    pos.get(&x.vertex_id(i, x.cosets(TypeSet::single(i)).coset_of[gh as usize])).copied()
                })
                .collect();
            let distinct: HashSet<u32> = image.iter().flatten().copied().collect();
            let mut bijection = image.iter().all(|v| v.is_some()) && distinct.len() == link.vertex_count() && msc.vertex_count() == link.vertex_count();
            if bijection {
                for d in 1..=msc.dim() {
                    bijection &= msc.count(d) == link.count(d);
                    for s in &msc.simplices[d] {
                        let mut t: Vec<u32> = s.iter().map(|&v| image[v as usize].unwrap()).collect();
                        t.sort_unstable();
                        bijection &= link.contains(&t);
                    }
                }
            }
            let lsig = signature(&link);
            rows.push(LinkAuditRow { tau, coset, vertices: link.vertex_count(), counts: lsig.1.clone(), signature_match: lsig == msig, bijection });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictRow {
    pub name: String,
    /// Verdict computed from flags and residues of the incidence graph.
    pub flag_view: bool,
    /// Verdict computed from the simplex store and links.
    pub simplex_view: bool,
    /// No flag of the relevant corank exists.
    pub vacuous: bool,
}

impl DictRow {
    pub fn agrees(&self) -> bool {
        self.flag_view == self.simplex_view
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictReport {
    pub rank: usize,
    pub flags: usize,
    pub chambers: usize,
    pub rows: Vec<DictRow>,
}

impl DictReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agrees())
    }

    pub fn row(&self, name: &str) -> Option<&DictRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

/// Flags of the incidence geometry: sets of pairwise incident vertices of
/// distinct types, i.e. cliques of the 1-skeleton, up to size `max`.
fn flags(adj: &[Vec<u32>], types: &[u8], max: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u32>> = (0..adj.len() as u32).map(|v| vec![v]).collect();
    while !frontier.is_empty() {
        out.extend(frontier.iter().cloned());
        if frontier[0].len() >= max {
            break;
        }
        let mut next = Vec::new();
        for f in &frontier {
            let last = *f.last().unwrap();
            for &w in &adj[f[0] as usize] {
                if w > last && f.iter().all(|&u| adj[u as usize].binary_search(&w).is_ok() && types[u as usize] != types[w as usize]) {
                    let mut g = f.clone();
                    g.push(w);
                    next.push(g);
                }
            }
        }
        frontier = next;
    }
    out
}

fn connected(nodes: &[u32], adj: &[Vec<u32>]) -> bool {
    if nodes.is_empty() {
        return false;
    }
    let set: HashSet<u32> = nodes.iter().copied().collect();
    let mut seen = HashSet::from([nodes[0]]);
    let mut stack = vec![nodes[0]];
    while let Some(v) = stack.pop() {
        for &w in &adj[v as usize] {
            if set.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == set.len()
}

/// Top simplices containing `s` connected through faces of codimension one
/// that also contain `s`.
fn gallery_connected(x: &SimplicialComplex, n: usize, s: &[u32]) -> bool {
    let tops: Vec<u32> = if s.is_empty() {
        (0..x.count(n) as u32).collect()
    } else {
        x.cofaces(s).into_iter().filter(|&(d, _)| d == n).map(|(_, i)| i).collect()
    };
    if tops.is_empty() {
        return false;
    }
    let mut by_panel: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for (k, &t) in tops.iter().enumerate() {
        let top = x.get(n, t);
        for skip in 0..top.len() {
            let panel: Vec<u32> = top.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
            if s.iter().all(|v| panel.contains(v)) {
                by_panel.entry(panel).or_default().push(k);
            }
        }
    }
    let mut adj = vec![Vec::new(); tops.len()];
    for ks in by_panel.values() {
        for w in ks.windows(2) {
            adj[w[0]].push(w[1] as u32);
            adj[w[1]].push(w[0] as u32);
        }
    }
    let all: Vec<u32> = (0..tops.len() as u32).collect();
    connected(&all, &adj)
}

/// The incidence dictionary: geometry over I, firmness, residual connectivity
/// and I-geometry, each decided once from flags and residues and once from
/// simplices and links. `n + 1` is the number of types.
pub fn incidence_audit(x: &SimplicialComplex, n: usize) -> DictReport {
    let adj = x.adjacency();
    let types = &x.vertex_types;
    let all = flags(&adj, types, n + 2);
    let mut by_size: BTreeMap<usize, Vec<&Vec<u32>>> = BTreeMap::new();
    for f in &all {
        by_size.entry(f.len()).or_default().push(f);
    }
    let extends = |f: &[u32]| -> Vec<u32> {
        let cand: Vec<u32> = match f.first() {
            Some(&v) => adj[v as usize].clone(),
            None => (0..adj.len() as u32).collect(),
        };
        cand.into_iter().filter(|&w| !f.contains(&w) && f.iter().all(|&u| adj[u as usize].binary_search(&w).is_ok() && types[u as usize] != types[w as usize])).collect()
    };
    let is_chamber = |f: &Vec<u32>| f.len() == n + 1;

    // flag view
    let maximal: Vec<&Vec<u32>> = all.iter().filter(|f| !f.is_empty() && extends(f).is_empty()).collect();
    let geometry_flag = !maximal.is_empty() && maximal.iter().all(|f| is_chamber(f)) && all.iter().all(|f| f.len() <= n + 1);
    let panels = by_size.get(&n).cloned().unwrap_or_default();
    let firm_vacuous = n == 0 || panels.is_empty();
    let firm_flag = panels.iter().all(|p| extends(p).len() >= 2);
    let corank2: Vec<&Vec<u32>> = all.iter().filter(|f| f.len() + 2 <= n + 1).collect();
    let rc_vacuous = corank2.is_empty();
    let rc_flag = corank2.iter().all(|f| {
        let used: HashSet<u8> = f.iter().map(|&v| types[v as usize]).collect();
        let residue: Vec<u32> = if f.is_empty() { (0..adj.len() as u32).collect() } else { extends(f) };
        let residue: Vec<u32> = residue.into_iter().filter(|v| !used.contains(&types[*v as usize])).collect();
        connected(&residue, &adj)
    });

    // simplex view
    let pure_simplex = x.dim() == n
        && (0..n).all(|d| x.simplices[d].iter().all(|s| x.top_count(s) >= 1));
    let no_free = (0..n).all(|d| x.simplices[d].iter().all(|s| x.top_count(s) >= 2));
    let firm_simplex = pure_simplex && no_free;
    let sgc = gallery_connected(x, n, &[]) && (0..n.saturating_sub(1)).all(|d| x.simplices[d].iter().all(|s| gallery_connected(x, n, s)));

    let rows = vec![
        DictRow { name: "geometry over I / pure".into(), flag_view: geometry_flag, simplex_view: pure_simplex, vacuous: false },
        DictRow { name: "firm / pure without free faces".into(), flag_view: geometry_flag && firm_flag, simplex_view: firm_simplex, vacuous: firm_vacuous },
        DictRow { name: "residually connected / strongly gallery connected".into(), flag_view: rc_flag, simplex_view: sgc, vacuous: rc_vacuous },
        DictRow {
            name: "I-geometry / all three".into(),
            flag_view: geometry_flag && firm_flag && rc_flag,
            simplex_view: pure_simplex && firm_simplex && sgc,
            vacuous: firm_vacuous && rc_vacuous,
        },
    ];
    DictReport { rank: n + 1, flags: all.len(), chambers: all.iter().filter(|f| is_chamber(f)).count(), rows }
}
