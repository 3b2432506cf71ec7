use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

/// Finite simplicial complex with typed vertices, stored explicitly by dimension.
///
/// `simplices[d]` lists the d-simplices as strictly increasing vertex lists, in
/// lexicographic order. The empty simplex is implicit.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SimplicialComplex {
    pub vertex_types: Vec<u8>,
    pub vertex_labels: Vec<String>,
    pub simplices: Vec<Vec<Vec<u32>>>,
    #[serde(skip)]
    index: Vec<HashMap<Vec<u32>, u32>>,
    #[serde(skip)]
    cofaces: Vec<Vec<(u8, u32)>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_types == other.vertex_types && self.vertex_labels == other.vertex_labels && self.simplices == other.simplices
    }
}

impl SimplicialComplex {
    /// Builds the complex from a list of simplices of any dimensions; vertices
    /// are `0..vertex_types.len()` and each vertex is added as a 0-simplex.
    /// Faces are not added automatically.
    pub fn from_simplices(vertex_types: Vec<u8>, vertex_labels: Vec<String>, simplices: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let nv = vertex_types.len();
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![(0..nv as u32).map(|v| vec![v]).collect()];
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if s.len() <= 1 {
                continue;
            }
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for v in by_dim.iter_mut() {
            v.sort_unstable();
            v.dedup();
        }
        let mut out = SimplicialComplex { vertex_types, vertex_labels, simplices: by_dim, index: Vec::new(), cofaces: Vec::new() };
        out.rebuild();
        out
    }

    /// Downward closure of the given simplices.
    pub fn closure_of(vertex_types: Vec<u8>, vertex_labels: Vec<String>, tops: &[Vec<u32>]) -> Self {
        let mut all = Vec::new();
        for t in tops {
            let k = t.len();
            for mask in 1u32..(1 << k) {
                if mask.count_ones() >= 2 {
                    all.push((0..k).filter(|&i| mask >> i & 1 == 1).map(|i| t[i]).collect());
                }
            }
        }
        Self::from_simplices(vertex_types, vertex_labels, all)
    }

    /// Recomputes the lookup indices after deserialisation or mutation.
    pub fn rebuild(&mut self) {
        while self.simplices.last().is_some_and(|v| v.is_empty()) && self.simplices.len() > 1 {
            self.simplices.pop();
        }
        self.index = self
            .simplices
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect())
            .collect();
        let mut cof = vec![Vec::new(); self.vertex_types.len()];
        for (d, v) in self.simplices.iter().enumerate() {
            for (i, s) in v.iter().enumerate() {
                for &x in s {
                    cof[x as usize].push((d as u8, i as u32));
                }
            }
        }
        self.cofaces = cof;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_types.len()
    }

    /// Largest dimension present (0 for a nonempty vertex set).
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, |v| v.len())
    }

    pub fn get(&self, d: usize, i: u32) -> &[u32] {
        &self.simplices[d][i as usize]
    }

    /// Index of a sorted vertex list.
    pub fn find(&self, s: &[u32]) -> Option<u32> {
        if s.is_empty() {
            return None;
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.find(s).is_some()
    }

    /// All simplices (dimension, index) containing the vertex.
    pub fn cofaces_of_vertex(&self, v: u32) -> &[(u8, u32)] {
        &self.cofaces[v as usize]
    }

    /// All simplices strictly containing the sorted list `s` (or all simplices
    /// when `s` is empty).
    pub fn cofaces(&self, s: &[u32]) -> Vec<(usize, u32)> {
        if s.is_empty() {
            return self.simplices.iter().enumerate().flat_map(|(d, v)| (0..v.len() as u32).map(move |i| (d, i))).collect();
        }
        self.cofaces[s[0] as usize]
            .iter()
            .filter(|&&(d, _)| d as usize + 1 > s.len())
            .filter(|&&(d, i)| is_sub(s, self.get(d as usize, i)))
            .map(|&(d, i)| (d as usize, i))
            .collect()
    }

    /// Number of top-dimensional simplices containing `s`.
    pub fn top_count(&self, s: &[u32]) -> usize {
        let n = self.dim();
        if s.len() == n + 1 {
            return usize::from(self.contains(s));
        }
        self.cofaces(s).iter().filter(|&&(d, _)| d == n).count()
    }

    /// Adjacency lists of the 1-skeleton.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in self.simplices.get(1).map(|v| v.as_slice()).unwrap_or(&[]) {
            adj[e[0] as usize].push(e[1]);
            adj[e[1] as usize].push(e[0]);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    /// Link of `s`: simplices disjoint from `s` whose union with `s` is a
    /// simplex. Vertices are renumbered; `vertex_labels` of the link keep the
    /// original vertex numbers.
    pub fn link(&self, s: &[u32]) -> (SimplicialComplex, Vec<u32>) {
        let cof = self.cofaces(s);
        let mut verts: Vec<u32> = cof.iter().filter(|&&(d, _)| d == s.len()).flat_map(|&(d, i)| self.get(d, i).iter().copied()).filter(|v| !s.contains(v)).collect();
        if s.is_empty() {
            verts = (0..self.vertex_count() as u32).collect();
        }
        verts.sort_unstable();
        verts.dedup();
        let pos: HashMap<u32, u32> = verts.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let sims = cof.iter().filter(|&&(d, _)| d > s.len()).map(|&(d, i)| {
            self.get(d, i).iter().filter(|v| !s.contains(v)).map(|v| pos[v]).collect::<Vec<u32>>()
        });
        let types = verts.iter().map(|&v| self.vertex_types[v as usize]).collect();
        let labels = verts.iter().map(|&v| self.vertex_labels.get(v as usize).cloned().unwrap_or_else(|| v.to_string())).collect();
        (SimplicialComplex::from_simplices(types, labels, sims), verts)
    }

    /// Connected components of the 1-skeleton, as a component label per vertex.
    pub fn components(&self) -> (usize, Vec<u32>) {
        components(&self.adjacency())
    }

    /// Removes the given simplex (not its faces).
    pub fn remove_simplex(&mut self, s: &[u32]) -> bool {
        let Some(i) = self.find(s) else { return false };
        self.simplices[s.len() - 1].remove(i as usize);
        self.rebuild();
        true
    }

    /// Adds a vertex and returns its number.
    pub fn add_vertex(&mut self, ty: u8, label: String) -> u32 {
        let v = self.vertex_count() as u32;
        self.vertex_types.push(ty);
        self.vertex_labels.push(label);
        self.simplices[0].push(vec![v]);
        self.rebuild();
        v
    }

    /// Adds a simplex together with all of its faces.
    pub fn add_with_faces(&mut self, s: &[u32]) {
        let mut s = s.to_vec();
        s.sort_unstable();
        let k = s.len();
        for mask in 1u32..(1 << k) {
            let f: Vec<u32> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            let d = f.len() - 1;
            if self.simplices.len() <= d {
                self.simplices.resize(d + 1, Vec::new());
            }
            if !self.simplices[d].contains(&f) {
                self.simplices[d].push(f);
            }
        }
        for v in self.simplices.iter_mut() {
            v.sort_unstable();
        }
        self.rebuild();
    }
}

pub(crate) fn is_sub(small: &[u32], big: &[u32]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

pub fn components(adj: &[Vec<u32>]) -> (usize, Vec<u32>) {
    let mut comp = vec![u32::MAX; adj.len()];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..adj.len() {
        if comp[start] != u32::MAX {
            continue;
        }
        comp[start] = count;
        queue.push_back(start as u32);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v as usize] {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    (count as usize, comp)
}
