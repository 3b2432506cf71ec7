use std::collections::BTreeMap;
use std::sync::Arc;

use super::GeometryError;
use crate::algebra::Elementary;
use crate::matgroup::{closure_order, enumerate_group, subgroup_k, ElParams, GroupError, GroupTable, SubgroupTable, TypeSet};

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group whose order may be counted.
    pub cap: u64,
    /// Largest group materialised as an indexed table.
    pub table_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cap: 50_000_000, table_cap: 2_000_000 }
    }
}

/// How much is known about the ambient group of a system.
#[derive(Clone, Debug)]
pub enum Ambient {
    Table(Arc<GroupTable>),
    Counted { order: u64, generators: Vec<Elementary> },
    TooLarge { projected: Option<u128>, generators: Vec<Elementary> },
    /// Not enumerated by choice.
    Deferred { projected: Option<u128>, generators: Vec<Elementary> },
}

/// Whether the ambient group is counted when it is too large to tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmbientPolicy {
    Count,
    TableOnly,
}

impl Ambient {
    pub fn order(&self) -> Option<u64> {
        match self {
            Ambient::Table(t) => Some(t.len() as u64),
            Ambient::Counted { order, .. } => Some(*order),
            Ambient::TooLarge { .. } | Ambient::Deferred { .. } => None,
        }
    }

    pub fn generators(&self) -> &[Elementary] {
        match self {
            Ambient::Table(t) => t.generators(),
            Ambient::Counted { generators, .. }
            | Ambient::TooLarge { generators, .. }
            | Ambient::Deferred { generators, .. } => generators,
        }
    }

    pub fn table(&self) -> Option<&Arc<GroupTable>> {
        match self {
            Ambient::Table(t) => Some(t),
            _ => None,
        }
    }
}

/// A group with a family of subgroups indexed by nonempty subsets of a type set.
///
/// The top-level system has `base` empty and `types` = I. The system attached
/// to the link of a face of type tau has `base` = tau, `types` = I \ tau and
/// ambient group K_tau; its subgroups keep their absolute labels tau u sigma.
#[derive(Clone, Debug)]
pub struct SubgroupGeometrySystem {
    params: ElParams,
    base: TypeSet,
    types: TypeSet,
    ambient: Ambient,
    subgroups: BTreeMap<TypeSet, Arc<GroupTable>>,
}

impl SubgroupGeometrySystem {
    /// The system (EL_{n+1}(R_s), (K_i)_{i in I}).
    pub fn new(params: &ElParams, limits: Limits, policy: AmbientPolicy) -> Result<Self, GeometryError> {
        let full = params.index_set();
        let mut subgroups = BTreeMap::new();
        for tau in full.subsets().into_iter().skip(1) {
            let k = subgroup_k(params, tau, limits.table_cap)?;
            subgroups.insert(tau, Arc::new(k.table));
        }
        let ambient = top_ambient(params, limits, policy)?;
        Ok(SubgroupGeometrySystem { params: params.clone(), base: TypeSet::EMPTY, types: full, ambient, subgroups })
    }

    /// Only the subgroups K_sigma for sigma containing `base`, with ambient K_base.
    /// This is the link system of a face of type `base`, built without the
    /// subgroups below it.
    pub fn link_only(params: &ElParams, base: TypeSet, limits: Limits) -> Result<Self, GeometryError> {
        let full = params.index_set();
        if base.is_empty() || base == full || !base.is_subset(full) {
            return Err(GeometryError::InvalidLinkType(base));
        }
        let mut subgroups = BTreeMap::new();
        for sigma in full.minus(base).subsets().into_iter().skip(1) {
            let k = subgroup_k(params, base.union(sigma), limits.table_cap)?;
            subgroups.insert(base.union(sigma), Arc::new(k.table));
        }
        let amb = subgroup_k(params, base, limits.table_cap)?;
        Ok(SubgroupGeometrySystem {
            params: params.clone(),
            base,
            types: full.minus(base),
            ambient: Ambient::Table(Arc::new(amb.table)),
            subgroups,
        })
    }

    /// Builds a system from explicit subgroup tables for the nonempty subsets of
    /// `types` (absolute labels base u sigma).
    pub fn from_parts(
        params: &ElParams,
        base: TypeSet,
        types: TypeSet,
        ambient: Ambient,
        subgroups: BTreeMap<TypeSet, Arc<GroupTable>>,
    ) -> Result<Self, GeometryError> {
        for sigma in types.subsets().into_iter().skip(1) {
            if !subgroups.contains_key(&base.union(sigma)) {
                return Err(GeometryError::MissingSubgroup(base.union(sigma)));
            }
        }
        Ok(SubgroupGeometrySystem { params: params.clone(), base, types, ambient, subgroups })
    }

    pub fn params(&self) -> &ElParams {
        &self.params
    }

    pub fn base(&self) -> TypeSet {
        self.base
    }

    /// The index set of the system.
    pub fn types(&self) -> TypeSet {
        self.types
    }

    /// Dimension of the associated coset complex.
    pub fn rank(&self) -> usize {
        self.types.len() - 1
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    /// K_{base u sigma}; `None` for sigma empty (use the ambient group).
    pub fn subgroup(&self, sigma: TypeSet) -> Option<&Arc<GroupTable>> {
        self.subgroups.get(&self.base.union(sigma))
    }

    pub fn subgroup_abs(&self, tau: TypeSet) -> Option<&Arc<GroupTable>> {
        self.subgroups.get(&tau)
    }

    /// The link system of `sigma` (relative to this system's types).
    pub fn link_system(&self, sigma: TypeSet) -> Result<Self, GeometryError> {
        if sigma.is_empty() || sigma == self.types || !sigma.is_subset(self.types) {
            return Err(GeometryError::InvalidLinkType(sigma));
        }
        let amb = self.subgroup(sigma).expect("all subgroups present").clone();
        let base = self.base.union(sigma);
        let types = self.types.minus(sigma);
        let subgroups = self
            .subgroups
            .iter()
            .filter(|(t, _)| base.is_subset(**t) && **t != base)
            .map(|(t, g)| (*t, g.clone()))
            .collect();
        Ok(SubgroupGeometrySystem { params: self.params.clone(), base, types, ambient: Ambient::Table(amb), subgroups })
    }

    /// Copy with K_{base u {i}} replaced (the other subgroups are unchanged).
    pub fn with_vertex_subgroup(&self, i: usize, table: SubgroupTable) -> Self {
        let mut out = self.clone();
        out.subgroups.insert(self.base.insert(i), Arc::new(table.table));
        out
    }

    /// Largest subgroup order, used to size work.
    pub fn max_subgroup_order(&self) -> usize {
        self.subgroups.values().map(|g| g.len()).max().unwrap_or(0)
    }
}

fn top_ambient(params: &ElParams, limits: Limits, policy: AmbientPolicy) -> Result<Ambient, GroupError> {
    let generators = params.el_generators();
    let projected = params.projected_group_order();
    match projected {
        Some(p) if p <= limits.table_cap as u128 => {
            Ok(Ambient::Table(Arc::new(enumerate_group(params.space(), &generators, limits.table_cap)?)))
        }
        Some(p) if p <= limits.cap as u128 && policy == AmbientPolicy::Count => {
            let order = closure_order(params.space(), &generators, limits.cap)?;
            Ok(Ambient::Counted { order, generators })
        }
        Some(p) if p <= limits.cap as u128 => Ok(Ambient::Deferred { projected, generators }),
        _ => Ok(Ambient::TooLarge { projected, generators }),
    }
}
