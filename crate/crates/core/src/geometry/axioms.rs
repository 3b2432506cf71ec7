use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{Ambient, GeometryError, Limits, SubgroupGeometrySystem};
use crate::algebra::{Code, Elementary};
use crate::matgroup::{closure_order, enumerate_group, product_set, GroupTable, TypeSet};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub lhs: Vec<TypeSet>,
    pub rhs: TypeSet,
    pub detail: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub checked: usize,
    pub trivial: usize,
    pub skipped: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub base: TypeSet,
    pub types: TypeSet,
    pub ambient_order: Option<u64>,
    /// K_{tau cap tau'} = <K_tau, K_tau'>
    pub a1: AxiomCheck,
    /// K_tau K_i = intersection over j in tau of K_j K_i
    pub a2: AxiomCheck,
    /// K_I != K_{I \ {i}}
    pub a3: AxiomCheck,
    /// K_tau = intersection of the K_i, i in tau
    pub intersections: AxiomCheck,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.a1.holds() && self.a2.holds() && self.a3.holds() && self.intersections.holds()
    }

    pub fn skipped(&self) -> usize {
        self.a1.skipped + self.a2.skipped + self.a3.skipped + self.intersections.skipped
    }
}

fn hex(c: Code) -> String {
    format!("{c:#x}")
}

enum Closure {
    Order(u64),
    Table(GroupTable),
    Failed(String),
}

/// Checks A1-A3 and the intersection property on every relevant pair or triple
/// of type sets of the system.
pub fn verify_axioms(sys: &SubgroupGeometrySystem, limits: Limits) -> Result<AxiomReport, GeometryError> {
    let types = sys.types();
    let subsets = types.subsets();
    let space = sys.params().space();
    let gens = |sigma: TypeSet| -> Vec<Elementary> {
        if sigma.is_empty() {
            sys.ambient().generators().to_vec()
        } else {
            sys.subgroup(sigma).unwrap().generators().to_vec()
        }
    };

    let mut a1 = AxiomCheck::default();
    let mut memo: HashMap<Vec<Code>, Closure> = HashMap::new();
    for (ia, &a) in subsets.iter().enumerate() {
        for &b in &subsets[ia..] {
            let c = a.intersect(b);
            let fail = |detail: String, witness: Option<Code>| AxiomFailure {
                lhs: vec![sys.base().union(a), sys.base().union(b)],
                rhs: sys.base().union(c),
                detail,
                witness: witness.map(hex),
            };
            if c == a || c == b {
                // nested pair: <K_a, K_b> = K_c iff the smaller group lies in K_c
                let (big, small) = if c == a { (a, b) } else { (b, a) };
                if big == small {
                    a1.trivial += 1;
                    continue;
                }
                let small_t = sys.subgroup(small).unwrap();
                let big_t = if big.is_empty() {
                    match sys.ambient() {
                        Ambient::Table(t) => t.clone(),
                        _ => {
                            // generated by elementary matrices, hence inside EL
                            a1.trivial += 1;
                            continue;
                        }
                    }
                } else {
                    sys.subgroup(big).unwrap().clone()
                };
                a1.checked += 1;
                if let Some(&w) = small_t.codes().iter().find(|&&x| !big_t.contains_code(x)) {
                    a1.failures.push(fail(format!("K_{} is not contained in K_{}", sys.base().union(small), sys.base().union(big)), Some(w)));
                }
                continue;
            }
            let mut g: Vec<Elementary> = gens(a);
            g.extend(gens(b));
            let target: Option<&GroupTable> = if c.is_empty() { sys.ambient().table().map(|t| &**t) } else { sys.subgroup(c).map(|t| &**t) };
            match target {
                Some(t) => {
                    a1.checked += 1;
                    if let Some(bad) = g.iter().find(|e| !t.contains(&sys.params().elementary(e))) {
                        let code = space.encode(&sys.params().elementary(bad));
                        a1.failures.push(fail("generator outside the intersection subgroup".into(), Some(code)));
                        continue;
                    }
                    let key = gen_key(sys, &g);
                    let entry = memo.entry(key).or_insert_with(|| match enumerate_group(space, &g, limits.table_cap) {
                        Ok(tab) => Closure::Table(tab),
                        Err(e) => Closure::Failed(e.to_string()),
                    });
                    match entry {
                        Closure::Table(tab) => {
                            if tab.len() != t.len() {
                                let w = t.codes().iter().copied().find(|&x| !tab.contains_code(x));
                                a1.failures.push(fail(format!("generated group has order {} but target has {}", tab.len(), t.len()), w));
                            }
                        }
                        Closure::Order(o) => {
                            if *o != t.len() as u64 {
                                a1.failures.push(fail(format!("generated group has order {o} but target has {}", t.len()), None));
                            }
                        }
                        Closure::Failed(msg) => a1.failures.push(fail(msg.clone(), None)),
                    }
                }
                None => match sys.ambient() {
                    Ambient::Counted { order, .. } => {
                        a1.checked += 1;
                        let key = gen_key(sys, &g);
                        let entry = memo.entry(key).or_insert_with(|| match closure_order(space, &g, limits.cap) {
                            Ok(o) => Closure::Order(o),
                            Err(e) => Closure::Failed(e.to_string()),
                        });
                        match entry {
                            Closure::Order(o) if *o == *order => {}
                            Closure::Order(o) => a1.failures.push(fail(format!("generated group has order {o}, ambient has {order}"), None)),
                            Closure::Table(tab) if tab.len() as u64 == *order => {}
                            Closure::Table(tab) => a1.failures.push(fail(format!("generated group has order {}, ambient has {order}", tab.len()), None)),
                            Closure::Failed(msg) => a1.failures.push(fail(msg.clone(), None)),
                        }
                    }
                    _ => a1.skipped += 1,
                },
            }
        }
    }

    let mut a2 = AxiomCheck::default();
    for &sigma in &subsets {
        if sigma == types {
            continue;
        }
        for i in types.minus(sigma).iter() {
            if sigma.len() <= 1 {
                a2.trivial += 1;
                continue;
            }
            a2.checked += 1;
            let ki = sys.subgroup(TypeSet::single(i)).unwrap();
            let lhs = product_set(sys.subgroup(sigma).unwrap(), ki);
            let mut rhs: Option<HashSet<Code>> = None;
            for j in sigma.iter() {
                let pj: HashSet<Code> = product_set(sys.subgroup(TypeSet::single(j)).unwrap(), ki).into_iter().collect();
                rhs = Some(match rhs {
                    None => pj,
                    Some(r) => r.intersection(&pj).copied().collect(),
                });
            }
            let rhs = rhs.unwrap();
            let lhs_set: HashSet<Code> = lhs.iter().copied().collect();
            if lhs_set != rhs {
                let mut extra: Vec<Code> = rhs.difference(&lhs_set).copied().collect();
                extra.sort_unstable();
                let mut missing: Vec<Code> = lhs_set.difference(&rhs).copied().collect();
                missing.sort_unstable();
                let w = extra.first().or(missing.first()).copied();
                a2.failures.push(AxiomFailure {
                    lhs: vec![sys.base().union(sigma), sys.base().insert(i)],
                    rhs: sys.base().union(sigma),
                    detail: format!("|K_tau K_i| = {}, |intersection| = {}", lhs_set.len(), rhs.len()),
                    witness: w.map(hex),
                });
            }
        }
    }

    let mut a3 = AxiomCheck::default();
    let top = sys.subgroup(types).unwrap();
    for i in types.iter() {
        a3.checked += 1;
        let co = types.remove(i);
        let other_len = if co.is_empty() { sys.ambient().order().map(|o| o as usize) } else { Some(sys.subgroup(co).unwrap().len()) };
        match other_len {
            Some(l) if l == top.len() => a3.failures.push(AxiomFailure {
                lhs: vec![sys.base().union(types)],
                rhs: sys.base().union(co),
                detail: "subgroups coincide".into(),
                witness: None,
            }),
            Some(_) => {}
            None => {
                a3.checked -= 1;
                a3.skipped += 1;
            }
        }
    }

    let mut intersections = AxiomCheck::default();
    for &sigma in &subsets {
        if sigma.len() < 2 {
            continue;
        }
        intersections.checked += 1;
        let k = sys.subgroup(sigma).unwrap();
        let mut inter: Option<HashSet<Code>> = None;
        for i in sigma.iter() {
            let ki = sys.subgroup(TypeSet::single(i)).unwrap().code_set();
            inter = Some(match inter {
                None => ki,
                Some(r) => r.intersection(&ki).copied().collect(),
            });
        }
        let inter = inter.unwrap();
        if inter != k.code_set() {
            let w = inter.iter().copied().filter(|c| !k.contains_code(*c)).min().or_else(|| k.codes().iter().copied().filter(|c| !inter.contains(c)).min());
            intersections.failures.push(AxiomFailure {
                lhs: sigma.iter().map(|i| sys.base().insert(i)).collect(),
                rhs: sys.base().union(sigma),
                detail: format!("|K_tau| = {}, |intersection| = {}", k.len(), inter.len()),
                witness: w.map(hex),
            });
        }
    }

    Ok(AxiomReport {
        base: sys.base(),
        types,
        ambient_order: sys.ambient().order(),
        a1,
        a2,
        a3,
        intersections,
    })
}

fn gen_key(sys: &SubgroupGeometrySystem, g: &[Elementary]) -> Vec<Code> {
    let mut k: Vec<Code> = g.iter().map(|e| sys.params().space().encode(&sys.params().elementary(e))).collect();
    k.sort_unstable();
    k.dedup();
    k
}
