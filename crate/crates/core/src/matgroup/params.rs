use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GroupError, TypeSet};
use crate::algebra::{in_tpower, Elementary, FieldParams, FieldSpec, MatrixSpace, RingElement, RingMatrix, TPowerModule, TruncatedRing};

/// Parameters (q, n, s) of EL_{n+1}(F_q[t]/(t^s)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElParams {
    field: Arc<FieldSpec>,
    n: usize,
    s: usize,
    space: MatrixSpace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub poly: Vec<u32>,
    pub n: usize,
    pub s: usize,
}

impl ElParams {
    pub fn new(field: Arc<FieldSpec>, n: usize, s: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidRank(n));
        }
        let ring = TruncatedRing::new(field.clone(), s)?;
        let space = MatrixSpace::new(ring, n + 1)?;
        Ok(ElParams { field, n, s, space })
    }

    pub fn from_prime(p: u32, n: usize, s: usize) -> Result<Self, GroupError> {
        Self::new(Arc::new(FieldSpec::prime(p)?), n, s)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn field_params(&self) -> FieldParams {
        self.field.params()
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn ring(&self) -> &TruncatedRing {
        self.space.ring()
    }

    pub fn index_set(&self) -> TypeSet {
        TypeSet::full(self.n)
    }

    pub fn summary(&self) -> ParamsSummary {
        ParamsSummary {
            p: self.field.p(),
            k: self.field.k(),
            q: self.q(),
            poly: self.field.poly().to_vec(),
            n: self.n,
            s: self.s,
        }
    }

    /// Same field and rank with a different truncation degree.
    pub fn with_s(&self, s: usize) -> Result<Self, GroupError> {
        Self::new(self.field.clone(), self.n, s)
    }

    pub fn t_power(&self, m: usize) -> TPowerModule {
        TPowerModule::enumerate(self.ring(), m)
    }

    /// Generators e_{j,j+1}(b), b in an additive basis of T, for j outside tau.
    pub fn k_generators(&self, tau: TypeSet) -> Vec<Elementary> {
        let basis = TPowerModule::additive_basis(self.ring(), 1);
        let mut out = Vec::new();
        for j in 0..=self.n {
            if tau.contains(j) {
                continue;
            }
            for b in &basis {
                out.push(Elementary { i: j, j: (j + 1) % (self.n + 1), r: b.clone() });
            }
        }
        out
    }

    /// Generators e_{i,j}(b) for all i != j and b in an additive basis of R.
    pub fn el_generators(&self) -> Vec<Elementary> {
        let basis = TPowerModule::additive_basis(self.ring(), self.s - 1);
        let mut out = Vec::new();
        for i in 0..=self.n {
            for j in 0..=self.n {
                if i == j {
                    continue;
                }
                for b in &basis {
                    out.push(Elementary { i, j, r: b.clone() });
                }
            }
        }
        out
    }

    pub fn elementary(&self, e: &Elementary) -> RingMatrix {
        self.space.elementary(e.i, e.j, &e.r).expect("valid elementary data")
    }

    /// Length of the cyclic interval {k, ..., j-1} mod n+1.
    pub fn cyclic_gap(&self, k: usize, j: usize) -> usize {
        (j + self.n + 1 - k) % (self.n + 1)
    }

    /// Degree bound for entry (k, j) of elements of K_tau, `None` when the entry
    /// is forced to vanish.
    pub fn entry_bound(&self, tau: TypeSet, k: usize, j: usize) -> Option<usize> {
        let len = self.cyclic_gap(k, j);
        let free = (0..len).all(|o| !tau.contains((k + o) % (self.n + 1)));
        free.then_some(len)
    }

    /// |K_tau| read off from the entry pattern, for nonempty tau.
    pub fn projected_k_order(&self, tau: TypeSet) -> Option<u128> {
        if tau.is_empty() {
            return self.projected_group_order();
        }
        let mut total: u128 = 1;
        for k in 0..=self.n {
            for j in 0..=self.n {
                if k == j {
                    continue;
                }
                if let Some(m) = self.entry_bound(tau, k, j) {
                    total = total.checked_mul(TPowerModule::expected_size(self.q(), m, self.s))?;
                }
            }
        }
        Some(total)
    }

    /// |SL_{n+1}(R_s)|, an upper bound for |EL_{n+1}(R_s)|.
    pub fn projected_group_order(&self) -> Option<u128> {
        let q = self.q() as u128;
        let d = (self.n + 1) as u32;
        let mut order = q.checked_pow(d * (d - 1) / 2)?;
        for i in 2..=d {
            order = order.checked_mul(q.checked_pow(i)? - 1)?;
        }
        order.checked_mul(q.checked_pow((self.s as u32 - 1).checked_mul(d * d - 1)?)?)
    }

    /// log10 of the projected group order, usable when the order overflows.
    pub fn projected_group_order_log10(&self) -> f64 {
        projected_order_log10(self.q(), self.n, self.s)
    }

    /// Entrywise test of the pattern describing K_tau; for tau empty the test
    /// is det = 1.
    pub fn membership_oracle_k(&self, tau: TypeSet, m: &RingMatrix) -> bool {
        if tau.is_empty() {
            return self.space.det(m) == self.ring().one();
        }
        for k in 0..=self.n {
            for j in 0..=self.n {
                let e = m.entry(k, j);
                if k == j {
                    if e[0] != 1 || e[1..].iter().any(|&c| c != 0) {
                        return false;
                    }
                    continue;
                }
                let ok = match self.entry_bound(tau, k, j) {
                    Some(deg) => in_tpower(&RingElement { coeffs: e.to_vec() }, deg),
                    None => e.iter().all(|&c| c == 0),
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Reduction R_s -> R_{s'} applied entrywise.
    pub fn reduce(&self, m: &RingMatrix, target: &ElParams) -> RingMatrix {
        self.space.reduce(m, target.space())
    }
}

/// |SL_d(F_q)|
pub fn sl_order_over_field(q: u128, d: u32) -> u128 {
    let mut order = q.pow(d * (d - 1) / 2);
    for i in 2..=d {
        order *= q.pow(i) - 1;
    }
    order
}

/// log10 |SL_{n+1}(F_q[t]/(t^s))| without building the parameter set.
pub fn projected_order_log10(q: u32, n: usize, s: usize) -> f64 {
    let q = q as f64;
    let d = (n + 1) as f64;
    let mut l = d * (d - 1.0) / 2.0 * q.log10();
    for i in 2..=(n + 1) {
        l += (q.powi(i as i32) - 1.0).log10();
    }
    l + (s as f64 - 1.0) * (d * d - 1.0) * q.log10()
}
