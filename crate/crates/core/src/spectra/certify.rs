use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::eigen::EigenOptions;
use super::graph::link_skeleton_weighted;
use super::spectrum::{second_eigenvalue, SpectrumReport};
use super::surd::QuadSurd;
use super::SpectraError;
use crate::geometry::{build_complex, Limits, SimplicialComplex, SubgroupGeometrySystem};
use crate::matgroup::{ElParams, TypeSet};

/// Spectrum of the 1-dimensional link of type I \ {i, j}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkSpectrum {
    pub pair: (usize, usize),
    pub base: TypeSet,
    /// j - i = +-1 mod n+1.
    pub adjacent: bool,
    pub group_order: usize,
    pub v0: usize,
    pub v1: usize,
    pub lambda2: f64,
    /// 1/sqrt(q).
    pub bound: f64,
    pub within_bound: bool,
    pub complete_bipartite: bool,
    pub spectrum: SpectrumReport,
    #[serde(skip)]
    pub seconds: f64,
}

impl LinkSpectrum {
    /// Non-adjacent links must be complete bipartite with spectrum {-1, 0, 1}.
    pub fn shape_ok(&self, tol: f64) -> bool {
        if self.adjacent {
            return true;
        }
        self.complete_bipartite && self.lambda2.abs() <= tol && self.spectrum.values_in(&[-1.0, 0.0, 1.0], tol)
    }
}

pub fn is_adjacent(n: usize, i: usize, j: usize) -> bool {
    let d = (j + n + 1 - i) % (n + 1);
    d == 1 || d == n
}

/// Builds the link of type I \ {i, j} from K_{I \ {i,j}} and its two
/// overgroups, and computes its walk spectrum.
pub fn link_spectrum(params: &ElParams, i: usize, j: usize, limits: Limits, opts: &EigenOptions, tol: f64) -> Result<LinkSpectrum, SpectraError> {
    let start = Instant::now();
    let (i, j) = (i.min(j), i.max(j));
    let base = params.index_set().remove(i).remove(j);
    let sys = SubgroupGeometrySystem::link_only(params, base, limits)?;
    let x = build_complex(&sys)?;
    let sc = x.to_simplicial();
    let (g, _) = link_skeleton_weighted(&sc, 1, &[])?;
    let spectrum = second_eigenvalue(&g, opts)?;
    let bound = 1.0 / (params.q() as f64).sqrt();
    let (v0, v1) = spectrum.sides.unwrap_or((sc.vertex_count(), 0));
    Ok(LinkSpectrum {
        pair: (i, j),
        base,
        adjacent: is_adjacent(params.n(), i, j),
        group_order: x.group().len(),
        v0,
        v1,
        lambda2: spectrum.lambda2,
        bound,
        within_bound: spectrum.lambda2 <= bound + tol,
        complete_bipartite: g.is_complete_bipartite(),
        spectrum,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// One report per unordered pair {i, j} of types.
pub fn certify_links(params: &ElParams, limits: Limits, opts: &EigenOptions, tol: f64) -> Result<Vec<LinkSpectrum>, SpectraError> {
    let n = params.n();
    let mut out = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            out.push(link_spectrum(params, i, j, limits, opts, tol)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateStatus {
    /// (n-1) b < 1 and the derived lambda is below 1.
    Valid,
    /// (n-1) b >= 1: the local-to-global criterion does not apply.
    VacuousPremise,
    /// The derived lambda is at least 1.
    VacuousBound,
    /// A link is disconnected or missing.
    Failed,
}

/// Exact evaluation of the certificate formula at b = 1/sqrt(q).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolicCheck {
    pub q: u32,
    pub n: usize,
    /// b / (1 - (n-1) b), or `None` when the denominator is not positive.
    pub lambda: Option<String>,
    /// 1 / (sqrt(q) - (n-1)).
    pub expected: Option<String>,
    pub identity_holds: bool,
    pub premise_vacuous: bool,
    pub bound_vacuous: bool,
    /// `premise_vacuous` agrees with q <= (n-1)^2.
    pub matches_integer_criterion: bool,
    /// |float formula - exact value|.
    pub float_gap: f64,
}

pub fn symbolic_check(q: u32, n: usize) -> SymbolicCheck {
    let d = q as u64;
    let m = QuadSurd::integer(n as i64 - 1, d);
    let one = QuadSurd::integer(1, d);
    let b = QuadSurd::new(BigRational::from_integer(BigInt::from(0)), BigRational::new(BigInt::from(1), BigInt::from(q)), d);
    let denom = one.sub(&m.mul(&b));
    let premise_vacuous = denom.signum() <= 0;
    let lambda = if premise_vacuous { None } else { b.div(&denom) };
    let expected = QuadSurd::root(d).sub(&m).inv().filter(|_| !premise_vacuous);
    let identity_holds = match (&lambda, &expected) {
        (Some(l), Some(e)) => l == e,
        (None, None) => true,
        _ => false,
    };
    let bound_vacuous = lambda.as_ref().is_none_or(|l| l.cmp_to(&one) != std::cmp::Ordering::Less);
    let bf = 1.0 / (q as f64).sqrt();
    let float_gap = match &lambda {
        Some(l) => (bf / (1.0 - (n as f64 - 1.0) * bf) - l.to_f64()).abs(),
        None => 0.0,
    };
    let integer_vacuous = (q as u64) <= ((n as u64 - 1) * (n as u64 - 1));
    SymbolicCheck {
        q,
        n,
        lambda: lambda.as_ref().map(|l| l.to_string()),
        expected: expected.as_ref().map(|e| e.to_string()),
        identity_holds,
        premise_vacuous,
        bound_vacuous,
        matches_integer_criterion: premise_vacuous == integer_vacuous,
        float_gap,
    }
}

/// Whether the instance lies in the families s > n and s > 2^{n-1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub s: usize,
    pub n: usize,
    pub s_gt_n: bool,
    pub s_gt_pow: bool,
}

impl Thresholds {
    pub fn of(params: &ElParams) -> Self {
        let (s, n) = (params.s(), params.n());
        Thresholds { s, n, s_gt_n: s > n, s_gt_pow: (s as u128) > 1u128 << (n - 1).min(100) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuRow {
    /// Face dimension (-1 for the whole complex).
    pub k: isize,
    pub faces: usize,
    pub max_mu: f64,
    pub min_mu: f64,
    pub disconnected: usize,
}

/// mu_tau for every face tau of dimension at most n-2, computed directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectAudit {
    pub rows: Vec<MuRow>,
    pub max_mu: f64,
    pub skeleton_connected: bool,
}

impl DirectAudit {
    pub fn all_connected(&self) -> bool {
        self.rows.iter().all(|r| r.disconnected == 0)
    }
}

/// Runs the walk on the link of every face of dimension at most `max_k`
/// (capped at n-2).
pub fn direct_mu_audit(x: &SimplicialComplex, n: usize, max_k: isize, opts: &EigenOptions) -> Result<DirectAudit, SpectraError> {
    let mut rows = Vec::new();
    let mut skeleton_connected = true;
    for k in -1..=max_k.min(n as isize - 2) {
        let faces: Vec<Vec<u32>> = if k < 0 { vec![Vec::new()] } else { x.simplices.get(k as usize).cloned().unwrap_or_default() };
        let mut row = MuRow { k, faces: faces.len(), max_mu: f64::NEG_INFINITY, min_mu: f64::INFINITY, disconnected: 0 };
        for f in &faces {
            let (g, _) = link_skeleton_weighted(x, n, f)?;
            match second_eigenvalue(&g, opts) {
                Ok(r) => {
                    row.max_mu = row.max_mu.max(r.lambda2);
                    row.min_mu = row.min_mu.min(r.lambda2);
                }
                Err(SpectraError::Disconnected { .. }) => {
                    row.disconnected += 1;
                    if k < 0 {
                        skeleton_connected = false;
                    }
                }
                Err(e) => return Err(e),
            }
        }
        rows.push(row);
    }
    let max_mu = rows.iter().map(|r| r.max_mu).fold(f64::NEG_INFINITY, f64::max);
    Ok(DirectAudit { rows, max_mu, skeleton_connected })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCertificate {
    pub params: crate::matgroup::ParamsSummary,
    pub links: Vec<LinkSpectrum>,
    /// max lambda2 over the 1-dimensional links.
    pub b: f64,
    pub lambda: Option<f64>,
    pub status: CertificateStatus,
    pub links_within_bound: bool,
    pub symbolic: SymbolicCheck,
    pub thresholds: Thresholds,
    pub direct: Option<DirectAudit>,
    pub target: Option<f64>,
    pub meets_target: Option<bool>,
    pub tolerance: f64,
    pub eigen: EigenOptions,
}

/// Turns the link bound b into the global one-sided bound b / (1 - (n-1) b).
pub fn certify_local_expansion(
    params: &ElParams,
    links: Vec<LinkSpectrum>,
    direct: Option<DirectAudit>,
    target: Option<f64>,
    opts: &EigenOptions,
    tol: f64,
) -> ExpanderCertificate {
    let n = params.n();
    let b = links.iter().map(|l| l.lambda2).fold(f64::NEG_INFINITY, f64::max);
    let expected = (n + 1) * n / 2;
    let complete = links.len() == expected && b.is_finite();
    let m = n as f64 - 1.0;
    let (lambda, status) = if !complete {
        (None, CertificateStatus::Failed)
    } else if m * b >= 1.0 {
        (None, CertificateStatus::VacuousPremise)
    } else {
        let l = b / (1.0 - m * b);
        (Some(l), if l >= 1.0 { CertificateStatus::VacuousBound } else { CertificateStatus::Valid })
    };
    let links_within_bound = links.iter().all(|l| l.within_bound);
    ExpanderCertificate {
        params: params.summary(),
        links,
        b,
        lambda,
        status,
        links_within_bound,
        symbolic: symbolic_check(params.q(), n),
        thresholds: Thresholds::of(params),
        direct,
        target,
        meets_target: target.map(|t| status == CertificateStatus::Valid && lambda.is_some_and(|l| l <= t + tol)),
        tolerance: tol,
        eigen: *opts,
    }
}
