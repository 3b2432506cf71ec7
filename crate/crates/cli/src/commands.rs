use std::fs;
use std::path::{Path, PathBuf};

use cosetcx::geometry::{
    build_complex, incidence_audit, link_isomorphism_audit, quotient_check, structural_audit, to_dot, verify_axioms, AmbientPolicy, AxiomReport,
    ComplexExport, CosetComplex, SimplicialComplex, SubgroupGeometrySystem,
};
use cosetcx::matgroup::{export_table, subgroup_k, ElParams};
use cosetcx::ortho::link_equivalence;
use cosetcx::spectra::{certify_links, certify_local_expansion, direct_mu_audit, CertificateStatus, EigenOptions, ExpanderCertificate, LinkSpectrum};
use cosetcx::symmetry::{commutator_audit, dihedral_audit, transitivity_audit, AutDescriptor, SemidirectAction};
use serde::Serialize;

use crate::bundle::{overall, CertificateBundle, Section, Verdict};
use crate::{CliError, RunConfig};

/// Result of one command: whether every check passed, a printable summary
/// and the files written.
#[derive(Debug)]
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// Runs `f`; a size-limit error turns the section into `skipped`, any other
/// error is tagged with the section name.
fn guarded(name: &str, f: impl FnOnce() -> Result<Section, CliError>) -> Result<Section, CliError> {
    match f() {
        Ok(s) => Ok(s),
        Err(e) if e.is_cap() => Ok(Section::skipped(name, e.to_string())),
        Err(e) => Err(e.tagged(name)),
    }
}

/// The largest instance s' <= s whose complex can be built, with its complex.
pub struct Instance {
    pub s: usize,
    pub params: ElParams,
    pub sys: SubgroupGeometrySystem,
    pub complex: CosetComplex,
    pub simplicial: SimplicialComplex,
}

impl Instance {
    pub fn build(cfg: &RunConfig) -> Result<Option<Self>, CliError> {
        let top = if cfg.link_only { cfg.s - 1 } else { cfg.s };
        let Some(s) = (1..=top).rev().find(|&s| cfg.fits(s, cfg.cap)) else {
            return Ok(None);
        };
        let params = cfg.params_at(s)?;
        let sys = SubgroupGeometrySystem::new(&params, cfg.limits(), AmbientPolicy::TableOnly)?;
        let complex = build_complex(&sys)?;
        let simplicial = complex.to_simplicial();
        Ok(Some(Instance { s, params, sys, complex, simplicial }))
    }

    /// Scope remark when the instance is not the configured one.
    fn note(&self, cfg: &RunConfig) -> Option<String> {
        (self.s != cfg.s).then(|| format!("verified at s={} instance", self.s))
    }
}

fn scoped(section: Section, inst: &Instance, cfg: &RunConfig) -> Section {
    match inst.note(cfg) {
        Some(n) if section.verdict != Verdict::Skipped => section.with_note(n),
        _ => section,
    }
}

fn no_instance(name: &str, cfg: &RunConfig) -> Section {
    Section::skipped(name, format!("no truncation s' <= {} has an ambient group within cap {}", cfg.s, cfg.cap))
}

fn first_axiom_failure(r: &AxiomReport) -> Option<String> {
    [("A1", &r.a1), ("A2", &r.a2), ("A3", &r.a3), ("intersection", &r.intersections)]
        .iter()
        .find_map(|(name, c)| c.failures.first().map(|f| format!("{name} {:?} vs {}: {} {}", f.lhs, f.rhs, f.detail, f.witness.clone().unwrap_or_default())))
}

pub fn axiom_sections(cfg: &RunConfig, inst: Option<&Instance>) -> Result<Vec<Section>, CliError> {
    let limits = cfg.limits();
    let full = guarded("axioms", || {
        let section = |r: &AxiomReport| Section::new("axioms", r.holds(), None, r).with_witness(first_axiom_failure(r));
        if let Some(i) = inst.filter(|i| i.s == cfg.s || cfg.link_only) {
            let r = verify_axioms(&i.sys, limits)?;
            return Ok(scoped(section(&r), i, cfg));
        }
        if cfg.link_only {
            return Ok(no_instance("axioms", cfg));
        }
        let params = cfg.params()?;
        let policy = if cfg.count_ambient && cfg.fits(cfg.s, cfg.count_cap) { AmbientPolicy::Count } else { AmbientPolicy::TableOnly };
        let sys = SubgroupGeometrySystem::new(&params, limits, policy)?;
        let r = verify_axioms(&sys, limits)?;
        let out = section(&r);
        Ok(if r.skipped() > 0 { out.with_note(format!("{} checks need the ambient group and were skipped; set count_ambient=true", r.skipped())) } else { out })
    })?;
    let links = guarded("axioms.links", || {
        let params = cfg.params()?;
        let all = params.index_set();
        let mut rows = Vec::new();
        let mut witness = None;
        for tau in all.subsets().into_iter().filter(|t| !t.is_empty() && *t != all) {
            let sys = SubgroupGeometrySystem::link_only(&params, tau, limits)?;
            let r = verify_axioms(&sys, limits)?;
            if witness.is_none() {
                witness = first_axiom_failure(&r).map(|w| format!("link {tau}: {w}"));
            }
            rows.push(r);
        }
        let pass = rows.iter().all(|r| r.holds() && r.skipped() == 0);
        Ok(Section::new("axioms.links", pass, None, &rows).with_witness(witness))
    })?;
    Ok(vec![full, links])
}

pub fn structure_sections(cfg: &RunConfig, inst: Option<&Instance>) -> Result<Vec<Section>, CliError> {
    let names = ["structure", "structure.growth", "incidence", "links.isomorphism"];
    let Some(i) = inst else {
        return Ok(names.iter().map(|n| no_instance(n, cfg)).collect());
    };
    let n = cfg.n;
    let st = structural_audit(&i.complex, cfg.seed);
    let sa = &st.simplicial;
    let checks = [
        ("pure", &sa.pure),
        ("partite", &sa.partite),
        ("clique", &sa.clique),
        ("gallery connected", &sa.gallery_connected),
        ("no free faces", &sa.no_free_faces),
        ("locally finite", &sa.locally_finite),
        ("face map bijective", &st.f_bijective),
        ("face map equivariant", &st.f_equivariant),
        ("codimension one homogeneous", &st.codim1_homogeneous),
        ("simply transitive", &st.simply_transitive),
    ];
    let witness = checks
        .iter()
        .find(|(_, c)| !c.holds)
        .map(|(name, c)| format!("{name}: {}", c.witness.clone().unwrap_or_default()))
        .or_else(|| st.tops_per_vertex.iter().find(|t| t.min != t.expected || t.max != t.expected).map(|t| format!("type {} vertices lie in {}..{} top faces, expected {}", t.ty, t.min, t.max, t.expected)));
    let structure = Section::new("structure", st.holds(), None, &st).with_witness(witness);
    let growth = if i.s >= 2 {
        guarded("structure.growth", || {
            let smaller = build_complex(&SubgroupGeometrySystem::new(&cfg.params_at(i.s - 1)?, cfg.limits(), AmbientPolicy::TableOnly)?)?;
            #[derive(Serialize)]
            struct Growth {
                s: [usize; 2],
                vertices: [usize; 2],
            }
            let g = Growth { s: [i.s - 1, i.s], vertices: [smaller.vertex_total(), i.complex.vertex_total()] };
            Ok(Section::new("structure.growth", g.vertices[0] < g.vertices[1], None, &g))
        })?
    } else {
        Section::skipped("structure.growth", "needs s >= 2")
    };
    let dict = incidence_audit(&i.simplicial, n);
    let dict_ok = dict.all_agree() && dict.rows.iter().all(|r| r.flag_view);
    let dict_witness = dict.rows.iter().find(|r| !r.agrees() || !r.flag_view).map(|r| format!("{}: flags {} simplices {}", r.name, r.flag_view, r.simplex_view));
    let incidence = Section::new("incidence", dict_ok, None, &dict).with_witness(dict_witness);
    let rows = link_isomorphism_audit(&i.complex, &i.simplicial, cfg.link_samples, cfg.seed)?;
    let bad = rows.iter().find(|r| !(r.bijection && r.signature_match)).map(|r| format!("link of type {} coset {}", r.tau, r.coset));
    let links = Section::new("links.isomorphism", bad.is_none(), None, &rows).with_witness(bad);
    Ok([structure, growth, incidence, links].into_iter().map(|s| scoped(s, i, cfg)).collect())
}

fn link_witness(links: &[LinkSpectrum], tol: f64) -> Option<String> {
    links
        .iter()
        .find(|l| !l.within_bound || !l.shape_ok(tol))
        .map(|l| format!("link {:?}: lambda2 = {:.12} against bound {:.12}", l.pair, l.lambda2, l.bound))
}

/// Link spectra and the local-to-global certificate.
pub fn spectral_certificate(cfg: &RunConfig, inst: Option<&Instance>) -> Result<ExpanderCertificate, CliError> {
    let opts = EigenOptions::default();
    let tol = cfg.tolerances.tol;
    let params = cfg.params()?;
    let links = certify_links(&params, cfg.limits(), &opts, tol)?;
    let direct = match inst {
        Some(i) if cfg.direct_mu && i.s == cfg.s => Some(direct_mu_audit(&i.simplicial, cfg.n, cfg.n as isize - 2, &opts)?),
        _ => None,
    };
    Ok(certify_local_expansion(&params, links, direct, cfg.target_lambda, &opts, tol))
}

pub fn spectra_sections(cfg: &RunConfig, inst: Option<&Instance>) -> Result<(Vec<Section>, Option<ExpanderCertificate>), CliError> {
    let tol = cfg.tolerances.tol;
    let cert = match spectral_certificate(cfg, inst) {
        Ok(c) => c,
        Err(e) if e.is_cap() => {
            let names = ["spectra.links", "spectra.expansion", "spectra.direct_mu"];
            return Ok((names.iter().map(|n| Section::skipped(n, e.to_string())).collect(), None));
        }
        Err(e) => return Err(e.tagged("spectra")),
    };
    let links_ok = cert.links.iter().all(|l| l.within_bound && l.shape_ok(tol));
    let links = Section::new("spectra.links", links_ok, Some(tol), &cert.links).with_witness(link_witness(&cert.links, tol));

    let sym = &cert.symbolic;
    let exp_ok = cert.status != CertificateStatus::Failed && sym.identity_holds && sym.matches_integer_criterion && cert.meets_target != Some(false);
    #[derive(Serialize)]
    struct Expansion<'a> {
        b: f64,
        lambda: Option<f64>,
        status: CertificateStatus,
        links_within_bound: bool,
        symbolic: &'a cosetcx::spectra::SymbolicCheck,
        thresholds: cosetcx::spectra::Thresholds,
        target: Option<f64>,
        meets_target: Option<bool>,
    }
    let body = Expansion {
        b: cert.b,
        lambda: cert.lambda,
        status: cert.status,
        links_within_bound: cert.links_within_bound,
        symbolic: sym,
        thresholds: cert.thresholds,
        target: cert.target,
        meets_target: cert.meets_target,
    };
    let mut expansion = Section::new("spectra.expansion", exp_ok, Some(tol), &body).with_witness(Some(format!("status {:?}, lambda {:?}", cert.status, cert.lambda)));
    match cert.status {
        CertificateStatus::VacuousPremise => expansion = expansion.with_note(format!("vacuous: q = {} <= (n-1)^2 = {}", cfg.q(), (cfg.n - 1) * (cfg.n - 1))),
        CertificateStatus::VacuousBound => expansion = expansion.with_note("vacuous: derived bound is at least 1"),
        _ => {}
    }

    let direct = match (&cert.direct, inst) {
        (Some(d), _) => {
            let ok = d.all_connected() && d.max_mu < 1.0;
            Section::new("spectra.direct_mu", ok, Some(tol), d).with_witness(Some(format!("max mu = {}", d.max_mu)))
        }
        (None, _) if !cfg.direct_mu => Section::skipped("spectra.direct_mu", "disabled by direct_mu=false"),
        (None, Some(i)) => Section::skipped("spectra.direct_mu", format!("complex only available at s={}", i.s)),
        (None, None) => no_instance("spectra.direct_mu", cfg),
    };
    Ok((vec![links, expansion, direct], Some(cert)))
}

pub fn ortho_section(cfg: &RunConfig) -> Result<Section, CliError> {
    guarded("ortho", || {
        let params = cfg.params()?;
        let t = cfg.tolerances;
        let opts = EigenOptions::default();
        let all = params.index_set();
        let mut reports = Vec::new();
        let mut skipped = Vec::new();
        for i in 0..=cfg.n {
            for j in i + 1..=cfg.n {
                let order = subgroup_k(&params, all.remove(i).remove(j), cfg.cap)?.len();
                if order > cfg.ortho_max {
                    skipped.push((i, j, order));
                    continue;
                }
                reports.push(link_equivalence(&params, i, j, cfg.limits(), &opts, t.eq_tol)?);
            }
        }
        if reports.is_empty() {
            return Ok(Section::skipped("ortho", format!("every link group exceeds ortho_max = {}", cfg.ortho_max)));
        }
        let bad = reports
            .iter()
            .find(|r| !r.holds(t.eq_tol, t.proj_tol, t.norm_tol))
            .map(|r| format!("pair {:?}: epsilon {} lambda2 {} difference {:e}", r.types, r.epsilon(), r.lambda2, r.difference));
        let sec = Section::new("ortho", bad.is_none(), Some(t.eq_tol), &reports).with_witness(bad);
        Ok(if skipped.is_empty() { sec } else { sec.with_note(format!("{} pairs above ortho_max skipped", skipped.len())) })
    })
}

pub fn symmetry_sections(cfg: &RunConfig, inst: Option<&Instance>) -> Result<Vec<Section>, CliError> {
    let dihedral = guarded("symmetry.dihedral", || {
        let owned;
        let sys = match inst.filter(|i| i.s == cfg.s) {
            Some(i) => &i.sys,
            None => {
                owned = SubgroupGeometrySystem::new(&cfg.params()?, cfg.limits(), AmbientPolicy::TableOnly)?;
                &owned
            }
        };
        let r = dihedral_audit(sys)?;
        let w = (!r.holds()).then(|| format!("image order {} (expected {}), kernel {:?}", r.image_order, 2 * (cfg.n + 1), r.kernel));
        Ok(Section::new("symmetry.dihedral", r.holds(), None, &r).with_witness(w))
    })?;
    let transitivity = match inst {
        Some(i) => guarded("symmetry.transitivity", || {
            let act = SemidirectAction::dihedral(&i.complex)?;
            let gens = [AutDescriptor::rotation(cfg.n), AutDescriptor::reflection(cfg.n)];
            let r = transitivity_audit(&act, &gens, cfg.samples.min(1000), cfg.seed);
            let w = r.rows.iter().find(|row| row.orbits != 1 && [0, cfg.n - 1, cfg.n].contains(&row.k)).map(|row| format!("X({}) splits into {} orbits", row.k, row.orbits));
            Ok(scoped(Section::new("symmetry.transitivity", r.holds(), None, &r).with_witness(w), i, cfg))
        })?,
        None => no_instance("symmetry.transitivity", cfg),
    };
    let commutators = guarded("symmetry.commutators", || {
        let rows = commutator_audit(&cfg.params()?, cfg.cap, 4096)?;
        let bad = rows.iter().find(|r| !r.matches()).map(|r| format!("pair {:?}: adjacent {} abelian {}", r.pair, r.adjacent, r.abelian));
        Ok(Section::new("symmetry.commutators", bad.is_none(), None, &rows).with_witness(bad))
    })?;
    Ok(vec![dihedral, transitivity, commutators])
}

pub fn covering_section(cfg: &RunConfig) -> Result<Section, CliError> {
    if cfg.s < 2 {
        return Ok(Section::skipped("covering", "needs s >= 2"));
    }
    guarded("covering", || {
        let target = cfg.target.unwrap_or(cfg.s - 1);
        if target == cfg.s {
            return Ok(Section::skipped("covering", "target equals s; the quotient is trivial"));
        }
        let r = quotient_check(&cfg.params()?, target, cfg.limits(), cfg.samples, cfg.seed)?;
        let pass = r.kernel_as_expected()
            && r.homomorphism_failures == 0
            && if r.expected_trivial { r.is_covering() } else { r.kernel.iter().any(|k| k.witness.is_some()) };
        let w = if !r.kernel_as_expected() {
            Some(format!("kernel trivial = {} but s' = {target} and n = {}", r.kernel_trivial(), cfg.n))
        } else {
            r.links.iter().find(|l| !l.isomorphic()).map(|l| format!("link of type {} not isomorphic", l.tau))
        };
        let sec = Section::new("covering", pass, None, &r).with_witness(w);
        Ok(if r.expected_trivial { sec } else { sec.with_note(format!("s' = {target} <= n: the reduction meets K_i, no covering expected")) })
    })
}

/// Every section of a certificate, in pipeline order.
pub fn certificate(cfg: &RunConfig) -> Result<CertificateBundle, CliError> {
    let inst = Instance::build(cfg)?;
    let inst = inst.as_ref();
    let mut sections = axiom_sections(cfg, inst)?;
    sections.extend(structure_sections(cfg, inst)?);
    sections.extend(spectra_sections(cfg, inst)?.0);
    sections.push(ortho_section(cfg)?);
    sections.extend(symmetry_sections(cfg, inst)?);
    sections.push(covering_section(cfg)?);
    Ok(CertificateBundle::new(cfg.clone(), sections))
}

fn write(dir: &Path, name: &str, bytes: &[u8], files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    files.push(path);
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("serialisable");
    s.push(b'\n');
    s
}

fn section_lines(sections: &[Section]) -> String {
    sections
        .iter()
        .map(|s| {
            let v = match s.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "skipped",
            };
            let mut line = format!("{:<28} {v}", s.name);
            if let Some(n) = &s.note {
                line.push_str(&format!(" [{n}]"));
            }
            if let Some(w) = &s.witness {
                line.push_str(&format!(" witness: {w}"));
            }
            line + "\n"
        })
        .collect()
}

fn sections_outcome(cfg: &RunConfig, name: &str, sections: Vec<Section>) -> Result<Outcome, CliError> {
    let mut files = Vec::new();
    write(&cfg.out, name, &json(&sections), &mut files)?;
    Ok(Outcome { pass: overall(&sections) == Verdict::Pass, summary: section_lines(&sections), files })
}

pub fn cmd_build(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.guard(cfg.cap)?;
    let params = cfg.params()?;
    let sys = SubgroupGeometrySystem::new(&params, cfg.limits(), AmbientPolicy::TableOnly)?;
    let x = build_complex(&sys)?;
    let sc = x.to_simplicial();
    let mut files = Vec::new();
    write(&cfg.out, "complex.json", ComplexExport::from_simplicial(params.summary(), &sc).to_json().as_bytes(), &mut files)?;
    write(&cfg.out, "skeleton.dot", to_dot(&sc).as_bytes(), &mut files)?;
    write(&cfg.out, "group.cxg", &export_table(&params, x.group(), true), &mut files)?;
    let counts: Vec<usize> = (0..=cfg.n).map(|d| sc.count(d)).collect();
    Ok(Outcome { pass: true, summary: format!("|G| = {}, faces per dimension {counts:?}\n", x.group().len()), files })
}

pub fn cmd_verify_axioms(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let inst = if cfg.link_only { Instance::build(cfg)? } else { None };
    sections_outcome(cfg, "axioms.json", axiom_sections(cfg, inst.as_ref())?)
}

#[derive(Serialize)]
struct SpectraRow {
    i: usize,
    j: usize,
    adjacent: bool,
    group_order: usize,
    v0: usize,
    v1: usize,
    lambda2: f64,
    bound: f64,
    within_bound: bool,
    complete_bipartite: bool,
    distinct_eigenvalues: usize,
}

pub fn cmd_spectra(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let inst = if cfg.direct_mu && cfg.fits(cfg.s, cfg.cap) && !cfg.link_only { Instance::build(cfg)? } else { None };
    let (sections, cert) = spectra_sections(cfg, inst.as_ref())?;
    let mut out = sections_outcome(cfg, "spectra.json", sections)?;
    if let Some(cert) = cert {
        let mut w = csv::Writer::from_writer(Vec::new());
        for l in &cert.links {
            w.serialize(SpectraRow {
                i: l.pair.0,
                j: l.pair.1,
                adjacent: l.adjacent,
                group_order: l.group_order,
                v0: l.v0,
                v1: l.v1,
                lambda2: l.lambda2,
                bound: l.bound,
                within_bound: l.within_bound,
                complete_bipartite: l.complete_bipartite,
                distinct_eigenvalues: l.spectrum.multiplicities.len(),
            })
            .map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        write(&cfg.out, "spectra.csv", &bytes, &mut out.files)?;
    }
    Ok(out)
}

pub fn cmd_ortho(cfg: &RunConfig) -> Result<Outcome, CliError> {
    sections_outcome(cfg, "ortho.json", vec![ortho_section(cfg)?])
}

pub fn cmd_symmetry(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let inst = Instance::build(cfg)?;
    sections_outcome(cfg, "symmetry.json", symmetry_sections(cfg, inst.as_ref())?)
}

pub fn cmd_quotient(cfg: &RunConfig) -> Result<Outcome, CliError> {
    sections_outcome(cfg, "quotient.json", vec![covering_section(cfg)?])
}

pub fn cmd_certify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let b = certificate(cfg)?;
    let mut files = Vec::new();
    write(&cfg.out, "certificate.json", b.to_json().as_bytes(), &mut files)?;
    Ok(Outcome { pass: b.overall == Verdict::Pass, summary: b.summary(), files })
}

pub fn cmd_report(path: &Path) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let b = CertificateBundle::from_json(&text)?;
    Ok(Outcome { pass: b.overall == Verdict::Pass, summary: b.summary(), files: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(sets: &[&str]) -> RunConfig {
        let mut c = RunConfig::default();
        for s in sets {
            c.apply_override(s).unwrap();
        }
        c.validate().unwrap();
        c
    }

    #[test]
    fn instance_falls_back_to_tabulated_s() {
        let c = cfg(&["s=3", "link_only=true"]);
        assert_eq!(Instance::build(&c).unwrap().unwrap().s, 2);
        let c = cfg(&["s=1"]);
        assert_eq!(Instance::build(&c).unwrap().unwrap().s, 1);
    }

    #[test]
    fn vacuous_expansion_is_flagged_not_failed() {
        let c = cfg(&["n=4", "s=1", "direct_mu=false"]);
        let (secs, cert) = spectra_sections(&c, None).unwrap();
        assert_eq!(cert.unwrap().status, CertificateStatus::VacuousPremise);
        let exp = secs.iter().find(|s| s.name == "spectra.expansion").unwrap();
        assert_eq!(exp.verdict, Verdict::Pass);
        assert!(exp.note.as_deref().unwrap().starts_with("vacuous"));
    }

    #[test]
    fn covering_skips_without_room() {
        let c = cfg(&["s=1"]);
        assert_eq!(covering_section(&c).unwrap().verdict, Verdict::Skipped);
    }

    #[test]
    fn cap_errors_become_skips() {
        let c = cfg(&["cap=10"]);
        let s = ortho_section(&c).unwrap();
        assert_eq!(s.verdict, Verdict::Skipped);
    }
}
