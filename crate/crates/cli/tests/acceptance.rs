//! Acceptance suite: one pass/fail line per criterion.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use cosetcx::algebra::{FieldSpec, TruncatedRing};
use cosetcx::geometry::{
    build_complex, incidence_audit, quotient_check, structural_audit, verify_axioms, AmbientPolicy, AxiomReport, Limits, SubgroupGeometrySystem,
};
use cosetcx::matgroup::{ElParams, SubgroupTable, TypeSet};
use cosetcx::ortho::link_equivalence;
use cosetcx::spectra::{
    certify_local_expansion, direct_mu_audit, eig_sym, is_adjacent, link_spectrum, symbolic_check, CertificateStatus, DenseMatrix, EigenMethod,
    EigenOptions, LinkSpectrum,
};
use cosetcx::symmetry::{commutator_audit, dihedral_audit, transitivity_audit, verify_preserves_system, AutDescriptor, SemidirectAction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPECTRAL_TOL: f64 = 1e-9;
const EQ_TOL: f64 = 1e-8;
const PROJ_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, detail: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
            self.detail.push(format!("FAILED {what}"));
        } else {
            self.detail.push(what);
        }
    }
}

fn params(p: u32, n: usize, s: usize) -> ElParams {
    ElParams::from_prime(p, n, s).unwrap()
}

fn opts() -> EigenOptions {
    EigenOptions::default()
}

fn axioms_full(p: u32, n: usize, s: usize, policy: AmbientPolicy) -> (AxiomReport, f64) {
    let t = Instant::now();
    let sys = SubgroupGeometrySystem::new(&params(p, n, s), Limits::default(), policy).unwrap();
    (verify_axioms(&sys, Limits::default()).unwrap(), t.elapsed().as_secs_f64())
}

fn criterion_axioms() -> Outcome {
    let mut o = Outcome::new();
    for (p, n, s) in [(2, 2, 2), (3, 2, 2)] {
        let (r, secs) = axioms_full(p, n, s, AmbientPolicy::Count);
        o.check(
            r.holds() && r.skipped() == 0 && secs < 300.0,
            format!("({p},{n},{s}) full: {} A1 / {} A2 / {} A3 checks, {} skipped, {secs:.1}s", r.a1.checked, r.a2.checked, r.a3.checked, r.skipped()),
        );
    }
    for (p, n, s) in [(2, 2, 3), (2, 3, 2), (3, 2, 3)] {
        let t = Instant::now();
        let pr = params(p, n, s);
        let all = pr.index_set();
        let mut ok = true;
        let mut links = 0;
        for tau in all.subsets().into_iter().filter(|t| !t.is_empty() && *t != all) {
            let sys = SubgroupGeometrySystem::link_only(&pr, tau, Limits::default()).unwrap();
            let r = verify_axioms(&sys, Limits::default()).unwrap();
            ok &= r.holds() && r.skipped() == 0;
            links += 1;
        }
        let secs = t.elapsed().as_secs_f64();
        o.check(ok && secs < 300.0, format!("({p},{n},{s}) link level: {links} link systems, {secs:.2}s"));
    }
    // dropping one generator of K_0 must break the axioms, with a witness
    let pr = params(2, 2, 2);
    let sys = SubgroupGeometrySystem::new(&pr, Limits::default(), AmbientPolicy::TableOnly).unwrap();
    let gens = pr.k_generators(TypeSet::single(0));
    let mut caught = 0;
    for drop in 0..gens.len() {
        let kept: Vec<_> = gens.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, g)| g.clone()).collect();
        let table = SubgroupTable::from_generators(&pr, TypeSet::single(0), &kept, 1 << 20).unwrap();
        let r = verify_axioms(&sys.with_vertex_subgroup(0, table), Limits::default()).unwrap();
        let witnessed = [&r.a1, &r.a2, &r.a3, &r.intersections].iter().any(|c| c.failures.iter().any(|f| f.witness.is_some()));
        if !r.holds() && witnessed {
            caught += 1;
        }
    }
    o.check(caught == gens.len(), format!("dropped-generator mutants rejected with witnesses: {caught}/{}", gens.len()));
    o
}

fn criterion_structure() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let sys = SubgroupGeometrySystem::new(&params(2, 2, 2), Limits::default(), AmbientPolicy::TableOnly).unwrap();
    let x = build_complex(&sys).unwrap();
    let r = structural_audit(&x, 7);
    let sa = &r.simplicial;
    o.check(sa.dim == 2 && sa.pure.holds, "pure of dimension 2");
    o.check(sa.partite.holds, "3-partite");
    o.check(sa.clique.holds, "clique complex");
    o.check(sa.gallery_connected.holds, "strongly gallery connected");
    o.check(sa.no_free_faces.holds, "no free faces");
    let q_const = r.tops_per_vertex.iter().all(|t| t.min == t.max && t.min == t.expected);
    let qs: Vec<usize> = r.tops_per_vertex.iter().map(|t| t.min).collect();
    o.check(q_const, format!("top faces per vertex constant {qs:?}"));
    o.check(r.holds(), "full structural audit");
    let d = incidence_audit(&x.to_simplicial(), 2);
    o.check(d.all_agree() && d.rows.iter().all(|r| r.flag_view), "incidence dictionary agrees");
    let small = build_complex(&SubgroupGeometrySystem::new(&params(2, 2, 1), Limits::default(), AmbientPolicy::TableOnly).unwrap()).unwrap();
    let (v1, v2) = (small.vertex_total(), x.vertex_total());
    o.check(v1 < v2, format!("vertices s=1: {v1} < s=2: {v2}"));
    let secs = t.elapsed().as_secs_f64();
    o.check(secs < 120.0, format!("{secs:.1}s"));
    o
}

fn timed_link(p: &ElParams, i: usize, j: usize) -> (LinkSpectrum, f64) {
    let t = Instant::now();
    let l = link_spectrum(p, i, j, Limits::default(), &opts(), SPECTRAL_TOL).unwrap();
    (l, t.elapsed().as_secs_f64())
}

fn criterion_spectra(keep: &mut Option<(ElParams, Vec<LinkSpectrum>)>) -> Outcome {
    let mut o = Outcome::new();
    for q in [2u32, 3, 4, 5] {
        let field = match q {
            4 => FieldSpec::new(2, 2, None).unwrap(),
            p => FieldSpec::prime(p).unwrap(),
        };
        let pr = ElParams::new(Arc::new(field), 2, 3).unwrap();
        let mut links = Vec::new();
        let mut worst: f64 = 0.0;
        let mut slowest: f64 = 0.0;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (l, secs) = timed_link(&pr, i, j);
            worst = worst.max(l.lambda2);
            slowest = slowest.max(secs);
            links.push(l);
        }
        let bound = 1.0 / (q as f64).sqrt();
        o.check(
            worst <= bound + SPECTRAL_TOL && slowest < 30.0,
            format!("q={q} n=2 s=3: max lambda2 {worst:.12} <= 1/sqrt(q) {bound:.12}, slowest link {slowest:.1}s"),
        );
        if q == 5 {
            *keep = Some((pr, links));
        }
    }
    let pr = params(2, 3, 3);
    for i in 0..=3 {
        for j in i + 1..=3 {
            let (l, secs) = timed_link(&pr, i, j);
            if is_adjacent(3, i, j) {
                o.check(l.lambda2 <= l.bound + SPECTRAL_TOL && secs < 30.0, format!("n=3 adjacent ({i},{j}): lambda2 {:.12}, {secs:.1}s", l.lambda2));
            } else {
                let ok = l.lambda2.abs() <= SPECTRAL_TOL && l.spectrum.values_in(&[-1.0, 0.0, 1.0], SPECTRAL_TOL) && secs < 30.0;
                o.check(ok, format!("n=3 non-adjacent ({i},{j}): lambda2 {:.1e}, spectrum in {{-1,0,1}}, {secs:.1}s", l.lambda2));
            }
        }
    }
    o
}

fn criterion_ortho() -> Outcome {
    let mut o = Outcome::new();
    let mut tested = 0;
    let mut shapes = [false; 2];
    let mut worst: f64 = 0.0;
    for (p, n, s) in [(2, 2, 3), (3, 2, 2), (3, 2, 3), (2, 3, 2), (3, 3, 2)] {
        let pr = params(p, n, s);
        for i in 0..=n {
            for j in i + 1..=n {
                let r = match link_equivalence(&pr, i, j, Limits::default(), &opts(), EQ_TOL) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                if r.group_order > 4096 {
                    continue;
                }
                tested += 1;
                shapes[is_adjacent(n, i, j) as usize] = true;
                worst = worst.max(r.difference);
                o.pass &= r.holds(EQ_TOL, PROJ_TOL, NORM_TOL);
                if !r.holds(EQ_TOL, PROJ_TOL, NORM_TOL) {
                    o.detail.push(format!("FAILED ({p},{n},{s}) pair ({i},{j}): difference {:e}", r.difference));
                }
            }
        }
    }
    o.check(shapes[0] && shapes[1], format!("{tested} link groups with |H| <= 4096, both link shapes, max |eps - lambda2| = {worst:.1e}"));
    o
}

fn criterion_certificate(links: Option<(ElParams, Vec<LinkSpectrum>)>) -> Outcome {
    let mut o = Outcome::new();
    let (pr, links) = links.expect("q = 5 links from the spectra criterion");
    let cert = certify_local_expansion(&pr, links, None, None, &opts(), SPECTRAL_TOL);
    let b = cert.b;
    let formula = b / (1.0 - b);
    o.check(
        cert.status == CertificateStatus::Valid && cert.lambda == Some(formula),
        format!("q=5 n=2: b = {b:.12}, emitted lambda {:?} = b/(1-(n-1)b)", cert.lambda),
    );
    let exact = 1.0 / (5f64.sqrt() - 1.0);
    o.check((formula - exact).abs() <= 1e-9, format!("measured certificate {formula:.12} vs 1/(sqrt 5 - 1) = {exact:.12}"));
    let mut all = true;
    let mut vacuous = 0;
    for n in 2..=6usize {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27] {
            let c = symbolic_check(q, n);
            let expect_vacuous = (q as usize) <= (n - 1) * (n - 1);
            all &= c.identity_holds && c.premise_vacuous == expect_vacuous && c.matches_integer_criterion;
            vacuous += c.premise_vacuous as usize;
        }
    }
    o.check(all, format!("exact identity b/(1-(n-1)b) = 1/(sqrt q-(n-1)) at b = 1/sqrt q, {vacuous} vacuous cases flagged iff q <= (n-1)^2"));
    let t = Instant::now();
    let x = build_complex(&SubgroupGeometrySystem::new(&params(2, 2, 2), Limits::default(), AmbientPolicy::TableOnly).unwrap()).unwrap();
    let d = direct_mu_audit(&x.to_simplicial(), 2, 0, &opts()).unwrap();
    let faces: usize = d.rows.iter().map(|r| r.faces).sum();
    o.check(
        d.all_connected() && d.max_mu < 1.0,
        format!("(2,2,2) direct audit over {faces} faces of X(-1) and X(0): max mu {:.6}, {:.1}s", d.max_mu, t.elapsed().as_secs_f64()),
    );
    o
}

fn criterion_symmetry() -> Outcome {
    let mut o = Outcome::new();
    for n in [2usize, 3] {
        let pr = params(2, n, 2);
        let sys = SubgroupGeometrySystem::new(&pr, Limits::default(), AmbientPolicy::TableOnly).unwrap();
        let preserved = [AutDescriptor::rotation(n), AutDescriptor::reflection(n)].iter().all(|g| verify_preserves_system(g, &sys).is_ok());
        o.check(preserved, format!("n={n}: gamma_r, gamma_s preserve every K_tau elementwise"));
        let r = dihedral_audit(&sys).unwrap();
        o.check(r.holds() && r.image_order == 2 * (n + 1), format!("n={n}: psi image of order {} = 2(n+1), dihedral", r.image_order));
    }
    let sys = SubgroupGeometrySystem::new(&params(2, 2, 2), Limits::default(), AmbientPolicy::TableOnly).unwrap();
    let x = build_complex(&sys).unwrap();
    let act = SemidirectAction::dihedral(&x).unwrap();
    let r = transitivity_audit(&act, &[AutDescriptor::rotation(2), AutDescriptor::reflection(2)], 1000, 3);
    let orbits: Vec<usize> = (0..=2).map(|k| r.row(k).map_or(0, |row| row.orbits)).collect();
    o.check(orbits == [1, 1, 1] && r.g_orbits_top == 1, format!("(2,2,2) orbits on X(0), X(1), X(2): {orbits:?}"));
    o.check(!r.stabilizer.is_empty() && r.stabilizer.iter().all(|s| s.orbits == 1 && s.escapes == 0), "vertex stabilisers transitive on incident edges");
    o.check(r.holds(), "transitivity audit");
    let rows = commutator_audit(&params(2, 3, 2), 1 << 21, 4096).unwrap();
    let abelian: Vec<_> = rows.iter().filter(|r| r.abelian).map(|r| r.pair).collect();
    o.check(rows.iter().all(|r| r.matches()), format!("n=3 abelian link groups exactly at non-adjacent pairs {abelian:?}"));
    o
}

fn criterion_covering() -> Outcome {
    let mut o = Outcome::new();
    let pr = params(2, 2, 4);
    let r = quotient_check(&pr, 3, Limits::default(), 10_000, 17).unwrap();
    let orders: Vec<usize> = r.kernel.iter().map(|k| k.order).collect();
    o.check(r.kernel_trivial(), format!("s=4 -> s'=3: K_i meets the kernel trivially, exhaustive over |K_i| = {orders:?}"));
    o.check(r.links_isomorphic(), format!("{} link types isomorphic between s and s'", r.links.len()));
    o.check(
        r.face_samples == 10_000 && r.face_failures == 0 && r.star_failures == 0 && r.homomorphism_failures == 0,
        format!("{} sampled face relations preserved", r.face_samples),
    );
    o.check(r.is_covering(), "covering");
    let r = quotient_check(&pr, 2, Limits::default(), 1000, 17).unwrap();
    let w = r.kernel.iter().find_map(|k| k.witness.clone());
    o.check(!r.kernel_trivial() && w.is_some(), format!("s=4 -> s'=2: nontrivial kernel, witness {}", w.unwrap_or_default()));
    o
}

fn criterion_oracles() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=6 {
        for _ in 0..25 {
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i..n {
                    let v = rng.gen_range(-5..=5);
                    a[i][j] = v;
                    a[j][i] = v;
                }
            }
            let want = oracle::charpoly_eigenvalues(&a, 1e-13);
            let dense = DenseMatrix::from_rows(&a.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect::<Vec<_>>());
            for method in [EigenMethod::Jacobi, EigenMethod::Tridiagonal] {
                let got = eig_sym(&dense, &EigenOptions { method, ..opts() }).unwrap().values;
                worst = got.iter().zip(&want).map(|(g, w)| (g - w).abs()).fold(worst, f64::max);
            }
            count += 1;
        }
    }
    o.check(worst <= ORACLE_TOL, format!("eigensolver vs characteristic polynomial on {count} matrices up to 6x6: max error {worst:.1e}"));

    let mut configs = 0;
    let mut ok = true;
    for (p, k) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2)] {
        let field = Arc::new(FieldSpec::new(p, k, None).unwrap());
        for s in 1..=4 {
            let ring = TruncatedRing::new(field.clone(), s).unwrap();
            let naive = oracle::NaiveRing { p, k, poly: field.poly().to_vec(), s };
            for _ in 0..1000 {
                let a: Vec<u8> = (0..s).map(|_| rng.gen_range(0..field.q()) as u8).collect();
                let b: Vec<u8> = (0..s).map(|_| rng.gen_range(0..field.q()) as u8).collect();
                let (ea, eb) = (ring.element(&a).unwrap(), ring.element(&b).unwrap());
                let wide = |v: &[u8]| v.iter().map(|&c| c as u32).collect::<Vec<_>>();
                ok &= wide(&ring.mul(&ea, &eb).coeffs) == naive.mul(&wide(&a), &wide(&b));
                ok &= wide(&ring.add(&ea, &eb).coeffs) == naive.add(&wide(&a), &wide(&b));
            }
            configs += 1;
        }
    }
    o.check(ok, format!("ring arithmetic vs naive polynomials: 1000 random pairs on each of {configs} configurations"));

    let exe = env!("CARGO_BIN_EXE_cosetcx");
    let dir = tempfile::tempdir().unwrap();
    let run = |cmd: &str, sub: &str| {
        let out = dir.path().join(sub);
        let status = Command::new(exe).args([cmd, "-q", "--set", "direct_mu=false", "--out"]).arg(&out).status().unwrap();
        (status.code(), out)
    };
    let mut identical = true;
    let mut exits = Vec::new();
    for (cmd, files) in [("build", &["complex.json", "skeleton.dot", "group.cxg"][..]), ("certify", &["certificate.json"][..])] {
        let (c1, d1) = run(cmd, &format!("{cmd}1"));
        let (c2, d2) = run(cmd, &format!("{cmd}2"));
        exits.extend([c1, c2]);
        for f in files {
            identical &= std::fs::read(d1.join(f)).ok().is_some_and(|a| std::fs::read(d2.join(f)).ok() == Some(a));
        }
    }
    o.check(identical && exits.iter().all(|c| *c == Some(0)), "build and certify on (2,2,2) run twice in separate processes: byte-identical outputs");
    o
}

fn main() {
    let started = Instant::now();
    let mut keep = None;
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut Option<(ElParams, Vec<LinkSpectrum>)>) -> Outcome>)> = vec![
        ("axioms", Box::new(|_| criterion_axioms())),
        ("structure", Box::new(|_| criterion_structure())),
        ("link spectra", Box::new(criterion_spectra)),
        ("orthogonality equivalence", Box::new(|_| criterion_ortho())),
        ("expander certificate", Box::new(|k| criterion_certificate(k.take()))),
        ("symmetry", Box::new(|_| criterion_symmetry())),
        ("covering", Box::new(|_| criterion_covering())),
        ("oracles", Box::new(|_| criterion_oracles())),
    ];
    let mut failed = 0;
    for (no, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let o = f(&mut keep);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {verdict} ({:.1}s) {}", no + 1, t.elapsed().as_secs_f64(), o.detail.join("; "));
        failed += !o.pass as usize;
    }
    println!("acceptance: {} of 8 criteria passed in {:.0}s", 8 - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
