use std::sync::Arc;

use cosetcx::algebra::{FieldSpec, MatrixSpace, RingMatrix, TruncatedRing};
use cosetcx::geometry::{from_dot, to_dot, ComplexExport, SimplicialComplex};
use cosetcx::matgroup::{ElParams, TypeSet};
use cosetcx::spectra::{second_eigenvalue, EigenOptions, QuadSurd, WeightedGraph};
use cosetcx::symmetry::{apply_aut, AutDescriptor};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn ring(q: u32, s: usize) -> TruncatedRing {
    let field = match q {
        4 => FieldSpec::new(2, 2, None),
        9 => FieldSpec::new(3, 2, None),
        p => FieldSpec::prime(p),
    };
    TruncatedRing::new(Arc::new(field.unwrap()), s).unwrap()
}

fn coeffs(q: u32, s: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..q as u8, s)
}

fn ring_case() -> impl Strategy<Value = (u32, usize, Vec<u8>, Vec<u8>, Vec<u8>)> {
    (prop::sample::select(vec![2u32, 3, 4, 5, 9]), 1usize..=4).prop_flat_map(|(q, s)| (Just(q), Just(s), coeffs(q, s), coeffs(q, s), coeffs(q, s)))
}

/// Product of elementary matrices picked by `word` from the generators of
/// EL_3(F_q[t]/(t^2)).
fn word_matrix(params: &ElParams, word: &[usize]) -> RingMatrix {
    let gens = params.el_generators();
    let space = params.space();
    word.iter().fold(space.identity(), |m, &w| space.mul(&m, &params.elementary(&gens[w % gens.len()])))
}

fn params_for(q: u32) -> ElParams {
    ElParams::from_prime(q, 2, 2).unwrap()
}

fn descriptor(n: usize, rot: usize, flip: bool) -> AutDescriptor {
    let mut d = AutDescriptor::identity(n);
    for _ in 0..rot {
        d = AutDescriptor::rotation(n).compose(&d);
    }
    if flip {
        d = AutDescriptor::reflection(n).compose(&d);
    }
    d
}

fn surd(a: (i64, i64), b: (i64, i64), d: u64) -> QuadSurd {
    let r = |(n, m): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(m));
    QuadSurd::new(r(a), r(b), d)
}

fn tops(nv: u32) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::btree_set(0..nv, 2..=3).prop_map(|s| s.into_iter().collect()), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_is_a_commutative_ring((q, s, a, b, c) in ring_case()) {
        let r = ring(q, s);
        let (a, b, c) = (r.element(&a).unwrap(), r.element(&b).unwrap(), r.element(&c).unwrap());
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.sub(&r.add(&a, &b), &b), a.clone());
        prop_assert_eq!(r.is_unit(&a), a.coeffs[0] != 0);
        if let Some(inv) = r.inv(&a) {
            prop_assert_eq!(r.mul(&a, &inv), r.one());
        }
    }

    #[test]
    fn matrix_code_round_trip_and_inverse(q in prop::sample::select(vec![2u32, 3]), word in prop::collection::vec(0usize..64, 0..24)) {
        let params = params_for(q);
        let space: &MatrixSpace = params.space();
        let m = word_matrix(&params, &word);
        prop_assert_eq!(space.decode(space.encode(&m)), m.clone());
        let inv = space.inv(&m).unwrap();
        prop_assert!(space.is_identity(&space.mul(&m, &inv)));
        prop_assert!(space.is_identity(&space.mul(&inv, &m)));
        prop_assert_eq!(space.det(&m), params.ring().one());
        prop_assert_eq!(space.transpose(&space.transpose(&m)), m);
    }

    #[test]
    fn automorphisms_are_multiplicative_and_compose(
        w1 in prop::collection::vec(0usize..64, 0..12),
        w2 in prop::collection::vec(0usize..64, 0..12),
        r1 in 0usize..3, f1: bool, r2 in 0usize..3, f2: bool,
    ) {
        let params = params_for(3);
        let space = params.space();
        let (a, b) = (word_matrix(&params, &w1), word_matrix(&params, &w2));
        let (d1, d2) = (descriptor(2, r1, f1), descriptor(2, r2, f2));
        let img = |d: &AutDescriptor, m: &RingMatrix| apply_aut(d, space, m).unwrap();
        prop_assert_eq!(img(&d1, &space.mul(&a, &b)), space.mul(&img(&d1, &a), &img(&d1, &b)));
        prop_assert_eq!(img(&d1.compose(&d2), &a), img(&d1, &img(&d2, &a)));
        prop_assert_eq!(img(&d1.inverse(), &img(&d1, &a)), a);
    }

    #[test]
    fn walk_spectrum_is_a_probability_spectrum(edges in prop::collection::vec((0u32..7, 0u32..7, 1u64..5), 1..30)) {
        let mut g = WeightedGraph::new(vec![0; 8]);
        // a spanning path keeps the graph connected
        for v in 0..7 {
            g.add_weight(v, v + 1, 1);
        }
        for (u, v, w) in edges {
            if u != v {
                g.add_weight(u, v, w);
            }
        }
        let r = second_eigenvalue(&g, &EigenOptions::default()).unwrap();
        prop_assert!((r.largest() - 1.0).abs() < 1e-9);
        prop_assert!(r.eigenvalues.iter().all(|&v| (-1.0 - 1e-9..=1.0 + 1e-9).contains(&v)));
        prop_assert!(r.eigenvalues.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        prop_assert_eq!(r.multiplicities.iter().map(|m| m.1).sum::<usize>(), 8);
        prop_assert!(r.lambda2 <= 1.0 - 1e-9);
    }

    #[test]
    fn surds_match_floating_point(a in (-20i64..20, 1i64..9), b in (-20i64..20, 1i64..9), c in (-20i64..20, 1i64..9), e in (-20i64..20, 1i64..9), d in 2u64..12) {
        let (x, y) = (surd(a, b, d), surd(c, e, d));
        let tol = 1e-9 * (1.0 + x.to_f64().abs() + y.to_f64().abs()).powi(2);
        prop_assert!((x.add(&y).to_f64() - (x.to_f64() + y.to_f64())).abs() < tol);
        prop_assert!((x.mul(&y).to_f64() - x.to_f64() * y.to_f64()).abs() < tol);
        if let Some(i) = x.inv() {
            prop_assert!(x.mul(&i) == QuadSurd::integer(1, d));
        } else {
            prop_assert!(x.is_zero());
        }
        prop_assert_eq!(x.sub(&y).signum(), x.cmp_to(&y) as i32);
    }

    #[test]
    fn typeset_laws(a in 0u32..64, b in 0u32..64) {
        let (a, b) = (TypeSet(a), TypeSet(b));
        prop_assert!(a.intersect(b).is_subset(a) && a.is_subset(a.union(b)));
        prop_assert_eq!(a.minus(b).union(a.intersect(b)), a);
        prop_assert_eq!(a.subsets().len(), 1usize << a.len());
        prop_assert!(a.subsets().iter().all(|s| s.is_subset(a)));
    }

    #[test]
    fn exports_are_idempotent(types in prop::collection::vec(0u8..3, 8), tops in tops(8)) {
        let labels: Vec<String> = (0..8).map(|v| format!("x{v}")).collect();
        let x = SimplicialComplex::closure_of(types, labels, &tops);
        let params = params_for(2).summary();
        let json = ComplexExport::from_simplicial(params.clone(), &x).to_json();
        let back = ComplexExport::from_json(&json).unwrap();
        prop_assert_eq!(&back.to_simplicial(), &x);
        prop_assert_eq!(ComplexExport::from_simplicial(params, &back.to_simplicial()).to_json(), json);
        let dot = to_dot(&x);
        prop_assert_eq!(to_dot(&from_dot(&dot).unwrap()), dot);
    }
}
