mod oracle;

use std::sync::Arc;

use cosetcx::algebra::{FieldSpec, TruncatedRing};
use cosetcx::matgroup::{enumerate_group, ElParams, TypeSet};
use cosetcx::spectra::{eig_sym, DenseMatrix, EigenMethod, EigenOptions};
use oracle::{charpoly_eigenvalues, NaiveRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-6..=6);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    a
}

fn to_dense(a: &[Vec<i64>]) -> DenseMatrix {
    DenseMatrix::from_rows(&a.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect::<Vec<_>>())
}

fn check_against_charpoly(a: &[Vec<i64>]) {
    let want = charpoly_eigenvalues(a, 1e-13);
    for method in [EigenMethod::Jacobi, EigenMethod::Tridiagonal] {
        let opts = EigenOptions { method, ..EigenOptions::default() };
        let got = eig_sym(&to_dense(a), &opts).unwrap().values;
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-10, "{method:?} on {a:?}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn eigensolver_matches_charpoly_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=6 {
        for _ in 0..40 {
            check_against_charpoly(&random_symmetric(&mut rng, n));
        }
    }
}

#[test]
fn eigensolver_matches_charpoly_repeated_roots() {
    let ones = vec![vec![1i64; 6]; 6];
    // K_{3,3}
    let k33: Vec<Vec<i64>> = (0..6).map(|i| (0..6).map(|j| ((i < 3) != (j < 3)) as i64).collect()).collect();
    // 6-cycle
    let c6: Vec<Vec<i64>> = (0..6).map(|i| (0..6).map(|j| ((i + 1) % 6 == j || (j + 1) % 6 == i) as i64).collect()).collect();
    let zero = vec![vec![0i64; 4]; 4];
    for a in [ones, k33, c6, zero] {
        check_against_charpoly(&a);
    }
}

fn naive(field: &FieldSpec, s: usize) -> NaiveRing {
    NaiveRing { p: field.p(), k: field.k(), poly: field.poly().to_vec(), s }
}

#[test]
fn ring_matches_naive_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fields: [(u32, u32, Option<&[u32]>); 11] = [
        (2, 1, None),
        (3, 1, None),
        (5, 1, None),
        (7, 1, None),
        (2, 2, None),
        (2, 3, None),
        (3, 2, None),
        (2, 4, Some(&[1, 1, 0, 0, 1])),
        (5, 2, Some(&[2, 0, 1])),
        (2, 5, Some(&[1, 0, 1, 0, 0, 1])),
        (3, 3, Some(&[1, 2, 0, 1])),
    ];
    for (p, k, poly) in fields {
        let field = Arc::new(FieldSpec::new(p, k, poly).unwrap());
        for s in 1..=4 {
            let ring = TruncatedRing::new(field.clone(), s).unwrap();
            let oracle = naive(&field, s);
            let q = field.q();
            for _ in 0..1000 {
                let a: Vec<u32> = (0..s).map(|_| rng.gen_range(0..q)).collect();
                let b: Vec<u32> = (0..s).map(|_| rng.gen_range(0..q)).collect();
                let ea = ring.element(&a.iter().map(|&c| c as u8).collect::<Vec<_>>()).unwrap();
                let eb = ring.element(&b.iter().map(|&c| c as u8).collect::<Vec<_>>()).unwrap();
                let sum: Vec<u32> = ring.add(&ea, &eb).coeffs.iter().map(|&c| c as u32).collect();
                let prod: Vec<u32> = ring.mul(&ea, &eb).coeffs.iter().map(|&c| c as u32).collect();
                assert_eq!(sum, oracle.add(&a, &b), "q={q} s={s}");
                assert_eq!(prod, oracle.mul(&a, &b), "q={q} s={s} a={a:?} b={b:?}");
            }
        }
    }
}

#[test]
fn explicit_field_polynomial_is_respected() {
    // x^2 + x + 2 over F_3 differs from the default choice
    let field = FieldSpec::new(3, 2, Some(&[2, 1, 1])).unwrap();
    let oracle = naive(&field, 1);
    for a in 0..9 {
        for b in 0..9 {
            assert_eq!(field.mul(a as u8, b as u8) as u32, oracle.field_mul(a, b));
        }
    }
}

fn elementary_naive(params: &ElParams, oracle: &NaiveRing, tau: TypeSet) -> Vec<Vec<Vec<Vec<u32>>>> {
    let gens = if tau.is_empty() { params.el_generators() } else { params.k_generators(tau) };
    gens.iter()
        .map(|e| oracle.elementary(params.dim(), e.i, e.j, &e.r.coeffs.iter().map(|&c| c as u32).collect::<Vec<_>>()))
        .collect()
}

#[test]
fn closures_match_brute_force() {
    let cases = [(2, 2, 1), (3, 2, 1), (2, 2, 2), (2, 3, 1)];
    for (p, n, s) in cases {
        let params = ElParams::from_prime(p, n, s).unwrap();
        let oracle = naive(params.field(), s);
        let full = params.index_set();
        let mut types = vec![TypeSet::EMPTY];
        types.extend(full.subsets().into_iter().filter(|t| t.len() == 1 || t.len() == 2));
        for tau in types {
            let gens = if tau.is_empty() { params.el_generators() } else { params.k_generators(tau) };
            let table = enumerate_group(params.space(), &gens, 1 << 20).unwrap();
            let brute = oracle.closure_order(&elementary_naive(&params, &oracle, tau), 1 << 20).unwrap();
            assert_eq!(table.len(), brute, "(p,n,s)=({p},{n},{s}) tau={tau:?}");
        }
    }
}

#[test]
fn known_group_orders() {
    // SL_3(F_2), SL_3(F_3), and the kernel of reduction for s = 2
    for (p, n, s, order) in [(2, 2, 1, 168), (3, 2, 1, 5616), (2, 2, 2, 168 * 256)] {
        let params = ElParams::from_prime(p, n, s).unwrap();
        assert_eq!(enumerate_group(params.space(), &params.el_generators(), 1 << 20).unwrap().len(), order);
    }
}
