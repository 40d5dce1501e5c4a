mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use witt_core::arith::{rat_int, Rat};
use witt_core::composite::{check_representation, composite_check, tensor_rep, truncated_witt_composite, MatrixRep};
use witt_core::linalg::Matrix;
use witt_core::octahedron::{model_rep, octahedron, verify_octahedron_model, VERTICES};
use witt_core::overlay::{build_lc, is_overlay_rep, Decomposition};
use witt_core::witt::{resolved_current_rule, WeightParam};
use witt_core::burnside_irreducible;

/// Span of `{A v : A in the generated algebra}` by repeated application.
fn orbit_dim(gens: &[Matrix], v: Vec<Rat>) -> usize {
    let mut span: Vec<Vec<Rat>> = vec![v];
    let mut frontier = span.clone();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.mul_vec(&x);
            let mut cols = span.clone();
            cols.push(y.clone());
            if Matrix::from_columns(&cols).unwrap().rank() > span.len() {
                span.push(y.clone());
                frontier.push(y);
            }
        }
    }
    Matrix::from_columns(&span).unwrap().rank()
}

/// With a generator diagonal with distinct entries, every invariant
/// subspace contains a coordinate vector, so irreducibility means every
/// coordinate orbit is everything.
fn eigenvector_orbit_oracle(gens: &[Matrix], m: usize) -> bool {
    (0..m).all(|i| {
        let mut e = vec![Rat::zero(); m];
        e[i] = rat_int(1);
        orbit_dim(gens, e) == m
    })
}

fn sparse_matrix(m: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::sample::select(vec![0i64, 0, 0, 1, -1, 2]), m * m).prop_map(move |xs| {
        Matrix::from_rows(xs.chunks(m).map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()).unwrap()
    })
}

fn instance() -> impl Strategy<Value = (usize, Vec<Matrix>)> {
    (1usize..=4).prop_flat_map(|m| {
        prop::collection::vec(sparse_matrix(m), 1..=2).prop_map(move |mut gens| {
            let mut d = Matrix::zeros(m, m);
            for i in 0..m {
                d.set(i, i, rat_int(3 * i as i64 - 2));
            }
            gens.push(d);
            (m, gens)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn burnside_matches_invariant_subspace_search((m, gens) in instance()) {
        prop_assert_eq!(burnside_irreducible(&gens), eigenvector_orbit_oracle(&gens, m));
    }

    #[test]
    fn tensor_bracket_is_leibniz(a in sparse_matrix(2), b in sparse_matrix(2), c in sparse_matrix(3), d in sparse_matrix(3)) {
        let t1 = MatrixRep::new(2, vec![a.clone(), b.clone()]).unwrap();
        let t2 = MatrixRep::new(3, vec![c.clone(), d.clone()]).unwrap();
        let t = tensor_rep(&t1, &t2).unwrap();
        let lhs = t.mats[0].commutator(&t.mats[1]);
        let rhs = &a.commutator(&b).kron(&Matrix::identity(3)) + &Matrix::identity(2).kron(&c.commutator(&d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lambda_shift_moves_one_coordinate(v in 0usize..6, p in -20i64..20, q in 1i64..9) {
        let mu = witt_core::arith::rat(p, q);
        let mut t = model_rep();
        t.mats[v] = &t.mats[v] + &Matrix::scalar(4, mu.clone());
        let l = verify_octahedron_model(&t).unwrap().lambdas.unwrap();
        for (i, x) in l.iter().enumerate() {
            prop_assert_eq!(x, &if i == v { mu.clone() } else { Rat::zero() });
        }
    }
}

#[test]
fn refinement_keeps_violations_local() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let (c, t) = random_composite_rep(&mut rng);
        let full = check_representation(&c, &t).unwrap();
        for keep in [vec![0], vec![1], vec![0, 1]] {
            let sub = check_representation(&c.restrict_pieces(&keep), &t).unwrap();
            assert!(sub.violations.iter().all(|v| full.violations.contains(v)));
            if full.passes() {
                assert!(sub.passes());
            }
        }
    }
}

#[test]
fn tensor_of_passing_reps_passes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let reps = gl2_reps();
    for _ in 0..10 {
        let (c, _) = random_composite_rep(&mut rng);
        let (a, b) = (&reps[rand::Rng::gen_range(&mut rng, 0..reps.len())], &reps[1]);
        if a.dim * b.dim > 12 {
            continue;
        }
        assert!(check_representation(&c, a).unwrap().passes());
        assert!(check_representation(&c, &tensor_rep(a, b).unwrap()).unwrap().passes());
    }
    let o = octahedron();
    let m = model_rep();
    assert!(check_representation(&o, &tensor_rep(&m, &m).unwrap()).unwrap().passes());
    let z = MatrixRep::zero(6, 2);
    let tz = tensor_rep(&m, &z).unwrap();
    assert_eq!(tz.mats[0], m.mats[0].kron(&Matrix::identity(2)));
}

#[test]
fn constructed_composites_check_out() {
    let f = composite_check(&octahedron());
    assert!(f.compatible && f.dense && f.connected);
    let rule = resolved_current_rule(&WeightParam::new(rat_int(1)).unwrap()).unwrap();
    for k in 2..=6 {
        for ext in [None, Some(&rule)] {
            let f = composite_check(&truncated_witt_composite(k, ext).unwrap());
            assert!(f.compatible && f.dense && f.connected, "K = {k}");
        }
    }
}

#[test]
fn trivial_overlay_agrees_with_composite_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (mut passed, mut failed) = (0, 0);
    for _ in 0..60 {
        let (c, t) = random_composite_rep(&mut rng);
        let lc = build_lc(&Decomposition::trivial(t.dim)).unwrap();
        let plain = check_representation(&c, &t).unwrap().passes();
        let overlay = is_overlay_rep(&c, &t, &lc, &vec![0; c.pieces.len()]).unwrap().passes();
        assert_eq!(plain, overlay);
        if plain {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    assert!(passed > 0 && failed > 0);
}

#[test]
fn octahedron_vertex_labels() {
    assert_eq!(octahedron().labels, VERTICES.iter().map(|s| s.to_string()).collect::<Vec<_>>());
}
