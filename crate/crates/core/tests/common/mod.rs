#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use witt_core::arith::{rat, rat_int, Poly, Rat, RatFun};
use witt_core::{GradedOp, VermaVec};

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(Poly::new)
}

/// Denominator `(ν + c_1)…(ν + c_k)` with every `c_i > 0`, so no pole at `n ≥ 0`.
pub fn safe_den(max_factors: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((1i64..=9, 1i64..=4), 0..=max_factors)
        .prop_map(|cs| cs.into_iter().fold(Poly::one(), |acc, (p, q)| &acc * &Poly::linear(rat(p, q))))
}

pub fn safe_ratfun() -> impl Strategy<Value = RatFun> {
    (poly(2), safe_den(2)).prop_map(|(n, d)| RatFun::new(n, d).unwrap())
}

pub fn nonzero_ratfun() -> impl Strategy<Value = RatFun> {
    safe_ratfun().prop_filter("nonzero", |f| !f.is_zero())
}

/// `z^a ∘ f(ξ) ∘ ∂^b`
fn term(a: i64, f: RatFun, b: i64) -> GradedOp {
    GradedOp::mul_z(a)
        .unwrap()
        .compose(&GradedOp::fun_xi(f).unwrap())
        .unwrap()
        .compose(&GradedOp::diff(b).unwrap())
        .unwrap()
}

/// Sums of one to three terms `z^a f(ξ) ∂^b` with `a, b ≤ 3`.
pub fn graded_op() -> impl Strategy<Value = GradedOp> {
    prop::collection::vec((0i64..=3, safe_ratfun(), 0i64..=3), 1..=3).prop_map(|terms| {
        terms.into_iter().fold(GradedOp::zero(), |acc, (a, f, b)| acc.add(&term(a, f, b)).unwrap())
    })
}

pub fn verma_vec() -> impl Strategy<Value = VermaVec> {
    prop::collection::vec(small_rat(), 0..=6).prop_map(VermaVec::new)
}

fn rng_rat(rng: &mut impl Rng) -> Rat {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

/// Seeded counterpart of [`graded_op`].
pub fn random_graded_op(rng: &mut impl Rng) -> GradedOp {
    let terms = rng.gen_range(1..=3);
    (0..terms).fold(GradedOp::zero(), |acc, _| {
        let num = Poly::new((0..rng.gen_range(1..=3)).map(|_| rng_rat(rng)).collect());
        let den = (0..rng.gen_range(0..=2)).fold(Poly::one(), |d, _| {
            &d * &Poly::linear(rat(rng.gen_range(1..=9), rng.gen_range(1..=4)))
        });
        let f = RatFun::new(num, den).unwrap();
        acc.add(&term(rng.gen_range(0..=3), f, rng.gen_range(0..=3))).unwrap()
    })
}

pub fn random_rat(rng: &mut impl Rng) -> Rat {
    let r = rng_rat(rng);
    if r == rat_int(0) {
        rat_int(1)
    } else {
        r
    }
}

use witt_core::composite::{Brackets, LieComposite, MatrixRep, Piece};
use witt_core::linalg::Matrix;

/// Matrix unit `E_{ij}` of size `m`.
pub fn unit(m: usize, i: usize, j: usize) -> Matrix {
    let mut e = Matrix::zeros(m, m);
    e.set(i, j, rat_int(1));
    e
}

/// `gl(2)` in the basis `E11, E12, E21, E22`.
pub fn gl2_basis() -> Vec<Matrix> {
    vec![unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0), unit(2, 1, 1)]
}

fn combo(basis: &[Matrix], coords: &[Rat]) -> Matrix {
    basis.iter().zip(coords).fold(Matrix::zeros(basis[0].rows(), basis[0].cols()), |acc, (m, c)| &acc + &m.scale(c))
}

fn flatten(m: &Matrix) -> Vec<Rat> {
    m.entries().to_vec()
}

/// Piece spanned by `vectors` (coordinates in `basis`), with the bracket
/// inherited from the matrix commutator. `None` if not closed.
pub fn matrix_piece(name: &str, basis: &[Matrix], vectors: &[Vec<Rat>]) -> Option<Piece> {
    let mats: Vec<Matrix> = vectors.iter().map(|v| combo(basis, v)).collect();
    let flat = Matrix::from_columns(&mats.iter().map(flatten).collect::<Vec<_>>()).unwrap();
    let k = vectors.len();
    let mut bracket: Brackets = vec![vec![None; k]; k];
    for a in 0..k {
        for b in 0..k {
            bracket[a][b] = Some(flat.solve(&flatten(&mats[a].commutator(&mats[b])))?);
        }
    }
    Some(Piece { name: name.into(), basis: Matrix::from_columns(vectors).unwrap(), bracket })
}

fn v(x: &[i64]) -> Vec<Rat> {
    x.iter().map(|&c| rat_int(c)).collect()
}

/// Subalgebras of `gl(2)` used as composite pieces.
pub fn gl2_pieces() -> Vec<Piece> {
    let b = gl2_basis();
    let specs: Vec<(&str, Vec<Vec<Rat>>)> = vec![
        ("upper", vec![v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])]),
        ("lower", vec![v(&[0, 0, 0, 1]), v(&[0, 0, 1, 0])]),
        ("borel", vec![v(&[1, 0, 0, 0]), v(&[0, 0, 0, 1]), v(&[0, 1, 0, 0])]),
        ("sl2", vec![v(&[1, 0, 0, -1]), v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0])]),
        ("cartan", vec![v(&[1, 0, 0, 0]), v(&[0, 0, 0, 1])]),
        ("center+e", vec![v(&[1, 0, 0, 1]), v(&[0, 1, 0, 0])]),
    ];
    specs.into_iter().map(|(n, vs)| matrix_piece(n, &b, &vs).expect("subalgebra")).collect()
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let m = a.rows() + b.rows();
    let mut out = Matrix::zeros(m, m);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out.set(a.rows() + i, a.rows() + j, b.get(i, j).clone());
        }
    }
    out
}

/// Representations of all of `gl(2)` with target dimension at most 5.
pub fn gl2_reps() -> Vec<MatrixRep> {
    let nat = gl2_basis();
    let dual: Vec<Matrix> = nat.iter().map(|m| -&m.transpose()).collect();
    let adj: Vec<Matrix> = nat
        .iter()
        .map(|x| {
            let cols: Vec<Vec<Rat>> = nat.iter().map(|y| flatten(&x.commutator(y))).collect();
            Matrix::from_columns(&cols).unwrap()
        })
        .collect();
    let zero1 = Matrix::zeros(1, 1);
    let trace: Vec<Matrix> = nat.iter().map(|m| Matrix::scalar(1, m.get(0, 0) + m.get(1, 1))).collect();
    let sum = |a: &[Matrix], b: &[Matrix]| a.iter().zip(b).map(|(x, y)| block_diag(x, y)).collect::<Vec<_>>();
    let reps = vec![
        nat.clone(),
        dual.clone(),
        adj.clone(),
        sum(&nat, &vec![zero1.clone(); 4]),
        sum(&nat, &dual),
        sum(&nat, &trace),
        sum(&adj, &trace),
        sum(&sum(&nat, &nat), &trace),
    ];
    reps.into_iter().map(|mats| MatrixRep::new(mats[0].rows(), mats).unwrap()).collect()
}

/// A random composite of two or three `gl(2)` subalgebras with a random
/// representation; about half are perturbed in one entry.
pub fn random_composite_rep(rng: &mut impl Rng) -> (LieComposite, MatrixRep) {
    let pieces = gl2_pieces();
    let count = rng.gen_range(2..=3);
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < count {
        let p = rng.gen_range(0..pieces.len());
        if !chosen.contains(&p) {
            chosen.push(p);
        }
    }
    let labels = vec!["E11".into(), "E12".into(), "E21".into(), "E22".into()];
    let c = LieComposite::new(labels, chosen.iter().map(|&i| pieces[i].clone()).collect(), None).unwrap();
    let reps = gl2_reps();
    let mut t = reps[rng.gen_range(0..reps.len())].clone();
    if rng.gen_bool(0.5) {
        let (l, i, j) = (rng.gen_range(0..4), rng.gen_range(0..t.dim), rng.gen_range(0..t.dim));
        let old = t.mats[l].get(i, j).clone();
        t.mats[l].set(i, j, old + random_rat(rng));
    }
    (c, t)
}
