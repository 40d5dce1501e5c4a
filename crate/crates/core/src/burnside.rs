//! Irreducibility via the Burnside criterion: a set of `m×m` matrices acts
//! absolutely irreducibly iff the unital algebra it generates is all of
//! `M_m`.
//!
//! The generated algebra is the span closure of `{1}` under left
//! multiplication by the generators. For large `m` the closure first runs
//! over `F_p` with `p = 2^61 - 1`: the reductions generate a subalgebra of
//! the reduction of the `Z_(p)`-order, so full rank mod `p` certifies full
//! rank over `Q`. Anything short of full rank falls back to exact rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rat;
use crate::linalg::Matrix;

const P: u64 = (1 << 61) - 1;
const MODULAR_FROM: usize = 7;

trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn sub_mul(&mut self, f: &Self, x: &Self);
    fn inv(&self) -> Self;
}

impl Scalar for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_mul(&mut self, f: &Self, x: &Self) {
        *self -= f * x;
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Fp(u64);

fn reduce(x: u128) -> u64 {
    let lo = (x as u64) & P;
    let hi = (x >> 61) as u64;
    let s = lo + (hi & P) + (hi >> 61);
    let s = (s & P) + (s >> 61);
    if s >= P {
        s - P
    } else {
        s
    }
}

impl Fp {
    fn pow(self, mut e: u64) -> Fp {
        let (mut b, mut r) = (self, Fp(1));
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    fn from_big(x: &BigInt) -> Fp {
        let r = (x.abs() % BigInt::from(P)).to_u64().unwrap();
        if x.is_negative() && r != 0 {
            Fp(P - r)
        } else {
            Fp(r)
        }
    }

    fn from_rat(x: &Rat) -> Option<Fp> {
        let d = Fp::from_big(x.denom());
        (d.0 != 0).then(|| Fp::from_big(x.numer()).mul(&d.inv()))
    }
}

impl Scalar for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(reduce(self.0 as u128 * o.0 as u128))
    }
    fn sub_mul(&mut self, f: &Self, x: &Self) {
        let t = f.mul(x).0;
        self.0 = if self.0 >= t { self.0 - t } else { self.0 + P - t };
    }
    fn inv(&self) -> Self {
        self.pow(P - 2)
    }
}

/// Row-echelon basis of a growing subspace of `F^len`.
struct Echelon<F> {
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Scalar> Echelon<F> {
    /// Reduces `v` and adds it when independent; returns the reduced vector.
    fn insert(&mut self, mut v: Vec<F>) -> Option<Vec<F>> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v[*p..].iter_mut().zip(&row[*p..]) {
                if !r.is_zero() {
                    x.sub_mul(&f, r);
                }
            }
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = v[p].inv();
        for x in &mut v[p..] {
            *x = x.mul(&inv);
        }
        self.rows.push((p, v.clone()));
        Some(v)
    }
}

fn mat_mul<F: Scalar>(a: &[F], b: &[F], m: usize) -> Vec<F> {
    let mut out = vec![F::zero(); m * m];
    for i in 0..m {
        for k in 0..m {
            let aik = &a[i * m + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                let bkj = &b[k * m + j];
                if !bkj.is_zero() {
                    out[i * m + j] = out[i * m + j].add(&aik.mul(bkj));
                }
            }
        }
    }
    out
}

/// Dimension of the unital algebra generated by `gens`, stopping early at `m²`.
fn algebra_dim<F: Scalar>(gens: &[Vec<F>], m: usize) -> usize {
    let full = m * m;
    let mut ident = vec![F::zero(); full];
    for i in 0..m {
        ident[i * m + i] = F::one();
    }
    let mut basis = Echelon { rows: Vec::new() };
    let mut queue = vec![basis.insert(ident).expect("identity is nonzero")];
    while let Some(x) = queue.pop() {
        for g in gens {
            if let Some(y) = basis.insert(mat_mul(g, &x, m)) {
                if basis.rows.len() == full {
                    return full;
                }
                queue.push(y);
            }
        }
    }
    basis.rows.len()
}

/// Dimension over `Q` of the unital algebra generated by `ops`.
pub fn generated_algebra_dim(ops: &[Matrix]) -> usize {
    let m = ops.first().map_or(0, Matrix::rows);
    if m == 0 {
        return 0;
    }
    let gens: Vec<Vec<Rat>> = ops.iter().map(|o| o.entries().to_vec()).collect();
    algebra_dim(&gens, m)
}

pub fn burnside_irreducible(ops: &[Matrix]) -> bool {
    let Some(first) = ops.first() else {
        return false;
    };
    let m = first.rows();
    assert!(ops.iter().all(|o| o.rows() == m && o.cols() == m), "generators must be square of equal size");
    if m == 1 {
        return true;
    }
    if m >= MODULAR_FROM {
        let modular: Option<Vec<Vec<Fp>>> =
            ops.iter().map(|o| o.entries().iter().map(Fp::from_rat).collect()).collect();
        if let Some(gens) = modular {
            if algebra_dim(&gens, m) == m * m {
                return true;
            }
        }
    }
    generated_algebra_dim(ops) == m * m
}
