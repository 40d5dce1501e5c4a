//! Graded shift operators on `C[z]`.
//!
//! An operator is a finite sum of components `z^n ↦ c_d(n) z^(n+d)`. Each
//! coefficient `c_d` is a rational function of the degree `ν` plus a finite
//! table of exact values at small degrees. The table is needed because
//! composition can cancel a factor that vanishes at a low degree: at
//! `h = 1` the product `L_{-2}` after `e_2` is `(n-1)(n+1)` for `n ≥ 1` but
//! `0` at `n = 0`, which no single rational function reproduces. With the
//! table kept minimal (only degrees where the rational function has a pole
//! or gives the wrong value) the representation is canonical, so operator
//! equality is structural.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{rat_int, Poly, Rat, RatFun};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Coefficient of one shift component.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coefficient {
    rat: RatFun,
    boundary: BTreeMap<u64, Rat>,
}

impl Coefficient {
    pub fn rational(&self) -> &RatFun {
        &self.rat
    }

    /// Degrees where the exact value differs from (or is not given by) the
    /// rational function.
    pub fn boundary(&self) -> &BTreeMap<u64, Rat> {
        &self.boundary
    }

    pub fn eval(&self, n: u64) -> Rat {
        match self.boundary.get(&n) {
            Some(v) => v.clone(),
            None => self
                .rat
                .eval(&Rat::from_integer(n.into()))
                .expect("well-formed coefficient evaluated at a pole"),
        }
    }

    fn boundary_end(&self) -> i64 {
        self.boundary.keys().next_back().map_or(0, |&k| k as i64 + 1)
    }

    /// Canonicalizes and checks well-formedness for shift `shift`.
    /// Returns `None` for the zero coefficient.
    fn normalize(
        rat: RatFun,
        mut boundary: BTreeMap<u64, Rat>,
        shift: i64,
    ) -> Result<Option<Coefficient>> {
        let forbidden = (-shift).max(0) as u64;
        for n in 0..forbidden {
            let v = match boundary.get(&n) {
                Some(v) => v.clone(),
                None => rat
                    .eval(&Rat::from_integer(n.into()))
                    .map_err(|_| Error::PoleAtDegree { shift, degree: n })?,
            };
            if !v.is_zero() {
                return Err(Error::RangeViolation { shift, degree: n });
            }
        }
        for p in rat.nonneg_integer_poles() {
            if !boundary.contains_key(&p) {
                return Err(Error::PoleAtDegree { shift, degree: p });
            }
        }
        boundary.retain(|&n, v| rat.eval(&Rat::from_integer(n.into())).ok().as_ref() != Some(v));
        if rat.is_zero() && boundary.is_empty() {
            return Ok(None);
        }
        Ok(Some(Coefficient { rat, boundary }))
    }

    fn add(&self, other: &Coefficient, shift: i64) -> Result<Option<Coefficient>> {
        let keys: Vec<u64> = self.boundary.keys().chain(other.boundary.keys()).copied().collect();
        let boundary = keys.into_iter().map(|n| (n, self.eval(n) + other.eval(n))).collect();
        Coefficient::normalize(self.rat.add(&other.rat), boundary, shift)
    }

    fn scale(&self, c: &Rat) -> Coefficient {
        Coefficient {
            rat: self.rat.scale(c),
            boundary: self.boundary.iter().map(|(&n, v)| (n, v * c)).collect(),
        }
    }

    /// Coefficient of `outer ∘ inner` where `inner` has shift `d_in`:
    /// `c_in(ν)·c_out(ν + d_in)`, and `0` below degree `-d_in`.
    fn compose(
        outer: &Coefficient,
        d_out: i64,
        inner: &Coefficient,
        d_in: i64,
    ) -> Result<Option<Coefficient>> {
        let rat = inner.rat.mul(&outer.rat.shift(&rat_int(d_in)));
        let end = [0, -d_in, inner.boundary_end(), outer.boundary_end() - d_in]
            .into_iter()
            .max()
            .unwrap();
        let boundary = (0..end)
            .map(|n| {
                let v = if n < -d_in {
                    Rat::zero()
                } else {
                    inner.eval(n as u64) * outer.eval((n + d_in) as u64)
                };
                (n as u64, v)
            })
            .collect();
        Coefficient::normalize(rat, boundary, d_out + d_in)
    }
}

/// A polynomial-preserving graded operator on `C[z]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GradedOp {
    components: BTreeMap<i64, Coefficient>,
}

/// Generators of the operator calculus.
#[derive(Clone, Debug)]
pub enum BasicOp {
    /// multiplication by `z^k`
    MulZ(i64),
    /// `∂_z^k`
    Diff(i64),
    /// `f(ξ)` with `ξ = z∂_z`
    FunXi(RatFun),
}

#[derive(Clone, Debug)]
pub enum Combine {
    Add,
    Sub,
    Scale(Rat),
    Compose,
}

pub fn basic_op(kind: BasicOp) -> Result<GradedOp> {
    match kind {
        BasicOp::MulZ(k) => GradedOp::mul_z(k),
        BasicOp::Diff(k) => GradedOp::diff(k),
        BasicOp::FunXi(f) => GradedOp::fun_xi(f),
    }
}

/// `Scale` ignores `b`.
pub fn op_combine(a: &GradedOp, b: &GradedOp, op: Combine) -> Result<GradedOp> {
    match op {
        Combine::Add => a.add(b),
        Combine::Sub => a.sub(b),
        Combine::Scale(c) => Ok(a.scale(&c)),
        Combine::Compose => a.compose(b),
    }
}

pub fn commutator(a: &GradedOp, b: &GradedOp) -> Result<GradedOp> {
    a.commutator(b)
}

pub fn op_equal(a: &GradedOp, b: &GradedOp) -> bool {
    a == b
}

pub fn apply(a: &GradedOp, v: &VermaVec) -> VermaVec {
    a.apply(v)
}

pub fn truncate_to_matrix(a: &GradedOp, n: usize) -> Matrix {
    a.truncate(n)
}

impl GradedOp {
    pub fn zero() -> Self {
        GradedOp::default()
    }

    pub fn identity() -> Self {
        GradedOp::single(0, RatFun::one()).unwrap()
    }

    /// Single component with a purely rational coefficient; checked.
    pub fn single(shift: i64, coeff: RatFun) -> Result<Self> {
        GradedOp::with_boundary(shift, coeff, BTreeMap::new())
    }

    /// Single component with explicit low-degree values; checked.
    pub fn with_boundary(shift: i64, coeff: RatFun, boundary: BTreeMap<u64, Rat>) -> Result<Self> {
        let mut components = BTreeMap::new();
        if let Some(c) = Coefficient::normalize(coeff, boundary, shift)? {
            components.insert(shift, c);
        }
        Ok(GradedOp { components })
    }

    pub fn mul_z(k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::NegativeOrder(k));
        }
        GradedOp::single(k, RatFun::one())
    }

    pub fn diff(k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::NegativeOrder(k));
        }
        GradedOp::single(-k, RatFun::from_poly(Poly::falling_factorial(k as u32)))
    }

    pub fn fun_xi(f: RatFun) -> Result<Self> {
        GradedOp::single(0, f)
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &Coefficient)> {
        self.components.iter().map(|(&d, c)| (d, c))
    }

    pub fn component(&self, shift: i64) -> Option<&Coefficient> {
        self.components.get(&shift)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn max_shift(&self) -> Option<i64> {
        self.components.keys().next_back().copied()
    }

    pub fn min_shift(&self) -> Option<i64> {
        self.components.keys().next().copied()
    }

    /// Largest upward shift, `0` if the operator never raises degree.
    pub fn raise(&self) -> usize {
        self.max_shift().unwrap_or(0).max(0) as usize
    }

    /// `c_d(n)` (zero for an absent shift).
    pub fn coefficient_at(&self, shift: i64, n: u64) -> Rat {
        self.components.get(&shift).map_or_else(Rat::zero, |c| c.eval(n))
    }

    pub fn neg(&self) -> GradedOp {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> GradedOp {
        if c.is_zero() {
            return GradedOp::zero();
        }
        GradedOp {
            components: self.components.iter().map(|(&d, k)| (d, k.scale(c))).collect(),
        }
    }

    pub fn add(&self, other: &GradedOp) -> Result<GradedOp> {
        let mut out = self.components.clone();
        for (&d, c) in &other.components {
            match out.remove(&d) {
                None => {
                    out.insert(d, c.clone());
                }
                Some(mine) => {
                    if let Some(sum) = mine.add(c, d)? {
                        out.insert(d, sum);
                    }
                }
            }
        }
        Ok(GradedOp { components: out })
    }

    pub fn sub(&self, other: &GradedOp) -> Result<GradedOp> {
        self.add(&other.neg())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GradedOp) -> Result<GradedOp> {
        let mut acc = GradedOp::zero();
        for (&d_in, inner) in &other.components {
            for (&d_out, outer) in &self.components {
                if let Some(c) = Coefficient::compose(outer, d_out, inner, d_in)? {
                    let term = GradedOp { components: BTreeMap::from([(d_out + d_in, c)]) };
                    acc = acc.add(&term)?;
                }
            }
        }
        Ok(acc)
    }

    pub fn commutator(&self, other: &GradedOp) -> Result<GradedOp> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn apply(&self, v: &VermaVec) -> VermaVec {
        let mut out: BTreeMap<i64, Rat> = BTreeMap::new();
        for (n, a) in v.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (&d, c) in &self.components {
                let target = n as i64 + d;
                if target < 0 {
                    continue;
                }
                let x = c.eval(n as u64) * a;
                *out.entry(target).or_insert_with(Rat::zero) += x;
            }
        }
        let len = out.keys().next_back().map_or(0, |&k| k as usize + 1);
        let mut coeffs = vec![Rat::zero(); len];
        for (k, x) in out {
            coeffs[k as usize] = x;
        }
        VermaVec::new(coeffs)
    }

    /// Matrix on `z^0..z^N`; output degrees above `N` are discarded, so only
    /// columns `n` with `n + raise ≤ N` are exact.
    pub fn truncate(&self, n_max: usize) -> Matrix {
        let dim = n_max + 1;
        let mut m = Matrix::zeros(dim, dim);
        for (&d, c) in &self.components {
            for n in 0..dim {
                let row = n as i64 + d;
                if (0..dim as i64).contains(&row) {
                    m.set(row as usize, n, c.eval(n as u64));
                }
            }
        }
        m
    }

    /// One line per shift, `shift d: (num)/(den)`, with low-degree
    /// exceptions appended as `[n=k: v, …]`.
    pub fn dump(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.components
            .iter()
            .map(|(d, c)| {
                let mut line = format!("shift {d}: {}", c.rat);
                if !c.boundary.is_empty() {
                    let ex: Vec<String> =
                        c.boundary.iter().map(|(n, v)| format!("n={n}: {v}")).collect();
                    line.push_str(&format!(" [{}]", ex.join(", ")));
                }
                line
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for GradedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Element of the Verma module realized on `C[z]`; `coeffs[n]` multiplies `z^n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct VermaVec {
    coeffs: Vec<Rat>,
}

impl VermaVec {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        VermaVec { coeffs }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        VermaVec { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn sub(&self, other: &VermaVec) -> VermaVec {
        let len = self.coeffs.len().max(other.coeffs.len());
        VermaVec::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    /// Parses text such as `1 + z^2`, `7/2*z^3`, `-z + 3`.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = s.as_bytes();
        let mut starts = vec![0];
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !b"*/^".contains(&bytes[i - 1]) {
                starts.push(i);
            }
        }
        starts.push(bytes.len());
        let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
        for w in starts.windows(2) {
            let (deg, c) = parse_term(&s[w[0]..w[1]])?;
            *out.entry(deg).or_insert_with(Rat::zero) += c;
        }
        let len = out.keys().next_back().map_or(0, |&k| k + 1);
        let mut coeffs = vec![Rat::zero(); len];
        for (k, c) in out {
            coeffs[k] = c;
        }
        Ok(VermaVec::new(coeffs))
    }
}

fn parse_term(term: &str) -> Result<(usize, Rat)> {
    let bad = || Error::Parse(format!("bad term {term:?}"));
    let (neg, body) = match term.as_bytes().first() {
        Some(b'-') => (true, &term[1..]),
        Some(b'+') => (false, &term[1..]),
        _ => (false, term),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (deg, coef) = match body.split_once('z') {
        None => (0, crate::arith::parse_rat(body)?),
        Some((c, e)) => {
            let c = c.strip_suffix('*').unwrap_or(c);
            let coef = if c.is_empty() { Rat::one() } else { crate::arith::parse_rat(c)? };
            let deg = match e {
                "" => 1,
                _ => e.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
            };
            (deg, coef)
        }
    };
    Ok((deg, if neg { -coef } else { coef }))
}

impl fmt::Display for VermaVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Poly::new(self.coeffs.clone()).render("z"))
    }
}
