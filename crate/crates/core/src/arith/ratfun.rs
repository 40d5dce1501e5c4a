use std::fmt;

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Rational function `num/den` in `ν`, kept canonical: `den` monic and
/// coprime to `num`, zero stored as `0/1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc = den.leading().unwrap().clone();
        if !lc.is_one() {
            num = num.scale(&lc.recip());
        }
        Ok(RatFun { num, den: den.monic() })
    }

    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.den == other.den {
            return RatFun::new(&self.num + &other.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RatFun::new(num, &self.den * &other.den).unwrap()
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero();
        }
        // Cross-cancel first so the final gcd sees small inputs.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_rem(&g1).0;
        let d2 = other.den.div_rem(&g1).0;
        let n2 = other.num.div_rem(&g2).0;
        let d1 = self.den.div_rem(&g2).0;
        RatFun::new(&n1 * &n2, &d1 * &d2).unwrap()
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn recip(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `f(ν + s)`; shifting preserves both monicity and coprimality.
    pub fn shift(&self, s: &Rat) -> RatFun {
        RatFun { num: self.num.shift(s), den: self.den.shift(s) }
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.clone()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Poles at integers `n ≥ 0`, ascending.
    pub fn nonneg_integer_poles(&self) -> Vec<u64> {
        self.den.nonneg_integer_roots()
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn lin(c: i64) -> Poly {
        Poly::from_ints(&[c, 1])
    }

    fn rf(num: Poly, den: Poly) -> RatFun {
        RatFun::new(num, den).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let nu = RatFun::from_poly(Poly::var());
        assert_eq!(nu.add(&RatFun::one()), RatFun::from_poly(lin(1)));

        let a = rf(lin(1), lin(2));
        let b = RatFun::from_poly(lin(2));
        assert_eq!(a.mul(&b), RatFun::from_poly(lin(1)));

        let inv = rf(Poly::one(), Poly::var());
        assert_eq!(inv.div(&inv).unwrap(), RatFun::one());
        assert_eq!(inv.div(&RatFun::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_form() {
        // (2ν+2)/(4ν+4) == 1/2
        let f = rf(Poly::from_ints(&[2, 2]), Poly::from_ints(&[4, 4]));
        assert_eq!(f, RatFun::constant(rat(1, 2)));
        assert!(f.den().is_monic());
        let g = rf(lin(1), Poly::from_ints(&[4, 2]));
        assert_eq!(g.num(), &Poly::new(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(RatFun::new(Poly::zero(), lin(5)).unwrap(), RatFun::zero());
        assert!(RatFun::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn evaluation() {
        let f = rf(lin(1), lin(2));
        assert_eq!(f.eval(&rat_int(3)).unwrap(), rat(4, 5));
        assert_eq!(f.eval(&rat_int(-2)), Err(Error::Pole(rat_int(-2))));
        assert_eq!(RatFun::zero().eval(&rat_int(7)).unwrap(), rat_int(0));
    }

    #[test]
    fn shift_keeps_canonical() {
        let f = rf(lin(1), &lin(2) * &lin(3));
        let s = f.shift(&rat_int(-2));
        assert_eq!(s, rf(lin(-1), &lin(0) * &lin(1)));
        assert_eq!(s.nonneg_integer_poles(), vec![0]);
    }
}
