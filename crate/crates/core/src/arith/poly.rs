use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rat::{rat_int, Rat};

/// Univariate polynomial over the rationals; `coeffs[i]` multiplies `ν^i`.
/// The zero polynomial is the empty list, otherwise the last entry is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// `ν`
    pub fn var() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// `ν + c`
    pub fn linear(c: Rat) -> Self {
        Poly::new(vec![c, Rat::one()])
    }

    /// Falling factorial `ν(ν-1)…(ν-k+1)`; `1` for `k = 0`.
    pub fn falling_factorial(k: u32) -> Self {
        (0..k).fold(Poly::one(), |acc, j| &acc * &Poly::linear(-rat_int(j as i64)))
    }

    /// Rising product `(ν+c)(ν+c+1)…(ν+c+k-1)`; `1` for `k = 0`.
    pub fn rising(c: &Rat, k: u32) -> Self {
        (0..k).fold(Poly::one(), |acc, j| {
            &acc * &Poly::linear(c + rat_int(j as i64))
        })
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) if !lc.is_one() => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// `p(ν + s)`
    pub fn shift(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return self.clone();
        }
        let step = Poly::linear(s.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * &step) + &Poly::constant(c.clone()))
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let inv_lc = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &inv_lc;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * b;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Integer roots `n ≥ 0`, ascending.
    pub fn nonneg_integer_roots(&self) -> Vec<u64> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let p = self.monic();
        let c = p.coeffs();
        // Descartes: no positive roots without a sign change.
        if c.iter().all(|a| !a.is_negative()) {
            return if c[0].is_zero() { vec![0] } else { Vec::new() };
        }
        let bound = fujiwara_bound(c);
        (0..=bound)
            .filter(|&n| p.eval(&Rat::from_integer(BigInt::from(n))).is_zero())
            .collect()
    }

    /// Coefficient list such as `[1, 0, -1/2]`.
    pub fn to_coeff_list(&self) -> String {
        let items: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        format!("[{}]", items.join(", "))
    }

    /// Human-readable rendering in the named variable, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

/// Upper bound on the absolute value of every root of a monic polynomial.
fn fujiwara_bound(c: &[Rat]) -> u64 {
    let d = c.len() - 1;
    let mut best = BigInt::zero();
    for k in 1..=d {
        let mut q = c[d - k].abs();
        if k == d {
            q /= rat_int(2);
        }
        let ceil = q.ceil().to_integer();
        let mut r = ceil.nth_root(k as u32);
        if r.pow(k as u32) < ceil {
            r += 1;
        }
        best = best.max(r);
    }
    let bound: BigInt = best * 2;
    u64::try_from(bound).unwrap_or(u64::MAX)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("ν"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rat::zero();
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}
