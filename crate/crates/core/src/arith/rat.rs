use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Exact rational scalar. `Ratio::new` keeps it reduced with a positive
/// denominator, and `Display` prints `p/q` (or `p` when `q = 1`).
pub type Rat = BigRational;

/// Reduced rational `num/den`; the sign ends up on the numerator.
pub fn rat_normalize(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rat> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rat::new(num.into(), den))
}

/// Shorthand for small literals; panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    rat_normalize(num, den).expect("literal rational with zero denominator")
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    rat_normalize(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        assert_eq!(rat_normalize(6, 4).unwrap().to_string(), "3/2");
        assert_eq!(rat_normalize(-2, -4).unwrap().to_string(), "1/2");
        let z = rat_normalize(0, 5).unwrap();
        assert_eq!(z.to_string(), "0");
        assert_eq!(*z.denom(), BigInt::from(1));
        assert_eq!(rat_normalize(3, -6).unwrap().to_string(), "-1/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(rat_normalize(1, 0), Err(Error::ZeroDenominator));
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn parses() {
        assert_eq!(parse_rat("7/3").unwrap(), rat(7, 3));
        assert_eq!(parse_rat(" -5 ").unwrap(), rat_int(-5));
        assert_eq!(parse_rat("4/-8").unwrap(), rat(-1, 2));
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1.5").is_err());
    }
}
