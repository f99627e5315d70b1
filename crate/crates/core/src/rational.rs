//! Parsing and formatting of exact rational parameters.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{BigRational, Error, Rational, Result};

/// Parses `"p/q"`, a plain integer, or a finite decimal such as `"0.125"`.
///
/// Decimals are read digit by digit into an exact fraction; nothing goes
/// through `f64`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: i128 = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let den: i128 = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("bad rational {t:?}")));
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("bad rational {t:?}")));
    }
    if frac_part.len() > 30 {
        return Err(Error::Parse(format!("too many decimal places in {t:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i128 = digits
        .parse()
        .map_err(|_| Error::Parse(format!("rational {t:?} out of range")))?;
    let den = 10i128
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(|| Error::Parse(format!("rational {t:?} out of range")))?;
    let r = Rational::new(num, den);
    Ok(if negative { -r } else { r })
}

/// `p/q` in lowest terms, or just `p` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_big_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn big_from_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub(crate) fn is_positive(r: &Rational) -> bool {
    *r > Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), Rational::new(3, 4));
        assert_eq!(parse_rational("6/8").unwrap(), Rational::new(3, 4));
        assert_eq!(parse_rational("2").unwrap(), Rational::from_integer(2));
        assert_eq!(parse_rational("0.1").unwrap(), Rational::new(1, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), Rational::new(-5, 4));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&Rational::new(10, 4)), "5/2");
        assert_eq!(format_rational(&Rational::from_integer(7)), "7");
    }
}
