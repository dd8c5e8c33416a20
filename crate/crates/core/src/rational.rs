//! Exact rational helpers.
//!
//! Everything in this crate is computed over [`Rational`] (`Ratio<i64>`) with
//! floor evaluations widened to `i128`, so no wall crossing or jump is ever
//! decided by floating point.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Builds `num/den`, rejecting a zero denominator.
pub fn ratio(num: i64, den: i64) -> Result<Rational> {
    if den == 0 {
        return Err(Error::ParseRational(format!("{num}/{den}")));
    }
    Ok(Rational::new(num, den))
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

/// Reduced `"p/q"`; integers print without a denominator.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// `floor(k * theta / 2)`.
pub fn floor_half_multiple(theta: &Rational, k: u64) -> i64 {
    let num = i128::from(*theta.numer()) * i128::from(k);
    let den = 2 * i128::from(*theta.denom());
    num.div_euclid(den) as i64
}

/// `k * theta` reduced into `[0, 2)`.
pub fn multiple_mod2(theta: &Rational, k: u64) -> Rational {
    let den = i128::from(*theta.denom());
    let num = (i128::from(*theta.numer()) * i128::from(k)).rem_euclid(2 * den);
    Rational::new(num as i64, den as i64)
}

/// `x` reduced into `[0, 2)`.
pub fn rem2(x: &Rational) -> Rational {
    let two = Rational::from_integer(2);
    x - two * (x / two).floor()
}

/// Index of the strip `[2m, 2m + 2)` containing `x`.
pub fn wall_index(x: &Rational) -> i64 {
    let num = i128::from(*x.numer());
    let den = 2 * i128::from(*x.denom());
    num.div_euclid(den) as i64
}

/// True when `x` is an even integer.
pub fn is_even_integer(x: &Rational) -> bool {
    x.is_integer() && x.numer().is_even()
}

pub fn floor(x: &Rational) -> i64 {
    x.floor().to_integer()
}

/// Least common multiple of the denominators, 1 for an empty input.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values.into_iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod as_string {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of `"p/q"` strings.
pub mod vec_as_string {
    use serde::ser::SerializeSeq;
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("7/10").unwrap(), r(7, 10));
        assert_eq!(parse_rational(" -14/20 ").unwrap(), r(-7, 10));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&r(-7, 20)), "-7/20");
        assert_eq!(format_rational(&r(4, 2)), "2");
    }

    #[test]
    fn floors() {
        // floor(k * 7/20)
        let theta = r(7, 10);
        let got: Vec<i64> = (1..=9).map(|k| floor_half_multiple(&theta, k)).collect();
        assert_eq!(got, vec![0, 0, 1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(floor(&r(-1, 5)), -1);
        assert_eq!(wall_index(&r(19, 10)), 0);
        assert_eq!(wall_index(&r(21, 10)), 1);
        assert_eq!(wall_index(&r(-1, 10)), -1);
    }

    #[test]
    fn reductions_mod_two() {
        assert_eq!(multiple_mod2(&r(7, 10), 3), r(1, 10));
        assert_eq!(multiple_mod2(&r(3, 10), 3), r(9, 10));
        assert_eq!(rem2(&r(-4, 5)), r(6, 5));
        assert_eq!(rem2(&r(21, 10)), r(1, 10));
        assert!(is_even_integer(&r(-4, 1)));
        assert!(!is_even_integer(&r(3, 1)));
        assert_eq!(common_denominator(&[r(1, 4), r(1, 6)]), 12);
    }
}
