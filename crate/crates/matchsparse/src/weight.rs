//! Exact rational arithmetic helpers.
//!
//! Weights, probabilities, and all fractional assignments are
//! [`num_rational::BigRational`] values; binary floating point never enters a
//! comparison that decides an algorithmic branch. Decimal strings parse
//! exactly (`"3.25"` → `13/4`), and rationals serialize as `"num/den"`
//! strings so reports stay exact and byte-stable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Exact rational scalar used throughout the crate.
pub type Ratio = BigRational;

/// Rational from an integer.
pub fn ratio_int(n: i64) -> Ratio {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Ratio {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a decimal or fraction string into an exact rational.
///
/// Accepts `"7"`, `"3.25"`, `"-0.5"`, and `"13/4"`.
pub fn parse_ratio(s: &str) -> Result<Ratio> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty number"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(Error::invalid(format!("bad decimal {s:?}")));
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        },
        frac_part
    );
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::invalid(format!("bad decimal {s:?}")))?;
    let d = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(n, d))
}

/// Formats a rational as `"num/den"` (reduced; `"num"` when integral).
pub fn ratio_str(r: &Ratio) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64, for display and statistics only.
pub fn ratio_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `true` iff `0 <= r <= 1`.
pub fn is_probability(r: &Ratio) -> bool {
    !r.is_negative() && *r <= ratio_int(1)
}

/// Exact nonnegative integer power.
pub fn ratio_pow(r: &Ratio, n: u32) -> Ratio {
    Ratio::new(r.numer().pow(n), r.denom().pow(n))
}

/// Exact ceiling of `1 / r` for positive `r`, as u64.
pub fn ceil_inverse(r: &Ratio) -> u64 {
    assert!(r.is_positive(), "ceil_inverse needs a positive argument");
    r.recip().ceil().to_integer().to_u64().expect("fits u64")
}

/// Serde adapter: rationals as `"num/den"` strings.
pub mod ratio_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&ratio_str(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Ratio, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Ratio>`.
pub mod ratio_vec_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Ratio], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ratio_str))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Ratio>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| parse_ratio(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_ratio("3.25").unwrap(), ratio(13, 4));
        assert_eq!(parse_ratio("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_ratio("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_ratio("7").unwrap(), ratio_int(7));
        assert_eq!(parse_ratio(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_ratio("13/4").unwrap(), ratio(13, 4));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratio("").is_err());
        assert!(parse_ratio("1.2.3").is_err());
        assert!(parse_ratio("a").is_err());
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("1.-2").is_err());
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(ratio_str(&ratio(2, 4)), "1/2");
        assert_eq!(ratio_str(&ratio(8, 4)), "2");
    }

    #[test]
    fn probability_range() {
        assert!(is_probability(&ratio(1, 2)));
        assert!(is_probability(&ratio_int(1)));
        assert!(is_probability(&ratio_int(0)));
        assert!(!is_probability(&ratio(3, 2)));
        assert!(!is_probability(&ratio(-1, 2)));
    }
}
