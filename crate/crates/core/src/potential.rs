//! Exact positive decimal potentials.
//!
//! Potentials are compared exactly. A value is stored as an integer
//! significand (decimal digits, no leading or trailing zeros) times a power
//! of ten, so `"1.50"`, `"1.5"` and `"15e-1"` are the same potential.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exponents beyond this bound are rejected so rendering stays bounded.
const MAX_EXPONENT: i64 = 4096;

/// A strictly positive exact decimal value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Potential {
    /// Significand digits, ASCII, first and last digit non-zero.
    digits: Box<str>,
    /// Power of ten applied to the significand.
    exponent: i64,
}

impl Potential {
    /// Builds a potential from a positive integer.
    pub fn from_u64(value: u64) -> Result<Self, Error> {
        value.to_string().parse()
    }

    /// Number of digits before the decimal point (may be zero or negative).
    fn magnitude(&self) -> i64 {
        self.digits.len() as i64 + self.exponent
    }
}

impl FromStr for Potential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let invalid = || Error::InvalidPotential(s.to_string());
        let text = s.trim();
        let (body, sign_negative) = match text.as_bytes().first() {
            Some(b'+') => (&text[1..], false),
            Some(b'-') => (&text[1..], true),
            _ => (text, false),
        };
        let (mantissa, exp_part) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (body, None),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(invalid());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let mut exponent: i64 = match exp_part {
            Some(e) => {
                let digits = e.strip_prefix(['+', '-']).unwrap_or(e);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(invalid());
                }
                e.parse::<i64>().map_err(|_| invalid())?
            }
            None => 0,
        };
        exponent -= frac_part.len() as i64;

        let all: String = int_part.chars().chain(frac_part.chars()).collect();
        let trimmed = all.trim_start_matches('0');
        if trimmed.is_empty() {
            return Err(Error::NonPositivePotential(s.to_string()));
        }
        if sign_negative {
            return Err(Error::NonPositivePotential(s.to_string()));
        }
        let significant = trimmed.trim_end_matches('0');
        exponent += (trimmed.len() - significant.len()) as i64;
        if exponent.abs() > MAX_EXPONENT {
            return Err(invalid());
        }
        Ok(Potential {
            digits: significant.into(),
            exponent,
        })
    }
}

impl Ord for Potential {
    fn cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(&other.magnitude()).then_with(|| {
            // Same number of integer digits: compare digit strings left-aligned.
            let a = self.digits.as_bytes();
            let b = other.digits.as_bytes();
            let len = a.len().max(b.len());
            (0..len)
                .map(|i| (a.get(i).copied().unwrap_or(b'0'), b.get(i).copied().unwrap_or(b'0')))
                .map(|(x, y)| x.cmp(&y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Potential {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders the normalized plain decimal form, e.g. `2000`, `1.5`, `0.001`.
impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent >= 0 {
            write!(f, "{}", self.digits)?;
            for _ in 0..self.exponent {
                f.write_str("0")?;
            }
            return Ok(());
        }
        let frac_len = (-self.exponent) as usize;
        if frac_len >= self.digits.len() {
            f.write_str("0.")?;
            for _ in 0..frac_len - self.digits.len() {
                f.write_str("0")?;
            }
            f.write_str(&self.digits)
        } else {
            let split = self.digits.len() - frac_len;
            write!(f, "{}.{}", &self.digits[..split], &self.digits[split..])
        }
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({self})")
    }
}

impl Serialize for Potential {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Potential {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        // Strings are canonical; bare JSON numbers are accepted as written.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        let text = match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s,
            Raw::Number(n) => n.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Potential {
        s.parse().unwrap()
    }

    #[test]
    fn normalizes_equivalent_spellings() {
        assert_eq!(p("1.50"), p("1.5"));
        assert_eq!(p("15e-1"), p("1.5"));
        assert_eq!(p("0002000"), p("2e3"));
        assert_eq!(p("+0.25"), p(".25"));
        assert_eq!(p("1.50").to_string(), "1.5");
        assert_eq!(p("2e3").to_string(), "2000");
        assert_eq!(p("1e-3").to_string(), "0.001");
        assert_eq!(p("12.034").to_string(), "12.034");
    }

    #[test]
    fn rejects_non_positive_and_garbage() {
        assert!(matches!("0".parse::<Potential>(), Err(Error::NonPositivePotential(_))));
        assert!(matches!(
            "0.000".parse::<Potential>(),
            Err(Error::NonPositivePotential(_))
        ));
        assert!(matches!("-1".parse::<Potential>(), Err(Error::NonPositivePotential(_))));
        for bad in ["", ".", "abc", "1.2.3", "1e", "e5", "1e+", "nan", "inf", "1,5"] {
            assert!(
                matches!(bad.parse::<Potential>(), Err(Error::InvalidPotential(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn ordering_is_numeric() {
        assert!(p("0.5") < p("1"));
        assert!(p("9") < p("10"));
        assert!(p("1.05") < p("1.5"));
        assert!(p("0.0011") > p("0.001"));
    }

    #[test]
    fn serde_accepts_strings_and_numbers() {
        let v: Vec<Potential> = serde_json::from_str(r#"["1.50", 2, 0.25]"#).unwrap();
        assert_eq!(v, vec![p("1.5"), p("2"), p("0.25")]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1.5","2","0.25"]"#);
    }

    proptest! {
        #[test]
        fn display_round_trips(int in 1u64..1_000_000, scale in 0u32..8) {
            let text = format!("{}e-{}", int, scale);
            let value = p(&text);
            prop_assert_eq!(p(&value.to_string()), value);
        }

        #[test]
        fn order_matches_integers(a in 1u64..100_000, b in 1u64..100_000) {
            prop_assert_eq!(Potential::from_u64(a).unwrap().cmp(&Potential::from_u64(b).unwrap()), a.cmp(&b));
        }
    }
}
