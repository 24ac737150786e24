//! Exact scalar fields used for holonomy coordinates.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// An ordered field with exact arithmetic.
///
/// Every algorithm in this crate decides equalities and signs of
/// expressions built from edge vectors, so the scalar type must never round.
/// Fixed-width rationals (`Ratio<i64>`, `Ratio<i128>`) are accepted for speed
/// on small inputs; they panic on overflow rather than silently wrapping in
/// debug builds, so `BigRational` is the default.
pub trait ExactField:
    Clone + Ord + Hash + Debug + Display + FromStr + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar type")
    }

    /// `num / den` with `den != 0`.
    fn frac(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn half() -> Self {
        Self::frac(1, 2)
    }

    fn is_integer_valued(&self) -> bool;

    /// Numerator and denominator in lowest terms with a positive denominator.
    fn to_fraction_string(&self) -> String;
}

macro_rules! impl_fixed_ratio {
    ($int:ty) => {
        impl ExactField for Ratio<$int> {
            fn is_integer_valued(&self) -> bool {
                self.is_integer()
            }

            fn to_fraction_string(&self) -> String {
                let r = self.reduced();
                if r.is_integer() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    };
}

impl_fixed_ratio!(i64);
impl_fixed_ratio!(i128);

impl ExactField for BigRational {
    fn is_integer_valued(&self) -> bool {
        self.is_integer()
    }

    fn to_fraction_string(&self) -> String {
        let r = self.reduced();
        if r.is_integer() {
            format!("{}", r.numer())
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational<T: ExactField>(text: &str) -> Option<T> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    // Route through the decimal text of the reduced value so every scalar
    // type parses the same way.
    let r = BigRational::new(num, den);
    let s = if r.is_integer() { format!("{}", r.numer()) } else { format!("{}/{}", r.numer(), r.denom()) };
    T::from_str(&s).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_strings_are_reduced() {
        let r: BigRational = parse_rational("2/4").unwrap();
        assert_eq!(r.to_fraction_string(), "1/2");
        let r: Ratio<i64> = parse_rational("-6/3").unwrap();
        assert_eq!(r.to_fraction_string(), "-2");
        let r: Ratio<i128> = parse_rational("3/-9").unwrap();
        assert_eq!(r.to_fraction_string(), "-1/3");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational::<BigRational>("1/0").is_none());
        assert!(parse_rational::<BigRational>("x").is_none());
        assert!(parse_rational::<BigRational>("0.5").is_none());
    }
}
