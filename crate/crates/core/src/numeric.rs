//! Exact decimal parsing and half-up rounding for report output.
//!
//! All share and cost arithmetic happens on [`BigRational`]; conversion to
//! decimal text only happens when a value leaves the library.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Parse a plain decimal literal such as `1234.50` or `-5` into an exact rational.
///
/// Accepts an optional sign, digits, and an optional fractional part using `.`.
/// Thousands separators and exponents are rejected.
pub fn parse_decimal(raw: &str) -> Option<BigRational> {
    let s = raw.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Round to `places` decimal digits, ties away from zero, returning the scaled integer.
///
/// `round_scaled(7/3, 2)` is `233`, i.e. 2.33.
pub fn round_scaled(value: &BigRational, places: u32) -> BigInt {
    let scale = num_traits::pow(BigInt::from(10u32), places as usize);
    let scaled = value * BigRational::from_integer(scale);
    let magnitude = scaled.abs();
    let (q, r) = magnitude.numer().div_rem(magnitude.denom());
    // r/d >= 1/2  <=>  2r >= d
    let bump = (&r + &r) >= *magnitude.denom();
    let rounded = if bump { q + BigInt::one() } else { q };
    if scaled.is_negative() {
        -rounded
    } else {
        rounded
    }
}

/// Round half-up (away from zero) to `places` digits and return the exact rounded value.
pub fn round_half_up(value: &BigRational, places: u32) -> BigRational {
    let scale = num_traits::pow(BigInt::from(10u32), places as usize);
    BigRational::new(round_scaled(value, places), scale)
}

/// Format with exactly `places` decimals after half-up rounding.
pub fn format_fixed(value: &BigRational, places: u32) -> String {
    let scaled = round_scaled(value, places);
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let body = if places == 0 {
        digits
    } else {
        let p = places as usize;
        let padded = format!("{digits:0>width$}", width = p + 1);
        let (i, f) = padded.split_at(padded.len() - p);
        format!("{i}.{f}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Format as a reduced fraction (`1/6`, `3`, `-3/4`).
pub fn format_fraction(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Lossy conversion for summary statistics in JSON output.
pub fn to_f64(value: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// Build `n/d` from machine integers.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact arithmetic mean; `None` for an empty slice.
pub fn mean(values: &[BigRational]) -> Option<BigRational> {
    if values.is_empty() {
        return None;
    }
    let sum: BigRational = values.iter().sum();
    Some(sum / BigRational::from_integer(BigInt::from(values.len())))
}

/// Exact median of an unsorted slice (mean of the middle two for even counts).
pub fn median(values: &[BigRational]) -> Option<BigRational> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort();
    Some(median_sorted(&sorted))
}

pub(crate) fn median_sorted(sorted: &[BigRational]) -> BigRational {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2].clone()
    } else {
        (&sorted[n / 2 - 1] + &sorted[n / 2]) / BigRational::from_integer(BigInt::from(2))
    }
}
